//! Exact census machinery for abelian Kummer covers of the projective line
//! over a finite field.
//!
//! A cover is cut out by equations `y_j^{r_j} = c_j F_j(x)` where the
//! `r_1 | r_2 | ... | r_n` are the invariant factors of a finite abelian
//! group, each `F_j` is an `r_j`-power-free polynomial over `F_q`, and
//! `q = 1 (mod r_n)`.  The crate provides
//!
//! * [`ffield`]: small finite fields with dense discrete-log tables,
//! * [`polyring`]: monic polynomial arithmetic, factorization, enumeration,
//! * [`abgroup`]: finite abelian groups, their subgroup lattices and the
//!   Möbius function of the lattice,
//! * [`covers`]: cover invariants, point counts, zeta numerators,
//! * [`census`]: exact curve counts by direct enumeration, by Möbius
//!   inversion over the subgroup lattice, and point-count histograms,
//! * [`cyclo`] and [`genfun`]: cyclotomic-coefficient generating series whose
//!   coefficients reproduce the census counts,
//! * [`asymptotics`]: leading constants, main terms and the limiting
//!   point-count distribution,
//! * [`verify`]: self-check suites shared by the CLI and the test suite.

pub mod abgroup;
pub mod asymptotics;
pub mod census;
pub mod covers;
pub mod cyclo;
pub mod error;
pub mod ffield;
pub mod genfun;
pub mod polyring;
pub mod verify;

pub use abgroup::{GroupSpec, GroupVec, Subgroup};
pub use asymptotics::{MainTerm, ScaledL, SumLaw, XiLaw};
pub use census::{Budget, CensusConstraint, CensusPath, StrataVector, StrataWeights};
pub use covers::{CoverRecord, KummerCover, ProjPoint, StrataDecomposition};
pub use cyclo::{CycloField, CycloNum, CycloSeries};
pub use error::{Error, Result};
pub use ffield::{CharExponent, FieldCtx, FieldElem};
pub use genfun::{GrowthTerm, PoleOrders, TwistSpec};
pub use polyring::MonicPoly;
pub use verify::CheckResult;


