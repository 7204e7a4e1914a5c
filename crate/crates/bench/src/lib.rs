//! Shared fixtures for the benchmark suite.
//!
//! * Prebuilt field contexts and group shapes for the standard scenarios.
//! * Kept in a library so benches stay declarative.

use moduli_census::{Budget, CensusConstraint, FieldCtx, GroupSpec, StrataWeights};

/// Field, group, constraint and weights for one benched family.
pub struct Family {
    pub ctx: FieldCtx,
    pub group: GroupSpec,
    pub cc: CensusConstraint,
    pub weights: StrataWeights,
    pub budget: Budget,
}

/// Double covers over the three-element field.
pub fn double_cover_family() -> Family {
    family(3, 1, &[2])
}

/// Biquadratic covers over the five-element field.
pub fn biquadratic_family() -> Family {
    family(5, 1, &[2, 2])
}

/// Triple covers over the seven-element field.
pub fn triple_cover_family() -> Family {
    family(7, 1, &[3])
}

fn family(p: u64, ext: u32, factors: &[u64]) -> Family {
    let ctx = moduli_census::ffield::make_field(p, ext).expect("valid field");
    let group = GroupSpec::new(factors.to_vec()).expect("valid group");
    let weights = StrataWeights::hurwitz(&group);
    Family { ctx, group, cc: CensusConstraint::none(), weights, budget: Budget::unlimited() }
}
