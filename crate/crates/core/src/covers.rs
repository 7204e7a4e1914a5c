//! Abelian Kummer covers of the projective line and their point counts.
//!
//! A cover is cut out by `y_j^{r_j} = c_j F_j(x)` for `j = 1..n`, with the
//! `F_j` monic and jointly encoded by a strata decomposition: squarefree,
//! pairwise coprime monic `f_a` indexed by nonzero group vectors `a`, with
//! `F_j = prod_a f_a^{a_j}`.  The module provides:
//!
//! - [`StrataDecomposition`] plus validation and the composite polynomials,
//! - the geometric Galois subgroup generated by the support,
//! - group-level and Galois-aware genus formulas,
//! - exact fiber sizes over rational points (including infinity, via
//!   coefficient reversal) and point counts over extension fields,
//! - zeta numerators from point counts by Newton's identities, checked
//!   against the functional equation,
//! - [`CoverRecord`], a serde-friendly exact serialization.

use crate::abgroup::{GroupSpec, GroupVec, Subgroup};
use crate::error::{Error, Result};
use crate::ffield::{make_field, FieldCtx, FieldElem};
use crate::polyring::{self, MonicPoly};
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// A rational point of the projective line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjPoint {
    Finite(FieldElem),
    Infinity,
}

/// Branch data of a cover: monic squarefree pairwise coprime `f_a` per
/// nonzero group vector `a`, trivial parts omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataDecomposition {
    parts: Vec<(GroupVec, MonicPoly)>,
}

impl StrataDecomposition {
    pub fn parts(&self) -> &[(GroupVec, MonicPoly)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Composite polynomial `F_j = prod_a f_a^{a_j}`.
    pub fn composite(&self, ctx: &FieldCtx, j: usize) -> MonicPoly {
        let mut out = MonicPoly::one();
        for (alpha, f) in &self.parts {
            let a = alpha.0[j];
            if a > 0 {
                out = out.mul(ctx, &f.pow(ctx, a as u32));
            }
        }
        out
    }

    /// Exact degrees of the composites `F_j`.
    pub fn total_degrees(&self, rank: usize) -> Vec<u64> {
        let mut out = vec![0u64; rank];
        for (alpha, f) in &self.parts {
            for (j, d) in out.iter_mut().enumerate() {
                *d += alpha.0[j] * f.degree() as u64;
            }
        }
        out
    }

    /// Branch vector at infinity: `d_j = sum_a a_j deg f_a  (mod r_j)`.
    pub fn degree_vector(&self, group: &GroupSpec) -> GroupVec {
        group.reduce(&self.total_degrees(group.rank()))
    }
}

/// A Kummer cover `y_j^{r_j} = c_j F_j(x)` in strata form.
#[derive(Debug, Clone)]
pub struct KummerCover {
    group: GroupSpec,
    strata: StrataDecomposition,
    lead: Vec<FieldElem>,
    galois: Subgroup,
}

impl KummerCover {
    /// Builds a cover from its strata decomposition and leading classes.
    pub fn from_strata(
        ctx: &FieldCtx,
        group: GroupSpec,
        parts: Vec<(GroupVec, MonicPoly)>,
        lead: Vec<FieldElem>,
    ) -> Result<KummerCover> {
        if (ctx.q() - 1) % group.exponent() != 0 {
            return Err(Error::BadCharOrder {
                r: group.exponent(),
                qm1: ctx.q() - 1,
            });
        }
        if lead.len() != group.rank() {
            return Err(Error::InvalidCover(format!(
                "{} leading coefficients for rank {}",
                lead.len(),
                group.rank()
            )));
        }
        for c in &lead {
            if c.is_zero() {
                return Err(Error::InvalidCover("zero leading coefficient".into()));
            }
        }
        let mut kept: Vec<(GroupVec, MonicPoly)> = Vec::new();
        for (alpha, f) in parts {
            if f.degree() == 0 {
                continue;
            }
            if alpha.0.len() != group.rank() {
                return Err(Error::InvalidCover("stratum vector of wrong rank".into()));
            }
            let alpha = group.reduce(&alpha.0);
            if alpha.is_zero() {
                return Err(Error::InvalidCover("trivial stratum vector".into()));
            }
            if !polyring::is_squarefree(ctx, &f) {
                return Err(Error::InvalidCover("stratum polynomial not squarefree".into()));
            }
            kept.push((alpha, f));
        }
        kept.sort_by(|a, b| a.0.cmp(&b.0));
        for w in kept.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidCover("duplicate stratum vector".into()));
            }
        }
        for i in 0..kept.len() {
            for j in i + 1..kept.len() {
                let g = polyring::raw_gcd_monic(ctx, kept[i].1.coeffs(), kept[j].1.coeffs());
                if g.len() != 1 {
                    return Err(Error::InvalidCover("stratum polynomials share a root".into()));
                }
            }
        }
        let gens: Vec<GroupVec> = kept.iter().map(|(a, _)| a.clone()).collect();
        let galois = group.subgroup_generated(&gens);
        Ok(KummerCover {
            group,
            strata: StrataDecomposition { parts: kept },
            lead,
            galois,
        })
    }

    /// Builds a cover from the composite polynomials `F_j` by factoring them.
    ///
    /// Fails when some `F_j` is not `r_j`-th-power-free.
    pub fn from_composites(
        ctx: &FieldCtx,
        group: GroupSpec,
        composites: &[MonicPoly],
        lead: Vec<FieldElem>,
    ) -> Result<KummerCover> {
        if composites.len() != group.rank() {
            return Err(Error::InvalidCover(format!(
                "{} composite polynomials for rank {}",
                composites.len(),
                group.rank()
            )));
        }
        let table = polyring::irreducibles_up_to(ctx, 1);
        // multiplicity vector per irreducible factor
        let mut by_prime: Vec<(MonicPoly, Vec<u64>)> = Vec::new();
        for (j, fj) in composites.iter().enumerate() {
            if fj.degree() == 0 {
                continue;
            }
            for (p, mult) in polyring::factorize(ctx, &table, fj)? {
                if mult as u64 >= group.factors()[j] {
                    return Err(Error::InvalidCover(format!(
                        "composite {} is not power-free: multiplicity {}",
                        j, mult
                    )));
                }
                match by_prime.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, v)) => v[j] = mult as u64,
                    None => {
                        let mut v = vec![0u64; group.rank()];
                        v[j] = mult as u64;
                        by_prime.push((p, v));
                    }
                }
            }
        }
        // group primes by their multiplicity vector
        let mut parts: Vec<(GroupVec, MonicPoly)> = Vec::new();
        for (p, v) in by_prime {
            let alpha = GroupVec(v);
            match parts.iter_mut().find(|(a, _)| *a == alpha) {
                Some((_, f)) => *f = f.mul(ctx, &p),
                None => parts.push((alpha, p)),
            }
        }
        KummerCover::from_strata(ctx, group, parts, lead)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn strata(&self) -> &StrataDecomposition {
        &self.strata
    }

    pub fn lead(&self) -> &[FieldElem] {
        &self.lead
    }

    pub fn is_monic(&self) -> bool {
        self.lead.iter().all(|c| *c == FieldElem::ONE)
    }

    /// Same strata, different twist constants.
    pub fn with_lead(&self, lead: Vec<FieldElem>) -> Result<KummerCover> {
        if lead.len() != self.group.rank() {
            return Err(Error::InvalidCover("lead length must match group rank".into()));
        }
        if lead.iter().any(|c| *c == FieldElem::ZERO) {
            return Err(Error::InvalidCover("lead coefficients must be nonzero".into()));
        }
        Ok(KummerCover { group: self.group.clone(), strata: self.strata.clone(), lead, galois: self.galois.clone() })
    }

    /// Geometric Galois group: the subgroup generated by the support.
    pub fn galois_subgroup(&self) -> &Subgroup {
        &self.galois
    }

    /// Genus charge at full group level, possibly non-integral:
    /// `(sum_a c(a) deg f_a + c(d) + 2 - 2|G|) / 2` with the default weights
    /// `c(v) = |G| - |G|/order(v)`.
    pub fn virtual_genus(&self) -> Ratio<i64> {
        let g = &self.group;
        let mut num: i64 = 0;
        for (alpha, f) in self.strata.parts() {
            num += g.hurwitz_weight(alpha) as i64 * f.degree() as i64;
        }
        num += g.hurwitz_weight(&self.strata.degree_vector(g)) as i64;
        num += 2 - 2 * g.order() as i64;
        Ratio::new(num, 2)
    }

    /// Genus of the actual curve, computed within the Galois subgroup.
    pub fn true_genus(&self) -> Result<u64> {
        let h = self.galois.order() as i64;
        let mut num: i64 = 0;
        for (alpha, f) in self.strata.parts() {
            let e = self.group.element_order(alpha) as i64;
            num += (h - h / e) * f.degree() as i64;
        }
        let e_inf = self.group.element_order(&self.strata.degree_vector(&self.group)) as i64;
        num += h - h / e_inf;
        num += 2 - 2 * h;
        if num % 2 != 0 || num < 0 {
            return Err(Error::Inconsistent(format!(
                "genus charge {num}/2 is not a nonnegative integer"
            )));
        }
        Ok((num / 2) as u64)
    }

    /// Number of rational points of the curve above one point of the line.
    ///
    /// "The curve" is the smooth model of one irreducible component of the
    /// cover scheme over the given field; for covers whose support generates
    /// the group this is the cover itself.  The fiber has size `|H|/e` when
    /// every character vanishing on the local branch vector also vanishes on
    /// the local unit data, and size `0` otherwise, where `H` is the
    /// geometric Galois group and `e` the local inertia order.
    pub fn fiber_count(&self, ctx: &FieldCtx, pt: ProjPoint) -> u64 {
        let view = self.view(ctx, &identity_map(ctx));
        match pt {
            ProjPoint::Finite(x0) => view.fiber_at(ctx, x0),
            ProjPoint::Infinity => view.fiber_at_infinity(),
        }
    }

    /// Total number of rational points over the degree-`m` extension, with
    /// the same one-component reading of the system as [`Self::fiber_count`].
    pub fn point_count(&self, ctx: &FieldCtx, m: u32) -> Result<u64> {
        if m == 1 {
            let view = self.view(ctx, &identity_map(ctx));
            return Ok(view.count_all(ctx));
        }
        let (ext, map) = ctx.extension(m)?;
        let view = self.view(&ext, &map);
        Ok(view.count_all(&ext))
    }

    fn view(&self, ext: &FieldCtx, map: &[FieldElem]) -> CoverView {
        let rn = self.group.exponent();
        let polys: Vec<(GroupVec, Vec<FieldElem>)> = self
            .strata
            .parts()
            .iter()
            .map(|(a, f)| (a.clone(), f.embedded(map)))
            .collect();
        let members: Vec<GroupVec> = self.group.elements();
        // character weight of the leading coefficients, per dual vector
        let lead_dlog: Vec<u64> = self
            .lead
            .iter()
            .map(|c| ext.dlog(map[c.index() as usize]) % rn)
            .collect();
        let mut lead_part = Vec::with_capacity(members.len());
        for m in &members {
            let mut w = 0u64;
            for (j, &rj) in self.group.factors().iter().enumerate() {
                w = (w + rn / rj * (m.0[j] % rj) % rn * (lead_dlog[j] % rn)) % rn;
            }
            lead_part.push(w);
        }
        CoverView {
            group: self.group.clone(),
            polys,
            members,
            lead_part,
            h: self.galois.order(),
            deg_vec: self.strata.degree_vector(&self.group),
        }
    }

    /// Zeta numerator coefficients `[1, a_1, ..., a_{2g}]` from exact point
    /// counts over the first `2g` extensions, validated against the
    /// functional equation.
    pub fn zeta_numerator(&self, ctx: &FieldCtx) -> Result<Vec<BigInt>> {
        let g = self.true_genus()?;
        if g == 0 {
            return Ok(vec![BigInt::one()]);
        }
        let q = BigInt::from(ctx.q());
        let mut power_sums: Vec<BigRational> = Vec::with_capacity(2 * g as usize);
        for m in 1..=2 * g as u32 {
            let n_m = self.point_count(ctx, m)?;
            let s = q.pow(m) + 1 - BigInt::from(n_m);
            power_sums.push(BigRational::from_integer(s));
        }
        // Newton's identities: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} s_i.
        let mut elem: Vec<BigRational> = vec![BigRational::one()];
        for k in 1..=2 * g as usize {
            let mut acc = BigRational::zero();
            for i in 1..=k {
                let term = &elem[k - i] * &power_sums[i - 1];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            elem.push(acc / BigRational::from_integer(BigInt::from(k)));
        }
        let mut coeffs = Vec::with_capacity(2 * g as usize + 1);
        for (k, e) in elem.iter().enumerate() {
            if !e.is_integer() {
                return Err(Error::Inconsistent(format!(
                    "zeta coefficient {k} is not an integer: {e}"
                )));
            }
            let v = e.to_integer();
            coeffs.push(if k % 2 == 0 { v } else { -v });
        }
        for i in 0..=g as usize {
            let expect = &coeffs[i] * q.pow((g as usize - i) as u32);
            if coeffs[2 * g as usize - i] != expect {
                return Err(Error::Inconsistent(format!(
                    "functional equation fails at index {i}"
                )));
            }
        }
        Ok(coeffs)
    }

    /// Exact serializable form of the cover.
    pub fn record(&self, ctx: &FieldCtx) -> CoverRecord {
        CoverRecord {
            q: ctx.q(),
            p: ctx.p(),
            ext_degree: ctx.ext_degree(),
            invariant_factors: self.group.factors().to_vec(),
            strata: self
                .strata
                .parts()
                .iter()
                .map(|(a, f)| (a.0.clone(), f.coeffs().iter().map(|c| c.index() as u32).collect()))
                .collect(),
            lead: self.lead.iter().map(|c| c.index() as u32).collect(),
        }
    }
}

fn identity_map(ctx: &FieldCtx) -> Vec<FieldElem> {
    (0..ctx.q() as usize).map(|i| FieldElem(i as u32)).collect()
}

/// Cover data embedded into one fixed field, ready for fiber evaluation.
struct CoverView {
    group: GroupSpec,
    polys: Vec<(GroupVec, Vec<FieldElem>)>,
    members: Vec<GroupVec>,
    lead_part: Vec<u64>,
    h: u64,
    deg_vec: GroupVec,
}

impl CoverView {
    /// Fiber size above a finite point.
    fn fiber_at(&self, ctx: &FieldCtx, x0: FieldElem) -> u64 {
        let rn = self.group.exponent();
        let mut vvec = self.group.zero();
        // character weight contributed by the prime-to-x0 parts
        let mut dlogs: Vec<(usize, u64)> = Vec::with_capacity(self.polys.len());
        for (idx, (alpha, f)) in self.polys.iter().enumerate() {
            let val = polyring::raw_evaluate(ctx, f, x0);
            if val.is_zero() {
                vvec = alpha.clone();
                let deriv = polyring::raw_derivative(ctx, f);
                let unit = polyring::raw_evaluate(ctx, &deriv, x0);
                debug_assert!(!unit.is_zero());
                dlogs.push((idx, ctx.dlog(unit) % rn));
            } else {
                dlogs.push((idx, ctx.dlog(val) % rn));
            }
        }
        self.count_from_local_data(&vvec, &dlogs)
    }

    /// Fiber size above infinity, by coefficient reversal.
    fn fiber_at_infinity(&self) -> u64 {
        let vvec = self.group.neg(&self.deg_vec);
        // The reversed strata have constant term 1, so the unit parts at
        // infinity reduce to the leading classes alone.
        let dlogs: Vec<(usize, u64)> = (0..self.polys.len()).map(|i| (i, 0)).collect();
        self.count_from_local_data(&vvec, &dlogs)
    }

    fn count_from_local_data(&self, vvec: &GroupVec, dlogs: &[(usize, u64)]) -> u64 {
        let rn = self.group.exponent();
        let e = self.group.element_order(vvec);
        for (mi, m) in self.members.iter().enumerate() {
            if self.group.pairing(m, vvec) != 0 {
                continue;
            }
            let mut w = self.lead_part[mi];
            for &(idx, dl) in dlogs {
                let (alpha, _) = &self.polys[idx];
                w = (w + self.group.pairing(m, alpha) * dl) % rn;
            }
            if w != 0 {
                return 0;
            }
        }
        self.h / e
    }

    fn count_all(&self, ctx: &FieldCtx) -> u64 {
        let mut total = 0u64;
        for x0 in ctx.elements() {
            total += self.fiber_at(ctx, x0);
        }
        total + self.fiber_at_infinity()
    }
}

/// Serializable exact description of a cover over a named base field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRecord {
    pub q: u64,
    pub p: u64,
    pub ext_degree: u32,
    pub invariant_factors: Vec<u64>,
    /// Pairs of stratum vector and coefficient indices (constant term first,
    /// leading 1 included).
    pub strata: Vec<(Vec<u64>, Vec<u32>)>,
    pub lead: Vec<u32>,
}

impl CoverRecord {
    /// Rebuilds the base field and the cover.
    pub fn build(&self) -> Result<(FieldCtx, KummerCover)> {
        let ctx = make_field(self.p, self.ext_degree)?;
        if ctx.q() != self.q {
            return Err(Error::InvalidInput(format!(
                "record says q = {}, field has q = {}",
                self.q,
                ctx.q()
            )));
        }
        let group = GroupSpec::new(self.invariant_factors.clone())?;
        let parts: Vec<(GroupVec, MonicPoly)> = self
            .strata
            .iter()
            .map(|(a, cs)| {
                let coeffs: Vec<FieldElem> = cs.iter().map(|&i| FieldElem(i)).collect();
                Ok((GroupVec(a.clone()), MonicPoly::from_coeffs(coeffs)?))
            })
            .collect::<Result<_>>()?;
        let lead: Vec<FieldElem> = self.lead.iter().map(|&i| FieldElem(i)).collect();
        let cover = KummerCover::from_strata(&ctx, group, parts, lead)?;
        Ok((ctx, cover))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;
    use num_traits::ToPrimitive;

    fn poly(_ctx: &FieldCtx, coeffs: &[u32]) -> MonicPoly {
        MonicPoly::from_coeffs(coeffs.iter().map(|&c| FieldElem(c)).collect()).unwrap()
    }

    /// Independent count for `y^2 = f(x)`, odd-degree squarefree `f`:
    /// affine solutions plus the single point at infinity.
    fn hyperelliptic_odd_count(ctx: &FieldCtx, f: &MonicPoly, m: u32) -> u64 {
        let (ext, map) = if m == 1 {
            (ctx.clone(), super::identity_map(ctx))
        } else {
            ctx.extension(m).unwrap()
        };
        let fe = f.embedded(&map);
        let mut total = 1u64;
        for x in ext.elements() {
            let v = polyring::raw_evaluate(&ext, &fe, x);
            for y in ext.elements() {
                if ext.mul(y, y) == v {
                    total += 1;
                }
            }
        }
        total
    }

    #[test]
    fn elliptic_cover_point_counts_match_affine_oracle() {
        let ctx = make_field(3, 1).unwrap();
        let group = GroupSpec::new(vec![2]).unwrap();
        // f = x^3 - x = x^3 + 2x
        let f = poly(&ctx, &[0, 2, 0, 1]);
        let cover = KummerCover::from_strata(
            &ctx,
            group,
            vec![(GroupVec(vec![1]), f.clone())],
            vec![FieldElem::ONE],
        )
        .unwrap();
        assert_eq!(cover.true_genus().unwrap(), 1);
        for m in 1..=4 {
            assert_eq!(
                cover.point_count(&ctx, m).unwrap(),
                hyperelliptic_odd_count(&ctx, &f, m),
                "extension degree {m}"
            );
        }
        assert_eq!(cover.point_count(&ctx, 1).unwrap(), 4);
    }

    #[test]
    fn elliptic_cover_zeta_numerator() {
        let ctx = make_field(3, 1).unwrap();
        let group = GroupSpec::new(vec![2]).unwrap();
        let f = poly(&ctx, &[0, 2, 0, 1]);
        let cover = KummerCover::from_strata(
            &ctx,
            group,
            vec![(GroupVec(vec![1]), f)],
            vec![FieldElem::ONE],
        )
        .unwrap();
        let num = cover.zeta_numerator(&ctx).unwrap();
        let as_i64: Vec<i64> = num.iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(as_i64, vec![1, 0, 3]);
    }

    #[test]
    fn even_degree_hyperelliptic_infinity_split_depends_on_lead_class() {
        let ctx = make_field(5, 1).unwrap();
        let group = GroupSpec::new(vec![2]).unwrap();
        // deg 4 squarefree: f = x^4 + x + 1 (check: gcd with derivative is 1)
        let f = poly(&ctx, &[1, 1, 0, 0, 1]);
        assert!(polyring::is_squarefree(&ctx, &f));
        let monic = KummerCover::from_strata(
            &ctx,
            group.clone(),
            vec![(GroupVec(vec![1]), f.clone())],
            vec![FieldElem::ONE],
        )
        .unwrap();
        // even degree, square lead: two points at infinity
        assert_eq!(monic.fiber_count(&ctx, ProjPoint::Infinity), 2);
        // 2 is a nonsquare mod 5
        let twisted = KummerCover::from_strata(
            &ctx,
            group,
            vec![(GroupVec(vec![1]), f)],
            vec![FieldElem(2)],
        )
        .unwrap();
        assert_eq!(twisted.fiber_count(&ctx, ProjPoint::Infinity), 0);
    }

    #[test]
    fn superelliptic_cover_matches_direct_solution_count() {
        let ctx = make_field(7, 1).unwrap();
        let group = GroupSpec::new(vec![3]).unwrap();
        // deg 2 squarefree, coprime to 3, so infinity is totally ramified
        let f = poly(&ctx, &[1, 1, 1]);
        assert!(polyring::is_squarefree(&ctx, &f));
        let cover = KummerCover::from_strata(
            &ctx,
            group,
            vec![(GroupVec(vec![1]), f.clone())],
            vec![FieldElem::ONE],
        )
        .unwrap();
        for m in 1..=3 {
            let (ext, map) = if m == 1 {
                (ctx.clone(), super::identity_map(&ctx))
            } else {
                ctx.extension(m).unwrap()
            };
            let fe = f.embedded(&map);
            let mut direct = 1u64; // one place at infinity
            for x in ext.elements() {
                let v = polyring::raw_evaluate(&ext, &fe, x);
                for y in ext.elements() {
                    if ext.mul(ext.mul(y, y), y) == v {
                        direct += 1;
                    }
                }
            }
            assert_eq!(cover.point_count(&ctx, m).unwrap(), direct, "degree {m}");
        }
    }

    #[test]
    fn trivial_cover_counts_the_line_or_nothing() {
        let ctx = make_field(5, 1).unwrap();
        let group = GroupSpec::new(vec![2]).unwrap();
        let plain = KummerCover::from_strata(&ctx, group.clone(), vec![], vec![FieldElem::ONE])
            .unwrap();
        assert!(plain.galois_subgroup().is_trivial());
        assert_eq!(plain.true_genus().unwrap(), 0);
        for m in 1..=3 {
            assert_eq!(plain.point_count(&ctx, m).unwrap(), 5u64.pow(m) + 1);
        }
        // nonsquare twist: constant field extension, no rational points
        let twisted =
            KummerCover::from_strata(&ctx, group, vec![], vec![FieldElem(2)]).unwrap();
        assert_eq!(twisted.point_count(&ctx, 1).unwrap(), 0);
        // over the quadratic extension the twist is a square and the system
        // splits into two lines; counts refer to one component
        assert_eq!(twisted.point_count(&ctx, 2).unwrap(), 25 + 1);
    }

    #[test]
    fn quartic_model_of_a_quadratic_curve() {
        // y^4 = f(x)^2 has geometric Galois group of order 2 inside Z/4 and
        // counts points of y^2 = f(x).
        let ctx = make_field(5, 1).unwrap();
        let z4 = GroupSpec::new(vec![4]).unwrap();
        let z2 = GroupSpec::new(vec![2]).unwrap();
        let f = poly(&ctx, &[3, 1, 0, 1]); // x^3 + x + 3, squarefree
        assert!(polyring::is_squarefree(&ctx, &f));
        let quartic = KummerCover::from_strata(
            &ctx,
            z4,
            vec![(GroupVec(vec![2]), f.clone())],
            vec![FieldElem::ONE],
        )
        .unwrap();
        assert_eq!(quartic.galois_subgroup().order(), 2);
        assert_eq!(quartic.galois_subgroup().invariant_factors(), &[2]);
        assert_eq!(quartic.true_genus().unwrap(), 1);
        assert_eq!(quartic.virtual_genus(), Ratio::from_integer(1));
        let quadratic = KummerCover::from_strata(
            &ctx,
            z2,
            vec![(GroupVec(vec![1]), f)],
            vec![FieldElem::ONE],
        )
        .unwrap();
        for m in 1..=3 {
            assert_eq!(
                quartic.point_count(&ctx, m).unwrap(),
                quadratic.point_count(&ctx, m).unwrap()
            );
        }
    }

    #[test]
    fn klein_cover_zeta_is_product_of_quadratic_subcover_zetas() {
        let ctx = make_field(5, 1).unwrap();
        let klein = GroupSpec::new(vec![2, 2]).unwrap();
        let z2 = GroupSpec::new(vec![2]).unwrap();
        let f1 = poly(&ctx, &[0, 4, 0, 1]); // x^3 - x
        let f2 = poly(&ctx, &[2, 0, 1]); // x^2 + 2
        assert!(polyring::is_squarefree(&ctx, &f1) && polyring::is_squarefree(&ctx, &f2));
        let cover = KummerCover::from_strata(
            &ctx,
            klein,
            vec![
                (GroupVec(vec![1, 0]), f1.clone()),
                (GroupVec(vec![0, 1]), f2.clone()),
            ],
            vec![FieldElem::ONE, FieldElem::ONE],
        )
        .unwrap();
        assert_eq!(cover.galois_subgroup().order(), 4);
        assert_eq!(cover.true_genus().unwrap(), 3);
        let p_total = cover.zeta_numerator(&ctx).unwrap();

        let f12 = f1.mul(&ctx, &f2);
        let mut product = vec![BigInt::one()];
        for f in [f1, f2, f12] {
            let sub = KummerCover::from_strata(
                &ctx,
                z2.clone(),
                vec![(GroupVec(vec![1]), f)],
                vec![FieldElem::ONE],
            )
            .unwrap();
            let p = sub.zeta_numerator(&ctx).unwrap();
            let mut next = vec![BigInt::zero(); product.len() + p.len() - 1];
            for (i, a) in product.iter().enumerate() {
                for (j, b) in p.iter().enumerate() {
                    let t = a * b;
                    next[i + j] += t;
                }
            }
            product = next;
        }
        assert_eq!(p_total, product);
    }

    #[test]
    fn composite_construction_round_trips_strata() {
        let ctx = make_field(5, 1).unwrap();
        let group = GroupSpec::new(vec![2, 4]).unwrap();
        let f_a = poly(&ctx, &[1, 1]); // x + 1
        let f_b = poly(&ctx, &[2, 1]); // x + 2
        let f_c = poly(&ctx, &[3, 1]); // x + 3
        let parts = vec![
            (GroupVec(vec![1, 0]), f_a),
            (GroupVec(vec![0, 3]), f_b),
            (GroupVec(vec![1, 2]), f_c),
        ];
        let lead = vec![FieldElem(2), FieldElem(3)];
        let direct =
            KummerCover::from_strata(&ctx, group.clone(), parts.clone(), lead.clone()).unwrap();
        let composites: Vec<MonicPoly> = (0..2).map(|j| direct.strata().composite(&ctx, j)).collect();
        assert_eq!(composites[0].degree(), 2); // (x+1)(x+3)
        assert_eq!(composites[1].degree(), 5); // (x+2)^3 (x+3)^2
        let rebuilt = KummerCover::from_composites(&ctx, group, &composites, lead).unwrap();
        assert_eq!(rebuilt.strata(), direct.strata());
        assert_eq!(rebuilt.galois_subgroup().order(), direct.galois_subgroup().order());
    }

    #[test]
    fn power_free_violation_is_rejected() {
        let ctx = make_field(5, 1).unwrap();
        let group = GroupSpec::new(vec![2]).unwrap();
        let sq = poly(&ctx, &[1, 2, 1]); // (x+1)^2
        assert!(KummerCover::from_composites(
            &ctx,
            group,
            &[sq],
            vec![FieldElem::ONE]
        )
        .is_err());
    }

    #[test]
    fn record_round_trip() {
        let ctx = make_field(13, 1).unwrap();
        let group = GroupSpec::new(vec![2, 6]).unwrap();
        let cover = KummerCover::from_strata(
            &ctx,
            group,
            vec![
                (GroupVec(vec![1, 2]), poly(&ctx, &[1, 1])),
                (GroupVec(vec![0, 1]), poly(&ctx, &[5, 3, 1])),
            ],
            vec![FieldElem(2), FieldElem(6)],
        )
        .unwrap();
        let record = cover.record(&ctx);
        let json = serde_json::to_string(&record).unwrap();
        let back: CoverRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, record);
        let (ctx2, cover2) = back.build().unwrap();
        assert_eq!(ctx2.q(), 13);
        assert_eq!(cover2.strata(), cover.strata());
        for m in 1..=2 {
            assert_eq!(
                cover2.point_count(&ctx2, m).unwrap(),
                cover.point_count(&ctx, m).unwrap()
            );
        }
    }

    #[test]
    fn validation_rejects_bad_data() {
        let ctx = make_field(5, 1).unwrap();
        let z3 = GroupSpec::new(vec![3]).unwrap();
        // 5 - 1 is not divisible by 3
        assert!(matches!(
            KummerCover::from_strata(&ctx, z3, vec![], vec![FieldElem::ONE]),
            Err(Error::BadCharOrder { r: 3, qm1: 4 })
        ));
        let z2 = GroupSpec::new(vec![2]).unwrap();
        // coprime strata are fine: x+1 does not divide x^2+2
        let coprime = KummerCover::from_strata(
            &ctx,
            GroupSpec::new(vec![2, 2]).unwrap(),
            vec![
                (GroupVec(vec![1, 0]), poly(&ctx, &[1, 1])),
                (GroupVec(vec![0, 1]), poly(&ctx, &[2, 0, 1])),
            ],
            vec![FieldElem::ONE, FieldElem::ONE],
        );
        assert!(coprime.is_ok());
        let shared = KummerCover::from_strata(
            &ctx,
            GroupSpec::new(vec![2, 2]).unwrap(),
            vec![
                (GroupVec(vec![1, 0]), poly(&ctx, &[1, 1])),
                (GroupVec(vec![0, 1]), poly(&ctx, &[2, 3, 1])),
            ],
            vec![FieldElem::ONE, FieldElem::ONE],
        );
        // x^2+3x+2 = (x+1)(x+2) shares x+1
        assert!(shared.is_err());
        // not squarefree
        assert!(KummerCover::from_strata(
            &ctx,
            z2.clone(),
            vec![(GroupVec(vec![1]), poly(&ctx, &[1, 2, 1]))],
            vec![FieldElem::ONE]
        )
        .is_err());
        // zero lead
        assert!(KummerCover::from_strata(&ctx, z2, vec![], vec![FieldElem::ZERO]).is_err());
    }

    #[test]
    fn ramified_fibers_scale_by_inertia() {
        let ctx = make_field(5, 1).unwrap();
        let z4 = GroupSpec::new(vec![4]).unwrap();
        // y^4 = x(x+1)^2: strata (1) -> x, (2) -> x+1
        let cover = KummerCover::from_strata(
            &ctx,
            z4,
            vec![
                (GroupVec(vec![1]), poly(&ctx, &[0, 1])),
                (GroupVec(vec![2]), poly(&ctx, &[1, 1])),
            ],
            vec![FieldElem::ONE],
        )
        .unwrap();
        assert_eq!(cover.galois_subgroup().order(), 4);
        // above x = 0 the full group is inertia: a single point
        assert_eq!(cover.fiber_count(&ctx, ProjPoint::Finite(FieldElem::ZERO)), 1);
        // above x = -1 inertia has order 2: two points iff the character
        // condition holds; here f_1(-1) = -1 = 4 = 2^2 is a square and the
        // remaining condition is on m = 2 pairing, total weight even
        let minus_one = FieldElem(4);
        let fiber = cover.fiber_count(&ctx, ProjPoint::Finite(minus_one));
        assert!(fiber == 0 || fiber == 2);
        // unramified fibers are 0 or 4
        for x in ctx.elements() {
            if x == FieldElem::ZERO || x == minus_one {
                continue;
            }
            let fc = cover.fiber_count(&ctx, ProjPoint::Finite(x));
            assert!(fc == 0 || fc == 4, "x = {:?}: {}", x, fc);
        }
    }

    #[test]
    fn point_counts_are_consistent_with_genus_bounds() {
        // Weil bound check across a small pool of covers.
        let ctx = make_field(5, 1).unwrap();
        let z2 = GroupSpec::new(vec![2]).unwrap();
        for idx in 0..50u128 {
            let f = polyring::monic_poly(&ctx, 3, idx);
            if !polyring::is_squarefree(&ctx, &f) {
                continue;
            }
            let cover = KummerCover::from_strata(
                &ctx,
                z2.clone(),
                vec![(GroupVec(vec![1]), f)],
                vec![FieldElem::ONE],
            )
            .unwrap();
            let g = cover.true_genus().unwrap() as f64;
            for m in 1..=2 {
                let n = cover.point_count(&ctx, m).unwrap() as f64;
                let qm = 5f64.powi(m as i32);
                assert!((n - qm - 1.0).abs() <= 2.0 * g * qm.sqrt() + 1e-9);
            }
        }
    }
}
