//! Generating series for constrained censuses via character Euler products.
//!
//! * Primes coprime to the marked-point locus are grouped by degree and by
//!   their unit-class vector at the marked points; the per-class counts come
//!   from character L-polynomials through a triangular power-sum recursion.
//! * Each twisted Euler product is assembled from those class counts with
//!   exact binomial powers, so large truncation degrees stay affordable.
//! * The full constrained series averages the twisted products against root
//!   of unity phases; every coefficient must reduce to a nonnegative integer.
//! * A literal prime-by-prime product backs the aggregated path as an oracle
//!   on small truncations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::abgroup::{GroupSpec, GroupVec, Subgroup};
use crate::census::{CensusConstraint, StrataWeights};
use crate::cyclo::{CycloField, CycloNum, CycloSeries};
use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldElem};
use crate::polyring;

/// Default truncation degree for census series.
pub const DEFAULT_DMAX: usize = 24;

/// Twist data for one Euler product: a class vector and character rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistSpec {
    t: GroupVec,
    nu: Vec<GroupVec>,
}

impl TwistSpec {
    pub fn new(group: &GroupSpec, t: GroupVec, nu: Vec<GroupVec>) -> Result<TwistSpec> {
        if t.0.len() != group.rank() || nu.iter().any(|row| row.0.len() != group.rank()) {
            return Err(Error::InvalidInput("twist rows must match group rank".into()));
        }
        Ok(TwistSpec {
            t: group.reduce(&t.0),
            nu: nu.iter().map(|row| group.reduce(&row.0)).collect(),
        })
    }

    pub fn trivial(group: &GroupSpec, ell: usize) -> TwistSpec {
        TwistSpec { t: group.zero(), nu: vec![group.zero(); ell] }
    }

    pub fn t(&self) -> &GroupVec {
        &self.t
    }

    pub fn nu(&self) -> &[GroupVec] {
        &self.nu
    }
}

fn mixed_tuples(base: u64, len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * base as usize);
        for prefix in &out {
            for digit in 0..base {
                let mut v = prefix.clone();
                v.push(digit);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn tuple_rank(base: u64, w: &[u64]) -> usize {
    w.iter().fold(0usize, |acc, d| acc * base as usize + *d as usize)
}

/// Per-degree counts of monic irreducibles by unit-class vector at the
/// marked points.
struct ClassCounts {
    rn: u64,
    counts: BTreeMap<u64, Vec<u128>>,
}

fn l_polynomial(
    ctx: &FieldCtx,
    field: &CycloField,
    points: &[FieldElem],
    m: &[u64],
    dmax: usize,
) -> CycloSeries {
    let rn = field.order();
    let ell = points.len();
    let mut l = CycloSeries::zero(field, dmax);
    for d in 0..ell.min(dmax + 1) {
        let mut acc = field.zero();
        'poly: for f in polyring::enumerate_monic(ctx, d) {
            let mut phase = 0u64;
            for (p, mi) in points.iter().zip(m) {
                let v = f.evaluate(ctx, *p);
                if v == FieldElem::ZERO {
                    continue 'poly;
                }
                phase = (phase + mi * (ctx.dlog(v) % rn)) % rn;
            }
            acc = field.add(&acc, &field.root(phase));
        }
        l = CycloSeries::monomial(field, dmax, d, acc).add(field, &l);
    }
    l
}

fn prime_class_counts(
    ctx: &FieldCtx,
    field: &CycloField,
    points: &[FieldElem],
    dmax_primes: usize,
) -> Result<ClassCounts> {
    let rn = field.order();
    let ell = points.len();
    let ms = mixed_tuples(rn, ell);
    let q = ctx.q();

    let mut logs: Vec<Option<CycloSeries>> = vec![None; ms.len()];
    for (idx, m) in ms.iter().enumerate() {
        if m.iter().all(|x| *x == 0) {
            continue;
        }
        let l = l_polynomial(ctx, field, points, m, dmax_primes);
        logs[idx] = Some(l.log(field)?);
    }

    let mut s: BTreeMap<(usize, u64), CycloNum> = BTreeMap::new();
    for d in 1..=dmax_primes as u64 {
        for (idx, m) in ms.iter().enumerate() {
            let value = if m.iter().all(|x| *x == 0) {
                let pi = polyring::irreducible_count(q, d as usize);
                let excluded = if d == 1 { ell as u128 } else { 0 };
                field.from_ratio(BigRational::from_integer(BigInt::from(pi - excluded)))
            } else {
                let log = logs[idx].as_ref().unwrap();
                let mut acc = field.scale(log.coeff(d as usize)?, &BigRational::from_integer(BigInt::from(d)));
                for e in 1..d {
                    if d % e != 0 {
                        continue;
                    }
                    let pow: Vec<u64> = m.iter().map(|x| x * (d / e) % rn).collect();
                    let prior = &s[&(tuple_rank(rn, &pow), e)];
                    acc = field.sub(&acc, &field.scale(prior, &BigRational::from_integer(BigInt::from(e))));
                }
                field.scale(&acc, &BigRational::new(BigInt::one(), BigInt::from(d)))
            };
            s.insert((idx, d), value);
        }
    }

    let ws = mixed_tuples(rn, ell);
    let norm = BigRational::new(BigInt::one(), BigInt::from(rn).pow(ell as u32));
    let mut counts = BTreeMap::new();
    for d in 1..=dmax_primes as u64 {
        let mut per_class = Vec::with_capacity(ws.len());
        for w in &ws {
            let mut acc = field.zero();
            for (idx, m) in ms.iter().enumerate() {
                let dot: u64 = m.iter().zip(w).map(|(a, b)| a * b % rn).sum::<u64>() % rn;
                let phase = (rn - dot) % rn;
                acc = field.add(&acc, &field.mul(&field.root(phase), &s[&(idx, d)]));
            }
            let n = field
                .scale(&acc, &norm)
                .as_count()
                .and_then(|b| b.to_u128())
                .ok_or_else(|| {
                    Error::Inconsistent("prime class counts must be nonnegative integers".into())
                })?;
            per_class.push(n);
        }
        let total: u128 = per_class.iter().sum();
        let expected =
            polyring::irreducible_count(q, d as usize) - if d == 1 { ell as u128 } else { 0 };
        if total != expected {
            return Err(Error::Inconsistent("prime class counts must sum to the prime count".into()));
        }
        counts.insert(d, per_class);
    }
    Ok(ClassCounts { rn, counts })
}

fn min_weight(weights: &StrataWeights) -> u64 {
    *weights.values().iter().min().unwrap()
}

fn check_series_inputs(
    ctx: &FieldCtx,
    group: &GroupSpec,
    points: &[FieldElem],
    nu_rows: usize,
    dmax: usize,
) -> Result<()> {
    if (ctx.q() - 1) % group.exponent() != 0 {
        return Err(Error::BadCharOrder { r: group.exponent(), qm1: ctx.q() - 1 });
    }
    if nu_rows != points.len() {
        return Err(Error::InvalidInput("one twist row per marked point".into()));
    }
    if dmax == 0 {
        return Err(Error::InvalidInput("truncation degree must be positive".into()));
    }
    Ok(())
}

fn assemble(
    group: &GroupSpec,
    field: &CycloField,
    ts: &TwistSpec,
    weights: &StrataWeights,
    support: Option<&Subgroup>,
    cls: &ClassCounts,
    dmax: usize,
) -> Result<CycloSeries> {
    let rn = cls.rn;
    let reps = group.nonzero_elements();
    let ws = mixed_tuples(rn, ts.nu.len());
    let mut acc = CycloSeries::one(field, dmax);
    for (d, per_class) in &cls.counts {
        for (widx, n) in per_class.iter().enumerate() {
            if *n == 0 {
                continue;
            }
            let w = &ws[widx];
            let mut base = CycloSeries::one(field, dmax);
            let mut any = false;
            for (alpha, c) in reps.iter().zip(weights.values()) {
                if support.is_some_and(|h| !h.contains(alpha)) {
                    continue;
                }
                let zdeg = (c * d) as usize;
                if zdeg > dmax {
                    continue;
                }
                let mut e = d % rn * group.pairing(&ts.t, alpha) % rn;
                for (wi, nui) in w.iter().zip(&ts.nu) {
                    e = (e + wi * group.pairing(nui, alpha)) % rn;
                }
                base = base.add(field, &CycloSeries::monomial(field, dmax, zdeg, field.root(e)));
                any = true;
            }
            if !any {
                continue;
            }
            acc = acc.mul(field, &base.pow_int(field, &BigInt::from(*n))?);
        }
    }
    Ok(acc)
}

/// One twisted Euler product, aggregated by prime degree and class.
pub fn euler_product_a(
    ctx: &FieldCtx,
    group: &GroupSpec,
    points: &[FieldElem],
    ts: &TwistSpec,
    weights: &StrataWeights,
    dmax: usize,
) -> Result<CycloSeries> {
    check_series_inputs(ctx, group, points, ts.nu.len(), dmax)?;
    let field = CycloField::new(group.exponent());
    let dmax_primes = dmax / min_weight(weights) as usize;
    let cls = prime_class_counts(ctx, &field, points, dmax_primes)?;
    assemble(group, &field, ts, weights, None, &cls, dmax)
}

/// The same product multiplied out literally over every prime.
pub fn euler_product_a_literal(
    ctx: &FieldCtx,
    group: &GroupSpec,
    points: &[FieldElem],
    ts: &TwistSpec,
    weights: &StrataWeights,
    dmax: usize,
) -> Result<CycloSeries> {
    check_series_inputs(ctx, group, points, ts.nu.len(), dmax)?;
    let field = CycloField::new(group.exponent());
    let rn = group.exponent();
    let reps = group.nonzero_elements();
    let dmax_primes = dmax / min_weight(weights) as usize;
    let table = polyring::irreducibles_up_to(ctx, dmax_primes);
    let mut acc = CycloSeries::one(&field, dmax);
    for d in 1..=dmax_primes {
        'prime: for p in table.degree(d) {
            let mut w = Vec::with_capacity(points.len());
            for x in points {
                let v = p.evaluate(ctx, *x);
                if v == FieldElem::ZERO {
                    continue 'prime;
                }
                w.push(ctx.dlog(v) % rn);
            }
            let mut base = CycloSeries::one(&field, dmax);
            for (alpha, c) in reps.iter().zip(weights.values()) {
                let zdeg = (c * d as u64) as usize;
                if zdeg > dmax {
                    continue;
                }
                let mut e = d as u64 % rn * group.pairing(&ts.t, alpha) % rn;
                for (wi, nui) in w.iter().zip(&ts.nu) {
                    e = (e + wi * group.pairing(nui, alpha)) % rn;
                }
                base =
                    base.add(&field, &CycloSeries::monomial(&field, dmax, zdeg, field.root(e)));
            }
            acc = acc.mul(&field, &base);
        }
    }
    Ok(acc)
}

/// The constrained census series, averaging twisted products against phases.
pub fn series_f(
    ctx: &FieldCtx,
    group: &GroupSpec,
    cc: &CensusConstraint,
    weights: &StrataWeights,
    dmax: usize,
) -> Result<CycloSeries> {
    series_f_impl(ctx, group, cc, weights, None, dmax)
}

/// The constrained series with strata support restricted to a subgroup.
pub fn series_f_within(
    ctx: &FieldCtx,
    group: &GroupSpec,
    cc: &CensusConstraint,
    weights: &StrataWeights,
    support: &Subgroup,
    dmax: usize,
) -> Result<CycloSeries> {
    series_f_impl(ctx, group, cc, weights, Some(support), dmax)
}

fn series_f_impl(
    ctx: &FieldCtx,
    group: &GroupSpec,
    cc: &CensusConstraint,
    weights: &StrataWeights,
    support: Option<&Subgroup>,
    dmax: usize,
) -> Result<CycloSeries> {
    let (k, eps) = cc.validated(ctx, group)?;
    check_series_inputs(ctx, group, &cc.points, cc.eps.len(), dmax)?;
    let rn = group.exponent();
    let field = CycloField::new(rn);
    let dmax_primes = dmax / min_weight(weights) as usize;
    let cls = prime_class_counts(ctx, &field, &cc.points, dmax_primes)?;

    let t_range = if k.is_some() { group.elements() } else { vec![group.zero()] };
    let nu_range: Vec<Vec<GroupVec>> = {
        let mut out = vec![Vec::new()];
        for _ in 0..cc.points.len() {
            let mut next = Vec::new();
            for prefix in &out {
                for v in group.elements() {
                    let mut row = prefix.clone();
                    row.push(v);
                    next.push(row);
                }
            }
            out = next;
        }
        out
    };
    let pairs: Vec<(GroupVec, Vec<GroupVec>)> = t_range
        .iter()
        .flat_map(|t| nu_range.iter().map(move |nu| (t.clone(), nu.clone())))
        .collect();

    let terms: Vec<CycloSeries> = pairs
        .par_iter()
        .map(|(t, nu)| {
            let ts = TwistSpec { t: t.clone(), nu: nu.clone() };
            let a = assemble(group, &field, &ts, weights, support, &cls, dmax)?;
            let mut phase = 0u64;
            if let Some(k) = &k {
                phase = (phase + group.pairing(t, k)) % rn;
            }
            for (nui, row) in nu.iter().zip(&eps) {
                phase = (phase + group.pairing(nui, &GroupVec(row.clone()))) % rn;
            }
            Ok(a.scale(&field, &field.root((rn - phase) % rn)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut acc = CycloSeries::zero(&field, dmax);
    for term in &terms {
        acc = acc.add(&field, term);
    }
    let exponent = cc.points.len() as u32 + u32::from(k.is_some());
    let norm = BigRational::new(BigInt::one(), BigInt::from(group.order()).pow(exponent));
    Ok(acc.scale(&field, &field.from_ratio(norm)))
}

/// Exact rational coefficient of `z^D`.
pub fn coefficient(s: &CycloSeries, d: usize) -> Result<BigRational> {
    s.coeff(d)?
        .as_rational()
        .cloned()
        .ok_or_else(|| Error::Inconsistent("series coefficient is not rational".into()))
}

/// All coefficients as nonnegative integer counts.
pub fn series_counts(s: &CycloSeries) -> Result<Vec<u128>> {
    s.coeffs()
        .iter()
        .map(|c| {
            c.as_count()
                .and_then(|b| b.to_u128())
                .ok_or_else(|| Error::Inconsistent("series coefficient is not a count".into()))
        })
        .collect()
}

/// Pole-order table keyed by phase class and weight index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleOrders {
    weight_values: Vec<u64>,
    orders: BTreeMap<(u64, usize), u64>,
}

impl PoleOrders {
    pub fn weight_values(&self) -> &[u64] {
        &self.weight_values
    }

    pub fn order(&self, a: u64, i: usize) -> u64 {
        *self.orders.get(&(a, i)).unwrap_or(&0)
    }

    /// Total over phase classes at one weight index.
    pub fn row_total(&self, i: usize) -> u64 {
        self.orders.iter().filter(|((_, j), _)| *j == i).map(|(_, m)| m).sum()
    }
}

/// Multiplicity of each `(phase class, weight)` pair among untwisted vectors.
pub fn pole_orders(group: &GroupSpec, ts: &TwistSpec, weights: &StrataWeights) -> PoleOrders {
    let rn = group.exponent();
    let mut weight_values: Vec<u64> = weights.values().to_vec();
    weight_values.sort_unstable();
    weight_values.dedup();
    let mut orders = BTreeMap::new();
    for (alpha, c) in group.nonzero_elements().iter().zip(weights.values()) {
        if ts.nu.iter().any(|nui| group.pairing(nui, alpha) % rn != 0) {
            continue;
        }
        let a = group.pairing(&ts.t, alpha) % rn;
        let i = weight_values.binary_search(c).unwrap();
        *orders.entry((a, i)).or_insert(0) += 1;
    }
    PoleOrders { weight_values, orders }
}

/// One main-term ladder entry: growth like `q^{D/weight}` times `D^{degree_bound}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthTerm {
    pub weight: u64,
    pub degree_bound: u64,
}

/// Main-term ladder for the default weights, ordered by increasing weight.
pub fn predicted_growth(group: &GroupSpec) -> Vec<GrowthTerm> {
    let mut orders: Vec<u64> =
        group.nonzero_elements().iter().map(|v| group.element_order(v)).collect();
    orders.sort_unstable();
    orders.dedup();
    orders
        .into_iter()
        .map(|s| GrowthTerm {
            weight: group.order() - group.order() / s,
            degree_bound: group.phi(s) - 1,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{count_fixed_degree, Budget};
    use crate::ffield::make_field;

    fn spec(factors: &[u64]) -> GroupSpec {
        GroupSpec::new(factors.to_vec()).unwrap()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn trivial_twist_gives_squarefree_series() {
        let ctx = make_field(3, 1).unwrap();
        let g2 = spec(&[2]);
        let w = StrataWeights::hurwitz(&g2);
        let ts = TwistSpec::trivial(&g2, 0);
        let a = euler_product_a(&ctx, &g2, &[], &ts, &w, 4).unwrap();
        let want = [1i64, 3, 6, 18, 54];
        for (d, v) in want.iter().enumerate() {
            assert_eq!(coefficient(&a, d).unwrap(), rat(*v));
        }
    }

    #[test]
    fn sign_twist_flips_odd_degrees() {
        let ctx = make_field(3, 1).unwrap();
        let g2 = spec(&[2]);
        let w = StrataWeights::hurwitz(&g2);
        let ts = TwistSpec::new(&g2, GroupVec(vec![1]), vec![]).unwrap();
        let a = euler_product_a(&ctx, &g2, &[], &ts, &w, 4).unwrap();
        assert_eq!(coefficient(&a, 3).unwrap(), rat(-18));
        assert_eq!(coefficient(&a, 4).unwrap(), rat(54));
    }

    #[test]
    fn parity_split_of_the_squarefree_series() {
        let ctx = make_field(3, 1).unwrap();
        let g2 = spec(&[2]);
        let w = StrataWeights::hurwitz(&g2);
        let even = CensusConstraint::with_class(GroupVec(vec![0]));
        let s = series_f(&ctx, &g2, &even, &w, 4).unwrap();
        assert_eq!(series_counts(&s).unwrap(), vec![1, 0, 6, 0, 54]);
        let odd = CensusConstraint::with_class(GroupVec(vec![1]));
        let s = series_f(&ctx, &g2, &odd, &w, 4).unwrap();
        assert_eq!(series_counts(&s).unwrap(), vec![0, 3, 0, 18, 0]);
        let free = CensusConstraint::none();
        let s = series_f(&ctx, &g2, &free, &w, 4).unwrap();
        assert_eq!(series_counts(&s).unwrap(), vec![1, 3, 6, 18, 54]);
    }

    #[test]
    fn aggregated_product_equals_literal_product() {
        let ctx = make_field(3, 1).unwrap();
        let g2 = spec(&[2]);
        let w = StrataWeights::hurwitz(&g2);
        for t in [0u64, 1] {
            let ts = TwistSpec::new(&g2, GroupVec(vec![t]), vec![]).unwrap();
            let fast = euler_product_a(&ctx, &g2, &[], &ts, &w, 6).unwrap();
            let slow = euler_product_a_literal(&ctx, &g2, &[], &ts, &w, 6).unwrap();
            assert_eq!(fast, slow);
        }

        let ctx5 = make_field(5, 1).unwrap();
        let klein = spec(&[2, 2]);
        let wk = StrataWeights::hurwitz(&klein);
        let points = [FieldElem(1)];
        let ts = TwistSpec::new(&klein, GroupVec(vec![1, 1]), vec![GroupVec(vec![1, 0])]).unwrap();
        let fast = euler_product_a(&ctx5, &klein, &points, &ts, &wk, 6).unwrap();
        let slow = euler_product_a_literal(&ctx5, &klein, &points, &ts, &wk, 6).unwrap();
        assert_eq!(fast, slow);

        let ctx7 = make_field(7, 1).unwrap();
        let g3 = spec(&[3]);
        let w3 = StrataWeights::hurwitz(&g3);
        let points = [FieldElem(2)];
        let ts = TwistSpec::new(&g3, GroupVec(vec![1]), vec![GroupVec(vec![2])]).unwrap();
        let fast = euler_product_a(&ctx7, &g3, &points, &ts, &w3, 4).unwrap();
        let slow = euler_product_a_literal(&ctx7, &g3, &points, &ts, &w3, 4).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn series_coefficients_match_enumeration() {
        let budget = Budget::default();
        let ctx = make_field(3, 1).unwrap();
        let g2 = spec(&[2]);
        let w = StrataWeights::hurwitz(&g2);
        let ccs = [
            CensusConstraint::none(),
            CensusConstraint::with_class(GroupVec(vec![1])),
            CensusConstraint {
                k: None,
                points: vec![FieldElem(0)],
                eps: vec![vec![1]],
            },
            CensusConstraint {
                k: Some(GroupVec(vec![0])),
                points: vec![FieldElem(2)],
                eps: vec![vec![0]],
            },
        ];
        for cc in &ccs {
            let counts = series_counts(&series_f(&ctx, &g2, cc, &w, 6).unwrap()).unwrap();
            for d in 0..=6u64 {
                let direct = count_fixed_degree(&ctx, &g2, &w, d, cc, &budget).unwrap();
                assert_eq!(counts[d as usize], direct, "Z/2 D={d}");
            }
        }

        let ctx5 = make_field(5, 1).unwrap();
        let klein = spec(&[2, 2]);
        let wk = StrataWeights::hurwitz(&klein);
        let ccs = [
            CensusConstraint::none(),
            CensusConstraint {
                k: Some(GroupVec(vec![0, 1])),
                points: vec![FieldElem(1)],
                eps: vec![vec![1, 0]],
            },
        ];
        for cc in &ccs {
            let counts = series_counts(&series_f(&ctx5, &klein, cc, &wk, 6).unwrap()).unwrap();
            for d in 0..=6u64 {
                let direct = count_fixed_degree(&ctx5, &klein, &wk, d, cc, &budget).unwrap();
                assert_eq!(counts[d as usize], direct, "Klein D={d}");
            }
        }

        let ctx7 = make_field(7, 1).unwrap();
        let g3 = spec(&[3]);
        let w3 = StrataWeights::hurwitz(&g3);
        let ccs = [
            CensusConstraint::with_class(GroupVec(vec![1])),
            CensusConstraint {
                k: None,
                points: vec![FieldElem(3)],
                eps: vec![vec![2]],
            },
        ];
        for cc in &ccs {
            let counts = series_counts(&series_f(&ctx7, &g3, cc, &w3, 5).unwrap()).unwrap();
            for d in 0..=5u64 {
                let direct = count_fixed_degree(&ctx7, &g3, &w3, d, cc, &budget).unwrap();
                assert_eq!(counts[d as usize], direct, "Z/3 D={d}");
            }
        }
    }

    #[test]
    fn class_indicator_collapses_to_zero_or_one() {
        for factors in [vec![2u64], vec![4], vec![2, 2], vec![6]] {
            let g = spec(&factors);
            let field = CycloField::new(g.exponent());
            let rn = g.exponent();
            for d in g.elements() {
                for k in g.elements() {
                    let mut acc = field.zero();
                    for t in g.elements() {
                        let diff: Vec<u64> =
                            d.0.iter().zip(&k.0).zip(g.factors()).map(|((a, b), r)| (a + r - b) % r).collect();
                        acc = field.add(&acc, &field.root(g.pairing(&t, &GroupVec(diff)) % rn));
                    }
                    let norm = field.scale(
                        &acc,
                        &BigRational::new(BigInt::one(), BigInt::from(g.order())),
                    );
                    if d == k {
                        assert_eq!(norm, field.one());
                    } else {
                        assert!(norm.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn prime_classes_split_evenly_for_quadratic_residues() {
        let ctx = make_field(3, 1).unwrap();
        let field = CycloField::new(2);
        let cls = prime_class_counts(&ctx, &field, &[FieldElem(0)], 3).unwrap();
        assert_eq!(cls.counts[&1], vec![1, 1]);
        let total: u128 = cls.counts[&2].iter().sum();
        assert_eq!(total, polyring::irreducible_count(3, 2));
        let total3: u128 = cls.counts[&3].iter().sum();
        assert_eq!(total3, polyring::irreducible_count(3, 3));
    }

    #[test]
    fn pole_orders_follow_the_order_statistics() {
        let klein = spec(&[2, 2]);
        let wk = StrataWeights::hurwitz(&klein);
        let ts = TwistSpec::trivial(&klein, 0);
        let po = pole_orders(&klein, &ts, &wk);
        assert_eq!(po.weight_values(), &[2]);
        assert_eq!(po.order(0, 0), 3);
        assert_eq!(po.row_total(0), 3);

        let g4 = spec(&[4]);
        let w4 = StrataWeights::hurwitz(&g4);
        let po = pole_orders(&g4, &TwistSpec::trivial(&g4, 0), &w4);
        assert_eq!(po.weight_values(), &[2, 3]);
        assert_eq!(po.order(0, 0), g4.phi(2));
        assert_eq!(po.order(0, 1), g4.phi(4));
        let ts = TwistSpec::new(&g4, GroupVec(vec![1]), vec![]).unwrap();
        let po = pole_orders(&g4, &ts, &w4);
        assert_eq!(po.order(1, 1), 1);
        assert_eq!(po.order(2, 0), 1);
        assert_eq!(po.order(3, 1), 1);
        assert_eq!(po.row_total(1), 2);

        let ts = TwistSpec::new(&klein, GroupVec(vec![0, 0]), vec![GroupVec(vec![1, 0])]).unwrap();
        let po = pole_orders(&klein, &ts, &wk);
        assert_eq!(po.row_total(0), 1);
        assert_eq!(po.order(0, 0), 1);

        for (q, n) in [(2u64, 1usize), (2, 2), (3, 1)] {
            let g = spec(&vec![q; n]);
            let w = StrataWeights::hurwitz(&g);
            let po = pole_orders(&g, &TwistSpec::trivial(&g, 0), &w);
            assert_eq!(po.order(0, 0), q.pow(n as u32) - 1);
        }
    }

    #[test]
    fn growth_ladder_examples() {
        let terms = predicted_growth(&spec(&[2]));
        assert_eq!(terms, vec![GrowthTerm { weight: 1, degree_bound: 0 }]);
        let terms = predicted_growth(&spec(&[2, 2]));
        assert_eq!(terms, vec![GrowthTerm { weight: 2, degree_bound: 2 }]);
        let terms = predicted_growth(&spec(&[4]));
        assert_eq!(
            terms,
            vec![
                GrowthTerm { weight: 2, degree_bound: 0 },
                GrowthTerm { weight: 3, degree_bound: 1 },
            ]
        );
    }

    #[test]
    fn twist_rows_must_match_marked_points() {
        let ctx = make_field(3, 1).unwrap();
        let g2 = spec(&[2]);
        let w = StrataWeights::hurwitz(&g2);
        let ts = TwistSpec::new(&g2, GroupVec(vec![0]), vec![GroupVec(vec![1])]).unwrap();
        assert!(euler_product_a(&ctx, &g2, &[], &ts, &w, 4).is_err());
        let ts = TwistSpec::trivial(&g2, 0);
        assert!(euler_product_a(&ctx, &g2, &[], &ts, &w, 0).is_err());
    }
}
