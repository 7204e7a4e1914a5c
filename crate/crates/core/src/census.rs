//! Weighted census of Kummer covers over a fixed base field.
//!
//! * Strata vectors assign a degree to every nonzero ramification vector;
//!   the weighted degree plus the boundary class weight pins the genus.
//! * Tuple counts enumerate squarefree pairwise-coprime monic tuples, with
//!   optional unit-class conditions at marked points and a fixed boundary
//!   class.
//! * Exact-support counts come either from a Moebius sieve over the subgroup
//!   lattice or from direct cover-by-cover filtering.
//! * Every enumeration is guarded by a deterministic upfront work estimate,
//!   and all totals are exact integers reduced by an associative commutative
//!   sum, so results do not depend on thread count.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::abgroup::{delsarte_mu, GroupSpec, GroupVec, Subgroup};
use crate::covers::KummerCover;
use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldElem};
use crate::polyring::{self, MonicPoly};

/// Default cap on the estimated number of elementary enumeration steps.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Work limit for census enumerations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    limit: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { limit: DEFAULT_BUDGET }
    }
}

impl Budget {
    pub fn new(limit: u128) -> Budget {
        Budget { limit }
    }

    pub fn unlimited() -> Budget {
        Budget { limit: u128::MAX }
    }

    pub fn limit(&self) -> u128 {
        self.limit
    }

    /// Errors out when the estimated work exceeds the limit.
    pub fn check(&self, estimated: u128) -> Result<()> {
        if estimated > self.limit {
            return Err(Error::BudgetExceeded { estimated, limit: self.limit });
        }
        Ok(())
    }
}

/// Per-vector weights over the nonzero group elements, in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrataWeights {
    values: Vec<u64>,
}

impl StrataWeights {
    /// Default weights `c(v) = |G| - |G|/order(v)`.
    pub fn hurwitz(group: &GroupSpec) -> StrataWeights {
        let values = group
            .nonzero_elements()
            .into_iter()
            .map(|v| group.hurwitz_weight(&v))
            .collect();
        StrataWeights { values }
    }

    /// Custom positive weights aligned with `group.nonzero_elements()`.
    pub fn custom(group: &GroupSpec, values: Vec<u64>) -> Result<StrataWeights> {
        if values.len() as u64 != group.order() - 1 {
            return Err(Error::InvalidInput(
                "weight table must cover every nonzero vector".into(),
            ));
        }
        if values.contains(&0) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        Ok(StrataWeights { values })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Weight of a boundary class, zero for the zero vector.
    pub fn class_weight(&self, group: &GroupSpec, v: &GroupVec) -> u64 {
        if v.is_zero() {
            0
        } else {
            self.values[vec_rank(group, v) - 1]
        }
    }
}

/// Mixed-radix rank of a reduced vector in enumeration order.
fn vec_rank(group: &GroupSpec, v: &GroupVec) -> usize {
    let mut rank = 0usize;
    for (x, r) in v.0.iter().zip(group.factors()) {
        rank = rank * *r as usize + *x as usize;
    }
    rank
}

/// Degrees assigned to each nonzero vector, aligned with `group.nonzero_elements()`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StrataVector {
    degrees: Vec<u64>,
}

impl StrataVector {
    pub fn new(group: &GroupSpec, degrees: Vec<u64>) -> Result<StrataVector> {
        if degrees.len() as u64 != group.order() - 1 {
            return Err(Error::InvalidInput(
                "degree table must cover every nonzero vector".into(),
            ));
        }
        Ok(StrataVector { degrees })
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Total weighted degree `sum_a c(a) d(a)`.
    pub fn weighted_degree(&self, weights: &StrataWeights) -> u64 {
        self.degrees.iter().zip(weights.values()).map(|(d, c)| d * c).sum()
    }

    /// Boundary class `sum_a a_j d(a) mod r_j`.
    pub fn degree_class(&self, group: &GroupSpec) -> GroupVec {
        let mut acc = vec![0u64; group.rank()];
        for (rep, d) in group.nonzero_elements().iter().zip(&self.degrees) {
            for (j, a) in rep.0.iter().enumerate() {
                acc[j] += a * d;
            }
        }
        group.reduce(&acc)
    }

    /// Vectors carrying a positive degree.
    pub fn support(&self, group: &GroupSpec) -> Vec<GroupVec> {
        group
            .nonzero_elements()
            .into_iter()
            .zip(&self.degrees)
            .filter(|(_, d)| **d > 0)
            .map(|(v, _)| v)
            .collect()
    }
}

/// Marked-point and boundary-class conditions for a census run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CensusConstraint {
    pub k: Option<GroupVec>,
    pub points: Vec<FieldElem>,
    pub eps: Vec<Vec<u64>>,
}

impl CensusConstraint {
    pub fn none() -> CensusConstraint {
        CensusConstraint::default()
    }

    pub fn with_class(k: GroupVec) -> CensusConstraint {
        CensusConstraint { k: Some(k), ..CensusConstraint::default() }
    }

    /// Reduced `(k, eps)` after validation.
    pub(crate) fn validated(
        &self,
        ctx: &FieldCtx,
        group: &GroupSpec,
    ) -> Result<(Option<GroupVec>, Vec<Vec<u64>>)> {
        if self.points.iter().any(|p| p.index() >= ctx.q()) {
            return Err(Error::InvalidInput("constraint point outside the field".into()));
        }
        let distinct: BTreeSet<_> = self.points.iter().collect();
        if distinct.len() != self.points.len() {
            return Err(Error::InvalidInput("constraint points must be distinct".into()));
        }
        if self.eps.len() != self.points.len() {
            return Err(Error::InvalidInput("one exponent row per constraint point".into()));
        }
        let mut eps = Vec::with_capacity(self.eps.len());
        for row in &self.eps {
            if row.len() != group.rank() {
                return Err(Error::InvalidInput("exponent rows must match group rank".into()));
            }
            eps.push(group.reduce(row).0);
        }
        let k = self.k.as_ref().map(|k| group.reduce(&k.0));
        Ok((k, eps))
    }
}

/// Weighted genus target `2g + 2|G| - 2`.
pub fn genus_target(group: &GroupSpec, g: u64) -> u64 {
    2 * g + 2 * group.order() - 2
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SumRule {
    WithClassTerm,
    Exact,
    AtMost,
}

fn strata_vectors(
    group: &GroupSpec,
    weights: &StrataWeights,
    target: u64,
    rule: SumRule,
    k: Option<&GroupVec>,
    support: Option<&Subgroup>,
) -> Vec<StrataVector> {
    let reps = group.nonzero_elements();
    let allowed: Vec<bool> = reps
        .iter()
        .map(|v| support.map_or(true, |h| h.contains(v)))
        .collect();

    struct Walk<'a> {
        weights: &'a [u64],
        allowed: &'a [bool],
        out: Vec<StrataVector>,
    }

    impl Walk<'_> {
        fn go(&mut self, i: usize, rem: u64, degrees: &mut Vec<u64>) {
            if i == self.weights.len() {
                self.out.push(StrataVector { degrees: degrees.clone() });
                return;
            }
            let top = if self.allowed[i] { rem / self.weights[i] } else { 0 };
            for d in 0..=top {
                degrees[i] = d;
                self.go(i + 1, rem - d * self.weights[i], degrees);
            }
            degrees[i] = 0;
        }
    }

    let mut walk = Walk { weights: weights.values(), allowed: &allowed, out: Vec::new() };
    walk.go(0, target, &mut vec![0u64; reps.len()]);
    let k = k.map(|kv| group.reduce(&kv.0));
    walk.out.retain(|sv| {
        let sum_ok = match rule {
            SumRule::WithClassTerm => {
                sv.weighted_degree(weights) + weights.class_weight(group, &sv.degree_class(group))
                    == target
            }
            SumRule::Exact => sv.weighted_degree(weights) == target,
            SumRule::AtMost => true,
        };
        sum_ok && k.as_ref().map_or(true, |kv| &sv.degree_class(group) == kv)
    });
    walk.out
}

/// Strata vectors meeting the genus target, optionally with a fixed boundary class.
pub fn genus_strata(
    group: &GroupSpec,
    weights: &StrataWeights,
    g: u64,
    k: Option<&GroupVec>,
) -> Vec<StrataVector> {
    strata_vectors(group, weights, genus_target(group, g), SumRule::WithClassTerm, k, None)
}

/// Genus strata with support restricted to a subgroup.
pub fn genus_strata_within(
    group: &GroupSpec,
    weights: &StrataWeights,
    g: u64,
    k: Option<&GroupVec>,
    support: &Subgroup,
) -> Vec<StrataVector> {
    strata_vectors(
        group,
        weights,
        genus_target(group, g),
        SumRule::WithClassTerm,
        k,
        Some(support),
    )
}

/// Strata vectors of exact weighted degree, with no boundary class term.
pub fn weighted_strata(
    group: &GroupSpec,
    weights: &StrataWeights,
    d_target: u64,
    k: Option<&GroupVec>,
) -> Vec<StrataVector> {
    strata_vectors(group, weights, d_target, SumRule::Exact, k, None)
}

struct Cand {
    poly: MonicPoly,
    dlogs: Vec<u64>,
}

fn build_candidates(ctx: &FieldCtx, d: usize, points: &[FieldElem]) -> Vec<Cand> {
    let mut out = Vec::new();
    'poly: for f in polyring::enumerate_monic_squarefree(ctx, d) {
        let mut dlogs = Vec::with_capacity(points.len());
        for p in points {
            let v = f.evaluate(ctx, *p);
            if v == FieldElem::ZERO {
                continue 'poly;
            }
            dlogs.push(ctx.dlog(v));
        }
        out.push(Cand { poly: f, dlogs });
    }
    out
}

fn coprime(ctx: &FieldCtx, a: &MonicPoly, b: &MonicPoly) -> bool {
    polyring::raw_gcd_monic(ctx, a.coeffs(), b.coeffs()).len() == 1
}

fn sv_estimate(q: u64, sv: &StrataVector) -> u128 {
    let mut visit: u128 = 1;
    for d in &sv.degrees {
        if *d > 0 {
            visit = visit.saturating_mul(polyring::squarefree_count(q, *d as usize));
        }
    }
    visit
}

fn build_estimate(q: u64, degrees: &BTreeSet<u64>) -> u128 {
    degrees
        .iter()
        .map(|d| polyring::monic_count(q, *d as usize))
        .fold(0u128, |a, b| a.saturating_add(b))
}

fn family_estimate(q: u64, svs: &[StrataVector]) -> u128 {
    let degrees = family_degrees(svs);
    svs.iter()
        .map(|sv| sv_estimate(q, sv))
        .fold(build_estimate(q, &degrees), |a, b| a.saturating_add(b))
}

fn family_degrees(svs: &[StrataVector]) -> BTreeSet<u64> {
    svs.iter()
        .flat_map(|sv| sv.degrees.iter().copied())
        .filter(|d| *d > 0)
        .collect()
}

struct CensusRun<'a> {
    ctx: &'a FieldCtx,
    group: &'a GroupSpec,
    reps: Vec<GroupVec>,
    eps: Vec<Vec<u64>>,
    k: Option<GroupVec>,
    cands: BTreeMap<u64, Vec<Cand>>,
}

impl<'a> CensusRun<'a> {
    fn prepare(
        ctx: &'a FieldCtx,
        group: &'a GroupSpec,
        cc: &CensusConstraint,
        degrees: &BTreeSet<u64>,
    ) -> Result<CensusRun<'a>> {
        if (ctx.q() - 1) % group.exponent() != 0 {
            return Err(Error::BadCharOrder { r: group.exponent(), qm1: ctx.q() - 1 });
        }
        let (k, eps) = cc.validated(ctx, group)?;
        let mut cands = BTreeMap::new();
        for &d in degrees {
            if d > 0 {
                cands.insert(d, build_candidates(ctx, d as usize, &cc.points));
            }
        }
        Ok(CensusRun { ctx, group, reps: group.nonzero_elements(), eps, k, cands })
    }

    fn slots_for(&self, sv: &StrataVector) -> Vec<(usize, u64)> {
        sv.degrees
            .iter()
            .enumerate()
            .filter(|(_, d)| **d > 0)
            .map(|(i, d)| (i, *d))
            .collect()
    }

    fn class_matches(&self, sv: &StrataVector) -> bool {
        self.k.as_ref().map_or(true, |k| &sv.degree_class(self.group) == k)
    }

    fn char_ok(&self, slots: &[(usize, u64)], chosen: &[&Cand]) -> bool {
        for (i, row) in self.eps.iter().enumerate() {
            for (j, r) in self.group.factors().iter().enumerate() {
                let mut sum = 0u64;
                for (s, (rep_idx, _)) in slots.iter().enumerate() {
                    sum += self.reps[*rep_idx].0[j] * (chosen[s].dlogs[i] % r);
                }
                if sum % r != row[j] {
                    return false;
                }
            }
        }
        true
    }

    fn count_sv(&self, sv: &StrataVector) -> u128 {
        if !self.class_matches(sv) {
            return 0;
        }
        let slots = self.slots_for(sv);
        self.fold(
            &slots,
            &|chosen| u128::from(self.char_ok(&slots, chosen)),
            &|| 0u128,
            &|a, b| a + b,
        )
    }

    fn fold<T, L, I, C>(&self, slots: &[(usize, u64)], leaf: &L, identity: &I, combine: &C) -> T
    where
        T: Send,
        L: Fn(&[&Cand]) -> T + Sync,
        I: Fn() -> T + Sync,
        C: Fn(T, T) -> T + Sync,
    {
        if slots.is_empty() {
            return leaf(&[]);
        }
        self.cands[&slots[0].1]
            .par_iter()
            .map(|c| {
                let mut chosen = vec![c];
                self.descend(slots, 1, &mut chosen, leaf, identity, combine)
            })
            .reduce(identity, combine)
    }

    fn descend<'c, T, L, I, C>(
        &'c self,
        slots: &[(usize, u64)],
        depth: usize,
        chosen: &mut Vec<&'c Cand>,
        leaf: &L,
        identity: &I,
        combine: &C,
    ) -> T
    where
        L: Fn(&[&Cand]) -> T + Sync,
        I: Fn() -> T + Sync,
        C: Fn(T, T) -> T + Sync,
    {
        if depth == slots.len() {
            return leaf(chosen);
        }
        let mut acc = identity();
        for c in &self.cands[&slots[depth].1] {
            if chosen.iter().all(|p| coprime(self.ctx, &p.poly, &c.poly)) {
                chosen.push(c);
                let sub = self.descend(slots, depth + 1, chosen, leaf, identity, combine);
                chosen.pop();
                acc = combine(acc, sub);
            }
        }
        acc
    }
}

/// Tuples in one stratum meeting the constraint.
pub fn count_stratum(
    ctx: &FieldCtx,
    group: &GroupSpec,
    sv: &StrataVector,
    cc: &CensusConstraint,
    budget: &Budget,
) -> Result<u128> {
    if sv.degrees.len() as u64 != group.order() - 1 {
        return Err(Error::InvalidInput("degree table must cover every nonzero vector".into()));
    }
    let (k, _) = cc.validated(ctx, group)?;
    if let Some(k) = &k {
        if &sv.degree_class(group) != k {
            return Ok(0);
        }
    }
    let degrees: BTreeSet<u64> = sv.degrees.iter().copied().filter(|d| *d > 0).collect();
    budget.check(build_estimate(ctx.q(), &degrees).saturating_add(sv_estimate(ctx.q(), sv)))?;
    let run = CensusRun::prepare(ctx, group, cc, &degrees)?;
    Ok(run.count_sv(sv))
}

fn count_sv_family(
    ctx: &FieldCtx,
    group: &GroupSpec,
    svs: &[StrataVector],
    cc: &CensusConstraint,
    budget: &Budget,
) -> Result<u128> {
    budget.check(family_estimate(ctx.q(), svs))?;
    let run = CensusRun::prepare(ctx, group, cc, &family_degrees(svs))?;
    Ok(svs.iter().map(|sv| run.count_sv(sv)).sum())
}

/// Tuples of exact weighted degree meeting the constraint.
pub fn count_fixed_degree(
    ctx: &FieldCtx,
    group: &GroupSpec,
    weights: &StrataWeights,
    d_target: u64,
    cc: &CensusConstraint,
    budget: &Budget,
) -> Result<u128> {
    let svs = weighted_strata(group, weights, d_target, cc.k.as_ref());
    count_sv_family(ctx, group, &svs, cc, budget)
}

/// Monic tuples meeting the genus target, any support.
pub fn count_moduli(
    ctx: &FieldCtx,
    group: &GroupSpec,
    weights: &StrataWeights,
    g: u64,
    cc: &CensusConstraint,
    budget: &Budget,
) -> Result<u128> {
    let svs = genus_strata(group, weights, g, cc.k.as_ref());
    count_sv_family(ctx, group, &svs, cc, budget)
}

/// Genus census restricted to strata supported inside a subgroup.
pub fn count_moduli_within(
    ctx: &FieldCtx,
    group: &GroupSpec,
    weights: &StrataWeights,
    g: u64,
    cc: &CensusConstraint,
    support: &Subgroup,
    budget: &Budget,
) -> Result<u128> {
    let svs = genus_strata_within(group, weights, g, cc.k.as_ref(), support);
    count_sv_family(ctx, group, &svs, cc, budget)
}

/// Monic tuples whose support generates the full group, by a Moebius sieve
/// over the subgroup lattice.
pub fn count_exact_mobius(
    ctx: &FieldCtx,
    group: &GroupSpec,
    g: u64,
    cc: &CensusConstraint,
    budget: &Budget,
) -> Result<u128> {
    let weights = StrataWeights::hurwitz(group);
    let mut terms = Vec::new();
    for h in group.subgroups()? {
        let mu = delsarte_mu(&group.quotient_invariants(&h));
        if mu == 0 {
            continue;
        }
        let svs = genus_strata_within(group, &weights, g, cc.k.as_ref(), &h);
        terms.push((mu, svs));
    }
    let all: Vec<StrataVector> =
        terms.iter().flat_map(|(_, svs)| svs.iter().cloned()).collect();
    budget.check(family_estimate(ctx.q(), &all))?;
    let run = CensusRun::prepare(ctx, group, cc, &family_degrees(&all))?;
    let mut total: i128 = 0;
    for (mu, svs) in &terms {
        let m: u128 = svs.iter().map(|sv| run.count_sv(sv)).sum();
        total += i128::from(*mu) * m as i128;
    }
    if total < 0 {
        return Err(Error::Inconsistent("negative sieve total".into()));
    }
    Ok(total as u128)
}

/// Monic tuples kept by building each cover and testing its Galois subgroup
/// and genus directly.
pub fn count_exact_direct(
    ctx: &FieldCtx,
    group: &GroupSpec,
    g: u64,
    cc: &CensusConstraint,
    budget: &Budget,
) -> Result<u128> {
    let weights = StrataWeights::hurwitz(group);
    let svs =
        strata_vectors(group, &weights, genus_target(group, g), SumRule::AtMost, None, None);
    budget.check(family_estimate(ctx.q(), &svs))?;
    let run = CensusRun::prepare(ctx, group, cc, &family_degrees(&svs))?;
    let lead = vec![FieldElem::ONE; group.rank()];
    let mut total = 0u128;
    for sv in &svs {
        let slots = run.slots_for(sv);
        total += run.fold(
            &slots,
            &|chosen| {
                if !run.char_ok(&slots, chosen) {
                    return 0u128;
                }
                let parts = slots
                    .iter()
                    .zip(chosen)
                    .map(|((ri, _), c)| (run.reps[*ri].clone(), c.poly.clone()))
                    .collect();
                let cover = KummerCover::from_strata(ctx, group.clone(), parts, lead.clone())
                    .expect("stratum tuples form valid covers");
                if let Some(k) = &run.k {
                    if &cover.strata().degree_vector(group) != k {
                        return 0;
                    }
                }
                if cover.galois_subgroup().order() != group.order() {
                    return 0;
                }
                match cover.true_genus() {
                    Ok(tg) if tg == g => 1,
                    _ => 0,
                }
            },
            &|| 0u128,
            &|a, b| a + b,
        );
    }
    Ok(total)
}

/// Moduli total recovered from series coefficients instead of enumeration.
fn moduli_from_series(
    ctx: &FieldCtx,
    group: &GroupSpec,
    weights: &StrataWeights,
    g: u64,
    cc: &CensusConstraint,
    support: &Subgroup,
) -> Result<u128> {
    let target = genus_target(group, g);
    let classes: Vec<GroupVec> = match &cc.k {
        Some(k) => vec![group.reduce(&k.0)],
        None => support.elements().to_vec(),
    };
    let mut sum = 0u128;
    for class in classes {
        let c = weights.class_weight(group, &class);
        if c >= target {
            continue;
        }
        let rem = (target - c) as usize;
        let cck = CensusConstraint {
            k: Some(class),
            points: cc.points.clone(),
            eps: cc.eps.clone(),
        };
        let series = crate::genfun::series_f_within(ctx, group, &cck, weights, support, rem)?;
        let counts = crate::genfun::series_counts(&series)?;
        sum += counts[rem];
    }
    Ok(sum)
}

/// Monic tuples whose support generates the full group, from the generating
/// series through the same Moebius sieve.
pub fn count_exact_series(
    ctx: &FieldCtx,
    group: &GroupSpec,
    g: u64,
    cc: &CensusConstraint,
) -> Result<u128> {
    cc.validated(ctx, group)?;
    let weights = StrataWeights::hurwitz(group);
    let mut total: i128 = 0;
    for h in group.subgroups()? {
        let mu = delsarte_mu(&group.quotient_invariants(&h));
        if mu == 0 {
            continue;
        }
        let m = moduli_from_series(ctx, group, &weights, g, cc, &h)?;
        total += i128::from(mu) * m as i128;
    }
    if total < 0 {
        return Err(Error::Inconsistent("negative sieve total".into()));
    }
    Ok(total as u128)
}

/// Path selector for exact-support counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusPath {
    Mobius,
    Direct,
    Series,
}

/// Exact-support count through the chosen path.
pub fn count_exact(
    ctx: &FieldCtx,
    group: &GroupSpec,
    g: u64,
    cc: &CensusConstraint,
    path: CensusPath,
    budget: &Budget,
) -> Result<u128> {
    match path {
        CensusPath::Mobius => count_exact_mobius(ctx, group, g, cc, budget),
        CensusPath::Direct => count_exact_direct(ctx, group, g, cc, budget),
        CensusPath::Series => count_exact_series(ctx, group, g, cc),
    }
}

/// Twisted family total: `|G|` times the exact-support count.
pub fn count_twisted(
    ctx: &FieldCtx,
    group: &GroupSpec,
    g: u64,
    cc: &CensusConstraint,
    path: CensusPath,
    budget: &Budget,
) -> Result<u128> {
    Ok(u128::from(group.order()) * count_exact(ctx, group, g, cc, path, budget)?)
}

/// One twist vector per unit-class combination, in mixed-radix order.
pub fn lead_vectors(ctx: &FieldCtx, group: &GroupSpec) -> Vec<Vec<FieldElem>> {
    let mut out = vec![Vec::new()];
    for r in group.factors() {
        let mut next = Vec::with_capacity(out.len() * *r as usize);
        for prefix in &out {
            for k in 0..*r {
                let mut v = prefix.clone();
                v.push(ctx.unit_class_rep(*r, k));
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn merge_hist(mut a: BTreeMap<u64, u128>, b: BTreeMap<u64, u128>) -> BTreeMap<u64, u128> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Histogram of rational point counts over the twisted exact-support family.
pub fn point_count_histogram(
    ctx: &FieldCtx,
    group: &GroupSpec,
    g: u64,
    budget: &Budget,
) -> Result<BTreeMap<u64, u128>> {
    let cc = CensusConstraint::none();
    let weights = StrataWeights::hurwitz(group);
    let svs: Vec<StrataVector> = genus_strata(group, &weights, g, None)
        .into_iter()
        .filter(|sv| group.subgroup_generated(&sv.support(group)).order() == group.order())
        .collect();
    let per_leaf = u128::from(group.order()).saturating_mul(u128::from(ctx.q()) + 2);
    budget.check(family_estimate(ctx.q(), &svs).saturating_mul(per_leaf))?;
    let run = CensusRun::prepare(ctx, group, &cc, &family_degrees(&svs))?;
    let leads = lead_vectors(ctx, group);
    let mut hist = BTreeMap::new();
    for sv in &svs {
        let slots = run.slots_for(sv);
        let part = run.fold(
            &slots,
            &|chosen| {
                let parts = slots
                    .iter()
                    .zip(chosen)
                    .map(|((ri, _), c)| (run.reps[*ri].clone(), c.poly.clone()))
                    .collect();
                let base = KummerCover::from_strata(
                    ctx,
                    group.clone(),
                    parts,
                    vec![FieldElem::ONE; group.rank()],
                )
                .expect("stratum tuples form valid covers");
                let mut local = BTreeMap::new();
                for lead in &leads {
                    let cover = base.with_lead(lead.clone()).expect("unit twists stay valid");
                    let n = cover.point_count(ctx, 1).expect("base point count");
                    *local.entry(n).or_insert(0u128) += 1;
                }
                local
            },
            &BTreeMap::new,
            &merge_hist,
        );
        hist = merge_hist(hist, part);
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::make_field;

    fn spec(factors: &[u64]) -> GroupSpec {
        GroupSpec::new(factors.to_vec()).unwrap()
    }

    fn sv(group: &GroupSpec, degrees: &[u64]) -> StrataVector {
        StrataVector::new(group, degrees.to_vec()).unwrap()
    }

    #[test]
    fn genus_strata_for_double_covers() {
        let g2 = spec(&[2]);
        let w = StrataWeights::hurwitz(&g2);
        assert_eq!(w.values(), &[1]);
        let degs = |svs: Vec<StrataVector>| -> Vec<Vec<u64>> {
            svs.into_iter().map(|s| s.degrees).collect()
        };
        assert_eq!(degs(genus_strata(&g2, &w, 0, None)), vec![vec![1], vec![2]]);
        assert_eq!(degs(genus_strata(&g2, &w, 1, None)), vec![vec![3], vec![4]]);
        let odd = GroupVec(vec![1]);
        assert_eq!(degs(genus_strata(&g2, &w, 1, Some(&odd))), vec![vec![3]]);
        assert_eq!(degs(weighted_strata(&g2, &w, 3, None)), vec![vec![3]]);
    }

    #[test]
    fn genus_strata_match_brute_force_for_quartic_group() {
        let g4 = spec(&[4]);
        let w = StrataWeights::hurwitz(&g4);
        assert_eq!(w.values(), &[3, 2, 3]);
        let target = genus_target(&g4, 1);
        assert_eq!(target, 8);
        let mut brute = Vec::new();
        for d1 in 0..=target {
            for d2 in 0..=target {
                for d3 in 0..=target {
                    let s = sv(&g4, &[d1, d2, d3]);
                    let total = s.weighted_degree(&w)
                        + w.class_weight(&g4, &s.degree_class(&g4));
                    if total == target {
                        brute.push(s);
                    }
                }
            }
        }
        brute.sort();
        let mut got = genus_strata(&g4, &w, 1, None);
        got.sort();
        assert_eq!(got, brute);
        assert_eq!(got.len(), 8);
    }

    #[test]
    fn stratum_count_with_marked_point() {
        let ctx = make_field(3, 1).unwrap();
        let g2 = spec(&[2]);
        let s = sv(&g2, &[2]);
        let budget = Budget::default();
        let square = CensusConstraint {
            k: None,
            points: vec![FieldElem::ZERO],
            eps: vec![vec![0]],
        };
        assert_eq!(count_stratum(&ctx, &g2, &s, &square, &budget).unwrap(), 1);
        let nonsquare = CensusConstraint {
            k: None,
            points: vec![FieldElem::ZERO],
            eps: vec![vec![1]],
        };
        assert_eq!(count_stratum(&ctx, &g2, &s, &nonsquare, &budget).unwrap(), 3);
        let free = CensusConstraint::none();
        assert_eq!(count_stratum(&ctx, &g2, &s, &free, &budget).unwrap(), 6);
    }

    #[test]
    fn stratum_count_handles_empty_candidate_lists() {
        let ctx = make_field(3, 1).unwrap();
        let g2 = spec(&[2]);
        let s = sv(&g2, &[1]);
        let all_points = CensusConstraint {
            k: None,
            points: vec![FieldElem(0), FieldElem(1), FieldElem(2)],
            eps: vec![vec![0], vec![0], vec![0]],
        };
        assert_eq!(
            count_stratum(&ctx, &g2, &s, &all_points, &Budget::default()).unwrap(),
            0
        );
    }

    #[test]
    fn fixed_degree_counts_over_f3() {
        let ctx = make_field(3, 1).unwrap();
        let g2 = spec(&[2]);
        let w = StrataWeights::hurwitz(&g2);
        let budget = Budget::default();
        let free = CensusConstraint::none();
        assert_eq!(count_fixed_degree(&ctx, &g2, &w, 4, &free, &budget).unwrap(), 54);
        assert_eq!(count_fixed_degree(&ctx, &g2, &w, 0, &free, &budget).unwrap(), 1);
        let odd = CensusConstraint::with_class(GroupVec(vec![1]));
        assert_eq!(count_fixed_degree(&ctx, &g2, &w, 3, &odd, &budget).unwrap(), 18);
        let even = CensusConstraint::with_class(GroupVec(vec![0]));
        assert_eq!(count_fixed_degree(&ctx, &g2, &w, 3, &even, &budget).unwrap(), 0);
    }

    #[test]
    fn exact_support_counts_match_closed_form_for_double_covers() {
        let ctx = make_field(3, 1).unwrap();
        let g2 = spec(&[2]);
        let free = CensusConstraint::none();
        let budget = Budget::default();
        for g in 1..=3u64 {
            let expected = 2 * (3u128.pow(2 * g as u32 + 1) + 3u128.pow(2 * g as u32));
            assert_eq!(count_exact_mobius(&ctx, &g2, g, &free, &budget).unwrap(), expected);
        }
        assert_eq!(count_exact_mobius(&ctx, &g2, 0, &free, &budget).unwrap(), 9);
        for g in 0..=2u64 {
            assert_eq!(
                count_exact_direct(&ctx, &g2, g, &free, &budget).unwrap(),
                count_exact_mobius(&ctx, &g2, g, &free, &budget).unwrap()
            );
            assert_eq!(
                count_exact_series(&ctx, &g2, g, &free).unwrap(),
                count_exact_mobius(&ctx, &g2, g, &free, &budget).unwrap()
            );
        }
        assert_eq!(
            count_twisted(&ctx, &g2, 1, &free, CensusPath::Mobius, &budget).unwrap(),
            2 * 72
        );
    }

    #[test]
    fn quartic_census_overcount_comes_from_quadratic_support() {
        let ctx = make_field(5, 1).unwrap();
        let g4 = spec(&[4]);
        let w = StrataWeights::hurwitz(&g4);
        let free = CensusConstraint::none();
        let budget = Budget::default();
        let m = count_moduli(&ctx, &g4, &w, 1, &free, &budget).unwrap();
        let exact = count_exact_mobius(&ctx, &g4, 1, &free, &budget).unwrap();
        assert_eq!(m - exact, 600);
        assert_eq!(exact, count_exact_direct(&ctx, &g4, 1, &free, &budget).unwrap());
        assert_eq!(exact, count_exact_series(&ctx, &g4, 1, &free).unwrap());
        for degrees in [[0u64, 4, 0], [0, 3, 0]] {
            let s = sv(&g4, &degrees);
            assert_eq!(
                count_stratum(&ctx, &g4, &s, &free, &budget).unwrap(),
                if degrees[1] == 4 { 500 } else { 100 }
            );
        }
    }

    #[test]
    fn moebius_and_partition_identities_agree_on_klein_census() {
        let ctx = make_field(5, 1).unwrap();
        let klein = spec(&[2, 2]);
        let w = StrataWeights::hurwitz(&klein);
        let free = CensusConstraint::none();
        let budget = Budget::default();
        for g in [0u64, 1] {
            let m = count_moduli(&ctx, &klein, &w, g, &free, &budget).unwrap();
            let mut pieces = 0i128;
            for h in klein.subgroups().unwrap() {
                let mut exact_within = 0i128;
                for k in klein.subgroups().unwrap() {
                    if !k.elements().iter().all(|v| h.contains(v)) {
                        continue;
                    }
                    let mu = delsarte_mu(&klein.quotient_invariants_between(&h, &k));
                    if mu == 0 {
                        continue;
                    }
                    let c =
                        count_moduli_within(&ctx, &klein, &w, g, &free, &k, &budget).unwrap();
                    exact_within += i128::from(mu) * c as i128;
                }
                assert!(exact_within >= 0);
                pieces += exact_within;
            }
            assert_eq!(pieces as u128, m);
        }
    }

    #[test]
    fn support_restriction_matches_reparametrized_census() {
        let ctx = make_field(5, 1).unwrap();
        let klein = spec(&[2, 2]);
        let w = StrataWeights::hurwitz(&klein);
        let diag = klein.subgroup_generated(&[GroupVec(vec![1, 1])]);
        let free = CensusConstraint::none();
        let budget = Budget::default();
        let restricted =
            count_moduli_within(&ctx, &klein, &w, 1, &free, &diag, &budget).unwrap();
        let g2 = spec(&[2]);
        let w2 = StrataWeights::hurwitz(&g2);
        let plain = count_moduli(&ctx, &g2, &w2, 1, &free, &budget).unwrap();
        assert_eq!(restricted, plain);
        assert_eq!(restricted, 600);
    }

    #[test]
    fn budget_guard_rejects_oversized_runs() {
        let ctx = make_field(3, 1).unwrap();
        let g2 = spec(&[2]);
        let w = StrataWeights::hurwitz(&g2);
        let err = count_moduli(&ctx, &g2, &w, 5, &CensusConstraint::none(), &Budget::new(10))
            .unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn histogram_matches_quadratic_character_oracle() {
        let ctx = make_field(3, 1).unwrap();
        let g2 = spec(&[2]);
        let hist = point_count_histogram(&ctx, &g2, 1, &Budget::default()).unwrap();
        let mass: u128 = hist.values().sum();
        assert_eq!(mass, 144);

        let chi = |v: FieldElem| -> i64 {
            if ctx.dlog(v) % 2 == 0 {
                1
            } else {
                -1
            }
        };
        let mut oracle: BTreeMap<u64, u128> = BTreeMap::new();
        for d in [3usize, 4] {
            for f in polyring::enumerate_monic_squarefree(&ctx, d) {
                for c in [FieldElem(1), FieldElem(2)] {
                    let mut n = 0i64;
                    for x in ctx.elements() {
                        let v = f.evaluate(&ctx, x);
                        if v == FieldElem::ZERO {
                            n += 1;
                        } else {
                            n += 1 + chi(ctx.mul(c, v));
                        }
                    }
                    n += match (d, chi(c)) {
                        (3, _) => 1,
                        (4, 1) => 2,
                        _ => 0,
                    };
                    *oracle.entry(n as u64).or_insert(0) += 1;
                }
            }
        }
        assert_eq!(hist, oracle);
    }

    #[test]
    fn constraint_validation_rejects_malformed_input() {
        let ctx = make_field(3, 1).unwrap();
        let g2 = spec(&[2]);
        let s = sv(&g2, &[2]);
        let budget = Budget::default();
        let dup = CensusConstraint {
            k: None,
            points: vec![FieldElem(1), FieldElem(1)],
            eps: vec![vec![0], vec![0]],
        };
        assert!(count_stratum(&ctx, &g2, &s, &dup, &budget).is_err());
        let missing_row = CensusConstraint {
            k: None,
            points: vec![FieldElem(1)],
            eps: vec![],
        };
        assert!(count_stratum(&ctx, &g2, &s, &missing_row, &budget).is_err());
        let bad_rank = CensusConstraint {
            k: None,
            points: vec![FieldElem(1)],
            eps: vec![vec![0, 0]],
        };
        assert!(count_stratum(&ctx, &g2, &s, &bad_rank, &budget).is_err());
        let outside = CensusConstraint {
            k: None,
            points: vec![FieldElem(7)],
            eps: vec![vec![0]],
        };
        assert!(count_stratum(&ctx, &g2, &s, &outside, &budget).is_err());
    }
}
