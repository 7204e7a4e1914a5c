//! Finite abelian groups in invariant-factor form and their subgroup lattice.
//!
//! A [`GroupSpec`] is a chain `r_1 | r_2 | ... | r_n` with every `r_j >= 2`;
//! elements are coordinate vectors reduced mod the factors.  Subgroups are
//! explicit element sets (distinct subsets count separately, even when
//! isomorphic), produced by closure growth from the trivial subgroup.
//! Invariant factors of subgroups and quotients are recovered from
//! element-order statistics, without Smith normal form.  The Möbius function
//! of the subgroup lattice is Delsarte's: nonzero only on elementary abelian
//! p-parts.

use crate::error::{Error, Result};
use num_integer::Integer;
use std::collections::BTreeSet;

/// Default cap on the group order for subgroup-lattice enumeration.
pub const DEFAULT_LATTICE_CAP: u64 = 256;

/// Element of a [`GroupSpec`], componentwise residues.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupVec(pub Vec<u64>);

impl GroupVec {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// Finite abelian group `Z/r_1 x ... x Z/r_n` with `r_1 | ... | r_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<u64>,
}

impl GroupSpec {
    pub fn new(factors: Vec<u64>) -> Result<GroupSpec> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("invariant factor list is empty".into()));
        }
        for &r in &factors {
            if r < 2 {
                return Err(Error::InvalidGroup(format!("invariant factor {r} < 2")));
            }
        }
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::InvalidGroup(format!(
                    "{} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(GroupSpec { factors })
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        *self.factors.last().unwrap()
    }

    pub fn zero(&self) -> GroupVec {
        GroupVec(vec![0; self.rank()])
    }

    pub fn reduce(&self, v: &[u64]) -> GroupVec {
        GroupVec(
            v.iter()
                .zip(&self.factors)
                .map(|(&c, &r)| c % r)
                .collect(),
        )
    }

    /// All elements in mixed-radix order (last coordinate varies fastest).
    pub fn elements(&self) -> Vec<GroupVec> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut v = vec![0u64; self.rank()];
        loop {
            out.push(GroupVec(v.clone()));
            let mut i = self.rank();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                v[i] += 1;
                if v[i] < self.factors[i] {
                    break;
                }
                v[i] = 0;
            }
        }
    }

    /// All nonzero elements in mixed-radix order.
    pub fn nonzero_elements(&self) -> Vec<GroupVec> {
        self.elements().into_iter().skip(1).collect()
    }

    pub fn add(&self, a: &GroupVec, b: &GroupVec) -> GroupVec {
        GroupVec(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.factors)
                .map(|((&x, &y), &r)| (x + y) % r)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupVec) -> GroupVec {
        GroupVec(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &r)| (r - x) % r)
                .collect(),
        )
    }

    pub fn scalar_mul(&self, k: u64, a: &GroupVec) -> GroupVec {
        GroupVec(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, &r)| (k % r) * x % r)
                .collect(),
        )
    }

    /// Order of `v`: `lcm_j r_j / gcd(r_j, v_j)`.
    pub fn element_order(&self, v: &GroupVec) -> u64 {
        v.0.iter()
            .zip(&self.factors)
            .map(|(&c, &r)| r / r.gcd(&c))
            .fold(1u64, |acc, o| acc.lcm(&o))
    }

    /// Duality pairing `sum_j (r_n / r_j) t_j a_j  (mod r_n)`.
    pub fn pairing(&self, t: &GroupVec, a: &GroupVec) -> u64 {
        let rn = self.exponent();
        t.0.iter()
            .zip(&a.0)
            .zip(&self.factors)
            .map(|((&tj, &aj), &rj)| (rn / rj) % rn * (tj % rj) % rn * (aj % rj) % rn)
            .fold(0u64, |acc, x| (acc + x) % rn)
    }

    /// Default ramification weight `|G| - |G| / order(v)`.
    pub fn hurwitz_weight(&self, v: &GroupVec) -> u64 {
        let g = self.order();
        g - g / self.element_order(v)
    }

    /// Number of elements of order exactly `s` (closed form, no iteration).
    pub fn phi(&self, s: u64) -> u64 {
        if s == 0 {
            return 0;
        }
        let mut total: i64 = 0;
        for d in 1..=s {
            if s % d == 0 {
                let mu = crate::polyring::squarefree_mobius((s / d) as usize);
                if mu != 0 {
                    let killed: u64 = self.factors.iter().map(|&r| r.gcd(&d)).product();
                    total += mu * killed as i64;
                }
            }
        }
        debug_assert!(total >= 0);
        total as u64
    }

    /// Delsarte Möbius function of the abstract group.
    pub fn mobius(&self) -> i64 {
        delsarte_mu(&self.factors)
    }

    /// All subgroups as explicit subsets, with the default lattice cap.
    pub fn subgroups(&self) -> Result<Vec<Subgroup>> {
        self.subgroups_with_cap(DEFAULT_LATTICE_CAP)
    }

    pub fn subgroups_with_cap(&self, cap: u64) -> Result<Vec<Subgroup>> {
        if self.order() > cap {
            return Err(Error::GroupTooLarge {
                order: self.order(),
                cap,
            });
        }
        let all = self.elements();
        let trivial = vec![self.zero()];
        let mut seen: BTreeSet<Vec<GroupVec>> = BTreeSet::new();
        seen.insert(trivial.clone());
        let mut queue = vec![trivial];
        while let Some(h) = queue.pop() {
            for x in &all {
                if x.is_zero() || h.binary_search(x).is_ok() {
                    continue;
                }
                let bigger = extend_subgroup(self, &h, x);
                if seen.insert(bigger.clone()) {
                    queue.push(bigger);
                }
            }
        }
        let mut out: Vec<Subgroup> = seen
            .into_iter()
            .map(|elements| Subgroup::from_sorted_elements(self, elements))
            .collect();
        out.sort_by(|a, b| (a.order(), a.elements()).cmp(&(b.order(), b.elements())));
        Ok(out)
    }

    /// Subgroup generated by a set of elements.
    pub fn subgroup_generated(&self, gens: &[GroupVec]) -> Subgroup {
        let mut h = vec![self.zero()];
        for g in gens {
            let g = self.reduce(&g.0);
            if h.binary_search(&g).is_err() {
                h = extend_subgroup(self, &h, &g);
            }
        }
        Subgroup::from_sorted_elements(self, h)
    }

    /// Invariant factors of the quotient `G / H`.
    pub fn quotient_invariants(&self, h: &Subgroup) -> Vec<u64> {
        let m = self.order() / h.order();
        invariant_factors_from_kill_counts(m, |k| {
            let killed = self
                .elements()
                .iter()
                .filter(|x| h.contains(&self.scalar_mul(k, x)))
                .count() as u64;
            killed / h.order()
        })
    }

    /// Invariant factors of `H / K` for nested subgroups `K <= H`.
    pub fn quotient_invariants_between(&self, h: &Subgroup, k: &Subgroup) -> Vec<u64> {
        debug_assert!(k.elements().iter().all(|v| h.contains(v)));
        let m = h.order() / k.order();
        invariant_factors_from_kill_counts(m, |s| {
            let killed = h
                .elements()
                .iter()
                .filter(|x| k.contains(&self.scalar_mul(s, x)))
                .count() as u64;
            killed / k.order()
        })
    }
}

/// `<H, x>` for sorted subgroup elements `h` and `x` outside it.
fn extend_subgroup(spec: &GroupSpec, h: &[GroupVec], x: &GroupVec) -> Vec<GroupVec> {
    let mut o = 1u64;
    let mut acc = x.clone();
    while h.binary_search(&acc).is_err() {
        acc = spec.add(&acc, x);
        o += 1;
    }
    let mut out = BTreeSet::new();
    let mut shift = spec.zero();
    for _ in 0..o {
        for e in h {
            out.insert(spec.add(e, &shift));
        }
        shift = spec.add(&shift, x);
    }
    out.into_iter().collect()
}

/// Subgroup of a [`GroupSpec`], stored as its full sorted element set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<GroupVec>,
    factors: Vec<u64>,
}

impl Subgroup {
    fn from_sorted_elements(spec: &GroupSpec, elements: Vec<GroupVec>) -> Subgroup {
        let m = elements.len() as u64;
        let factors = invariant_factors_from_kill_counts(m, |k| {
            elements
                .iter()
                .filter(|x| spec.scalar_mul(k, x).is_zero())
                .count() as u64
        });
        Subgroup { elements, factors }
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn elements(&self) -> &[GroupVec] {
        &self.elements
    }

    /// Nonzero elements, the admissible ramification vectors of the subgroup.
    pub fn nonzero_elements(&self) -> impl Iterator<Item = &GroupVec> {
        self.elements.iter().filter(|v| !v.is_zero())
    }

    pub fn contains(&self, v: &GroupVec) -> bool {
        self.elements.binary_search(v).is_ok()
    }

    /// Invariant factors of the abstract group; empty for the trivial subgroup.
    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn mobius(&self) -> i64 {
        delsarte_mu(&self.factors)
    }
}

/// Reconstructs invariant factors from the counts `N(k) = #{x : k x = 0}`.
///
/// For each prime `p | m` the exponent partition is recovered from
/// `log_p N(p^j)`; the invariant factors interleave the largest parts of
/// every prime.  `m` is the group order.
fn invariant_factors_from_kill_counts(m: u64, killed: impl Fn(u64) -> u64) -> Vec<u64> {
    if m == 1 {
        return Vec::new();
    }
    let primes = crate::ffield::prime_factors(m);
    // parts[p]: exponent partition of the p-primary part, sorted descending.
    let mut parts: Vec<Vec<u32>> = Vec::new();
    for &p in &primes {
        // ge[j] = number of partition parts >= j, read off from kill counts.
        let mut ge: Vec<u32> = Vec::new();
        let mut prev_log = 0u32;
        let mut pk = 1u64;
        loop {
            pk *= p;
            let log = ilog(p, killed(pk));
            if log == prev_log {
                break;
            }
            ge.push(log - prev_log);
            prev_log = log;
            if pk > m {
                break;
            }
        }
        let width = ge.first().copied().unwrap_or(0) as usize;
        let mut partition = vec![0u32; width];
        for &count in &ge {
            for slot in partition.iter_mut().take(count as usize) {
                *slot += 1;
            }
        }
        parts.push(partition);
    }
    let width = parts.iter().map(|p| p.len()).max().unwrap_or(0);
    let mut factors = Vec::with_capacity(width);
    for i in 0..width {
        let mut f = 1u64;
        for (pi, &p) in primes.iter().enumerate() {
            let a = parts[pi].get(i).copied().unwrap_or(0);
            f *= p.pow(a);
        }
        factors.push(f);
    }
    factors.reverse();
    debug_assert_eq!(factors.iter().product::<u64>(), m);
    factors
}

fn ilog(p: u64, mut n: u64) -> u32 {
    let mut l = 0;
    while n > 1 {
        debug_assert_eq!(n % p, 0);
        n /= p;
        l += 1;
    }
    l
}

/// Delsarte Möbius function from an invariant factor list (possibly empty).
///
/// Multiplicative over primary parts; a primary part contributes
/// `(-1)^k p^{k(k-1)/2}` when elementary abelian of rank `k`, else `0`.
pub fn delsarte_mu(factors: &[u64]) -> i64 {
    let mut primes: Vec<u64> = Vec::new();
    for &r in factors {
        for p in crate::ffield::prime_factors(r) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    let mut mu = 1i64;
    for p in primes {
        let mut k = 0u32;
        for &r in factors {
            if r % p == 0 {
                if r % (p * p) == 0 {
                    return 0;
                }
                k += 1;
            }
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        mu *= sign * (p as i64).pow(k * (k - 1) / 2);
    }
    mu
}

/// `sum_{H <= G} mu(H)` over all subset-subgroups: `1` iff `G` is trivial,
/// otherwise `0`.
pub fn mobius_lattice_sum(spec: &GroupSpec) -> Result<i64> {
    let subgroups = spec.subgroups()?;
    Ok(subgroups.iter().map(|h| h.mobius()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(factors: &[u64]) -> GroupSpec {
        GroupSpec::new(factors.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(GroupSpec::new(vec![]).is_err());
        assert!(GroupSpec::new(vec![1]).is_err());
        assert!(GroupSpec::new(vec![3, 2]).is_err());
        assert!(GroupSpec::new(vec![2, 4, 8]).is_ok());
    }

    #[test]
    fn element_order_closed_form_matches_brute_force() {
        for g in [spec(&[2]), spec(&[4]), spec(&[2, 4]), spec(&[3, 3]), spec(&[2, 2, 6])] {
            for v in g.elements() {
                let mut acc = v.clone();
                let mut k = 1;
                while !acc.is_zero() {
                    acc = g.add(&acc, &v);
                    k += 1;
                }
                assert_eq!(g.element_order(&v), k, "group {:?} v {:?}", g.factors(), v);
            }
        }
    }

    #[test]
    fn phi_sums_to_order() {
        for g in [spec(&[2]), spec(&[6]), spec(&[2, 4]), spec(&[3, 3]), spec(&[2, 2, 2])] {
            let total: u64 = divisors(g.exponent()).iter().map(|&s| g.phi(s)).sum();
            assert_eq!(total, g.order());
            // Closed form matches direct counting.
            for s in divisors(g.exponent()) {
                let counted = g
                    .elements()
                    .iter()
                    .filter(|v| g.element_order(v) == s)
                    .count() as u64;
                assert_eq!(g.phi(s), counted);
            }
        }
    }

    fn divisors(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n % d == 0).collect()
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(spec(&[2, 2]).subgroups().unwrap().len(), 5);
        assert_eq!(spec(&[3, 3]).subgroups().unwrap().len(), 6);
        assert_eq!(spec(&[5, 5]).subgroups().unwrap().len(), 8);
        assert_eq!(spec(&[4]).subgroups().unwrap().len(), 3);
        assert_eq!(spec(&[6]).subgroups().unwrap().len(), 4);
    }

    #[test]
    fn lattice_cap() {
        let g = spec(&[2, 2, 2, 2, 2, 2, 2, 2, 2]);
        assert!(matches!(
            g.subgroups(),
            Err(Error::GroupTooLarge { order: 512, .. })
        ));
    }

    #[test]
    fn delsarte_values() {
        assert_eq!(delsarte_mu(&[]), 1);
        assert_eq!(delsarte_mu(&[2]), -1);
        assert_eq!(delsarte_mu(&[3]), -1);
        assert_eq!(delsarte_mu(&[5, 5]), 5);
        assert_eq!(delsarte_mu(&[2, 2]), 2);
        assert_eq!(delsarte_mu(&[4]), 0);
        assert_eq!(delsarte_mu(&[2, 4]), 0);
        assert_eq!(delsarte_mu(&[2, 2, 2]), -8);
        assert_eq!(delsarte_mu(&[6, 6]), 6);
        assert_eq!(delsarte_mu(&[6]), 1);
    }

    #[test]
    fn lattice_sum_vanishes_for_nontrivial_groups() {
        for g in [
            spec(&[2]),
            spec(&[3]),
            spec(&[4]),
            spec(&[2, 2]),
            spec(&[2, 4]),
            spec(&[3, 3]),
            spec(&[2, 2, 2]),
            spec(&[12]),
            spec(&[6, 6]),
        ] {
            assert_eq!(mobius_lattice_sum(&g).unwrap(), 0, "{:?}", g.factors());
        }
    }

    #[test]
    fn subgroup_invariant_factors() {
        let g = spec(&[4, 4]);
        let h = g.subgroup_generated(&[GroupVec(vec![2, 0]), GroupVec(vec![0, 2])]);
        assert_eq!(h.invariant_factors(), &[2, 2]);
        let c = g.subgroup_generated(&[GroupVec(vec![1, 2])]);
        assert_eq!(c.invariant_factors(), &[4]);
        let t = g.subgroup_generated(&[]);
        assert!(t.is_trivial());
        assert_eq!(t.invariant_factors(), &[] as &[u64]);
    }

    #[test]
    fn quotient_invariants() {
        let z4 = spec(&[4]);
        let h = z4.subgroup_generated(&[GroupVec(vec![2])]);
        assert_eq!(z4.quotient_invariants(&h), vec![2]);

        let klein = spec(&[2, 2]);
        let h = klein.subgroup_generated(&[GroupVec(vec![1, 0])]);
        assert_eq!(klein.quotient_invariants(&h), vec![2]);
        let t = klein.subgroup_generated(&[]);
        assert_eq!(klein.quotient_invariants(&t), vec![2, 2]);

        let g44 = spec(&[4, 4]);
        let h = g44.subgroup_generated(&[GroupVec(vec![1, 0])]);
        assert_eq!(g44.quotient_invariants(&h), vec![4]);
        let h22 = g44.subgroup_generated(&[GroupVec(vec![2, 0]), GroupVec(vec![0, 2])]);
        assert_eq!(g44.quotient_invariants(&h22), vec![2, 2]);
    }

    #[test]
    fn quotient_invariants_between_nested_subgroups() {
        let g44 = spec(&[4, 4]);
        let h = g44.subgroup_generated(&[GroupVec(vec![1, 0]), GroupVec(vec![0, 2])]);
        let k = g44.subgroup_generated(&[GroupVec(vec![2, 0])]);
        assert_eq!(g44.quotient_invariants_between(&h, &k), vec![2, 2]);
        let t = g44.subgroup_generated(&[]);
        assert_eq!(g44.quotient_invariants_between(&h, &t), vec![2, 4]);
        assert_eq!(g44.quotient_invariants_between(&h, &h), Vec::<u64>::new());
    }

    #[test]
    fn pairing_is_bilinear_mod_exponent() {
        let g = spec(&[2, 4]);
        for t in g.elements() {
            for a in g.elements() {
                for b in g.elements() {
                    let lhs = g.pairing(&t, &g.add(&a, &b));
                    let rhs = (g.pairing(&t, &a) + g.pairing(&t, &b)) % g.exponent();
                    assert_eq!(lhs, rhs);
                }
            }
        }
        // Nondegenerate: only t = 0 pairs to zero with everything.
        let trivial: Vec<_> = g
            .elements()
            .into_iter()
            .filter(|t| g.elements().iter().all(|a| g.pairing(t, a) == 0))
            .collect();
        assert_eq!(trivial, vec![g.zero()]);
    }

    #[test]
    fn hurwitz_weights() {
        let z2 = spec(&[2]);
        assert_eq!(z2.hurwitz_weight(&GroupVec(vec![1])), 1);
        let z4 = spec(&[4]);
        assert_eq!(z4.hurwitz_weight(&GroupVec(vec![1])), 3);
        assert_eq!(z4.hurwitz_weight(&GroupVec(vec![2])), 2);
        let klein = spec(&[2, 2]);
        for v in klein.nonzero_elements() {
            assert_eq!(klein.hurwitz_weight(&v), 2);
        }
    }

    #[test]
    fn subgroups_of_klein_are_the_expected_subsets() {
        let g = spec(&[2, 2]);
        let subs = g.subgroups().unwrap();
        let sizes: Vec<u64> = subs.iter().map(|h| h.order()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 4]);
        // Möbius by order: 1, -1, -1, -1, 2 sums to 0.
        let mus: Vec<i64> = subs.iter().map(|h| h.mobius()).collect();
        assert_eq!(mus, vec![1, -1, -1, -1, 2]);
    }
}
