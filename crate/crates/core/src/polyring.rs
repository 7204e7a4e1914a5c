//! Monic polynomials over a small finite field.
//!
//! Coefficients are stored densely, constant term first, with the leading
//! coefficient always `1`.  The module provides
//!
//! * Horner evaluation, products, powers and exact division,
//! * squarefree / power-free tests via derivative gcds and factorization,
//! * exhaustive enumeration of monic polynomials in a fixed deterministic
//!   order (enumeration index read base `q`, constant term varying fastest),
//! * factorization: trial division against a precomputed [`IrredTable`] for
//!   small degrees, distinct-degree splitting with deterministic
//!   Cantor-Zassenhaus refinement above that,
//! * exact counts of monic squarefree and monic irreducible polynomials.

use crate::error::{Error, Result};
use crate::ffield::{FieldCtx, FieldElem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Monic dense polynomial; `coeffs[i]` is the coefficient of `x^i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonicPoly {
    coeffs: Vec<FieldElem>,
}

impl MonicPoly {
    /// The constant polynomial `1`.
    pub fn one() -> MonicPoly {
        MonicPoly {
            coeffs: vec![FieldElem::ONE],
        }
    }

    /// `x - a`.
    pub fn x_minus(ctx: &FieldCtx, a: FieldElem) -> MonicPoly {
        MonicPoly {
            coeffs: vec![ctx.neg(a), FieldElem::ONE],
        }
    }

    pub fn from_coeffs(coeffs: Vec<FieldElem>) -> Result<MonicPoly> {
        if coeffs.last() != Some(&FieldElem::ONE) {
            return Err(Error::InvalidInput("polynomial is not monic".into()));
        }
        Ok(MonicPoly { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_one(&self) -> bool {
        self.degree() == 0
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    /// Horner evaluation.
    pub fn evaluate(&self, ctx: &FieldCtx, x: FieldElem) -> FieldElem {
        raw_evaluate(ctx, &self.coeffs, x)
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &MonicPoly) -> MonicPoly {
        MonicPoly {
            coeffs: raw_mul(ctx, &self.coeffs, &other.coeffs),
        }
    }

    pub fn pow(&self, ctx: &FieldCtx, k: u32) -> MonicPoly {
        let mut acc = MonicPoly::one();
        for _ in 0..k {
            acc = acc.mul(ctx, self);
        }
        acc
    }

    /// Reversal `x^deg * f(1/x)` as a coefficient vector (not monic in general).
    pub fn reversed(&self) -> Vec<FieldElem> {
        let mut v = self.coeffs.clone();
        v.reverse();
        v
    }

    /// Coefficients mapped through an embedding table into an extension field.
    pub fn embedded(&self, embed: &[FieldElem]) -> Vec<FieldElem> {
        self.coeffs
            .iter()
            .map(|c| embed[c.index() as usize])
            .collect()
    }
}

// Raw (not necessarily monic) dense polynomial helpers.  The zero polynomial
// is the empty vector; otherwise the top coefficient is nonzero.

pub(crate) fn raw_trim(v: &mut Vec<FieldElem>) {
    while v.last() == Some(&FieldElem::ZERO) {
        v.pop();
    }
}

pub(crate) fn raw_evaluate(ctx: &FieldCtx, f: &[FieldElem], x: FieldElem) -> FieldElem {
    let mut acc = FieldElem::ZERO;
    for &c in f.iter().rev() {
        acc = ctx.add(ctx.mul(acc, x), c);
    }
    acc
}

pub(crate) fn raw_mul(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
        }
    }
    out
}

pub(crate) fn raw_derivative(ctx: &FieldCtx, f: &[FieldElem]) -> Vec<FieldElem> {
    let mut out = Vec::with_capacity(f.len().saturating_sub(1));
    for (i, &c) in f.iter().enumerate().skip(1) {
        let scalar = ctx.element((i as u64) % ctx.p());
        out.push(ctx.mul(scalar, c));
    }
    raw_trim(&mut out);
    out
}

/// Division with remainder by a nonzero divisor; returns `(quotient, remainder)`.
pub(crate) fn raw_divrem(
    ctx: &FieldCtx,
    a: &[FieldElem],
    b: &[FieldElem],
) -> (Vec<FieldElem>, Vec<FieldElem>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = a.to_vec();
    raw_trim(&mut rem);
    let db = b.len() - 1;
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let lead_inv = ctx.inv(b[db]);
    let mut quot = vec![FieldElem::ZERO; rem.len() - db];
    while rem.len() > db {
        let dr = rem.len() - 1;
        let c = ctx.mul(rem[dr], lead_inv);
        quot[dr - db] = c;
        for (j, &bj) in b.iter().enumerate() {
            let k = dr - db + j;
            rem[k] = ctx.sub(rem[k], ctx.mul(c, bj));
        }
        raw_trim(&mut rem);
        if rem.len() <= db {
            break;
        }
    }
    (quot, rem)
}

/// Monic gcd; `gcd(0, 0)` is not used.
pub(crate) fn raw_gcd_monic(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    raw_trim(&mut x);
    raw_trim(&mut y);
    while !y.is_empty() {
        let (_, r) = raw_divrem(ctx, &x, &y);
        x = y;
        y = r;
    }
    let lead_inv = ctx.inv(*x.last().expect("gcd of two zero polynomials"));
    for c in &mut x {
        *c = ctx.mul(*c, lead_inv);
    }
    x
}

/// Exact division of monic by monic; panics if the division is not exact.
pub(crate) fn monic_exact_div(ctx: &FieldCtx, a: &MonicPoly, b: &MonicPoly) -> MonicPoly {
    let (q, r) = raw_divrem(ctx, &a.coeffs, &b.coeffs);
    assert!(r.is_empty(), "inexact division");
    MonicPoly { coeffs: q }
}

pub(crate) fn divides(ctx: &FieldCtx, divisor: &MonicPoly, f: &[FieldElem]) -> bool {
    raw_divrem(ctx, f, &divisor.coeffs).1.is_empty()
}

/// Squarefree test via `gcd(f, f')`; a vanishing derivative means a p-th power.
pub fn is_squarefree(ctx: &FieldCtx, f: &MonicPoly) -> bool {
    if f.degree() <= 1 {
        return true;
    }
    let der = raw_derivative(ctx, &f.coeffs);
    if der.is_empty() {
        return false;
    }
    raw_gcd_monic(ctx, &f.coeffs, &der).len() == 1
}

/// `f` has no irreducible factor of multiplicity `>= r`.
pub fn is_power_free(ctx: &FieldCtx, table: &IrredTable, f: &MonicPoly, r: u64) -> Result<bool> {
    if r < 2 {
        return Err(Error::InvalidInput("power-free order must be at least 2".into()));
    }
    if r == 2 {
        return Ok(is_squarefree(ctx, f));
    }
    let factors = factorize(ctx, table, f)?;
    Ok(factors.iter().all(|&(_, m)| (m as u64) < r))
}

/// The monic polynomial of degree `d` at position `index` in enumeration
/// order: base-`q` digits of `index`, constant term = least significant.
pub fn monic_poly(ctx: &FieldCtx, d: usize, index: u128) -> MonicPoly {
    let q = ctx.q() as u128;
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut x = index;
    for _ in 0..d {
        coeffs.push(ctx.element((x % q) as u64));
        x /= q;
    }
    assert_eq!(x, 0, "index out of range for degree {d}");
    coeffs.push(FieldElem::ONE);
    MonicPoly { coeffs }
}

/// Number of monic polynomials of degree `d`.
pub fn monic_count(q: u64, d: usize) -> u128 {
    (q as u128).pow(d as u32)
}

/// All monic polynomials of degree `d` in enumeration order.
pub fn enumerate_monic<'a>(ctx: &'a FieldCtx, d: usize) -> impl Iterator<Item = MonicPoly> + 'a {
    (0..monic_count(ctx.q(), d)).map(move |i| monic_poly(ctx, d, i))
}

/// Monic squarefree polynomials of degree `d` in enumeration order.
pub fn enumerate_monic_squarefree<'a>(
    ctx: &'a FieldCtx,
    d: usize,
) -> impl Iterator<Item = MonicPoly> + 'a {
    enumerate_monic(ctx, d).filter(move |f| is_squarefree(ctx, f))
}

/// Exact count of monic squarefree polynomials of degree `d` over `F_q`.
pub fn squarefree_count(q: u64, d: usize) -> u128 {
    match d {
        0 => 1,
        1 => q as u128,
        _ => (q as u128).pow(d as u32) - (q as u128).pow(d as u32 - 1),
    }
}

/// Exact count of monic irreducibles of degree `d` over `F_q` (Gauss formula).
pub fn irreducible_count(q: u64, d: usize) -> u128 {
    assert!(d >= 1);
    let mut total: i128 = 0;
    for e in 1..=d {
        if d % e == 0 {
            let mu = squarefree_mobius(d / e);
            if mu != 0 {
                total += mu as i128 * (q as i128).pow(e as u32);
            }
        }
    }
    debug_assert!(total > 0 && total % d as i128 == 0);
    (total / d as i128) as u128
}

/// Möbius function of an integer.
pub(crate) fn squarefree_mobius(mut n: usize) -> i64 {
    let mut mu = 1i64;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Monic irreducibles grouped by degree, `1..=dmax`.
#[derive(Debug, Clone)]
pub struct IrredTable {
    by_degree: Vec<Vec<MonicPoly>>,
}

/// Enumerates all monic irreducibles of degree `<= dmax` by sieving the
/// deterministic enumeration order with trial division.
pub fn irreducibles_up_to(ctx: &FieldCtx, dmax: usize) -> IrredTable {
    let mut by_degree: Vec<Vec<MonicPoly>> = Vec::with_capacity(dmax);
    for d in 1..=dmax {
        let mut list = Vec::new();
        'next: for f in enumerate_monic(ctx, d) {
            for lower in &by_degree[..d.saturating_sub(1).min(d / 2)] {
                for p in lower {
                    if divides(ctx, p, f.coeffs()) {
                        continue 'next;
                    }
                }
            }
            list.push(f);
        }
        debug_assert_eq!(list.len() as u128, irreducible_count(ctx.q(), d));
        by_degree.push(list);
    }
    IrredTable { by_degree }
}

impl IrredTable {
    pub fn max_degree(&self) -> usize {
        self.by_degree.len()
    }

    pub fn degree(&self, d: usize) -> &[MonicPoly] {
        &self.by_degree[d - 1]
    }
}

/// Factors `f` into irreducibles with multiplicities, sorted by (degree,
/// enumeration order).  Uses trial division when the table reaches
/// `deg(f) / 2`, distinct-degree splitting otherwise.
pub fn factorize(
    ctx: &FieldCtx,
    table: &IrredTable,
    f: &MonicPoly,
) -> Result<Vec<(MonicPoly, u32)>> {
    if f.degree() == 0 {
        return Ok(Vec::new());
    }
    let mut out = if table.max_degree() >= f.degree() / 2 {
        trial_division(ctx, table, f)
    } else {
        let mut factors = Vec::new();
        factor_recursive(ctx, f.clone(), 1, &mut factors);
        factors
    };
    out.sort_by(|a, b| (a.0.degree(), &a.0).cmp(&(b.0.degree(), &b.0)));
    if cfg!(debug_assertions) {
        let mut prod = MonicPoly::one();
        for (p, m) in &out {
            prod = prod.mul(ctx, &p.pow(ctx, *m));
        }
        if &prod != f {
            return Err(Error::Inconsistent("factorization does not multiply back".into()));
        }
    }
    Ok(out)
}

fn trial_division(ctx: &FieldCtx, table: &IrredTable, f: &MonicPoly) -> Vec<(MonicPoly, u32)> {
    let mut rest = f.clone();
    let mut out = Vec::new();
    for d in 1..=table.max_degree() {
        if rest.degree() < 2 * d {
            break;
        }
        for p in table.degree(d) {
            let mut m = 0u32;
            while divides(ctx, p, rest.coeffs()) {
                rest = monic_exact_div(ctx, &rest, p);
                m += 1;
            }
            if m > 0 {
                out.push((p.clone(), m));
            }
            if rest.degree() < 2 * d {
                break;
            }
        }
    }
    if rest.degree() >= 1 {
        out.push((rest, 1));
    }
    out
}

/// Distinct-degree factorization with multiplicity bookkeeping.
fn factor_recursive(
    ctx: &FieldCtx,
    f: MonicPoly,
    mult: u32,
    out: &mut Vec<(MonicPoly, u32)>,
) {
    if f.degree() == 0 {
        return;
    }
    let der = raw_derivative(ctx, f.coeffs());
    if der.is_empty() {
        // f = g(x^p); take the p-th root of the coefficients.
        let p = ctx.p() as usize;
        let root_pow = ctx.q() / ctx.p();
        let coeffs: Vec<FieldElem> = f
            .coeffs()
            .iter()
            .step_by(p)
            .map(|&c| ctx.pow(c, root_pow))
            .collect();
        let g = MonicPoly::from_coeffs(coeffs).expect("p-th root stays monic");
        factor_recursive(ctx, g, mult * ctx.p() as u32, out);
        return;
    }
    let gcd = raw_gcd_monic(ctx, f.coeffs(), &der);
    if gcd.len() > 1 {
        let gcd_poly = MonicPoly { coeffs: gcd };
        let sqfree = monic_exact_div(ctx, &f, &gcd_poly);
        // Squarefree part first, then recurse on the repeated part.
        let mut sq_factors = Vec::new();
        factor_squarefree(ctx, sqfree, &mut sq_factors);
        factor_recursive(ctx, gcd_poly, mult, out);
        for p in sq_factors {
            merge_factor(out, p, mult);
        }
        return;
    }
    let mut sq_factors = Vec::new();
    factor_squarefree(ctx, f, &mut sq_factors);
    for p in sq_factors {
        merge_factor(out, p, mult);
    }
}

fn merge_factor(out: &mut Vec<(MonicPoly, u32)>, p: MonicPoly, mult: u32) {
    for entry in out.iter_mut() {
        if entry.0 == p {
            entry.1 += mult;
            return;
        }
    }
    out.push((p, mult));
}

/// Distinct-degree then equal-degree splitting of a squarefree monic.
fn factor_squarefree(ctx: &FieldCtx, f: MonicPoly, out: &mut Vec<MonicPoly>) {
    let mut rest = f;
    let mut xq = {
        // x^q mod rest, maintained across degrees as x^{q^d} mod rest.
        let x = vec![FieldElem::ZERO, FieldElem::ONE];
        raw_powmod(ctx, &x, ctx.q(), rest.coeffs())
    };
    let mut d = 1;
    while rest.degree() >= 1 {
        if rest.degree() < 2 * d {
            out.push(rest);
            return;
        }
        // gcd(x^{q^d} - x, rest) collects all factors of degree d.
        let mut diff = xq.clone();
        while diff.len() < 2 {
            diff.push(FieldElem::ZERO);
        }
        diff[1] = ctx.sub(diff[1], FieldElem::ONE);
        raw_trim(&mut diff);
        if !diff.is_empty() {
            let g = raw_gcd_monic(ctx, rest.coeffs(), &diff);
            if g.len() > 1 {
                let g_poly = MonicPoly { coeffs: g };
                rest = monic_exact_div(ctx, &rest, &g_poly);
                equal_degree_split(ctx, g_poly, d, out);
            }
        } else {
            // x^{q^d} = x: every remaining factor divides it.
            let g_poly = rest.clone();
            rest = MonicPoly::one();
            equal_degree_split(ctx, g_poly, d, out);
        }
        d += 1;
        if rest.degree() >= 1 {
            xq = raw_powmod_reduce(ctx, &xq, rest.coeffs());
            xq = raw_powmod(ctx, &xq, ctx.q(), rest.coeffs());
        }
    }
}

/// Cantor-Zassenhaus split of a product of degree-`d` irreducibles, with a
/// deterministic RNG seeded from the polynomial itself.
fn equal_degree_split(ctx: &FieldCtx, f: MonicPoly, d: usize, out: &mut Vec<MonicPoly>) {
    if f.degree() == d {
        out.push(f);
        return;
    }
    let mut seed = [0u8; 32];
    for (i, c) in f.coeffs().iter().enumerate() {
        seed[i % 32] ^= (c.index() as u8).wrapping_add(i as u8);
    }
    seed[31] ^= d as u8;
    let mut rng = ChaCha8Rng::from_seed(seed);
    loop {
        let deg_a = f.degree() - 1;
        let a: Vec<FieldElem> = (0..=deg_a)
            .map(|_| ctx.element(rng.gen_range(0..ctx.q())))
            .collect();
        let mut a = a;
        raw_trim(&mut a);
        if a.len() <= 1 {
            continue;
        }
        let g = if ctx.q() % 2 == 1 {
            let exp = (pow_u128(ctx.q(), d) - 1) / 2;
            let mut b = raw_powmod_u128(ctx, &a, exp, f.coeffs());
            if b.is_empty() {
                continue;
            }
            b[0] = ctx.sub(b[0], FieldElem::ONE);
            raw_trim(&mut b);
            if b.is_empty() {
                continue;
            }
            raw_gcd_monic(ctx, f.coeffs(), &b)
        } else {
            // Even q: use the trace map sum a^{2^i}, i < d * log2(q).
            let bits = d as u32 * ctx.q().trailing_zeros();
            let mut acc = a.clone();
            let mut cur = a.clone();
            for _ in 1..bits {
                cur = raw_powmod(ctx, &cur, 2, f.coeffs());
                acc = raw_add(ctx, &acc, &cur);
            }
            raw_trim(&mut acc);
            if acc.is_empty() {
                continue;
            }
            raw_gcd_monic(ctx, f.coeffs(), &acc)
        };
        if g.len() > 1 && g.len() - 1 < f.degree() {
            let g_poly = MonicPoly { coeffs: g };
            let h = monic_exact_div(ctx, &f, &g_poly);
            equal_degree_split(ctx, g_poly, d, out);
            equal_degree_split(ctx, h, d, out);
            return;
        }
    }
}

fn raw_add(ctx: &FieldCtx, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(FieldElem::ZERO);
        let y = b.get(i).copied().unwrap_or(FieldElem::ZERO);
        out.push(ctx.add(x, y));
    }
    raw_trim(&mut out);
    out
}

fn raw_powmod_reduce(ctx: &FieldCtx, a: &[FieldElem], m: &[FieldElem]) -> Vec<FieldElem> {
    raw_divrem(ctx, a, m).1
}

fn raw_powmod(ctx: &FieldCtx, a: &[FieldElem], k: u64, m: &[FieldElem]) -> Vec<FieldElem> {
    raw_powmod_u128(ctx, a, k as u128, m)
}

fn raw_powmod_u128(ctx: &FieldCtx, a: &[FieldElem], mut k: u128, m: &[FieldElem]) -> Vec<FieldElem> {
    let mut base = raw_divrem(ctx, a, m).1;
    let mut acc = vec![FieldElem::ONE];
    while k > 0 {
        if k & 1 == 1 {
            let prod = raw_mul(ctx, &acc, &base);
            acc = raw_divrem(ctx, &prod, m).1;
        }
        let sq = raw_mul(ctx, &base, &base);
        base = raw_divrem(ctx, &sq, m).1;
        k >>= 1;
    }
    acc
}

fn pow_u128(q: u64, d: usize) -> u128 {
    (q as u128).pow(d as u32)
}
