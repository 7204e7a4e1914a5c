//! Small finite fields `F_q`, `q = p^e`, with dense discrete-log tables.
//!
//! Elements are stored as indices in `[0, q)`.  For prime fields the index is
//! the residue itself; for extension fields the base-`p` digits of the index
//! are the coefficients of the representative polynomial, least significant
//! digit = constant term.  A [`FieldCtx`] owns exp/dlog tables for the fixed
//! generator, so multiplication, inversion and power-residue characters are
//! table lookups.
//!
//! Deterministic choices:
//! * prime fields use the smallest primitive root,
//! * extension fields are built from the lexicographically smallest monic
//!   irreducible modulus (constant term varying fastest) and use the
//!   primitive element with the smallest index as generator.

use crate::error::{Error, Result};

/// Default cap on the field size; dense tables stay a few MiB below it.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

const DLOG_ZERO: u32 = u32::MAX;

/// Element of a [`FieldCtx`], stored as its canonical index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn index(self) -> u64 {
        self.0 as u64
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Exponent of a power-residue character value: `chi_r(x) = xi_r^value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CharExponent {
    /// Order `r` of the character; divides `q - 1`.
    pub order: u64,
    /// Exponent in `[0, r)`.
    pub value: u64,
}

impl CharExponent {
    /// The character value is trivial (the argument is an r-th power).
    pub fn is_trivial(self) -> bool {
        self.value == 0
    }
}

/// Arithmetic context for one finite field.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u64,
    e: u32,
    q: u64,
    /// Monic modulus coefficients (length `e + 1`) for extension fields.
    modulus: Vec<u64>,
    generator: FieldElem,
    exp: Vec<u32>,
    dlog: Vec<u32>,
}

/// Builds `F_{p^e}` with the default table cap.
pub fn make_field(p: u64, e: u32) -> Result<FieldCtx> {
    FieldCtx::with_cap(p, e, DEFAULT_FIELD_CAP)
}

/// Character exponent of `x` for the power-residue character of order `r`.
pub fn char_exponent(ctx: &FieldCtx, r: u64, x: FieldElem) -> Result<CharExponent> {
    if r == 0 || (ctx.q - 1) % r != 0 {
        return Err(Error::BadCharOrder { r, qm1: ctx.q - 1 });
    }
    if x.is_zero() {
        return Err(Error::CharAtZero);
    }
    Ok(CharExponent {
        order: r,
        value: ctx.dlog(x) % r,
    })
}

impl FieldCtx {
    pub fn with_cap(p: u64, e: u32, cap: u64) -> Result<FieldCtx> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidInput("extension degree must be positive".into()));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= cap)
            .ok_or(Error::FieldTooLarge { q: u64::MAX, cap })?;
        if q > cap {
            return Err(Error::FieldTooLarge { q, cap });
        }

        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, e)
        };
        let mut ctx = FieldCtx {
            p,
            e,
            q,
            modulus,
            generator: FieldElem::ZERO,
            exp: Vec::new(),
            dlog: Vec::new(),
        };
        ctx.generator = ctx.find_generator();
        ctx.build_tables();
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ext_degree(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    pub fn element(&self, index: u64) -> FieldElem {
        assert!(index < self.q, "element index {index} out of range");
        FieldElem(index as u32)
    }

    /// All field elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q as u32).map(FieldElem)
    }

    /// All nonzero elements in index order.
    pub fn units(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.q as u32).map(FieldElem)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.e == 1 {
            return FieldElem(((a.index() + b.index()) % self.p) as u32);
        }
        let (mut out, mut scale) = (0u64, 1u64);
        let (mut x, mut y) = (a.index(), b.index());
        for _ in 0..self.e {
            out += (x % self.p + y % self.p) % self.p * scale;
            x /= self.p;
            y /= self.p;
            scale *= self.p;
        }
        FieldElem(out as u32)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.e == 1 {
            return FieldElem(((self.p - a.index()) % self.p) as u32);
        }
        let (mut out, mut scale) = (0u64, 1u64);
        let mut x = a.index();
        for _ in 0..self.e {
            out += (self.p - x % self.p) % self.p * scale;
            x /= self.p;
            scale *= self.p;
        }
        FieldElem(out as u32)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        let i = (self.dlog(a) + self.dlog(b)) % (self.q - 1);
        FieldElem(self.exp[i as usize])
    }

    pub fn inv(&self, a: FieldElem) -> FieldElem {
        assert!(!a.is_zero(), "inverse of zero");
        let i = (self.q - 1 - self.dlog(a)) % (self.q - 1);
        FieldElem(self.exp[i as usize])
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FieldElem, k: u64) -> FieldElem {
        if a.is_zero() {
            return if k == 0 { FieldElem::ONE } else { FieldElem::ZERO };
        }
        let i = (self.dlog(a) as u128 * k as u128 % (self.q - 1) as u128) as u64;
        FieldElem(self.exp[i as usize])
    }

    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow(a, self.p)
    }

    /// Discrete log of a nonzero element with respect to the generator.
    pub fn dlog(&self, a: FieldElem) -> u64 {
        let d = self.dlog[a.0 as usize];
        assert!(d != DLOG_ZERO, "dlog of zero");
        d as u64
    }

    /// `g^i` for `i` reduced mod `q - 1`.
    pub fn exp(&self, i: u64) -> FieldElem {
        FieldElem(self.exp[(i % (self.q - 1)) as usize])
    }

    /// Representative of the class `g^k (F_q^*)^r`; `k` is reduced mod `r`.
    pub fn unit_class_rep(&self, r: u64, k: u64) -> FieldElem {
        self.exp(k % r)
    }

    /// Extension field `F_{q^m}` plus the embedding table `F_q -> F_{q^m}`.
    pub fn extension(&self, m: u32) -> Result<(FieldCtx, Vec<FieldElem>)> {
        self.extension_with_cap(m, DEFAULT_FIELD_CAP)
    }

    pub fn extension_with_cap(&self, m: u32, cap: u64) -> Result<(FieldCtx, Vec<FieldElem>)> {
        let ext = FieldCtx::with_cap(self.p, self.e * m, cap)?;
        let embed = if self.e == 1 {
            // Prime subfield: constants carry the same index.
            (0..self.q).map(|i| ext.element(i)).collect()
        } else {
            let root = self.subfield_root(&ext)?;
            let mut table = Vec::with_capacity(self.q as usize);
            for idx in 0..self.q {
                let mut acc = FieldElem::ZERO;
                let mut x = idx;
                let mut hpow = FieldElem::ONE;
                for _ in 0..self.e {
                    let digit = ext.element(x % self.p);
                    acc = ext.add(acc, ext.mul(digit, hpow));
                    hpow = ext.mul(hpow, root);
                    x /= self.p;
                }
                table.push(acc);
            }
            table
        };
        Ok((ext, embed))
    }

    /// Smallest root of this field's modulus inside `ext`.
    fn subfield_root(&self, ext: &FieldCtx) -> Result<FieldElem> {
        'cand: for h in ext.elements() {
            let mut acc = FieldElem::ZERO;
            let mut hpow = FieldElem::ONE;
            for &c in &self.modulus {
                acc = ext.add(acc, ext.mul(ext.element(c), hpow));
                hpow = ext.mul(hpow, h);
            }
            if acc.is_zero() {
                // Reject roots of the wrong degree (proper subfield elements).
                let mut fr = h;
                for _ in 0..self.e - 1 {
                    fr = ext.frobenius(fr);
                    if fr == h {
                        continue 'cand;
                    }
                }
                return Ok(h);
            }
        }
        Err(Error::Inconsistent("modulus has no root in extension".into()))
    }

    fn find_generator(&self) -> FieldElem {
        let prime_factors = prime_factors(self.q - 1);
        for idx in 2..self.q {
            let cand = FieldElem(idx as u32);
            let primitive = prime_factors
                .iter()
                .all(|&l| !self.slow_pow(cand, (self.q - 1) / l).is_zero_or_one());
            if primitive {
                return cand;
            }
        }
        // q = 2 is the only field whose unit group is trivial.
        FieldElem::ONE
    }

    fn build_tables(&mut self) {
        let n = (self.q - 1) as usize;
        self.exp = Vec::with_capacity(n);
        self.dlog = vec![DLOG_ZERO; self.q as usize];
        let mut acc = FieldElem::ONE;
        for i in 0..n {
            self.exp.push(acc.0);
            debug_assert_eq!(self.dlog[acc.0 as usize], DLOG_ZERO);
            self.dlog[acc.0 as usize] = i as u32;
            acc = self.slow_mul(acc, self.generator);
        }
        debug_assert_eq!(acc, FieldElem::ONE);
    }

    /// Table-free multiplication, used only while the tables are built.
    fn slow_mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.e == 1 {
            return FieldElem((a.index() * b.index() % self.p) as u32);
        }
        let av = self.digits(a);
        let bv = self.digits(b);
        let mut prod = vec![0u64; 2 * self.e as usize - 1];
        for (i, &x) in av.iter().enumerate() {
            for (j, &y) in bv.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // Reduce mod the monic modulus.
        for i in (self.e as usize..prod.len()).rev() {
            let c = prod[i];
            if c != 0 {
                prod[i] = 0;
                for (j, &mj) in self.modulus.iter().enumerate().take(self.e as usize) {
                    let k = i - self.e as usize + j;
                    prod[k] = (prod[k] + c * (self.p - mj)) % self.p;
                }
            }
        }
        let mut out = 0u64;
        for &c in prod[..self.e as usize].iter().rev() {
            out = out * self.p + c;
        }
        FieldElem(out as u32)
    }

    fn slow_pow(&self, a: FieldElem, mut k: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            k >>= 1;
        }
        acc
    }

    fn digits(&self, a: FieldElem) -> Vec<u64> {
        let mut x = a.index();
        (0..self.e)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    /// Modulus coefficients, constant term first (length `e + 1`).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
}

impl FieldElem {
    fn is_zero_or_one(self) -> bool {
        self.0 <= 1
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Lexicographically smallest monic irreducible of degree `e` over `F_p`.
///
/// Polynomials are ordered by their coefficient index: the constant term is
/// the least significant base-`p` digit.  Irreducibility is tested with the
/// Frobenius gcd criterion on raw coefficient vectors.
fn smallest_irreducible(p: u64, e: u32) -> Vec<u64> {
    for idx in 0..p.pow(e) {
        let mut coeffs = Vec::with_capacity(e as usize + 1);
        let mut x = idx;
        for _ in 0..e {
            coeffs.push(x % p);
            x /= p;
        }
        coeffs.push(1);
        if raw_is_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducibles of every degree exist");
}

// Raw dense polynomial helpers over F_p, coefficient vectors with the
// constant term first.  Only used during field construction.

fn raw_trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn raw_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    raw_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm || (r.len() == m.len() && m.len() == 1) {
        let dr = r.len() - 1;
        if dr < dm || (r.len() == 1 && r[0] == 0) {
            break;
        }
        let c = r[dr] * lead_inv % p;
        if c != 0 {
            for (j, &mj) in m.iter().enumerate() {
                let k = dr - dm + j;
                r[k] = (r[k] + c * (p - mj)) % p;
            }
        }
        raw_trim(&mut r);
        if r.len() <= dm {
            break;
        }
    }
    raw_trim(&mut r);
    r
}

fn raw_mulmod(p: u64, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    raw_rem(p, &prod, m)
}

fn raw_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    raw_trim(&mut x);
    raw_trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = raw_rem(p, &x, &y);
        x = y;
        y = r;
    }
    x
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat inverse; p is prime and a nonzero mod p.
    let mut k = p - 2;
    let mut base = a % p;
    let mut acc = 1u64;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        k >>= 1;
    }
    acc
}

/// Frobenius irreducibility test for a monic coefficient vector over `F_p`.
fn raw_is_irreducible(p: u64, f: &[u64]) -> bool {
    let e = f.len() - 1;
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    // x^{p^e} = x (mod f) and gcd(x^{p^d} - x, f) = 1 for proper d | e.
    let x = vec![0, 1];
    let mut fr = raw_rem(p, &x, f);
    for d in 1..=e {
        // fr = x^{p^d} mod f
        let mut acc = vec![1u64];
        let mut base = fr.clone();
        let mut k = p;
        while k > 0 {
            if k & 1 == 1 {
                acc = raw_mulmod(p, &acc, &base, f);
            }
            base = raw_mulmod(p, &base, &base, f);
            k >>= 1;
        }
        fr = acc;
        let mut diff = fr.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        raw_trim(&mut diff);
        if d < e && e % d == 0 {
            let g = raw_gcd(p, f, &diff);
            if g.len() > 1 {
                return false;
            }
        }
        if d == e {
            return diff.len() == 1 && diff[0] == 0;
        }
    }
    unreachable!()
}
