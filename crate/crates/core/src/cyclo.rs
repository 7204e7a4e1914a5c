//! Exact cyclotomic arithmetic and truncated power series.
//!
//! * Numbers live in the field generated by a primitive m-th root of unity,
//!   stored as rational residues modulo the m-th cyclotomic polynomial, so
//!   rationality is a syntactic degree check.
//! * The cyclotomic polynomial is computed by exact division of `x^m - 1`
//!   by the lower-order cyclotomic polynomials.
//! * Series are dense coefficient vectors truncated at a fixed degree, with
//!   exact ring operations, logarithms via an integer-division recurrence,
//!   and binomial powers for huge integer exponents.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The cyclotomic field of a fixed root-of-unity order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloField {
    m: u64,
    modulus: Vec<BigRational>,
}

/// A residue modulo the cyclotomic polynomial, coefficients low to high.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloNum {
    coeffs: Vec<BigRational>,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Monic integer coefficients of the m-th cyclotomic polynomial, low to high.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    let mut table: Vec<Vec<BigInt>> = Vec::with_capacity(m as usize + 1);
    table.push(Vec::new());
    for k in 1..=m {
        let mut p = vec![BigInt::zero(); k as usize + 1];
        p[0] = BigInt::from(-1);
        p[k as usize] = BigInt::one();
        for d in 1..k {
            if k % d == 0 {
                p = int_poly_exact_div(&p, &table[d as usize]);
            }
        }
        table.push(p);
    }
    table.pop().unwrap()
}

fn int_poly_exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - db] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            let idx = i - db + j;
            rem[idx] = &rem[idx] - &c * bj;
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

impl CycloField {
    /// Field of the m-th roots of unity, `m >= 1`.
    pub fn new(m: u64) -> CycloField {
        let modulus = cyclotomic_polynomial(m)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        CycloField { m, modulus }
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    /// Degree of the field over the rationals.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn zero(&self) -> CycloNum {
        CycloNum { coeffs: vec![BigRational::zero(); self.degree()] }
    }

    pub fn one(&self) -> CycloNum {
        self.from_ratio(BigRational::one())
    }

    pub fn from_int(&self, n: i64) -> CycloNum {
        self.from_ratio(int(n))
    }

    pub fn from_ratio(&self, r: BigRational) -> CycloNum {
        let mut coeffs = vec![BigRational::zero(); self.degree()];
        coeffs[0] = r;
        CycloNum { coeffs }
    }

    /// The k-th power of the primitive root, reduced.
    pub fn root(&self, k: u64) -> CycloNum {
        let k = (k % self.m) as usize;
        let mut raw = vec![BigRational::zero(); k + 1];
        raw[k] = BigRational::one();
        CycloNum { coeffs: self.reduce(raw) }
    }

    fn reduce(&self, mut raw: Vec<BigRational>) -> Vec<BigRational> {
        let deg = self.degree();
        for i in (deg..raw.len()).rev() {
            let c = std::mem::replace(&mut raw[i], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for (j, mj) in self.modulus.iter().take(deg).enumerate() {
                let idx = i - deg + j;
                raw[idx] = &raw[idx] - &c * mj;
            }
        }
        raw.truncate(deg);
        raw.resize(deg, BigRational::zero());
        raw
    }

    pub fn add(&self, a: &CycloNum, b: &CycloNum) -> CycloNum {
        CycloNum {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &CycloNum, b: &CycloNum) -> CycloNum {
        CycloNum {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self, a: &CycloNum) -> CycloNum {
        CycloNum { coeffs: a.coeffs.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, a: &CycloNum, b: &CycloNum) -> CycloNum {
        let deg = self.degree();
        let mut raw = vec![BigRational::zero(); 2 * deg.max(1)];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] = &raw[i + j] + x * y;
                }
            }
        }
        CycloNum { coeffs: self.reduce(raw) }
    }

    pub fn scale(&self, a: &CycloNum, r: &BigRational) -> CycloNum {
        CycloNum { coeffs: a.coeffs.iter().map(|x| x * r).collect() }
    }
}

impl CycloNum {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational when every higher coefficient vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// The value as a nonnegative integer, if it is one.
    pub fn as_count(&self) -> Option<BigInt> {
        let r = self.as_rational()?;
        if r.is_integer() && !r.is_negative() {
            Some(r.to_integer())
        } else {
            None
        }
    }
}

/// A truncated power series with cyclotomic coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloSeries {
    coeffs: Vec<CycloNum>,
}

impl CycloSeries {
    pub fn zero(field: &CycloField, dmax: usize) -> CycloSeries {
        CycloSeries { coeffs: vec![field.zero(); dmax + 1] }
    }

    pub fn one(field: &CycloField, dmax: usize) -> CycloSeries {
        let mut s = CycloSeries::zero(field, dmax);
        s.coeffs[0] = field.one();
        s
    }

    /// `c z^k`, truncated away when `k > dmax`.
    pub fn monomial(field: &CycloField, dmax: usize, k: usize, c: CycloNum) -> CycloSeries {
        let mut s = CycloSeries::zero(field, dmax);
        if k <= dmax {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn dmax(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, d: usize) -> Result<&CycloNum> {
        self.coeffs
            .get(d)
            .ok_or_else(|| Error::InvalidInput("series coefficient out of range".into()))
    }

    pub fn coeffs(&self) -> &[CycloNum] {
        &self.coeffs
    }

    pub fn is_one(&self, field: &CycloField) -> bool {
        self.coeffs[0] == field.one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn add(&self, field: &CycloField, other: &CycloSeries) -> CycloSeries {
        assert_eq!(self.dmax(), other.dmax());
        CycloSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| field.add(a, b))
                .collect(),
        }
    }

    pub fn mul(&self, field: &CycloField, other: &CycloSeries) -> CycloSeries {
        assert_eq!(self.dmax(), other.dmax());
        let mut out = CycloSeries::zero(field, self.dmax());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(self.coeffs.len() - i).enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] = field.add(&out.coeffs[i + j], &field.mul(a, b));
                }
            }
        }
        out
    }

    pub fn scale(&self, field: &CycloField, c: &CycloNum) -> CycloSeries {
        CycloSeries { coeffs: self.coeffs.iter().map(|a| field.mul(a, c)).collect() }
    }

    /// Logarithm of a series with constant term one.
    pub fn log(&self, field: &CycloField) -> Result<CycloSeries> {
        if self.coeffs[0] != field.one() {
            return Err(Error::InvalidInput("series logarithm needs constant term one".into()));
        }
        let dmax = self.dmax();
        let mut l = CycloSeries::zero(field, dmax);
        for k in 1..=dmax {
            let mut acc = field.scale(&self.coeffs[k], &int(k as i64));
            for j in 1..k {
                let prod = field.mul(&l.coeffs[j], &self.coeffs[k - j]);
                acc = field.sub(&acc, &field.scale(&prod, &int(j as i64)));
            }
            l.coeffs[k] = field.scale(&acc, &int(k as i64).recip());
        }
        Ok(l)
    }

    /// `self^n` for a series with constant term one, via the binomial series.
    pub fn pow_int(&self, field: &CycloField, n: &BigInt) -> Result<CycloSeries> {
        if self.coeffs[0] != field.one() {
            return Err(Error::InvalidInput("binomial power needs constant term one".into()));
        }
        let dmax = self.dmax();
        let mut u = self.clone();
        u.coeffs[0] = field.zero();
        let mut out = CycloSeries::one(field, dmax);
        let mut upow = CycloSeries::one(field, dmax);
        let mut binom = BigRational::one();
        for k in 1..=dmax {
            upow = upow.mul(field, &u);
            if upow.coeffs.iter().all(|c| c.is_zero()) {
                break;
            }
            binom = binom * BigRational::from_integer(n - BigInt::from(k as i64 - 1))
                / BigRational::from_integer(BigInt::from(k as i64));
            if binom.is_zero() {
                break;
            }
            let term = upow.scale(field, &field.from_ratio(binom.clone()));
            out = out.add(field, &term);
        }
        Ok(out)
    }
}
