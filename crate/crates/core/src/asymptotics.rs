//! Closed-form constants and limit laws for elementary abelian covers.
//!
//! * The rational zeta value, the leading coefficients of the genus
//!   polynomial, and the point-count limit law are exact rationals.
//! * The infinite prime product `L_m` is the one genuinely analytic
//!   quantity; it is truncated by prime degree with a rigorous tail bound.
//! * Main terms keep only the leading monomial; when the `L` factor is the
//!   empty product the prediction is an exact rational.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ffield;
use crate::polyring;

#[cfg(test)]
fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn big_pow(base: u64, exp: u32) -> BigInt {
    BigInt::from(base).pow(exp)
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn check_q_prime_power_order(big_q: u64, q: u64) -> Result<()> {
    if !ffield::is_prime(big_q) {
        return Err(Error::InvalidInput("group side must be prime".into()));
    }
    if q < 2 || (q - 1) % big_q != 0 {
        return Err(Error::BadCharOrder { r: big_q, qm1: q.saturating_sub(1) });
    }
    Ok(())
}

/// `1/(1 - q^{1-s})` for integer `s >= 2`.
pub fn zeta_q(q: u64, s: u32) -> Result<BigRational> {
    if s < 2 {
        return Err(Error::InvalidInput("zeta argument must be at least 2".into()));
    }
    let p = big_pow(q, s - 1);
    Ok(BigRational::new(p.clone(), p - BigInt::one()))
}

/// Truncated value of the prime product `L_m` with a rigorous tail bound.
///
/// `L_m = prod_{j<=m} prod_P (1 - j/((|P|-1)(|P|+j)))` over monic
/// irreducibles; degrees above the cutoff contribute at most the returned
/// error bound.
pub fn l_constant(q: u64, m: u64, cutoff: u32) -> (f64, f64) {
    if m == 0 {
        return (1.0, 0.0);
    }
    let mut value = 1.0f64;
    for d in 1..=cutoff {
        let pd = polyring::irreducible_count(q, d as usize) as f64;
        let size = BigInt::from(q).pow(d).to_f64().unwrap();
        for j in 1..=m {
            let x = j as f64 / ((size - 1.0) * (size + j as f64));
            value *= (1.0 - x).powf(pd);
        }
    }
    let tail = 2.0 * (m as f64) * (m as f64 + 1.0) / (cutoff as f64 + 1.0)
        * (q as f64).powi(-(cutoff as i32))
        / (q as f64 - 1.0);
    (value, tail)
}

/// A constant of the form `rational * L_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledL {
    pub rational: BigRational,
    pub m: u64,
}

impl ScaledL {
    /// Float value and propagated error bound at a prime-degree cutoff.
    pub fn evaluate(&self, q: u64, cutoff: u32) -> (f64, f64) {
        let (l, bound) = l_constant(q, self.m, cutoff);
        let r = self.rational.to_f64().unwrap();
        (r * l, r.abs() * bound)
    }
}

/// Leading coefficient of the full-family genus polynomial.
pub fn leading_coeff_full(big_q: u64, n: u32, q: u64) -> Result<ScaledL> {
    check_q_prime_power_order(big_q, q)?;
    let qn = big_q.pow(n);
    let zeta = zeta_q(q, 2)?;
    let rational = BigRational::new(BigInt::one(), factorial(qn - 2))
        * BigRational::new(BigInt::from(q + qn - 1), BigInt::from(q))
        / zeta.pow((qn - 1) as i32);
    Ok(ScaledL { rational, m: qn - 2 })
}

/// Leading coefficient of the constrained-family genus polynomial.
pub fn leading_coeff_constrained(big_q: u64, n: u32, q: u64, ell: u64) -> Result<ScaledL> {
    check_q_prime_power_order(big_q, q)?;
    if ell > q {
        return Err(Error::InvalidInput("more marked points than field elements".into()));
    }
    let qn = big_q.pow(n);
    let zeta = zeta_q(q, 2)?;
    let point_factor =
        BigRational::new(BigInt::from(q), BigInt::from(qn) * BigInt::from(q + qn - 1));
    let rational = BigRational::new(big_pow(q - 1, n), BigInt::from(qn) * factorial(qn - 2))
        / zeta.pow((qn - 1) as i32)
        * point_factor.pow(ell as i32);
    Ok(ScaledL { rational, m: qn - 2 })
}

/// Leading-monomial prediction `C * D^{Q^n-2} * q^D` for the family size.
#[derive(Debug, Clone, PartialEq)]
pub struct MainTerm {
    pub degree: Option<u64>,
    pub value: f64,
    pub error_bound: f64,
}

/// Weighted degree `D` pinned by the genus, when the divisibility holds.
pub fn genus_degree(big_q: u64, n: u32, g: u64) -> Option<u64> {
    let qn = big_q.pow(n);
    let step = qn - qn / big_q;
    let total = 2 * g + 2 * qn - 2;
    (total % step == 0).then_some(total / step)
}

/// Main-term prediction as floats, zero when the genus is inadmissible.
pub fn main_term(big_q: u64, n: u32, q: u64, g: u64, cutoff: u32) -> Result<MainTerm> {
    let coeff = leading_coeff_full(big_q, n, q)?;
    let Some(d) = genus_degree(big_q, n, g) else {
        return Ok(MainTerm { degree: None, value: 0.0, error_bound: 0.0 });
    };
    let (c, bound) = coeff.evaluate(q, cutoff);
    let qn = big_q.pow(n);
    let monomial = (d as f64).powi((qn - 2) as i32) * (q as f64).powi(d as i32);
    Ok(MainTerm { degree: Some(d), value: c * monomial, error_bound: bound * monomial })
}

/// Exact main term, available when the `L` factor is the empty product.
pub fn main_term_rational(big_q: u64, n: u32, q: u64, g: u64) -> Result<Option<BigRational>> {
    let coeff = leading_coeff_full(big_q, n, q)?;
    if coeff.m != 0 {
        return Ok(None);
    }
    let Some(d) = genus_degree(big_q, n, g) else {
        return Ok(Some(BigRational::zero()));
    };
    Ok(Some(coeff.rational * BigRational::from_integer(big_pow(q, d as u32))))
}

/// Exact limit law of the per-point contribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiLaw {
    values: Vec<(u64, BigRational)>,
}

impl XiLaw {
    /// Value-probability pairs in increasing value order.
    pub fn values(&self) -> &[(u64, BigRational)] {
        &self.values
    }

    pub fn mean(&self) -> BigRational {
        self.values
            .iter()
            .map(|(v, p)| BigRational::from_integer(BigInt::from(*v)) * p)
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn total_mass(&self) -> BigRational {
        self.values.iter().map(|(_, p)| p.clone()).fold(BigRational::zero(), |a, b| a + b)
    }
}

/// The three-point law taking values `0`, `Q^{n-1}`, `Q^n`.
pub fn xi_law(big_q: u64, n: u32, q: u64) -> Result<XiLaw> {
    check_q_prime_power_order(big_q, q)?;
    let qn = big_q.pow(n);
    let qn1 = qn / big_q;
    let denom_low = BigInt::from(qn1) * BigInt::from(q + qn - 1);
    let p_low = BigRational::new(BigInt::from(qn - 1), denom_low);
    let denom = BigInt::from(qn) * BigInt::from(q + qn - 1);
    let p_high = BigRational::new(BigInt::from(q), denom.clone());
    let p_zero = BigRational::new(
        BigInt::from(qn - 1) * BigInt::from(q + qn - big_q),
        denom,
    );
    let mut values = vec![(0, p_zero), (qn1, p_low), (qn, p_high)];
    values.sort_by_key(|(v, _)| *v);
    Ok(XiLaw { values })
}

/// Exact law of a sum of independent draws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumLaw {
    masses: BTreeMap<u64, BigRational>,
}

impl SumLaw {
    pub fn masses(&self) -> &BTreeMap<u64, BigRational> {
        &self.masses
    }

    pub fn mass(&self, m: u64) -> BigRational {
        self.masses.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn mean(&self) -> BigRational {
        self.masses
            .iter()
            .map(|(v, p)| BigRational::from_integer(BigInt::from(*v)) * p)
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn total_mass(&self) -> BigRational {
        self.masses.values().fold(BigRational::zero(), |a, b| a + b)
    }
}

/// Law of the sum of `q + 1` independent per-point contributions.
pub fn sum_law(big_q: u64, n: u32, q: u64) -> Result<SumLaw> {
    let xi = xi_law(big_q, n, q)?;
    let mut masses = BTreeMap::new();
    masses.insert(0u64, BigRational::one());
    for _ in 0..=q {
        let mut next: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (total, p) in &masses {
            for (v, pv) in xi.values() {
                let entry = next.entry(total + v).or_insert_with(BigRational::zero);
                *entry = &*entry + p * pv;
            }
        }
        masses = next;
    }
    Ok(SumLaw { masses })
}

/// Total-variation distance between a count histogram and a law.
pub fn tv_distance(hist: &BTreeMap<u64, u128>, law: &SumLaw) -> Result<BigRational> {
    let total: u128 = hist.values().sum();
    if total == 0 {
        return Err(Error::InvalidInput("histogram must be nonempty".into()));
    }
    let total = BigRational::from_integer(BigInt::from(total));
    let mut keys: Vec<u64> = hist.keys().copied().collect();
    keys.extend(law.masses().keys().copied());
    keys.sort_unstable();
    keys.dedup();
    let mut acc = BigRational::zero();
    for k in keys {
        let h = hist
            .get(&k)
            .map(|c| BigRational::from_integer(BigInt::from(*c)) / total.clone())
            .unwrap_or_else(BigRational::zero);
        acc += (h - law.mass(k)).abs();
    }
    Ok(acc / BigRational::from_integer(BigInt::from(2)))
}
