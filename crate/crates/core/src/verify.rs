//! Self-contained invariant suites behind the batch `verify` command.
//!
//! * Each suite returns one [`CheckResult`] per named check; a suite passes
//!   when every check does.
//! * Randomized suites draw covers and groups from a seeded generator, so
//!   reruns are reproducible byte for byte.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abgroup::{self, GroupSpec, GroupVec};
use crate::census::{self, Budget, CensusConstraint, StrataWeights};
use crate::covers::KummerCover;
use crate::error::Result;
use crate::ffield::{self, FieldCtx, FieldElem};
use crate::genfun;
use crate::polyring::{self, MonicPoly};

/// Outcome of one named invariant check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: String) -> CheckResult {
        CheckResult { name: name.to_string(), passed, detail }
    }
}

/// True when every check in a suite passed.
pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

/// Invariant-factor shapes of all abelian groups with order in `[2, max_order]`.
pub fn group_shapes(max_order: u64) -> Vec<Vec<u64>> {
    fn extend(max: u64, prefix: &mut Vec<u64>, product: u64, out: &mut Vec<Vec<u64>>) {
        let step = prefix.last().copied().unwrap_or(1);
        let lo = if prefix.is_empty() { 2 } else { step };
        let mut nxt = lo;
        while product.saturating_mul(nxt) <= max {
            prefix.push(nxt);
            out.push(prefix.clone());
            extend(max, prefix, product * nxt, out);
            prefix.pop();
            nxt += step;
        }
    }
    let mut out = Vec::new();
    extend(max_order, &mut Vec::new(), 1, &mut out);
    out.sort();
    out
}

/// Moebius-function suite over the full subgroup lattice.
pub fn mobius_suite(max_order: u64) -> Result<Vec<CheckResult>> {
    let mut results = Vec::new();
    results.push(CheckResult::new(
        "trivial-lattice-sum",
        abgroup::delsarte_mu(&[]) == 1,
        "mu over the one-subgroup lattice is 1".into(),
    ));
    let shapes = group_shapes(max_order);
    let mut bad = Vec::new();
    for shape in &shapes {
        let spec = GroupSpec::new(shape.clone())?;
        if abgroup::mobius_lattice_sum(&spec)? != 0 {
            bad.push(format!("{shape:?}"));
        }
    }
    results.push(CheckResult::new(
        "lattice-sums-vanish",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} nontrivial shapes with order <= {max_order}", shapes.len())
        } else {
            format!("nonzero lattice sum for {}", bad.join(", "))
        },
    ));
    let mut counts = Vec::new();
    let mut ok = true;
    for q in [2u64, 3, 5] {
        let spec = GroupSpec::new(vec![q, q])?;
        let n = spec.subgroups()?.len() as u64;
        ok &= n == q + 3;
        counts.push(format!("({q},{q})->{n}"));
    }
    results.push(CheckResult::new(
        "rank-two-subgroup-counts",
        ok,
        counts.join(" "),
    ));
    Ok(results)
}

/// Element-order and order-statistics suite on random groups.
pub fn group_suite(samples: usize, max_order: u64, seed: u64) -> Result<Vec<CheckResult>> {
    let shapes = group_shapes(max_order);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut phi_bad = Vec::new();
    let mut order_bad = Vec::new();
    let mut picked = Vec::new();
    for _ in 0..samples {
        let shape = &shapes[rng.gen_range(0..shapes.len())];
        picked.push(format!("{shape:?}"));
        let spec = GroupSpec::new(shape.clone())?;
        let total: u64 = divisors(spec.exponent()).iter().map(|&s| spec.phi(s)).sum();
        if total != spec.order() {
            phi_bad.push(format!("{shape:?} sums to {total}"));
        }
        for v in spec.elements() {
            let mut acc = spec.zero();
            let mut brute = 0u64;
            loop {
                acc = spec.add(&acc, &v);
                brute += 1;
                if acc.is_zero() {
                    break;
                }
            }
            if brute != spec.element_order(&v) {
                order_bad.push(format!("{shape:?} at {v:?}"));
            }
        }
    }
    Ok(vec![
        CheckResult::new(
            "order-statistics-partition",
            phi_bad.is_empty(),
            if phi_bad.is_empty() {
                format!("{samples} random groups: {}", picked.join(" "))
            } else {
                phi_bad.join("; ")
            },
        ),
        CheckResult::new(
            "element-orders-brute-force",
            order_bad.is_empty(),
            if order_bad.is_empty() {
                format!("all elements of {samples} random groups")
            } else {
                order_bad.join("; ")
            },
        ),
    ])
}

/// Series-vs-enumeration suite for double covers over the cubic field.
pub fn series_suite(dmax: usize) -> Result<Vec<CheckResult>> {
    let ctx = ffield::make_field(3, 1)?;
    let group = GroupSpec::new(vec![2])?;
    let weights = StrataWeights::hurwitz(&group);
    let budget = Budget::unlimited();
    let mut results = Vec::new();
    let constraints = [
        ("free", CensusConstraint::none()),
        ("split-at-infinity", CensusConstraint::with_class(GroupVec(vec![0]))),
        ("ramified-at-infinity", CensusConstraint::with_class(GroupVec(vec![1]))),
    ];
    for (label, cc) in constraints {
        let series = genfun::series_f(&ctx, &group, &cc, &weights, dmax)?;
        let counts = genfun::series_counts(&series)?;
        let mut bad = Vec::new();
        for (d, &coeff) in counts.iter().enumerate() {
            let direct =
                census::count_fixed_degree(&ctx, &group, &weights, d as u64, &cc, &budget)?;
            if direct != coeff {
                bad.push(format!("D={d}: series {coeff} vs census {direct}"));
            }
        }
        results.push(CheckResult::new(
            &format!("series-matches-census-{label}"),
            bad.is_empty(),
            if bad.is_empty() {
                format!("degrees 0..={dmax} agree")
            } else {
                bad.join("; ")
            },
        ));
    }
    Ok(results)
}

fn random_squarefree(ctx: &FieldCtx, d: usize, rng: &mut ChaCha8Rng) -> MonicPoly {
    let total = polyring::monic_count(ctx.q(), d);
    loop {
        let idx = rng.gen_range(0..total);
        let f = polyring::monic_poly(ctx, d, idx);
        if polyring::is_squarefree(ctx, &f) {
            return f;
        }
    }
}

fn functional_equation_holds(coeffs: &[BigInt], q: u64, g: u64) -> bool {
    if coeffs.len() != 2 * g as usize + 1 || coeffs[0] != BigInt::one() {
        return false;
    }
    let q = BigInt::from(q);
    (0..=g as usize)
        .all(|i| coeffs[2 * g as usize - i] == &coeffs[i] * q.pow((g as usize - i) as u32))
}

/// Predicts the next point count from the numerator via Newton's identities.
fn predicted_next_count(coeffs: &[BigInt], q: u64, g: u64) -> BigInt {
    let deg = 2 * g as usize;
    let mut sums: Vec<BigInt> = Vec::with_capacity(deg + 1);
    for k in 1..=deg + 1 {
        let mut acc = BigInt::from(0);
        for i in 1..=k.min(deg) {
            if i == k {
                acc -= BigInt::from(i as u64) * &coeffs[i];
            } else {
                acc -= &coeffs[i] * &sums[k - i - 1];
            }
        }
        sums.push(acc);
    }
    BigInt::from(q).pow((deg + 1) as u32) + 1 - &sums[deg]
}

/// Zeta-numerator suite on seeded random covers.
pub fn zeta_suite(seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();

    let ctx = ffield::make_field(3, 1)?;
    let group = GroupSpec::new(vec![2])?;
    let mut bad = Vec::new();
    let mut genera = [0usize; 4];
    for i in 0..100 {
        let d = 3 + (i % 6);
        let f = random_squarefree(&ctx, d, &mut rng);
        let cover = KummerCover::from_strata(
            &ctx,
            group.clone(),
            vec![(GroupVec(vec![1]), f.clone())],
            vec![FieldElem::ONE],
        )?;
        let g = cover.true_genus()?;
        genera[g as usize] += 1;
        let coeffs = cover.zeta_numerator(&ctx)?;
        if !functional_equation_holds(&coeffs, 3, g) {
            bad.push(format!("degree {d} cover {f:?}"));
            continue;
        }
        let predicted = predicted_next_count(&coeffs, 3, g);
        let actual = BigInt::from(cover.point_count(&ctx, 2 * g as u32 + 1)?);
        if predicted != actual {
            bad.push(format!("extension prediction off for {f:?}"));
        }
    }
    results.push(CheckResult::new(
        "double-cover-zeta",
        bad.is_empty(),
        if bad.is_empty() {
            format!("100 covers, genus histogram {genera:?}")
        } else {
            bad.join("; ")
        },
    ));

    let ctx5 = ffield::make_field(5, 1)?;
    let klein = GroupSpec::new(vec![2, 2])?;
    let classes =
        [GroupVec(vec![1, 0]), GroupVec(vec![0, 1]), GroupVec(vec![1, 1])];
    let mut bad = Vec::new();
    let mut done = 0;
    for genus_one in [false, true] {
        let mut made = 0;
        while made < 20 {
            let degrees: [usize; 3] = if genus_one {
                match rng.gen_range(0..3u32) {
                    0 => [2, 2, 0],
                    1 => [2, 0, 2],
                    _ => [0, 2, 2],
                }
            } else {
                [1, 1, 1]
            };
            let parts: Vec<(GroupVec, MonicPoly)> = classes
                .iter()
                .zip(degrees)
                .filter(|(_, d)| *d > 0)
                .map(|(a, d)| (a.clone(), random_squarefree(&ctx5, d, &mut rng)))
                .collect();
            let Ok(cover) = KummerCover::from_strata(
                &ctx5,
                klein.clone(),
                parts,
                vec![FieldElem::ONE; 2],
            ) else {
                continue;
            };
            made += 1;
            done += 1;
            let g = cover.true_genus()?;
            if g != genus_one as u64 {
                bad.push(format!("expected genus {}, got {g}", genus_one as u64));
                continue;
            }
            let coeffs = cover.zeta_numerator(&ctx5)?;
            if !functional_equation_holds(&coeffs, 5, g) {
                bad.push(format!("functional equation fails at genus {g}"));
                continue;
            }
            if g > 0 {
                let predicted = predicted_next_count(&coeffs, 5, g);
                let actual = BigInt::from(cover.point_count(&ctx5, 2 * g as u32 + 1)?);
                if predicted != actual {
                    bad.push("extension prediction off".into());
                }
            }
        }
    }
    results.push(CheckResult::new(
        "biquadratic-zeta",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{done} covers at the two smallest genera")
        } else {
            bad.join("; ")
        },
    ));
    Ok(results)
}

/// Decompose-recompose suite on seeded random covers.
pub fn covers_suite(samples: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();

    let ctx = ffield::make_field(5, 1)?;
    let group = GroupSpec::new(vec![4])?;
    let table = polyring::irreducibles_up_to(&ctx, 5);
    let mut bad = Vec::new();
    for _ in 0..samples {
        let d = rng.gen_range(2..=5usize);
        let f = loop {
            let idx = rng.gen_range(0..polyring::monic_count(5, d));
            let f = polyring::monic_poly(&ctx, d, idx);
            if f.evaluate(&ctx, FieldElem::ZERO) != FieldElem::ZERO
                && polyring::is_power_free(&ctx, &table, &f, 4)?
            {
                break f;
            }
        };
        let cover =
            KummerCover::from_composites(&ctx, group.clone(), &[f.clone()], vec![FieldElem::ONE])?;
        if cover.strata().composite(&ctx, 0) != f {
            bad.push(format!("recomposition differs for {f:?}"));
            continue;
        }
        for (alpha, part) in cover.strata().parts() {
            if alpha.is_zero() || !polyring::is_squarefree(&ctx, part) {
                bad.push(format!("bad stratum {alpha:?} for {f:?}"));
            }
        }
        if cover.galois_subgroup().order() == group.order() {
            let v = cover.virtual_genus();
            let g = cover.true_genus()?;
            if *v.denom() != 1 || *v.numer() != g as i64 {
                bad.push(format!("genus mismatch {v} vs {g} for {f:?}"));
            }
        }
    }
    results.push(CheckResult::new(
        "quartic-roundtrip",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{samples} power-free composites")
        } else {
            bad.join("; ")
        },
    ));

    let klein = GroupSpec::new(vec![2, 2])?;
    let mut bad = Vec::new();
    for _ in 0..samples {
        let f1 = random_squarefree(&ctx, rng.gen_range(1..=3usize), &mut rng);
        let f2 = random_squarefree(&ctx, rng.gen_range(1..=3usize), &mut rng);
        let cover = KummerCover::from_composites(
            &ctx,
            klein.clone(),
            &[f1.clone(), f2.clone()],
            vec![FieldElem::ONE; 2],
        )?;
        if cover.strata().composite(&ctx, 0) != f1 || cover.strata().composite(&ctx, 1) != f2 {
            bad.push(format!("recomposition differs for {f1:?}, {f2:?}"));
        }
    }
    results.push(CheckResult::new(
        "biquadratic-roundtrip",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{samples} squarefree pairs")
        } else {
            bad.join("; ")
        },
    ));
    Ok(results)
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}
