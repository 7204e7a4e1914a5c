//! Job assembly: optional config file, flag merging, upfront validation.
//!
//! * A config file supplies the same keys as the long options; explicit
//!   flags win.
//! * Every job is validated against `q = 1 (mod r_n)` before dispatch.
//! * Failures carry the process exit code: 2 for configuration errors,
//!   3 for budget exhaustion, 4 for verification failures.

use std::path::Path;

use serde::Deserialize;

use moduli_census::abgroup::{GroupSpec, GroupVec};
use moduli_census::census::{Budget, CensusConstraint, StrataWeights, DEFAULT_BUDGET};
use moduli_census::ffield::{self, FieldCtx, FieldElem};
use moduli_census::Error;

/// Terminal error with its process exit code.
#[derive(Debug)]
pub struct AppError {
    pub code: u8,
    pub message: String,
}

impl AppError {
    pub fn config(message: impl Into<String>) -> AppError {
        AppError { code: 2, message: message.into() }
    }

    pub fn verification(message: impl Into<String>) -> AppError {
        AppError { code: 4, message: message.into() }
    }
}

impl From<Error> for AppError {
    fn from(err: Error) -> AppError {
        let code = match err {
            Error::BudgetExceeded { .. } => 3,
            Error::Inconsistent(_) => 1,
            _ => 2,
        };
        AppError { code, message: err.to_string() }
    }
}

/// Config-file counterpart of the command line; all keys optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub q: Option<u64>,
    pub p: Option<u64>,
    pub ext: Option<u32>,
    pub group: Option<Vec<u64>>,
    pub genus: Option<u64>,
    pub genus_end: Option<u64>,
    pub path: Option<String>,
    pub k: Option<Vec<u64>>,
    pub points: Option<Vec<u64>>,
    pub eps: Option<Vec<Vec<u64>>>,
    pub weights: Option<Vec<u64>>,
    pub dmax: Option<usize>,
    pub marked: Option<usize>,
    pub cutoff: Option<u32>,
    pub budget: Option<u128>,
    pub threads: Option<usize>,
    pub output: Option<String>,
    pub format: Option<String>,
    pub suite: Option<String>,
    pub max_order: Option<u64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

/// Loads the config file when given, else an empty default.
pub fn load(path: Option<&Path>) -> Result<FileConfig, AppError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| AppError::config(format!("bad config {}: {e}", path.display())))
}

fn prime_power_split(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            return (rest == 1).then_some((p, e));
        }
        p += 1;
    }
    Some((q, 1))
}

/// Fully resolved and validated job parameters.
#[derive(Debug)]
pub struct JobConfig {
    pub ctx: FieldCtx,
    pub group: GroupSpec,
    pub constraint: CensusConstraint,
    pub weights: StrataWeights,
    pub budget: Budget,
}

impl JobConfig {
    /// Field, group and constraint resolution shared by every subcommand.
    pub fn resolve(
        file: &FileConfig,
        q: Option<u64>,
        p: Option<u64>,
        ext: Option<u32>,
        group: &[u64],
        k: Option<&Vec<u64>>,
        points: &[u64],
        eps: Option<&str>,
        weights: Option<&Vec<u64>>,
        budget: Option<u128>,
    ) -> Result<JobConfig, AppError> {
        let q = q.or(file.q);
        let p = p.or(file.p);
        let ext = ext.or(file.ext);
        let (p, e) = match (q, p) {
            (Some(q), maybe_p) => {
                let (fp, fe) = prime_power_split(q)
                    .ok_or_else(|| AppError::config(format!("{q} is not a prime power")))?;
                if maybe_p.is_some_and(|p| p != fp) || ext.is_some_and(|e| e != fe) {
                    return Err(AppError::config(format!(
                        "field flags disagree: q = {q} factors as {fp}^{fe}"
                    )));
                }
                (fp, fe)
            }
            (None, Some(p)) => (p, ext.unwrap_or(1)),
            (None, None) => return Err(AppError::config("a field is required: --q or --p")),
        };
        let ctx = ffield::make_field(p, e)?;

        let factors = if group.is_empty() {
            file.group.clone().unwrap_or_default()
        } else {
            group.to_vec()
        };
        if factors.is_empty() {
            return Err(AppError::config("a group is required: --group r1,r2,..."));
        }
        let group = GroupSpec::new(factors)?;
        let rn = group.exponent();
        if (ctx.q() - 1) % rn != 0 {
            return Err(AppError::config(format!(
                "q = {} is not 1 mod the group exponent {rn}",
                ctx.q()
            )));
        }

        let k = k.cloned().or_else(|| file.k.clone()).map(GroupVec);
        let point_list: Vec<u64> =
            if points.is_empty() { file.points.clone().unwrap_or_default() } else { points.to_vec() };
        let mut elems = Vec::new();
        for &x in &point_list {
            if x >= ctx.q() {
                return Err(AppError::config(format!("point {x} is outside the field")));
            }
            elems.push(FieldElem(x as u32));
        }
        let eps_rows: Vec<Vec<u64>> = match eps {
            Some(text) => parse_eps(text)?,
            None => file.eps.clone().unwrap_or_default(),
        };
        let constraint = CensusConstraint { k, points: elems, eps: eps_rows };

        let weights = match weights.cloned().or_else(|| file.weights.clone()) {
            Some(values) => StrataWeights::custom(&group, values)?,
            None => StrataWeights::hurwitz(&group),
        };
        let budget = Budget::new(budget.or(file.budget).unwrap_or(DEFAULT_BUDGET));
        Ok(JobConfig { ctx, group, constraint, weights, budget })
    }
}

fn parse_eps(text: &str) -> Result<Vec<Vec<u64>>, AppError> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|cell| {
                    cell.trim()
                        .parse::<u64>()
                        .map_err(|_| AppError::config(format!("bad exponent entry {cell:?}")))
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_splitting() {
        assert_eq!(prime_power_split(9), Some((3, 2)));
        assert_eq!(prime_power_split(13), Some((13, 1)));
        assert_eq!(prime_power_split(12), None);
        assert_eq!(prime_power_split(1), None);
    }

    #[test]
    fn eps_grid_parsing() {
        assert_eq!(parse_eps("0,1;1,0").unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert!(parse_eps("0,x").is_err());
    }

    #[test]
    fn resolution_validates_field_and_group() {
        let file = FileConfig::default();
        let err = JobConfig::resolve(&file, Some(3), None, None, &[3], None, &[], None, None, None)
            .unwrap_err();
        assert_eq!(err.code, 2);
        let ok = JobConfig::resolve(&file, Some(3), None, None, &[2], None, &[], None, None, None);
        assert!(ok.is_ok());
    }

    #[test]
    fn file_values_fill_missing_flags() {
        let file = FileConfig { q: Some(5), group: Some(vec![2, 2]), ..Default::default() };
        let job =
            JobConfig::resolve(&file, None, None, None, &[], None, &[], None, None, None).unwrap();
        assert_eq!(job.ctx.q(), 5);
        assert_eq!(job.group.factors(), &[2, 2]);
    }
}
