//! Census batch front-end.
//!
//! * `census`: genus-indexed cover counts through the chosen paths.
//! * `strata`: the strata degree vectors behind a genus census.
//! * `series`: generating-series coefficients by weighted degree.
//! * `predict`: closed-form constants, main terms and the limit law.
//! * `distribution`: point-count histogram against the limit law.
//! * `verify`: invariant suites; exits 4 when any check fails.
//!
//! Identical inputs produce byte-identical outputs at any thread count.

mod job;
mod render;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use moduli_census::asymptotics;
use moduli_census::census::{self, CensusPath};
use moduli_census::genfun;
use moduli_census::verify::{self, CheckResult};

use job::{AppError, FileConfig, JobConfig};
use render::{emit, fraction, json, object, ratio_of, tsv};

#[derive(Parser)]
#[command(
    name = "census",
    version,
    about = "Exact census of abelian covers of the projective line"
)]
struct Cli {
    /// TOML file supplying any long option
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Worker threads (also read from CENSUS_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Serialization format overriding the subcommand default
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Enumeration budget in estimated work items
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PathChoice {
    Direct,
    Mobius,
    Series,
    All,
}

impl PathChoice {
    fn parse(name: &str) -> Result<PathChoice, AppError> {
        match name {
            "direct" => Ok(PathChoice::Direct),
            "mobius" => Ok(PathChoice::Mobius),
            "series" => Ok(PathChoice::Series),
            "all" => Ok(PathChoice::All),
            other => Err(AppError::config(format!("unknown path {other:?}"))),
        }
    }

    fn singles(self) -> Vec<(&'static str, CensusPath)> {
        match self {
            PathChoice::Direct => vec![("direct", CensusPath::Direct)],
            PathChoice::Mobius => vec![("mobius", CensusPath::Mobius)],
            PathChoice::Series => vec![("series", CensusPath::Series)],
            PathChoice::All => vec![
                ("direct", CensusPath::Direct),
                ("mobius", CensusPath::Mobius),
                ("series", CensusPath::Series),
            ],
        }
    }
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// Field size, a prime power
    #[arg(long)]
    q: Option<u64>,
    /// Field characteristic
    #[arg(long)]
    p: Option<u64>,
    /// Extension degree over the prime field
    #[arg(long)]
    ext: Option<u32>,
    /// Invariant factors r1|r2|..., comma separated
    #[arg(long, value_delimiter = ',')]
    group: Vec<u64>,
    /// Boundary class, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = false)]
    k: Option<Vec<u64>>,
    /// Marked point x-coordinates, comma separated
    #[arg(long, value_delimiter = ',')]
    points: Vec<u64>,
    /// Exponent rows: `;`-separated rows of comma-separated integers
    #[arg(long)]
    eps: Option<String>,
    /// Weight override per nonzero class, comma separated
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<u64>>,
}

impl FamilyArgs {
    fn resolve(&self, file: &FileConfig, budget: Option<u128>) -> Result<JobConfig, AppError> {
        JobConfig::resolve(
            file,
            self.q,
            self.p,
            self.ext,
            &self.group,
            self.k.as_ref(),
            &self.points,
            self.eps.as_deref(),
            self.weights.as_ref(),
            budget,
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Count covers of one genus, or of an inclusive genus range
    Census {
        #[command(flatten)]
        family: FamilyArgs,
        /// Genus to count
        #[arg(long)]
        genus: Option<u64>,
        /// Inclusive end of a genus range
        #[arg(long)]
        genus_end: Option<u64>,
        /// Counting path: direct, mobius, series or all
        #[arg(long, value_enum)]
        path: Option<PathChoice>,
    },
    /// List the strata degree vectors behind a genus census
    Strata {
        #[command(flatten)]
        family: FamilyArgs,
        /// Genus to expand
        #[arg(long)]
        genus: Option<u64>,
    },
    /// Tabulate series coefficients by weighted degree
    Series {
        #[command(flatten)]
        family: FamilyArgs,
        /// Largest weighted degree
        #[arg(long)]
        dmax: Option<usize>,
    },
    /// Closed-form constants and main terms for elementary groups
    Predict {
        #[command(flatten)]
        family: FamilyArgs,
        /// Genus for the main-term prediction
        #[arg(long)]
        genus: Option<u64>,
        /// Marked-point count for the constrained leading coefficient
        #[arg(long)]
        marked: Option<usize>,
        /// Prime-degree cutoff for the analytic constant
        #[arg(long)]
        cutoff: Option<u32>,
    },
    /// Histogram of rational point counts against the limit law
    Distribution {
        #[command(flatten)]
        family: FamilyArgs,
        /// Genus of the sampled family
        #[arg(long)]
        genus: Option<u64>,
    },
    /// Run invariant suites
    Verify {
        /// mobius, group, series, zeta, covers or all
        #[arg(long)]
        suite: Option<String>,
        /// Largest group order for lattice suites
        #[arg(long)]
        max_order: Option<u64>,
        /// Sample count for randomized suites
        #[arg(long)]
        samples: Option<usize>,
        /// Seed for randomized suites
        #[arg(long)]
        seed: Option<u64>,
        /// Largest weighted degree for the series suite
        #[arg(long)]
        dmax: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    let file = job::load(cli.config.as_deref())?;
    let threads = cli.threads.or(file.threads).or_else(|| {
        std::env::var("CENSUS_THREADS").ok().and_then(|s| s.parse().ok())
    });
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| AppError { code: 1, message: format!("thread pool: {e}") })?;
    }
    let output = cli.output.clone().or_else(|| file.output.clone().map(PathBuf::from));
    let format = match (cli.format, file.format.as_deref()) {
        (Some(f), _) => Some(f),
        (None, Some("json")) => Some(Format::Json),
        (None, Some("tsv")) => Some(Format::Tsv),
        (None, Some(other)) => {
            return Err(AppError::config(format!("unknown format {other:?}")))
        }
        (None, None) => None,
    };
    let budget = cli.budget;

    match &cli.command {
        Command::Census { family, genus, genus_end, path } => {
            let job = family.resolve(&file, budget)?;
            let g0 = genus.or(file.genus).ok_or_else(|| AppError::config("--genus is required"))?;
            let g1 = genus_end.or(file.genus_end).unwrap_or(g0);
            if g1 < g0 {
                return Err(AppError::config("--genus-end is below --genus"));
            }
            let choice = match path {
                Some(p) => *p,
                None => match file.path.as_deref() {
                    Some(name) => PathChoice::parse(name)?,
                    None => PathChoice::Mobius,
                },
            };
            run_census(&job, g0, g1, choice, format.unwrap_or(Format::Json), output.as_deref())
        }
        Command::Strata { family, genus } => {
            let job = family.resolve(&file, budget)?;
            let g = genus.or(file.genus).ok_or_else(|| AppError::config("--genus is required"))?;
            run_strata(&job, g, format.unwrap_or(Format::Tsv), output.as_deref())
        }
        Command::Series { family, dmax } => {
            let job = family.resolve(&file, budget)?;
            let dmax = dmax.or(file.dmax).unwrap_or(genfun::DEFAULT_DMAX);
            run_series(&job, dmax, format.unwrap_or(Format::Tsv), output.as_deref())
        }
        Command::Predict { family, genus, marked, cutoff } => {
            let job = family.resolve(&file, budget)?;
            let g = genus.or(file.genus);
            let marked = marked.or(file.marked).unwrap_or(0);
            let cutoff = cutoff.or(file.cutoff).unwrap_or(12);
            run_predict(&job, g, marked, cutoff, format.unwrap_or(Format::Json), output.as_deref())
        }
        Command::Distribution { family, genus } => {
            let job = family.resolve(&file, budget)?;
            let g = genus.or(file.genus).ok_or_else(|| AppError::config("--genus is required"))?;
            run_distribution(&job, g, format.unwrap_or(Format::Tsv), output.as_deref())
        }
        Command::Verify { suite, max_order, samples, seed, dmax } => {
            let suite = suite.clone().or_else(|| file.suite.clone()).unwrap_or_else(|| "all".into());
            let max_order = max_order.or(file.max_order);
            let samples = samples.or(file.samples);
            let seed = seed.or(file.seed).unwrap_or(1);
            let dmax = dmax.or(file.dmax).unwrap_or(5);
            run_verify(&suite, max_order, samples, seed, dmax, output.as_deref())
        }
    }
}

fn elementary_shape(job: &JobConfig) -> Result<(u64, u32), AppError> {
    let factors = job.group.factors();
    let q = factors[0];
    if factors.iter().any(|&r| r != q) || !(2..q).all(|d| q % d != 0) {
        return Err(AppError::config(
            "closed forms require an elementary abelian group (equal prime invariant factors)",
        ));
    }
    Ok((q, factors.len() as u32))
}

fn constraint_value(job: &JobConfig) -> Value {
    let cc = &job.constraint;
    object(vec![
        (
            "k",
            cc.k.as_ref()
                .map(|k| Value::from(k.0.clone()))
                .unwrap_or(Value::Null),
        ),
        (
            "points",
            Value::from(cc.points.iter().map(|x| x.index()).collect::<Vec<u64>>()),
        ),
        (
            "eps",
            Value::from(
                cc.eps.iter().map(|row| Value::from(row.clone())).collect::<Vec<Value>>(),
            ),
        ),
    ])
}

fn run_census(
    job: &JobConfig,
    g0: u64,
    g1: u64,
    choice: PathChoice,
    format: Format,
    output: Option<&std::path::Path>,
) -> Result<(), AppError> {
    let mut per_genus: BTreeMap<u64, Vec<(&'static str, u128, u128)>> = BTreeMap::new();
    for g in g0..=g1 {
        let mut rows = Vec::new();
        for (name, path) in choice.singles() {
            let monic = census::count_exact(
                &job.ctx,
                &job.group,
                g,
                &job.constraint,
                path,
                &job.budget,
            )?;
            let twisted = u128::from(job.group.order()) * monic;
            rows.push((name, twisted, monic));
        }
        per_genus.insert(g, rows);
    }
    let text = match format {
        Format::Tsv => {
            let mut rows = vec![vec![
                "genus".into(),
                "path".into(),
                "count".into(),
                "monic_count".into(),
            ]];
            for (g, paths) in &per_genus {
                for (name, twisted, monic) in paths {
                    rows.push(vec![
                        g.to_string(),
                        name.to_string(),
                        twisted.to_string(),
                        monic.to_string(),
                    ]);
                }
            }
            tsv(&rows)
        }
        Format::Json => {
            let mut entries = vec![
                ("q", Value::from(job.ctx.q().to_string())),
                ("group", Value::from(job.group.factors().to_vec())),
                ("constraint", constraint_value(job)),
            ];
            if g0 == g1 && per_genus[&g0].len() == 1 {
                let (name, twisted, monic) = per_genus[&g0][0];
                entries.push(("genus", Value::from(g0.to_string())));
                entries.push(("path", Value::from(name)));
                entries.push(("count", Value::from(twisted.to_string())));
                entries.push(("monic_count", Value::from(monic.to_string())));
            } else {
                let mut by_genus = Vec::new();
                for (g, paths) in &per_genus {
                    let agree = paths.windows(2).all(|w| w[0].1 == w[1].1);
                    let mut inner = vec![("genus", Value::from(g.to_string()))];
                    for (name, twisted, monic) in paths {
                        inner.push((
                            name,
                            object(vec![
                                ("count", Value::from(twisted.to_string())),
                                ("monic_count", Value::from(monic.to_string())),
                            ]),
                        ));
                    }
                    if paths.len() > 1 {
                        inner.push(("agree", Value::from(agree)));
                    }
                    by_genus.push(object(inner));
                }
                entries.push(("results", Value::from(by_genus)));
            }
            json(&object(entries))
        }
    };
    emit(output, &text)
}

fn run_strata(
    job: &JobConfig,
    g: u64,
    format: Format,
    output: Option<&std::path::Path>,
) -> Result<(), AppError> {
    let svs = census::genus_strata(&job.group, &job.weights, g, job.constraint.k.as_ref());
    let classes = job.group.nonzero_elements();
    let label = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    let text = match format {
        Format::Tsv => {
            let mut header: Vec<String> =
                classes.iter().map(|a| format!("d({})", label(&a.0))).collect();
            header.push("weighted".into());
            header.push("boundary".into());
            let mut rows = vec![header];
            for sv in &svs {
                let mut row: Vec<String> =
                    sv.degrees().iter().map(u64::to_string).collect();
                row.push(sv.weighted_degree(&job.weights).to_string());
                row.push(label(&sv.degree_class(&job.group).0));
                rows.push(row);
            }
            tsv(&rows)
        }
        Format::Json => {
            let items: Vec<Value> = svs
                .iter()
                .map(|sv| {
                    object(vec![
                        ("degrees", Value::from(sv.degrees().to_vec())),
                        (
                            "weighted",
                            Value::from(sv.weighted_degree(&job.weights).to_string()),
                        ),
                        ("boundary", Value::from(label(&sv.degree_class(&job.group).0))),
                    ])
                })
                .collect();
            json(&object(vec![
                ("genus", Value::from(g.to_string())),
                ("strata", Value::from(items)),
            ]))
        }
    };
    emit(output, &text)
}

fn run_series(
    job: &JobConfig,
    dmax: usize,
    format: Format,
    output: Option<&std::path::Path>,
) -> Result<(), AppError> {
    let series = genfun::series_f(&job.ctx, &job.group, &job.constraint, &job.weights, dmax)?;
    let counts = genfun::series_counts(&series)?;
    let text = match format {
        Format::Tsv => {
            let mut rows = vec![vec!["D".to_string(), "count".to_string()]];
            for (d, n) in counts.iter().enumerate() {
                rows.push(vec![d.to_string(), n.to_string()]);
            }
            tsv(&rows)
        }
        Format::Json => json(&object(vec![
            ("dmax", Value::from(dmax.to_string())),
            (
                "counts",
                Value::from(counts.iter().map(|n| n.to_string()).collect::<Vec<_>>()),
            ),
        ])),
    };
    emit(output, &text)
}

fn scaled_value(big_q: u64, n: u32, q: u64, c: &asymptotics::ScaledL, cutoff: u32) -> Value {
    let (value, bound) = c.evaluate(q, cutoff);
    let _ = (big_q, n);
    object(vec![
        ("rational", Value::from(fraction(&c.rational))),
        ("l_index", Value::from(c.m.to_string())),
        ("value", Value::from(format!("{value}"))),
        ("error_bound", Value::from(format!("{bound}"))),
    ])
}

fn run_predict(
    job: &JobConfig,
    genus: Option<u64>,
    marked: usize,
    cutoff: u32,
    format: Format,
    output: Option<&std::path::Path>,
) -> Result<(), AppError> {
    let (big_q, n) = elementary_shape(job)?;
    let q = job.ctx.q();
    let zeta = asymptotics::zeta_q(q, 2)?;
    let full = asymptotics::leading_coeff_full(big_q, n, q)?;
    let constrained = asymptotics::leading_coeff_constrained(big_q, n, q, marked as u64)?;
    let xi = asymptotics::xi_law(big_q, n, q)?;
    let growth: Vec<Value> = genfun::predicted_growth(&job.group)
        .iter()
        .map(|t| {
            object(vec![
                ("weight", Value::from(t.weight.to_string())),
                ("degree_bound", Value::from(t.degree_bound.to_string())),
            ])
        })
        .collect();
    let mut entries = vec![
        ("q", Value::from(q.to_string())),
        ("group", Value::from(job.group.factors().to_vec())),
        ("zeta_2", Value::from(fraction(&zeta))),
        ("leading_full", scaled_value(big_q, n, q, &full, cutoff)),
        ("leading_constrained", scaled_value(big_q, n, q, &constrained, cutoff)),
        ("marked", Value::from(marked.to_string())),
        ("prime_cutoff", Value::from(cutoff.to_string())),
        ("xi_law", {
            let mut map = serde_json::Map::new();
            for (v, p) in xi.values() {
                map.insert(v.to_string(), Value::from(fraction(p)));
            }
            Value::Object(map)
        }),
        ("growth", Value::from(growth)),
    ];
    if let Some(g) = genus {
        let mt = asymptotics::main_term(big_q, n, q, g, cutoff)?;
        let mut inner = vec![
            (
                "degree",
                mt.degree.map(|d| Value::from(d.to_string())).unwrap_or(Value::Null),
            ),
            ("value", Value::from(format!("{}", mt.value))),
            ("error_bound", Value::from(format!("{}", mt.error_bound))),
        ];
        if let Some(exact) = asymptotics::main_term_rational(big_q, n, q, g)? {
            inner.push(("exact", Value::from(fraction(&exact))));
        }
        entries.push(("genus", Value::from(g.to_string())));
        entries.push(("main_term", object(inner)));
    }
    let text = match format {
        Format::Json => json(&object(entries)),
        Format::Tsv => {
            return Err(AppError::config("predict emits scalar results; use json"))
        }
    };
    emit(output, &text)
}

fn run_distribution(
    job: &JobConfig,
    g: u64,
    format: Format,
    output: Option<&std::path::Path>,
) -> Result<(), AppError> {
    let (big_q, n) = elementary_shape(job)?;
    let hist = census::point_count_histogram(&job.ctx, &job.group, g, &job.budget)?;
    let law = asymptotics::sum_law(big_q, n, job.ctx.q())?;
    let tv = asymptotics::tv_distance(&hist, &law)?;
    let total: u128 = hist.values().sum();
    let mut keys: Vec<u64> = hist.keys().copied().chain(law.masses().keys().copied()).collect();
    keys.sort_unstable();
    keys.dedup();
    let text = match format {
        Format::Tsv => {
            let mut rows = vec![vec![
                "points".to_string(),
                "empirical".to_string(),
                "law".to_string(),
            ]];
            for k in &keys {
                let emp = hist.get(k).copied().unwrap_or(0);
                rows.push(vec![
                    k.to_string(),
                    fraction(&ratio_of(emp, total)),
                    fraction(&law.mass(*k)),
                ]);
            }
            let mut text = tsv(&rows);
            text.push_str(&format!("# tv\t{}\n", fraction(&tv)));
            text
        }
        Format::Json => {
            let rows: Vec<Value> = keys
                .iter()
                .map(|k| {
                    let emp = hist.get(k).copied().unwrap_or(0);
                    object(vec![
                        ("points", Value::from(k.to_string())),
                        ("empirical", Value::from(fraction(&ratio_of(emp, total)))),
                        ("law", Value::from(fraction(&law.mass(*k)))),
                    ])
                })
                .collect();
            json(&object(vec![
                ("genus", Value::from(g.to_string())),
                ("covers", Value::from(total.to_string())),
                ("tv", Value::from(fraction(&tv))),
                ("rows", Value::from(rows)),
            ]))
        }
    };
    emit(output, &text)
}

fn run_verify(
    suite: &str,
    max_order: Option<u64>,
    samples: Option<usize>,
    seed: u64,
    dmax: usize,
    output: Option<&std::path::Path>,
) -> Result<(), AppError> {
    let mut labelled: Vec<(&str, Vec<CheckResult>)> = Vec::new();
    let all = suite == "all";
    if all || suite == "mobius" {
        labelled.push(("mobius", verify::mobius_suite(max_order.unwrap_or(64))?));
    }
    if all || suite == "group" {
        labelled.push((
            "group",
            verify::group_suite(samples.unwrap_or(20), max_order.unwrap_or(128), seed)?,
        ));
    }
    if all || suite == "series" {
        labelled.push(("series", verify::series_suite(dmax)?));
    }
    if all || suite == "zeta" {
        labelled.push(("zeta", verify::zeta_suite(seed)?));
    }
    if all || suite == "covers" {
        labelled.push(("covers", verify::covers_suite(samples.unwrap_or(12), seed)?));
    }
    if labelled.is_empty() {
        return Err(AppError::config(format!("unknown suite {suite:?}")));
    }
    let mut rows = vec![vec![
        "suite".to_string(),
        "check".to_string(),
        "status".to_string(),
        "detail".to_string(),
    ]];
    let mut failures = 0usize;
    for (name, results) in &labelled {
        for r in results {
            if !r.passed {
                failures += 1;
            }
            rows.push(vec![
                name.to_string(),
                r.name.clone(),
                if r.passed { "pass" } else { "fail" }.to_string(),
                r.detail.clone(),
            ]);
        }
    }
    emit(output, &tsv(&rows))?;
    if failures > 0 {
        return Err(AppError::verification(format!("{failures} checks failed")));
    }
    Ok(())
}
