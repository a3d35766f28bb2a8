//! Command-line surface.

use std::io::Write;
use std::path::{Path, PathBuf};

use bistochastic::birkhoff::{decompose, DEFAULT_ZERO_THRESHOLD};
use bistochastic::constructors::{
    anatomy_matrix, circulant_matrix, constant_circulant, dp_matrix, perfect_secrecy_matrix,
    tridiagonal_matrix,
};
use bistochastic::entropy::{budget_bits, dp_epsilon_bound, entropy_rate};
use bistochastic::matrix::FILE_TOLERANCE;
use bistochastic::pram::{
    anonymize_column, anonymize_conservative, check_conservative, column_stream,
    estimate_frequencies,
};
use bistochastic::{
    AnatomyPartition, BistochasticMatrix, ColumnError, ColumnErrors, ColumnMode, Dataset,
    Distribution, PrivacyReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::config::AnonymizeConfig;
use crate::dataset_io::{load_dataset, save_dataset, SchemaSpec};
use crate::error::{CliError, Result};
use crate::matrix_io::{
    format_decomposition, load_bistochastic, read_counts, read_matrix, write_matrix,
};
use crate::report::{percent, render_kv, render_text};
use crate::table1;
use crate::tuning::{solve_for_beta, Family};

#[derive(Debug, Parser)]
#[command(
    name = "bistochastic",
    version,
    about = "Bistochastic privacy: build, analyze and apply anonymization matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a named matrix family, print its privacy level and optionally write it.
    Build(BuildArgs),
    /// Report entropy rates and the conservative privacy level of matrix files.
    Analyze(AnalyzeArgs),
    /// Anonymize a CSV dataset column by column.
    Anonymize(AnonymizeArgs),
    /// Estimate original frequencies from observed counts.
    Estimate(EstimateArgs),
    /// Decompose a matrix into weighted permutations.
    Decompose(DecomposeArgs),
    /// Recompute the reference table of privacy levels for 12 categories.
    Table1(Table1Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Kv,
}

#[derive(Debug, Args)]
pub struct DisplayOpts {
    /// Decimal places for percentages (0 rounds to whole percents).
    #[arg(long, default_value_t = 0)]
    pub precision: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(subcommand)]
    pub kind: BuildKind,
}

#[derive(Debug, Args)]
pub struct BuildCommon {
    /// Write the matrix here (comma-separated rows).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Replace zero entries by this value without renormalizing (at most 1e-3).
    #[arg(long)]
    pub gamma: Option<f64>,
    #[command(flatten)]
    pub display: DisplayOpts,
}

#[derive(Debug, Subcommand)]
pub enum BuildKind {
    /// ε-differentially private randomized response.
    Dp {
        #[arg(long)]
        size: usize,
        #[arg(
            long,
            required_unless_present = "target_beta",
            conflicts_with = "target_beta"
        )]
        epsilon: Option<f64>,
        /// Find ε giving this β (within 1e-4).
        #[arg(long)]
        target_beta: Option<f64>,
        #[command(flatten)]
        common: BuildCommon,
    },
    /// Perfect secrecy: every entry 1/size.
    Secrecy {
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        common: BuildCommon,
    },
    /// Block-diagonal anatomy / k-anonymity matrix.
    ///
    /// With --k, indices are split into consecutive classes of k; when k does
    /// not divide the size, the last class absorbs the remainder. A partition
    /// file lists one class per line as comma- or space-separated indices.
    Anatomy {
        #[arg(long, requires = "k")]
        size: Option<usize>,
        #[arg(long, requires = "size", conflicts_with = "partition")]
        k: Option<usize>,
        #[arg(long, required_unless_present = "k")]
        partition: Option<PathBuf>,
        #[command(flatten)]
        common: BuildCommon,
    },
    /// Circulant matrix from its diagonal value or its full first row.
    Circulant {
        #[arg(long)]
        size: Option<usize>,
        /// Diagonal probability; the rest of each row is split evenly.
        #[arg(long, requires = "size", conflicts_with_all = ["first_row", "target_beta"])]
        p11: Option<f64>,
        /// Comma-separated first row.
        #[arg(long, conflicts_with = "target_beta")]
        first_row: Option<String>,
        #[arg(long, requires = "size")]
        target_beta: Option<f64>,
        #[command(flatten)]
        common: BuildCommon,
    },
    /// Symmetric tridiagonal matrix.
    Tridiagonal {
        #[arg(long)]
        size: Option<usize>,
        /// Same value for every off-diagonal pair.
        #[arg(long, requires = "size", conflicts_with_all = ["alphas", "target_beta"])]
        alpha: Option<f64>,
        /// Comma-separated off-diagonal values (size - 1 of them).
        #[arg(long, conflicts_with = "target_beta")]
        alphas: Option<String>,
        #[arg(long, requires = "size")]
        target_beta: Option<f64>,
        #[command(flatten)]
        common: BuildCommon,
    },
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(required = true)]
    pub matrices: Vec<PathBuf>,
    #[arg(long, default_value_t = FILE_TOLERANCE)]
    pub tolerance: f64,
    /// Accept ergodicized matrices built with this γ.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[command(flatten)]
    pub display: DisplayOpts,
}

#[derive(Debug, Args)]
pub struct AnonymizeArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub schema: PathBuf,
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Report destination (default: <out>.report.txt).
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Mode for numerical columns the config leaves unspecified.
    #[arg(long, default_value = "linear", value_parser = parse_mode)]
    pub mode: ColumnMode,
    #[arg(long, default_value_t = FILE_TOLERANCE)]
    pub tolerance: f64,
    /// Process columns on a thread pool (output is identical).
    #[arg(long)]
    pub parallel: bool,
    #[arg(long, default_value_t = 0)]
    pub precision: usize,
}

fn parse_mode(s: &str) -> std::result::Result<ColumnMode, String> {
    s.parse()
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Observed count per level.
    #[arg(long)]
    pub counts: PathBuf,
    /// Transition matrix (rows must sum to one).
    #[arg(long)]
    pub matrix: PathBuf,
    /// Decimal places (default: full precision).
    #[arg(long)]
    pub precision: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    pub matrix: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ZERO_THRESHOLD)]
    pub threshold: f64,
    #[arg(long, default_value_t = FILE_TOLERANCE)]
    pub tolerance: f64,
    /// Also write the decomposition to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[arg(long, default_value_t = 0)]
    pub precision: usize,
    /// Ergodicize matrices containing zeros with this γ first.
    #[arg(long)]
    pub gamma: Option<f64>,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Build(args) => cmd_build(args.kind, out),
        Command::Analyze(args) => cmd_analyze(&args, out),
        Command::Anonymize(args) => cmd_anonymize(&args, out),
        Command::Estimate(args) => cmd_estimate(&args, out),
        Command::Decompose(args) => cmd_decompose(&args, out),
        Command::Table1(args) => cmd_table1(&args, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

fn model(ctx: &str) -> impl Fn(bistochastic::Error) -> CliError + '_ {
    move |e| CliError::model(ctx, e)
}

fn parse_list(what: &str, s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Invalid(format!("{what}: cannot parse `{}`", f.trim())))
        })
        .collect()
}

fn read_partition(path: &Path) -> Result<AnatomyPartition> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut classes = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let class = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .map(|f| {
                f.parse::<usize>().map_err(|_| CliError::Parse {
                    path: path.into(),
                    line: i + 1,
                    message: format!("bad index `{f}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        classes.push(class);
    }
    AnatomyPartition::new(classes).map_err(|e| CliError::model(path.display().to_string(), e))
}

fn cmd_build(kind: BuildKind, out: &mut dyn Write) -> Result<()> {
    let ctx = model("build");
    let mut tuned = None;
    let (name, matrix, common) = match kind {
        BuildKind::Dp {
            size,
            epsilon,
            target_beta,
            common,
        } => {
            let eps = match (epsilon, target_beta) {
                (Some(e), _) => e,
                (None, Some(t)) => {
                    let e = solve_for_beta(Family::Dp, size, t)?;
                    tuned = Some(("epsilon", e));
                    e
                }
                (None, None) => unreachable!("clap requires one of them"),
            };
            ("dp", dp_matrix(size, eps).map_err(&ctx)?, common)
        }
        BuildKind::Secrecy { size, common } => (
            "secrecy",
            perfect_secrecy_matrix(size).map_err(&ctx)?,
            common,
        ),
        BuildKind::Anatomy {
            size,
            k,
            partition,
            common,
        } => {
            let p = match (size, k, partition) {
                (Some(n), Some(k), _) => AnatomyPartition::contiguous(n, k).map_err(&ctx)?,
                (_, _, Some(path)) => read_partition(&path)?,
                _ => unreachable!("clap requires --size/--k or --partition"),
            };
            ("anatomy", anatomy_matrix(&p).map_err(&ctx)?, common)
        }
        BuildKind::Circulant {
            size,
            p11,
            first_row,
            target_beta,
            common,
        } => {
            let m = match (p11, first_row, target_beta) {
                (Some(p), _, _) => constant_circulant(size.unwrap_or(0), p).map_err(&ctx)?,
                (_, Some(row), _) => {
                    let row = parse_list("first row", &row)?;
                    if let Some(n) = size.filter(|&n| n != row.len()) {
                        return Err(CliError::Invalid(format!(
                            "first row has {} entries, --size is {n}",
                            row.len()
                        )));
                    }
                    circulant_matrix(&Distribution::new(row).map_err(&ctx)?).map_err(&ctx)?
                }
                (_, _, Some(t)) => {
                    let r = size.unwrap_or(0);
                    let p = solve_for_beta(Family::Circulant, r, t)?;
                    tuned = Some(("p11", p));
                    constant_circulant(r, p).map_err(&ctx)?
                }
                _ => {
                    return Err(CliError::Invalid(
                        "circulant needs --p11, --first-row or --target-beta".into(),
                    ))
                }
            };
            ("circulant", m, common)
        }
        BuildKind::Tridiagonal {
            size,
            alpha,
            alphas,
            target_beta,
            common,
        } => {
            let values = match (alpha, alphas, target_beta) {
                (Some(a), _, _) => vec![a; size.unwrap_or(1).saturating_sub(1)],
                (_, Some(list), _) => {
                    let v = parse_list("alphas", &list)?;
                    if let Some(n) = size.filter(|&n| n != v.len() + 1) {
                        return Err(CliError::Invalid(format!(
                            "{} alphas give size {}, --size is {n}",
                            v.len(),
                            v.len() + 1
                        )));
                    }
                    v
                }
                (_, _, Some(t)) => {
                    let r = size.unwrap_or(0);
                    let a = solve_for_beta(Family::Tridiagonal, r, t)?;
                    tuned = Some(("alpha", a));
                    vec![a; r - 1]
                }
                _ => {
                    return Err(CliError::Invalid(
                        "tridiagonal needs --alpha, --alphas or --target-beta".into(),
                    ))
                }
            };
            (
                "tridiagonal",
                tridiagonal_matrix(&values).map_err(&ctx)?,
                common,
            )
        }
    };

    let matrix = match common.gamma {
        Some(g) => matrix.ergodicize(g).map_err(&ctx)?,
        None => matrix,
    };
    if let Some(path) = &common.out {
        write_matrix(path, matrix.entries())?;
    }
    emit(
        out,
        &describe_matrix(name, &matrix, tuned, common.out.as_deref(), &common.display)?,
    )
}

fn describe_matrix(
    kind: &str,
    m: &BistochasticMatrix,
    tuned: Option<(&str, f64)>,
    written: Option<&Path>,
    display: &DisplayOpts,
) -> Result<String> {
    let report = PrivacyReport::univariate(kind, m).map_err(model("build"))?;
    let bound = dp_epsilon_bound(m);
    let mut lines: Vec<(String, String)> = vec![
        ("kind".into(), kind.into()),
        ("size".into(), m.size().to_string()),
        ("entropy_bits".into(), format!("{:?}", entropy_rate(m))),
        (
            "budget_bits".into(),
            format!("{:?}", budget_bits(&[m.size()])),
        ),
    ];
    lines.push((
        "beta".into(),
        match display.format {
            OutputFormat::Text => percent(report.aggregate_beta, display.precision),
            OutputFormat::Kv => format!("{:?}", report.aggregate_beta),
        },
    ));
    lines.push((
        "dp_epsilon_bound".into(),
        if bound.is_infinite() {
            "inf".into()
        } else {
            format!("{bound:?}")
        },
    ));
    lines.push((
        "diagonally_dominant".into(),
        m.is_diagonally_dominant().to_string(),
    ));
    lines.push(("super_slack".into(), format!("{:?}", m.super_slack())));
    if let Some((name, value)) = tuned {
        lines.push((name.into(), format!("{value:?}")));
    }
    if let Some(p) = written {
        lines.push(("written".into(), p.display().to_string()));
    }
    let sep = match display.format {
        OutputFormat::Text => ": ",
        OutputFormat::Kv => "=",
    };
    Ok(lines
        .into_iter()
        .map(|(k, v)| format!("{k}{sep}{v}\n"))
        .collect())
}

fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<()> {
    let ms = args
        .matrices
        .iter()
        .map(|p| load_bistochastic(p, args.tolerance, args.gamma))
        .collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = args
        .matrices
        .iter()
        .map(|p| p.display().to_string())
        .collect();
    for (name, m) in names.iter().zip(&ms) {
        if m.size() < 2 {
            return Err(CliError::model(
                name.clone(),
                bistochastic::Error::DegenerateSize,
            ));
        }
    }
    let report = PrivacyReport::conservative(&names, &ms).map_err(model("analyze"))?;
    let text = match args.display.format {
        OutputFormat::Text => render_text(&report, args.display.precision),
        OutputFormat::Kv => render_kv(&report),
    };
    emit(out, &text)
}

/// Loads inputs, anonymizes, and writes the dataset and the report.
pub fn cmd_anonymize(args: &AnonymizeArgs, out: &mut dyn Write) -> Result<()> {
    let schema = SchemaSpec::load(&args.schema)?;
    let ds = load_dataset(&args.data, &schema)?;
    let config = AnonymizeConfig::load(&args.config)?;
    for c in &config.columns {
        if ds.column(&c.name).is_none() {
            return Err(CliError::Invalid(format!(
                "{}: column `{}` is not in the dataset",
                args.config.display(),
                c.name
            )));
        }
    }

    let mut ms = Vec::with_capacity(ds.column_count());
    let mut modes = Vec::with_capacity(ds.column_count());
    for col in ds.columns() {
        let entry = config.column(col.name()).ok_or_else(|| {
            CliError::Invalid(format!(
                "{}: no entry for column `{}`",
                args.config.display(),
                col.name()
            ))
        })?;
        let m = load_bistochastic(&entry.matrix, args.tolerance, None)?;
        let default = if col.is_categorical() {
            ColumnMode::Sample
        } else {
            args.mode
        };
        ms.push(m);
        modes.push(entry.mode.unwrap_or(default));
    }

    let (anonymized, report) = if args.parallel {
        anonymize_parallel(&ds, &ms, &modes, args.seed)
    } else {
        anonymize_conservative(&ds, &ms, &modes, args.seed)
    }
    .map_err(model("anonymize"))?;

    save_dataset(&anonymized, &args.out)?;
    let report_path = args.report.clone().unwrap_or_else(|| {
        let mut p = args.out.clone().into_os_string();
        p.push(".report.txt");
        PathBuf::from(p)
    });
    let text = render_text(&report, args.precision);
    std::fs::write(&report_path, &text).map_err(|e| CliError::io(&report_path, e))?;
    emit(out, &text)
}

/// Column-parallel version of [`anonymize_conservative`] with identical output.
pub fn anonymize_parallel(
    ds: &Dataset,
    ms: &[BistochasticMatrix],
    modes: &[ColumnMode],
    seed: u64,
) -> bistochastic::Result<(Dataset, PrivacyReport)> {
    check_conservative(ds, ms, modes)?;
    let results: Vec<_> = ds
        .columns()
        .par_iter()
        .enumerate()
        .map(|(i, col)| anonymize_column(col, &ms[i], modes[i], &mut column_stream(seed, i)))
        .collect();
    let mut columns = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (col, r) in ds.columns().iter().zip(results) {
        match r {
            Ok(c) => columns.push(c),
            Err(error) => failures.push(ColumnError {
                column: col.name().into(),
                error,
            }),
        }
    }
    if !failures.is_empty() {
        return Err(bistochastic::Error::Columns(ColumnErrors(failures)));
    }
    let names: Vec<&str> = ds.columns().iter().map(|c| c.name()).collect();
    let report = PrivacyReport::conservative(&names, ms)?;
    Ok((Dataset::new(columns)?, report))
}

fn fmt_values(v: &[f64], precision: Option<usize>) -> String {
    v.iter()
        .map(|x| match precision {
            Some(p) => format!("{x:.p$}"),
            None => format!("{x:?}"),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_estimate(args: &EstimateArgs, out: &mut dyn Write) -> Result<()> {
    let counts = read_counts(&args.counts)?;
    let m = read_matrix(&args.matrix)?;
    let ctx = args.counts.display().to_string();
    let lambda = Distribution::from_weights(&counts).map_err(model(&ctx))?;
    let est = match estimate_frequencies(&lambda, &m) {
        Ok(e) => e,
        Err(bistochastic::Error::SingularMatrix) => {
            return Err(CliError::EstimatorUnavailable {
                path: args.matrix.clone(),
            })
        }
        Err(e) => return Err(CliError::model(args.matrix.display().to_string(), e)),
    };
    let mut text = format!(
        "observed: {}\nestimate: {}\n",
        fmt_values(lambda.as_slice(), args.precision),
        fmt_values(&est.estimate, args.precision)
    );
    if est.has_negative {
        let idx: Vec<String> = est
            .estimate
            .iter()
            .enumerate()
            .filter(|(_, v)| **v < 0.0)
            .map(|(i, _)| i.to_string())
            .collect();
        text.push_str(&format!(
            "warning: negative estimate at levels {} (sampling noise, reported unclipped)\n",
            idx.join(" ")
        ));
    }
    emit(out, &text)
}

fn cmd_decompose(args: &DecomposeArgs, out: &mut dyn Write) -> Result<()> {
    let m = load_bistochastic(&args.matrix, args.tolerance, None)?;
    let ctx = args.matrix.display().to_string();
    let d = decompose(&m, args.threshold).map_err(model(&ctx))?;
    let mut terms = d.terms().to_vec();
    // heaviest first; stable for equal weights
    terms.sort_by(|a, b| b.weight.total_cmp(&a.weight));
    let d =
        bistochastic::BirkhoffDecomposition::from_terms(d.size(), terms).map_err(model(&ctx))?;
    let body = format_decomposition(&d);
    if let Some(path) = &args.out {
        std::fs::write(path, &body).map_err(|e| CliError::io(path, e))?;
    }
    let err = d.recompose().max_abs_diff(m.entries());
    emit(
        out,
        &format!(
            "{body}# terms: {}\n# max recomposition error: {err:e}\n",
            d.len()
        ),
    )
}

pub fn cmd_table1(args: &Table1Args, out: &mut dyn Write) -> Result<()> {
    let cells = table1::compute(args.gamma)?;
    emit(out, &table1::render(&cells, args.precision))
}
