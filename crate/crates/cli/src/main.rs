//! Command-line front end: group ratio reports, state-set stability,
//! model perturbation, flag-variety localization tables, the matrix-model
//! census, and the acceptance-suite runner.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage
//! errors (bad flags, malformed input, unsupported group descriptors).
//! Output is byte-identical for identical configuration and seed; timing
//! fields are opt-in via `--timing` for that reason.

use clap::{Args, Parser, Subcommand, ValueEnum};
use gitratio_core::acceptance::{self, CriterionOutcome};
use gitratio_core::localization::{
    beta_class, push_pull, push_pull_multiplier, sqrt_ctop_class, verify_antiinvariant_identity,
};
use gitratio_core::poly::Polynomial;
use gitratio_core::ratio::{pm_n_state_census, ratio_pgl, ratio_product, RatioReport};
use gitratio_core::rootsys::RootSystem;
use gitratio_core::stability::{classify, stabilizer_rank, StateSet};
use gitratio_core::statemodel::{eliminate_strictly_semistable, EliminationStep, StateModel};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const SCHEMA_VERSION: u32 = 1;
const ACCEPT_THREADS_VAR: &str = "GITRATIO_ACCEPT_THREADS";

#[derive(Parser)]
#[command(
    name = "gitratio",
    about = "Exact GIT integration ratios, weight-state stability, and Weyl localization",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
}

#[derive(Args)]
struct OutputOptions {
    /// Report format.
    #[arg(long, value_enum)]
    output: Option<OutputFormat>,
    /// Write the report to a file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock timing fields (omitted by default so identical
    /// runs emit identical bytes).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// GIT integration ratio for a type-A group descriptor (A2, A1xA2, ...).
    Ratio {
        #[arg(long)]
        group: String,
        #[command(flatten)]
        output: OutputOptions,
    },
    /// Hilbert-Mumford classification of a state set read from JSON.
    Stability {
        /// Path to a StateSet JSON file: {"rank": r, "weights": [[...]]}.
        #[arg(long)]
        states: PathBuf,
        #[command(flatten)]
        output: OutputOptions,
    },
    /// Eliminate strictly semistable points from a state model.
    Perturb {
        /// Path to a StateModel JSON file.
        #[arg(long)]
        model: PathBuf,
        /// Root system of the acting group (e.g. A2).
        #[arg(long)]
        group: String,
        #[command(flatten)]
        output: OutputOptions,
    },
    /// Fixed-point class tables and the push-pull identity verdict.
    Localize {
        /// Root system type; only A is implemented.
        #[arg(long = "type")]
        system_type: String,
        /// The n of PGL(n), so the system is A_{n-1}.
        #[arg(long)]
        n: usize,
        /// Parabolic: "borel", "full", or comma-separated 1-based
        /// simple-root indices (e.g. "1" or "1,3").
        #[arg(long)]
        parabolic: String,
        #[command(flatten)]
        output: OutputOptions,
    },
    /// Stability census of the row-occupancy patterns of P(M_n).
    Census {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: OutputOptions,
    },
    /// Run the full verification suite, one line per criterion.
    Accept {
        /// Seed for the randomized sweeps.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputOptions,
    },
}

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {}", message);
            ExitCode::from(EXIT_USAGE)
        }
    }
}

/// `Err` is a usage problem (exit 2); `Ok(code)` already distinguishes
/// success from failed checks.
fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Ratio { group, output } => cmd_ratio(&group, &output),
        Command::Stability { states, output } => cmd_stability(&states, &output),
        Command::Perturb {
            model,
            group,
            output,
        } => cmd_perturb(&model, &group, &output),
        Command::Localize {
            system_type,
            n,
            parabolic,
            output,
        } => cmd_localize(&system_type, n, &parabolic, &output),
        Command::Census { n, output } => cmd_census(n, &output),
        Command::Accept { seed, output } => cmd_accept(seed, &output),
    }
}

fn emit(options: &OutputOptions, text: String) -> Result<(), String> {
    match &options.out {
        None => {
            println!("{}", text);
            Ok(())
        }
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| format!("cannot write {}: {}", path.display(), e)),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
    serde_json::from_str(&text)
        .map_err(|e| format!("{}:{}:{}: {}", path.display(), e.line(), e.column(), e))
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

// ---------------------------------------------------------------------------
// ratio

#[derive(Serialize)]
struct RatioDocument {
    schema_version: u32,
    #[serde(flatten)]
    report: RatioReport,
}

fn cmd_ratio(group: &str, output: &OutputOptions) -> Result<u8, String> {
    let sys = RootSystem::parse(group).map_err(|e| e.to_string())?;
    let factors = sys.factor_sizes().to_vec();
    let mut report = if factors.len() == 1 {
        ratio_pgl(factors[0]).map_err(|e| e.to_string())?
    } else {
        ratio_product(&factors).map_err(|e| e.to_string())?
    };
    if !output.timing {
        report.timing_ms = None;
    }
    let ok = report.all_checks_pass();
    let format = output.output.unwrap_or(OutputFormat::Json);
    let text = match format {
        OutputFormat::Json => to_pretty_json(&RatioDocument {
            schema_version: SCHEMA_VERSION,
            report,
        }),
        OutputFormat::Table => {
            let mut lines = vec![
                format!("group       {}", report.group),
                format!("weyl order  {}", report.weyl_order),
                format!("ratio       {}", report.ratio),
            ];
            for check in &report.checks {
                lines.push(format!(
                    "check       {:18} {}",
                    check.name,
                    if check.passed { "pass" } else { "FAIL" }
                ));
            }
            if let Some(ms) = report.timing_ms {
                lines.push(format!("timing      {} ms", ms));
            }
            lines.join("\n")
        }
    };
    emit(output, text)?;
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

// ---------------------------------------------------------------------------
// stability

#[derive(Serialize)]
struct StabilityDocument {
    schema_version: u32,
    classification: String,
    certificate: Option<Vec<i64>>,
    stabilizer_rank: usize,
}

fn cocharacter_to_i64(c: &gitratio_core::lattice::Cocharacter) -> Vec<i64> {
    c.coords()
        .iter()
        .map(|v| i64::try_from(v).expect("desk-scale certificate"))
        .collect()
}

fn cmd_stability(states_path: &Path, output: &OutputOptions) -> Result<u8, String> {
    let states: StateSet = read_json(states_path)?;
    let classification = classify(&states);
    let document = StabilityDocument {
        schema_version: SCHEMA_VERSION,
        classification: classification.kind().to_string(),
        certificate: classification.certificate().map(cocharacter_to_i64),
        stabilizer_rank: stabilizer_rank(&states),
    };
    let format = output.output.unwrap_or(OutputFormat::Table);
    let text = match format {
        OutputFormat::Json => to_pretty_json(&document),
        OutputFormat::Table => {
            let mut lines = vec![document.classification.clone()];
            if let Some(cert) = &document.certificate {
                lines.push(format!(
                    "certificate      [{}]",
                    cert.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")
                ));
            }
            lines.push(format!("stabilizer rank  {}", document.stabilizer_rank));
            lines.join("\n")
        }
    };
    emit(output, text)?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// perturb

#[derive(Serialize)]
struct PerturbDocument {
    schema_version: u32,
    group: String,
    iterations: usize,
    log: Vec<EliminationStep>,
    model: StateModel,
}

fn cmd_perturb(model_path: &Path, group: &str, output: &OutputOptions) -> Result<u8, String> {
    let model: StateModel = read_json(model_path)?;
    let sys = RootSystem::parse(group).map_err(|e| e.to_string())?;
    if sys.rank() != model.rank() {
        return Err(format!(
            "model rank {} does not match group {} (rank {})",
            model.rank(),
            group,
            sys.rank()
        ));
    }
    match eliminate_strictly_semistable(&model, &sys) {
        Ok((eliminated, log)) => {
            let document = PerturbDocument {
                schema_version: SCHEMA_VERSION,
                group: sys.label().to_string(),
                iterations: log.len(),
                log,
                model: eliminated.clone(),
            };
            let format = output.output.unwrap_or(OutputFormat::Json);
            let text = match format {
                OutputFormat::Json => to_pretty_json(&document),
                OutputFormat::Table => {
                    let mut lines = vec![
                        format!("group       {}", document.group),
                        format!("iterations  {}", document.iterations),
                    ];
                    for (i, step) in document.log.iter().enumerate() {
                        lines.push(format!(
                            "step {}:  chi {:?}  N {}  bound {}  max-stab-rank {}",
                            i + 1,
                            step.chi,
                            step.n,
                            step.a_priori_bound,
                            step.max_stabilizer_rank_before
                        ));
                    }
                    for (point, kind) in eliminated.classify_points() {
                        lines.push(format!("point {:32} {}", point.id, kind));
                    }
                    lines.join("\n")
                }
            };
            emit(output, text)?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            eprintln!("elimination failed: {}", e);
            Ok(EXIT_CHECK_FAILED)
        }
    }
}

// ---------------------------------------------------------------------------
// localize

#[derive(Serialize)]
struct CosetRow {
    representative: String,
    det: i64,
    beta: Polynomial,
    multiplier: Polynomial,
    pushed: Polynomial,
}

#[derive(Serialize)]
struct LocalizeDocument {
    schema_version: u32,
    group: String,
    parabolic: Vec<usize>,
    sqrt_ctop: Polynomial,
    cosets: Vec<CosetRow>,
    verified: bool,
}

fn parse_parabolic(spec: &str, simple_count: usize) -> Result<Vec<usize>, String> {
    match spec {
        "borel" => Ok(Vec::new()),
        "full" => Ok((0..simple_count).collect()),
        _ => spec
            .split(',')
            .map(|token| {
                let index: usize = token
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad parabolic index `{}`", token))?;
                if index == 0 || index > simple_count {
                    return Err(format!(
                        "parabolic index {} out of range 1..={}",
                        index, simple_count
                    ));
                }
                Ok(index - 1)
            })
            .collect(),
    }
}

fn cmd_localize(
    system_type: &str,
    n: usize,
    parabolic_spec: &str,
    output: &OutputOptions,
) -> Result<u8, String> {
    if system_type != "A" {
        return Err(format!(
            "type {} is not implemented; only type A is available",
            system_type
        ));
    }
    if n < 2 {
        return Err("--n must be at least 2".to_string());
    }
    let sys = RootSystem::build_type_a(n).map_err(|e| e.to_string())?;
    let subset = parse_parabolic(parabolic_spec, sys.simple_roots().len())?;
    let parabolic = sys.parabolic(&subset).map_err(|e| e.to_string())?;

    let beta = beta_class(&parabolic);
    let pushed = push_pull(&beta);
    let verified = verify_antiinvariant_identity(&parabolic);
    let cosets: Vec<CosetRow> = parabolic
        .coset_reps()
        .iter()
        .enumerate()
        .map(|(i, w)| CosetRow {
            representative: w.to_string(),
            det: w.det(),
            beta: beta.components()[i].clone(),
            multiplier: push_pull_multiplier(&parabolic, w),
            pushed: pushed.components()[i].clone(),
        })
        .collect();
    let document = LocalizeDocument {
        schema_version: SCHEMA_VERSION,
        group: sys.label().to_string(),
        parabolic: subset.iter().map(|i| i + 1).collect(),
        sqrt_ctop: sqrt_ctop_class(&parabolic).components()[0].clone(),
        cosets,
        verified,
    };

    let format = output.output.unwrap_or(OutputFormat::Table);
    let text = match format {
        OutputFormat::Json => to_pretty_json(&document),
        OutputFormat::Table => {
            let name = |i: usize| format!("x{}", i + 1);
            let mut lines = vec![
                format!("group      {}", document.group),
                format!(
                    "parabolic  {}",
                    if document.parabolic.is_empty() {
                        "borel".to_string()
                    } else {
                        document
                            .parabolic
                            .iter()
                            .map(usize::to_string)
                            .collect::<Vec<_>>()
                            .join(",")
                    }
                ),
                format!("sqrt_ctop  {}", document.sqrt_ctop.render(name)),
                format!(
                    "{:<10} {:>4} {:<24} {:<28} {:<28}",
                    "coset", "det", "beta", "multiplier", "push_pull(beta)"
                ),
            ];
            for row in &document.cosets {
                lines.push(format!(
                    "{:<10} {:>4} {:<24} {:<28} {:<28}",
                    row.representative,
                    row.det,
                    row.beta.render(name),
                    row.multiplier.render(name),
                    row.pushed.render(name)
                ));
            }
            lines.push(if document.verified {
                "identity verified".to_string()
            } else {
                "identity FAILED".to_string()
            });
            lines.join("\n")
        }
    };
    emit(output, text)?;
    Ok(if verified { EXIT_OK } else { EXIT_CHECK_FAILED })
}

// ---------------------------------------------------------------------------
// census

#[derive(Serialize)]
struct CensusDocument {
    schema_version: u32,
    n: usize,
    entries: Vec<gitratio_core::ratio::CensusEntry>,
}

fn cmd_census(n: usize, output: &OutputOptions) -> Result<u8, String> {
    let entries = pm_n_state_census(n).map_err(|e| e.to_string())?;
    let document = CensusDocument {
        schema_version: SCHEMA_VERSION,
        n,
        entries,
    };
    let format = output.output.unwrap_or(OutputFormat::Table);
    let text = match format {
        OutputFormat::Json => to_pretty_json(&document),
        OutputFormat::Table => document
            .entries
            .iter()
            .map(|e| {
                format!(
                    "rows {:<12} {}",
                    e.occupied_rows
                        .iter()
                        .map(usize::to_string)
                        .collect::<Vec<_>>()
                        .join(","),
                    e.classification
                )
            })
            .collect::<Vec<_>>()
            .join("\n"),
    };
    emit(output, text)?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// accept

#[derive(Serialize)]
struct AcceptCriterion {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    millis: Option<u128>,
}

#[derive(Serialize)]
struct AcceptDocument {
    schema_version: u32,
    seed: u64,
    passed: bool,
    criteria: Vec<AcceptCriterion>,
}

fn accept_threads() -> usize {
    std::env::var(ACCEPT_THREADS_VAR)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1)
}

fn cmd_accept(seed: Option<u64>, output: &OutputOptions) -> Result<u8, String> {
    let seed = seed.unwrap_or(acceptance::DEFAULT_SEED);
    let outcomes = acceptance::run_all(seed, accept_threads());
    let passed = outcomes.iter().all(|o| o.passed);
    let criteria: Vec<AcceptCriterion> = outcomes
        .into_iter()
        .map(|o: CriterionOutcome| AcceptCriterion {
            id: o.id,
            name: o.name,
            passed: o.passed,
            detail: o.detail,
            millis: output.timing.then_some(o.millis),
        })
        .collect();
    let document = AcceptDocument {
        schema_version: SCHEMA_VERSION,
        seed,
        passed,
        criteria,
    };
    let format = output.output.unwrap_or(OutputFormat::Table);
    let text = match format {
        OutputFormat::Json => to_pretty_json(&document),
        OutputFormat::Table => {
            let mut lines: Vec<String> = document
                .criteria
                .iter()
                .map(|c| {
                    let timing = c
                        .millis
                        .map(|ms| format!(" ({} ms)", ms))
                        .unwrap_or_default();
                    format!(
                        "{} {:2} {:32}{} - {}",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.id,
                        c.name,
                        timing,
                        c.detail
                    )
                })
                .collect();
            lines.push(format!(
                "{}: {}/{} criteria passed (seed {})",
                if document.passed { "ok" } else { "FAILED" },
                document.criteria.iter().filter(|c| c.passed).count(),
                document.criteria.len(),
                document.seed
            ));
            lines.join("\n")
        }
    };
    emit(output, text)?;
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}
