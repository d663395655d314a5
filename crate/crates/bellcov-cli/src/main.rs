//! `bellcov` -- covariance certificates for Bell correlations from the
//! command line.
//!
//! Subcommands: `classify` (vector file -> membership verdict),
//! `check-strategy` (strategy file -> full bound report set), `fig1`
//! (region scan CSV), `fig2` (entropy bound curve CSV), `sweep` (randomized
//! property sweeps). Exit codes: 0 success, 1 property violation, 2 input
//! error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bellcov::bounds::{bell_value, classify, covariance_tlm_check, tlm_check, BellFunctional};
use bellcov::covariance::{build_covariance, psd_check};
use bellcov::i3322::{bprime, chain_middle, i3322_check, i3322_rhs, AlicePairMeans};
use bellcov::io::{
    tsallis_curve, write_region_csv, write_tsallis_csv, LoadedStrategy, MatrixFile, StrategyFile,
    VectorFile,
};
use bellcov::membership::{region_scan, GridSpec};
use bellcov::multipartite::{mermin_check, mixed_tlm_check, mixed_tsallis_check, monogamy_checks};
use bellcov::sim::{BipartiteStrategy, TripartiteStrategy};
use bellcov::sweep::{run_sweep, SweepScenario};
use bellcov::{tsallis_bound, BoundReport};

#[derive(Parser)]
#[command(
    name = "bellcov",
    version,
    about = "Covariance certificates for Bell correlations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a correlator vector file as CLASSICAL, QUANTUM_NONCLASSICAL,
    /// or BEYOND_QUANTUM.
    Classify(ClassifyArgs),
    /// Evaluate every applicable bound on a strategy file.
    CheckStrategy(CheckStrategyArgs),
    /// Scan the (B0, B1) plane for the minimal second-moment asymmetry.
    Fig1(Fig1Args),
    /// Emit the Tsallis entropy bound curve over the anticommutator mean.
    Fig2(Fig2Args),
    /// Run a randomized property sweep; exits 1 on any violation.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// Correlator vector JSON: {"values": [c1, c2, c3, c4]}
    #[arg(long)]
    input: PathBuf,
    /// Optional second-moment matrix JSON ({"n": 4, "values": [...]}); adds
    /// the covariance-shifted TLM reports.
    #[arg(long)]
    second_moment: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Verdict tolerance on inequality slacks.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct CheckStrategyArgs {
    /// Strategy JSON file (2 or 3 parties).
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Verdict tolerance on inequality slacks.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct Fig1Args {
    #[arg(long, default_value_t = -4.0)]
    grid_min: f64,
    #[arg(long, default_value_t = 4.0)]
    grid_max: f64,
    #[arg(long, alias = "grid-step", default_value_t = 0.1)]
    step: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Fig2Args {
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// bipartite | tripartite | i3322
    #[arg(long)]
    scenario: String,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the JSON summary here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Where to dump the first offending strategy on violation.
    #[arg(long, default_value = "violating_strategy.json")]
    dump: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code);
}

fn run(command: Command) -> Result<i32, String> {
    match command {
        Command::Classify(args) => cmd_classify(args),
        Command::CheckStrategy(args) => cmd_check_strategy(args),
        Command::Fig1(args) => cmd_fig1(args),
        Command::Fig2(args) => cmd_fig2(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(output: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match output {
        Some(path) => fs::write(path, content).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes()).map_err(|e| e.to_string())
        }
    }
}

/// Re-evaluates the satisfied flag under a caller-chosen tolerance.
fn report_json(r: &BoundReport, tol: f64) -> Value {
    json!({
        "name": r.name,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "slack": r.slack,
        "satisfied": r.slack >= -tol,
    })
}

fn tri_report_json(r: &bellcov::TripartiteReport, tol: f64) -> Value {
    json!({
        "name": r.name,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "slack": r.slack,
        "satisfied": r.slack >= -tol,
        "means": r.means,
    })
}

fn cmd_classify(args: ClassifyArgs) -> Result<i32, String> {
    let vector: VectorFile = read_json(&args.input)?;
    let v = vector.to_correlators().map_err(|e| e.to_string())?;
    let classification = classify(&v).map_err(|e| e.to_string())?;
    let tlm = tlm_check(&v).map_err(|e| e.to_string())?;
    let b0 = bell_value(&v, &BellFunctional::chsh_b0()).map_err(|e| e.to_string())?;
    let b1 = bell_value(&v, &BellFunctional::chsh_b1()).map_err(|e| e.to_string())?;
    let mut report = json!({
        "classification": classification.verdict,
        "witness": classification.witness,
        "tlm": report_json(&tlm, args.tol),
        "chsh": { "b0": b0, "b1": b1 },
    });
    if let Some(path) = &args.second_moment {
        let matrix: MatrixFile = read_json(path)?;
        let m = matrix.to_second_moment().map_err(|e| e.to_string())?;
        let reports = covariance_tlm_check(&m, &v).map_err(|e| e.to_string())?;
        report["covariance_tlm"] =
            Value::Array(reports.iter().map(|r| report_json(r, args.tol)).collect());
    }
    emit(
        &args.output,
        &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
    )?;
    Ok(0)
}

fn bipartite_report(s: &BipartiteStrategy, tol: f64) -> Result<Value, String> {
    let v = s.correlator_vector().map_err(|e| e.to_string())?;
    let m = s.second_moment().map_err(|e| e.to_string())?;
    let c = build_covariance(&m, &v).map_err(|e| e.to_string())?;
    let psd = psd_check(c.entries(), 1e-9).map_err(|e| e.to_string())?;
    let d_a = s
        .alice_anticommutator_mean(0, 1)
        .map_err(|e| e.to_string())?;
    let d_b = s.bob_anticommutator_mean(0, 1).map_err(|e| e.to_string())?;
    let b0 = bell_value(&v, &BellFunctional::chsh_b0()).map_err(|e| e.to_string())?;
    let b1 = bell_value(&v, &BellFunctional::chsh_b1()).map_err(|e| e.to_string())?;
    let tlm = tlm_check(&v).map_err(|e| e.to_string())?;
    let cov_tlm = covariance_tlm_check(&m, &v).map_err(|e| e.to_string())?;
    let bound = tsallis_bound(d_a, d_b).map_err(|e| e.to_string())?;
    let tsallis = BoundReport::new("tsallis |B0| <= 2 + min(S_A, S_B)", b0.abs(), bound);
    let classification = classify(&v).map_err(|e| e.to_string())?;
    Ok(json!({
        "scenario": "bipartite-2",
        "correlators": v.values(),
        "second_moment": MatrixFile::from(m.entries()),
        "covariance_psd": psd,
        "anticommutator_means": { "alice": d_a, "bob": d_b },
        "bell": { "b0": b0, "b1": b1 },
        "classification": classification.verdict,
        "reports": Value::Array(
            std::iter::once(&tlm)
                .chain(cov_tlm.iter())
                .chain(std::iter::once(&tsallis))
                .map(|r| report_json(r, tol))
                .collect()
        ),
    }))
}

fn three_setting_report(s: &BipartiteStrategy, tol: f64) -> Result<Value, String> {
    let v = s.correlator_vector().map_err(|e| e.to_string())?;
    let m = s.second_moment().map_err(|e| e.to_string())?;
    let c = build_covariance(&m, &v).map_err(|e| e.to_string())?;
    let psd = psd_check(c.entries(), 1e-9).map_err(|e| e.to_string())?;
    let means = AlicePairMeans::from_strategy(s).map_err(|e| e.to_string())?;
    let check = i3322_check(s).map_err(|e| e.to_string())?;
    Ok(json!({
        "scenario": "bipartite-3",
        "correlators": v.values(),
        "second_moment": MatrixFile::from(m.entries()),
        "covariance_psd": psd,
        "alice_pair_means": means,
        "bprime": bprime(&v).map_err(|e| e.to_string())?,
        "grouped_terms": chain_middle(&v).map_err(|e| e.to_string())?,
        "rhs": i3322_rhs(&means).map_err(|e| e.to_string())?,
        "reports": [report_json(&check, tol)],
    }))
}

fn tripartite_report(s: &TripartiteStrategy, tol: f64) -> Result<Value, String> {
    let v = s.correlator_vector().map_err(|e| e.to_string())?;
    let m = s.second_moment().map_err(|e| e.to_string())?;
    let c = build_covariance(&m, &v).map_err(|e| e.to_string())?;
    let psd = psd_check(c.entries(), 1e-9).map_err(|e| e.to_string())?;
    let mut reports = vec![tri_report_json(
        &mermin_check(s).map_err(|e| e.to_string())?,
        tol,
    )];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                reports.push(tri_report_json(
                    &mixed_tlm_check(s, i, j, k).map_err(|e| e.to_string())?,
                    tol,
                ));
                reports.push(tri_report_json(
                    &mixed_tsallis_check(s, i, j, k).map_err(|e| e.to_string())?,
                    tol,
                ));
                for r in monogamy_checks(s, i, j, k).map_err(|e| e.to_string())? {
                    reports.push(tri_report_json(&r, tol));
                }
            }
        }
    }
    let means: Vec<f64> = (0..3)
        .map(|p| s.party_anticommutator_mean(p).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    Ok(json!({
        "scenario": "tripartite-2",
        "correlators": v.values(),
        "second_moment": MatrixFile::from(m.entries()),
        "covariance_psd": psd,
        "anticommutator_means": { "alice": means[0], "bob": means[1], "charlie": means[2] },
        "reports": reports,
    }))
}

fn cmd_check_strategy(args: CheckStrategyArgs) -> Result<i32, String> {
    let file: StrategyFile = read_json(&args.input)?;
    let report = match file.load().map_err(|e| e.to_string())? {
        LoadedStrategy::Bipartite(s) => match s.settings() {
            (2, 2) => bipartite_report(&s, args.tol)?,
            (3, 3) => three_setting_report(&s, args.tol)?,
            other => return Err(format!("unsupported setting counts {other:?}")),
        },
        LoadedStrategy::Tripartite(s) => tripartite_report(&s, args.tol)?,
    };
    emit(
        &args.output,
        &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
    )?;
    Ok(0)
}

fn cmd_fig1(args: Fig1Args) -> Result<i32, String> {
    let grid = GridSpec::square(args.grid_min, args.grid_max, args.step);
    let samples = region_scan(&grid, args.seed).map_err(|e| e.to_string())?;
    let content = match args.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_region_csv(&samples, &mut buf).map_err(|e| e.to_string())?;
            String::from_utf8(buf).unwrap()
        }
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&samples).unwrap()),
    };
    emit(&args.output, &content)?;
    Ok(0)
}

fn cmd_fig2(args: Fig2Args) -> Result<i32, String> {
    let rows = tsallis_curve(args.step).map_err(|e| e.to_string())?;
    let content = match args.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_tsallis_csv(&rows, &mut buf).map_err(|e| e.to_string())?;
            String::from_utf8(buf).unwrap()
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|&(d, s, bound)| json!({"d": d, "s": s, "bound": bound}))
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&rows).unwrap())
        }
    };
    emit(&args.output, &content)?;
    Ok(0)
}

fn cmd_sweep(args: SweepArgs) -> Result<i32, String> {
    if args.count == 0 {
        return Err("--count must be at least 1".to_string());
    }
    let scenario: SweepScenario = args
        .scenario
        .parse()
        .map_err(|e: bellcov::Error| e.to_string())?;
    let report = run_sweep(scenario, args.seed, args.count);
    emit(
        &args.output,
        &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
    )?;
    if report.pass {
        Ok(0)
    } else {
        if let Some(failure) = &report.failure {
            eprintln!(
                "violation in sample {} (seed {}): {}",
                failure.sample_index, failure.seed, failure.check
            );
            if let Some(strategy) = &failure.strategy {
                fs::write(&args.dump, serde_json::to_string_pretty(strategy).unwrap())
                    .map_err(|e| format!("{}: {e}", args.dump.display()))?;
                eprintln!("offending strategy written to {}", args.dump.display());
            }
        }
        Ok(1)
    }
}
