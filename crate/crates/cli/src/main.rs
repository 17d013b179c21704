//! Command-line front end: algebra checks, Monte Carlo runs, reference
//! replays, verification suites, and the experiment reanalyses.
//!
//! Exit codes: 0 when the requested check passes, 1 when it runs but fails,
//! 2 on usage or configuration errors.

use anyhow::{Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use magicsq_core::contexts::{ks_exhaustive_check, Context, ContextKind};
use magicsq_core::expsuite::{
    analyze_cabello, analyze_hasegawa, analyze_huang, replay, ReplayId, ReplayReport,
};
use magicsq_core::harness::{
    monte_carlo, sample_distribution_traced, standard_state_set, verify_corollary, verify_cup,
    verify_marginals, verify_theorem1, PlanSpec, RunConfig, StateSpec, VerificationReport,
};
use magicsq_core::qcore::verify_square_algebra;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "magicsq",
    about = "Magic-square measurement simulator and verification harness",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural self-checks of the observable grid.
    Square {
        #[command(subcommand)]
        action: SquareAction,
    },
    /// Sample a measurement plan and compare against exact probabilities.
    Run(RunArgs),
    /// Re-run one bundled reference experiment bit-exactly.
    Replay(ReplayArgs),
    /// Run one statistical verification suite over the standard states.
    Verify(VerifyArgs),
    /// Re-run one published experiment under the model, at volume.
    Analyze(AnalyzeArgs),
}

#[derive(Subcommand)]
enum SquareAction {
    /// Operator algebra identities plus the exhaustive sign-table sweep.
    Check,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Sequential,
    Simultaneous,
}

#[derive(Args)]
struct RunArgs {
    /// Built-in state name (singlet, mixed, huang-bell, hasegawa-bell) or a
    /// density-matrix JSON file.
    #[arg(long)]
    state: String,
    /// Comma-separated cells for sequential mode, e.g. "33,32,31".
    #[arg(long)]
    plan: Option<String>,
    #[arg(long, value_enum, default_value_t = Mode::Sequential)]
    mode: Mode,
    /// Context for simultaneous mode: row1..row3, col1..col3.
    #[arg(long)]
    context: Option<String>,
    /// Ordering for simultaneous mode: "paper" or an explicit list.
    #[arg(long, default_value = "paper")]
    order: String,
    #[arg(long, default_value_t = 100_000)]
    n: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Total-variation bound against the exact distribution.
    #[arg(long, default_value_t = 0.02)]
    tol: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write one CSV line per measurement.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    /// Which reference experiment: 1, 2, 3, 3c or 4.
    #[arg(long)]
    experiment: String,
    /// Emit the full JSON report instead of the text summary.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifySuite {
    Theorem1,
    Corollary,
    Cup,
    Marginals,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: VerifySuite,
    #[arg(long, default_value_t = 100_000)]
    n: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 0.02)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnalyzeTarget {
    Huang,
    Hasegawa,
    Cabello,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(value_enum)]
    target: AnalyzeTarget,
    #[arg(long, default_value_t = 100_000)]
    n: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Square {
            action: SquareAction::Check,
        } => square_check(),
        Command::Run(args) => run(args),
        Command::Replay(args) => replay_command(args),
        Command::Verify(args) => verify(args),
        Command::Analyze(args) => analyze(args),
    }
}

fn square_check() -> Result<bool> {
    let algebra = verify_square_algebra();
    let algebra_pass = algebra.all_pass();
    println!(
        "operator algebra: {} checks, max deviation {:.2e} .. {}",
        algebra.checks.len(),
        algebra.max_deviation(),
        verdict(algebra_pass)
    );
    for check in algebra.checks.iter().filter(|c| !c.pass) {
        println!(
            "  FAILED {} (deviation {:.2e})",
            check.name, check.deviation
        );
    }

    let ks = ks_exhaustive_check();
    let ks_pass = ks.satisfy_all_six == 0 && ks.max_satisfied == 5;
    println!(
        "sign tables: {} checked, {} satisfy all six, best satisfies {} .. {}",
        ks.tables_checked,
        ks.satisfy_all_six,
        ks.max_satisfied,
        verdict(ks_pass)
    );
    Ok(algebra_pass && ks_pass)
}

fn run(args: RunArgs) -> Result<bool> {
    let plan = match args.mode {
        Mode::Sequential => {
            let text = args
                .plan
                .as_deref()
                .context("--plan is required in sequential mode")?;
            PlanSpec::parse_sequential(text)?
        }
        Mode::Simultaneous => {
            let kind: ContextKind = args
                .context
                .as_deref()
                .context("--context is required in simultaneous mode")?
                .parse()?;
            PlanSpec::Simultaneous(Context::parse_order(kind, &args.order)?)
        }
    };
    let config = RunConfig {
        state: StateSpec::parse(&args.state),
        plan,
        n_runs: args.n,
        seed: args.seed,
        tolerance: args.tol,
        output: args.out.clone(),
    };

    if let Some(csv_path) = &args.csv {
        write_trace_csv(&config, csv_path)?;
    }

    let report = monte_carlo(&config)?;
    let json = serde_json::to_string_pretty(&report)?;
    match &args.out {
        Some(path) => {
            std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))?;
            eprintln!(
                "tv distance {:.4} (bound {}) .. {}; report in {}",
                report.tv_distance,
                config.tolerance,
                verdict(report.pass),
                path.display()
            );
        }
        None => println!("{json}"),
    }
    Ok(report.pass)
}

fn write_trace_csv(config: &RunConfig, path: &PathBuf) -> Result<()> {
    config.validate()?;
    let state = config.state.resolve()?;
    let cells = config.plan.cells();
    let mut writer =
        csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    writer.write_record(["run_index", "step", "i", "j", "outcome", "code"])?;
    let mut inner_error = None;
    sample_distribution_traced(&state, &cells, config.n_runs, config.seed, &mut |row| {
        if inner_error.is_some() {
            return;
        }
        let record = [
            row.run_index.to_string(),
            row.step.to_string(),
            row.row.to_string(),
            row.col.to_string(),
            row.outcome.as_i8().to_string(),
            row.code.to_string(),
        ];
        if let Err(err) = writer.write_record(record) {
            inner_error = Some(err);
        }
    })?;
    if let Some(err) = inner_error {
        return Err(err.into());
    }
    writer.flush()?;
    Ok(())
}

fn replay_command(args: ReplayArgs) -> Result<bool> {
    let id: ReplayId = args.experiment.parse()?;
    let report = replay(id)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print_replay(&report);
    }
    Ok(report.pass)
}

fn print_replay(report: &ReplayReport) {
    println!("replay {}: {}", report.experiment, report.title);
    println!(" step cell threshold coordinate outcome code");
    for (k, step) in report.steps.iter().enumerate() {
        println!(
            " {:>4} {:>4} {:>9.4} {:>10.4} {:>7} {:>4}",
            k + 1,
            step.cell.to_string(),
            step.threshold,
            step.coordinate,
            step.outcome.to_string(),
            step.code
        );
    }
    println!(
        "codes: observed {:?} expected {:?}",
        report.observed_codes, report.expected_codes
    );
    println!(
        "outcomes: observed {} expected {} (product {})",
        signs(&report.observed_outcomes),
        signs(&report.expected_outcomes),
        report.outcome_product
    );
    if let Some(block) = &report.unobserved {
        println!(
            "unobserved {}: observed {} expected {} (product {})",
            block.line,
            signs(&block.observed),
            signs(&block.expected),
            block.product
        );
    }
    if let Some(note) = &report.membership_note {
        println!("note: {}", note.comment);
    }
    match report.first_divergence {
        None => println!("{}", verdict(report.pass)),
        Some(k) => println!("FAIL: first divergent coordinate is {k}"),
    }
}

fn signs(values: &[magicsq_core::qcore::Sign; 3]) -> String {
    let inner: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("[{}]", inner.join(","))
}

fn verify(args: VerifyArgs) -> Result<bool> {
    let states = standard_state_set(args.seed);
    let report = match args.suite {
        VerifySuite::Theorem1 => verify_theorem1(&states, args.n, args.seed, args.tol)?,
        VerifySuite::Corollary => verify_corollary(&states, args.n, args.seed)?,
        VerifySuite::Cup => verify_cup(&states, args.n, args.seed)?,
        VerifySuite::Marginals => verify_marginals(&states, args.n, args.seed, args.tol)?,
    };
    print_verification(&report);
    Ok(report.pass)
}

fn print_verification(report: &VerificationReport) {
    let worst = report
        .cases
        .iter()
        .map(|c| c.statistic)
        .fold(0.0f64, f64::max);
    println!(
        "{}: {} cases, worst statistic {:.5} .. {}",
        report.name,
        report.cases.len(),
        worst,
        verdict(report.pass)
    );
    for case in report.failures() {
        println!(
            "  FAILED {} (statistic {:.5}, bound {})",
            case.label, case.statistic, case.bound
        );
    }
}

fn analyze(args: AnalyzeArgs) -> Result<bool> {
    let (json, pass, summary) = match args.target {
        AnalyzeTarget::Huang => {
            let result = analyze_huang(args.n, args.seed)?;
            let summary = format!(
                "equal fraction {} (mixed control {:.4})",
                result.aggregates.fraction_equal, result.aggregates.mixed_control_fraction_equal
            );
            (serde_json::to_string_pretty(&result)?, result.pass, summary)
        }
        AnalyzeTarget::Hasegawa => {
            let result = analyze_hasegawa(args.n, args.seed)?;
            let summary = format!(
                "witness {} (mixed control {:.4})",
                result.aggregates.witness, result.aggregates.mixed_control_witness
            );
            (serde_json::to_string_pretty(&result)?, result.pass, summary)
        }
        AnalyzeTarget::Cabello => {
            let result = analyze_cabello(args.n, args.seed)?;
            let summary = format!(
                "products {:?}, best table satisfies {}/5",
                result.aggregates.product_means, result.aggregates.max_relations_satisfiable
            );
            (serde_json::to_string_pretty(&result)?, result.pass, summary)
        }
    };
    match &args.out {
        Some(path) => {
            std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))?;
            eprintln!(
                "{summary} .. {}; report in {}",
                verdict(pass),
                path.display()
            );
        }
        None => println!("{json}"),
    }
    Ok(pass)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
