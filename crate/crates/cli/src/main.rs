//! `fsbp` — command-line surface for the process simulator: validate model
//! files, run simulations, compare runs, assess stability indicators, sweep
//! control strictness, and evaluate the bundled scenarios.
//!
//! Exit codes are a stable contract: 0 success, 1 domain error (invalid
//! model, horizon mismatch, unknown scenario…), 2 usage or I/O error.
//! All file outputs are byte-stable for fixed inputs and seeds.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fsbp::{
    aggregate, apply_edit, assess, compare, evaluate_scenario, export_series, load_scenario,
    optimize_control, parse_model, render_comparison, run_replications, validate, verdict_phrase,
    AggregateResult, AssessOptions, CompareOptions, ComparisonReport, ControlSweep, EditScript,
    FSAssessment, ModelError, NamedIndicator, ProcessModel, RunResult, RunSummary, ScenarioOptions,
    ScenarioReport, Severity, SweepConfig,
};

#[derive(Parser)]
#[command(
    name = "fsbp",
    version,
    about = "Simulate business processes as queueing networks and assess their functional stability"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file; diagnostics go to standard error.
    Validate {
        /// Model file (JSON).
        model: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run a model and write run reports, queue-series CSVs, and an SVG chart.
    Simulate {
        /// Model file (JSON).
        model: PathBuf,
        /// Base seed; replications derive independent streams from it.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        replications: u32,
        /// Override the model's horizon (business days).
        #[arg(long)]
        horizon: Option<u32>,
        /// Optional edit script applied before the run.
        #[arg(long)]
        edit: Option<PathBuf>,
        /// Output directory (default ./out; FSBP_OUT_DIR overrides).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Compare two saved results (run or aggregate JSON) block by block.
    Compare {
        before: PathBuf,
        after: PathBuf,
        /// Percent change below which a metric counts as unchanged.
        #[arg(long, default_value_t = 1.0)]
        threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Score the stability indicators of a model.
    Assess {
        model: PathBuf,
        /// Replications behind the simulation-based indicators.
        #[arg(long, default_value_t = 30)]
        runs: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// JSON file with externally supplied legal indicators.
        #[arg(long)]
        legal: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Sweep control strictness over a grid and report the best settings.
    Sweep {
        model: PathBuf,
        /// Control blocks to sweep (default: all of them).
        #[arg(long, value_delimiter = ',')]
        blocks: Vec<String>,
        #[arg(long, default_value = "0.1,0.5,0.9")]
        grid: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        replications: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Evaluate a bundled scenario and print its expected-effect checklist.
    Scenario {
        /// Scenario id; see `fsbp scenario --list`.
        id: Option<String>,
        /// Paired seeds (default: the scenario's own seed plan).
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        /// Replication count when --seeds is not given.
        #[arg(long)]
        replications: Option<u32>,
        /// Strip failure profiles before running.
        #[arg(long)]
        no_failures: bool,
        /// List the bundled scenarios and exit.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

fn domain(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { model, format } => cmd_validate(&model, format),
        Command::Simulate {
            model,
            seed,
            replications,
            horizon,
            edit,
            out,
            format,
        } => cmd_simulate(
            &model,
            seed,
            replications,
            horizon,
            edit.as_deref(),
            out,
            format,
        ),
        Command::Compare {
            before,
            after,
            threshold,
            out,
            format,
        } => cmd_compare(&before, &after, threshold, out, format),
        Command::Assess {
            model,
            runs,
            seed,
            legal,
            out,
            format,
        } => cmd_assess(&model, runs, seed, legal.as_deref(), out, format),
        Command::Sweep {
            model,
            blocks,
            grid,
            seed,
            replications,
            out,
            format,
        } => cmd_sweep(&model, &blocks, &grid, seed, replications, out, format),
        Command::Scenario {
            id,
            seeds,
            replications,
            no_failures,
            list,
            out,
            format,
        } => cmd_scenario(
            id.as_deref(),
            &seeds,
            replications,
            no_failures,
            list,
            out,
            format,
        ),
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

/// FSBP_OUT_DIR beats --out beats ./out.
fn out_dir(flag: Option<PathBuf>) -> PathBuf {
    std::env::var_os("FSBP_OUT_DIR")
        .map(PathBuf::from)
        .or(flag)
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read `{}`: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<ProcessModel, Failure> {
    let text = read_file(path)?;
    parse_model(&text).map_err(|e| domain(format!("`{}`: {e}", path.display())))
}

fn write_out(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)
            .map_err(|e| usage(format!("cannot create `{}`: {e}", parent.display())))?;
    }
    std::fs::write(path, contents)
        .map_err(|e| usage(format!("cannot write `{}`: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    text.push('\n');
    text
}

fn reject_csv(format: Format, command: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(usage(format!(
            "`{command}` has no CSV output; use text or json"
        )));
    }
    Ok(())
}

fn parse_grid(grid: &str) -> Result<Vec<f64>, Failure> {
    grid.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| usage(format!("bad grid value `{s}`: {e}")))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

fn cmd_validate(path: &Path, format: Format) -> Result<(), Failure> {
    reject_csv(format, "validate")?;
    let text = read_file(path)?;
    let (diagnostics, parse_error) = match parse_model(&text) {
        Ok(model) => (validate(&model), None),
        Err(ModelError::Invalid(diags)) => (diags, None),
        Err(other) => (Vec::new(), Some(other.to_string())),
    };
    let errors = diagnostics
        .iter()
        .filter(|d| d.severity == Severity::Error)
        .count();
    let valid = parse_error.is_none() && errors == 0;

    match format {
        Format::Json => {
            let report = serde_json::json!({
                "model": path.display().to_string(),
                "valid": valid,
                "parse_error": parse_error,
                "diagnostics": diagnostics,
            });
            print!("{}", to_json(&report));
        }
        _ => {
            if let Some(message) = &parse_error {
                eprintln!("error: {message}");
            }
            for d in &diagnostics {
                let tag = match d.severity {
                    Severity::Error => "error",
                    Severity::Warning => "warning",
                };
                eprintln!("{tag}: `{}`: {}", d.subject, d.message);
            }
            let warnings = diagnostics.len() - errors;
            println!(
                "{}: {} error(s), {warnings} warning(s)",
                path.display(),
                errors + parse_error.iter().count()
            );
        }
    }
    if valid {
        Ok(())
    } else {
        Err(domain(format!("`{}` is not a valid model", path.display())))
    }
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn cmd_simulate(
    path: &Path,
    seed: u64,
    replications: u32,
    horizon: Option<u32>,
    edit: Option<&Path>,
    out: Option<PathBuf>,
    format: Format,
) -> Result<(), Failure> {
    if replications == 0 {
        return Err(usage("--replications must be at least 1"));
    }
    let mut model = load_model(path)?;
    if let Some(script) = edit {
        let text = read_file(script)?;
        let script: EditScript = serde_json::from_str(&text).map_err(|e| {
            usage(format!(
                "cannot parse edit script `{}`: {e}",
                script.display()
            ))
        })?;
        model = apply_edit(&model, &script).map_err(|e| domain(e.to_string()))?;
    }
    if let Some(h) = horizon {
        if h <= model.warmup_days {
            return Err(usage(format!(
                "--horizon {h} must exceed the model's warmup ({} days)",
                model.warmup_days
            )));
        }
        model.horizon_days = h;
    }

    let runs = run_replications(&model, seed, replications).map_err(|e| domain(e.to_string()))?;
    let dir = out_dir(out);
    write_out(&dir.join("run.json"), &to_json(&runs[0]))?;
    let agg = if replications > 1 {
        let agg = aggregate(&runs).map_err(|e| domain(e.to_string()))?;
        write_out(&dir.join("aggregate.json"), &to_json(&agg))?;
        Some(agg)
    } else {
        None
    };
    export_series(&runs[0], &dir).map_err(|e| domain(e.to_string()))?;

    match format {
        Format::Json => match &agg {
            Some(agg) => print!("{}", to_json(agg)),
            None => print!("{}", to_json(&runs[0])),
        },
        Format::Csv => print!("{}", simulate_csv(&runs[0], agg.as_ref())?),
        Format::Text => {
            println!(
                "# fsbp simulate | model {} | seed {seed} | replications {replications} | out {}",
                model.name,
                dir.display()
            );
            print!("{}", simulate_table(&runs[0], agg.as_ref()));
        }
    }
    Ok(())
}

/// The four headline metrics per block, plus the system line.
fn simulate_table(run: &RunResult, agg: Option<&AggregateResult>) -> String {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<34} {:>12} {:>12} {:>12}",
        "Block", "Utilization", "Queue", "Dropped"
    );
    match agg {
        Some(agg) => {
            for (id, name) in &agg.block_names {
                let b = &agg.blocks[id];
                let dropped = b["dropped_timeout"].mean + b["dropped_capacity"].mean;
                let _ = writeln!(
                    text,
                    "{:<34} {:>12.4} {:>12.3} {:>12.1}",
                    name, b["utilization"].mean, b["avg_queue_length"].mean, dropped
                );
            }
            let tis = &agg.system["avg_time_in_system_days"];
            let _ = writeln!(
                text,
                "time in system: {:.3} days (95% CI {:.3}..{:.3}, n = {})",
                tis.mean, tis.ci95_low, tis.ci95_high, agg.n
            );
        }
        None => {
            let summary = RunSummary::from(run);
            for b in summary.blocks.values() {
                let _ = writeln!(
                    text,
                    "{:<34} {:>12.4} {:>12.3} {:>12}",
                    b.name, b.utilization, b.avg_queue_length, b.dropped
                );
            }
            let _ = writeln!(
                text,
                "time in system: {:.3} days",
                summary.avg_time_in_system_days
            );
        }
    }
    text
}

fn simulate_csv(run: &RunResult, agg: Option<&AggregateResult>) -> Result<String, Failure> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "block",
            "name",
            "utilization",
            "avg_queue_length",
            "dropped",
        ])
        .and_then(|()| {
            match agg {
                Some(agg) => {
                    for (id, name) in &agg.block_names {
                        let b = &agg.blocks[id];
                        let dropped = b["dropped_timeout"].mean + b["dropped_capacity"].mean;
                        writer.write_record([
                            id.as_str(),
                            name.as_str(),
                            &b["utilization"].mean.to_string(),
                            &b["avg_queue_length"].mean.to_string(),
                            &dropped.to_string(),
                        ])?;
                    }
                }
                None => {
                    let summary = RunSummary::from(run);
                    for (id, b) in &summary.blocks {
                        writer.write_record([
                            id.as_str(),
                            b.name.as_str(),
                            &b.utilization.to_string(),
                            &b.avg_queue_length.to_string(),
                            &b.dropped.to_string(),
                        ])?;
                    }
                }
            }
            Ok(())
        })
        .map_err(|e| usage(format!("cannot render CSV: {e}")))?;
    let bytes = writer
        .into_inner()
        .map_err(|e| usage(format!("cannot render CSV: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

/// A saved result file: either one run or an aggregate.
enum SavedResult {
    Run(Box<RunResult>),
    Aggregate(Box<AggregateResult>),
}

impl SavedResult {
    fn summary(&self) -> RunSummary {
        match self {
            SavedResult::Run(r) => RunSummary::from(r.as_ref()),
            SavedResult::Aggregate(a) => RunSummary::from(a.as_ref()),
        }
    }
}

fn load_result(path: &Path) -> Result<SavedResult, Failure> {
    let text = read_file(path)?;
    if let Ok(run) = serde_json::from_str::<RunResult>(&text) {
        return Ok(SavedResult::Run(Box::new(run)));
    }
    if let Ok(agg) = serde_json::from_str::<AggregateResult>(&text) {
        return Ok(SavedResult::Aggregate(Box::new(agg)));
    }
    Err(domain(format!(
        "`{}` is neither a run result nor an aggregate report",
        path.display()
    )))
}

fn cmd_compare(
    before: &Path,
    after: &Path,
    threshold: f64,
    out: Option<PathBuf>,
    format: Format,
) -> Result<(), Failure> {
    let before = load_result(before)?;
    let after = load_result(after)?;
    let options = CompareOptions {
        threshold_percent: threshold,
    };
    let report =
        compare(before.summary(), after.summary(), &options).map_err(|e| domain(e.to_string()))?;
    let dir = out_dir(out);
    write_out(&dir.join("comparison.json"), &to_json(&report))?;
    match format {
        Format::Json => print!("{}", to_json(&report)),
        Format::Csv => print!("{}", comparison_csv(&report)?),
        Format::Text => {
            println!(
                "# fsbp compare | {} vs {} | threshold {threshold}% | out {}",
                report.before_name,
                report.after_name,
                dir.display()
            );
            print!("{}", render_comparison(&report));
        }
    }
    Ok(())
}

fn comparison_csv(report: &ComparisonReport) -> Result<String, Failure> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "block",
            "metric",
            "before",
            "after",
            "delta_percent",
            "change",
        ])
        .and_then(|()| {
            for row in &report.rows {
                writer.write_record([
                    row.block_id.as_deref().unwrap_or(""),
                    row.metric.as_str(),
                    &row.before.map_or(String::new(), |v| v.to_string()),
                    &row.after.map_or(String::new(), |v| v.to_string()),
                    &row.delta_percent.map_or(String::new(), |v| v.to_string()),
                    &verdict_phrase(row),
                ])?;
            }
            Ok(())
        })
        .map_err(|e| usage(format!("cannot render CSV: {e}")))?;
    let bytes = writer
        .into_inner()
        .map_err(|e| usage(format!("cannot render CSV: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

// ---------------------------------------------------------------------------
// assess
// ---------------------------------------------------------------------------

fn cmd_assess(
    path: &Path,
    runs: u32,
    seed: u64,
    legal: Option<&Path>,
    out: Option<PathBuf>,
    format: Format,
) -> Result<(), Failure> {
    reject_csv(format, "assess")?;
    let model = load_model(path)?;
    let legal_indicators: Vec<NamedIndicator> = match legal {
        Some(path) => {
            let text = read_file(path)?;
            serde_json::from_str(&text)
                .map_err(|e| usage(format!("cannot parse legal file `{}`: {e}", path.display())))?
        }
        None => Vec::new(),
    };
    let options = AssessOptions {
        seed,
        replications: runs,
        ..AssessOptions::default()
    };
    let assessment =
        assess(&model, &options, &legal_indicators).map_err(|e| domain(e.to_string()))?;
    let dir = out_dir(out);
    write_out(&dir.join("assessment.json"), &to_json(&assessment))?;
    match format {
        Format::Json => print!("{}", to_json(&assessment)),
        _ => {
            println!(
                "# fsbp assess | model {} | seed {seed} | runs {runs} | out {}",
                model.name,
                dir.display()
            );
            print!("{}", assessment_text(&assessment, legal.is_none()));
        }
    }
    Ok(())
}

fn assessment_text(assessment: &FSAssessment, legal_missing: bool) -> String {
    let mut text = String::new();
    let section = |text: &mut String, tag: &str, indicators: &[NamedIndicator]| {
        let _ = writeln!(text, "{tag}:");
        for ind in indicators {
            let _ = writeln!(
                text,
                "  {:<18} {:<4} {:<22} {}",
                ind.name, ind.score.value, ind.score.label, ind.score.evidence
            );
        }
    };
    section(&mut text, "S (structural)", &assessment.structural);
    section(&mut text, "O (organizational)", &assessment.organizational);
    if assessment.legal.is_empty() && legal_missing {
        let _ = writeln!(
            text,
            "L (legal):\n  none supplied — pass a file of externally scored indicators with --legal"
        );
    } else {
        section(&mut text, "L (legal)", &assessment.legal);
    }
    text
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn cmd_sweep(
    path: &Path,
    blocks: &[String],
    grid: &str,
    seed: u64,
    replications: u32,
    out: Option<PathBuf>,
    format: Format,
) -> Result<(), Failure> {
    let model = load_model(path)?;
    let grid = parse_grid(grid)?;
    let config = SweepConfig {
        seed,
        replications,
        ..SweepConfig::default()
    };
    let sweep =
        optimize_control(&model, blocks, &grid, &config).map_err(|e| domain(e.to_string()))?;
    let dir = out_dir(out);
    write_out(&dir.join("sweep.json"), &to_json(&sweep))?;
    let csv_text = sweep_csv(&sweep)?;
    write_out(&dir.join("sweep.csv"), &csv_text)?;
    match format {
        Format::Json => print!("{}", to_json(&sweep)),
        Format::Csv => print!("{csv_text}"),
        Format::Text => {
            println!(
                "# fsbp sweep | model {} | seed {seed} | replications {replications} | out {}",
                model.name,
                dir.display()
            );
            print!("{}", sweep_table(&sweep));
        }
    }
    Ok(())
}

fn is_best(sweep: &ControlSweep, block: &str, strictness: f64) -> bool {
    sweep.best.get(block) == Some(&strictness)
}

fn sweep_csv(sweep: &ControlSweep) -> Result<String, Failure> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "strictness",
            "block",
            "utilization",
            "avg_queue_length",
            "forwarded_valid",
            "forwarded_defective",
            "rejected_by_control",
            "dropped_timeout",
            "objective",
            "best",
        ])
        .and_then(|()| {
            for row in &sweep.rows {
                writer.write_record([
                    row.strictness.to_string().as_str(),
                    row.block.as_str(),
                    &row.utilization.to_string(),
                    &row.avg_queue_length.to_string(),
                    &row.forwarded_valid.to_string(),
                    &row.forwarded_defective.to_string(),
                    &row.rejected_by_control.to_string(),
                    &row.dropped_timeout.to_string(),
                    &row.objective.to_string(),
                    if is_best(sweep, &row.block, row.strictness) {
                        "1"
                    } else {
                        "0"
                    },
                ])?;
            }
            Ok(())
        })
        .map_err(|e| usage(format!("cannot render CSV: {e}")))?;
    let bytes = writer
        .into_inner()
        .map_err(|e| usage(format!("cannot render CSV: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

fn sweep_table(sweep: &ControlSweep) -> String {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<12} {:<28} {:>11} {:>8} {:>10} {:>10} {:>9} {:>9} {:>12}",
        "strictness",
        "block",
        "utilization",
        "queue",
        "valid fwd",
        "defect fwd",
        "rejected",
        "timeouts",
        "objective"
    );
    for row in &sweep.rows {
        let marker = if is_best(sweep, &row.block, row.strictness) {
            " *"
        } else {
            ""
        };
        let _ = writeln!(
            text,
            "{:<12} {:<28} {:>11.4} {:>8.3} {:>10.1} {:>10.1} {:>9.1} {:>9.1} {:>12.1}{marker}",
            row.strictness,
            row.block,
            row.utilization,
            row.avg_queue_length,
            row.forwarded_valid,
            row.forwarded_defective,
            row.rejected_by_control,
            row.dropped_timeout,
            row.objective,
        );
    }
    let _ = writeln!(
        text,
        "best shared setting across all control blocks: strictness {}",
        sweep.global_best
    );
    text
}

// ---------------------------------------------------------------------------
// scenario
// ---------------------------------------------------------------------------

fn cmd_scenario(
    id: Option<&str>,
    seeds: &[u64],
    replications: Option<u32>,
    no_failures: bool,
    list: bool,
    out: Option<PathBuf>,
    format: Format,
) -> Result<(), Failure> {
    reject_csv(format, "scenario")?;
    if list {
        for (id, description) in fsbp::list_scenarios() {
            println!("{id:<22} {description}");
        }
        return Ok(());
    }
    let id = id.ok_or_else(|| usage("missing scenario id (or pass --list)"))?;
    let scenario = load_scenario(id).map_err(|e| domain(e.to_string()))?;
    let seeds: Vec<u64> = if !seeds.is_empty() {
        seeds.to_vec()
    } else if let Some(n) = replications {
        (0..n.max(1) as u64)
            .map(|i| scenario.default_seed + i)
            .collect()
    } else {
        Vec::new() // evaluate_scenario falls back to the scenario's plan
    };
    let options = ScenarioOptions {
        seeds,
        disable_failures: no_failures,
    };
    let report = evaluate_scenario(&scenario, &options).map_err(|e| domain(e.to_string()))?;
    let dir = out_dir(out).join(id);
    write_out(&dir.join("report.json"), &to_json(&report))?;
    match format {
        Format::Json => print!("{}", to_json(&report)),
        _ => {
            println!(
                "# fsbp scenario | {} | {} seed(s) | out {}",
                report.scenario,
                report.seeds.len(),
                dir.display()
            );
            print!("{}", scenario_text(&report));
        }
    }
    Ok(())
}

fn scenario_text(report: &ScenarioReport) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "{}", report.description);
    if let Some(comparison) = &report.comparison {
        let _ = writeln!(text);
        text.push_str(&render_comparison(comparison));
    }
    let _ = writeln!(text);
    for check in &report.checks {
        let tag = match check.passed {
            Some(true) => "[PASS]",
            Some(false) => "[FAIL]",
            None => "[SKIP]",
        };
        let mut details = Vec::new();
        if let Some(before) = check.before {
            details.push(format!("before {before:.3}"));
        }
        if let Some(after) = check.after {
            details.push(format!("after {after:.3}"));
        }
        if let Some(fraction) = check.pair_fraction {
            details.push(format!("{:.0}% of pairs", fraction * 100.0));
        }
        let suffix = if details.is_empty() {
            String::new()
        } else {
            format!(" ({})", details.join(", "))
        };
        let _ = writeln!(text, "{tag} {}{suffix}", check.description);
    }
    text
}
