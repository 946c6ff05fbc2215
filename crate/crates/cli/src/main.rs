//! `colearn`: run, sweep, calibrate and check co-learning scenarios.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use colearn_core::analysis::{
    calibrate, loop_checks, sweep, AnalysisError, CalibrationSpec, FreeParameter, Metric, SweepSpec,
};
use colearn_core::scenario::{
    apply_override, emit_chart_svg, parse_scenario_unchecked, write_trajectory_csv, ScenarioError,
};
use colearn_core::{builtin_baseline, evaluate, write_scenario, Method, Run, Scenario};
use serde_json::json;

#[derive(Parser)]
#[command(name = "colearn", version, about = "Human-AI co-learning dynamics simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario and write trajectory.csv, chart.svg and summary.txt.
    Run {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a metric over a list of values for one parameter.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Dotted parameter path, e.g. rates.k3
        #[arg(long)]
        param: String,
        /// Comma-separated values
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        values: Vec<f64>,
        #[arg(long, default_value = "positive_fraction")]
        metric: Metric,
    },
    /// Grid-search free parameters toward a target positive fraction.
    Calibrate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Free parameter as PATH=LO:HI:N (repeatable; defaults to spike time and c0)
        #[arg(long = "free", value_parser = parse_free)]
        free: Vec<FreeParameter>,
        #[arg(long)]
        target: Option<f64>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Check parameter constraints and feedback-loop polarities.
    Check {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file, or `baseline` for the built-in scenario
    #[arg(default_value = "baseline")]
    scenario: String,
    /// Override a parameter: --set rates.k3=0.1 (repeatable)
    #[arg(long = "set", value_name = "PATH=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    method: Option<Method>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also print a JSON summary to stdout
    #[arg(long)]
    json: bool,
}

/// A failure and the exit code it maps to.
enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure::Usage(e.into())
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Scenario(_) | AnalysisError::Spec(_) => Failure::Usage(e.into()),
            AnalysisError::Integration(_) | AnalysisError::Polarity(_) => Failure::Runtime(e.into()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

type CmdResult = Result<(), Failure>;

/// Prints to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn emit_json(doc: &serde_json::Value) -> CmdResult {
    let mut text = serde_json::to_string_pretty(doc).map_err(anyhow::Error::from)?;
    text.push('\n');
    emit(&text);
    Ok(())
}

fn parse_free(text: &str) -> Result<FreeParameter, String> {
    let usage = || format!("expected PATH=LO:HI:N, got `{text}`");
    let (path, range) = text.split_once('=').ok_or_else(usage)?;
    let parts: Vec<&str> = range.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(usage());
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| usage());
    let n = n.trim().parse::<usize>().map_err(|_| usage())?;
    Ok(FreeParameter::new(path.trim(), num(lo)?, num(hi)?, n))
}

/// Loads the scenario and applies overrides; validation is left to the caller.
fn load_unchecked(args: &ScenarioArgs) -> Result<Scenario, Failure> {
    let mut sc = if args.scenario == "baseline" {
        builtin_baseline()
    } else {
        let path = Path::new(&args.scenario);
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(anyhow!("cannot read scenario {}: {e}", path.display())))?;
        parse_scenario_unchecked(&text)
            .map_err(|e| Failure::Usage(anyhow!("{}: {e}", path.display())))?
    };
    for o in &args.set {
        sc = apply_override(&sc, o)?;
    }
    if let Some(dt) = args.dt {
        sc.solver.dt = dt;
    }
    if let Some(m) = args.method {
        sc.solver.method = m;
    }
    Ok(sc)
}

fn load(args: &ScenarioArgs) -> Result<Scenario, Failure> {
    let sc = load_unchecked(args)?;
    sc.validate().map_err(ScenarioError::from)?;
    Ok(sc)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn metric_label(m: Metric) -> String {
    json!(m).as_str().unwrap_or_default().to_owned()
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".into(), |t| format!("{t:.4}"))
}

fn summary_text(sc: &Scenario, run: &Run) -> String {
    let r = &run.report;
    let mut s = String::new();
    let _ = writeln!(s, "scenario: {}", sc.label);
    let _ = writeln!(s, "verdict: {}", run.verdict.outcome);
    let _ = writeln!(s, "positive_fraction: {:.4}", r.positive_fraction);
    let _ = writeln!(s, "threshold: {:.4}", run.verdict.threshold);
    let _ = writeln!(s, "peak_c: {:.4}", r.peak_c);
    let _ = writeln!(s, "min_t: {:.4} at {:.4}", r.min_t, r.min_t_time);
    let _ = writeln!(s, "u_peak: {:.4} at {:.4}", r.u_peak, r.u_peak_time);
    let _ = writeln!(s, "trust_collapse_time: {}", fmt_opt(r.trust_collapse_time));
    let _ = writeln!(s, "guard_active_fraction: {:.4}", r.guard_active_fraction);
    let _ = writeln!(s, "compute_cost: {:.4}", r.cumulative_compute_cost);
    s
}

fn cmd_run(args: &ScenarioArgs, out: &OutputArgs) -> CmdResult {
    let sc = load(args)?;
    let run = evaluate(&sc)?;
    let csv = write_trajectory_csv(&run.trajectory, &run.trace, &run.decision_quality);
    let svg = emit_chart_svg(&run.trajectory, &run.trace).map_err(|e| anyhow!(e))?;
    let summary = summary_text(&sc, &run);
    let files = [
        write_file(&out.out, "trajectory.csv", &csv)?,
        write_file(&out.out, "chart.svg", &svg)?,
        write_file(&out.out, "summary.txt", &summary)?,
    ];
    if out.json {
        let doc = json!({
            "scenario": sc.label,
            "verdict": run.verdict,
            "report": run.report,
            "files": files,
        });
        emit_json(&doc)?;
    } else {
        emit(&summary);
    }
    Ok(())
}

fn cmd_sweep(args: &ScenarioArgs, out: &OutputArgs, param: &str, values: &[f64], metric: Metric) -> CmdResult {
    let sc = load(args)?;
    let spec = SweepSpec {
        path: param.to_owned(),
        values: values.to_vec(),
        metric,
    };
    let rows = sweep(&sc, &spec)?;
    let metric_name = metric_label(metric);
    let fixed = [Metric::PositiveFraction, Metric::PeakC, Metric::UPeak, Metric::MinT];
    let extra: Vec<Metric> = fixed.into_iter().filter(|m| *m != metric).collect();
    let mut csv = String::from("value");
    for m in std::iter::once(metric).chain(extra.iter().copied()) {
        let _ = write!(csv, ",{}", metric_label(m));
    }
    csv.push_str(",verdict\n");
    for r in &rows {
        let _ = write!(csv, "{},{:.9}", r.value, r.metric);
        for m in &extra {
            let _ = write!(csv, ",{:.9}", m.read(&r.report));
        }
        let _ = writeln!(csv, ",{}", r.verdict.outcome);
    }
    let path = write_file(&out.out, "sweep.csv", &csv)?;
    if out.json {
        let doc: Vec<_> = rows
            .iter()
            .map(|r| json!({"value": r.value, "metric": r.metric, "verdict": r.verdict, "report": r.report}))
            .collect();
        let doc = json!({"param": param, "metric": metric, "rows": doc, "file": path});
        emit_json(&doc)?;
    } else {
        let mut text = String::new();
        for r in &rows {
            let _ = writeln!(
                text,
                "{param} = {}: {metric_name} {:.4}, verdict {}",
                r.value, r.metric, r.verdict.outcome
            );
        }
        emit(&text);
    }
    Ok(())
}

fn cmd_calibrate(
    args: &ScenarioArgs,
    out: &OutputArgs,
    free: &[FreeParameter],
    target: Option<f64>,
    tolerance: Option<f64>,
) -> CmdResult {
    let sc = load(args)?;
    let mut spec = CalibrationSpec::default();
    if !free.is_empty() {
        spec.free = free.to_vec();
    }
    if let Some(t) = target {
        spec.target = t;
    }
    if let Some(t) = tolerance {
        spec.tolerance = t;
    }
    let result = calibrate(&sc, &spec)?;

    let mut grid = spec.free.iter().map(|f| f.path.as_str()).collect::<Vec<_>>().join(",");
    grid.push_str(",positive_fraction,error\n");
    for g in &result.grid {
        for v in &g.values {
            let _ = write!(grid, "{v:.9},");
        }
        let _ = writeln!(grid, "{:.9},{:.9}", g.positive_fraction, g.error);
    }
    let files = [
        write_file(&out.out, "calibrated.toml", &write_scenario(&result.scenario))?,
        write_file(&out.out, "calibration_grid.csv", &grid)?,
    ];
    let verdict = evaluate(&result.scenario)?.verdict;
    if out.json {
        let assignment: serde_json::Map<_, _> = result
            .assignment
            .iter()
            .map(|(p, v)| (p.clone(), json!(v)))
            .collect();
        let doc = json!({
            "assignment": assignment,
            "achieved": result.achieved,
            "target": spec.target,
            "error": result.error,
            "within_tolerance": result.within_tolerance,
            "evaluations": result.evaluations,
            "verdict": verdict,
            "files": files,
        });
        emit_json(&doc)?;
    } else {
        let mut text = String::new();
        for (p, v) in &result.assignment {
            let _ = writeln!(text, "{p} = {v:.6}");
        }
        let _ = writeln!(
            text,
            "positive_fraction {:.4} (target {} ± {}), verdict {}, {} evaluations",
            result.achieved, spec.target, spec.tolerance, verdict.outcome, result.evaluations
        );
        emit(&text);
    }
    if result.within_tolerance {
        Ok(())
    } else {
        Err(Failure::Runtime(anyhow!(
            "best fraction {:.4} is outside {} ± {}",
            result.achieved,
            spec.target,
            spec.tolerance
        )))
    }
}

fn cmd_check(args: &ScenarioArgs, json_out: bool) -> CmdResult {
    let sc = load_unchecked(args)?;
    let checks = loop_checks(&sc).map_err(AnalysisError::from)?;
    if json_out {
        emit_json(&json!(checks))?;
    } else {
        let mut text = String::new();
        for c in &checks {
            let _ = writeln!(text, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            for e in c.expectations.iter().filter(|e| !e.passed) {
                if c.name == "parameters" {
                    let _ = writeln!(text, "  {}", e.description);
                } else {
                    let _ = writeln!(text, "  {} ({:.6})", e.description, e.value);
                }
            }
        }
        emit(&text);
    }
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Runtime(anyhow!("failed: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { scenario, output } => cmd_run(scenario, output),
        Command::Sweep {
            scenario,
            output,
            param,
            values,
            metric,
        } => cmd_sweep(scenario, output, param, values, *metric),
        Command::Calibrate {
            scenario,
            output,
            free,
            target,
            tolerance,
        } => cmd_calibrate(scenario, output, free, *target, *tolerance),
        Command::Check { scenario, json } => cmd_check(scenario, *json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
