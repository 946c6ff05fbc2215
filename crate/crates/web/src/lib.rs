//! Browser bindings: simulate with overrides, check loop polarities, and
//! calibrate the spike time.
//!
//! Every entry point takes overrides as `path=value` pairs separated by
//! newlines or `;`, applied to the built-in baseline.

use colearn_core::analysis::{calibrate, loop_checks, CalibrationSpec, FreeParameter};
use colearn_core::scenario::{apply_override, emit_chart_svg};
use colearn_core::{builtin_baseline, evaluate, Scenario};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn scenario_from(overrides: &str) -> Result<Scenario, String> {
    let mut sc = builtin_baseline();
    for item in overrides.split(['\n', ';']).map(str::trim).filter(|s| !s.is_empty()) {
        sc = apply_override(&sc, item).map_err(|e| e.to_string())?;
    }
    sc.validate().map_err(|e| format!("invalid scenario: {e}"))?;
    Ok(sc)
}

#[derive(Serialize)]
struct RunView {
    verdict: String,
    positive_fraction: f64,
    threshold: f64,
    peak_c: f64,
    u_peak: f64,
    u_peak_time: f64,
    min_t: f64,
    trust_collapse_time: Option<f64>,
    guard_active_fraction: f64,
    svg: String,
}

/// Runs the scenario and returns its summary and chart as JSON.
pub fn run_view(overrides: &str) -> Result<String, String> {
    let sc = scenario_from(overrides)?;
    let run = evaluate(&sc).map_err(|e| e.to_string())?;
    let svg = emit_chart_svg(&run.trajectory, &run.trace).map_err(|e| e.to_string())?;
    let svg = match svg.find("<svg") {
        Some(i) => svg[i..].to_owned(),
        None => svg,
    };
    let r = &run.report;
    let view = RunView {
        verdict: run.verdict.outcome.to_string(),
        positive_fraction: r.positive_fraction,
        threshold: run.verdict.threshold,
        peak_c: r.peak_c,
        u_peak: r.u_peak,
        u_peak_time: r.u_peak_time,
        min_t: r.min_t,
        trust_collapse_time: r.trust_collapse_time,
        guard_active_fraction: r.guard_active_fraction,
        svg,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

/// Loop polarity checks at the scenario's initial state, as JSON. Parameter
/// violations are reported as a failed check rather than an error.
pub fn checks_view(overrides: &str) -> Result<String, String> {
    let mut sc = builtin_baseline();
    for item in overrides.split(['\n', ';']).map(str::trim).filter(|s| !s.is_empty()) {
        sc = apply_override(&sc, item).map_err(|e| e.to_string())?;
    }
    let checks = loop_checks(&sc).map_err(|e| e.to_string())?;
    serde_json::to_string(&checks).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct CalibrationView {
    spike_time: f64,
    achieved: f64,
    target: f64,
    within_tolerance: bool,
    evaluations: usize,
    verdict: String,
}

/// Searches the spike time over `[0.3, 0.6]` for the target positive fraction.
pub fn calibration_view(overrides: &str, target: f64) -> Result<String, String> {
    let sc = scenario_from(overrides)?;
    let spec = CalibrationSpec {
        free: vec![FreeParameter::new("schedules.sigma_env.1.start_time", 0.3, 0.6, 31)],
        target,
        ..CalibrationSpec::default()
    };
    let result = calibrate(&sc, &spec).map_err(|e| e.to_string())?;
    let verdict = evaluate(&result.scenario).map_err(|e| e.to_string())?.verdict;
    let view = CalibrationView {
        spike_time: result.assignment[0].1,
        achieved: result.achieved,
        target,
        within_tolerance: result.within_tolerance,
        evaluations: result.evaluations,
        verdict: verdict.outcome.to_string(),
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn simulate(overrides: &str) -> Result<String, JsError> {
    run_view(overrides).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn check_loops(overrides: &str) -> Result<String, JsError> {
    checks_view(overrides).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn calibrate_spike(overrides: &str, target: f64) -> Result<String, JsError> {
    calibration_view(overrides, target).map_err(|e| JsError::new(&e))
}
