//! Observed order of accuracy of the fixed-step solvers.

use serde::Serialize;

use super::AnalysisError;
use crate::integrator::{step, Method, SolverConfig};
use crate::model::{GuardState, StockState};
use crate::scenario::Scenario;

/// Step size of the RK4 reference solution.
pub const REFERENCE_DT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub dts: Vec<f64>,
    pub euler_errors: Vec<f64>,
    pub rk4_errors: Vec<f64>,
    /// Least-squares slope of log(error) against log(dt).
    pub euler_order: f64,
    pub rk4_order: f64,
}

/// Integrates without recording, keeping every `stride`-th state.
fn checkpoints(sc: &Scenario, cfg: &SolverConfig, stride: usize) -> Result<Vec<StockState>, AnalysisError> {
    let n = cfg.steps()?;
    let mut x = sc.initial;
    let mut guard = GuardState::INACTIVE;
    let mut out = vec![x];
    for i in 0..n {
        let (next, g, flags) = step(&x, guard, i as f64 * cfg.dt, sc, cfg)?;
        if g.b3_active {
            return Err(AnalysisError::Spec(format!(
                "guard activated at t = {}; order is undefined across the switch",
                i as f64 * cfg.dt
            )));
        }
        if !flags.is_empty() {
            return Err(AnalysisError::Spec(format!(
                "state clamped at t = {}; order is undefined at the bound",
                (i + 1) as f64 * cfg.dt
            )));
        }
        x = next;
        guard = g;
        if (i + 1) % stride == 0 {
            out.push(x);
        }
    }
    Ok(out)
}

fn max_gap(a: &[StockState], b: &[StockState]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.to_array().into_iter().zip(y.to_array()).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

fn ratio(big: f64, small: f64) -> Option<usize> {
    let r = big / small;
    let k = r.round();
    ((r - k).abs() < 1e-6 && k >= 1.0).then_some(k as usize)
}

/// Least-squares slope through `(ln x, ln y)`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

pub fn convergence_study(scenario: &Scenario, dts: &[f64]) -> Result<ConvergenceReport, AnalysisError> {
    convergence_study_with(scenario, dts, REFERENCE_DT)
}

/// Max-norm error of Euler and RK4 at each `dt` against an RK4 run at
/// `reference_dt`, compared on the grid of the coarsest step.
pub fn convergence_study_with(
    scenario: &Scenario,
    dts: &[f64],
    reference_dt: f64,
) -> Result<ConvergenceReport, AnalysisError> {
    if dts.len() < 3 {
        return Err(AnalysisError::Spec("at least 3 step sizes required".into()));
    }
    let mut sorted = dts.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(AnalysisError::Spec("distinct step sizes required".into()));
    }
    let horizon = scenario.solver.horizon;
    let coarse = sorted[sorted.len() - 1];
    let stride_of = |dt: f64| {
        ratio(coarse, dt).ok_or_else(|| {
            AnalysisError::Spec(format!("step {dt} does not divide the coarsest step {coarse}"))
        })
    };
    let reference = checkpoints(
        scenario,
        &SolverConfig::new(Method::Rk4, reference_dt, horizon),
        stride_of(reference_dt)?,
    )?;
    let mut euler_errors = Vec::new();
    let mut rk4_errors = Vec::new();
    for &dt in dts {
        let stride = stride_of(dt)?;
        for (method, errs) in [(Method::Euler, &mut euler_errors), (Method::Rk4, &mut rk4_errors)] {
            let states = checkpoints(scenario, &SolverConfig::new(method, dt, horizon), stride)?;
            errs.push(max_gap(&states, &reference));
        }
    }
    if euler_errors.iter().chain(&rk4_errors).any(|e| !(*e > 0.0)) {
        return Err(AnalysisError::Spec(
            "zero error against the reference; order is undefined".into(),
        ));
    }
    Ok(ConvergenceReport {
        dts: dts.to_vec(),
        euler_order: log_log_slope(dts, &euler_errors),
        rk4_order: log_log_slope(dts, &rk4_errors),
        euler_errors,
        rk4_errors,
    })
}
