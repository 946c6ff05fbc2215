//! Scalar metrics, loop diagnostics, sweeps, calibration and solver checks.

mod convergence;
mod metrics;
mod polarity;
mod search;

pub use convergence::{
    convergence_study, convergence_study_with, log_log_slope, ConvergenceReport, REFERENCE_DT,
};
pub use metrics::{
    metrics, metrics_with, trust_collapse_time, AnalysisReport, CollapseDetector, MetricsConfig,
};
pub use polarity::{
    loop_checks, polarity_map, polarity_map_at, Component, Expectation, LoopCheck, PolarityError,
    PolarityMap, Sign, Variable, FD_STEP,
};
pub use search::{
    calibrate, sweep, CalibrationResult, CalibrationSpec, FreeParameter, GridPoint, Metric,
    SweepRow, SweepSpec, MAX_GRID_POINTS,
};

use crate::integrator::{simulate, IntegrationError, Trajectory};
use crate::model::Violations;
use crate::proportionality::{
    assess, decision_quality, score_trajectory, LegalVerdict, ProportionalityTrace,
};
use crate::scenario::{Scenario, ScenarioError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Integration(#[from] IntegrationError),
    #[error(transparent)]
    Polarity(#[from] PolarityError),
    #[error("{0}")]
    Spec(String),
}

impl From<Violations> for AnalysisError {
    fn from(v: Violations) -> Self {
        AnalysisError::Scenario(ScenarioError::Invalid(v))
    }
}

/// Everything derived from one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct Run {
    pub trajectory: Trajectory,
    pub trace: ProportionalityTrace,
    pub decision_quality: Vec<f64>,
    pub report: AnalysisReport,
    pub verdict: LegalVerdict,
}

/// Simulates, scores and summarizes a scenario.
pub fn evaluate(scenario: &Scenario) -> Result<Run, AnalysisError> {
    let trajectory = simulate(scenario)?;
    let trace = score_trajectory(
        &trajectory,
        &scenario.schedules.sigma_env,
        &scenario.proportionality,
    );
    let decision_quality = trajectory
        .states
        .iter()
        .map(|x| decision_quality(x, &scenario.dq_weights))
        .collect();
    let report = metrics(&trajectory, &trace);
    let verdict = assess(&trace, &scenario.proportionality);
    Ok(Run {
        trajectory,
        trace,
        decision_quality,
        report,
        verdict,
    })
}
