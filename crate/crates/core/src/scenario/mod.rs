//! Scenario definition, the built-in baseline, and the scenario file format.
//!
//! Scenario files are TOML. Every block and every field is optional; anything
//! omitted takes the built-in baseline value. Unknown keys are rejected.
//!
//! ```toml
//! label = "baseline"
//!
//! [initial]          # stocks, each in [0, 1]
//! h = 0.5
//!
//! [rates]            # per-window gains
//! k3 = 0.25
//! pg_mode = "expectation-weighted"
//!
//! [solver]
//! method = "rk4"
//! dt = 0.01
//! horizon = 1.0
//!
//! [[schedules.sigma_env]]   # piecewise-constant, left-continuous
//! start_time = 0.0
//! value = 0.35
//!
//! [[schedules.sigma_env]]
//! start_time = 0.5
//! value = 0.7
//! ```

mod chart;
mod csv;
mod paths;

pub use chart::{emit_chart_svg, ChartError};
pub use csv::{write_trajectory_csv, CSV_HEADER};
pub use paths::{apply_override, get_path, parse_override, set_path};

use serde::{Deserialize, Serialize};

use crate::integrator::SolverConfig;
use crate::model::{
    check_unit, validate_inputs, validate_parameters, ExogenousInputs, RateParameters,
    SafetyPolicy, StockState, Violation, Violations,
};
use crate::proportionality::{DecisionQualityWeights, ProportionalityParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSegment {
    pub start_time: f64,
    pub value: f64,
}

/// Piecewise-constant input: each segment holds from its start time until the
/// next segment starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Schedule {
    pub segments: Vec<ScheduleSegment>,
}

impl Schedule {
    pub fn constant(value: f64) -> Self {
        Self {
            segments: vec![ScheduleSegment {
                start_time: 0.0,
                value,
            }],
        }
    }

    /// Builds a schedule from `(start_time, value)` pairs.
    pub fn steps(points: &[(f64, f64)]) -> Self {
        Self {
            segments: points
                .iter()
                .map(|&(start_time, value)| ScheduleSegment { start_time, value })
                .collect(),
        }
    }

    /// Value in force at `t`; a new segment applies from exactly its start time.
    pub fn value_at(&self, t: f64) -> f64 {
        let idx = self.segments.partition_point(|s| s.start_time <= t);
        self.segments[idx.saturating_sub(1)].value
    }

    fn validate(&self, name: &str, horizon: f64, out: &mut Vec<Violation>) {
        let field = format!("schedules.{name}");
        let Some(first) = self.segments.first() else {
            out.push(Violation::new(field, format!("{name} schedule must not be empty")));
            return;
        };
        if first.start_time != 0.0 {
            out.push(Violation::new(
                field.clone(),
                format!("{name} schedule must start at time 0"),
            ));
        }
        if self
            .segments
            .windows(2)
            .any(|w| !(w[1].start_time > w[0].start_time))
        {
            out.push(Violation::new(field.clone(), "segment times must increase"));
        }
        if self
            .segments
            .iter()
            .any(|s| !(s.start_time >= 0.0 && s.start_time <= horizon))
        {
            out.push(Violation::new(
                field.clone(),
                format!("{name} segment times must lie within [0, horizon]"),
            ));
        }
        for (i, s) in self.segments.iter().enumerate() {
            check_unit(out, format!("{field}.{i}.value"), name, s.value);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Schedules {
    pub sigma_env: Schedule,
    pub explanation_quality: Schedule,
    pub annotation_quality: Schedule,
    pub task_rate: Schedule,
}

impl Default for Schedules {
    fn default() -> Self {
        Self {
            sigma_env: Schedule::steps(&[(0.0, 0.35), (0.5, 0.70)]),
            explanation_quality: Schedule::constant(0.75),
            annotation_quality: Schedule::constant(0.65),
            task_rate: Schedule::constant(0.5),
        }
    }
}

impl Schedules {
    pub fn inputs_at(&self, t: f64) -> ExogenousInputs {
        ExogenousInputs {
            sigma_env: self.sigma_env.value_at(t),
            explanation_quality: self.explanation_quality.value_at(t),
            annotation_quality: self.annotation_quality.value_at(t),
            task_rate: self.task_rate.value_at(t),
        }
    }

    pub fn named(&self) -> [(&'static str, &Schedule); 4] {
        [
            ("sigma_env", &self.sigma_env),
            ("explanation_quality", &self.explanation_quality),
            ("annotation_quality", &self.annotation_quality),
            ("task_rate", &self.task_rate),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub label: String,
    pub initial: StockState,
    pub rates: RateParameters,
    pub safety: SafetyPolicy,
    pub proportionality: ProportionalityParams,
    pub dq_weights: DecisionQualityWeights,
    pub solver: SolverConfig,
    pub schedules: Schedules,
}

impl Default for Scenario {
    fn default() -> Self {
        builtin_baseline()
    }
}

/// The mission-planning cell of the proportionality use case: cautious trust,
/// low delegated authority, and an uncertainty spike halfway through the
/// one-hour window.
pub fn builtin_baseline() -> Scenario {
    Scenario {
        label: "baseline".to_owned(),
        initial: StockState::default(),
        rates: RateParameters::default(),
        safety: SafetyPolicy::default(),
        proportionality: ProportionalityParams::default(),
        dq_weights: DecisionQualityWeights::default(),
        solver: SolverConfig::default(),
        schedules: Schedules::default(),
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<(), Violations> {
        let mut out = Vec::new();
        for (name, v) in [
            ("h", self.initial.h),
            ("a", self.initial.a),
            ("s", self.initial.s),
            ("t", self.initial.t),
            ("u", self.initial.u),
            ("c", self.initial.c),
        ] {
            check_unit(&mut out, format!("initial.{name}"), name, v);
        }
        let mut extend = |r: Result<(), Violations>| {
            if let Err(v) = r {
                out.extend(v.0);
            }
        };
        extend(validate_parameters(&self.rates, &self.safety));
        extend(self.proportionality.validate());
        extend(self.dq_weights.validate());
        extend(self.solver.validate());
        for (name, sched) in self.schedules.named() {
            sched.validate(name, self.solver.horizon, &mut out);
        }
        Violations(out).into_result()
    }

    /// Inputs at `t`, checked against their unit ranges.
    pub fn inputs_at(&self, t: f64) -> Result<ExogenousInputs, Violations> {
        let inputs = self.schedules.inputs_at(t);
        validate_inputs(&inputs).map(|_| inputs)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario: {0}")]
    Invalid(Violations),
    #[error("unknown parameter path `{0}`")]
    UnknownPath(String),
    #[error("bad value for `{path}`: {message}")]
    BadValue { path: String, message: String },
}

impl From<Violations> for ScenarioError {
    fn from(v: Violations) -> Self {
        ScenarioError::Invalid(v)
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

/// Parses without semantic validation.
pub fn parse_scenario_unchecked(text: &str) -> Result<Scenario, ScenarioError> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = e
            .span()
            .map_or((0, 0), |span| line_column(text, span.start));
        ScenarioError::Syntax {
            line,
            column,
            message: e.message().to_owned(),
        }
    })
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let sc = parse_scenario_unchecked(text)?;
    sc.validate()?;
    Ok(sc)
}

/// Canonical text form with every value explicit.
pub fn write_scenario(scenario: &Scenario) -> String {
    toml::to_string(scenario).expect("scenario fields are always representable in TOML")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::Method;
    use crate::model::PgMode;

    #[test]
    fn baseline_values() {
        let b = builtin_baseline();
        assert_eq!(b.initial.h, 0.50);
        assert_eq!(b.initial.a, 0.40);
        assert_eq!(b.initial.c, 0.30);
        assert_eq!((b.rates.k1, b.rates.k2, b.rates.k3), (0.45, 0.35, 0.25));
        assert_eq!(b.schedules.sigma_env.value_at(0.0), 0.35);
        assert_eq!(b.schedules.sigma_env.value_at(0.4999), 0.35);
        assert_eq!(b.schedules.sigma_env.value_at(0.5), 0.70);
        assert_eq!(b.schedules.sigma_env.value_at(0.75), 0.70);
        assert_eq!(b.schedules.explanation_quality.value_at(0.9), 0.75);
        assert_eq!(b.solver.method, Method::Rk4);
        assert!(b.validate().is_ok());
    }

    #[test]
    fn empty_file_is_baseline() {
        assert_eq!(parse_scenario("").unwrap(), builtin_baseline());
    }

    #[test]
    fn baseline_round_trip() {
        let text = write_scenario(&builtin_baseline());
        assert_eq!(parse_scenario(&text).unwrap(), builtin_baseline());
        assert!(text.contains("k3 = 0.25"));
        assert!(text.contains("[[schedules.sigma_env]]"));
    }

    #[test]
    fn partial_blocks_are_canonicalized() {
        let sc = parse_scenario("label = \"x\"\n[rates]\nk3 = 0.3\npg_mode = \"literal\"\n").unwrap();
        assert_eq!(sc.rates.k3, 0.3);
        assert_eq!(sc.rates.pg_mode, PgMode::Literal);
        assert_eq!(sc.rates.k1, 0.45);
        let text = write_scenario(&sc);
        assert!(text.contains("k1 = 0.45"));
        assert!(text.contains("horizon = 1.0"));
        assert_eq!(text, write_scenario(&sc.clone()));
    }

    #[test]
    fn semantic_errors() {
        let err = parse_scenario("[rates]\nk3 = -1.0\n").unwrap_err();
        match err {
            ScenarioError::Invalid(v) => assert!(v.mentions("k3 must be ≥ 0")),
            other => panic!("{other:?}"),
        }
        let text = "[[schedules.task_rate]]\nstart_time = 0.5\nvalue = 0.5\n\
                    [[schedules.task_rate]]\nstart_time = 0.2\nvalue = 0.5\n";
        let err = parse_scenario(text).unwrap_err();
        assert!(err.to_string().contains("segment times must increase"), "{err}");
    }

    #[test]
    fn unknown_keys_and_syntax_errors_carry_lines() {
        let err = parse_scenario("label = \"x\"\n[rates]\nk9 = 1.0\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Syntax { line: 3, .. }), "{err:?}");
        let err = parse_scenario("[initial]\nh = = 2\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Syntax { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn out_of_range_schedule_value() {
        let mut sc = builtin_baseline();
        sc.schedules.explanation_quality = Schedule::constant(1.5);
        assert!(sc.validate().is_err());
        sc.schedules.explanation_quality = Schedule { segments: vec![] };
        assert!(sc.validate().unwrap_err().mentions("must not be empty"));
    }
}
