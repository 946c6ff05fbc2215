//! Parameter sweeps and exhaustive grid-search calibration.
//!
//! Grid points are evaluated in parallel; results are always assembled in
//! grid order, so tables and tie-breaks do not depend on scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{evaluate, AnalysisError, AnalysisReport};
use crate::proportionality::LegalVerdict;
use crate::scenario::{set_path, Scenario};

pub const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    PositiveFraction,
    PeakC,
    UPeak,
    MinT,
    GuardActiveFraction,
    ComputeCost,
}

impl Metric {
    pub fn read(self, r: &AnalysisReport) -> f64 {
        match self {
            Metric::PositiveFraction => r.positive_fraction,
            Metric::PeakC => r.peak_c,
            Metric::UPeak => r.u_peak,
            Metric::MinT => r.min_t,
            Metric::GuardActiveFraction => r.guard_active_fraction,
            Metric::ComputeCost => r.cumulative_compute_cost,
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "positive_fraction" => Metric::PositiveFraction,
            "peak_c" => Metric::PeakC,
            "u_peak" => Metric::UPeak,
            "min_t" => Metric::MinT,
            "guard_active_fraction" => Metric::GuardActiveFraction,
            "compute_cost" => Metric::ComputeCost,
            other => return Err(format!("unknown metric `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Dotted parameter path, e.g. `rates.k3`.
    pub path: String,
    pub values: Vec<f64>,
    pub metric: Metric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub metric: f64,
    pub report: AnalysisReport,
    pub verdict: LegalVerdict,
}

fn with_assignment(base: &Scenario, assignment: &[(&str, f64)]) -> Result<Scenario, AnalysisError> {
    let mut sc = base.clone();
    for (path, v) in assignment {
        sc = set_path(&sc, path, &v.to_string())?;
    }
    sc.validate()?;
    Ok(sc)
}

pub fn sweep(scenario: &Scenario, spec: &SweepSpec) -> Result<Vec<SweepRow>, AnalysisError> {
    if spec.values.is_empty() {
        return Err(AnalysisError::Spec("sweep needs at least one value".into()));
    }
    // Resolve the path up front so a bad path fails before any simulation.
    with_assignment(scenario, &[(&spec.path, spec.values[0])])?;
    spec.values
        .par_iter()
        .map(|&value| {
            let sc = with_assignment(scenario, &[(&spec.path, value)])?;
            let run = evaluate(&sc)?;
            Ok(SweepRow {
                value,
                metric: spec.metric.read(&run.report),
                report: run.report,
                verdict: run.verdict,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeParameter {
    pub path: String,
    pub lo: f64,
    pub hi: f64,
    /// Number of evenly spaced grid values, end points included.
    pub resolution: usize,
}

impl FreeParameter {
    pub fn new(path: impl Into<String>, lo: f64, hi: f64, resolution: usize) -> Self {
        Self {
            path: path.into(),
            lo,
            hi,
            resolution,
        }
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.resolution {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * k as f64 / (self.resolution - 1) as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSpec {
    pub free: Vec<FreeParameter>,
    pub target: f64,
    pub tolerance: f64,
}

impl Default for CalibrationSpec {
    /// Spike time and baseline collateral exposure against the 44 % target.
    fn default() -> Self {
        Self {
            free: vec![
                FreeParameter::new("schedules.sigma_env.1.start_time", 0.3, 0.6, 31),
                FreeParameter::new("proportionality.c0", 0.2, 0.35, 11),
            ],
            target: 0.44,
            tolerance: 0.05,
        }
    }
}

impl CalibrationSpec {
    pub fn grid_size(&self) -> usize {
        self.free
            .iter()
            .map(|f| f.resolution)
            .try_fold(1usize, |acc, r| acc.checked_mul(r))
            .unwrap_or(usize::MAX)
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.free.is_empty() {
            return Err(AnalysisError::Spec("no free parameters".into()));
        }
        for f in &self.free {
            if !(f.lo.is_finite() && f.hi.is_finite() && f.hi > f.lo) {
                return Err(AnalysisError::Spec(format!(
                    "range for `{}` is empty: [{}, {}]",
                    f.path, f.lo, f.hi
                )));
            }
            if f.resolution < 2 {
                return Err(AnalysisError::Spec(format!(
                    "resolution for `{}` must be ≥ 2",
                    f.path
                )));
            }
        }
        if self.grid_size() > MAX_GRID_POINTS {
            return Err(AnalysisError::Spec(format!(
                "grid has {} points, limit is {MAX_GRID_POINTS}",
                self.grid_size()
            )));
        }
        Ok(())
    }

    /// Grid point `index` in lexicographic order (first parameter slowest).
    pub fn point(&self, mut index: usize) -> Vec<f64> {
        let mut values = vec![0.0; self.free.len()];
        for (i, f) in self.free.iter().enumerate().rev() {
            values[i] = f.value(index % f.resolution);
            index /= f.resolution;
        }
        values
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    pub values: Vec<f64>,
    pub positive_fraction: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationResult {
    pub assignment: Vec<(String, f64)>,
    pub achieved: f64,
    pub error: f64,
    pub within_tolerance: bool,
    pub evaluations: usize,
    pub grid: Vec<GridPoint>,
    /// The input scenario with the best assignment applied.
    pub scenario: Scenario,
}

/// Exhaustive grid search minimizing `|positive_fraction - target|`; ties go
/// to the first point in grid order.
pub fn calibrate(scenario: &Scenario, spec: &CalibrationSpec) -> Result<CalibrationResult, AnalysisError> {
    spec.validate()?;
    let n = spec.grid_size();
    let grid: Vec<GridPoint> = (0..n)
        .into_par_iter()
        .map(|i| {
            let values = spec.point(i);
            let assignment: Vec<(&str, f64)> = spec
                .free
                .iter()
                .zip(&values)
                .map(|(f, v)| (f.path.as_str(), *v))
                .collect();
            let sc = with_assignment(scenario, &assignment)?;
            let fraction = evaluate(&sc)?.report.positive_fraction;
            Ok(GridPoint {
                values,
                positive_fraction: fraction,
                error: (fraction - spec.target).abs(),
            })
        })
        .collect::<Result<_, AnalysisError>>()?;

    let mut best = 0;
    for (i, g) in grid.iter().enumerate() {
        if g.error < grid[best].error {
            best = i;
        }
    }
    let assignment: Vec<(String, f64)> = spec
        .free
        .iter()
        .zip(&grid[best].values)
        .map(|(f, v)| (f.path.clone(), *v))
        .collect();
    let borrowed: Vec<(&str, f64)> = assignment.iter().map(|(p, v)| (p.as_str(), *v)).collect();
    let best_scenario = with_assignment(scenario, &borrowed)?;
    Ok(CalibrationResult {
        achieved: grid[best].positive_fraction,
        error: grid[best].error,
        within_tolerance: grid[best].error <= spec.tolerance,
        evaluations: grid.len(),
        assignment,
        grid,
        scenario: best_scenario,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::builtin_baseline;

    #[test]
    fn grid_order_is_lexicographic() {
        let spec = CalibrationSpec {
            free: vec![FreeParameter::new("a", 0.0, 1.0, 2), FreeParameter::new("b", 10.0, 20.0, 3)],
            target: 0.5,
            tolerance: 0.1,
        };
        let pts: Vec<Vec<f64>> = (0..6).map(|i| spec.point(i)).collect();
        assert_eq!(
            pts,
            vec![
                vec![0.0, 10.0],
                vec![0.0, 15.0],
                vec![0.0, 20.0],
                vec![1.0, 10.0],
                vec![1.0, 15.0],
                vec![1.0, 20.0]
            ]
        );
    }

    #[test]
    fn two_by_two_grid() {
        let spec = CalibrationSpec {
            free: vec![
                FreeParameter::new("schedules.sigma_env.1.start_time", 0.3, 0.6, 2),
                FreeParameter::new("proportionality.c0", 0.2, 0.3, 2),
            ],
            target: 0.44,
            tolerance: 0.05,
        };
        let r = calibrate(&builtin_baseline(), &spec).unwrap();
        assert_eq!(r.evaluations, 4);
        assert_eq!(r.grid.len(), 4);
        for g in &r.grid {
            assert!(g.values[0] == 0.3 || g.values[0] == 0.6);
        }
    }

    #[test]
    fn exact_target_gives_zero_error_and_first_tie() {
        let b = builtin_baseline();
        let reached = evaluate(&b).unwrap().report.positive_fraction;
        let spec = CalibrationSpec {
            free: vec![FreeParameter::new("rates.theta3", 0.0, 0.3, 3)],
            target: reached,
            tolerance: 0.0,
        };
        // theta3 only matters above u_ref, so every grid point ties.
        let r = calibrate(&b, &spec).unwrap();
        assert_eq!(r.error, 0.0);
        assert!(r.within_tolerance);
        assert_eq!(r.assignment, vec![("rates.theta3".to_owned(), 0.0)]);
    }

    #[test]
    fn bad_specs() {
        let b = builtin_baseline();
        let empty = CalibrationSpec {
            free: vec![FreeParameter::new("proportionality.c0", 0.2, 0.2, 5)],
            ..CalibrationSpec::default()
        };
        assert!(matches!(calibrate(&b, &empty), Err(AnalysisError::Spec(_))));
        let coarse = CalibrationSpec {
            free: vec![FreeParameter::new("proportionality.c0", 0.2, 0.3, 1)],
            ..CalibrationSpec::default()
        };
        assert!(calibrate(&b, &coarse).is_err());
        let huge = CalibrationSpec {
            free: vec![
                FreeParameter::new("proportionality.c0", 0.2, 0.3, 2000),
                FreeParameter::new("proportionality.c_u", 0.2, 0.3, 2000),
            ],
            ..CalibrationSpec::default()
        };
        assert!(calibrate(&b, &huge).is_err());
    }

    #[test]
    fn sweep_single_value_matches_plain_run() {
        let b = builtin_baseline();
        let rows = sweep(
            &b,
            &SweepSpec {
                path: "rates.k3".into(),
                values: vec![0.25],
                metric: Metric::UPeak,
            },
        )
        .unwrap();
        assert_eq!(rows.len(), 1);
        let plain = evaluate(&b).unwrap();
        assert_eq!(rows[0].report, plain.report);
        assert_eq!(rows[0].metric, plain.report.u_peak);
    }

    #[test]
    fn sweep_rejects_bad_path() {
        let spec = SweepSpec {
            path: "rates.nope".into(),
            values: vec![0.1, 0.2],
            metric: Metric::PositiveFraction,
        };
        assert!(matches!(sweep(&builtin_baseline(), &spec), Err(AnalysisError::Scenario(_))));
    }

    #[test]
    fn sweep_directions() {
        let b = builtin_baseline();
        let run = |path: &str, values: Vec<f64>, metric| {
            sweep(&b, &SweepSpec { path: path.into(), values, metric })
                .unwrap()
                .iter()
                .map(|r| r.metric)
                .collect::<Vec<_>>()
        };
        let sigma = run("schedules.sigma_env.0.value", vec![0.1, 0.35, 0.7], Metric::PositiveFraction);
        assert!(sigma.windows(2).all(|w| w[1] <= w[0]), "{sigma:?}");
        let k3 = run("rates.k3", vec![0.0, 0.25], Metric::UPeak);
        assert!(k3[1] <= k3[0], "{k3:?}");
        let eq = run("schedules.explanation_quality", vec![0.5, 0.75, 1.0], Metric::PositiveFraction);
        assert!(eq.windows(2).all(|w| w[1] >= w[0]), "{eq:?}");
    }
}
