use serde::{Deserialize, Serialize};

use crate::integrator::Trajectory;
use crate::model::StockState;
use crate::proportionality::ProportionalityTrace;

/// Defines a trust collapse: the trust flow stays below `-rate` while trust
/// keeps falling for at least `window` of mission time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollapseDetector {
    pub rate: f64,
    pub window: f64,
}

impl Default for CollapseDetector {
    fn default() -> Self {
        Self {
            rate: 0.5,
            window: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsConfig {
    pub collapse: CollapseDetector,
    /// Compute cost per unit of delegated authority per window.
    pub cost_rate: f64,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            collapse: CollapseDetector::default(),
            cost_rate: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub positive_fraction: f64,
    pub peak_c: f64,
    pub min_t: f64,
    pub min_t_time: f64,
    pub trust_collapse_time: Option<f64>,
    pub u_peak: f64,
    pub u_peak_time: f64,
    pub guard_active_fraction: f64,
    /// `cost_rate * ∫ u dt` (trapezoidal).
    pub cumulative_compute_cost: f64,
    pub final_state: StockState,
}

/// Index of the first extreme under `better`.
fn first_extreme(v: &[f64], better: impl Fn(f64, f64) -> bool) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if better(x, v[best]) {
            best = i;
        }
    }
    best
}

pub fn trust_collapse_time(traj: &Trajectory, detector: &CollapseDetector) -> Option<f64> {
    let n = traj.len();
    let mut start: Option<usize> = None;
    for j in 0..n.saturating_sub(1) {
        let falling = traj.flows[j].dt_trust < -detector.rate && traj.states[j + 1].t < traj.states[j].t;
        if !falling {
            start = None;
            continue;
        }
        let i = *start.get_or_insert(j);
        if traj.times[j + 1] - traj.times[i] >= detector.window - 1e-12 {
            return Some(traj.times[i]);
        }
    }
    None
}

pub fn metrics(traj: &Trajectory, trace: &ProportionalityTrace) -> AnalysisReport {
    metrics_with(traj, trace, &MetricsConfig::default())
}

pub fn metrics_with(traj: &Trajectory, trace: &ProportionalityTrace, cfg: &MetricsConfig) -> AnalysisReport {
    let Some(&final_state) = traj.last_state() else {
        return AnalysisReport {
            positive_fraction: trace.positive_fraction,
            peak_c: 0.0,
            min_t: 0.0,
            min_t_time: 0.0,
            trust_collapse_time: None,
            u_peak: 0.0,
            u_peak_time: 0.0,
            guard_active_fraction: 0.0,
            cumulative_compute_cost: 0.0,
            final_state: StockState::default(),
        };
    };
    let c: Vec<f64> = traj.states.iter().map(|x| x.c).collect();
    let t: Vec<f64> = traj.states.iter().map(|x| x.t).collect();
    let u: Vec<f64> = traj.states.iter().map(|x| x.u).collect();
    let i_c = first_extreme(&c, |a, b| a > b);
    let i_t = first_extreme(&t, |a, b| a < b);
    let i_u = first_extreme(&u, |a, b| a > b);
    let active = traj.guards.iter().filter(|g| g.b3_active).count();
    let integral: f64 = traj
        .times
        .windows(2)
        .zip(u.windows(2))
        .map(|(tw, uw)| 0.5 * (tw[1] - tw[0]) * (uw[0] + uw[1]))
        .sum();
    AnalysisReport {
        positive_fraction: trace.positive_fraction,
        peak_c: c[i_c],
        min_t: t[i_t],
        min_t_time: traj.times[i_t],
        trust_collapse_time: trust_collapse_time(traj, &cfg.collapse),
        u_peak: u[i_u],
        u_peak_time: traj.times[i_u],
        guard_active_fraction: active as f64 / traj.len() as f64,
        cumulative_compute_cost: cfg.cost_rate * integral,
        final_state,
    }
}

#[cfg(test)]
mod tests {
    use crate::analysis::evaluate;
    use crate::model::RateParameters;
    use crate::scenario::{builtin_baseline, Schedule};

    #[test]
    fn constant_trajectory() {
        let mut sc = builtin_baseline();
        sc.rates = RateParameters {
            alpha1: 0.0,
            beta1: 0.0,
            alpha2: 0.0,
            alpha3: 0.0,
            beta2: 0.0,
            gamma1: 0.0,
            gamma2: 0.0,
            delta1: 0.0,
            delta2: 0.0,
            k1: 0.0,
            k2: 0.0,
            k3: 0.0,
            theta1: 0.0,
            theta2: 0.0,
            theta3: 0.0,
            ..RateParameters::default()
        };
        sc.schedules.sigma_env = Schedule::constant(0.35);
        let run = evaluate(&sc).unwrap();
        let r = &run.report;
        assert_eq!(r.peak_c, sc.initial.c);
        assert_eq!(r.trust_collapse_time, None);
        assert_eq!(r.u_peak_time, 0.0);
        assert_eq!(r.min_t_time, 0.0);
        assert_eq!(r.guard_active_fraction, 0.0);
        assert!((r.cumulative_compute_cost - 0.2).abs() < 1e-12);
        assert_eq!(r.final_state, sc.initial);
    }

    #[test]
    fn spike_drives_collapse_after_authority_peak() {
        let run = evaluate(&builtin_baseline()).unwrap();
        let r = &run.report;
        let collapse = r.trust_collapse_time.expect("trust collapses after the spike");
        assert!((0.5..=1.0).contains(&collapse), "{collapse}");
        assert!(r.u_peak_time < collapse + 0.25);
        assert_eq!(r.positive_fraction, run.trace.positive_fraction);
    }

    #[test]
    fn fractions_in_range() {
        let run = evaluate(&builtin_baseline()).unwrap();
        let r = &run.report;
        assert!((0.0..=1.0).contains(&r.positive_fraction));
        assert!((0.0..=1.0).contains(&r.guard_active_fraction));
        assert!((0.0..=1.0).contains(&r.u_peak_time));
    }
}
