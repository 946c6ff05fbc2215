//! Time-resolved proportionality assessment and decision quality.
//!
//! Military advantage and collateral damage are dimensionless model
//! quantities. Advantage is partly authority-driven; collateral exposure
//! scales with environmental uncertainty and is amplified by authority, so
//! retracting autonomy caps it at `sigma_env * c0` but never removes it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::integrator::Trajectory;
use crate::model::{check_nonneg, check_unit, StockState, Violation, Violations};
use crate::scenario::Schedule;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProportionalityParams {
    /// Authority weight in military advantage.
    pub w_u: f64,
    /// Weight of the competence-awareness product in military advantage.
    pub w_as: f64,
    /// Baseline collateral exposure per unit uncertainty.
    pub c0: f64,
    /// Authority amplification of collateral exposure.
    pub c_u: f64,
    /// Minimum positive fraction required to proceed.
    pub legal_threshold: f64,
}

impl Default for ProportionalityParams {
    fn default() -> Self {
        Self {
            w_u: 0.6,
            w_as: 0.4,
            c0: 0.25,
            c_u: 0.8,
            legal_threshold: 0.5,
        }
    }
}

impl ProportionalityParams {
    pub fn validate(&self) -> Result<(), Violations> {
        let mut out = Vec::new();
        for (name, v) in [
            ("w_u", self.w_u),
            ("w_as", self.w_as),
            ("c0", self.c0),
            ("c_u", self.c_u),
        ] {
            check_nonneg(&mut out, format!("proportionality.{name}"), name, v);
        }
        if !(self.legal_threshold > 0.0 && self.legal_threshold <= 1.0) {
            out.push(Violation::new(
                "proportionality.legal_threshold",
                "legal_threshold must lie in (0, 1]",
            ));
        }
        Violations(out).into_result()
    }
}

/// Weights of the collaborative decision-quality metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecisionQualityWeights {
    pub w_h: f64,
    pub w_a: f64,
    pub w_s: f64,
    /// Fraction of quality lost at full cognitive load.
    pub w_c: f64,
}

impl Default for DecisionQualityWeights {
    fn default() -> Self {
        Self {
            w_h: 0.4,
            w_a: 0.3,
            w_s: 0.3,
            w_c: 0.5,
        }
    }
}

impl DecisionQualityWeights {
    pub fn validate(&self) -> Result<(), Violations> {
        let mut out = Vec::new();
        for (name, v) in [("w_h", self.w_h), ("w_a", self.w_a), ("w_s", self.w_s)] {
            check_nonneg(&mut out, format!("dq_weights.{name}"), name, v);
        }
        check_unit(&mut out, "dq_weights.w_c".into(), "w_c", self.w_c);
        if ((self.w_h + self.w_a + self.w_s) - 1.0).abs() > 1e-9 {
            out.push(Violation::new("dq_weights", "w_h + w_a + w_s must equal 1"));
        }
        Violations(out).into_result()
    }
}

pub fn military_advantage(state: &StockState, p: &ProportionalityParams) -> f64 {
    p.w_u * state.u + p.w_as * state.a * state.s
}

pub fn collateral_damage(state: &StockState, sigma_env: f64, p: &ProportionalityParams) -> f64 {
    sigma_env * (p.c0 + p.c_u * state.u)
}

pub fn decision_quality(state: &StockState, w: &DecisionQualityWeights) -> f64 {
    (w.w_h * state.h + w.w_a * state.a + w.w_s * state.s) * (1.0 - w.w_c * state.c)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProportionalityTrace {
    pub times: Vec<f64>,
    pub ma: Vec<f64>,
    pub cd: Vec<f64>,
    pub score: Vec<f64>,
    /// Share of samples with a strictly positive score.
    pub positive_fraction: f64,
}

impl ProportionalityTrace {
    /// Builds a trace from per-sample advantage and damage.
    pub fn from_parts(times: Vec<f64>, ma: Vec<f64>, cd: Vec<f64>) -> Self {
        let score: Vec<f64> = ma.iter().zip(&cd).map(|(m, c)| m - c).collect();
        let positive_fraction = positive_fraction(&score);
        Self {
            times,
            ma,
            cd,
            score,
            positive_fraction,
        }
    }
}

/// `count(score > 0) / count`; zero for an empty series.
pub fn positive_fraction(score: &[f64]) -> f64 {
    if score.is_empty() {
        return 0.0;
    }
    score.iter().filter(|s| **s > 0.0).count() as f64 / score.len() as f64
}

pub fn score_trajectory(
    traj: &Trajectory,
    sigma_schedule: &Schedule,
    p: &ProportionalityParams,
) -> ProportionalityTrace {
    let (ma, cd) = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, x)| {
            (
                military_advantage(x, p),
                collateral_damage(x, sigma_schedule.value_at(t), p),
            )
        })
        .unzip();
    ProportionalityTrace::from_parts(traj.times.clone(), ma, cd)
}

/// Legal outcome, ordered from worst to best.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    ReplanOrAbort,
    Delay,
    Proceed,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::ReplanOrAbort => "replan_or_abort",
            Outcome::Delay => "delay",
            Outcome::Proceed => "proceed",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegalVerdict {
    pub outcome: Outcome,
    pub positive_fraction: f64,
    pub threshold: f64,
}

/// Proceed at or above the threshold, replan below half of it, delay otherwise.
pub fn assess_fraction(positive_fraction: f64, p: &ProportionalityParams) -> LegalVerdict {
    let threshold = p.legal_threshold;
    let outcome = if positive_fraction >= threshold {
        Outcome::Proceed
    } else if positive_fraction < threshold / 2.0 {
        Outcome::ReplanOrAbort
    } else {
        Outcome::Delay
    };
    LegalVerdict {
        outcome,
        positive_fraction,
        threshold,
    }
}

pub fn assess(trace: &ProportionalityTrace, p: &ProportionalityParams) -> LegalVerdict {
    assess_fraction(trace.positive_fraction, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn baseline_values() {
        let x = StockState::default();
        let p = ProportionalityParams::default();
        assert_abs_diff_eq!(military_advantage(&x, &p), 0.16, epsilon = 1e-12);
        assert_abs_diff_eq!(collateral_damage(&x, 0.35, &p), 0.1435, epsilon = 1e-12);
        let dq = decision_quality(&x, &DecisionQualityWeights::default());
        assert_abs_diff_eq!(dq, 0.33575, epsilon = 1e-12);
    }

    #[test]
    fn advantage_bounds() {
        let p = ProportionalityParams::default();
        let zero = StockState::new(0.5, 0.0, 0.0, 0.5, 0.0, 0.5);
        assert_eq!(military_advantage(&zero, &p), 0.0);
        let full = StockState::new(0.5, 1.0, 1.0, 0.5, 1.0, 0.5);
        assert_eq!(military_advantage(&full, &p), p.w_u + p.w_as);
    }

    #[test]
    fn collateral_cap() {
        let p = ProportionalityParams::default();
        let x = StockState {
            u: 0.0,
            ..StockState::default()
        };
        assert_eq!(collateral_damage(&x, 0.0, &p), 0.0);
        assert_eq!(collateral_damage(&x, 0.35, &p), 0.35 * 0.25);
    }

    #[test]
    fn decision_quality_edges() {
        let w = DecisionQualityWeights::default();
        let x = StockState {
            c: 0.0,
            ..StockState::default()
        };
        assert_abs_diff_eq!(decision_quality(&x, &w), 0.395, epsilon = 1e-12);
        let w1 = DecisionQualityWeights { w_c: 1.0, ..w };
        let x = StockState::new(1.0, 1.0, 1.0, 0.5, 0.5, 1.0);
        assert_eq!(decision_quality(&x, &w1), 0.0);
    }

    #[test]
    fn counting_contract() {
        let score: Vec<f64> = (0..100).map(|i| if i < 44 { 0.01 } else { -0.01 }).collect();
        assert_eq!(positive_fraction(&score), 0.44);
        assert_eq!(positive_fraction(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn verdicts() {
        let p = ProportionalityParams::default();
        assert_eq!(assess_fraction(0.44, &p).outcome, Outcome::Delay);
        assert_eq!(assess_fraction(1.0, &p).outcome, Outcome::Proceed);
        assert_eq!(assess_fraction(0.5, &p).outcome, Outcome::Proceed);
        assert_eq!(assess_fraction(0.10, &p).outcome, Outcome::ReplanOrAbort);
        assert_eq!(assess_fraction(0.25, &p).outcome, Outcome::Delay);
    }

    #[test]
    fn weight_validation() {
        assert!(DecisionQualityWeights::default().validate().is_ok());
        let bad = DecisionQualityWeights {
            w_h: 0.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(ProportionalityParams {
            legal_threshold: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    fn unit() -> impl Strategy<Value = f64> {
        0.0..=1.0f64
    }

    proptest! {
        #[test]
        fn score_is_advantage_minus_damage(u in unit(), a in unit(), s in unit(), sig in unit()) {
            let p = ProportionalityParams::default();
            let x = StockState { u, a, s, ..StockState::default() };
            let trace = ProportionalityTrace::from_parts(
                vec![0.0],
                vec![military_advantage(&x, &p)],
                vec![collateral_damage(&x, sig, &p)],
            );
            prop_assert_eq!(trace.score[0], trace.ma[0] - trace.cd[0]);
        }

        #[test]
        fn sensitivities(u in 0.01..0.99f64, a in unit(), s in unit(), sig in 0.01..0.99f64) {
            let p = ProportionalityParams::default();
            let x = StockState { u, a, s, ..StockState::default() };
            let h = 1e-6;
            let up = StockState { u: u + h, ..x };
            let dn = StockState { u: u - h, ..x };
            let dma = (military_advantage(&up, &p) - military_advantage(&dn, &p)) / (2.0 * h);
            prop_assert!((dma - p.w_u).abs() < 1e-8);
            let dcd = (collateral_damage(&x, sig + h, &p) - collateral_damage(&x, sig - h, &p)) / (2.0 * h);
            prop_assert!((dcd - (p.c0 + p.c_u * u)).abs() < 1e-8);
            prop_assert!(collateral_damage(&up, sig, &p) >= collateral_damage(&x, sig, &p));
            let clamped = StockState { u: 0.0, ..x };
            prop_assert!(collateral_damage(&clamped, sig, &p) <= collateral_damage(&x, sig, &p));
        }

        #[test]
        fn assess_is_monotone(f1 in unit(), f2 in unit()) {
            let p = ProportionalityParams::default();
            let (lo, hi) = if f1 <= f2 { (f1, f2) } else { (f2, f1) };
            prop_assert!(assess_fraction(lo, &p).outcome <= assess_fraction(hi, &p).outcome);
        }
    }
}
