#![allow(dead_code)]

use colearn_core::integrator::Method;
use colearn_core::model::PgMode;
use colearn_core::scenario::{Schedule, ScheduleSegment};
use colearn_core::{builtin_baseline, Scenario, StockState};
use rand::Rng;

fn unit<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(0.0..=1.0)
}

fn schedule<R: Rng>(rng: &mut R) -> Schedule {
    let n = rng.gen_range(1..=3);
    let mut times: Vec<f64> = (1..n).map(|_| rng.gen_range(0.05..0.95)).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let mut segments = vec![ScheduleSegment { start_time: 0.0, value: unit(rng) }];
    segments.extend(times.into_iter().map(|t| ScheduleSegment { start_time: t, value: unit(rng) }));
    Schedule { segments }
}

/// A random scenario satisfying every validation rule, at dt = 0.01 over one window.
pub fn random_scenario<R: Rng>(rng: &mut R, label: usize) -> Scenario {
    let mut sc = builtin_baseline();
    sc.label = format!("fuzz-{label}");
    sc.initial = StockState::new(unit(rng), unit(rng), unit(rng), unit(rng), unit(rng), unit(rng));
    let base = sc.rates;
    let mut scale = |v: f64| v * rng.gen_range(0.0..3.0);
    sc.rates.alpha1 = scale(base.alpha1);
    sc.rates.beta1 = scale(base.beta1);
    sc.rates.alpha2 = scale(base.alpha2);
    sc.rates.alpha3 = scale(base.alpha3);
    sc.rates.beta2 = scale(base.beta2);
    sc.rates.gamma1 = scale(base.gamma1);
    sc.rates.gamma2 = scale(base.gamma2);
    sc.rates.delta1 = scale(base.delta1);
    sc.rates.delta2 = scale(base.delta2);
    sc.rates.k1 = scale(base.k1);
    sc.rates.k2 = scale(base.k2);
    sc.rates.k3 = scale(base.k3);
    sc.rates.theta1 = scale(base.theta1);
    sc.rates.theta2 = scale(base.theta2);
    sc.rates.theta3 = scale(base.theta3);
    sc.rates.u_ref = unit(rng);
    sc.rates.u_slew = rng.gen_range(0.05..2.0);
    sc.rates.pg_mode = if rng.gen_bool(0.5) { PgMode::Literal } else { PgMode::ExpectationWeighted };
    sc.safety.c_safe = rng.gen_range(0.2..=1.0);
    sc.safety.hysteresis = rng.gen_range(0.01..0.5) * sc.safety.c_safe;
    sc.safety.r_safe = rng.gen_range(0.01..1.0);
    sc.safety.rho_suppress = rng.gen_range(0.0..0.99);
    sc.proportionality.w_u = unit(rng);
    sc.proportionality.w_as = unit(rng);
    sc.proportionality.c0 = unit(rng);
    sc.proportionality.c_u = unit(rng);
    sc.proportionality.legal_threshold = rng.gen_range(0.05..=1.0);
    let w = [unit(rng) + 0.01, unit(rng) + 0.01, unit(rng) + 0.01];
    let total: f64 = w.iter().sum();
    sc.dq_weights.w_h = w[0] / total;
    sc.dq_weights.w_a = w[1] / total;
    sc.dq_weights.w_s = 1.0 - sc.dq_weights.w_h - sc.dq_weights.w_a;
    sc.dq_weights.w_c = unit(rng);
    sc.solver.method = if rng.gen_bool(0.5) { Method::Euler } else { Method::Rk4 };
    sc.schedules.sigma_env = schedule(rng);
    sc.schedules.explanation_quality = schedule(rng);
    sc.schedules.annotation_quality = schedule(rng);
    sc.schedules.task_rate = schedule(rng);
    sc.validate().expect("generator produces valid scenarios");
    sc
}

/// Splits CSV text into a header and numeric rows.
pub fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines
        .map(|l| l.split(',').map(|f| f.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}
