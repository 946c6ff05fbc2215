//! Fixed-step integration of the hybrid system.
//!
//! Each step first re-evaluates the B3 guard on the pre-step state, then
//! advances the continuous stocks with the guard held fixed, and finally
//! projects the result back onto the unit cube. Exogenous schedules are
//! sampled at every stage time.

use serde::{Deserialize, Serialize};

use crate::model::{
    clamp_state, evaluate_flows, update_guard, AuxiliaryValues, ClampFlags, ExogenousInputs,
    GuardState, StockDerivatives, StockState, Violation, Violations,
};
use crate::scenario::Scenario;

/// Upper bound on steps per run.
pub const MAX_STEPS: usize = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Euler,
    #[default]
    Rk4,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euler" => Ok(Method::Euler),
            "rk4" => Ok(Method::Rk4),
            other => Err(format!("unknown method `{other}` (expected euler or rk4)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub method: Method,
    /// Step size in normalized window units.
    pub dt: f64,
    /// End time; 1.0 is one full planning window.
    pub horizon: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::Rk4,
            dt: 0.01,
            horizon: 1.0,
        }
    }
}

impl SolverConfig {
    pub fn new(method: Method, dt: f64, horizon: f64) -> Self {
        Self {
            method,
            dt,
            horizon,
        }
    }

    /// Number of steps covering the horizon.
    pub fn steps(&self) -> Result<usize, Violations> {
        self.validate()?;
        Ok((self.horizon / self.dt).round() as usize)
    }

    pub fn validate(&self) -> Result<(), Violations> {
        let mut out = Vec::new();
        if !(self.dt.is_finite() && self.dt > 0.0) {
            out.push(Violation::new("solver.dt", "dt must be > 0"));
        }
        if !(self.horizon.is_finite() && self.horizon >= 0.0) {
            out.push(Violation::new("solver.horizon", "horizon must be ≥ 0"));
        }
        if out.is_empty() && self.horizon > 0.0 {
            let n = self.horizon / self.dt;
            if self.dt > self.horizon {
                out.push(Violation::new("solver.dt", "dt must not exceed horizon"));
            } else if n > MAX_STEPS as f64 {
                out.push(Violation::new("solver.dt", "horizon/dt exceeds the step limit"));
            } else if (n - n.round()).abs() > 1e-9 * n.max(1.0) {
                out.push(Violation::new(
                    "solver.dt",
                    "horizon must be an integer multiple of dt",
                ));
            }
        }
        Violations(out).into_result()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntegrationError {
    #[error("non-finite value at t = {time}: parameters blow up the dynamics")]
    NonFinite { time: f64 },
    #[error("invalid solver configuration: {0}")]
    Config(Violations),
    #[error("resample needs at least 2 points, got {0}")]
    ResampleTooFew(usize),
}

impl From<Violations> for IntegrationError {
    fn from(v: Violations) -> Self {
        IntegrationError::Config(v)
    }
}

/// Time-indexed record of one simulation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StockState>,
    pub inputs: Vec<ExogenousInputs>,
    pub aux: Vec<AuxiliaryValues>,
    pub flows: Vec<StockDerivatives>,
    pub guards: Vec<GuardState>,
    pub clamp_flags: Vec<ClampFlags>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> Option<&StockState> {
        self.states.last()
    }

    /// Column of one stock over time.
    pub fn series(&self, stock: crate::model::Stock) -> Vec<f64> {
        self.states.iter().map(|x| x.get(stock)).collect()
    }

    fn push(&mut self, time: f64, state: StockState, guard: GuardState, flags: ClampFlags, sc: &Scenario) {
        let inputs = sc.schedules.inputs_at(time);
        let (aux, flows) = evaluate_flows(&state, &inputs, &sc.rates, guard, &sc.safety);
        self.times.push(time);
        self.states.push(state);
        self.inputs.push(inputs);
        self.aux.push(aux);
        self.flows.push(flows);
        self.guards.push(guard);
        self.clamp_flags.push(flags);
    }

    fn select(&self, idx: &[usize]) -> Trajectory {
        Trajectory {
            times: idx.iter().map(|&i| self.times[i]).collect(),
            states: idx.iter().map(|&i| self.states[i]).collect(),
            inputs: idx.iter().map(|&i| self.inputs[i]).collect(),
            aux: idx.iter().map(|&i| self.aux[i]).collect(),
            flows: idx.iter().map(|&i| self.flows[i]).collect(),
            guards: idx.iter().map(|&i| self.guards[i]).collect(),
            clamp_flags: idx.iter().map(|&i| self.clamp_flags[i]).collect(),
        }
    }
}

fn rate(state: &StockState, guard: GuardState, time: f64, sc: &Scenario) -> StockDerivatives {
    let inputs = sc.schedules.inputs_at(time);
    evaluate_flows(state, &inputs, &sc.rates, guard, &sc.safety).1
}

fn finite(d: StockDerivatives, time: f64) -> Result<StockDerivatives, IntegrationError> {
    if d.is_finite() {
        Ok(d)
    } else {
        Err(IntegrationError::NonFinite { time })
    }
}

/// One step over `[t, t + dt]`; returns the clamped new state, the guard
/// that governed the step, and which stocks were clamped.
pub fn step(
    state: &StockState,
    guard: GuardState,
    t: f64,
    scenario: &Scenario,
    config: &SolverConfig,
) -> Result<(StockState, GuardState, ClampFlags), IntegrationError> {
    let guard = update_guard(state, guard, &scenario.safety);
    let dt = config.dt;
    let increment = match config.method {
        Method::Euler => finite(rate(state, guard, t, scenario), t)?,
        Method::Rk4 => {
            let half = t + 0.5 * dt;
            let k1 = finite(rate(state, guard, t, scenario), t)?;
            let k2 = finite(rate(&state.advanced(&k1, 0.5 * dt), guard, half, scenario), half)?;
            let k3 = finite(rate(&state.advanced(&k2, 0.5 * dt), guard, half, scenario), half)?;
            let k4 = finite(rate(&state.advanced(&k3, dt), guard, t + dt, scenario), t + dt)?;
            StockDerivatives::rk4_blend(&k1, &k2, &k3, &k4)
        }
    };
    let next = state.advanced(&increment, dt);
    if !next.is_finite() {
        return Err(IntegrationError::NonFinite { time: t + dt });
    }
    let (clamped, flags) = clamp_state(&next);
    Ok((clamped, guard, flags))
}

/// Runs the scenario with its own solver settings.
pub fn simulate(scenario: &Scenario) -> Result<Trajectory, IntegrationError> {
    simulate_with(scenario, &scenario.solver)
}

pub fn simulate_with(scenario: &Scenario, config: &SolverConfig) -> Result<Trajectory, IntegrationError> {
    let n = config.steps()?;
    let mut traj = Trajectory::default();
    let mut state = scenario.initial;
    if !state.is_finite() {
        return Err(IntegrationError::NonFinite { time: 0.0 });
    }
    let mut guard = GuardState::INACTIVE;
    let mut flags = ClampFlags::NONE;
    for i in 0..=n {
        let t = i as f64 * config.dt;
        let current = update_guard(&state, guard, &scenario.safety);
        traj.push(t, state, current, flags, scenario);
        if i == n {
            break;
        }
        let (next, _, f) = step(&state, guard, t, scenario, config)?;
        state = next;
        guard = current;
        flags = f;
    }
    Ok(traj)
}

/// Evenly thins a trajectory to `n` samples, keeping both end points.
pub fn resample(traj: &Trajectory, n: usize) -> Result<Trajectory, IntegrationError> {
    if n < 2 {
        return Err(IntegrationError::ResampleTooFew(n));
    }
    let len = traj.len();
    if n >= len {
        return Ok(traj.clone());
    }
    let idx: Vec<usize> = (0..n)
        .map(|k| ((k * (len - 1)) as f64 / (n - 1) as f64).round() as usize)
        .collect();
    Ok(traj.select(&idx))
}
