//! Stocks, flows and the discrete guard/limit mechanics of the co-learning model.
//!
//! Six stocks describe the team at one instant: human expertise `h`, AI
//! competence `a`, shared situation awareness `s`, trust calibration `t`, AI
//! authority `u` and human cognitive load `c`. All are dimensionless shares in
//! `[0, 1]`, and all rates are expressed per normalized mission window.
//!
//! The five feedback loops map onto the flow terms as follows:
//!
//! | loop | mechanism |
//! |------|-----------|
//! | R1 co-learning | explanation/annotation quality scale the knowledge flows `f_ha`, `f_ah` |
//! | B1 adjustable autonomy | `-k3 * sigma_env` brake in the authority flow |
//! | B2 multi-layered control | supervisory load above `u_ref` in the load flow, slew limit on authority |
//! | R2 trust-performance | delegation feeds learning through `alpha3 * u * (1 - a)` |
//! | B3 cognitive-load safety | guard forces authority down and suppresses the task rate |

use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifies one of the six stocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stock {
    H,
    A,
    S,
    T,
    U,
    C,
}

impl Stock {
    pub const ALL: [Stock; 6] = [Stock::H, Stock::A, Stock::S, Stock::T, Stock::U, Stock::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Stock::H => "h",
            Stock::A => "a",
            Stock::S => "s",
            Stock::T => "t",
            Stock::U => "u",
            Stock::C => "c",
        }
    }
}

impl fmt::Display for Stock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The six co-learning stocks at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StockState {
    /// Human expertise: mission-specific knowledge of the operator.
    pub h: f64,
    /// AI competence: accuracy and generalization in the current context.
    pub a: f64,
    /// Shared situation awareness: alignment of the two mental models.
    pub s: f64,
    /// Trust calibration of the operator in the AI agent.
    pub t: f64,
    /// Delegated AI authority (adjustable autonomy level).
    pub u: f64,
    /// Cognitive load experienced by the operator.
    pub c: f64,
}

impl StockState {
    pub const fn new(h: f64, a: f64, s: f64, t: f64, u: f64, c: f64) -> Self {
        Self { h, a, s, t, u, c }
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.h, self.a, self.s, self.t, self.u, self.c]
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        Self::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }

    pub fn get(&self, stock: Stock) -> f64 {
        self.to_array()[stock.index()]
    }

    pub fn set(&mut self, stock: Stock, value: f64) {
        let mut v = self.to_array();
        v[stock.index()] = value;
        *self = Self::from_array(v);
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    pub fn in_unit_cube(&self) -> bool {
        self.to_array().iter().all(|x| (0.0..=1.0).contains(x))
    }

    /// `self + scale * d`, component-wise.
    pub fn advanced(&self, d: &StockDerivatives, scale: f64) -> Self {
        let x = self.to_array();
        let dx = d.to_array();
        Self::from_array(std::array::from_fn(|i| x[i] + scale * dx[i]))
    }
}

impl Default for StockState {
    /// The mission-planning cell at the start of the window.
    fn default() -> Self {
        Self::new(0.50, 0.40, 0.25, 0.40, 0.20, 0.30)
    }
}

/// Exogenous inputs sampled from the scenario schedules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExogenousInputs {
    pub sigma_env: f64,
    pub explanation_quality: f64,
    pub annotation_quality: f64,
    /// Nominal task rate before any safety suppression.
    pub task_rate: f64,
}

impl Default for ExogenousInputs {
    fn default() -> Self {
        Self {
            sigma_env: 0.35,
            explanation_quality: 0.75,
            annotation_quality: 0.65,
            task_rate: 0.5,
        }
    }
}

/// How the trust flow measures the AI's performance gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PgMode {
    /// `a - h`
    Literal,
    /// `a - t * h`: competence relative to the trust-weighted expectation.
    #[default]
    ExpectationWeighted,
}

/// Gains of the six flow equations plus the B2 oversight settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RateParameters {
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    /// Delegation-learning gain (R2).
    pub alpha3: f64,
    pub beta2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub theta1: f64,
    pub theta2: f64,
    /// Supervisory-load gain above `u_ref` (B2).
    pub theta3: f64,
    /// Authority level above which oversight adds load.
    pub u_ref: f64,
    /// Maximum |du/dt| per window: accountability-review delay (B2).
    pub u_slew: f64,
    pub pg_mode: PgMode,
}

impl Default for RateParameters {
    fn default() -> Self {
        Self {
            alpha1: 0.30,
            beta1: 0.10,
            alpha2: 2.2,
            alpha3: 0.35,
            beta2: 2.0,
            gamma1: 3.928,
            gamma2: 4.5,
            delta1: 6.25,
            delta2: 4.8,
            k1: 0.45,
            k2: 0.35,
            k3: 0.25,
            theta1: 0.30,
            theta2: 0.20,
            theta3: 0.15,
            u_ref: 0.5,
            u_slew: 0.9,
            pg_mode: PgMode::ExpectationWeighted,
        }
    }
}

impl RateParameters {
    /// Names and values of the non-negative gains, in declaration order.
    pub fn gains(&self) -> [(&'static str, f64); 15] {
        [
            ("alpha1", self.alpha1),
            ("beta1", self.beta1),
            ("alpha2", self.alpha2),
            ("alpha3", self.alpha3),
            ("beta2", self.beta2),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("k1", self.k1),
            ("k2", self.k2),
            ("k3", self.k3),
            ("theta1", self.theta1),
            ("theta2", self.theta2),
            ("theta3", self.theta3),
        ]
    }
}

/// Cognitive-load safety loop (B3) configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SafetyPolicy {
    /// Load above which the guard activates.
    pub c_safe: f64,
    /// The guard releases only once load drops below `c_safe - hysteresis`.
    pub hysteresis: f64,
    /// Authority must fall at least this fast while the guard is active.
    pub r_safe: f64,
    /// Task-rate multiplier while the guard is active.
    pub rho_suppress: f64,
}

impl Default for SafetyPolicy {
    fn default() -> Self {
        Self {
            c_safe: 0.8,
            hysteresis: 0.05,
            r_safe: 0.2,
            rho_suppress: 0.5,
        }
    }
}

/// Intermediate flow quantities, recorded alongside each state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AuxiliaryValues {
    pub f_ha: f64,
    pub f_ah: f64,
    pub f_sync: f64,
    pub delta_obs: f64,
    pub pg: f64,
    pub opacity: f64,
    pub oversight_load: f64,
    pub tr_eff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GuardState {
    pub b3_active: bool,
}

impl GuardState {
    pub const INACTIVE: GuardState = GuardState { b3_active: false };
    pub const ACTIVE: GuardState = GuardState { b3_active: true };
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StockDerivatives {
    pub dh: f64,
    pub da: f64,
    pub ds: f64,
    pub dt_trust: f64,
    pub du: f64,
    pub dc: f64,
}

impl StockDerivatives {
    pub fn to_array(self) -> [f64; 6] {
        [self.dh, self.da, self.ds, self.dt_trust, self.du, self.dc]
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        Self {
            dh: v[0],
            da: v[1],
            ds: v[2],
            dt_trust: v[3],
            du: v[4],
            dc: v[5],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    /// Classical RK4 combination `(k1 + 2 k2 + 2 k3 + k4) / 6`.
    pub fn rk4_blend(k1: &Self, k2: &Self, k3: &Self, k4: &Self) -> Self {
        let (a, b, c, d) = (k1.to_array(), k2.to_array(), k3.to_array(), k4.to_array());
        Self::from_array(std::array::from_fn(|i| {
            (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]) / 6.0
        }))
    }
}

pub fn compute_auxiliaries(
    state: &StockState,
    inputs: &ExogenousInputs,
    params: &RateParameters,
    guard: GuardState,
    policy: &SafetyPolicy,
) -> AuxiliaryValues {
    let f_ha = inputs.explanation_quality * state.a;
    let f_ah = inputs.annotation_quality * state.h;
    let pg = match params.pg_mode {
        PgMode::Literal => state.a - state.h,
        PgMode::ExpectationWeighted => state.a - state.t * state.h,
    };
    let suppression = if guard.b3_active {
        policy.rho_suppress
    } else {
        1.0
    };
    AuxiliaryValues {
        f_ha,
        f_ah,
        f_sync: (f_ha + f_ah) / 2.0,
        delta_obs: inputs.sigma_env * (1.0 - state.s),
        pg,
        opacity: 1.0 - inputs.explanation_quality,
        oversight_load: params.theta3 * (state.u - params.u_ref).max(0.0),
        tr_eff: inputs.task_rate * suppression,
    }
}

/// Unlimited authority drive `k1 t + k2 s - k3 sigma_env`, before the B3
/// override and the slew limit.
pub fn authority_drive(state: &StockState, inputs: &ExogenousInputs, params: &RateParameters) -> f64 {
    params.k1 * state.t + params.k2 * state.s - params.k3 * inputs.sigma_env
}

/// Applies the B3 override and the B2 slew limit to a raw authority drive.
pub fn limit_authority_rate(
    du_raw: f64,
    params: &RateParameters,
    guard: GuardState,
    policy: &SafetyPolicy,
) -> f64 {
    let forced = if guard.b3_active {
        du_raw.min(-policy.r_safe)
    } else {
        du_raw
    };
    forced.clamp(-params.u_slew, params.u_slew)
}

pub fn derivatives(
    state: &StockState,
    aux: &AuxiliaryValues,
    inputs: &ExogenousInputs,
    params: &RateParameters,
    guard: GuardState,
    policy: &SafetyPolicy,
) -> StockDerivatives {
    let du_raw = authority_drive(state, inputs, params);
    StockDerivatives {
        dh: params.alpha1 * aux.f_ha - params.beta1 * state.c,
        da: params.alpha2 * aux.f_ah + params.alpha3 * state.u * (1.0 - state.a)
            - params.beta2 * inputs.sigma_env,
        ds: params.gamma1 * aux.f_sync - params.gamma2 * aux.delta_obs,
        dt_trust: params.delta1 * aux.pg - params.delta2 * aux.opacity,
        du: limit_authority_rate(du_raw, params, guard, policy),
        dc: params.theta1 * aux.tr_eff - params.theta2 * (1.0 - state.u) + aux.oversight_load,
    }
}

/// Auxiliaries and derivatives in one call.
pub fn evaluate_flows(
    state: &StockState,
    inputs: &ExogenousInputs,
    params: &RateParameters,
    guard: GuardState,
    policy: &SafetyPolicy,
) -> (AuxiliaryValues, StockDerivatives) {
    let aux = compute_auxiliaries(state, inputs, params, guard, policy);
    let d = derivatives(state, &aux, inputs, params, guard, policy);
    (aux, d)
}

/// Hysteretic B3 guard transition.
pub fn update_guard(state: &StockState, guard: GuardState, policy: &SafetyPolicy) -> GuardState {
    let b3_active = if guard.b3_active {
        state.c >= policy.c_safe - policy.hysteresis
    } else {
        state.c > policy.c_safe
    };
    GuardState { b3_active }
}

/// Which stocks were projected back onto `[0, 1]` after a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct ClampFlags(u8);

impl ClampFlags {
    pub const NONE: ClampFlags = ClampFlags(0);

    pub fn insert(&mut self, stock: Stock) {
        self.0 |= 1 << stock.index();
    }

    pub fn contains(self, stock: Stock) -> bool {
        self.0 & (1 << stock.index()) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Stock> {
        Stock::ALL.into_iter().filter(move |s| self.contains(*s))
    }
}

pub fn clamp_state(state: &StockState) -> (StockState, ClampFlags) {
    let mut flags = ClampFlags::NONE;
    let mut out = *state;
    for stock in Stock::ALL {
        let v = state.get(stock);
        let clamped = v.clamp(0.0, 1.0);
        if clamped != v {
            flags.insert(stock);
            out.set(stock, clamped);
        }
    }
    (out, flags)
}

/// A broken parameter constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Dotted path of the offending field, e.g. `rates.k3`.
    pub field: String,
    pub message: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Non-empty list of violations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct Violations(pub Vec<Violation>);

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Violations {
    pub fn into_result(self) -> Result<(), Violations> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(self)
        }
    }

    pub fn mentions(&self, text: &str) -> bool {
        self.0.iter().any(|v| v.message.contains(text))
    }
}

pub(crate) fn check_unit(out: &mut Vec<Violation>, field: String, name: &str, v: f64) {
    if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
        out.push(Violation::new(field, format!("{name} must lie in [0, 1]")));
    }
}

pub(crate) fn check_nonneg(out: &mut Vec<Violation>, field: String, name: &str, v: f64) {
    if !(v.is_finite() && v >= 0.0) {
        out.push(Violation::new(field, format!("{name} must be ≥ 0")));
    }
}

pub fn validate_parameters(params: &RateParameters, policy: &SafetyPolicy) -> Result<(), Violations> {
    let mut out = Vec::new();
    for (name, v) in params.gains() {
        check_nonneg(&mut out, format!("rates.{name}"), name, v);
    }
    check_unit(&mut out, "rates.u_ref".into(), "u_ref", params.u_ref);
    if !(params.u_slew.is_finite() && params.u_slew > 0.0) {
        out.push(Violation::new("rates.u_slew", "u_slew must be > 0"));
    }

    if !(policy.c_safe > 0.0 && policy.c_safe <= 1.0) {
        out.push(Violation::new("safety.c_safe", "c_safe must lie in (0, 1]"));
    }
    if !(policy.hysteresis > 0.0) {
        out.push(Violation::new("safety.hysteresis", "hysteresis must be > 0"));
    }
    if !(policy.hysteresis < policy.c_safe) {
        out.push(Violation::new("safety.hysteresis", "hysteresis < c_safe"));
    }
    if !(policy.r_safe.is_finite() && policy.r_safe > 0.0) {
        out.push(Violation::new("safety.r_safe", "r_safe must be > 0"));
    }
    if !(policy.rho_suppress >= 0.0 && policy.rho_suppress < 1.0) {
        out.push(Violation::new(
            "safety.rho_suppress",
            "rho_suppress must lie in [0, 1)",
        ));
    }
    Violations(out).into_result()
}

pub fn validate_inputs(inputs: &ExogenousInputs) -> Result<(), Violations> {
    let mut out = Vec::new();
    for (name, v) in [
        ("sigma_env", inputs.sigma_env),
        ("explanation_quality", inputs.explanation_quality),
        ("annotation_quality", inputs.annotation_quality),
        ("task_rate", inputs.task_rate),
    ] {
        check_unit(&mut out, format!("inputs.{name}"), name, v);
    }
    Violations(out).into_result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn baseline() -> (StockState, ExogenousInputs, RateParameters, SafetyPolicy) {
        (
            StockState::default(),
            ExogenousInputs::default(),
            RateParameters::default(),
            SafetyPolicy::default(),
        )
    }

    #[test]
    fn baseline_auxiliaries() {
        let (x, inp, p, pol) = baseline();
        let aux = compute_auxiliaries(&x, &inp, &p, GuardState::INACTIVE, &pol);
        assert_abs_diff_eq!(aux.f_ha, 0.30, epsilon = 1e-12);
        assert_abs_diff_eq!(aux.f_ah, 0.325, epsilon = 1e-12);
        assert_abs_diff_eq!(aux.f_sync, 0.3125, epsilon = 1e-12);
        assert_abs_diff_eq!(aux.delta_obs, 0.2625, epsilon = 1e-12);
        assert_abs_diff_eq!(aux.opacity, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(aux.pg, 0.20, epsilon = 1e-12);
        assert_eq!(aux.oversight_load, 0.0);
        assert_eq!(aux.tr_eff, 0.5);
    }

    #[test]
    fn literal_pg_mode() {
        let (x, inp, mut p, pol) = baseline();
        p.pg_mode = PgMode::Literal;
        let aux = compute_auxiliaries(&x, &inp, &p, GuardState::INACTIVE, &pol);
        assert_abs_diff_eq!(aux.pg, -0.10, epsilon = 1e-12);
    }

    #[test]
    fn perfect_channels() {
        let (mut x, mut inp, p, pol) = baseline();
        x.s = 1.0;
        inp.explanation_quality = 1.0;
        inp.annotation_quality = 0.0;
        let aux = compute_auxiliaries(&x, &inp, &p, GuardState::INACTIVE, &pol);
        assert_eq!(aux.f_ha, x.a);
        assert_eq!(aux.f_ah, 0.0);
        assert_eq!(aux.delta_obs, 0.0);
        assert_eq!(aux.opacity, 0.0);
    }

    #[test]
    fn suppressed_task_rate() {
        let (x, inp, p, pol) = baseline();
        let aux = compute_auxiliaries(&x, &inp, &p, GuardState::ACTIVE, &pol);
        assert_eq!(aux.tr_eff, 0.25);
    }

    #[test]
    fn oversight_load_above_reference() {
        let (mut x, inp, p, pol) = baseline();
        x.u = 0.7;
        let aux = compute_auxiliaries(&x, &inp, &p, GuardState::INACTIVE, &pol);
        assert_abs_diff_eq!(aux.oversight_load, 0.15 * 0.2, epsilon = 1e-15);
    }

    // Hand arithmetic at the baseline state: these values hold for both the
    // shipped gains and the originally listed gain set.
    fn check_hand_values(p: &RateParameters) {
        let (x, inp, _, pol) = baseline();
        let (_, d) = evaluate_flows(&x, &inp, p, GuardState::INACTIVE, &pol);
        assert_abs_diff_eq!(d.dh, 0.06, epsilon = 1e-12);
        assert_abs_diff_eq!(d.da, 0.057, epsilon = 1e-12);
        assert_abs_diff_eq!(d.ds, 0.04625, epsilon = 1e-12);
        assert_abs_diff_eq!(d.dt_trust, 0.05, epsilon = 1e-12);
        assert_abs_diff_eq!(d.du, 0.18, epsilon = 1e-12);
        assert_abs_diff_eq!(d.dc, -0.01, epsilon = 1e-12);
    }

    #[test]
    fn baseline_derivatives_default_gains() {
        check_hand_values(&RateParameters::default());
    }

    #[test]
    fn baseline_derivatives_slow_gain_set() {
        let p = RateParameters {
            alpha2: 0.30,
            alpha3: 0.10,
            beta2: 0.15,
            gamma1: 0.40,
            gamma2: 0.30,
            delta1: 0.50,
            delta2: 0.20,
            ..RateParameters::default()
        };
        check_hand_values(&p);
    }

    #[test]
    fn authority_flow_zero_drive() {
        let (mut x, mut inp, p, pol) = baseline();
        x.t = 0.0;
        x.s = 0.0;
        inp.sigma_env = 0.0;
        let (_, d) = evaluate_flows(&x, &inp, &p, GuardState::INACTIVE, &pol);
        assert_eq!(d.du, 0.0);
    }

    #[test]
    fn guard_forces_retraction() {
        let (x, inp, p, pol) = baseline();
        let (_, d) = evaluate_flows(&x, &inp, &p, GuardState::ACTIVE, &pol);
        assert_eq!(d.du, -0.2);
    }

    #[test]
    fn slew_clip() {
        let p = RateParameters::default();
        let pol = SafetyPolicy::default();
        assert_eq!(limit_authority_rate(2.0, &p, GuardState::INACTIVE, &pol), 0.9);
        assert_eq!(limit_authority_rate(-2.0, &p, GuardState::INACTIVE, &pol), -0.9);
    }

    #[test]
    fn guard_transitions() {
        let pol = SafetyPolicy::default();
        let at = |c: f64| StockState { c, ..StockState::default() };
        assert!(update_guard(&at(0.85), GuardState::INACTIVE, &pol).b3_active);
        assert!(!update_guard(&at(0.80), GuardState::INACTIVE, &pol).b3_active);
        assert!(update_guard(&at(0.78), GuardState::ACTIVE, &pol).b3_active);
        assert!(update_guard(&at(0.75), GuardState::ACTIVE, &pol).b3_active);
        assert!(!update_guard(&at(0.70), GuardState::ACTIVE, &pol).b3_active);
    }

    #[test]
    fn clamping() {
        let x = StockState::new(0.5, 0.4, 0.25, 0.4, 0.2, 0.3);
        assert_eq!(clamp_state(&x), (x, ClampFlags::NONE));

        let (y, f) = clamp_state(&StockState { u: 1.07, ..x });
        assert_eq!(y.u, 1.0);
        assert_eq!(f.iter().collect::<Vec<_>>(), vec![Stock::U]);

        let (y, f) = clamp_state(&StockState { c: -0.02, ..x });
        assert_eq!(y.c, 0.0);
        assert!(f.contains(Stock::C) && !f.contains(Stock::U));
    }

    #[test]
    fn validation() {
        let p = RateParameters::default();
        let pol = SafetyPolicy::default();
        assert!(validate_parameters(&p, &pol).is_ok());

        let bad = RateParameters { k3: -0.1, ..p };
        let err = validate_parameters(&bad, &pol).unwrap_err();
        assert!(err.mentions("k3 must be ≥ 0"));
        assert_eq!(err.0[0].field, "rates.k3");

        let bad = SafetyPolicy {
            hysteresis: 0.9,
            ..pol
        };
        assert!(validate_parameters(&p, &bad)
            .unwrap_err()
            .mentions("hysteresis < c_safe"));

        let bad = RateParameters {
            u_slew: 0.0,
            delta2: f64::NAN,
            ..p
        };
        let err = validate_parameters(&bad, &pol).unwrap_err();
        assert_eq!(err.0.len(), 2);
    }
}
