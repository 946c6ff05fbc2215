//! Loop-polarity diagnostics by central finite differences.

use std::fmt;

use serde::Serialize;

use crate::model::{
    authority_drive, evaluate_flows, limit_authority_rate, validate_parameters, ExogenousInputs,
    GuardState, Stock, StockState,
};
use crate::scenario::Scenario;

/// Default central-difference step.
pub const FD_STEP: f64 = 1e-6;

/// A differentiated quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Component {
    Dh,
    Da,
    Ds,
    DtTrust,
    DuRaw,
    Du,
    Dc,
    TrEff,
}

impl Component {
    pub const ALL: [Component; 8] = [
        Component::Dh,
        Component::Da,
        Component::Ds,
        Component::DtTrust,
        Component::DuRaw,
        Component::Du,
        Component::Dc,
        Component::TrEff,
    ];
}

/// A perturbed quantity: a stock or an exogenous input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    Stock(#[serde(serialize_with = "ser_stock")] Stock),
    SigmaEnv,
    ExplanationQuality,
    AnnotationQuality,
    TaskRate,
}

fn ser_stock<S: serde::Serializer>(s: &Stock, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(s.name())
}

impl Variable {
    pub const ALL: [Variable; 10] = [
        Variable::Stock(Stock::H),
        Variable::Stock(Stock::A),
        Variable::Stock(Stock::S),
        Variable::Stock(Stock::T),
        Variable::Stock(Stock::U),
        Variable::Stock(Stock::C),
        Variable::SigmaEnv,
        Variable::ExplanationQuality,
        Variable::AnnotationQuality,
        Variable::TaskRate,
    ];

    fn read(self, x: &StockState, inp: &ExogenousInputs) -> f64 {
        match self {
            Variable::Stock(s) => x.get(s),
            Variable::SigmaEnv => inp.sigma_env,
            Variable::ExplanationQuality => inp.explanation_quality,
            Variable::AnnotationQuality => inp.annotation_quality,
            Variable::TaskRate => inp.task_rate,
        }
    }

    fn write(self, x: &mut StockState, inp: &mut ExogenousInputs, v: f64) {
        match self {
            Variable::Stock(s) => x.set(s, v),
            Variable::SigmaEnv => inp.sigma_env = v,
            Variable::ExplanationQuality => inp.explanation_quality = v,
            Variable::AnnotationQuality => inp.annotation_quality = v,
            Variable::TaskRate => inp.task_rate = v,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Stock(s) => write!(f, "{s}"),
            Variable::SigmaEnv => f.write_str("sigma_env"),
            Variable::ExplanationQuality => f.write_str("explanation_quality"),
            Variable::AnnotationQuality => f.write_str("annotation_quality"),
            Variable::TaskRate => f.write_str("task_rate"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(v: f64, tol: f64) -> Sign {
        if v > tol {
            Sign::Positive
        } else if v < -tol {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolarityError {
    #[error("finite-difference step {0} underflows")]
    StepUnderflow(f64),
    #[error("{variable} = {value} is not interior for step {step}")]
    NotInterior { variable: Variable, value: f64, step: f64 },
}

/// Evaluates every component at one point.
fn components(
    x: &StockState,
    inp: &ExogenousInputs,
    sc: &Scenario,
    guard: GuardState,
) -> [f64; 8] {
    let (aux, d) = evaluate_flows(x, inp, &sc.rates, guard, &sc.safety);
    [
        d.dh,
        d.da,
        d.ds,
        d.dt_trust,
        authority_drive(x, inp, &sc.rates),
        d.du,
        d.dc,
        aux.tr_eff,
    ]
}

/// Sensitivity matrix: `values[c][v]` is ∂component/∂variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolarityMap {
    pub values: Vec<Vec<f64>>,
}

impl PolarityMap {
    pub fn get(&self, c: Component, v: Variable) -> f64 {
        let ci = Component::ALL.iter().position(|x| *x == c).unwrap();
        let vi = Variable::ALL.iter().position(|x| *x == v).unwrap();
        self.values[ci][vi]
    }

    pub fn sign(&self, c: Component, v: Variable) -> Sign {
        Sign::of(self.get(c, v), 1e-9)
    }
}

pub fn polarity_map_at(
    sc: &Scenario,
    state: &StockState,
    inputs: &ExogenousInputs,
    guard: GuardState,
    step: f64,
) -> Result<PolarityMap, PolarityError> {
    if !(step > f64::EPSILON) {
        return Err(PolarityError::StepUnderflow(step));
    }
    let mut values = vec![vec![0.0; Variable::ALL.len()]; Component::ALL.len()];
    for (vi, var) in Variable::ALL.into_iter().enumerate() {
        let v0 = var.read(state, inputs);
        if v0 - step < 0.0 || v0 + step > 1.0 {
            return Err(PolarityError::NotInterior {
                variable: var,
                value: v0,
                step,
            });
        }
        let (hi, lo) = (v0 + step, v0 - step);
        if hi == v0 || lo == v0 {
            return Err(PolarityError::StepUnderflow(step));
        }
        let eval = |v: f64| {
            let (mut x, mut inp) = (*state, *inputs);
            var.write(&mut x, &mut inp, v);
            components(&x, &inp, sc, guard)
        };
        let (fp, fm) = (eval(hi), eval(lo));
        for ci in 0..Component::ALL.len() {
            values[ci][vi] = (fp[ci] - fm[ci]) / (hi - lo);
        }
    }
    Ok(PolarityMap { values })
}

/// Sensitivities at `state` with the scenario's inputs at t = 0 and the guard off.
pub fn polarity_map(sc: &Scenario, state: &StockState) -> Result<PolarityMap, PolarityError> {
    polarity_map_at(sc, state, &sc.schedules.inputs_at(0.0), GuardState::INACTIVE, FD_STEP)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expectation {
    pub description: String,
    pub value: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopCheck {
    pub name: String,
    pub passed: bool,
    pub expectations: Vec<Expectation>,
}

fn expect(description: impl Into<String>, value: f64, passed: bool) -> Expectation {
    Expectation {
        description: description.into(),
        value,
        passed,
    }
}

fn finish(name: impl Into<String>, expectations: Vec<Expectation>) -> LoopCheck {
    LoopCheck {
        name: name.into(),
        passed: expectations.iter().all(|e| e.passed),
        expectations,
    }
}

/// Checks each feedback loop's polarity at the scenario's initial state and
/// validates the parameters. The parameter line comes first.
pub fn loop_checks(sc: &Scenario) -> Result<Vec<LoopCheck>, PolarityError> {
    let state = sc.initial;
    let inputs = sc.schedules.inputs_at(0.0);
    let map = polarity_map(sc, &state)?;
    let p = &sc.rates;
    let pol = &sc.safety;
    let mut out = Vec::new();

    let violations = validate_parameters(p, pol).err().map(|v| v.0).unwrap_or_default();
    out.push(finish(
        "parameters",
        if violations.is_empty() {
            vec![expect("all parameter constraints hold", 0.0, true)]
        } else {
            violations
                .iter()
                .map(|v| expect(v.message.clone(), 0.0, false))
                .collect()
        },
    ));

    let d = |c, v| map.get(c, v);
    let e = Variable::ExplanationQuality;
    let sig = Variable::SigmaEnv;
    let u = Variable::Stock(Stock::U);

    let r1 = vec![
        {
            let v = d(Component::Dh, e);
            expect("explanation_quality raises human learning", v, v > 0.0)
        },
        {
            let v = d(Component::DtTrust, e);
            expect("explanation_quality raises trust", v, v > 0.0)
        },
        {
            let v = d(Component::Da, Variable::AnnotationQuality);
            expect("annotation_quality raises AI learning", v, v > 0.0)
        },
    ];
    out.push(finish("R1", r1));

    let b1 = vec![
        {
            let v = d(Component::DuRaw, sig);
            expect("sigma_env lowers the authority drive", v, v < 0.0)
        },
        {
            let v = d(Component::Da, sig);
            expect("sigma_env erodes AI competence", v, v < 0.0)
        },
    ];
    out.push(finish("B1", b1));

    // Supervisory load shows up as the extra load slope above u_ref.
    let above = polarity_map(sc, &StockState { u: (p.u_ref + 1.0) / 2.0, ..state });
    let below = polarity_map(sc, &StockState { u: p.u_ref / 2.0, ..state });
    let increment = match (above, below) {
        (Ok(a), Ok(b)) => a.get(Component::Dc, u) - b.get(Component::Dc, u),
        _ => f64::NAN,
    };
    let slew_hi = limit_authority_rate(10.0 * p.u_slew + 1.0, p, GuardState::INACTIVE, pol);
    let slew_lo = limit_authority_rate(-10.0 * p.u_slew - 1.0, p, GuardState::INACTIVE, pol);
    let b2 = vec![
        expect(
            "authority beyond u_ref adds supervisory load",
            increment,
            increment > 0.0,
        ),
        {
            let v = d(Component::DtTrust, e);
            expect("opaque recommendations are penalized in trust", v, v > 0.0)
        },
        expect(
            "authority rate respects the slew limit",
            slew_hi.abs().max(slew_lo.abs()),
            slew_hi.abs() <= p.u_slew && slew_lo.abs() <= p.u_slew,
        ),
    ];
    out.push(finish("B2", b2));

    let r2 = vec![
        {
            let v = d(Component::Da, u);
            expect("delegated authority feeds AI learning", v, v > 0.0)
        },
        {
            let v = d(Component::DtTrust, Variable::Stock(Stock::A));
            expect("AI performance raises trust", v, v > 0.0)
        },
        {
            let v = d(Component::DuRaw, Variable::Stock(Stock::T));
            expect("trust raises the authority drive", v, v > 0.0)
        },
    ];
    out.push(finish("R2", r2));

    let (aux_on, d_on) = evaluate_flows(&state, &inputs, p, GuardState::ACTIVE, pol);
    let b3 = vec![
        expect(
            "active guard forces authority down at r_safe or faster",
            d_on.du,
            d_on.du <= -pol.r_safe + 1e-12,
        ),
        expect(
            "active guard suppresses the task rate",
            aux_on.tr_eff,
            aux_on.tr_eff == pol.rho_suppress * inputs.task_rate,
        ),
    ];
    out.push(finish("B3", b3));
    Ok(out)
}
