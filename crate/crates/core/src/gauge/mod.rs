//! Gauge profiles `A_u(w)` and the effective potentials they induce.
//!
//! Each spinor component `j ∈ {1, 2}` of the reduced Dirac system obeys a
//! Sturm–Liouville problem `-(cosh²w φ')' + V_j φ = Ē² φ` with
//!
//! ```text
//! V_j(w) = ((k - A)² + (-1)^j A') cosh²w + (-1)^j (A - k) cosh w sinh w - ¾ cosh²w + ¼
//! ```
//!
//! [`v_eff_general`] evaluates that expression for any profile. The
//! `model1` and `model2` submodules hold the two hyperbolic ansätze, their
//! expanded and constrained closed forms, and the parameter algebra that
//! makes the constrained forms exactly solvable.

mod model1;
mod model2;

pub use model1::{a_u_model1, model1_branches, v_eff_model1, v_eff_model1_raw, Model1Branch, Model1Params, Model1Profile};
pub use model2::{
    a_u_model2, alpha_beta, default_alpha_beta, x1_constants, x1_rhs, model2_derive_params, pole_matched_c1,
    v_eff_model2, v_eff_model2_raw, X1Constants, Model2Params, Model2Profile, RhsVariant,
};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaugeError {
    #[error("wave number must be finite, got {0}")]
    InvalidWaveNumber(f64),
    #[error("parameters violate the Model I constraints (residuals {cross}, {square})")]
    ConstraintViolation { cross: f64, square: f64 },
    #[error("degenerate Model II parameters: a1 = {a1}, a2 = {a2} (need a1 != 0 and a1^2 != a2^2)")]
    Degenerate { a1: f64, a2: f64 },
    #[error("pole at w = {at}")]
    Pole { at: f64 },
    #[error("k = {0} puts alpha or beta at a pole (k = +-1)")]
    WaveNumberPole(f64),
    #[error("invalid exponent branch: alpha = {alpha}, beta = {beta} (need both > -1 and alpha != beta)")]
    InvalidBranch { alpha: f64, beta: f64 },
    #[error("division by zero: alpha * beta = 0 (alpha = {alpha}, beta = {beta})")]
    Division { alpha: f64, beta: f64 },
    #[error("the exceptional family starts at n = 1")]
    ZeroLevel,
}

/// Momentum `k` along the azimuthal direction `u`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct WaveNumber(f64);

impl WaveNumber {
    pub fn new(k: f64) -> Result<Self, GaugeError> {
        if k.is_finite() {
            Ok(Self(k))
        } else {
            Err(GaugeError::InvalidWaveNumber(k))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Spinor component index of the partner pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    One,
    Two,
}

impl Component {
    /// `(-1)^j`.
    pub fn parity(self) -> f64 {
        match self {
            Component::One => -1.0,
            Component::Two => 1.0,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Component::One => 1,
            Component::Two => 2,
        }
    }

    pub fn from_index(j: u8) -> Option<Self> {
        match j {
            1 => Some(Component::One),
            2 => Some(Component::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Sign selector for the branches of `α = ±1/(1-k)`, `β = ±1/(1+k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A vector-potential component `A_u(w)` with its analytic derivative.
pub trait GaugeProfile: Send + Sync {
    fn value(&self, w: f64) -> f64;
    fn derivative(&self, w: f64) -> f64;

    /// Real `w` at which the profile is singular.
    fn poles(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Limits `(A(+∞), A(-∞))`.
    fn asymptotes(&self) -> (Option<f64>, Option<f64>) {
        (None, None)
    }

    fn checked(&self, w: f64) -> Result<f64, GaugeError> {
        check_poles(&self.poles(), w)?;
        let v = self.value(w);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(GaugeError::Pole { at: w })
        }
    }
}

/// Profile assembled from two closures; used for arbitrary smooth test fields.
pub struct FnProfile<F, G> {
    value: F,
    derivative: G,
}

impl<F, G> FnProfile<F, G>
where
    F: Fn(f64) -> f64 + Send + Sync,
    G: Fn(f64) -> f64 + Send + Sync,
{
    pub fn new(value: F, derivative: G) -> Self {
        Self { value, derivative }
    }
}

impl<F, G> GaugeProfile for FnProfile<F, G>
where
    F: Fn(f64) -> f64 + Send + Sync,
    G: Fn(f64) -> f64 + Send + Sync,
{
    fn value(&self, w: f64) -> f64 {
        (self.value)(w)
    }

    fn derivative(&self, w: f64) -> f64 {
        (self.derivative)(w)
    }
}

const POLE_WINDOW: f64 = 1e-12;

fn check_poles(poles: &[f64], w: f64) -> Result<(), GaugeError> {
    match poles.iter().find(|&&p| (w - p).abs() <= POLE_WINDOW * (1.0 + p.abs())) {
        Some(&p) => Err(GaugeError::Pole { at: p }),
        None => Ok(()),
    }
}

/// A real function of `w` with declared singular points.
#[derive(Clone)]
pub struct Curve {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    poles: Vec<f64>,
}

impl Curve {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, poles: Vec<f64>) -> Self {
        Self { f: Arc::new(f), poles }
    }

    /// Raw evaluation; non-finite at poles.
    pub fn value(&self, w: f64) -> f64 {
        (self.f)(w)
    }

    pub fn eval(&self, w: f64) -> Result<f64, GaugeError> {
        check_poles(&self.poles, w)?;
        let v = self.value(w);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(GaugeError::Pole { at: w })
        }
    }

    pub fn poles(&self) -> &[f64] {
        &self.poles
    }
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve").field("poles", &self.poles).finish_non_exhaustive()
    }
}

/// Effective potential of component `j` with its finite limits at `w → ±∞`.
#[derive(Debug, Clone)]
pub struct EffectivePotential {
    component: Component,
    curve: Curve,
    asymptote_plus: Option<f64>,
    asymptote_minus: Option<f64>,
}

impl EffectivePotential {
    pub fn new(component: Component, curve: Curve) -> Self {
        Self {
            component,
            curve,
            asymptote_plus: None,
            asymptote_minus: None,
        }
    }

    pub fn with_asymptotes(mut self, plus: Option<f64>, minus: Option<f64>) -> Self {
        self.asymptote_plus = plus;
        self.asymptote_minus = minus;
        self
    }

    pub fn component(&self) -> Component {
        self.component
    }

    pub fn value(&self, w: f64) -> f64 {
        self.curve.value(w)
    }

    pub fn eval(&self, w: f64) -> Result<f64, GaugeError> {
        self.curve.eval(w)
    }

    pub fn poles(&self) -> &[f64] {
        self.curve.poles()
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn asymptote_plus(&self) -> Option<f64> {
        self.asymptote_plus
    }

    pub fn asymptote_minus(&self) -> Option<f64> {
        self.asymptote_minus
    }

    /// Adds a constant; the spectrum shifts by the same amount.
    pub fn shifted(&self, c: f64) -> Self {
        let inner = self.curve.clone();
        Self {
            component: self.component,
            curve: Curve::new(move |w| inner.value(w) + c, self.curve.poles.clone()),
            asymptote_plus: self.asymptote_plus.map(|a| a + c),
            asymptote_minus: self.asymptote_minus.map(|a| a + c),
        }
    }
}

/// Limits of `a cosh²w + b sinh w cosh w + rest(w)` given the limits of `rest`.
pub(crate) fn hyperbolic_limits(a: f64, b: f64, rest_plus: f64, rest_minus: f64) -> (Option<f64>, Option<f64>) {
    const TOL: f64 = 1e-12;
    let scale = 1.0 + a.abs() + b.abs();
    let plus = ((a + b).abs() <= TOL * scale).then_some(0.5 * a + rest_plus);
    let minus = ((a - b).abs() <= TOL * scale).then_some(0.5 * a + rest_minus);
    (plus, minus)
}

/// Effective potential of component `j` for an arbitrary gauge profile.
pub fn v_eff_general(profile: Arc<dyn GaugeProfile>, k: WaveNumber, j: Component) -> EffectivePotential {
    let k = k.get();
    let parity = j.parity();
    let poles = profile.poles();
    let f = move |w: f64| {
        let a = profile.value(w);
        let da = profile.derivative(w);
        let c = w.cosh();
        let s = w.sinh();
        ((k - a).powi(2) + parity * da) * c * c + parity * (a - k) * c * s - 0.75 * c * c + 0.25
    };
    EffectivePotential::new(j, Curve::new(f, poles))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn constant(k: f64) -> Arc<dyn GaugeProfile> {
        Arc::new(FnProfile::new(move |_| k, |_| 0.0))
    }

    #[test]
    fn pure_gauge_leaves_kinetic_remainder() {
        let k = WaveNumber::new(1.7).unwrap();
        for j in [Component::One, Component::Two] {
            let v = v_eff_general(constant(1.7), k, j);
            assert_abs_diff_eq!(v.eval(0.0).unwrap(), -0.5, epsilon = 1e-15);
            for w in [-2.0f64, 0.4, 3.0] {
                let expect = -0.75 * w.cosh().powi(2) + 0.25;
                assert_abs_diff_eq!(v.value(w), expect, epsilon = 1e-12 * expect.abs());
            }
        }
    }

    #[test]
    fn wave_number_must_be_finite() {
        assert!(WaveNumber::new(f64::NAN).is_err());
        assert!(WaveNumber::new(f64::INFINITY).is_err());
    }

    #[test]
    fn curve_reports_declared_pole() {
        let c = Curve::new(|w| 1.0 / (w - 0.5), vec![0.5]);
        assert_eq!(c.eval(0.5), Err(GaugeError::Pole { at: 0.5 }));
        assert!(c.eval(0.6).is_ok());
    }

    #[test]
    fn limits_of_hyperbolic_combination() {
        // -cosh² + sinh cosh → -1/2 at +∞, diverges at -∞
        let (p, m) = hyperbolic_limits(-1.0, 1.0, 0.0, 0.0);
        assert_abs_diff_eq!(p.unwrap(), -0.5, epsilon = 1e-15);
        assert!(m.is_none());
        let w = 15.0f64;
        assert_abs_diff_eq!(-w.cosh().powi(2) + w.sinh() * w.cosh(), -0.5, epsilon = 1e-3);
    }
}
