//! Closed-form spectra and eigenfunctions of both gauge models.
//!
//! Energies come in the dimensionless form `Ē² = (ER)²`; a level is
//! physical only when `Ē² ≥ 0` and its eigenfunction is square integrable
//! in `w`. The two criteria are tracked separately on every
//! [`SpectralLine`] because they disagree for Model I.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gauge::{alpha_beta, Component, GaugeError, Model1Params, Sign, WaveNumber};
use crate::hyp::{one_minus_tanh, one_plus_tanh};
use crate::specfun::{integrate, x1_jacobi, JacobiIndex, SpecFunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("|C1| = {0} >= 1/2 makes the Jacobi exponent complex")]
    ComplexExponent(f64),
    #[error("level {n} hits s - n = 0 (C1 = {c1}); the energy formula divides by zero")]
    DivisionByZero { n: usize, c1: f64 },
    #[error("alpha = 0 in the Model II spectrum")]
    AlphaZero,
    #[error("sphere radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("E = 0 has no partner component")]
    ZeroMode,
    #[error(transparent)]
    Gauge(#[from] GaugeError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// Why a level is not physical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    NegativeRadicand,
    DivergentNorm,
    Singular,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::NegativeRadicand => "negative-radicand",
            Reason::DivergentNorm => "divergent-norm",
            Reason::Singular => "singular",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine {
    pub level: usize,
    pub e_sq_bar: f64,
    pub radius: f64,
    pub radicand_nonnegative: bool,
    pub normalizable: bool,
    pub physical: bool,
    pub reason: Option<Reason>,
    /// `(-√Ē²/R, +√Ē²/R)`, present only for physical lines.
    pub e_pair: Option<(f64, f64)>,
}

impl SpectralLine {
    fn new(level: usize, e_sq_bar: f64, radius: f64, normalizable: bool, singular: bool) -> Self {
        let radicand_nonnegative = e_sq_bar >= 0.0;
        let reason = if singular || !e_sq_bar.is_finite() {
            Some(Reason::Singular)
        } else if !radicand_nonnegative {
            Some(Reason::NegativeRadicand)
        } else if !normalizable {
            Some(Reason::DivergentNorm)
        } else {
            None
        };
        let physical = reason.is_none();
        Self {
            level,
            e_sq_bar,
            radius,
            radicand_nonnegative,
            normalizable,
            physical,
            reason,
            e_pair: physical.then(|| energy_pair(e_sq_bar, radius)),
        }
    }

    /// `±√Ē²/R` whenever the radicand is nonnegative, physical or not.
    pub fn energies(&self) -> Option<(f64, f64)> {
        (self.radicand_nonnegative && self.e_sq_bar.is_finite()).then(|| energy_pair(self.e_sq_bar, self.radius))
    }
}

fn energy_pair(e_sq_bar: f64, radius: f64) -> (f64, f64) {
    let e = e_sq_bar.sqrt() / radius;
    (-e, e)
}

fn check_radius(r: f64) -> Result<(), SpectraError> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(SpectraError::InvalidRadius(r))
    }
}

/// Normalization state of a wavefunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Norm {
    /// `∫ raw² dw` before scaling.
    Finite(f64),
    Divergent,
    Singular { at: f64 },
}

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A component eigenfunction `φ_j(w)`, scaled to unit norm when that norm exists.
#[derive(Clone)]
pub struct WaveFunctionSpec {
    component: Component,
    raw: Eval,
    scale: f64,
    norm: Norm,
}

impl fmt::Debug for WaveFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WaveFunctionSpec")
            .field("component", &self.component)
            .field("norm", &self.norm)
            .finish_non_exhaustive()
    }
}

impl WaveFunctionSpec {
    pub fn new(component: Component, raw: impl Fn(f64) -> f64 + Send + Sync + 'static, norm: Norm) -> Self {
        let scale = match norm {
            Norm::Finite(n) if n > 0.0 => 1.0 / n.sqrt(),
            _ => 1.0,
        };
        Self {
            component,
            raw: Arc::new(raw),
            scale,
            norm,
        }
    }

    /// Piecewise-linear interpolant of grid samples, zero outside the samples.
    /// The norm is the `h`-weighted discrete sum.
    pub fn from_samples(component: Component, w: Vec<f64>, values: Vec<f64>) -> Self {
        assert_eq!(w.len(), values.len());
        let h = if w.len() > 1 { w[1] - w[0] } else { 1.0 };
        let norm_sq = h * values.iter().map(|v| v * v).sum::<f64>();
        let norm = if norm_sq.is_finite() { Norm::Finite(norm_sq) } else { Norm::Divergent };
        let raw = move |x: f64| {
            let n = w.len();
            if n == 0 || x < w[0] || x > w[n - 1] {
                return 0.0;
            }
            let i = (((x - w[0]) / h).floor() as usize).min(n.saturating_sub(2));
            if n == 1 {
                return values[0];
            }
            let f = (x - w[i]) / h;
            values[i] * (1.0 - f) + values[i + 1] * f
        };
        Self::new(component, raw, norm)
    }

    pub fn component(&self) -> Component {
        self.component
    }

    /// Normalized value when the norm is finite, the raw form otherwise.
    pub fn eval(&self, w: f64) -> f64 {
        self.scale * (self.raw)(w)
    }

    /// Unnormalized value.
    pub fn raw(&self, w: f64) -> f64 {
        (self.raw)(w)
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn norm_sq(&self) -> Option<f64> {
        match self.norm {
            Norm::Finite(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_normalizable(&self) -> bool {
        matches!(self.norm, Norm::Finite(n) if n > 0.0)
    }

    /// Location of a real pole of the eigenfunction, if any.
    pub fn pole_warning(&self) -> Option<f64> {
        match self.norm {
            Norm::Singular { at } => Some(at),
            _ => None,
        }
    }
}

/// `∫ φ² dw = ∫ φ(t)² / (1 - t²) dt` with `t = tanh w`.
fn norm_over_t(raw_t: &(dyn Fn(f64) -> f64 + Send + Sync)) -> Norm {
    let integrand = |t: f64| {
        let v = raw_t(t);
        v * v / ((1.0 - t) * (1.0 + t))
    };
    let first = match integrate(integrand, -1.0, 1.0, 1e-6) {
        Ok(q) => q.value,
        Err(_) => return Norm::Divergent,
    };
    let tol = 1e-12 * first.abs().max(f64::MIN_POSITIVE);
    match integrate(integrand, -1.0, 1.0, tol) {
        Ok(q) if q.value.is_finite() && q.value > 0.0 => Norm::Finite(q.value),
        _ => Norm::Divergent,
    }
}

/// `s = (-1 + √(1 - 4C1²)) / 2`.
fn model1_exponent(c1: f64) -> Result<f64, SpectraError> {
    if !(c1.abs() < 0.5) {
        return Err(SpectraError::ComplexExponent(c1));
    }
    Ok(0.5 * (-1.0 + (1.0 - 4.0 * c1 * c1).sqrt()))
}

/// Model I energy of level `n` on a constraint branch.
pub fn energy_model1(n: usize, p: &Model1Params, k: WaveNumber, radius: f64) -> Result<SpectralLine, SpectraError> {
    let e_sq_bar = model1_e_sq_bar(n, p, k)?;
    check_radius(radius)?;
    let normalizable = wavefn_model1(n, p, k).map(|f| f.is_normalizable()).unwrap_or(false);
    Ok(SpectralLine::new(n, e_sq_bar, radius, normalizable, false))
}

fn model1_e_sq_bar(n: usize, p: &Model1Params, k: WaveNumber) -> Result<f64, SpectraError> {
    p.require_constrained(k)?;
    let s = model1_exponent(p.c1)?;
    let d = s - n as f64;
    if d == 0.0 {
        return Err(SpectraError::DivisionByZero { n, c1: p.c1 });
    }
    let b = p.c1 * (1.0 + 2.0 * p.c2) / 2.0;
    Ok(0.5 + 2.0 * p.c1 * (k.get() - p.c3) - (p.c2 - 0.5).powi(2) - d * d - b * b / (d * d))
}

/// Model I component-1 eigenfunction
/// `(1 - tanh w)^s (1 + tanh w)^b P_n^(2s, 2b)(tanh w)` with
/// `b = C1(1 + 2C2)/2`.
pub fn wavefn_model1(n: usize, p: &Model1Params, k: WaveNumber) -> Result<WaveFunctionSpec, SpectraError> {
    p.require_constrained(k)?;
    let s = model1_exponent(p.c1)?;
    if s - n as f64 == 0.0 {
        return Err(SpectraError::DivisionByZero { n, c1: p.c1 });
    }
    let b = p.c1 * (1.0 + 2.0 * p.c2) / 2.0;
    let poly = JacobiIndex::new(n, 2.0 * s, 2.0 * b)?;
    let raw_t = move |t: f64| (1.0 - t).powf(s) * (1.0 + t).powf(b) * poly.eval(t);
    // φ² ~ e^{-4sw} at +∞ and e^{4bw} at -∞
    let norm = if s > 0.0 && b > 0.0 { norm_over_t(&raw_t) } else { Norm::Divergent };
    let raw_w = move |w: f64| one_minus_tanh(w).powf(s) * one_plus_tanh(w).powf(b) * poly.eval(w.tanh());
    Ok(WaveFunctionSpec::new(Component::One, raw_w, norm))
}

/// Levels `0..=n_max` of Model I with both physicality criteria applied.
pub fn classify_levels_model1(
    p: &Model1Params,
    k: WaveNumber,
    radius: f64,
    n_max: usize,
) -> Result<Vec<SpectralLine>, SpectraError> {
    check_radius(radius)?;
    model1_exponent(p.c1)?;
    p.require_constrained(k)?;
    (0..=n_max)
        .map(|n| match energy_model1(n, p, k, radius) {
            Err(SpectraError::DivisionByZero { .. }) => Ok(SpectralLine::new(n, f64::NAN, radius, false, true)),
            other => other,
        })
        .collect()
}

/// `Ē²(m) = (m + (α+β)/2)(m + (α+β+2)/2) + β/α - (α²+β²-2)/4 - k²/(1+k²)²`.
pub fn model2_e_sq_bar(m: usize, alpha: f64, beta: f64, k: WaveNumber) -> Result<f64, SpectraError> {
    if alpha == 0.0 {
        return Err(SpectraError::AlphaZero);
    }
    let m = m as f64;
    let sum = alpha + beta;
    let k = k.get();
    Ok((m + sum / 2.0) * (m + (sum + 2.0) / 2.0) + beta / alpha
        - (alpha * alpha + beta * beta - 2.0) / 4.0
        - k * k / (1.0 + k * k).powi(2))
}

/// Model II energy of level `m` (exceptional degree `m + 1`).
pub fn energy_model2(m: usize, alpha: f64, beta: f64, k: WaveNumber, radius: f64) -> Result<SpectralLine, SpectraError> {
    let e_sq_bar = model2_e_sq_bar(m, alpha, beta, k)?;
    check_radius(radius)?;
    let wf = wavefn_model2(m, alpha, beta, PolynomialReading::Ordinary)?;
    let singular = wf.pole_warning().is_some();
    Ok(SpectralLine::new(m, e_sq_bar, radius, wf.is_normalizable(), singular))
}

/// Which polynomial fills the `P_{m+1}` slot of the Model II eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolynomialReading {
    /// Classical Jacobi `P_{m+1}^(α,β)`, as typeset.
    Ordinary,
    /// Exceptional X₁ Jacobi `P̂_{m+1}^(α,β)`.
    ExceptionalX1,
}

impl PolynomialReading {
    pub const ALL: [PolynomialReading; 2] = [PolynomialReading::Ordinary, PolynomialReading::ExceptionalX1];

    pub fn as_str(self) -> &'static str {
        match self {
            PolynomialReading::Ordinary => "ordinary",
            PolynomialReading::ExceptionalX1 => "x1",
        }
    }
}

/// Real pole of `α + β + (α - β) tanh w`, if any.
pub fn model2_wavefn_pole(alpha: f64, beta: f64) -> Option<f64> {
    let d = alpha - beta;
    let t = -(alpha + beta) / d;
    (d != 0.0 && t.abs() < 1.0).then(|| t.atanh())
}

/// Model II component-1 eigenfunction
/// `(1 - t)^{(α+1)/2} (1 + t)^{(β+1)/2} P_{m+1}(t) / (α + β + (α - β) t)`, `t = tanh w`.
pub fn wavefn_model2(
    m: usize,
    alpha: f64,
    beta: f64,
    reading: PolynomialReading,
) -> Result<WaveFunctionSpec, SpectraError> {
    let n = m + 1;
    let poly: Arc<dyn Fn(f64) -> f64 + Send + Sync> = match reading {
        PolynomialReading::Ordinary => {
            let idx = JacobiIndex::new(n, alpha, beta)?;
            Arc::new(move |t| idx.eval(t))
        }
        PolynomialReading::ExceptionalX1 => {
            x1_jacobi(n, alpha, beta, 0.0)?;
            Arc::new(move |t| x1_jacobi(n, alpha, beta, t).unwrap_or(f64::NAN))
        }
    };
    let (ea, eb) = ((alpha + 1.0) / 2.0, (beta + 1.0) / 2.0);
    let den = move |t: f64| alpha + beta + (alpha - beta) * t;
    let norm = match model2_wavefn_pole(alpha, beta) {
        Some(at) => Norm::Singular { at },
        None => {
            let p = poly.clone();
            let raw_t = move |t: f64| (1.0 - t).powf(ea) * (1.0 + t).powf(eb) * p(t) / den(t);
            norm_over_t(&raw_t)
        }
    };
    let raw_w = move |w: f64| {
        let t = w.tanh();
        one_minus_tanh(w).powf(ea) * one_plus_tanh(w).powf(eb) * poly(t) / den(t)
    };
    Ok(WaveFunctionSpec::new(Component::One, raw_w, norm))
}

/// Model II levels `0..levels` at explicit exponents.
pub fn classify_levels_model2(
    alpha: f64,
    beta: f64,
    k: WaveNumber,
    radius: f64,
    levels: usize,
) -> Result<Vec<SpectralLine>, SpectraError> {
    (0..levels).map(|m| energy_model2(m, alpha, beta, k, radius)).collect()
}

/// One row of the Model II radicand scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadicandSample {
    pub k: f64,
    pub sign_a: Sign,
    pub sign_b: Sign,
    pub m: usize,
    pub e_sq_bar: f64,
}

/// `Ē²(m)` over every valid exponent branch for each `k`, `m = 0..=m_max`.
pub fn radicand_scan_model2(ks: &[f64], m_max: usize) -> Result<Vec<RadicandSample>, SpectraError> {
    let mut out = Vec::new();
    for &kv in ks {
        let k = WaveNumber::new(kv)?;
        for sign_a in [Sign::Plus, Sign::Minus] {
            for sign_b in [Sign::Plus, Sign::Minus] {
                let Ok((alpha, beta)) = alpha_beta(k, sign_a, sign_b) else {
                    continue;
                };
                for m in 0..=m_max {
                    out.push(RadicandSample {
                        k: kv,
                        sign_a,
                        sign_b,
                        m,
                        e_sq_bar: model2_e_sq_bar(m, alpha, beta, k)?,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartnerPair {
    /// Level of the first list.
    pub level: usize,
    /// Level of the second list it is paired with.
    pub partner_level: usize,
    pub e_sq_bar_1: f64,
    pub e_sq_bar_2: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub shift: usize,
    pub pairs: Vec<PartnerPair>,
}

impl PairingReport {
    pub fn max_deviation(&self) -> f64 {
        self.pairs.iter().map(|p| p.deviation).fold(0.0, f64::max)
    }

    pub fn max_relative_deviation(&self) -> f64 {
        self.pairs
            .iter()
            .map(|p| p.deviation / p.e_sq_bar_1.abs().max(p.e_sq_bar_2.abs()).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }
}

/// Pairs level `m` of the first list with level `m - 1` of the second.
pub fn partner_map(lines1: &[SpectralLine], lines2: &[SpectralLine]) -> PairingReport {
    partner_map_with_shift(lines1, lines2, 1)
}

/// Pairs level `m` of the first list with level `m - shift` of the second.
pub fn partner_map_with_shift(lines1: &[SpectralLine], lines2: &[SpectralLine], shift: usize) -> PairingReport {
    let pairs = lines1
        .iter()
        .filter(|l| l.level >= shift)
        .filter_map(|l1| {
            let l2 = lines2.iter().find(|l| l.level == l1.level - shift)?;
            Some(PartnerPair {
                level: l1.level,
                partner_level: l2.level,
                e_sq_bar_1: l1.e_sq_bar,
                e_sq_bar_2: l2.e_sq_bar,
                deviation: (l1.e_sq_bar - l2.e_sq_bar).abs(),
            })
        })
        .collect();
    PairingReport { shift, pairs }
}

/// Lines carrying raw eigenvalues, e.g. from the numerical oracle.
pub fn lines_from_eigenvalues(values: &[f64], radius: f64) -> Vec<SpectralLine> {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| SpectralLine::new(i, v, radius, true, false))
        .collect()
}
