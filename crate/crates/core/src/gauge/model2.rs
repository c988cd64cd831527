use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{hyperbolic_limits, Component, Curve, EffectivePotential, GaugeError, GaugeProfile, Sign, WaveNumber};
use crate::hyp::sech;

/// `A_u = C1 sech²w + C2 sech²w tanh w / (a1 tanh w - a2) + C3 tanh w + C4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model2Profile {
    c1: f64,
    c2: f64,
    c3: f64,
    c4: f64,
    a1: f64,
    a2: f64,
}

impl Model2Profile {
    pub fn new(c1: f64, c2: f64, c3: f64, c4: f64, a1: f64, a2: f64) -> Self {
        Self { c1, c2, c3, c4, a1, a2 }
    }
}

/// Real solution of `a1 tanh w = a2`, if any.
fn pole_of(a1: f64, a2: f64) -> Option<f64> {
    let r = a2 / a1;
    (a1 != 0.0 && r.abs() < 1.0).then(|| r.atanh())
}

impl GaugeProfile for Model2Profile {
    fn value(&self, w: f64) -> f64 {
        let t = w.tanh();
        let s2 = sech(w).powi(2);
        let d = self.a1 * t - self.a2;
        self.c1 * s2 + self.c2 * s2 * t / d + self.c3 * t + self.c4
    }

    fn derivative(&self, w: f64) -> f64 {
        let t = w.tanh();
        let s2 = sech(w).powi(2);
        let d = self.a1 * t - self.a2;
        -2.0 * self.c1 * s2 * t + self.c2 * (-2.0 * s2 * t * t / d - self.a2 * s2 * s2 / (d * d)) + self.c3 * s2
    }

    fn poles(&self) -> Vec<f64> {
        if self.c2 == 0.0 {
            return Vec::new();
        }
        pole_of(self.a1, self.a2).into_iter().collect()
    }

    fn asymptotes(&self) -> (Option<f64>, Option<f64>) {
        (Some(self.c4 + self.c3), Some(self.c4 - self.c3))
    }
}

/// Model II parameters with the constants fixed by the solvability constraints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model2Params {
    pub c1: f64,
    pub a1: f64,
    pub a2: f64,
    pub k: WaveNumber,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Model2Params {
    /// Parameters from the Jacobi exponents, with `a1 = β - α`, `a2 = β + α`.
    pub fn from_exponents(alpha: f64, beta: f64, c1: f64, k: WaveNumber) -> Result<Self, GaugeError> {
        model2_derive_params(c1, beta - alpha, beta + alpha, k)
    }

    pub fn profile(&self) -> Arc<dyn GaugeProfile> {
        Arc::new(a_u_model2(self))
    }

    /// Location of the `a1 tanh w = a2` singularity on the real line.
    pub fn pole(&self) -> Option<f64> {
        pole_of(self.a1, self.a2)
    }

    /// Degree `n = m + 1` of the exceptional polynomial at level `m`.
    pub fn exceptional_degree(m: usize) -> usize {
        m + 1
    }
}

/// Solves the Model II constraints for `C2 … C6` in terms of `C1`, `a1`, `a2`, `k`.
pub fn model2_derive_params(c1: f64, a1: f64, a2: f64, k: WaveNumber) -> Result<Model2Params, GaugeError> {
    let den = a1 * a1 - a2 * a2;
    if a1 == 0.0 || den == 0.0 || !a1.is_finite() || !a2.is_finite() {
        return Err(GaugeError::Degenerate { a1, a2 });
    }
    let alpha = 0.5 * (a2 - a1);
    let beta = 0.5 * (a2 + a1);
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(GaugeError::InvalidBranch { alpha, beta });
    }
    let kv = k.get();
    let c2 = -a1 * c1;
    let c3 = -(den - 2.0 * a1 * a2 * kv) / (2.0 * den);
    let c4 = -a2 * a2 * kv / den;
    let c5 = -2.0 * a1 * c1 * c3;
    let c6 = 2.0 * a1 * a1 * kv * c1 / den;
    Ok(Model2Params {
        c1,
        a1,
        a2,
        k,
        c2,
        c3,
        c4,
        c5,
        c6,
        alpha,
        beta,
    })
}

/// `α = sign_a / (1 - k)`, `β = sign_b / (1 + k)`.
pub fn alpha_beta(k: WaveNumber, sign_a: Sign, sign_b: Sign) -> Result<(f64, f64), GaugeError> {
    let kv = k.get();
    if kv == 1.0 || kv == -1.0 {
        return Err(GaugeError::WaveNumberPole(kv));
    }
    let alpha = sign_a.value() / (1.0 - kv);
    let beta = sign_b.value() / (1.0 + kv);
    if alpha > -1.0 && beta > -1.0 && alpha != beta {
        Ok((alpha, beta))
    } else {
        Err(GaugeError::InvalidBranch { alpha, beta })
    }
}

/// Valid branch with `αβ > 0` (no real pole), preferring both exponents positive.
pub fn default_alpha_beta(k: WaveNumber) -> Result<(Sign, Sign, f64, f64), GaugeError> {
    use Sign::{Minus, Plus};
    let mut first_err = None;
    let mut fallback = None;
    for (sa, sb) in [(Plus, Plus), (Minus, Plus), (Plus, Minus), (Minus, Minus)] {
        match alpha_beta(k, sa, sb) {
            Ok((a, b)) if a > 0.0 && b > 0.0 => return Ok((sa, sb, a, b)),
            Ok((a, b)) if a * b > 0.0 => {
                fallback.get_or_insert((sa, sb, a, b));
            }
            Ok(_) => {}
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    fallback.ok_or_else(|| {
        first_err.unwrap_or(GaugeError::InvalidBranch {
            alpha: f64::NAN,
            beta: f64::NAN,
        })
    })
}

/// `C1` at which the double-pole coefficient `a2²C1² - a1a2C1` equals `-A6 = 2a1²`,
/// i.e. `C1 = -a1/a2 = (α-β)/(α+β)`.
pub fn pole_matched_c1(alpha: f64, beta: f64) -> Result<f64, GaugeError> {
    let a2 = beta + alpha;
    if a2 == 0.0 {
        return Err(GaugeError::Degenerate { a1: beta - alpha, a2 });
    }
    Ok(-(beta - alpha) / a2)
}

pub fn a_u_model2(p: &Model2Params) -> Model2Profile {
    Model2Profile::new(p.c1, p.c2, p.c3, p.c4, p.a1, p.a2)
}

/// Constants `A1 … A6` of the exceptional-Jacobi potential family at level `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct X1Constants {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
}

pub fn x1_constants(alpha: f64, beta: f64, n: usize) -> Result<X1Constants, GaugeError> {
    if n == 0 {
        return Err(GaugeError::ZeroLevel);
    }
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(GaugeError::InvalidBranch { alpha, beta });
    }
    if alpha * beta == 0.0 {
        return Err(GaugeError::Division { alpha, beta });
    }
    let nf = n as f64;
    let ab = alpha * beta;
    let sum = beta + alpha;
    let diff = beta - alpha;
    Ok(X1Constants {
        a1: (beta * beta - alpha * alpha) / (2.0 * ab),
        a2: nf * nf + (sum - 1.0) * nf + 0.25 * (sum * sum - 2.0 * sum - 4.0) + (beta * beta + alpha * alpha) / (2.0 * ab),
        a3: 0.5 * (beta * beta - alpha * alpha),
        a4: -0.5 * (beta * beta + alpha * alpha - 2.0),
        a5: sum * diff * diff / (2.0 * ab),
        a6: -2.0 * diff * diff,
    })
}

/// Power of `sech w` on the single-pole term of the right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhsVariant {
    /// `A5 sech²w / (a1 tanh w - a2)`, the form the `tanh` substitution produces.
    SechSquared,
    /// `A5 sech w / (a1 tanh w - a2)`, as typeset.
    SechFirstPower,
}

/// `ε - v_eff` of the exceptional-Jacobi family written in `w`, with
/// `a1 = β - α`, `a2 = β + α`.
pub fn x1_rhs(alpha: f64, beta: f64, n: usize, variant: RhsVariant) -> Result<Curve, GaugeError> {
    let c = x1_constants(alpha, beta, n)?;
    let a1 = beta - alpha;
    let a2 = beta + alpha;
    let f = move |w: f64| {
        let t = w.tanh();
        let se = sech(w);
        let s2 = se * se;
        let d = a1 * t - a2;
        let single = match variant {
            RhsVariant::SechSquared => s2,
            RhsVariant::SechFirstPower => se,
        };
        c.a6 * s2 / (d * d) + c.a5 * single / d + c.a4 * w.cosh().powi(2) + c.a3 * w.sinh() * w.cosh() + c.a2 + c.a1 * t
    };
    Ok(Curve::new(f, pole_of(a1, a2).into_iter().collect()))
}

/// Component-1 potential for the Model II profile, expanded before the
/// constant bookkeeping.
pub fn v_eff_model2_raw(p: &Model2Params) -> EffectivePotential {
    let Model2Params {
        c1, c2, c3, c4, a1, a2, ..
    } = *p;
    let k = p.k.get();
    let f = move |w: f64| {
        let (c, s, t, se) = (w.cosh(), w.sinh(), w.tanh(), sech(w));
        let s2 = se * se;
        let d = a1 * t - a2;
        0.25 - c3 + 2.0 * c1 * c4 - 2.0 * c1 * k
            + (-0.75 + (k - c4).powi(2)) * c * c
            + c1 * c1 * s2
            + c3 * (c3 - 1.0) * s * s
            + (k - c4 + 2.0 * c3 * c4 - 2.0 * c3 * k) * c * s
            + c1 * (1.0 + 2.0 * c3) * t
            - c2 * s2 / d
            + a1 * c2 * s2 * t / (d * d)
            + c2 * c2 * s2 * t * t / (d * d)
            + 2.0 * c2 * (c4 - k) * t / d
            + 2.0 * c1 * c2 * s2 * t / d
            + c2 * (1.0 + 2.0 * c3) * t * t / d
    };
    let cc = -0.75 + (k - c4).powi(2) + c3 * (c3 - 1.0);
    let cs = k - c4 + 2.0 * c3 * c4 - 2.0 * c3 * k;
    let base = 0.25 - c3 + 2.0 * c1 * c4 - 2.0 * c1 * k - c3 * (c3 - 1.0);
    let tail = |t: f64| c1 * (1.0 + 2.0 * c3) * t + 2.0 * c2 * (c4 - k) * t / (a1 * t - a2) + c2 * (1.0 + 2.0 * c3) / (a1 * t - a2);
    let (plus, minus) = hyperbolic_limits(cc, cs, base + tail(1.0), base + tail(-1.0));
    EffectivePotential::new(Component::One, Curve::new(f, pole_of(a1, a2).into_iter().collect()))
        .with_asymptotes(plus, minus)
}

/// Constrained closed forms of the Model II partner potentials.
pub fn v_eff_model2(p: &Model2Params, j: Component) -> EffectivePotential {
    let Model2Params {
        c1,
        c2,
        c3,
        c4,
        c5,
        c6,
        a1,
        a2,
        ..
    } = *p;
    let k = p.k.get();
    let poles: Vec<f64> = pole_of(a1, a2).into_iter().collect();
    match j {
        Component::One => {
            let cc = (k - c4).powi(2) + (c3 - 0.5).powi(2) - 1.0;
            let cs = k - c4 + 2.0 * c3 * c4 - 2.0 * c3 * k;
            let constant = 0.25 - c6 + 2.0 * c1 * c4 - 2.0 * c1 * k - c3 * c3;
            let tanh_coeff = c1 * (1.0 + 2.0 * c3);
            let double_pole = a2 * a2 * c1 * c1 - a1 * a2 * c1;
            let f = move |w: f64| {
                let (c, s, t) = (w.cosh(), w.sinh(), w.tanh());
                let s2 = sech(w).powi(2);
                let d = a1 * t - a2;
                constant + cc * c * c + cs * c * s + tanh_coeff * t - (c2 + c5) * s2 / d + double_pole * s2 / (d * d)
            };
            let (plus, minus) = hyperbolic_limits(cc, cs, constant + tanh_coeff, constant - tanh_coeff);
            EffectivePotential::new(j, Curve::new(f, poles)).with_asymptotes(plus, minus)
        }
        Component::Two => {
            let cc = (k - c4).powi(2) - 0.75;
            let cs = c4 - k + 2.0 * c3 * c4 - 2.0 * c3 * k;
            let constant = 0.25 - c3 + 2.0 * c1 * c4 - 2.0 * c1 * k;
            let f = move |w: f64| {
                let (c, s, t) = (w.cosh(), w.sinh(), w.tanh());
                let s2 = sech(w).powi(2);
                let d = a1 * t - a2;
                constant + cc * c * c + c3 * (1.0 + c3) * s * s + cs * c * s + c1 * (-1.0 + 2.0 * c3) * t
                    - a1 * c1 * s2 / d
                    + a1 * a1 * c1 * (1.0 + c1 * t) * s2 * t / (d * d)
                    + 2.0 * a1 * c1 * (k - c4) * t / d
                    - 2.0 * a1 * c1 * c1 * s2 * t / d
                    + a1 * c1 * (1.0 - 2.0 * c3) * t * t / d
            };
            let base = constant - c3 * (1.0 + c3);
            let tail = |t: f64| {
                c1 * (-1.0 + 2.0 * c3) * t
                    + 2.0 * a1 * c1 * (k - c4) * t / (a1 * t - a2)
                    + a1 * c1 * (1.0 - 2.0 * c3) / (a1 * t - a2)
            };
            let (plus, minus) = hyperbolic_limits(cc + c3 * (1.0 + c3), cs, base + tail(1.0), base + tail(-1.0));
            EffectivePotential::new(j, Curve::new(f, poles)).with_asymptotes(plus, minus)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{v_eff_general, Model1Profile};
    use approx::assert_abs_diff_eq;

    fn k(v: f64) -> WaveNumber {
        WaveNumber::new(v).unwrap()
    }

    #[test]
    fn derived_constants_at_k2() {
        let p = model2_derive_params(0.3, -2.0 / 3.0, 4.0 / 3.0, k(2.0)).unwrap();
        assert_abs_diff_eq!(p.c3, 5.0 / 6.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.c4, 8.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.c2, 2.0 / 3.0 * 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(p.c5, 10.0 / 9.0 * 0.3, epsilon = 1e-14);
        assert_abs_diff_eq!(p.c6, -4.0 / 3.0 * 0.3, epsilon = 1e-14);
        assert_abs_diff_eq!(p.alpha, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.beta, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_wave_number_kills_k_terms() {
        let p = model2_derive_params(0.7, -0.5, 1.5, k(0.0)).unwrap();
        assert_eq!(p.c4, 0.0);
        assert_eq!(p.c6, 0.0);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(matches!(model2_derive_params(0.1, 0.0, 1.0, k(2.0)), Err(GaugeError::Degenerate { .. })));
        assert!(matches!(model2_derive_params(0.1, 1.0, -1.0, k(2.0)), Err(GaugeError::Degenerate { .. })));
    }

    #[test]
    fn exponent_branches() {
        let (a, b) = alpha_beta(k(2.0), Sign::Minus, Sign::Plus).unwrap();
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 1.0 / 3.0, epsilon = 1e-15);
        for sa in [Sign::Plus, Sign::Minus] {
            for sb in [Sign::Plus, Sign::Minus] {
                assert!(matches!(alpha_beta(k(0.0), sa, sb), Err(GaugeError::InvalidBranch { .. })));
            }
        }
        assert_eq!(alpha_beta(k(1.0), Sign::Plus, Sign::Plus), Err(GaugeError::WaveNumberPole(1.0)));
        assert_eq!(alpha_beta(k(-1.0), Sign::Plus, Sign::Plus), Err(GaugeError::WaveNumberPole(-1.0)));
    }

    #[test]
    fn default_branch_is_pole_free() {
        for kv in [2.0, 3.0, 5.0, 0.5, -3.0, -0.4] {
            let (_, _, a, b) = default_alpha_beta(k(kv)).unwrap();
            assert!(a * b > 0.0, "k = {kv}");
            let p = Model2Params::from_exponents(a, b, 0.2, k(kv)).unwrap();
            assert!(p.pole().is_none());
        }
        let (sa, sb, _, _) = default_alpha_beta(k(2.0)).unwrap();
        assert_eq!((sa, sb), (Sign::Minus, Sign::Plus));
    }

    #[test]
    fn exponents_round_trip_through_a1_a2() {
        for (a, b) in [(1.0, 1.0 / 3.0), (-0.5, 0.25), (0.2, 3.0)] {
            let p = Model2Params::from_exponents(a, b, 0.1, k(1.5)).unwrap();
            assert_abs_diff_eq!(p.alpha, a, epsilon = 1e-14);
            assert_abs_diff_eq!(p.beta, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn x1_constants_example() {
        let c = x1_constants(1.0, 1.0 / 3.0, 1).unwrap();
        assert_abs_diff_eq!(c.a1, -4.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.a2, 16.0 / 9.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.a3, -4.0 / 9.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.a4, 4.0 / 9.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.a5, 8.0 / 9.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c.a6, -8.0 / 9.0, epsilon = 1e-14);
        let sym = x1_constants(0.5, 0.5, 2).unwrap();
        assert_eq!((sym.a1, sym.a3, sym.a5, sym.a6), (0.0, 0.0, 0.0, 0.0));
        assert!(matches!(x1_constants(0.0, 0.5, 1), Err(GaugeError::Division { .. })));
        assert_eq!(x1_constants(1.0, 0.5, 0), Err(GaugeError::ZeroLevel));
    }

    #[test]
    fn x1_rhs_at_origin() {
        let rhs = x1_rhs(1.0, 1.0 / 3.0, 1, RhsVariant::SechSquared).unwrap();
        assert_abs_diff_eq!(rhs.eval(0.0).unwrap(), 19.0 / 18.0, epsilon = 1e-14);
        // A4 = -A3 here, so the exponential growth survives only on the left
        assert!(rhs.value(-30.0) > 1e20);
        assert!(rhs.value(30.0).abs() < 10.0);
    }

    #[test]
    fn profile_poles() {
        let p = Model2Params::from_exponents(1.0, 1.0 / 3.0, 0.1, k(2.0)).unwrap();
        assert!(a_u_model2(&p).poles().is_empty());
        let q = Model2Params::from_exponents(1.0, -1.0 / 3.0, 0.1, k(2.0)).unwrap();
        let poles = a_u_model2(&q).poles();
        assert_eq!(poles.len(), 1);
        assert_abs_diff_eq!(poles[0], (-0.5f64).atanh(), epsilon = 1e-15);
        assert_abs_diff_eq!(poles[0], -0.5493, epsilon = 1e-4);
        assert!(matches!(a_u_model2(&q).checked(poles[0]), Err(GaugeError::Pole { .. })));
    }

    #[test]
    fn reduces_to_model1_without_rational_term() {
        let m2 = Model2Profile::new(0.3, 0.0, -0.7, 1.9, -2.0 / 3.0, 4.0 / 3.0);
        let m1 = Model1Profile::new(0.3, -0.7, 1.9);
        for i in 0..41 {
            let w = -4.0 + 0.2 * i as f64;
            assert_abs_diff_eq!(m2.value(w), m1.value(w), epsilon = 1e-14);
            assert_abs_diff_eq!(m2.derivative(w), m1.derivative(w), epsilon = 1e-14);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let q = Model2Params::from_exponents(1.0, -1.0 / 3.0, 0.4, k(2.0)).unwrap();
        let a = a_u_model2(&q);
        let h = 1e-6;
        for w in [-2.0, -0.9, 0.0, 0.7, 2.5] {
            let fd = (a.value(w + h) - a.value(w - h)) / (2.0 * h);
            assert_abs_diff_eq!(a.derivative(w), fd, epsilon = 1e-7 * (1.0 + fd.abs()));
        }
    }

    #[test]
    fn constrained_form_equals_expansion_up_to_constant() {
        let p = Model2Params::from_exponents(1.0, 1.0 / 3.0, 0.1, k(2.0)).unwrap();
        let raw = v_eff_model2_raw(&p);
        let closed = v_eff_model2(&p, Component::One);
        let gaps: Vec<f64> = (0..81).map(|i| -4.0 + 0.1 * i as f64).map(|w| closed.value(w) - raw.value(w)).collect();
        let spread = gaps.iter().cloned().fold(f64::MIN, f64::max) - gaps.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-9, "spread {spread}");
        let general = v_eff_general(p.profile(), p.k, Component::One);
        assert_abs_diff_eq!(general.value(0.3), raw.value(0.3), epsilon = 1e-10);
    }

    #[test]
    fn partner_without_c1_has_no_rational_terms() {
        let p = Model2Params::from_exponents(1.0, -1.0 / 3.0, 0.0, k(2.0)).unwrap();
        let v = v_eff_model2(&p, Component::Two);
        let near_pole = p.pole().unwrap() + 1e-9;
        assert!(v.value(near_pole).abs() < 1e3);
    }

    #[test]
    fn asymptotes_agree_with_far_field() {
        let p = Model2Params::from_exponents(1.0, 1.0 / 3.0, 0.5, k(2.0)).unwrap();
        let v = v_eff_model2(&p, Component::One);
        let plus = v.asymptote_plus().expect("finite at +inf");
        assert_abs_diff_eq!(v.value(8.0), plus, epsilon = 1e-5);
        assert!(v.asymptote_minus().is_none());
    }
}
