//! Sphere chart in isothermal coordinates.
//!
//! The sphere of radius `R` is parametrized by longitude `u` and latitude
//! `v`; the substitution `w = ln(tan v + sec v)` (equivalently
//! `cosh w = sec v`) makes the metric conformally flat,
//! `ds² = (R cos v)² (du² + dw²)`, with conformal factor `e^σ = R sech w`.

use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("sphere radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("latitude {0} is outside the open chart (-pi/2, pi/2)")]
    OutsideChart(f64),
}

/// Above this |v| the direct logarithm loses digits; switch to `asinh(tan v)`.
const LOG_FORM_LIMIT: f64 = 1.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereChart {
    radius: f64,
}

impl SphereChart {
    pub fn new(radius: f64) -> Result<Self, GeometryError> {
        if radius > 0.0 && radius.is_finite() {
            Ok(Self { radius })
        } else {
            Err(GeometryError::InvalidRadius(radius))
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `e^σ(w) = R sech w`.
    pub fn conformal_factor(&self, w: f64) -> f64 {
        conformal_factor(self.radius, w)
    }

    /// Metric scale `λ = R cos v` of the isothermal patch.
    pub fn metric_scale(&self, v: f64) -> f64 {
        self.radius * v.cos()
    }

    /// Embedding `R (cos u cos v, sin u cos v, sin v)`.
    pub fn embed(&self, u: f64, v: f64) -> [f64; 3] {
        let r = self.radius;
        [r * u.cos() * v.cos(), r * u.sin() * v.cos(), r * v.sin()]
    }

    /// Embedding from isothermal coordinates `(u, w)`.
    pub fn embed_isothermal(&self, u: f64, w: f64) -> [f64; 3] {
        self.embed(u, v_from_w(w))
    }
}

/// Isothermal coordinate `w = ln(tan v + sec v)` for `|v| < π/2`.
pub fn w_from_v(v: f64) -> Result<f64, GeometryError> {
    if !(v.abs() < FRAC_PI_2) {
        return Err(GeometryError::OutsideChart(v));
    }
    let a = v.abs();
    let w = if a <= LOG_FORM_LIMIT {
        (a.tan() + 1.0 / a.cos()).ln()
    } else {
        a.tan().asinh()
    };
    Ok(w.copysign(v))
}

/// Latitude with `cosh w = sec v` and `sign v = sign w` (the Gudermannian).
pub fn v_from_w(w: f64) -> f64 {
    w.sinh().atan()
}

pub fn conformal_factor(radius: f64, w: f64) -> f64 {
    radius / w.cosh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn w_from_v_examples() {
        assert_eq!(w_from_v(0.0).unwrap(), 0.0);
        let w = w_from_v(PI / 3.0).unwrap();
        assert_abs_diff_eq!(w, (2.0 + 3f64.sqrt()).ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(w, 1.316958, epsilon = 1e-6);
        assert_eq!(w_from_v(-PI / 3.0).unwrap(), -w);
    }

    #[test]
    fn chart_excludes_poles() {
        assert!(w_from_v(FRAC_PI_2).is_err());
        assert!(w_from_v(-2.0).is_err());
        assert!(w_from_v(f64::NAN).is_err());
    }

    #[test]
    fn v_from_w_examples() {
        assert_eq!(v_from_w(0.0), 0.0);
        assert_abs_diff_eq!(v_from_w((2.0 + 3f64.sqrt()).ln()), PI / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v_from_w(w_from_v(1.2).unwrap()), 1.2, epsilon = 1e-12);
    }

    #[test]
    fn conformal_factor_examples() {
        let unit = SphereChart::new(1.0).unwrap();
        assert_eq!(unit.conformal_factor(0.0), 1.0);
        let three = SphereChart::new(3.0).unwrap();
        assert_abs_diff_eq!(three.conformal_factor((2.0 + 3f64.sqrt()).ln()), 1.5, epsilon = 1e-14);
        let two = SphereChart::new(2.0).unwrap();
        for w in [-3.0, -0.2, 0.7, 5.0] {
            assert_eq!(two.conformal_factor(w), 2.0 * unit.conformal_factor(w));
        }
    }

    #[test]
    fn rejects_bad_radius() {
        assert!(SphereChart::new(0.0).is_err());
        assert!(SphereChart::new(-1.0).is_err());
        assert!(SphereChart::new(f64::INFINITY).is_err());
    }

    #[test]
    fn isothermal_embedding_lies_on_sphere() {
        let chart = SphereChart::new(2.5).unwrap();
        for (u, w) in [(0.3, -1.2), (2.0, 0.0), (-1.0, 3.3)] {
            let p = chart.embed_isothermal(u, w);
            let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            assert_abs_diff_eq!(r, 2.5, epsilon = 1e-14);
            // the metric scale R cos v equals the conformal factor R sech w
            assert_abs_diff_eq!(chart.metric_scale(v_from_w(w)), chart.conformal_factor(w), epsilon = 1e-14);
        }
    }
}
