use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{hyperbolic_limits, Component, Curve, EffectivePotential, GaugeError, GaugeProfile, WaveNumber};
use crate::hyp::sech;

/// The four `(C2, C3)` families on which the `cosh w sinh w` and `sinh²w`
/// coefficients of the component-1 potential vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model1Branch {
    /// `C2 = -1/2, C3 = k`
    NegHalf,
    /// `C2 = 1/2, C3 = k - 1`
    HalfBelow,
    /// `C2 = 1/2, C3 = k + 1`
    HalfAbove,
    /// `C2 = 3/2, C3 = k`
    ThreeHalves,
}

impl Model1Branch {
    pub const ALL: [Model1Branch; 4] = [
        Model1Branch::NegHalf,
        Model1Branch::HalfBelow,
        Model1Branch::HalfAbove,
        Model1Branch::ThreeHalves,
    ];

    pub fn c2(self) -> f64 {
        match self {
            Model1Branch::NegHalf => -0.5,
            Model1Branch::HalfBelow | Model1Branch::HalfAbove => 0.5,
            Model1Branch::ThreeHalves => 1.5,
        }
    }

    pub fn c3(self, k: WaveNumber) -> f64 {
        let k = k.get();
        match self {
            Model1Branch::NegHalf | Model1Branch::ThreeHalves => k,
            Model1Branch::HalfBelow => k - 1.0,
            Model1Branch::HalfAbove => k + 1.0,
        }
    }
}

/// Constraint families as `(C2, C3)` pairs, in a fixed order.
pub fn model1_branches(k: WaveNumber) -> Vec<(f64, f64)> {
    Model1Branch::ALL.iter().map(|b| (b.c2(), b.c3(k))).collect()
}

/// Constants of `A_u = C1 sech²w + C2 tanh w + C3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model1Params {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub branch: Option<Model1Branch>,
}

impl Model1Params {
    /// Unconstrained parameters.
    pub fn free(c1: f64, c2: f64, c3: f64) -> Self {
        Self {
            c1,
            c2,
            c3,
            branch: None,
        }
    }

    pub fn on_branch(c1: f64, branch: Model1Branch, k: WaveNumber) -> Self {
        Self {
            c1,
            c2: branch.c2(),
            c3: branch.c3(k),
            branch: Some(branch),
        }
    }

    /// Tags free parameters with the branch they sit on, if any.
    pub fn detect_branch(c1: f64, c2: f64, c3: f64, k: WaveNumber) -> Self {
        let tol = 1e-12 * (1.0 + k.get().abs());
        let branch = Model1Branch::ALL
            .into_iter()
            .find(|b| (b.c2() - c2).abs() <= tol && (b.c3(k) - c3).abs() <= tol);
        Self { c1, c2, c3, branch }
    }

    /// `((2C2 - 1)(C3 - k), C2² - C2 - 3/4 + (C3 - k)²)`; both vanish on a branch.
    pub fn constraint_residuals(&self, k: WaveNumber) -> (f64, f64) {
        let d = self.c3 - k.get();
        (
            (2.0 * self.c2 - 1.0) * d,
            self.c2 * self.c2 - self.c2 - 0.75 + d * d,
        )
    }

    pub fn is_constrained(&self, k: WaveNumber) -> bool {
        let (cross, square) = self.constraint_residuals(k);
        let tol = 1e-12 * (1.0 + k.get().abs());
        self.branch.is_some() || (cross.abs() <= tol && square.abs() <= tol)
    }

    pub(crate) fn require_constrained(&self, k: WaveNumber) -> Result<(), GaugeError> {
        if self.is_constrained(k) {
            Ok(())
        } else {
            let (cross, square) = self.constraint_residuals(k);
            Err(GaugeError::ConstraintViolation { cross, square })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model1Profile {
    c1: f64,
    c2: f64,
    c3: f64,
}

impl Model1Profile {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Self { c1, c2, c3 }
    }
}

impl GaugeProfile for Model1Profile {
    fn value(&self, w: f64) -> f64 {
        let s = sech(w);
        self.c1 * s * s + self.c2 * w.tanh() + self.c3
    }

    fn derivative(&self, w: f64) -> f64 {
        let s2 = sech(w).powi(2);
        -2.0 * self.c1 * s2 * w.tanh() + self.c2 * s2
    }

    fn asymptotes(&self) -> (Option<f64>, Option<f64>) {
        (Some(self.c3 + self.c2), Some(self.c3 - self.c2))
    }
}

/// `A_u(w) = C1 sech²w + C2 tanh w + C3`.
pub fn a_u_model1(p: &Model1Params) -> Model1Profile {
    Model1Profile::new(p.c1, p.c2, p.c3)
}

/// Component-1 potential expanded term by term before any constraint.
pub fn v_eff_model1_raw(p: &Model1Params, k: WaveNumber) -> EffectivePotential {
    let Model1Params { c1, c2, c3, .. } = *p;
    let k = k.get();
    let f = move |w: f64| {
        let (c, s, t, se) = (w.cosh(), w.sinh(), w.tanh(), sech(w));
        -c2 + 2.0 * c1 * c3 - 2.0 * c1 * k
            + ((c3 - k).powi(2) - 0.5) * c * c
            + c1 * c1 * se * se
            + (-c3 + 2.0 * c2 * c3 + k - 2.0 * c2 * k) * c * s
            + (c2 * c2 - c2 - 0.25) * s * s
            + c1 * (1.0 + 2.0 * c2) * t
    };
    let cc = (c3 - k).powi(2) - 0.5 + (c2 * c2 - c2 - 0.25);
    let cs = -c3 + 2.0 * c2 * c3 + k - 2.0 * c2 * k;
    let base = -c2 + 2.0 * c1 * c3 - 2.0 * c1 * k - (c2 * c2 - c2 - 0.25);
    let tanh_coeff = c1 * (1.0 + 2.0 * c2);
    let (plus, minus) = hyperbolic_limits(cc, cs, base + tanh_coeff, base - tanh_coeff);
    EffectivePotential::new(Component::One, Curve::new(f, Vec::new())).with_asymptotes(plus, minus)
}

/// Constrained closed forms: the Rosen–Morse II potential for `j = 1` and its
/// partner for `j = 2`.
pub fn v_eff_model1(p: &Model1Params, k: WaveNumber, j: Component) -> Result<EffectivePotential, GaugeError> {
    p.require_constrained(k)?;
    let Model1Params { c1, c2, c3, .. } = *p;
    let d = c3 - k.get();
    let pot = match j {
        Component::One => {
            let tanh_coeff = c1 * (1.0 + 2.0 * c2);
            let constant = (c2 - 0.5).powi(2) + 2.0 * c1 * d - 0.5;
            let f = move |w: f64| c1 * c1 * sech(w).powi(2) + tanh_coeff * w.tanh() + constant;
            EffectivePotential::new(j, Curve::new(f, Vec::new()))
                .with_asymptotes(Some(constant + tanh_coeff), Some(constant - tanh_coeff))
        }
        Component::Two => {
            let tanh_coeff = c1 * (-1.0 + 2.0 * c2);
            let constant = (c2 + 0.5).powi(2) - 2.0 * c1 * d - 0.5;
            let f = move |w: f64| {
                let (c, s) = (w.cosh(), w.sinh());
                c1 * c1 * sech(w).powi(2) + tanh_coeff * w.tanh() + 2.0 * c2 * c * c + 2.0 * d * c * s + constant
            };
            let (plus, minus) = hyperbolic_limits(2.0 * c2, 2.0 * d, constant + tanh_coeff, constant - tanh_coeff);
            EffectivePotential::new(j, Curve::new(f, Vec::new())).with_asymptotes(plus, minus)
        }
    };
    Ok(pot)
}

impl Model1Params {
    pub fn profile(&self) -> Arc<dyn GaugeProfile> {
        Arc::new(a_u_model1(self))
    }
}
