use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::eigen::{eig_lowest, eigenvalues_lowest};
use super::{build_sl_matrix, sl_matrix_for_potential, Grid, OracleError, SLMatrix};
use crate::gauge::{Component, EffectivePotential, GaugeProfile, Sign, WaveNumber};
use crate::spectra::WaveFunctionSpec;

/// `‖Mφ̂ - λφ̂‖ / ‖φ̂‖` on the grid.
pub fn verify_eigenpair(
    pot: &EffectivePotential,
    phi: &WaveFunctionSpec,
    lambda: f64,
    grid: Grid,
) -> Result<f64, OracleError> {
    let m = sl_matrix_for_potential(pot, grid)?;
    residual_on_matrix(&m, |w| phi.eval(w), lambda)
}

/// Rows next to `±L` use the actual boundary values of `φ` instead of zero.
pub(crate) fn residual_on_matrix(m: &SLMatrix, phi: impl Fn(f64) -> f64, lambda: f64) -> Result<f64, OracleError> {
    let grid = m.grid();
    let samples: Vec<f64> = grid.points().into_iter().map(&phi).collect();
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(OracleError::NonFiniteSample { at: grid.point(i + 1) });
    }
    let l = grid.half_width();
    let edge = [phi(-l), phi(l)];
    if let Some(i) = edge.iter().position(|v| !v.is_finite()) {
        return Err(OracleError::NonFiniteSample { at: if i == 0 { -l } else { l } });
    }
    let [c_left, c_right] = m.boundary_couplings();
    let mut mv = m.matvec(&samples);
    let n = samples.len();
    mv[0] -= c_left * edge[0];
    mv[n - 1] -= c_right * edge[1];
    let num: f64 = mv.iter().zip(&samples).map(|(a, s)| (a - lambda * s).powi(2)).sum();
    let den: f64 = samples.iter().map(|s| s * s).sum();
    if den == 0.0 {
        return Err(OracleError::NonFiniteSample { at: 0.0 });
    }
    Ok((num / den).sqrt())
}

/// Lowest `count` eigenvalues of `-(cosh²w φ')' + V φ`.
pub fn oracle_spectrum(pot: &EffectivePotential, grid: Grid, count: usize) -> Result<Vec<f64>, OracleError> {
    eigenvalues_lowest(&sl_matrix_for_potential(pot, grid)?, count)
}

/// Signs of the first-order relation
/// `ψ₂ = (1/E)(s·cosh w / R)(ψ₁' - (k + s_A A) ψ₁)`, `ψ = √(cosh w) φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartnerConvention {
    pub sign: Sign,
    pub a_sign: Sign,
}

impl Default for PartnerConvention {
    fn default() -> Self {
        Self {
            sign: Sign::Plus,
            a_sign: Sign::Minus,
        }
    }
}

/// Builds the second spinor component from the first on the grid.
pub fn derive_partner_component(
    phi1: &WaveFunctionSpec,
    energy: f64,
    profile: &dyn GaugeProfile,
    k: WaveNumber,
    radius: f64,
    grid: Grid,
    convention: PartnerConvention,
) -> Result<WaveFunctionSpec, OracleError> {
    if energy == 0.0 {
        return Err(OracleError::ZeroMode);
    }
    let w = grid.points();
    let h = grid.h();
    let psi1: Vec<f64> = w.iter().map(|&x| x.cosh().sqrt() * phi1.eval(x)).collect();
    let n = psi1.len();
    let at = |i: isize| if i < 0 || i as usize >= n { 0.0 } else { psi1[i as usize] };
    let k = k.get();
    let mut phi2 = Vec::with_capacity(n);
    for (i, &x) in w.iter().enumerate() {
        let a = profile.value(x);
        if !a.is_finite() {
            return Err(OracleError::SingularPotential { at: x });
        }
        let d = (at(i as isize + 1) - at(i as isize - 1)) / (2.0 * h);
        let psi2 = convention.sign.value() * x.cosh() / (radius * energy) * (d - (k + convention.a_sign.value() * a) * psi1[i]);
        phi2.push(psi2 / x.cosh().sqrt());
    }
    Ok(WaveFunctionSpec::from_samples(Component::Two, w, phi2))
}

/// Box refinement check on `-φ'' = λφ` over `[-π/2, π/2]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxConvergence {
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    /// `(λ(N) - λ*) / (λ(2N) - λ*)` per level.
    pub ratios: Vec<f64>,
    pub coarse_n: usize,
    pub fine_n: usize,
}

pub fn box_convergence(coarse_n: usize) -> Result<BoxConvergence, OracleError> {
    let g = Grid::new(PI / 2.0, coarse_n)?;
    let fine_grid = g.refined();
    let solve = |grid: Grid| -> Result<Vec<f64>, OracleError> {
        eigenvalues_lowest(&build_sl_matrix(|_| 1.0, |_| 0.0, grid)?, 3)
    };
    let coarse = solve(g)?;
    let fine = solve(fine_grid)?;
    let ratios = (0..3)
        .map(|i| {
            let exact = ((i + 1) * (i + 1)) as f64;
            (coarse[i] - exact) / (fine[i] - exact)
        })
        .collect();
    Ok(BoxConvergence {
        coarse,
        fine,
        ratios,
        coarse_n,
        fine_n: fine_grid.len(),
    })
}

/// Largest change of the bound levels under `L → L + extra` at fixed `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationStability {
    pub base: Vec<f64>,
    pub widened: Vec<f64>,
    pub max_change: f64,
    pub widened_grid: Grid,
}

/// Compares the levels lying below `threshold` on `grid` and on the widened grid.
pub fn truncation_stability(
    p_fn: impl Fn(f64) -> f64 + Copy,
    q_fn: impl Fn(f64) -> f64 + Copy,
    grid: Grid,
    extra: f64,
    max_levels: usize,
    threshold: f64,
) -> Result<TruncationStability, OracleError> {
    let wide = grid.widened(extra);
    let base: Vec<f64> = eig_lowest(&build_sl_matrix(p_fn, q_fn, grid)?, max_levels)?
        .into_iter()
        .map(|p| p.value)
        .filter(|v| *v < threshold)
        .collect();
    let widened = eigenvalues_lowest(&build_sl_matrix(p_fn, q_fn, wide)?, base.len())?;
    let max_change = base.iter().zip(&widened).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(TruncationStability {
        base,
        widened,
        max_change,
        widened_grid: wide,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::Curve;

    #[test]
    fn box_eigenfunction_residual() {
        let l = 1.3;
        let g = Grid::new(l, 3999).unwrap();
        let m = build_sl_matrix(|_| 1.0, |_| 0.0, g).unwrap();
        let kk = PI / (2.0 * l);
        let r = residual_on_matrix(&m, |w| (kk * (w + l)).sin(), kk * kk).unwrap();
        assert!(r <= 1e-5, "{r}");
    }

    #[test]
    fn negative_control_is_large() {
        let g = Grid::new(5.0, 800).unwrap();
        let pot = EffectivePotential::new(Component::One, Curve::new(|w| 3.0 * w.tanh(), Vec::new()));
        let phi = WaveFunctionSpec::new(
            Component::One,
            |w| (-(w - 0.3).powi(2)).exp() * (1.0 + (7.0 * w).sin()),
            crate::spectra::Norm::Divergent,
        );
        assert!(verify_eigenpair(&pot, &phi, 1.0, g).unwrap() > 0.1);
    }

    #[test]
    fn box_refinement_ratio() {
        let b = box_convergence(999).unwrap();
        for r in &b.ratios {
            assert!((3.5..=4.5).contains(r), "{r}");
        }
    }

    #[test]
    fn poschl_teller_truncation() {
        let g = Grid::new(12.0, 4001).unwrap();
        let t = truncation_stability(|_| 1.0, |w| -2.0 / w.cosh().powi(2), g, 2.0, 3, 0.0).unwrap();
        assert_eq!(t.base.len(), 1);
        assert!((t.base[0] + 1.0).abs() < 1e-4);
        assert!(t.max_change < 1e-6, "{}", t.max_change);
    }

    #[test]
    fn zero_mode_rejected() {
        let g = Grid::new(2.0, 10).unwrap();
        let phi = WaveFunctionSpec::new(Component::One, |w| (-w * w).exp(), crate::spectra::Norm::Divergent);
        let a = crate::gauge::Model1Profile::new(0.1, 0.5, 1.0);
        let k = WaveNumber::new(2.0).unwrap();
        assert_eq!(
            derive_partner_component(&phi, 0.0, &a, k, 1.0, g, PartnerConvention::default()).unwrap_err(),
            OracleError::ZeroMode
        );
    }
}
