use serde::{Deserialize, Serialize};

use super::eigen::dense_eigenvalues;
use super::{build_sl_matrix, curvature_coefficient, Grid, OracleError, SLMatrix};
use crate::gauge::{v_eff_general, Component, GaugeProfile, Sign, WaveNumber};

/// Difference stencil of the discrete first-order operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stencil {
    /// `(φ_{i+1} - φ_{i-1}) / 2h` at the nodes; square operator.
    Centered,
    /// `(φ_{i+1} - φ_i) / h` at the cell midpoints; `(N+1) × N` operator.
    Forward,
}

/// Sign and term choices for `D = cosh·Δ + diag(f)` with
/// `f = cosh w · (s_k k + s_A A) [+ ½ sinh w]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorConvention {
    pub k_sign: Sign,
    pub a_sign: Sign,
    pub half_sinh: bool,
    pub stencil: Stencil,
}

impl FactorConvention {
    /// `f = cosh w (k - A)` on the centered stencil.
    pub fn literal() -> Self {
        Self {
            k_sign: Sign::Plus,
            a_sign: Sign::Minus,
            half_sinh: false,
            stencil: Stencil::Centered,
        }
    }

    /// `f = ½ sinh w + cosh w (A - k)` on the forward stencil. With this
    /// choice `DᵀD` and `DDᵀ` discretize the `j = 1` and `j = 2` operators.
    pub fn consistent() -> Self {
        Self {
            k_sign: Sign::Minus,
            a_sign: Sign::Plus,
            half_sinh: true,
            stencil: Stencil::Forward,
        }
    }

    /// The four sign choices of the literal form.
    pub fn literal_variants() -> [Self; 4] {
        let mut out = [Self::literal(); 4];
        let signs = [(Sign::Plus, Sign::Minus), (Sign::Minus, Sign::Plus), (Sign::Plus, Sign::Plus), (Sign::Minus, Sign::Minus)];
        for (c, (k_sign, a_sign)) in out.iter_mut().zip(signs) {
            c.k_sign = k_sign;
            c.a_sign = a_sign;
        }
        out
    }

    pub fn f(&self, a: f64, k: f64, w: f64) -> f64 {
        let base = w.cosh() * (self.k_sign.value() * k + self.a_sign.value() * a);
        if self.half_sinh {
            base + 0.5 * w.sinh()
        } else {
            base
        }
    }

    pub fn label(&self) -> String {
        let s = |x: Sign| if x == Sign::Plus { '+' } else { '-' };
        format!(
            "f=cosh({}k{}A){}/{}",
            s(self.k_sign),
            s(self.a_sign),
            if self.half_sinh { "+sinh/2" } else { "" },
            match self.stencil {
                Stencil::Centered => "centered",
                Stencil::Forward => "forward",
            }
        )
    }
}

/// Sparse discrete first-order operator, rows on `row_grid`, columns on `col_grid`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderOperator {
    rows: Vec<Vec<(usize, f64)>>,
    row_grid: Grid,
    col_grid: Grid,
}

impl FirstOrderOperator {
    pub fn row_grid(&self) -> Grid {
        self.row_grid
    }

    pub fn col_grid(&self) -> Grid {
        self.col_grid
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().map(|&(c, v)| v * x[c]).sum()).collect()
    }

    /// `D·Dᵀ`, on the row grid.
    pub fn d_dt(&self) -> SLMatrix {
        let n = self.rows.len();
        let bw = self.spread();
        let diag = (0..n).map(|r| sparse_dot(&self.rows[r], &self.rows[r])).collect();
        let upper = (1..=bw)
            .map(|b| (0..n.saturating_sub(b)).map(|r| sparse_dot(&self.rows[r], &self.rows[r + b])).collect())
            .collect();
        SLMatrix::from_bands(self.row_grid, diag, upper, "D*D^T")
    }

    /// `Dᵀ·D`, on the column grid.
    pub fn dt_d(&self) -> SLMatrix {
        let n = self.col_grid.len();
        let bw = self.spread();
        let mut diag = vec![0.0; n];
        let mut upper: Vec<Vec<f64>> = (1..=bw).map(|b| vec![0.0; n.saturating_sub(b)]).collect();
        for row in &self.rows {
            for (ia, &(a, va)) in row.iter().enumerate() {
                for &(b, vb) in &row[ia..] {
                    if a == b {
                        diag[a] += va * vb;
                    } else {
                        upper[b - a - 1][a] += va * vb;
                    }
                }
            }
        }
        SLMatrix::from_bands(self.col_grid, diag, upper, "D^T*D")
    }

    fn spread(&self) -> usize {
        self.rows
            .iter()
            .filter_map(|r| Some(r.last()?.0 - r.first()?.0))
            .max()
            .unwrap_or(0)
    }
}

fn sparse_dot(a: &[(usize, f64)], b: &[(usize, f64)]) -> f64 {
    let mut s = 0.0;
    for &(ca, va) in a {
        for &(cb, vb) in b {
            if ca == cb {
                s += va * vb;
            }
        }
    }
    s
}

/// Builds `D = cosh·Δ + diag(f)` for a gauge profile.
pub fn first_order_operator(
    profile: &dyn GaugeProfile,
    k: WaveNumber,
    grid: Grid,
    convention: FactorConvention,
) -> Result<FirstOrderOperator, OracleError> {
    let n = grid.len();
    let h = grid.h();
    let k = k.get();
    let coeffs = |w: f64| -> Result<(f64, f64), OracleError> {
        let a = profile.value(w);
        if !a.is_finite() || profile.poles().iter().any(|&p| (p - w).abs() < 1e-12) {
            return Err(OracleError::SingularPotential { at: w });
        }
        Ok((w.cosh(), convention.f(a, k, w)))
    };
    let rows = match convention.stencil {
        Stencil::Centered => (0..n)
            .map(|c| {
                let (ch, f) = coeffs(grid.point(c + 1))?;
                let mut row = Vec::with_capacity(3);
                if c > 0 {
                    row.push((c - 1, -ch / (2.0 * h)));
                }
                row.push((c, f));
                if c + 1 < n {
                    row.push((c + 1, ch / (2.0 * h)));
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>, OracleError>>()?,
        Stencil::Forward => (0..=n)
            .map(|r| {
                let (ch, f) = coeffs(grid.point(r) + 0.5 * h)?;
                let mut row = Vec::with_capacity(2);
                if r > 0 {
                    row.push((r - 1, -ch / h + 0.5 * f));
                }
                if r < n {
                    row.push((r, ch / h + 0.5 * f));
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>, OracleError>>()?,
    };
    let row_grid = match convention.stencil {
        Stencil::Centered => grid,
        Stencil::Forward => grid.midpoint_grid(),
    };
    Ok(FirstOrderOperator {
        rows,
        row_grid,
        col_grid: grid,
    })
}

/// `(D·Dᵀ, Dᵀ·D)` for the given convention.
pub fn compose_factorized(
    profile: &dyn GaugeProfile,
    k: WaveNumber,
    grid: Grid,
    convention: FactorConvention,
) -> Result<(SLMatrix, SLMatrix), OracleError> {
    let d = first_order_operator(profile, k, grid, convention)?;
    Ok((d.d_dt(), d.dt_d()))
}

/// Agreement of the nonzero spectra of two compositions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Isospectrality {
    /// Largest `|λ - μ| / max(|λ|, |μ|)` over aligned nonzero eigenvalues.
    pub max_relative_deviation: f64,
    pub compared: usize,
    /// Eigenvalues at or below this are treated as zero.
    pub zero_floor: f64,
}

/// Relative size of the numerical zero floor against the matrix norm.
pub const ZERO_FLOOR_RELATIVE: f64 = 1e-6;

/// Compares the nonzero spectra of two symmetric positive semidefinite
/// matrices, aligned from the top.
pub fn compare_nonzero_spectra(a: &SLMatrix, b: &SLMatrix) -> Result<Isospectrality, OracleError> {
    compare_dense_spectra(&a.to_dense(), &b.to_dense())
}

pub(crate) fn compare_dense_spectra(
    a: &nalgebra::DMatrix<f64>,
    b: &nalgebra::DMatrix<f64>,
) -> Result<Isospectrality, OracleError> {
    let ea = dense_eigenvalues(a)?;
    let eb = dense_eigenvalues(b)?;
    let norm = ea.iter().chain(&eb).fold(0.0f64, |m, x| m.max(x.abs()));
    let zero_floor = ZERO_FLOOR_RELATIVE * norm;
    let top = |v: &[f64]| -> Vec<f64> { v.iter().rev().copied().filter(|x| *x > zero_floor).collect() };
    let (ta, tb) = (top(&ea), top(&eb));
    let compared = ta.len().min(tb.len());
    let mut worst = 0.0f64;
    for (x, y) in ta.iter().zip(&tb) {
        worst = worst.max((x - y).abs() / x.abs().max(y.abs()));
    }
    // a nonzero eigenvalue present on one side only is a full mismatch
    if ta.len().abs_diff(tb.len()) > 1 {
        worst = worst.max(1.0);
    }
    Ok(Isospectrality {
        max_relative_deviation: worst,
        compared,
        zero_floor,
    })
}

/// Gaussian probes used to compare operators without solving for spectra.
pub const PROBE_CENTERS: [f64; 3] = [-1.0, 0.0, 1.5];

/// `max_probe ‖(P - M)φ‖ / ‖φ‖` for two matrices on the same grid.
pub fn probe_residual(p: &SLMatrix, m: &SLMatrix) -> f64 {
    assert_eq!(p.order(), m.order());
    let w = p.grid().points();
    PROBE_CENTERS
        .iter()
        .map(|&c| {
            let phi: Vec<f64> = w.iter().map(|x| (-(x - c) * (x - c)).exp()).collect();
            let a = p.matvec(&phi);
            let b = m.matvec(&phi);
            let num = a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
            let den = phi.iter().map(|x| x * x).sum::<f64>().sqrt();
            num / den
        })
        .fold(0.0, f64::max)
}

/// Probe residuals of `DᵀD` against the `j = 1` operator and of `DDᵀ`
/// against the `j = 2` operator, both built from the general potential.
pub fn convention_residuals(
    profile: std::sync::Arc<dyn GaugeProfile>,
    k: WaveNumber,
    grid: Grid,
    convention: FactorConvention,
) -> Result<(f64, f64), OracleError> {
    let d = first_order_operator(profile.as_ref(), k, grid, convention)?;
    let v1 = v_eff_general(profile.clone(), k, Component::One);
    let v2 = v_eff_general(profile, k, Component::Two);
    let m1 = build_sl_matrix(curvature_coefficient, |w| v1.value(w), d.col_grid())?;
    let m2 = build_sl_matrix(curvature_coefficient, |w| v2.value(w), d.row_grid())?;
    Ok((probe_residual(&d.dt_d(), &m1), probe_residual(&d.d_dt(), &m2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{FnProfile, Model1Profile};
    use std::sync::Arc;

    fn k(v: f64) -> WaveNumber {
        WaveNumber::new(v).unwrap()
    }

    #[test]
    fn compositions_are_isospectral() {
        let g = Grid::new(4.0, 120).unwrap();
        let a = Model1Profile::new(0.4, 0.5, 3.0);
        for conv in [FactorConvention::literal(), FactorConvention::consistent()] {
            let (ddt, dtd) = compose_factorized(&a, k(2.0), g, conv).unwrap();
            assert_eq!(ddt.asymmetry(), 0.0);
            assert_eq!(dtd.asymmetry(), 0.0);
            let iso = compare_nonzero_spectra(&ddt, &dtd).unwrap();
            assert!(iso.max_relative_deviation < 1e-8, "{iso:?}");
            assert!(iso.compared > 100);
        }
    }

    #[test]
    fn pure_gauge_gives_kinetic_operators() {
        let g = Grid::new(3.0, 60).unwrap();
        let a = FnProfile::new(|_| 2.0, |_| 0.0);
        let (ddt, dtd) = compose_factorized(&a, k(2.0), g, FactorConvention::literal()).unwrap();
        assert!(ddt.diag().iter().chain(dtd.diag()).all(|d| *d >= 0.0));
        let iso = compare_nonzero_spectra(&ddt, &dtd).unwrap();
        assert!(iso.max_relative_deviation < 1e-8);
    }

    #[test]
    fn consistent_convention_reproduces_both_components() {
        let g = Grid::new(12.0, 4001).unwrap();
        let a: Arc<dyn GaugeProfile> = Arc::new(Model1Profile::new(0.37, -0.8, 1.1));
        let (r1, r2) = convention_residuals(a.clone(), k(2.0), g, FactorConvention::consistent()).unwrap();
        assert!(r1 < 1e-3 && r2 < 1e-3, "{r1} {r2}");
        let (l1, l2) = convention_residuals(a, k(2.0), g, FactorConvention::literal()).unwrap();
        assert!(l1.max(l2) > 1e-2, "{l1} {l2}");
    }

    #[test]
    fn forward_operator_shape() {
        let g = Grid::new(1.0, 5).unwrap();
        let a = Model1Profile::new(0.1, 0.2, 0.3);
        let d = first_order_operator(&a, k(1.0), g, FactorConvention::consistent()).unwrap();
        assert_eq!(d.row_grid().len(), 6);
        assert_eq!(d.d_dt().order(), 6);
        assert_eq!(d.dt_d().order(), 5);
        assert_eq!(d.apply(&[1.0; 5]).len(), 6);
    }
}
