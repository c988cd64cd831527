use nalgebra::DMatrix;

use super::{Grid, OracleError};
use crate::gauge::EffectivePotential;

/// Symmetric banded matrix on a grid. Only the diagonal and the upper bands
/// are stored, so the matrix is symmetric by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SLMatrix {
    grid: Grid,
    diag: Vec<f64>,
    /// `upper[b][i] = M[i][i + b + 1]`.
    upper: Vec<Vec<f64>>,
    /// Couplings `p(∓L ± h/2)/h²` of the first and last rows to the boundary values.
    boundary: [f64; 2],
    provenance: String,
}

impl SLMatrix {
    pub fn from_bands(grid: Grid, diag: Vec<f64>, upper: Vec<Vec<f64>>, provenance: impl Into<String>) -> Self {
        let n = diag.len();
        assert_eq!(n, grid.len());
        for (b, band) in upper.iter().enumerate() {
            assert_eq!(band.len(), n.saturating_sub(b + 1));
        }
        Self {
            grid,
            diag,
            upper,
            boundary: [0.0; 2],
            provenance: provenance.into(),
        }
    }

    /// Couplings of the first and last rows to `φ(-L)` and `φ(L)`; zero when unknown.
    pub fn boundary_couplings(&self) -> [f64; 2] {
        self.boundary
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn bandwidth(&self) -> usize {
        self.upper.len()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn band(&self, b: usize) -> &[f64] {
        &self.upper[b]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        match hi - lo {
            0 => self.diag[lo],
            d if d <= self.upper.len() => self.upper[d - 1][lo],
            _ => 0.0,
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.order();
        assert_eq!(x.len(), n);
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for (b, band) in self.upper.iter().enumerate() {
            let off = b + 1;
            for (i, &m) in band.iter().enumerate() {
                y[i] += m * x[i + off];
                y[i + off] += m * x[i];
            }
        }
        y
    }

    /// Adds a perturbation to the diagonal.
    pub fn add_diagonal(&mut self, extra: &[f64]) {
        for (d, e) in self.diag.iter_mut().zip(extra) {
            *d += e;
        }
    }

    /// Overwrites one stored entry of the upper triangle without mirroring it,
    /// producing a deliberately non-symmetric dense image.
    pub(crate) fn to_dense_with_skew(&self, skew: Option<(usize, usize, f64)>) -> DMatrix<f64> {
        let n = self.order();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
        }
        for (b, band) in self.upper.iter().enumerate() {
            for (i, &v) in band.iter().enumerate() {
                m[(i, i + b + 1)] = v;
                m[(i + b + 1, i)] = v;
            }
        }
        if let Some((i, j, dv)) = skew {
            m[(i, j)] += dv;
        }
        m
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        self.to_dense_with_skew(None)
    }

    /// `max |M - Mᵀ|` of the dense image.
    pub fn asymmetry(&self) -> f64 {
        dense_asymmetry(&self.to_dense())
    }

    /// Largest absolute row sum; an upper bound on the spectral radius.
    pub fn norm_inf(&self) -> f64 {
        let n = self.order();
        let mut rows: Vec<f64> = self.diag.iter().map(|d| d.abs()).collect();
        for (b, band) in self.upper.iter().enumerate() {
            for (i, &v) in band.iter().enumerate() {
                rows[i] += v.abs();
                rows[i + b + 1] += v.abs();
            }
        }
        rows.into_iter().take(n).fold(0.0, f64::max)
    }
}

pub(crate) fn dense_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Conservative discretization of `-(p φ')' + q φ` with Dirichlet ends:
/// `(Mφ)_i = [-p_{i+½}(φ_{i+1} - φ_i) + p_{i-½}(φ_i - φ_{i-1})]/h² + q_i φ_i`.
pub fn build_sl_matrix(
    p_fn: impl Fn(f64) -> f64,
    q_fn: impl Fn(f64) -> f64,
    grid: Grid,
) -> Result<SLMatrix, OracleError> {
    let n = grid.len();
    let h = grid.h();
    let h2 = h * h;
    let mid: Vec<f64> = (0..=n)
        .map(|i| {
            let w = grid.point(i) + 0.5 * h;
            let p = p_fn(w);
            if p > 0.0 && p.is_finite() {
                Ok(p)
            } else {
                Err(OracleError::NonPositiveCoefficient { at: w, value: p })
            }
        })
        .collect::<Result<_, _>>()?;
    let mut diag = Vec::with_capacity(n);
    for i in 1..=n {
        let w = grid.point(i);
        let q = q_fn(w);
        if !q.is_finite() {
            return Err(OracleError::SingularPotential { at: w });
        }
        diag.push((mid[i - 1] + mid[i]) / h2 + q);
    }
    let off: Vec<f64> = (1..n).map(|i| -mid[i] / h2).collect();
    let mut m = SLMatrix::from_bands(grid, diag, vec![off], "sturm-liouville");
    m.boundary = [mid[0] / h2, mid[n] / h2];
    Ok(m)
}

/// `p = cosh²w`.
pub fn curvature_coefficient(w: f64) -> f64 {
    let c = w.cosh();
    c * c
}

/// The matrix of `-(cosh²w φ')' + V φ` for an effective potential, refusing
/// potentials with a declared pole inside `[-L, L]`.
pub fn sl_matrix_for_potential(pot: &EffectivePotential, grid: Grid) -> Result<SLMatrix, OracleError> {
    if let Some(&at) = pot.poles().iter().find(|p| p.abs() <= grid.half_width()) {
        return Err(OracleError::SingularPotential { at });
    }
    let m = build_sl_matrix(curvature_coefficient, |w| pot.value(w), grid)?;
    Ok(SLMatrix {
        provenance: format!("effective potential j={}", pot.component()),
        ..m
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flux_form_is_symmetric_and_positive() {
        let g = Grid::new(3.0, 50).unwrap();
        let m = build_sl_matrix(curvature_coefficient, |_| 0.0, g).unwrap();
        assert_eq!(m.asymmetry(), 0.0);
        let x: Vec<f64> = (0..50).map(|i| ((i * 7 % 11) as f64) - 5.0).collect();
        let y = m.matvec(&x);
        let quad: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        assert!(quad > 0.0);
    }

    #[test]
    fn matvec_matches_dense() {
        let g = Grid::new(1.0, 6).unwrap();
        let m = SLMatrix::from_bands(
            g,
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            vec![vec![0.5; 5], vec![-0.25; 4]],
            "test",
        );
        let x = [1.0, -1.0, 2.0, 0.5, 0.0, 3.0];
        let d = m.to_dense() * nalgebra::DVector::from_column_slice(&x);
        for (a, b) in m.matvec(&x).iter().zip(d.iter()) {
            assert!((a - b).abs() < 1e-14);
        }
        assert_eq!(m.get(3, 1), -0.25);
        assert_eq!(m.get(0, 5), 0.0);
    }

    #[test]
    fn rejects_singular_potential() {
        let g = Grid::new(2.0, 3).unwrap();
        let err = build_sl_matrix(|_| 1.0, |w| 1.0 / w, g).unwrap_err();
        assert_eq!(err, OracleError::SingularPotential { at: 0.0 });
        assert!(matches!(
            build_sl_matrix(|_| -1.0, |_| 0.0, g),
            Err(OracleError::NonPositiveCoefficient { .. })
        ));
    }
}
