use nalgebra::{DMatrix, SymmetricEigen};

use super::{OracleError, SLMatrix};

/// An eigenvalue with its eigenvector, normalized so that `h Σ v_i² = 1`
/// and with the first significant component positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

const BISECTION_STEPS: usize = 200;
const INVERSE_ITERATIONS: usize = 4;

/// The `count` algebraically smallest eigenpairs in ascending order.
///
/// Tridiagonal matrices go through Sturm-sequence bisection and inverse
/// iteration, which stays accurate for the strongly graded matrices that
/// `cosh²w` produces. Wider bands fall back to a dense symmetric solver.
pub fn eig_lowest(m: &SLMatrix, count: usize) -> Result<Vec<EigenPair>, OracleError> {
    let n = m.order();
    if count > n {
        return Err(OracleError::TooManyEigenvalues { count, order: n });
    }
    let h = m.grid().h();
    let mut pairs = if m.bandwidth() <= 1 {
        tridiagonal_lowest(m, count)?
    } else {
        dense_lowest(&m.to_dense(), count)?
    };
    for p in &mut pairs {
        fix_normalization(&mut p.vector, h);
    }
    Ok(pairs)
}

/// Eigenvalues only, via bisection (tridiagonal) or the dense solver.
pub fn eigenvalues_lowest(m: &SLMatrix, count: usize) -> Result<Vec<f64>, OracleError> {
    let n = m.order();
    if count > n {
        return Err(OracleError::TooManyEigenvalues { count, order: n });
    }
    if m.bandwidth() <= 1 {
        let t = Tridiagonal::from_matrix(m);
        Ok((0..count).map(|j| t.bisect(j)).collect())
    } else {
        let mut all = dense_eigenvalues(&m.to_dense())?;
        all.truncate(count);
        Ok(all)
    }
}

/// Every eigenvalue of a dense symmetric matrix, ascending.
pub fn dense_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>, OracleError> {
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 10_000).ok_or(OracleError::EigenFailure)?;
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if v.iter().any(|x| !x.is_finite()) {
        return Err(OracleError::EigenFailure);
    }
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn dense_lowest(m: &DMatrix<f64>, count: usize) -> Result<Vec<EigenPair>, OracleError> {
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 10_000).ok_or(OracleError::EigenFailure)?;
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    Ok(order
        .into_iter()
        .take(count)
        .map(|j| EigenPair {
            value: eig.eigenvalues[j],
            vector: eig.eigenvectors.column(j).iter().copied().collect(),
        })
        .collect())
}

fn fix_normalization(v: &mut [f64], h: f64) {
    let norm = (h * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    let peak = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-8 * peak) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

struct Tridiagonal {
    d: Vec<f64>,
    e: Vec<f64>,
    e2: Vec<f64>,
    pivmin: f64,
    lo: f64,
    hi: f64,
}

impl Tridiagonal {
    fn from_matrix(m: &SLMatrix) -> Self {
        let d = m.diag().to_vec();
        let e = if m.bandwidth() == 1 { m.band(0).to_vec() } else { Vec::new() };
        let e2: Vec<f64> = e.iter().map(|x| x * x).collect();
        let max_e2 = e2.iter().fold(1.0f64, |a, &b| a.max(b));
        let pivmin = f64::MIN_POSITIVE * max_e2;
        let n = d.len();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 };
            lo = lo.min(d[i] - r);
            hi = hi.max(d[i] + r);
        }
        let pad = f64::EPSILON * (lo.abs().max(hi.abs())) * n as f64 + pivmin;
        Self {
            d,
            e,
            e2,
            pivmin,
            lo: lo - pad,
            hi: hi + pad,
        }
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.d[0] - x;
        if q.abs() < self.pivmin {
            q = -self.pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.d.len() {
            q = self.d[i] - x - self.e2[i - 1] / q;
            if q.abs() < self.pivmin {
                q = -self.pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Eigenvalue number `j` (zero-based, ascending) by bisection.
    fn bisect(&self, j: usize) -> f64 {
        let (mut lo, mut hi) = (self.lo, self.hi);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Inverse iteration for `λ` with LU and partial pivoting, orthogonalized
    /// against earlier vectors.
    fn eigenvector(&self, lambda: f64, previous: &[Vec<f64>]) -> Vec<f64> {
        let n = self.d.len();
        if n == 1 {
            return vec![1.0];
        }
        let lu = TridiagonalLu::factor(&self.d, &self.e, lambda);
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_75).fract()).collect();
        for _ in 0..INVERSE_ITERATIONS {
            lu.solve(&mut x);
            for q in previous {
                let dot: f64 = x.iter().zip(q).map(|(a, b)| a * b).sum();
                x.iter_mut().zip(q).for_each(|(a, b)| *a -= dot * b);
            }
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm > 0.0 && norm.is_finite()) {
                break;
            }
            x.iter_mut().for_each(|v| *v /= norm);
        }
        x
    }
}

/// LU factors of `T - λI` with row interchanges.
struct TridiagonalLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(diag: &[f64], off: &[f64], lambda: f64) -> Self {
        let n = diag.len();
        let mut d: Vec<f64> = diag.iter().map(|x| x - lambda).collect();
        let mut dl = off.to_vec();
        let mut du = off.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 1 < n - 1 {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        let scale = diag.iter().chain(off).fold(0.0f64, |a, x| a.max(x.abs()));
        let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
        for x in &mut d {
            if x.abs() < tiny {
                *x = if *x < 0.0 { -tiny } else { tiny };
            }
        }
        Self { dl, d, du, du2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn tridiagonal_lowest(m: &SLMatrix, count: usize) -> Result<Vec<EigenPair>, OracleError> {
    let t = Tridiagonal::from_matrix(m);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let value = t.bisect(j);
        if !value.is_finite() {
            return Err(OracleError::EigenFailure);
        }
        let v = t.eigenvector(value, &vectors);
        if v.iter().any(|x| !x.is_finite()) {
            return Err(OracleError::EigenFailure);
        }
        vectors.push(v.clone());
        out.push(EigenPair { value, vector: v });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{build_sl_matrix, curvature_coefficient, Grid};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn box_levels() {
        let g = Grid::new(PI / 2.0, 1999).unwrap();
        let m = build_sl_matrix(|_| 1.0, |_| 0.0, g).unwrap();
        let pairs = eig_lowest(&m, 3).unwrap();
        for (p, want) in pairs.iter().zip([1.0, 4.0, 9.0]) {
            assert_abs_diff_eq!(p.value, want, epsilon = 1e-3);
        }
        let h = g.h();
        for a in 0..3 {
            for b in 0..3 {
                let dot: f64 = h * pairs[a].vector.iter().zip(&pairs[b].vector).map(|(x, y)| x * y).sum::<f64>();
                assert_abs_diff_eq!(dot, if a == b { 1.0 } else { 0.0 }, epsilon = 1e-10);
            }
        }
        assert!(pairs[0].vector[0] > 0.0);
    }

    #[test]
    fn matches_dense_solver_on_graded_matrix() {
        let g = Grid::new(5.0, 120).unwrap();
        let m = build_sl_matrix(curvature_coefficient, |w| w.tanh(), g).unwrap();
        let dense = dense_eigenvalues(&m.to_dense()).unwrap();
        let sturm = eigenvalues_lowest(&m, 6).unwrap();
        for (a, b) in sturm.iter().zip(&dense) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-9 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn eigenpair_residual_is_small() {
        let g = Grid::new(12.0, 4001).unwrap();
        let m = build_sl_matrix(curvature_coefficient, |w| 0.1 * w.tanh(), g).unwrap();
        for p in eig_lowest(&m, 4).unwrap() {
            let r = m.matvec(&p.vector);
            let res = r.iter().zip(&p.vector).map(|(a, b)| (a - p.value * b).powi(2)).sum::<f64>().sqrt();
            let nv = p.vector.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(res / nv < 1e-6 * (1.0 + p.value.abs()), "residual {res}");
        }
    }

    #[test]
    fn refuses_too_many() {
        let g = Grid::new(1.0, 5).unwrap();
        let m = build_sl_matrix(|_| 1.0, |_| 0.0, g).unwrap();
        assert!(matches!(eig_lowest(&m, 6), Err(OracleError::TooManyEigenvalues { .. })));
    }
}
