use super::SpecFunError;

/// Arguments within this distance of ±1 are snapped onto the interval.
const CLAMP_SLACK: f64 = 1e-12;

/// Degree and parameters of a classical Jacobi polynomial `P_n^(α,β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiIndex {
    n: usize,
    alpha: f64,
    beta: f64,
}

/// A polynomial value together with whether the argument was inside `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tagged {
    pub value: f64,
    pub in_domain: bool,
}

impl JacobiIndex {
    pub fn new(n: usize, alpha: f64, beta: f64) -> Result<Self, SpecFunError> {
        if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(SpecFunError::InvalidIndex { n, alpha, beta });
        }
        Ok(Self { n, alpha, beta })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `P_n^(α,β)(x)`. Arguments slightly outside `[-1, 1]` are clamped,
    /// anything further out is evaluated analytically.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_tagged(x).value
    }

    pub fn eval_tagged(&self, x: f64) -> Tagged {
        let (x, in_domain) = clamp(x);
        Tagged {
            value: recurrence(self.n, self.alpha, self.beta, x),
            in_domain,
        }
    }

    /// `d/dx P_n^(α,β)(x) = (n+α+β+1)/2 · P_{n-1}^(α+1,β+1)(x)`.
    pub fn deriv(&self, x: f64) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let (x, _) = clamp(x);
        let scale = 0.5 * (self.n as f64 + self.alpha + self.beta + 1.0);
        scale * recurrence(self.n - 1, self.alpha + 1.0, self.beta + 1.0, x)
    }
}

fn clamp(x: f64) -> (f64, bool) {
    if x.abs() <= 1.0 {
        (x, true)
    } else if x.abs() <= 1.0 + CLAMP_SLACK {
        (x.signum(), true)
    } else {
        (x, false)
    }
}

fn recurrence(n: usize, a: f64, b: f64, x: f64) -> f64 {
    let p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    match n {
        0 => return 1.0,
        1 => return p1,
        _ => {}
    }
    let ab = a + b;
    let (mut prev, mut cur) = (1.0, p1);
    for k in 2..=n {
        let k = k as f64;
        let two_k_ab = 2.0 * k + ab;
        let c1 = 2.0 * k * (k + ab) * (two_k_ab - 2.0);
        let c2 = (two_k_ab - 1.0) * (two_k_ab * (two_k_ab - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * two_k_ab;
        let next = (c2 * cur - c3 * prev) / c1;
        prev = cur;
        cur = next;
    }
    cur
}

/// Convenience wrapper: validates the index, then evaluates.
pub fn jacobi(n: usize, alpha: f64, beta: f64, x: f64) -> Result<f64, SpecFunError> {
    Ok(JacobiIndex::new(n, alpha, beta)?.eval(x))
}

pub fn jacobi_deriv(n: usize, alpha: f64, beta: f64, x: f64) -> Result<f64, SpecFunError> {
    Ok(JacobiIndex::new(n, alpha, beta)?.deriv(x))
}

/// X₁ exceptional Jacobi polynomial `P̂_n^(α,β)`, n ≥ 1:
///
/// ```text
/// P̂_n = -(x - b)/2 · P_{n-1} + (b·P_{n-1} - P_{n-2}) / (α + β + 2n - 2),   b = (β+α)/(β-α)
/// ```
///
/// with `P_{-1} = 0`. Degree n, orthogonal for the weight
/// `(1-x)^α (1+x)^β / (x-b)²` when `b` lies outside `[-1, 1]`.
pub fn x1_jacobi(n: usize, alpha: f64, beta: f64, x: f64) -> Result<f64, SpecFunError> {
    if n == 0 || alpha == beta {
        return Err(SpecFunError::InvalidExceptionalIndex { n, alpha, beta });
    }
    JacobiIndex::new(n, alpha, beta)?;
    let b = (beta + alpha) / (beta - alpha);
    let (x, _) = clamp(x);
    let pm1 = recurrence(n - 1, alpha, beta, x);
    let pm2 = if n >= 2 {
        recurrence(n - 2, alpha, beta, x)
    } else {
        0.0
    };
    let denom = alpha + beta + 2.0 * n as f64 - 2.0;
    Ok(-0.5 * (x - b) * pm1 + (b * pm1 - pm2) / denom)
}
