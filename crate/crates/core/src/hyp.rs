//! Hyperbolic helpers that stay accurate in the tails.

#[inline]
pub(crate) fn sech(w: f64) -> f64 {
    1.0 / w.cosh()
}

/// `1 - tanh w` without cancellation for large positive `w`.
#[inline]
pub(crate) fn one_minus_tanh(w: f64) -> f64 {
    2.0 / (1.0 + (2.0 * w).exp())
}

/// `1 + tanh w` without cancellation for large negative `w`.
#[inline]
pub(crate) fn one_plus_tanh(w: f64) -> f64 {
    2.0 / (1.0 + (-2.0 * w).exp())
}
