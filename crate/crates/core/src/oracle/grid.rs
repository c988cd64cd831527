use serde::{Deserialize, Serialize};

use super::OracleError;

/// Uniform interior grid `w_i = -L + i h`, `i = 1..=N`, `h = 2L/(N+1)`,
/// with Dirichlet conditions at `±L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    #[serde(rename = "L")]
    l: f64,
    #[serde(rename = "N")]
    n: usize,
}

impl Grid {
    pub const DEFAULT_L: f64 = 12.0;
    pub const DEFAULT_N: usize = 4001;

    pub fn new(l: f64, n: usize) -> Result<Self, OracleError> {
        if l > 0.0 && l.is_finite() && n >= 3 {
            Ok(Self { l, n })
        } else {
            Err(OracleError::InvalidGrid { l, n })
        }
    }

    pub fn default_grid() -> Self {
        Self {
            l: Self::DEFAULT_L,
            n: Self::DEFAULT_N,
        }
    }

    pub fn half_width(&self) -> f64 {
        self.l
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        2.0 * self.l / (self.n + 1) as f64
    }

    /// Interior point `i` in `1..=N`.
    pub fn point(&self, i: usize) -> f64 {
        -self.l + i as f64 * self.h()
    }

    pub fn points(&self) -> Vec<f64> {
        (1..=self.n).map(|i| self.point(i)).collect()
    }

    /// The grid on the `N + 1` cell midpoints, same spacing.
    pub fn midpoint_grid(&self) -> Self {
        Self {
            l: self.l + 0.5 * self.h(),
            n: self.n + 1,
        }
    }

    /// Same spacing, half-width widened by `extra` (rounded to whole cells).
    pub fn widened(&self, extra: f64) -> Self {
        let h = self.h();
        let cells = (2.0 * (self.l + extra) / h).round() as usize;
        Self {
            l: 0.5 * cells as f64 * h,
            n: cells - 1,
        }
    }

    /// Same half-width with `2(N+1) - 1` points, i.e. `h` halved.
    pub fn refined(&self) -> Self {
        Self {
            l: self.l,
            n: 2 * (self.n + 1) - 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_points() {
        let g = Grid::new(1.0, 3).unwrap();
        assert_eq!(g.h(), 0.5);
        assert_eq!(g.points(), vec![-0.5, 0.0, 0.5]);
        assert!(Grid::new(0.0, 10).is_err());
        assert!(Grid::new(1.0, 2).is_err());
    }

    #[test]
    fn derived_grids_keep_spacing() {
        let g = Grid::default_grid();
        let m = g.midpoint_grid();
        assert!((m.h() - g.h()).abs() < 1e-15);
        assert!((m.point(1) - (g.point(0) + 0.5 * g.h())).abs() < 1e-12);
        let w = g.widened(2.0);
        assert_eq!(w.len(), 4668);
        assert!((w.h() - g.h()).abs() < 1e-15);
        assert_eq!(Grid::new(1.0, 999).unwrap().refined().len(), 1999);
    }
}
