use crate::error::{Error, Result};

/// Uniform grid on `[-l, l]` with an odd number of points, so that `x = 0` is
/// a node and the point set is exactly symmetric in floating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    l: f64,
    n: usize,
}

impl Grid {
    pub fn new(l: f64, n: usize) -> Result<Self> {
        if !l.is_finite() || l <= 0.0 {
            return Err(Error::InvalidModel(format!(
                "grid half-width must be positive and finite, got {l}"
            )));
        }
        if n < 3 || n % 2 == 0 {
            return Err(Error::InvalidModel(format!(
                "grid needs an odd point count >= 3, got {n}"
            )));
        }
        Ok(Grid { l, n })
    }

    /// Production default for spectra: half-width 15 length units, 3001 points.
    /// sech-type potentials are below 1e-12 at the boundary of this domain.
    pub fn default_spectral() -> Self {
        Grid { l: 15.0, n: 3001 }
    }

    /// Default for sampling/symmetry checks: `[-12, 12]` with 2001 points.
    pub fn default_sampling() -> Self {
        Grid { l: 12.0, n: 2001 }
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        2.0 * self.l / (self.n - 1) as f64
    }

    /// Node positions, built as signed index times spacing so that
    /// `points[i] == -points[n-1-i]` holds bit-for-bit.
    pub fn points(&self) -> Vec<f64> {
        let h = self.h();
        let mid = (self.n / 2) as isize;
        (0..self.n as isize).map(|i| (i - mid) as f64 * h).collect()
    }

    pub fn interior_points(&self) -> Vec<f64> {
        let mut p = self.points();
        p.pop();
        p.remove(0);
        p
    }

    /// Same half-width with the spacing exactly halved (`n -> 2n - 1`).
    pub fn refined(&self) -> Self {
        Grid {
            l: self.l,
            n: 2 * self.n - 1,
        }
    }
}
