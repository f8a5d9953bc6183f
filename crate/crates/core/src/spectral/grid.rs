use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncated integer frequency lattice of the periodic box `[0, 2π)^3`.
///
/// Each axis carries the wavenumbers `-N/2 ..= N/2 - 1` stored in FFT order
/// (`0, 1, .., N/2 - 1, -N/2, .., -1`). A flat index is `(i1 * N + i2) * N + i3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrequencyGrid {
    n: usize,
}

impl FrequencyGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "N must be even and >= 4, got {n}"
            )));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of lattice points, `N^3`.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Smallest wavenumber on an axis, `-N/2`.
    pub fn min_wavenumber(&self) -> i64 {
        -(self.n as i64) / 2
    }

    /// Largest wavenumber on an axis, `N/2 - 1`.
    pub fn max_wavenumber(&self) -> i64 {
        self.n as i64 / 2 - 1
    }

    /// Wavenumber stored at axis position `i`.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Axis position of wavenumber `k`, if it lies on the lattice.
    #[inline]
    pub fn position(&self, k: i64) -> Option<usize> {
        if k < self.min_wavenumber() || k > self.max_wavenumber() {
            None
        } else if k >= 0 {
            Some(k as usize)
        } else {
            Some((k + self.n as i64) as usize)
        }
    }

    #[inline]
    pub fn wavevector(&self, idx: usize) -> [i64; 3] {
        let n = self.n;
        [
            self.wavenumber(idx / (n * n)),
            self.wavenumber((idx / n) % n),
            self.wavenumber(idx % n),
        ]
    }

    #[inline]
    pub fn index(&self, xi: [i64; 3]) -> Option<usize> {
        let p0 = self.position(xi[0])?;
        let p1 = self.position(xi[1])?;
        let p2 = self.position(xi[2])?;
        Some((p0 * self.n + p1) * self.n + p2)
    }

    /// `|ξ|^2` at a flat index.
    #[inline]
    pub fn norm_sq(&self, idx: usize) -> f64 {
        let k = self.wavevector(idx);
        (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64
    }

    /// Largest `|k|` kept by the 2/3 rule, i.e. the largest integer with `3|k| < N`.
    ///
    /// This is `floor(N/3)` unless `3` divides `N`, where it is `N/3 - 1`; the strict
    /// inequality keeps quadratic products alias-free on every admissible grid.
    pub fn dealias_cutoff(&self) -> i64 {
        (self.n as i64 - 1) / 3
    }

    /// Dealiasing mask: true iff every component satisfies `|ξ_i| <= dealias_cutoff()`.
    #[inline]
    pub fn is_retained(&self, idx: usize) -> bool {
        let c = self.dealias_cutoff();
        self.wavevector(idx).iter().all(|k| k.abs() <= c)
    }

    /// Flat index of `-ξ`, if it lies on the lattice.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> Option<usize> {
        let k = self.wavevector(idx);
        self.index([-k[0], -k[1], -k[2]])
    }

    /// Grid with twice as many modes per axis; holds every product of two fields on `self`.
    pub fn doubled(&self) -> Self {
        Self { n: 2 * self.n }
    }

    pub fn ensure_same(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    pub fn wavevectors(&self) -> impl Iterator<Item = (usize, [i64; 3])> + '_ {
        (0..self.len()).map(move |idx| (idx, self.wavevector(idx)))
    }
}
