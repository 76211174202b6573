//! The computational chart: a square grid on the affine coordinate of the
//! projective line.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// A square grid covering `[-R, R]²` in the coordinate `z = x + iy`.
///
/// The grid has `(2M+1) × (2M+1)` nodes with spacing `h = R/M`; node `(j, k)`
/// sits at `z = (-R + j·h) + i·(-R + k·h)`.  Every node is the center of a
/// grid cell of area `h²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chart {
    half_width: f64,
    resolution: usize,
}

impl Chart {
    /// Requires `R ≥ 2` so that the unit disc sits inside the box with room
    /// to spare, and `M ≥ 1`.
    pub fn new(half_width: f64, resolution: usize) -> Result<Self> {
        if !(half_width >= 2.0) {
            return Err(Error::Config(format!(
                "chart half-width must be ≥ 2, got {half_width}"
            )));
        }
        if resolution == 0 {
            return Err(Error::Config("chart resolution must be ≥ 1".into()));
        }
        Ok(Chart {
            half_width,
            resolution,
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Grid spacing `h = R/M`.
    pub fn spacing(&self) -> f64 {
        self.half_width / self.resolution as f64
    }

    /// Number of nodes per side, `2M + 1`.
    pub fn side(&self) -> usize {
        2 * self.resolution + 1
    }

    pub fn node_count(&self) -> usize {
        self.side() * self.side()
    }

    pub fn node(&self, j: usize, k: usize) -> Complex64 {
        let h = self.spacing();
        Complex64::new(
            -self.half_width + j as f64 * h,
            -self.half_width + k as f64 * h,
        )
    }

    pub fn index(&self, j: usize, k: usize) -> usize {
        j * self.side() + k
    }

    /// Inverse of [`Chart::index`].
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx / self.side(), idx % self.side())
    }

    /// Index pair of the node nearest to `z` (clamped to the grid).
    pub fn nearest(&self, z: Complex64) -> (usize, usize) {
        let h = self.spacing();
        let clamp = |t: f64| -> usize {
            let i = ((t + self.half_width) / h).round();
            i.clamp(0.0, (self.side() - 1) as f64) as usize
        };
        (clamp(z.re), clamp(z.im))
    }

    /// True for nodes with all four lattice neighbours.
    pub fn is_interior(&self, j: usize, k: usize) -> bool {
        let n = self.side();
        j > 0 && k > 0 && j + 1 < n && k + 1 < n
    }

    /// Iterator over `(j, k, z)` for every node.
    pub fn iter_nodes(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        let n = self.side();
        (0..n).flat_map(move |j| (0..n).map(move |k| (j, k, self.node(j, k))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_layout() {
        let chart = Chart::new(2.0, 4).unwrap();
        assert_eq!(chart.spacing(), 0.5);
        assert_eq!(chart.side(), 9);
        assert_eq!(chart.node(0, 0), Complex64::new(-2.0, -2.0));
        assert_eq!(chart.node(8, 4), Complex64::new(2.0, 0.0));
        let (j, k) = chart.nearest(Complex64::new(0.24, -1.9));
        assert_eq!(chart.node(j, k), Complex64::new(0.0, -2.0));
    }

    #[test]
    fn rejects_small_half_width() {
        assert!(Chart::new(1.2, 16).is_err());
    }
}
