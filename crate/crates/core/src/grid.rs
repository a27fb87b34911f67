//! Periodic rectangular grid with Fourier wavenumber tables.
//!
//! The box is `[-lx/2, lx/2) x [-ly/2, ly/2)` sampled at `nx x ny` points,
//! row-major with x as the slow axis. Wavenumbers follow the usual DFT
//! convention `k = (2*pi/L) * m` with signed integer frequencies
//! `m in [-n/2, n/2)`; the Nyquist mode sits at index `n/2` and carries
//! `m = -n/2`.

use std::f64::consts::TAU;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug)]
pub struct Grid2D {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    kx: Vec<f64>,
    ky: Vec<f64>,
    /// Signed integer frequencies per axis, used by the dealias mask.
    mx: Vec<i64>,
    my: Vec<i64>,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Arc<Self>> {
        if nx < 8 || nx % 2 != 0 {
            return Err(Error::BadGridSize { axis: 'x', n: nx });
        }
        if ny < 8 || ny % 2 != 0 {
            return Err(Error::BadGridSize { axis: 'y', n: ny });
        }
        if !(lx > 0.0) || !(ly > 0.0) {
            return Err(Error::InvalidParameter {
                name: "box size",
                reason: format!("side lengths must be positive (got {lx} x {ly})"),
            });
        }
        let freq = |n: usize, l: f64| -> (Vec<f64>, Vec<i64>) {
            let mut k = Vec::with_capacity(n);
            let mut m = Vec::with_capacity(n);
            for i in 0..n {
                let mi = if i < n / 2 { i as i64 } else { i as i64 - n as i64 };
                m.push(mi);
                k.push(TAU / l * mi as f64);
            }
            (k, m)
        };
        let (kx, mx) = freq(nx, lx);
        let (ky, my) = freq(ny, ly);
        Ok(Arc::new(Grid2D { nx, ny, lx, ly, kx, ky, mx, my }))
    }

    /// Square box `[-l/2, l/2)^2` with `n` points per axis.
    pub fn square(n: usize, l: f64) -> Result<Arc<Self>> {
        Self::new(n, n, l, l)
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.nx
    }
    #[inline]
    pub fn ny(&self) -> usize {
        self.ny
    }
    #[inline]
    pub fn lx(&self) -> f64 {
        self.lx
    }
    #[inline]
    pub fn ly(&self) -> f64 {
        self.ly
    }
    #[inline]
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }
    #[inline]
    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }
    #[inline]
    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }
    /// Quadrature weight of one grid cell.
    #[inline]
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }
    #[inline]
    pub fn area(&self) -> f64 {
        self.lx * self.ly
    }

    /// Physical x coordinate of row `ix`.
    #[inline]
    pub fn x(&self, ix: usize) -> f64 {
        -0.5 * self.lx + self.dx() * ix as f64
    }
    /// Physical y coordinate of column `iy`.
    #[inline]
    pub fn y(&self, iy: usize) -> f64 {
        -0.5 * self.ly + self.dy() * iy as f64
    }

    #[inline]
    pub fn kx(&self) -> &[f64] {
        &self.kx
    }
    #[inline]
    pub fn ky(&self) -> &[f64] {
        &self.ky
    }
    #[inline]
    pub fn mx(&self) -> &[i64] {
        &self.mx
    }
    #[inline]
    pub fn my(&self) -> &[i64] {
        &self.my
    }

    /// Nyquist row/column indices (`m = -n/2`).
    #[inline]
    pub fn nyquist(&self) -> (usize, usize) {
        (self.nx / 2, self.ny / 2)
    }

    /// True if the signed frequency pair survives the 2/3-rule truncation.
    #[inline]
    pub fn in_dealias_band(&self, ix: usize, iy: usize) -> bool {
        3 * self.mx[ix].unsigned_abs() as usize <= self.nx
            && 3 * self.my[iy].unsigned_abs() as usize <= self.ny
    }

    #[inline]
    pub fn idx(&self, ix: usize, iy: usize) -> usize {
        ix * self.ny + iy
    }

    pub fn same_as(&self, other: &Grid2D) -> bool {
        self.nx == other.nx && self.ny == other.ny && self.lx == other.lx && self.ly == other.ly
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumber_tables() {
        let g = Grid2D::new(8, 16, TAU, 2.0 * TAU).unwrap();
        assert_eq!(g.kx().len(), 8);
        assert_eq!(g.ky().len(), 16);
        // k = m on a 2*pi box
        assert_eq!(g.kx()[0], 0.0);
        assert_eq!(g.kx()[1], 1.0);
        assert_eq!(g.kx()[3], 3.0);
        assert_eq!(g.kx()[4], -4.0); // Nyquist, negative convention
        assert_eq!(g.kx()[7], -1.0);
        assert_eq!(g.ky()[1], 0.5);
        assert_eq!(g.dx(), TAU / 8.0);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid2D::new(7, 8, 1.0, 1.0).is_err());
        assert!(Grid2D::new(8, 6, 1.0, 1.0).is_err());
        assert!(Grid2D::new(10, 10, 0.0, 1.0).is_err());
    }

    #[test]
    fn dealias_band_bounds() {
        let g = Grid2D::square(64, 1.0).unwrap();
        // |m| <= 21 kept on a 64-point axis (64/3 = 21.33)
        assert!(g.in_dealias_band(21, 0));
        assert!(!g.in_dealias_band(22, 0));
        assert!(g.in_dealias_band(64 - 21, 0));
        assert!(!g.in_dealias_band(32, 0)); // Nyquist
    }

    #[test]
    fn symmetric_coordinates() {
        let g = Grid2D::square(16, 40.0).unwrap();
        assert_eq!(g.x(8), 0.0);
        for i in 1..16 {
            assert_eq!(g.x(i), -g.x(16 - i));
        }
    }
}
