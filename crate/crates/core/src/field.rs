//! Grid-sampled scalar and 2-vector fields.
//!
//! A `Field` stores complex samples together with a representation tag.
//! Real quantities (the wave field `n`, velocities, backgrounds) are kept as
//! complex arrays whose imaginary part is exactly zero in physical space;
//! the owners re-realize them after spectral round trips.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::Grid2D;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Repr {
    Physical,
    Spectral,
}

#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<Grid2D>,
    repr: Repr,
    data: Vec<Complex64>,
}

impl Field {
    pub fn zeros(grid: &Arc<Grid2D>, repr: Repr) -> Self {
        Field { grid: grid.clone(), repr, data: vec![Complex64::default(); grid.len()] }
    }

    pub fn constant(grid: &Arc<Grid2D>, value: Complex64) -> Self {
        Field { grid: grid.clone(), repr: Repr::Physical, data: vec![value; grid.len()] }
    }

    /// Sample a complex-valued function of (x, y) on the physical grid.
    pub fn from_fn(grid: &Arc<Grid2D>, mut f: impl FnMut(f64, f64) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(grid.len());
        for ix in 0..grid.nx() {
            let x = grid.x(ix);
            for iy in 0..grid.ny() {
                data.push(f(x, grid.y(iy)));
            }
        }
        Field { grid: grid.clone(), repr: Repr::Physical, data }
    }

    /// Sample a real-valued function of (x, y) on the physical grid.
    pub fn from_fn_re(grid: &Arc<Grid2D>, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        Self::from_fn(grid, |x, y| Complex64::new(f(x, y), 0.0))
    }

    pub fn from_parts(grid: &Arc<Grid2D>, repr: Repr, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), grid.len(), "field data length mismatch");
        Field { grid: grid.clone(), repr, data }
    }

    #[inline]
    pub fn grid(&self) -> &Arc<Grid2D> {
        &self.grid
    }
    #[inline]
    pub fn repr(&self) -> Repr {
        self.repr
    }
    #[inline]
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }
    #[inline]
    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }
    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn expect_repr(&self, want: Repr) -> Result<()> {
        if self.repr != want {
            return Err(Error::ReprMismatch { expected: want, found: self.repr });
        }
        Ok(())
    }

    pub fn check_same_grid(&self, other: &Field) -> Result<()> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch {
                a: self.grid.nx(),
                b: self.grid.ny(),
                c: other.grid.nx(),
                d: other.grid.ny(),
            });
        }
        Ok(())
    }

    /// Forward DFT (unnormalized). Errors when already spectral.
    pub fn into_spectral(mut self) -> Result<Field> {
        self.expect_repr(Repr::Physical)?;
        fft::forward(&mut self.data, self.grid.nx(), self.grid.ny());
        self.repr = Repr::Spectral;
        Ok(self)
    }

    /// Inverse DFT (carries the 1/(nx*ny) normalization). Errors when already physical.
    pub fn into_physical(mut self) -> Result<Field> {
        self.expect_repr(Repr::Spectral)?;
        fft::inverse(&mut self.data, self.grid.nx(), self.grid.ny());
        self.repr = Repr::Physical;
        Ok(self)
    }

    pub fn to_spectral(&self) -> Result<Field> {
        self.clone().into_spectral()
    }

    pub fn to_physical(&self) -> Result<Field> {
        self.clone().into_physical()
    }

    /// The field in spectral representation, transforming if needed.
    pub fn spectral(&self) -> Field {
        match self.repr {
            Repr::Spectral => self.clone(),
            Repr::Physical => self.to_spectral().expect("physical -> spectral"),
        }
    }

    /// The field in physical representation, transforming if needed.
    pub fn physical(&self) -> Field {
        match self.repr {
            Repr::Physical => self.clone(),
            Repr::Spectral => self.to_physical().expect("spectral -> physical"),
        }
    }

    /// Largest imaginary magnitude; the realness residue of a nominally real field.
    pub fn imag_linf(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    /// Drop imaginary parts in place (physical representation only).
    pub fn realize(&mut self) {
        debug_assert_eq!(self.repr, Repr::Physical);
        for z in &mut self.data {
            z.im = 0.0;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Discrete L2 norm: physical sums use cell weights, spectral sums use
    /// the Parseval weight cell_area/(nx*ny).
    pub fn l2(&self) -> f64 {
        let w = match self.repr {
            Repr::Physical => self.grid.cell_area(),
            Repr::Spectral => self.grid.cell_area() / self.grid.len() as f64,
        };
        (self.data.iter().map(|z| z.norm_sqr()).sum::<f64>() * w).sqrt()
    }

    pub fn linf(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Mean value over the box (physical representation).
    pub fn mean(&self) -> Complex64 {
        debug_assert_eq!(self.repr, Repr::Physical);
        self.data.iter().sum::<Complex64>() / self.data.len() as f64
    }

    pub fn scale(&mut self, c: Complex64) {
        for z in &mut self.data {
            *z *= c;
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Field, c: Complex64) {
        debug_assert_eq!(self.repr, other.repr);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn sub(&self, other: &Field) -> Field {
        debug_assert_eq!(self.repr, other.repr);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Field { grid: self.grid.clone(), repr: self.repr, data }
    }

    pub fn add(&self, other: &Field) -> Field {
        debug_assert_eq!(self.repr, other.repr);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Field { grid: self.grid.clone(), repr: self.repr, data }
    }
}

/// A 2-vector field; components share grid and representation.
#[derive(Debug, Clone)]
pub struct VecField2 {
    pub x: Field,
    pub y: Field,
}

impl VecField2 {
    pub fn zeros(grid: &Arc<Grid2D>, repr: Repr) -> Self {
        VecField2 { x: Field::zeros(grid, repr), y: Field::zeros(grid, repr) }
    }

    pub fn l2(&self) -> f64 {
        self.x.l2().hypot(self.y.l2())
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn realize(&mut self) {
        self.x.realize();
        self.y.realize();
    }

    pub fn sub(&self, other: &VecField2) -> VecField2 {
        VecField2 { x: self.x.sub(&other.x), y: self.y.sub(&other.y) }
    }

    pub fn add_assign_scaled(&mut self, other: &VecField2, c: Complex64) {
        self.x.add_assign_scaled(&other.x, c);
        self.y.add_assign_scaled(&other.y, c);
    }
}
