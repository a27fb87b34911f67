//! The perturbed cubic NLS reached in the subsonic limit, in the gauged
//! perturbation frame:
//!
//!   i u_t - u + Lap u + |u + Q|^2 (u + Q) - Q^3 = 0.
//!
//! The Q^3 reference is evaluated once through the identical dealiased
//! product pipeline as the runtime nonlinearity, so u = 0 is an exact fixed
//! point of the discrete scheme.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Result;
use crate::field::{Field, Repr};
use crate::grid::Grid2D;
use crate::ops;
use crate::soliton::Background;

use super::{check_stability, SimParams, Stepper};

#[derive(Debug, Clone)]
pub struct PnlsState {
    pub t: f64,
    pub u: Field,
}

impl PnlsState {
    pub fn new(t: f64, u: Field) -> Self {
        PnlsState { t, u }
    }

    pub fn zero(grid: &Arc<Grid2D>) -> Self {
        PnlsState { t: 0.0, u: Field::zeros(grid, Repr::Physical) }
    }
}

pub struct PnlsStepper {
    grid: Arc<Grid2D>,
    bg: Arc<Background>,
    params: SimParams,
    /// e^{-i (dt/2)(|k|^2+1)} per mode.
    schro_half: Vec<Complex64>,
    /// cubic(Q), the discrete stand-in for Q^3.
    cube_ref: Field,
}

/// dealias(dealias(|w|^2) * w): the cubic term as two successive dealiased
/// products.
fn cubic(w: &Field, dealias: bool) -> Field {
    let grid = w.grid().clone();
    let mut sq: Vec<Complex64> = w.data().iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect();
    if dealias {
        let mut f = Field::from_parts(&grid, Repr::Physical, sq).into_spectral().expect("square");
        ops::dealias_in_place(&mut f);
        sq = f.into_physical().expect("square").data().to_vec();
    }
    let prod: Vec<Complex64> = sq.iter().zip(w.data()).map(|(a, b)| a.re * b).collect();
    let f = Field::from_parts(&grid, Repr::Physical, prod);
    if dealias {
        let mut s = f.into_spectral().expect("cubic");
        ops::dealias_in_place(&mut s);
        s.into_physical().expect("cubic")
    } else {
        f
    }
}

impl PnlsStepper {
    pub fn new(grid: &Arc<Grid2D>, bg: Arc<Background>, params: SimParams) -> Self {
        let tau = params.dt / 2.0;
        let mut schro_half = Vec::with_capacity(grid.len());
        for ix in 0..grid.nx() {
            let kx = grid.kx()[ix];
            for iy in 0..grid.ny() {
                let ky = grid.ky()[iy];
                schro_half.push(Complex64::from_polar(1.0, -tau * (kx * kx + ky * ky + 1.0)));
            }
        }
        let cube_ref = cubic(&bg.q_field(), params.dealias);
        PnlsStepper { grid: grid.clone(), bg, params, schro_half, cube_ref }
    }

    fn linear_half(&self, s: &mut PnlsState) -> Result<()> {
        let mut u = s.u.to_spectral()?;
        for (z, f) in u.data_mut().iter_mut().zip(&self.schro_half) {
            *z *= f;
        }
        s.u = u.into_physical()?;
        Ok(())
    }

    /// du = i (cubic(u + Q) - cubic(Q)).
    fn coupling(&self, u: &Field) -> Field {
        let ny = self.grid.ny();
        let mut w = u.clone();
        for ix in 0..self.grid.nx() {
            let q = self.bg.q(ix);
            for iy in 0..ny {
                w.data_mut()[ix * ny + iy] += q;
            }
        }
        let mut nl = cubic(&w, self.params.dealias);
        let d = nl.data_mut();
        for (z, r) in d.iter_mut().zip(self.cube_ref.data()) {
            *z = Complex64::i() * (*z - r);
        }
        nl
    }

    fn rk4_coupling(&self, s: &mut PnlsState) {
        let dt = self.params.dt;
        let u0 = s.u.clone();
        let k1 = self.coupling(&u0);
        let mut ua = u0.clone();
        ua.add_assign_scaled(&k1, (0.5 * dt).into());
        let k2 = self.coupling(&ua);
        let mut ub = u0.clone();
        ub.add_assign_scaled(&k2, (0.5 * dt).into());
        let k3 = self.coupling(&ub);
        let mut uc = u0.clone();
        uc.add_assign_scaled(&k3, dt.into());
        let k4 = self.coupling(&uc);
        let w1 = Complex64::from(dt / 6.0);
        let w2 = Complex64::from(dt / 3.0);
        s.u.add_assign_scaled(&k1, w1);
        s.u.add_assign_scaled(&k2, w2);
        s.u.add_assign_scaled(&k3, w2);
        s.u.add_assign_scaled(&k4, w1);
    }

    /// Finite-box mass of the perturbation, integral of |u+Q|^2 - Q^2.
    pub fn mass(&self, s: &PnlsState) -> f64 {
        let ny = self.grid.ny();
        let mut acc = 0.0;
        for ix in 0..self.grid.nx() {
            let q = self.bg.q(ix);
            for iy in 0..ny {
                let z = s.u.data()[ix * ny + iy];
                acc += z.norm_sqr() + 2.0 * q * z.re;
            }
        }
        acc * self.grid.cell_area()
    }

    /// Finite-box Hamiltonian of the perturbation:
    /// integral of |grad w|^2 + |w|^2 - |w|^4/2 minus its background value,
    /// with w = u + Q.
    pub fn hamiltonian(&self, s: &PnlsState) -> f64 {
        let density = |w: &Field| -> f64 {
            let g = ops::grad(w);
            let mut acc = 0.0;
            for i in 0..w.len() {
                let w2 = w.data()[i].norm_sqr();
                acc += g.x.data()[i].norm_sqr() + g.y.data()[i].norm_sqr() + w2 - 0.5 * w2 * w2;
            }
            acc * self.grid.cell_area()
        };
        let ny = self.grid.ny();
        let mut w = s.u.clone();
        for ix in 0..self.grid.nx() {
            let q = self.bg.q(ix);
            for iy in 0..ny {
                w.data_mut()[ix * ny + iy] += q;
            }
        }
        density(&w) - density(&self.bg.q_field())
    }
}

impl Stepper for PnlsStepper {
    type State = PnlsState;

    fn step(&self, state: &PnlsState) -> Result<PnlsState> {
        let before = state.u.l2();
        let mut s = state.clone();
        self.linear_half(&mut s)?;
        self.rk4_coupling(&mut s);
        self.linear_half(&mut s)?;
        s.t = state.t + self.params.dt;
        check_stability("u", before, s.u.l2(), s.t)?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soliton_is_exact_equilibrium() {
        let grid = Grid2D::new(64, 32, 40.0, 20.0).unwrap();
        let bg = Arc::new(Background::new(&grid));
        let stepper = PnlsStepper::new(&grid, bg, SimParams::new(1.0, 1e-2).unwrap());
        let mut s = PnlsState::zero(&grid);
        for _ in 0..50 {
            s = stepper.step(&s).unwrap();
        }
        assert_eq!(s.u.linf(), 0.0, "u = 0 must be preserved to roundoff");
    }

    #[test]
    fn mass_of_zero_is_zero() {
        let grid = Grid2D::new(32, 16, 40.0, 20.0).unwrap();
        let bg = Arc::new(Background::new(&grid));
        let stepper = PnlsStepper::new(&grid, bg, SimParams::new(1.0, 1e-2).unwrap());
        let s = PnlsState::zero(&grid);
        assert_eq!(stepper.mass(&s), 0.0);
        assert!(stepper.hamiltonian(&s).abs() < 1e-12);
    }
}
