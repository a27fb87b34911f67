//! Strang splitting for the first-order (u, n, v) formulation.
//!
//! Linear half step: exact Fourier propagation of e^{i dt (Lap - 1)} on u and
//! of the acoustic pair (n, v) with speed lambda, both per mode. Full
//! coupling step: classical RK4 on the remaining terms
//! (nu, Qn, Q^2 u, grad|u|^2, 2 grad(Q Re u)); n is untouched there because
//! its whole right side lambda^2 div(v) is linear. Second order in dt.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Result;
use crate::field::{Field, VecField2};
use crate::grid::Grid2D;
use crate::ops;
use crate::soliton::Background;

use super::{
    check_stability, coupling_u, coupling_v_spectral, LinearTables, SimParams, Stepper,
    ZakharovState,
};

pub struct StrangStepper {
    grid: Arc<Grid2D>,
    bg: Arc<Background>,
    params: SimParams,
    half: LinearTables,
}

impl StrangStepper {
    pub fn new(grid: &Arc<Grid2D>, bg: Arc<Background>, params: SimParams) -> Self {
        let half = LinearTables::new(grid, params.lambda, params.dt / 2.0);
        StrangStepper { grid: grid.clone(), bg, params, half }
    }

    pub fn params(&self) -> &SimParams {
        &self.params
    }

    fn linear_half(&self, s: &mut ZakharovState) -> Result<()> {
        let mut u = std::mem::replace(&mut s.u, Field::zeros(&self.grid, crate::field::Repr::Physical))
            .into_spectral()?;
        self.half.apply_schroedinger(&mut u);
        s.u = u.into_physical()?;

        let mut n = std::mem::replace(&mut s.n, Field::zeros(&self.grid, crate::field::Repr::Physical))
            .into_spectral()?;
        let mut v = VecField2 {
            x: std::mem::replace(&mut s.v.x, Field::zeros(&self.grid, crate::field::Repr::Physical))
                .into_spectral()?,
            y: std::mem::replace(&mut s.v.y, Field::zeros(&self.grid, crate::field::Repr::Physical))
                .into_spectral()?,
        };
        self.half.apply_acoustic(&self.grid, &mut n, &mut v);
        s.n = n.into_physical()?;
        s.n.realize();
        s.v = VecField2 { x: v.x.into_physical()?, y: v.y.into_physical()? };
        s.v.realize();
        Ok(())
    }

    /// Coupling tendency with n frozen: du and dv only.
    fn coupling(&self, u: &Field, n: &Field) -> (Field, VecField2) {
        let mut du = coupling_u(u, n, &self.bg, self.params.dealias);
        du.scale(-Complex64::i());
        let src = coupling_v_spectral(u, &self.bg, self.params.dealias);
        let g = ops::grad(&src);
        let mut dv = VecField2 {
            x: g.x.into_physical().expect("grad"),
            y: g.y.into_physical().expect("grad"),
        };
        dv.realize();
        (du, dv)
    }

    fn rk4_coupling(&self, s: &mut ZakharovState) {
        let dt = self.params.dt;
        let u0 = s.u.clone();

        let (k1u, k1v) = self.coupling(&u0, &s.n);
        let mut ua = u0.clone();
        ua.add_assign_scaled(&k1u, (0.5 * dt).into());
        let (k2u, k2v) = self.coupling(&ua, &s.n);
        let mut ub = u0.clone();
        ub.add_assign_scaled(&k2u, (0.5 * dt).into());
        let (k3u, k3v) = self.coupling(&ub, &s.n);
        let mut uc = u0.clone();
        uc.add_assign_scaled(&k3u, dt.into());
        let (k4u, k4v) = self.coupling(&uc, &s.n);

        let w1 = Complex64::from(dt / 6.0);
        let w2 = Complex64::from(dt / 3.0);
        s.u.add_assign_scaled(&k1u, w1);
        s.u.add_assign_scaled(&k2u, w2);
        s.u.add_assign_scaled(&k3u, w2);
        s.u.add_assign_scaled(&k4u, w1);
        s.v.add_assign_scaled(&k1v, w1);
        s.v.add_assign_scaled(&k2v, w2);
        s.v.add_assign_scaled(&k3v, w2);
        s.v.add_assign_scaled(&k4v, w1);
    }
}

impl Stepper for StrangStepper {
    type State = ZakharovState;

    fn step(&self, state: &ZakharovState) -> Result<ZakharovState> {
        let before = super::combined_norm(&state.norms());
        let mut s = state.clone();
        self.linear_half(&mut s)?;
        self.rk4_coupling(&mut s);
        self.linear_half(&mut s)?;
        s.t = state.t + self.params.dt;
        check_stability("state (u,n,v)", before, super::combined_norm(&s.norms()), s.t)?;
        Ok(s)
    }
}
