//! The n± half-wave splitting of the wave equation (lambda = 1).
//!
//! n± = n ± i omega^{-1} n_t with omega = (-Lap)^{1/2} turns the second-order
//! wave part into two first-order equations
//! (i d/dt ∓ omega) n± = ± omega(|u|^2) ± 2 omega(Q Re u),
//! and n is recovered as (n+ + n-)/2. The integrator uses the exact
//! semigroups e^{i t (Lap - 1)} on u and e^{∓ i omega t} on n± with RK4 on
//! the coupling terms, mirroring the Strang stepper.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Field, Repr};
use crate::grid::Grid2D;
use crate::ops;
use crate::soliton::Background;

use super::{check_stability, coupling_v_spectral, SimParams, Stepper, ZakharovState};

/// State of the split formulation. For data coming from real (n, n_t) the
/// two half-waves are complex conjugates of each other.
#[derive(Debug, Clone)]
pub struct SplitState {
    pub t: f64,
    pub u: Field,
    pub n_plus: Field,
    pub n_minus: Field,
}

impl SplitState {
    /// Build n± = n ± i omega^{-1}(lambda^2 div v) from a first-order state.
    pub fn from_zakharov(z: &ZakharovState, lambda: f64) -> Result<SplitState> {
        require_unit_lambda(lambda)?;
        let n_t = {
            let mut d = ops::div(&z.v);
            d.scale(Complex64::from(lambda * lambda));
            d
        };
        let w = ops::inv_omega(&n_t);
        let mut n_plus = z.n.clone();
        n_plus.add_assign_scaled(&w, Complex64::i());
        let mut n_minus = z.n.clone();
        n_minus.add_assign_scaled(&w, -Complex64::i());
        Ok(SplitState { t: z.t, u: z.u.clone(), n_plus, n_minus })
    }

    /// Recover (n, n_t) and the gradient part of v. A transverse (divergence
    /// free) part of v is not representable in n± and comes back as zero.
    pub fn to_zakharov(&self, lambda: f64) -> Result<ZakharovState> {
        require_unit_lambda(lambda)?;
        let mut n = self.n_plus.add(&self.n_minus);
        n.scale(Complex64::from(0.5));
        n.realize();
        // n_t = omega (n+ - n-) / (2i)
        let mut diff = self.n_plus.sub(&self.n_minus);
        diff.scale(Complex64::new(0.0, -0.5));
        let mut n_t = ops::omega(&diff);
        n_t.realize();
        let mut v = ops::inv_lap_grad(&n_t);
        v.x.scale(Complex64::from(1.0 / (lambda * lambda)));
        v.y.scale(Complex64::from(1.0 / (lambda * lambda)));
        v.realize();
        Ok(ZakharovState { t: self.t, u: self.u.clone(), n, v })
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        self.u.grid()
    }

    pub fn norms(&self) -> [f64; 3] {
        [self.u.l2(), self.n_plus.l2(), self.n_minus.l2()]
    }

    /// Deviation from the conjugacy n- = conj(n+).
    pub fn conjugacy_residual(&self) -> f64 {
        self.n_plus
            .data()
            .iter()
            .zip(self.n_minus.data())
            .fold(0.0f64, |m, (p, q)| m.max((p.conj() - q).norm()))
    }
}

fn require_unit_lambda(lambda: f64) -> Result<()> {
    if (lambda - 1.0).abs() > 1e-14 {
        return Err(Error::SplitRequiresUnitLambda { lambda });
    }
    Ok(())
}

pub struct SplitStepper {
    grid: Arc<Grid2D>,
    bg: Arc<Background>,
    params: SimParams,
    /// e^{-i tau (|k|^2+1)} for tau = dt/2.
    schro_half: Vec<Complex64>,
    /// e^{-i |k| tau} for tau = dt/2; the n- factor is its conjugate.
    wave_half: Vec<Complex64>,
}

impl SplitStepper {
    pub fn new(grid: &Arc<Grid2D>, bg: Arc<Background>, params: SimParams) -> Result<Self> {
        require_unit_lambda(params.lambda)?;
        let tau = params.dt / 2.0;
        let mut schro_half = Vec::with_capacity(grid.len());
        let mut wave_half = Vec::with_capacity(grid.len());
        for ix in 0..grid.nx() {
            let kx = grid.kx()[ix];
            for iy in 0..grid.ny() {
                let ky = grid.ky()[iy];
                let k2 = kx * kx + ky * ky;
                schro_half.push(Complex64::from_polar(1.0, -tau * (k2 + 1.0)));
                wave_half.push(Complex64::from_polar(1.0, -tau * k2.sqrt()));
            }
        }
        Ok(SplitStepper { grid: grid.clone(), bg, params, schro_half, wave_half })
    }

    fn linear_half(&self, s: &mut SplitState) -> Result<()> {
        let mut u = s.u.to_spectral()?;
        for (z, f) in u.data_mut().iter_mut().zip(&self.schro_half) {
            *z *= f;
        }
        s.u = u.into_physical()?;
        let mut np = s.n_plus.to_spectral()?;
        let mut nm = s.n_minus.to_spectral()?;
        for ((p, m), f) in np.data_mut().iter_mut().zip(nm.data_mut()).zip(&self.wave_half) {
            *p *= f;
            *m *= f.conj();
        }
        s.n_plus = np.into_physical()?;
        s.n_minus = nm.into_physical()?;
        Ok(())
    }

    /// Coupling tendency:
    /// du = -i ((n+ + n-)/2 (u + Q) - Q^2 u),
    /// dn± = ∓ i omega(|u|^2 + 2 Q Re u).
    fn coupling(&self, u: &Field, n_plus: &Field, n_minus: &Field) -> (Field, Field) {
        let grid = &self.grid;
        let ny = grid.ny();
        let mut prod = Vec::with_capacity(grid.len());
        for ix in 0..grid.nx() {
            let q = self.bg.q(ix);
            let q2 = self.bg.q2(ix);
            for iy in 0..ny {
                let i = ix * ny + iy;
                let m = 0.5 * (n_plus.data()[i] + n_minus.data()[i]);
                prod.push(m * (u.data()[i] + q) - q2 * u.data()[i]);
            }
        }
        let mut du = Field::from_parts(grid, Repr::Physical, prod)
            .into_spectral()
            .expect("coupling product");
        if self.params.dealias {
            ops::dealias_in_place(&mut du);
        }
        let mut du = du.into_physical().expect("coupling product");
        du.scale(-Complex64::i());

        let src = coupling_v_spectral(u, &self.bg, self.params.dealias);
        let w = ops::omega(&src).into_physical().expect("omega source");
        // dn+ = -i w; dn- = +i w = -(dn+)
        let mut dnp = w;
        dnp.scale(-Complex64::i());
        (du, dnp)
    }

    fn rk4_coupling(&self, s: &mut SplitState) {
        let dt = self.params.dt;
        let u0 = s.u.clone();
        let np0 = s.n_plus.clone();
        let nm0 = s.n_minus.clone();

        let stage = |du: &Field, dnp: &Field, c: f64| -> (Field, Field, Field) {
            let mut u = u0.clone();
            u.add_assign_scaled(du, (c * dt).into());
            let mut np = np0.clone();
            np.add_assign_scaled(dnp, (c * dt).into());
            let mut nm = nm0.clone();
            nm.add_assign_scaled(dnp, (-c * dt).into());
            (u, np, nm)
        };

        let (k1u, k1n) = self.coupling(&u0, &np0, &nm0);
        let (ua, npa, nma) = stage(&k1u, &k1n, 0.5);
        let (k2u, k2n) = self.coupling(&ua, &npa, &nma);
        let (ub, npb, nmb) = stage(&k2u, &k2n, 0.5);
        let (k3u, k3n) = self.coupling(&ub, &npb, &nmb);
        let (uc, npc, nmc) = stage(&k3u, &k3n, 1.0);
        let (k4u, k4n) = self.coupling(&uc, &npc, &nmc);

        let w1 = Complex64::from(dt / 6.0);
        let w2 = Complex64::from(dt / 3.0);
        s.u.add_assign_scaled(&k1u, w1);
        s.u.add_assign_scaled(&k2u, w2);
        s.u.add_assign_scaled(&k3u, w2);
        s.u.add_assign_scaled(&k4u, w1);
        s.n_plus.add_assign_scaled(&k1n, w1);
        s.n_plus.add_assign_scaled(&k2n, w2);
        s.n_plus.add_assign_scaled(&k3n, w2);
        s.n_plus.add_assign_scaled(&k4n, w1);
        s.n_minus.add_assign_scaled(&k1n, -w1);
        s.n_minus.add_assign_scaled(&k2n, -w2);
        s.n_minus.add_assign_scaled(&k3n, -w2);
        s.n_minus.add_assign_scaled(&k4n, -w1);
    }
}

impl Stepper for SplitStepper {
    type State = SplitState;

    fn step(&self, state: &SplitState) -> Result<SplitState> {
        let before = super::combined_norm(&state.norms());
        let mut s = state.clone();
        self.linear_half(&mut s)?;
        self.rk4_coupling(&mut s);
        self.linear_half(&mut s)?;
        s.t = state.t + self.params.dt;
        check_stability("state (u,n+,n-)", before, super::combined_norm(&s.norms()), s.t)?;
        Ok(s)
    }
}
