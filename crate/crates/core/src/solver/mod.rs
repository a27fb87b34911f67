//! Time integration of the perturbed Zakharov system in perturbation
//! variables, where the zero state is an exact equilibrium.
//!
//! Three integrators share the same Strang pattern (exact linear group for
//! half a step, RK4 on the coupling terms for a full step, half linear step):
//!
//! * [`StrangStepper`] — first-order `(u, n, v)` formulation,
//! * [`SplitStepper`] — half-wave `n± = n ± i omega^{-1} n_t` formulation
//!   (lambda = 1 only),
//! * [`PnlsStepper`] — the subsonic-limit perturbed NLS.

mod pnls;
mod split;
mod strang;

pub use pnls::{PnlsState, PnlsStepper};
pub use split::{SplitState, SplitStepper};
pub use strang::StrangStepper;

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Field, Repr, VecField2};
use crate::grid::Grid2D;
use crate::ops;
use crate::soliton::Background;

/// Parameters shared by the integrators.
#[derive(Debug, Clone)]
pub struct SimParams {
    /// Ion acoustic speed parameter of the wave equation.
    pub lambda: f64,
    pub dt: f64,
    /// Apply the 2/3 rule to every pointwise product.
    pub dealias: bool,
}

impl SimParams {
    pub fn new(lambda: f64, dt: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: format!("must be > 0 (got {lambda})"),
            });
        }
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter { name: "dt", reason: format!("must be > 0 (got {dt})") });
        }
        Ok(SimParams { lambda, dt, dealias: true })
    }
}

/// Perturbation unknowns of the first-order formulation at one time.
#[derive(Debug, Clone)]
pub struct ZakharovState {
    pub t: f64,
    /// Schroedinger perturbation in the gauged frame (complex).
    pub u: Field,
    /// Wave perturbation (real).
    pub n: Field,
    /// Velocity variable with n_t = lambda^2 div(v) (real 2-vector).
    pub v: VecField2,
}

impl ZakharovState {
    pub fn zero(grid: &Arc<Grid2D>) -> Self {
        ZakharovState {
            t: 0.0,
            u: Field::zeros(grid, Repr::Physical),
            n: Field::zeros(grid, Repr::Physical),
            v: VecField2::zeros(grid, Repr::Physical),
        }
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        self.u.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.n.is_finite() && self.v.is_finite()
    }

    /// L2 norms of (u, n, v).
    pub fn norms(&self) -> [f64; 3] {
        [self.u.l2(), self.n.l2(), self.v.l2()]
    }

    /// Largest of the component L2 norms; the soliton residual of an
    /// equilibrium run.
    pub fn max_norm(&self) -> f64 {
        self.norms().into_iter().fold(0.0, f64::max)
    }
}

/// Full right-hand side of the first-order formulation; reference for tests
/// and the basis of the coupling substep.
#[derive(Debug, Clone)]
pub struct Tendency {
    pub du: Field,
    pub dn: Field,
    pub dv: VecField2,
}

/// u-equation coupling product n u + Q n - Q^2 u, dealiased, physical.
fn coupling_u(u: &Field, n: &Field, bg: &Background, dealias: bool) -> Field {
    let grid = u.grid().clone();
    let ny = grid.ny();
    let mut data = Vec::with_capacity(grid.len());
    for ix in 0..grid.nx() {
        let q = bg.q(ix);
        let q2 = bg.q2(ix);
        for iy in 0..ny {
            let i = ix * ny + iy;
            let nv = n.data()[i].re;
            data.push(n.data()[i] * u.data()[i] + Complex64::new(q * nv, 0.0) - q2 * u.data()[i]);
        }
    }
    let f = Field::from_parts(&grid, Repr::Physical, data);
    if dealias {
        let mut s = f.into_spectral().expect("product");
        ops::dealias_in_place(&mut s);
        s.into_physical().expect("product")
    } else {
        f
    }
}

/// Wave-equation source |u|^2 + 2 Q Re(u) as a (dealiased) spectral field.
fn coupling_v_spectral(u: &Field, bg: &Background, dealias: bool) -> Field {
    let grid = u.grid().clone();
    let ny = grid.ny();
    let mut data = Vec::with_capacity(grid.len());
    for ix in 0..grid.nx() {
        let q2 = 2.0 * bg.q(ix);
        for iy in 0..ny {
            let z = u.data()[ix * ny + iy];
            data.push(Complex64::new(z.norm_sqr() + q2 * z.re, 0.0));
        }
    }
    let mut s = Field::from_parts(&grid, Repr::Physical, data).into_spectral().expect("product");
    if dealias {
        ops::dealias_in_place(&mut s);
    }
    s
}

/// Full tendency of the first-order system:
/// du = i(Lap u - u - nu - Qn + Q^2 u), dn = lambda^2 div v,
/// dv = grad(n) + grad(|u|^2 + 2 Q Re u).
pub fn rhs(state: &ZakharovState, params: &SimParams, bg: &Background) -> Result<Tendency> {
    state.u.check_same_grid(&state.n)?;
    let lam2 = params.lambda * params.lambda;

    let lap_u = ops::laplacian(&state.u);
    let coup = coupling_u(&state.u, &state.n, bg, params.dealias);
    let mut du = Field::zeros(state.grid(), Repr::Physical);
    for (((d, l), c), u) in
        du.data_mut().iter_mut().zip(lap_u.data()).zip(coup.data()).zip(state.u.data())
    {
        *d = Complex64::i() * (l - u - c);
    }

    let mut dn = ops::div(&state.v);
    dn.scale(Complex64::new(lam2, 0.0));

    let src = coupling_v_spectral(&state.u, bg, params.dealias);
    let n_spec = state.n.to_spectral()?;
    let total = n_spec.add(&src);
    let grad_spec = ops::grad(&total);
    let dv = VecField2 { x: grad_spec.x.into_physical()?, y: grad_spec.y.into_physical()? };

    let t = Tendency { du, dn, dv };
    if !(t.du.is_finite() && t.dn.is_finite() && t.dv.is_finite()) {
        return Err(Error::NonFinite { context: "rhs".into(), t: state.t });
    }
    Ok(t)
}

/// Abort when the combined state norm jumps by more than 10x in one step (or
/// stops being finite). A state that starts at exactly zero trips only on a
/// non-vanishing result; exact zeros propagate as exact zeros.
fn check_stability(context: &str, before: f64, after: f64, t: f64) -> Result<()> {
    if !after.is_finite() {
        return Err(Error::NonFinite { context: context.into(), t });
    }
    let unstable = if before == 0.0 { after > 1e-6 } else { after > 10.0 * before };
    if unstable {
        let factor = if before == 0.0 { f64::INFINITY } else { after / before };
        return Err(Error::Unstable { context: context.into(), t, factor });
    }
    Ok(())
}

/// Euclidean combination of component norms, the scale the stability guard
/// watches.
fn combined_norm(norms: &[f64]) -> f64 {
    norms.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Generic fixed-step driver over any stepper.
pub trait Stepper {
    type State;
    fn step(&self, state: &Self::State) -> Result<Self::State>;
}

/// Advance `n_steps` steps, invoking the observer on the initial state, after
/// every `stride` steps (when `stride > 0`), and on the final state.
/// Deterministic for fixed inputs.
pub fn evolve<S: Stepper>(
    stepper: &S,
    state0: S::State,
    n_steps: usize,
    stride: usize,
    mut observer: impl FnMut(usize, &S::State),
) -> Result<S::State> {
    observer(0, &state0);
    let mut state = state0;
    for step in 1..=n_steps {
        state = stepper.step(&state)?;
        if (stride > 0 && step % stride == 0 && step != n_steps) || step == n_steps {
            observer(step, &state);
        }
    }
    Ok(state)
}

/// Exact per-mode propagator tables for the linear group over a fixed
/// interval tau: the Schroedinger factor e^{-i tau (|k|^2 + 1)} and the
/// acoustic rotation with speed lambda diagonalized per mode.
struct LinearTables {
    /// e^{-i tau (|k|^2+1)} per mode.
    schro: Vec<Complex64>,
    /// cos(lambda |k| tau) per mode.
    ac_cos: Vec<f64>,
    /// (lambda/|k|) sin(lambda |k| tau); 0 at k = 0.
    ac_sin_n: Vec<f64>,
    /// (|k|/lambda) sin(lambda |k| tau); 0 at k = 0.
    ac_sin_b: Vec<f64>,
}

impl LinearTables {
    fn new(grid: &Grid2D, lambda: f64, tau: f64) -> Self {
        let n = grid.len();
        let mut schro = Vec::with_capacity(n);
        let mut ac_cos = Vec::with_capacity(n);
        let mut ac_sin_n = Vec::with_capacity(n);
        let mut ac_sin_b = Vec::with_capacity(n);
        for ix in 0..grid.nx() {
            let kx = grid.kx()[ix];
            for iy in 0..grid.ny() {
                let ky = grid.ky()[iy];
                let k2 = kx * kx + ky * ky;
                let k = k2.sqrt();
                schro.push(Complex64::from_polar(1.0, -tau * (k2 + 1.0)));
                let (s, c) = (lambda * k * tau).sin_cos();
                ac_cos.push(c);
                if k == 0.0 {
                    ac_sin_n.push(0.0);
                    ac_sin_b.push(0.0);
                } else {
                    ac_sin_n.push(lambda / k * s);
                    ac_sin_b.push(k / lambda * s);
                }
            }
        }
        LinearTables { schro, ac_cos, ac_sin_n, ac_sin_b }
    }

    fn apply_schroedinger(&self, u_spec: &mut Field) {
        for (z, f) in u_spec.data_mut().iter_mut().zip(&self.schro) {
            *z *= f;
        }
    }

    /// Rotate (n_hat, k.v_hat) per mode, leaving the transverse part of v
    /// untouched.
    fn apply_acoustic(&self, grid: &Grid2D, n_spec: &mut Field, v_spec: &mut VecField2) {
        let ny = grid.ny();
        for ix in 0..grid.nx() {
            let kx = grid.kx()[ix];
            for iy in 0..ny {
                let i = ix * ny + iy;
                let ky = grid.ky()[iy];
                let k2 = kx * kx + ky * ky;
                if k2 == 0.0 {
                    continue;
                }
                let vx = v_spec.x.data()[i];
                let vy = v_spec.y.data()[i];
                let b = kx * vx + ky * vy;
                let n0 = n_spec.data()[i];
                let c = self.ac_cos[i];
                let n1 = c * n0 + Complex64::i() * self.ac_sin_n[i] * b;
                let b1 = c * b + Complex64::i() * self.ac_sin_b[i] * n0;
                n_spec.data_mut()[i] = n1;
                let db = (b1 - b) / k2;
                v_spec.x.data_mut()[i] = vx + db * kx;
                v_spec.y.data_mut()[i] = vy + db * ky;
            }
        }
    }
}
