//! The subsonic-limit experiment: run the lambda-family of perturbed systems
//! alongside the limiting perturbed NLS and quantify convergence of
//! (u_lambda, n_lambda) toward the constrained limit
//! n + |u|^2 + 2 Q Re(u) = 0.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::diagnostics;
use crate::error::{Error, Result};
use crate::field::{Field, VecField2};
use crate::grid::Grid2D;
use crate::ops;
use crate::soliton::Background;
use crate::solver::{evolve, PnlsState, PnlsStepper, SimParams, StrangStepper, ZakharovState};

/// L2 norm of n + |u|^2 + 2 Q Re(u), the limit-constraint violation.
pub fn constraint_error(state: &ZakharovState, bg: &Background) -> f64 {
    diagnostics::constraint_l2(state, bg)
}

/// Well-prepared wave field n0 = -(|u0|^2 + 2 Q Re u0) for given u0.
pub fn prepared_wave_field(u0: &Field, bg: &Background) -> Field {
    let grid = u0.grid().clone();
    let ny = grid.ny();
    let mut n = Field::zeros(&grid, crate::field::Repr::Physical);
    for ix in 0..grid.nx() {
        let q2 = 2.0 * bg.q(ix);
        for iy in 0..ny {
            let i = ix * ny + iy;
            let u = u0.data()[i];
            n.data_mut()[i] = Complex64::new(-(u.norm_sqr() + q2 * u.re), 0.0);
        }
    }
    n
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    /// Strictly increasing acoustic speeds.
    pub lambdas: Vec<f64>,
    pub t_final: f64,
    /// Base time step; member lambda runs at dt0/lambda.
    pub dt0: f64,
    pub dealias: bool,
    /// Re-run the largest lambda at half the step to bound the scheme-error
    /// share of e_u.
    pub control_run: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.lambdas.is_empty() || self.lambdas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter {
                name: "lambdas",
                reason: format!("must be strictly increasing and nonempty (got {:?})", self.lambdas),
            });
        }
        if self.lambdas[0] <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "lambdas",
                reason: "must be positive".into(),
            });
        }
        if !(self.dt0 > 0.0) || !(self.t_final > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt0/t_final",
                reason: "must be positive".into(),
            });
        }
        Ok(())
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            lambdas: vec![1.0, 2.0, 4.0, 8.0, 16.0],
            t_final: 0.5,
            dt0: 2e-3,
            dealias: true,
            control_run: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    pub lambda: f64,
    pub dt: f64,
    /// ||n + |u|^2 + 2 Q Re u||_2 at the final time.
    pub e_constraint: f64,
    /// H^1 distance of u_lambda to the PNLS solution at the final time.
    pub e_u: f64,
    pub failed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub entries: Vec<SweepEntry>,
    /// e_constraint(lambda_i) / e_constraint(lambda_{i+1}) for adjacent pairs.
    pub constraint_ratios: Vec<f64>,
    /// |e_u(dt) - e_u(dt/2)| / e_u(dt) at the largest lambda, if run.
    pub control_scheme_fraction: Option<f64>,
}

impl SweepReport {
    pub fn constraint_strictly_decreasing(&self) -> bool {
        let v: Vec<f64> =
            self.entries.iter().filter(|e| !e.failed).map(|e| e.e_constraint).collect();
        v.len() == self.entries.len() && v.windows(2).all(|w| w[1] < w[0])
    }

    pub fn e_u_decreasing(&self) -> bool {
        let v: Vec<f64> = self.entries.iter().filter(|e| !e.failed).map(|e| e.e_u).collect();
        v.len() == self.entries.len() && v.windows(2).all(|w| w[1] < w[0])
    }
}

fn run_member(
    grid: &Arc<Grid2D>,
    bg: &Arc<Background>,
    u0: &Field,
    n0: &Field,
    v0: &VecField2,
    lambda: f64,
    dt: f64,
    steps: usize,
    dealias: bool,
) -> Result<ZakharovState> {
    let mut params = SimParams::new(lambda, dt)?;
    params.dealias = dealias;
    let stepper = StrangStepper::new(grid, bg.clone(), params);
    let state0 = ZakharovState { t: 0.0, u: u0.clone(), n: n0.clone(), v: v0.clone() };
    evolve(&stepper, state0, steps, 0, |_, _| {})
}

/// Run every lambda member and the PNLS reference; fill the report.
/// Members run concurrently; a diverging member is marked failed and the
/// sweep continues.
pub fn run_sweep(
    grid: &Arc<Grid2D>,
    bg: &Arc<Background>,
    u0: &Field,
    n0: &Field,
    v0: &VecField2,
    cfg: &SweepConfig,
) -> Result<SweepReport> {
    cfg.validate()?;

    // PNLS reference at the base step.
    let pnls_steps = (cfg.t_final / cfg.dt0).round() as usize;
    let mut pnls_params = SimParams::new(1.0, cfg.t_final / pnls_steps as f64)?;
    pnls_params.dealias = cfg.dealias;
    let pnls_stepper = PnlsStepper::new(grid, bg.clone(), pnls_params);
    let pnls_final =
        evolve(&pnls_stepper, PnlsState::new(0.0, u0.clone()), pnls_steps, 0, |_, _| {})?;

    let run_one = |lambda: f64, refine: u32| -> SweepEntry {
        let dt_target = cfg.dt0 / lambda / f64::from(refine);
        let steps = (cfg.t_final / dt_target).round().max(1.0) as usize;
        let dt = cfg.t_final / steps as f64;
        match run_member(grid, bg, u0, n0, v0, lambda, dt, steps, cfg.dealias) {
            Ok(final_state) => {
                let diff = final_state.u.sub(&pnls_final.u);
                SweepEntry {
                    lambda,
                    dt,
                    e_constraint: constraint_error(&final_state, bg),
                    e_u: ops::sobolev_norm(&diff, 1.0),
                    failed: false,
                    error: None,
                }
            }
            Err(e) => SweepEntry {
                lambda,
                dt,
                e_constraint: f64::NAN,
                e_u: f64::NAN,
                failed: true,
                error: Some(e.to_string()),
            },
        }
    };

    let mut jobs: Vec<(f64, u32)> = cfg.lambdas.iter().map(|&l| (l, 1)).collect();
    if cfg.control_run {
        jobs.push((*cfg.lambdas.last().expect("nonempty"), 2));
    }
    let mut results: Vec<SweepEntry> =
        jobs.par_iter().map(|&(lambda, refine)| run_one(lambda, refine)).collect();

    let control = if cfg.control_run { results.pop() } else { None };
    let entries = results;

    let mut constraint_ratios = Vec::new();
    for w in entries.windows(2) {
        if !w[0].failed && !w[1].failed {
            constraint_ratios.push(w[0].e_constraint / w[1].e_constraint);
        }
    }

    let control_scheme_fraction = control.and_then(|c| {
        let base = entries.last()?;
        if base.failed || c.failed {
            return None;
        }
        Some((base.e_u - c.e_u).abs() / base.e_u.max(f64::MIN_POSITIVE))
    });

    Ok(SweepReport { entries, constraint_ratios, control_scheme_fraction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Repr;

    #[test]
    fn prepared_data_has_zero_constraint() {
        let grid = Grid2D::new(64, 64, 40.0, 40.0).unwrap();
        let bg = Background::new(&grid);
        let u0 = Field::from_fn(&grid, |x, y| {
            Complex64::new(0.1 * (-0.08 * (x * x + y * y)).exp(), 0.0)
        });
        let n0 = prepared_wave_field(&u0, &bg);
        let state = ZakharovState {
            t: 0.0,
            u: u0,
            n: n0,
            v: VecField2::zeros(&grid, Repr::Physical),
        };
        assert!(constraint_error(&state, &bg) < 1e-12);
    }

    #[test]
    fn bare_n_constraint_is_its_norm() {
        let grid = Grid2D::new(32, 32, 40.0, 40.0).unwrap();
        let bg = Background::new(&grid);
        let mut state = ZakharovState::zero(&grid);
        state.n = Field::from_fn_re(&grid, |x, y| 0.2 * (-0.1 * (x * x + y * y)).exp());
        let expect = state.n.l2();
        assert!((constraint_error(&state, &bg) - expect).abs() < 1e-12);
    }

    #[test]
    fn zero_data_sweep_is_all_zero() {
        let grid = Grid2D::new(32, 32, 40.0, 40.0).unwrap();
        let bg = Arc::new(Background::new(&grid));
        let cfg = SweepConfig {
            lambdas: vec![1.0, 2.0],
            t_final: 0.02,
            dt0: 1e-2,
            dealias: true,
            control_run: false,
        };
        let z = ZakharovState::zero(&grid);
        let report = run_sweep(&grid, &bg, &z.u, &z.n, &z.v, &cfg).unwrap();
        for e in &report.entries {
            assert!(!e.failed);
            assert_eq!(e.e_constraint, 0.0);
            assert_eq!(e.e_u, 0.0);
        }
    }

    #[test]
    fn config_rejects_unordered_lambdas() {
        let cfg = SweepConfig { lambdas: vec![2.0, 1.0], ..SweepConfig::default() };
        assert!(cfg.validate().is_err());
    }
}
