mod common;
use std::sync::Arc;
use zsl_core::grid::Grid2D;
use zsl_core::solver::{evolve, PnlsState, PnlsStepper, SimParams};
use zsl_core::Background;

#[test]
fn probe() {
    let grid = Grid2D::new(256, 64, 40.0, 40.0).unwrap();
    let bg = Arc::new(Background::new(&grid));
    let u0 = common::gaussian_state(&grid, &bg, 0.1, false).u;
    for dt in [2e-3f64, 1e-3, 5e-4] {
        let steps = (0.5 / dt).round() as usize;
        let stepper = PnlsStepper::new(&grid, bg.clone(), SimParams::new(1.0, dt).unwrap());
        let s0 = PnlsState::new(0.0, u0.clone());
        let m0 = stepper.mass(&s0);
        let h0 = stepper.hamiltonian(&s0);
        let mut worst_m = 0.0f64;
        let mut worst_h = 0.0f64;
        evolve(&stepper, s0, steps, 10, |_, s| {
            worst_m = worst_m.max((stepper.mass(s) - m0).abs());
            worst_h = worst_h.max((stepper.hamiltonian(s) - h0).abs());
        }).unwrap();
        println!("dt={dt:.1e}  mass drift={worst_m:.3e}  ham drift={worst_h:.3e}  (m0={m0:.4}, h0={h0:.4})");
    }
}
