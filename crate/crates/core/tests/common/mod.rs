//! Shared helpers for the integration suites: a naive O(N^2) DFT oracle that
//! stays independent of the library's FFT path, and standard initial data.

use std::sync::Arc;

use num_complex::Complex64;
use zsl_core::field::{Field, Repr, VecField2};
use zsl_core::grid::Grid2D;
use zsl_core::solver::ZakharovState;
use zsl_core::Background;

/// Direct-summation forward DFT (unnormalized, same convention as the
/// library): slow, but shares no code with the rustfft path.
pub fn naive_forward(f: &Field) -> Vec<Complex64> {
    assert_eq!(f.repr(), Repr::Physical);
    let g = f.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let mut out = vec![Complex64::default(); nx * ny];
    for mx in 0..nx {
        for my in 0..ny {
            let mut acc = Complex64::default();
            for ix in 0..nx {
                for iy in 0..ny {
                    let phase = -std::f64::consts::TAU
                        * ((mx * ix) as f64 / nx as f64 + (my * iy) as f64 / ny as f64);
                    acc += f.data()[ix * ny + iy] * Complex64::from_polar(1.0, phase);
                }
            }
            out[mx * ny + my] = acc;
        }
    }
    out
}

/// Inverse of [`naive_forward`] with the 1/(nx ny) normalization.
pub fn naive_inverse(grid: &Arc<Grid2D>, spec: &[Complex64]) -> Field {
    let (nx, ny) = (grid.nx(), grid.ny());
    let mut out = Field::zeros(grid, Repr::Physical);
    for ix in 0..nx {
        for iy in 0..ny {
            let mut acc = Complex64::default();
            for mx in 0..nx {
                for my in 0..ny {
                    let phase = std::f64::consts::TAU
                        * ((mx * ix) as f64 / nx as f64 + (my * iy) as f64 / ny as f64);
                    acc += spec[mx * ny + my] * Complex64::from_polar(1.0, phase);
                }
            }
            out.data_mut()[ix * ny + iy] = acc / (nx * ny) as f64;
        }
    }
    out
}

/// Apply a multiplier through the naive transform pair, zeroing the Nyquist
/// rows/columns like the library's derivative operators do.
pub fn naive_multiplier(
    f: &Field,
    sym: impl Fn(f64, f64) -> Complex64,
    zero_nyquist: bool,
) -> Field {
    let g = f.grid().clone();
    let mut spec = naive_forward(f);
    for ix in 0..g.nx() {
        for iy in 0..g.ny() {
            let z = &mut spec[ix * g.ny() + iy];
            if zero_nyquist && (ix == g.nx() / 2 || iy == g.ny() / 2) {
                *z = Complex64::default();
            } else {
                *z *= sym(g.kx()[ix], g.ky()[iy]);
            }
        }
    }
    naive_inverse(&g, &spec)
}

/// 2/3-rule truncation through the naive transform pair.
pub fn naive_dealias(f: &Field) -> Field {
    let g = f.grid().clone();
    let mut spec = naive_forward(f);
    for ix in 0..g.nx() {
        let mx = if ix < g.nx() / 2 { ix as i64 } else { ix as i64 - g.nx() as i64 };
        for iy in 0..g.ny() {
            let my = if iy < g.ny() / 2 { iy as i64 } else { iy as i64 - g.ny() as i64 };
            if 3 * mx.unsigned_abs() as usize > g.nx() || 3 * my.unsigned_abs() as usize > g.ny() {
                spec[ix * g.ny() + iy] = Complex64::default();
            }
        }
    }
    naive_inverse(&g, &spec)
}

/// Gaussian perturbation data: complex u0, and either a prepared or an
/// independent Gaussian wave field.
pub fn gaussian_state(grid: &Arc<Grid2D>, bg: &Background, amplitude: f64, prepared: bool) -> ZakharovState {
    let width = 2.0;
    let u0 = Field::from_fn(grid, |x, y| {
        Complex64::new(amplitude, 0.3 * amplitude)
            * (-(x * x + y * y) / (2.0 * width * width)).exp()
    });
    let n0 = if prepared {
        zsl_core::sweep::prepared_wave_field(&u0, bg)
    } else {
        Field::from_fn_re(grid, |x, y| {
            amplitude * (-(x * x + y * y) / (2.0 * width * width)).exp()
        })
    };
    ZakharovState { t: 0.0, u: u0, n: n0, v: VecField2::zeros(grid, Repr::Physical) }
}
