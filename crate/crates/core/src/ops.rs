//! Fourier-multiplier operators, 2/3-rule dealiasing and Sobolev norms.
//!
//! Multipliers act mode-by-mode on the spectral representation. Fields in
//! physical representation are transformed, scaled and transformed back, so
//! every operator returns a field in the caller's representation.
//!
//! Conventions fixed here:
//! * zero modes of `1/|k|` and `-ik/|k|^2` map to 0 (mean-free convention);
//! * the Nyquist mode is zeroed inside every derivative multiplier so odd
//!   derivatives of real fields stay real.

use num_complex::Complex64;

use crate::error::Result;
use crate::field::{Field, Repr, VecField2};

/// Scale every mode by `sym(kx, ky)`.
pub fn apply_multiplier(f: &Field, sym: impl Fn(f64, f64) -> Complex64) -> Field {
    let mut s = f.spectral();
    apply_in_spectral(&mut s, sym, false);
    match f.repr() {
        Repr::Spectral => s,
        Repr::Physical => s.into_physical().expect("spectral -> physical"),
    }
}

fn apply_in_spectral(f: &mut Field, sym: impl Fn(f64, f64) -> Complex64, zero_nyquist: bool) {
    debug_assert_eq!(f.repr(), Repr::Spectral);
    let grid = f.grid().clone();
    let (nyx, nyy) = grid.nyquist();
    let data = f.data_mut();
    for ix in 0..grid.nx() {
        let kx = grid.kx()[ix];
        let row = &mut data[ix * grid.ny()..(ix + 1) * grid.ny()];
        if zero_nyquist && ix == nyx {
            row.fill(Complex64::default());
            continue;
        }
        for (iy, z) in row.iter_mut().enumerate() {
            if zero_nyquist && iy == nyy {
                *z = Complex64::default();
            } else {
                *z *= sym(kx, grid.ky()[iy]);
            }
        }
    }
}

fn derivative_multiplier(f: &Field, sym: impl Fn(f64, f64) -> Complex64) -> Field {
    let mut s = f.spectral();
    apply_in_spectral(&mut s, sym, true);
    match f.repr() {
        Repr::Spectral => s,
        Repr::Physical => s.into_physical().expect("spectral -> physical"),
    }
}

pub fn laplacian(f: &Field) -> Field {
    derivative_multiplier(f, |kx, ky| Complex64::new(-(kx * kx + ky * ky), 0.0))
}

/// omega = (-Laplacian)^{1/2}, the half-wave symbol |k|.
pub fn omega(f: &Field) -> Field {
    apply_multiplier(f, |kx, ky| Complex64::new(kx.hypot(ky), 0.0))
}

/// omega^{-1} with the zero mode mapped to 0.
pub fn inv_omega(f: &Field) -> Field {
    apply_multiplier(f, |kx, ky| {
        let k = kx.hypot(ky);
        Complex64::new(if k == 0.0 { 0.0 } else { 1.0 / k }, 0.0)
    })
}

pub fn grad(f: &Field) -> VecField2 {
    VecField2 {
        x: derivative_multiplier(f, |kx, _| Complex64::new(0.0, kx)),
        y: derivative_multiplier(f, |_, ky| Complex64::new(0.0, ky)),
    }
}

pub fn div(v: &VecField2) -> Field {
    let dx = derivative_multiplier(&v.x, |kx, _| Complex64::new(0.0, kx));
    let dy = derivative_multiplier(&v.y, |_, ky| Complex64::new(0.0, ky));
    dx.add(&dy)
}

/// The symbol -ik/|k|^2 of `Delta^{-1} grad`, zero mode mapped to 0.
pub fn inv_lap_grad(f: &Field) -> VecField2 {
    let comp = |axis: usize| {
        derivative_multiplier(f, |kx, ky| {
            let k2 = kx * kx + ky * ky;
            if k2 == 0.0 {
                Complex64::default()
            } else {
                Complex64::new(0.0, -(if axis == 0 { kx } else { ky }) / k2)
            }
        })
    };
    VecField2 { x: comp(0), y: comp(1) }
}

/// 2/3-rule truncation. Requires spectral representation; idempotent.
pub fn dealias(f: &Field) -> Result<Field> {
    f.expect_repr(Repr::Spectral)?;
    let mut out = f.clone();
    dealias_in_place(&mut out);
    Ok(out)
}

pub(crate) fn dealias_in_place(f: &mut Field) {
    debug_assert_eq!(f.repr(), Repr::Spectral);
    let grid = f.grid().clone();
    let data = f.data_mut();
    for ix in 0..grid.nx() {
        for iy in 0..grid.ny() {
            if !grid.in_dealias_band(ix, iy) {
                data[ix * grid.ny() + iy] = Complex64::default();
            }
        }
    }
}

/// Discrete H^s norm: (sum_k (1+|k|^2)^s |f_hat(k)|^2 w)^{1/2} with the
/// Parseval cell weight w; s = 0 agrees with the physical L2 norm.
pub fn sobolev_norm(f: &Field, s: f64) -> f64 {
    let spec = f.spectral();
    let grid = spec.grid();
    let w = grid.cell_area() / grid.len() as f64;
    let mut acc = 0.0;
    for ix in 0..grid.nx() {
        let kx2 = grid.kx()[ix] * grid.kx()[ix];
        for iy in 0..grid.ny() {
            let k2 = kx2 + grid.ky()[iy] * grid.ky()[iy];
            acc += (1.0 + k2).powf(s) * spec.data()[grid.idx(ix, iy)].norm_sqr();
        }
    }
    (acc * w).sqrt()
}

/// Pointwise product of physical fields.
pub fn product(a: &Field, b: &Field) -> Field {
    debug_assert_eq!(a.repr(), Repr::Physical);
    debug_assert_eq!(b.repr(), Repr::Physical);
    let data = a.data().iter().zip(b.data()).map(|(x, y)| x * y).collect();
    Field::from_parts(a.grid(), Repr::Physical, data)
}

/// Dealiased pointwise product: form the product in physical space, truncate
/// its spectrum, return physical.
pub fn dealiased_product(a: &Field, b: &Field) -> Field {
    let mut p = product(a, b).into_spectral().expect("product -> spectral");
    dealias_in_place(&mut p);
    p.into_physical().expect("spectral -> physical")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2D;
    use approx::assert_relative_eq;
    use std::f64::consts::TAU;

    #[test]
    fn constant_transforms_to_dc() {
        let g = Grid2D::square(16, 1.0).unwrap();
        let f = Field::constant(&g, Complex64::new(1.0, 0.0));
        let s = f.to_spectral().unwrap();
        assert_relative_eq!(s.data()[0].re, 256.0, max_relative = 1e-12);
        for i in 1..s.len() {
            assert!(s.data()[i].norm() < 1e-12);
        }
    }

    #[test]
    fn cosine_has_two_symmetric_modes() {
        let g = Grid2D::square(32, 5.0).unwrap();
        let f = Field::from_fn_re(&g, |x, _| (TAU * x / 5.0).cos());
        let s = f.to_spectral().unwrap();
        let n = 32usize;
        let amp = (n * n) as f64 / 2.0;
        for ix in 0..n {
            for iy in 0..n {
                let v = s.data()[ix * n + iy].norm();
                if iy == 0 && (ix == 1 || ix == n - 1) {
                    assert_relative_eq!(v, amp, max_relative = 1e-12);
                } else {
                    assert!(v < 1e-13 * amp, "leak at ({ix},{iy}): {v}");
                }
            }
        }
    }

    #[test]
    fn omega_on_plane_wave() {
        // k = (3,4) on a 2*pi box: omega multiplies by 5.
        let g = Grid2D::square(32, TAU).unwrap();
        let f = Field::from_fn(&g, |x, y| Complex64::from_polar(1.0, 3.0 * x + 4.0 * y));
        let w = omega(&f);
        for (a, b) in w.data().iter().zip(f.data()) {
            assert!((a - 5.0 * b).norm() < 1e-10);
        }
    }

    #[test]
    fn inv_omega_kills_constants() {
        let g = Grid2D::square(16, 1.0).unwrap();
        let f = Field::constant(&g, Complex64::new(3.0, 0.0));
        assert!(inv_omega(&f).linf() < 1e-14);
    }

    #[test]
    fn omega_inv_omega_removes_mean_only() {
        let g = Grid2D::square(32, 3.0).unwrap();
        let f = Field::from_fn_re(&g, |x, y| {
            0.5 + (TAU * x / 3.0).sin() * (2.0 * TAU * y / 3.0).cos() + 0.3 * (2.0 * TAU * x / 3.0).cos()
        });
        let back = omega(&inv_omega(&f));
        let mean = f.mean();
        for (a, b) in back.data().iter().zip(f.data()) {
            assert!((a - (b - mean)).norm() < 1e-12);
        }
    }

    #[test]
    fn dealias_examples() {
        let g = Grid2D::square(64, 1.0).unwrap();
        // mode (1,1) survives
        let mut s = Field::zeros(&g, Repr::Spectral);
        s.data_mut()[g.idx(1, 1)] = Complex64::new(1.0, 0.0);
        let d = dealias(&s).unwrap();
        assert_eq!(d.data()[g.idx(1, 1)], Complex64::new(1.0, 0.0));
        // Nyquist-only field is wiped
        let mut s = Field::zeros(&g, Repr::Spectral);
        s.data_mut()[g.idx(32, 0)] = Complex64::new(1.0, 0.0);
        assert!(dealias(&s).unwrap().linf() == 0.0);
        // idempotent, bit-exact
        let f = Field::from_fn_re(&g, |x, y| (37.0 * x).sin() * (23.0 * y).cos());
        let once = dealias(&f.to_spectral().unwrap()).unwrap();
        let twice = dealias(&once).unwrap();
        assert_eq!(once.data(), twice.data());
        // physical input is a usage error
        assert!(dealias(&f).is_err());
    }

    #[test]
    fn sobolev_norm_examples() {
        let g = Grid2D::square(16, 2.0).unwrap();
        let zero = Field::zeros(&g, Repr::Physical);
        assert_eq!(sobolev_norm(&zero, 1.7), 0.0);

        // constant c on box of area A: |c| sqrt(A) for any s
        let c = Field::constant(&g, Complex64::new(-2.5, 0.0));
        for s in [-1.0, 0.0, 2.3] {
            assert_relative_eq!(sobolev_norm(&c, s), 2.5 * 2.0, max_relative = 1e-12);
        }

        // unit-L2 single mode k=(kx,0): H^1 norm is (1+kx^2)^{1/2}
        let g = Grid2D::square(16, TAU).unwrap();
        let f = Field::from_fn(&g, |x, _| Complex64::from_polar(1.0 / TAU, x));
        assert_relative_eq!(f.l2(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(sobolev_norm(&f, 1.0), 2.0f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn mismatched_repr_is_an_error() {
        let g = Grid2D::square(16, 1.0).unwrap();
        let f = Field::zeros(&g, Repr::Physical);
        assert!(f.to_physical().is_err());
        assert!(f.to_spectral().unwrap().to_spectral().is_err());
    }
}
