//! Property tests for the spectral toolbox.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use zsl_core::field::{Field, Repr, VecField2};
use zsl_core::grid::Grid2D;
use zsl_core::ops;

fn random_field(seed: u64, n: usize, l: f64) -> Field {
    // low-order trig polynomial: smooth, well inside the resolved band
    let grid = Grid2D::square(n, l).unwrap();
    let mut s = seed;
    let mut next = move || {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        (s % 1000) as f64 / 1000.0 - 0.5
    };
    let coeffs: Vec<(f64, f64, f64)> =
        (0..5).map(|_| (next(), next() * 4.0, next() * 4.0)).collect();
    Field::from_fn_re(&grid, move |x, y| {
        let mut acc = 0.0;
        for (a, mx, my) in &coeffs {
            acc += a
                * (std::f64::consts::TAU * mx.round() * x / l
                    + std::f64::consts::TAU * my.round() * y / l)
                    .cos();
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parseval_and_roundtrip(seed in 0u64..5000) {
        let f = random_field(seed.wrapping_add(1), 32, 11.0);
        let spec = f.to_spectral().unwrap();
        prop_assert!((f.l2() - spec.l2()).abs() <= 1e-12 * f.l2().max(1.0));
        let back = spec.into_physical().unwrap();
        let diff = back.sub(&f);
        prop_assert!(diff.linf() <= 1e-12 * f.linf().max(1.0));
    }

    #[test]
    fn multiplier_composition(seed in 0u64..5000) {
        let f = random_field(seed.wrapping_add(7), 32, 9.0);
        let s1 = |kx: f64, ky: f64| Complex64::new(0.3 * kx - ky, 0.1);
        let s2 = |kx: f64, ky: f64| Complex64::new((kx * ky).cos(), kx);
        let a = ops::apply_multiplier(&ops::apply_multiplier(&f, s1), s2);
        let b = ops::apply_multiplier(&f, |kx, ky| s1(kx, ky) * s2(kx, ky));
        let diff = a.sub(&b);
        prop_assert!(diff.linf() <= 1e-12 * a.linf().max(1.0));
    }

    #[test]
    fn reality_preservation(seed in 0u64..5000) {
        let f = random_field(seed.wrapping_add(13), 32, 15.0);
        for op in [ops::laplacian, ops::omega, ops::inv_omega] {
            prop_assert!(op(&f).imag_linf() <= 1e-12);
        }
        let g = ops::grad(&f);
        prop_assert!(g.x.imag_linf() <= 1e-12);
        prop_assert!(g.y.imag_linf() <= 1e-12);
        let v = ops::inv_lap_grad(&f);
        prop_assert!(ops::div(&v).imag_linf() <= 1e-12);
    }

    #[test]
    fn div_grad_is_laplacian(seed in 0u64..5000) {
        let f = random_field(seed.wrapping_add(23), 32, 13.0);
        let a = ops::div(&ops::grad(&f));
        let b = ops::laplacian(&f);
        let diff = a.sub(&b);
        prop_assert!(diff.linf() <= 1e-10 * b.linf().max(1.0));
    }

    #[test]
    fn sobolev_monotone_in_s(seed in 0u64..5000, s1 in -2.0f64..2.0, ds in 0.0f64..2.0) {
        let f = random_field(seed.wrapping_add(37), 32, 9.0);
        let lo = ops::sobolev_norm(&f, s1);
        let hi = ops::sobolev_norm(&f, s1 + ds);
        prop_assert!(hi >= lo * (1.0 - 1e-12));
    }

    #[test]
    fn dealias_matches_naive_oracle(seed in 0u64..500) {
        let f = random_field(seed.wrapping_add(41), 16, 7.0);
        let ours = ops::dealias(&f.to_spectral().unwrap()).unwrap().into_physical().unwrap();
        let oracle = common::naive_dealias(&f);
        let diff = ours.sub(&oracle);
        prop_assert!(diff.linf() <= 1e-11 * f.linf().max(1.0));
    }
}

#[test]
fn hermitian_symmetry_of_real_fields() {
    let f = random_field(99, 32, 10.0);
    let s = f.to_spectral().unwrap();
    let g = s.grid();
    let n = g.nx();
    let scale = s.linf().max(1.0);
    for ix in 0..n {
        for iy in 0..n {
            let a = s.data()[g.idx(ix, iy)];
            let b = s.data()[g.idx((n - ix) % n, (n - iy) % n)];
            assert!((a - b.conj()).norm() <= 1e-12 * scale);
        }
    }
}

#[test]
fn transform_matches_naive_dft() {
    let grid = Grid2D::new(16, 12, 5.0, 3.0).unwrap();
    let f = Field::from_fn(&grid, |x, y| Complex64::new((x * 1.3).sin(), (y * 2.1).cos() * 0.4));
    let ours = f.to_spectral().unwrap();
    let oracle = common::naive_forward(&f);
    let scale = ours.linf().max(1.0);
    for (a, b) in ours.data().iter().zip(&oracle) {
        assert!((a - b).norm() <= 1e-11 * scale);
    }
}

#[test]
fn vector_norms() {
    let grid = Grid2D::square(16, 4.0).unwrap();
    let v = VecField2 {
        x: Field::constant(&grid, Complex64::new(3.0, 0.0)),
        y: Field::constant(&grid, Complex64::new(4.0, 0.0)),
    };
    let _ = Repr::Physical;
    assert!((v.l2() - 5.0 * 4.0).abs() < 1e-12); // |(3,4)| * sqrt(area)
}
