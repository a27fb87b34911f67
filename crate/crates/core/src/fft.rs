//! In-place 2-D complex FFT on row-major buffers.
//!
//! The forward transform is unnormalized; the inverse carries the 1/(nx*ny)
//! factor. Plans are cached per axis length behind a mutex so concurrent
//! callers share them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

struct AxisPlans {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

fn plans_for(len: usize) -> Arc<AxisPlans> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<AxisPlans>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("fft plan cache poisoned");
    if let Some(p) = map.get(&len) {
        return p.clone();
    }
    let mut planner = FftPlanner::new();
    let p = Arc::new(AxisPlans {
        fwd: planner.plan_fft_forward(len),
        inv: planner.plan_fft_inverse(len),
    });
    map.insert(len, p.clone());
    p
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Inverse,
}

fn transform_2d(data: &mut [Complex64], nx: usize, ny: usize, dir: Direction) {
    debug_assert_eq!(data.len(), nx * ny);
    let px = plans_for(nx);
    let py = plans_for(ny);
    let (fx, fy) = match dir {
        Direction::Forward => (&px.fwd, &py.fwd),
        Direction::Inverse => (&px.inv, &py.inv),
    };

    // Rows are contiguous slices of length ny.
    let mut scratch = vec![Complex64::default(); fy.get_inplace_scratch_len()];
    for row in data.chunks_exact_mut(ny) {
        fy.process_with_scratch(row, &mut scratch);
    }

    // Columns are strided; gather, transform, scatter.
    let mut col = vec![Complex64::default(); nx];
    let mut scratch_x = vec![Complex64::default(); fx.get_inplace_scratch_len()];
    let scale = 1.0 / (nx * ny) as f64;
    for iy in 0..ny {
        for ix in 0..nx {
            col[ix] = data[ix * ny + iy];
        }
        fx.process_with_scratch(&mut col, &mut scratch_x);
        if dir == Direction::Inverse {
            for ix in 0..nx {
                data[ix * ny + iy] = col[ix] * scale;
            }
        } else {
            for ix in 0..nx {
                data[ix * ny + iy] = col[ix];
            }
        }
    }
}

pub fn forward(data: &mut [Complex64], nx: usize, ny: usize) {
    transform_2d(data, nx, ny, Direction::Forward);
}

pub fn inverse(data: &mut [Complex64], nx: usize, ny: usize) {
    transform_2d(data, nx, ny, Direction::Inverse);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_identity() {
        let (nx, ny) = (16, 8);
        let mut data: Vec<Complex64> = (0..nx * ny)
            .map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let orig = data.clone();
        forward(&mut data, nx, ny);
        inverse(&mut data, nx, ny);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn single_mode_forward() {
        // e^{i 2 pi (x/nx)} along the slow axis lands on bin (1, 0).
        let (nx, ny) = (8, 8);
        let mut data = vec![Complex64::default(); nx * ny];
        for ix in 0..nx {
            let phase = std::f64::consts::TAU * ix as f64 / nx as f64;
            for iy in 0..ny {
                data[ix * ny + iy] = Complex64::from_polar(1.0, phase);
            }
        }
        forward(&mut data, nx, ny);
        for ix in 0..nx {
            for iy in 0..ny {
                let v = data[ix * ny + iy];
                let expect = if ix == 1 && iy == 0 { (nx * ny) as f64 } else { 0.0 };
                assert!((v - Complex64::new(expect, 0.0)).norm() < 1e-9, "bin ({ix},{iy}) = {v}");
            }
        }
    }
}
