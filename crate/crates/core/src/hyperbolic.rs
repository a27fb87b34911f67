//! The dispersive-perturbation-of-a-symmetric-hyperbolic reformulation:
//! the 9-component state U = (P, V, F, G, H, L), its coefficient matrices,
//! the residual of the matrix system against the componentwise equations,
//! the W = (grad F - H, grad G - L) compatibility constraint, and the
//! mollifier used to regularize iteration data.
//!
//! Component order everywhere: 0 = P, 1 = V1, 2 = V2, 3 = F, 4 = G,
//! 5 = H1, 6 = H2, 7 = L1, 8 = L2.
//!
//! The quasilinear matrices A^j (state) and B^j (background) couple only the
//! P row/column to H and L; C^j couples P with V_j; K pairs (F, G) and
//! (H, L) with opposite-sign Laplacians. The zeroth-order factorization
//! (D1 + D2) U of the coupling terms is not unique; the one fixed here puts
//! pure-state coefficients in D1 and every coefficient carrying a background
//! factor in D2, and is pinned by `residual` agreeing between the matrix
//! route and the componentwise route.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{Field, Repr, VecField2};
use crate::grid::Grid2D;
use crate::ops;
use crate::soliton::Background;
use crate::solver::ZakharovState;

pub const N_COMP: usize = 9;

/// The 9-component unknowns at one time; all components are real fields.
#[derive(Debug, Clone)]
pub struct HyperbolicState {
    pub t: f64,
    pub p: Field,
    pub v: VecField2,
    pub f: Field,
    pub g: Field,
    pub h: VecField2,
    pub l: VecField2,
}

impl HyperbolicState {
    pub fn components(&self) -> [&Field; N_COMP] {
        [&self.p, &self.v.x, &self.v.y, &self.f, &self.g, &self.h.x, &self.h.y, &self.l.x, &self.l.y]
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        self.p.grid()
    }

    /// L2 norm of the full 9-vector.
    pub fn l2(&self) -> f64 {
        self.components().iter().map(|f| f.l2().powi(2)).sum::<f64>().sqrt()
    }
}

/// Build U from a first-order state. The solver evolves the gauged
/// perturbation; this formulation lives in the ungauged frame, so the phase
/// map u4 = e^{it} u is applied internally. The algebra collapses nicely:
/// P = n + |u|^2 + 2 Q Re(u) is gauge-free, and V = -lambda Lap^{-1} grad
/// div(v) is the gradient part of -lambda v.
pub fn build_u(state: &ZakharovState, bg: &Background, lambda: f64) -> Result<HyperbolicState> {
    if !state.grid().same_as(bg.grid()) {
        return Err(Error::GridMismatch {
            a: state.grid().nx(),
            b: state.grid().ny(),
            c: bg.grid().nx(),
            d: bg.grid().ny(),
        });
    }
    let grid = state.grid().clone();
    let ny = grid.ny();
    let phase = Complex64::from_polar(1.0, state.t);

    let mut u4 = state.u.clone();
    u4.scale(phase);

    let mut p = Field::zeros(&grid, Repr::Physical);
    for ix in 0..grid.nx() {
        let q2 = 2.0 * bg.q(ix);
        for iy in 0..ny {
            let i = ix * ny + iy;
            let u = state.u.data()[i];
            p.data_mut()[i] = Complex64::new(state.n.data()[i].re + u.norm_sqr() + q2 * u.re, 0.0);
        }
    }

    let div_v = ops::div(&state.v);
    let mut v = ops::inv_lap_grad(&div_v);
    v.x.scale((-lambda).into());
    v.y.scale((-lambda).into());
    v.realize();

    let sqrt2 = std::f64::consts::SQRT_2;
    let mut f = Field::zeros(&grid, Repr::Physical);
    let mut g = Field::zeros(&grid, Repr::Physical);
    for ((fd, gd), z) in f.data_mut().iter_mut().zip(g.data_mut()).zip(u4.data()) {
        *fd = Complex64::new(sqrt2 * z.re, 0.0);
        *gd = Complex64::new(sqrt2 * z.im, 0.0);
    }
    let grad_u4 = ops::grad(&u4);
    let mut h = VecField2::zeros(&grid, Repr::Physical);
    let mut l = VecField2::zeros(&grid, Repr::Physical);
    for j in 0..2 {
        let (src, hj, lj) = match j {
            0 => (&grad_u4.x, &mut h.x, &mut l.x),
            _ => (&grad_u4.y, &mut h.y, &mut l.y),
        };
        for ((hd, ld), z) in hj.data_mut().iter_mut().zip(lj.data_mut()).zip(src.data()) {
            *hd = Complex64::new(sqrt2 * z.re, 0.0);
            *ld = Complex64::new(sqrt2 * z.im, 0.0);
        }
    }

    Ok(HyperbolicState { t: state.t, p, v, f, g, h, l })
}

/// L2 norm of the compatibility constraint W = (grad F - H, grad G - L).
pub fn w_norm(u: &HyperbolicState) -> f64 {
    let gf = ops::grad(&u.f);
    let gg = ops::grad(&u.g);
    let wx = gf.x.sub(&u.h.x).l2();
    let wy = gf.y.sub(&u.h.y).l2();
    let zx = gg.x.sub(&u.l.x).l2();
    let zy = gg.y.sub(&u.l.y).l2();
    (wx * wx + wy * wy + zx * zx + zy * zy).sqrt()
}

/// Background values entering the matrices at one grid row (the background
/// is constant in y). P_r and V_r vanish identically; they are kept in the
/// algebra for completeness.
#[derive(Debug, Clone, Copy)]
pub struct BgNode {
    pub f_r: f64,
    pub g_r: f64,
    pub h_r: [f64; 2],
    pub l_r: [f64; 2],
    pub p_r: f64,
    pub div_h_r: f64,
    pub div_l_r: f64,
}

/// Background row values at time t: sqrt(2) e^{it} Q = F_r + i G_r and its
/// derivatives.
pub fn bg_node(bg: &Background, t: f64, ix: usize) -> BgNode {
    let c = std::f64::consts::SQRT_2 * t.cos();
    let s = std::f64::consts::SQRT_2 * t.sin();
    BgNode {
        f_r: c * bg.q(ix),
        g_r: s * bg.q(ix),
        h_r: [c * bg.qx(ix), 0.0],
        l_r: [s * bg.qx(ix), 0.0],
        p_r: 0.0,
        div_h_r: c * bg.qxx(ix),
        div_l_r: s * bg.qxx(ix),
    }
}

pub type Mat9 = [[f64; N_COMP]; N_COMP];

/// Pointwise coefficient matrices of the system
/// U_t + sum_j (A^j(U) + B^j(bg) + lambda C^j) U_{x_j} + (D1(U) + D2) U = K Lap U.
#[derive(Debug, Clone)]
pub struct CoeffMatrices {
    pub a1: Mat9,
    pub a2: Mat9,
    pub b1: Mat9,
    pub b2: Mat9,
    pub c1: Mat9,
    pub c2: Mat9,
    pub k: Mat9,
    pub d1: Mat9,
    pub d2: Mat9,
}

const P: usize = 0;
const V1: usize = 1;
const V2: usize = 2;
const F: usize = 3;
const G: usize = 4;
const H1: usize = 5;
const H2: usize = 6;
const L1: usize = 7;
const L2: usize = 8;

pub fn coeff_matrices(u: &[f64; N_COMP], bg: &BgNode) -> CoeffMatrices {
    let zero = [[0.0; N_COMP]; N_COMP];
    let (f, g) = (u[F], u[G]);
    let h = [u[H1], u[H2]];
    let l = [u[L1], u[L2]];
    let p = u[P];

    let mut a1 = zero;
    a1[P][H1] = -g;
    a1[P][L1] = f;
    a1[H1][P] = -g;
    a1[L1][P] = f;

    let mut a2 = zero;
    a2[P][H2] = -g;
    a2[P][L2] = f;
    a2[H2][P] = -g;
    a2[L2][P] = f;

    let mut b1 = zero;
    b1[P][H1] = -bg.g_r;
    b1[P][L1] = bg.f_r;
    b1[H1][P] = -bg.g_r;
    b1[L1][P] = bg.f_r;

    let mut b2 = zero;
    b2[P][H2] = -bg.g_r;
    b2[P][L2] = bg.f_r;
    b2[H2][P] = -bg.g_r;
    b2[L2][P] = bg.f_r;

    let mut c1 = zero;
    c1[P][V1] = 1.0;
    c1[V1][P] = 1.0;
    let mut c2 = zero;
    c2[P][V2] = 1.0;
    c2[V2][P] = 1.0;

    let mut k = zero;
    k[F][G] = -1.0;
    k[G][F] = 1.0;
    k[H1][L1] = -1.0;
    k[L1][H1] = 1.0;
    k[H2][L2] = -1.0;
    k[L2][H2] = 1.0;

    // Pure-state zeroth-order coefficients.
    let s_pure = 0.5 * (f * f + g * g) - p;
    let mut d1 = zero;
    d1[F][G] = s_pure;
    d1[G][F] = -s_pure;
    for j in 0..2 {
        d1[H1 + j][L1 + j] = s_pure;
        d1[L1 + j][H1 + j] = -s_pure;
        d1[H1 + j][G] = f * h[j] + g * l[j];
        d1[L1 + j][F] = -(f * h[j] + g * l[j]);
    }

    // Everything carrying a background factor.
    let s_mix = f * bg.f_r + g * bg.g_r + 0.5 * (bg.f_r * bg.f_r + bg.g_r * bg.g_r);
    let mut d2 = zero;
    d2[P][F] = bg.div_l_r;
    d2[P][G] = -bg.div_h_r;

    d2[F][G] = s_mix + (0.5 * g + bg.g_r) * bg.g_r - bg.p_r;
    d2[F][F] = (0.5 * f + bg.f_r) * bg.g_r;
    d2[F][P] = -bg.g_r;

    d2[G][F] = -s_mix - (0.5 * f + bg.f_r) * bg.f_r + bg.p_r;
    d2[G][G] = -(0.5 * g + bg.g_r) * bg.f_r;
    d2[G][P] = bg.f_r;

    for j in 0..2 {
        let mix_fh = f * bg.h_r[j] + bg.f_r * h[j] + bg.f_r * bg.h_r[j]
            + g * bg.l_r[j]
            + bg.g_r * l[j]
            + bg.g_r * bg.l_r[j];
        d2[H1 + j][L1 + j] = s_mix + (g + bg.g_r) * bg.g_r - bg.p_r;
        d2[H1 + j][F] = (0.5 * f + bg.f_r) * bg.l_r[j] + bg.h_r[j] * bg.g_r;
        d2[H1 + j][G] = (0.5 * g + bg.g_r) * bg.l_r[j] + mix_fh + bg.l_r[j] * bg.g_r;
        d2[H1 + j][H1 + j] = (f + bg.f_r) * bg.g_r;
        d2[H1 + j][P] = -bg.l_r[j];

        d2[L1 + j][H1 + j] = -s_mix - (f + bg.f_r) * bg.f_r + bg.p_r;
        d2[L1 + j][F] = -(0.5 * f + bg.f_r) * bg.h_r[j] - mix_fh - bg.h_r[j] * bg.f_r;
        d2[L1 + j][G] = -(0.5 * g + bg.g_r) * bg.h_r[j] - bg.l_r[j] * bg.f_r;
        d2[L1 + j][L1 + j] = -(g + bg.g_r) * bg.f_r;
        d2[L1 + j][P] = bg.h_r[j];
    }

    CoeffMatrices { a1, a2, b1, b2, c1, c2, k, d1, d2 }
}

/// The zeroth-order coupling terms of the componentwise equations,
/// evaluated directly from the printed residual expressions.
pub fn residual_terms_direct(u: &[f64; N_COMP], bg: &BgNode) -> [f64; N_COMP] {
    let (f, g, p) = (u[F], u[G], u[P]);
    let h = [u[H1], u[H2]];
    let l = [u[L1], u[L2]];
    let ft = f + bg.f_r;
    let gt = g + bg.g_r;
    let pt = p + bg.p_r;
    let sq_t = ft * ft + gt * gt;
    let sq_mix = f * f + g * g + 2.0 * f * bg.f_r + 2.0 * g * bg.g_r;

    let mut r = [0.0; N_COMP];
    // R1 = F div L_r - G div H_r (the advective part sits in A/B).
    r[P] = f * bg.div_l_r - g * bg.div_h_r;
    r[F] = 0.5 * sq_t * g + 0.5 * sq_mix * bg.g_r - pt * g - p * bg.g_r;
    r[G] = -0.5 * sq_t * f - 0.5 * sq_mix * bg.f_r + pt * f + p * bg.f_r;
    for j in 0..2 {
        let ht = h[j] + bg.h_r[j];
        let lt = l[j] + bg.l_r[j];
        let cross = ft * ht + gt * lt;
        let cross_mix = f * h[j] + g * l[j] + f * bg.h_r[j] + bg.f_r * h[j]
            + g * bg.l_r[j]
            + bg.g_r * l[j];
        r[H1 + j] = 0.5 * sq_t * l[j] + 0.5 * sq_mix * bg.l_r[j] + cross * g + cross_mix * bg.g_r
            - p * bg.l_r[j]
            - bg.p_r * l[j]
            - p * l[j];
        r[L1 + j] = -0.5 * sq_t * h[j] - 0.5 * sq_mix * bg.h_r[j] - cross * f - cross_mix * bg.f_r
            + p * h[j]
            + bg.p_r * h[j]
            + p * bg.h_r[j];
    }
    r
}

/// Both routes to the residual of the reformulated system on three
/// consecutive snapshots: the matrix form and the componentwise equations.
/// The two agree to rounding because the matrices factor the equations
/// exactly.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct HyperbolicResidual {
    pub matrix_route: f64,
    pub direct_route: f64,
}

struct DerivedFields {
    /// value, d/dx1, d/dx2 per component; Laplacian for F, G, H, L rows.
    val: Vec<Vec<f64>>,
    dx1: Vec<Vec<f64>>,
    dx2: Vec<Vec<f64>>,
    lap: Vec<Vec<f64>>,
}

fn derive_fields(state: &HyperbolicState) -> DerivedFields {
    let comps = state.components();
    let n = state.grid().len();
    let mut val = Vec::with_capacity(N_COMP);
    let mut dx1 = Vec::with_capacity(N_COMP);
    let mut dx2 = Vec::with_capacity(N_COMP);
    let mut lap = Vec::with_capacity(N_COMP);
    for (i, c) in comps.iter().enumerate() {
        val.push(c.data().iter().map(|z| z.re).collect());
        let gr = ops::grad(c);
        dx1.push(gr.x.data().iter().map(|z| z.re).collect());
        dx2.push(gr.y.data().iter().map(|z| z.re).collect());
        if i >= F {
            lap.push(ops::laplacian(c).data().iter().map(|z| z.re).collect());
        } else {
            lap.push(vec![0.0; n]);
        }
    }
    DerivedFields { val, dx1, dx2, lap }
}

pub fn system_residual(
    prev: &HyperbolicState,
    mid: &HyperbolicState,
    next: &HyperbolicState,
    bg: &Background,
    lambda: f64,
    dt: f64,
) -> HyperbolicResidual {
    let grid = mid.grid().clone();
    let ny = grid.ny();
    let d = derive_fields(mid);

    // central-difference time derivative per component
    let prev_c = prev.components();
    let next_c = next.components();
    let ut: Vec<Vec<f64>> = (0..N_COMP)
        .map(|m| {
            next_c[m]
                .data()
                .iter()
                .zip(prev_c[m].data())
                .map(|(a, b)| (a.re - b.re) / (2.0 * dt))
                .collect()
        })
        .collect();

    let mut acc_matrix = 0.0;
    let mut acc_direct = 0.0;
    for ix in 0..grid.nx() {
        let node_bg = bg_node(bg, mid.t, ix);
        for iy in 0..ny {
            let idx = ix * ny + iy;
            let mut uval = [0.0; N_COMP];
            for m in 0..N_COMP {
                uval[m] = d.val[m][idx];
            }
            let mats = coeff_matrices(&uval, &node_bg);

            // matrix route
            for row in 0..N_COMP {
                let mut r = ut[row][idx];
                for col in 0..N_COMP {
                    let m1 = mats.a1[row][col] + mats.b1[row][col] + lambda * mats.c1[row][col];
                    if m1 != 0.0 {
                        r += m1 * d.dx1[col][idx];
                    }
                    let m2 = mats.a2[row][col] + mats.b2[row][col] + lambda * mats.c2[row][col];
                    if m2 != 0.0 {
                        r += m2 * d.dx2[col][idx];
                    }
                    let dd = mats.d1[row][col] + mats.d2[row][col];
                    if dd != 0.0 {
                        r += dd * uval[col];
                    }
                    if mats.k[row][col] != 0.0 {
                        r -= mats.k[row][col] * d.lap[col][idx];
                    }
                }
                acc_matrix += r * r;
            }

            // componentwise route
            let r0 = residual_terms_direct(&uval, &node_bg);
            let ft = uval[F] + node_bg.f_r;
            let gt = uval[G] + node_bg.g_r;
            let div_v = d.dx1[V1][idx] + d.dx2[V2][idx];
            let div_h = d.dx1[H1][idx] + d.dx2[H2][idx];
            let div_l = d.dx1[L1][idx] + d.dx2[L2][idx];
            let mut rows = [0.0; N_COMP];
            rows[P] = ut[P][idx] + lambda * div_v + ft * div_l - gt * div_h + r0[P];
            rows[V1] = ut[V1][idx] + lambda * d.dx1[P][idx];
            rows[V2] = ut[V2][idx] + lambda * d.dx2[P][idx];
            rows[F] = ut[F][idx] + r0[F] + d.lap[G][idx];
            rows[G] = ut[G][idx] + r0[G] - d.lap[F][idx];
            for j in 0..2 {
                rows[H1 + j] = ut[H1 + j][idx] - gt * dxj(&d, P, j, idx)
                    + r0[H1 + j]
                    + d.lap[L1 + j][idx];
                rows[L1 + j] = ut[L1 + j][idx] + ft * dxj(&d, P, j, idx) + r0[L1 + j]
                    - d.lap[H1 + j][idx];
            }
            for r in rows {
                acc_direct += r * r;
            }
        }
    }
    let w = grid.cell_area();
    HyperbolicResidual {
        matrix_route: (acc_matrix * w).sqrt(),
        direct_route: (acc_direct * w).sqrt(),
    }
}

#[inline]
fn dxj(d: &DerivedFields, comp: usize, j: usize, idx: usize) -> f64 {
    if j == 0 {
        d.dx1[comp][idx]
    } else {
        d.dx2[comp][idx]
    }
}

/// Smoothing by convolution with the scaled unit-mass bump
/// j_eps(X) = eps^{-2} j(X/eps), sampled on the grid and normalized there so
/// constants are preserved exactly.
pub struct Mollified {
    pub field: Field,
    /// eps below the grid spacing: the kernel is under-resolved.
    pub under_resolved: bool,
}

pub fn mollify(f: &Field, eps: f64) -> Result<Mollified> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter { name: "eps", reason: format!("must be > 0 (got {eps})") });
    }
    let grid = f.grid().clone();
    let under_resolved = eps < grid.dx().max(grid.dy());

    // Sample the bump with min-image coordinates so index 0 is the kernel
    // center, then normalize the discrete integral to 1.
    let mut kernel = Vec::with_capacity(grid.len());
    let coord = |i: usize, n: usize, d: f64| -> f64 {
        if i <= n / 2 {
            i as f64 * d
        } else {
            (i as f64 - n as f64) * d
        }
    };
    let mut sum = 0.0;
    for ix in 0..grid.nx() {
        let x = coord(ix, grid.nx(), grid.dx()) / eps;
        for iy in 0..grid.ny() {
            let y = coord(iy, grid.ny(), grid.dy()) / eps;
            let r2 = x * x + y * y;
            let v = if r2 < 1.0 { (-1.0 / (1.0 - r2)).exp() } else { 0.0 };
            kernel.push(v);
            sum += v;
        }
    }
    let norm = 1.0 / (sum * grid.cell_area());
    let kdata: Vec<Complex64> = kernel.into_iter().map(|v| Complex64::new(v * norm, 0.0)).collect();
    let khat = Field::from_parts(&grid, Repr::Physical, kdata).into_spectral()?;

    let spec_in = f.repr() == Repr::Spectral;
    let mut s = f.spectral();
    let area = grid.cell_area();
    for (z, k) in s.data_mut().iter_mut().zip(khat.data()) {
        *z *= k * area;
    }
    let field = if spec_in { s } else { s.into_physical()? };
    Ok(Mollified { field, under_resolved })
}
