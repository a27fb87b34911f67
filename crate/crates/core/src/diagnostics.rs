//! Conserved-energy evaluation and norm/constraint monitors, emitted as time
//! series with locale-independent CSV formatting.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::ops;
use crate::soliton::Background;
use crate::solver::ZakharovState;

/// Discrete integral of the conserved density
/// |grad u|^2 + |u|^2 + n^2/2 + lambda^2 |v|^2/2 - Q^2 |u|^2
/// + n(|u|^2 + 2 Q Re u),
/// with spectral gradients and cell-weight quadrature.
pub fn energy(state: &ZakharovState, lambda: f64, bg: &Background) -> f64 {
    let grid = state.grid();
    let gu = ops::grad(&state.u);
    let lam2 = lambda * lambda;
    let ny = grid.ny();
    let mut acc = 0.0;
    for ix in 0..grid.nx() {
        let q = bg.q(ix);
        let q2 = bg.q2(ix);
        for iy in 0..ny {
            let i = ix * ny + iy;
            let u = state.u.data()[i];
            let n = state.n.data()[i].re;
            let u2 = u.norm_sqr();
            let v2 = state.v.x.data()[i].norm_sqr() + state.v.y.data()[i].norm_sqr();
            acc += gu.x.data()[i].norm_sqr() + gu.y.data()[i].norm_sqr() + u2
                + 0.5 * n * n
                + 0.5 * lam2 * v2
                - q2 * u2
                + n * (u2 + 2.0 * q * u.re);
        }
    }
    acc * grid.cell_area()
}

/// L2 norm of the subsonic-limit constraint n + |u|^2 + 2 Q Re(u).
pub fn constraint_l2(state: &ZakharovState, bg: &Background) -> f64 {
    let grid = state.grid();
    let ny = grid.ny();
    let mut acc = 0.0;
    for ix in 0..grid.nx() {
        let q2 = 2.0 * bg.q(ix);
        for iy in 0..ny {
            let i = ix * ny + iy;
            let u = state.u.data()[i];
            let r = state.n.data()[i].re + u.norm_sqr() + q2 * u.re;
            acc += r * r;
        }
    }
    (acc * grid.cell_area()).sqrt()
}

/// One row of the diagnostics time series.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub energy: f64,
    pub l2_u: f64,
    pub l2_n: f64,
    pub l2_v: f64,
    /// H^k norms of u for the configured exponents, in order.
    pub hk_u: Vec<f64>,
    /// H^{-1} norm of n_t, reported via lambda^2 div(v).
    pub hm1_nt: f64,
    pub mean_n: f64,
    pub constraint_l2: f64,
}

/// Assemble the configured scalars; pure.
pub fn record(
    state: &ZakharovState,
    lambda: f64,
    bg: &Background,
    hk_exponents: &[f64],
) -> DiagnosticsRecord {
    let mut n_t = ops::div(&state.v);
    n_t.scale((lambda * lambda).into());
    DiagnosticsRecord {
        t: state.t,
        energy: energy(state, lambda, bg),
        l2_u: state.u.l2(),
        l2_n: state.n.l2(),
        l2_v: state.v.l2(),
        hk_u: hk_exponents.iter().map(|&k| ops::sobolev_norm(&state.u, k)).collect(),
        hm1_nt: ops::sobolev_norm(&n_t, -1.0),
        mean_n: state.n.mean().re,
        constraint_l2: constraint_l2(state, bg),
    }
}

/// Format with 17 significant digits, enough to round-trip an f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV emission: header row, one record per line, 17 significant digits,
/// byte-reproducible across reruns.
pub fn write_csv(records: &[DiagnosticsRecord], hk_exponents: &[f64], out: &mut impl Write) -> Result<()> {
    let io = |e: std::io::Error| crate::Error::InvalidParameter {
        name: "csv sink",
        reason: e.to_string(),
    };
    let mut header =
        vec!["t".to_string(), "energy".into(), "l2_u".into(), "l2_n".into(), "l2_v".into()];
    for k in hk_exponents {
        header.push(format!("h{k}_u"));
    }
    header.extend(["hm1_nt".to_string(), "mean_n".into(), "constraint_l2".into()]);
    writeln!(out, "{}", header.join(",")).map_err(io)?;
    for r in records {
        let mut cols = vec![
            fmt_f64(r.t),
            fmt_f64(r.energy),
            fmt_f64(r.l2_u),
            fmt_f64(r.l2_n),
            fmt_f64(r.l2_v),
        ];
        for v in &r.hk_u {
            cols.push(fmt_f64(*v));
        }
        cols.push(fmt_f64(r.hm1_nt));
        cols.push(fmt_f64(r.mean_n));
        cols.push(fmt_f64(r.constraint_l2));
        writeln!(out, "{}", cols.join(",")).map_err(io)?;
    }
    Ok(())
}
