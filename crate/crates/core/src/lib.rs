//! Pseudospectral simulation library for the two-dimensional Zakharov system
//! posed as a localized perturbation of its one-dimensional line soliton.
//!
//! The crate provides:
//! * a periodic spectral toolbox ([`grid`], [`field`], [`ops`]);
//! * the closed-form soliton background and exactness checks ([`soliton`]);
//! * time integrators for the perturbed system in first-order `(u, n, v)`
//!   form, in half-wave `n±` split form, and for the limiting perturbed NLS
//!   ([`solver`]);
//! * conserved-energy and norm diagnostics with CSV emission
//!   ([`diagnostics`]);
//! * the 9-component symmetric-hyperbolic reformulation with residual and
//!   constraint verification ([`hyperbolic`]);
//! * brute-force scans of the pointwise symbol inequalities ([`symbols`]);
//! * the subsonic-limit lambda sweep ([`sweep`]);
//! * the binary checkpoint format shared with the experiment CLI
//!   ([`checkpoint`]).

pub mod checkpoint;
pub mod diagnostics;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod hyperbolic;

pub mod ops;
pub mod soliton;
pub mod symbols;
pub mod solver;
pub mod sweep;



pub use error::{Error, Result};
pub use field::{Field, Repr, VecField2};
pub use grid::Grid2D;
pub use soliton::Background;
