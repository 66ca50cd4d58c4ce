//! Ergodicity criteria, explicit rate bounds and numerical cross-checks for
//! one-dimensional time-changed symmetric α-stable processes
//! `dY = σ(Y−) dX`, `1 < α < 2`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything touching files,
//! threads or the command line lives in the `stable-ergo` companion crate.
//!
//! Layout:
//! - [`special`]: Γ, ω_α, C_α, c_α, K_α, the harmonic function `h` and `J_α`.
//! - [`quad`]: adaptive Gauss–Kronrod quadrature, finite and semi-infinite.
//! - [`expr`]: the σ expression language.
//! - [`sigma`]: σ profiles, the speed measure and the criterion functionals.
//! - [`criteria`]: classification and rate bounds.
//! - [`green`]: killed Green kernels and the operators built on them.
//! - [`spectral`]: discretized Dirichlet form and the λ₀ eigensolver.
//! - [`montecarlo`]: stable sampler, path schemes and estimators.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// quadrature nodes and series coefficients are kept at full published precision
#![allow(clippy::excessive_precision)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod criteria;
mod error;
pub mod expr;
pub mod green;
pub mod montecarlo;
pub mod quad;
pub mod sigma;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use special::AlphaConstants;
