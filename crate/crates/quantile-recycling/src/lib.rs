//! Quantile transforms for Monte Carlo variate recycling.
//!
//! The central object is the map `Q` that turns samples from a *base*
//! distribution into samples from a *target* distribution: if `v` has base
//! CDF `F_b` and `t` has target CDF `F_t`, then `Q = F_t^{-1} ∘ F_b` and
//! `Q(v)` is a target sample. Writing `H(x) = -d/dx log f(x)` for the
//! negative logarithmic density derivative of each distribution, `Q`
//! satisfies the second-order ODE
//!
//! ```text
//! Q''(v) + H_base(v) Q'(v) = H_target(Q(v)) Q'(v)^2
//! ```
//!
//! which this crate solves three ways:
//!
//! * analytically, for the Gaussian-to-Student-t map: a central odd power
//!   series with an exact coefficient recurrence plus a two-term tail model
//!   ([`student`]);
//! * by fixed-step Runge-Kutta integration for general base/target pairs,
//!   producing an interpolable [`rode::QuantileMap`] (used here for
//!   hyperbolic and variance-gamma targets over a two-sided exponential
//!   base, and exponential-to-normal);
//! * by branchless rational approximations for the normal quantile in
//!   exponential coordinates `v = -log(2(1-u))`, suitable for SIMD/GPU-style
//!   execution where data-dependent branches are costly ([`normal`]).
//!
//! Everything is validated against the self-contained high-precision
//! reference quantiles in [`oracle`], which are independent of the kernels
//! under test. The `qrecycle` binary exposes precision sweeps, map exports
//! and micro-benchmarks on the command line.

pub mod bench;
pub mod dd;
pub mod dist;
pub mod error;
pub mod normal;
pub mod oracle;
pub mod quad;
pub mod report;
pub mod rode;
pub mod special;
pub mod student;

pub use error::{Error, Result};
