//! Subwavelength resonances of layered high-contrast spherical resonators.
//!
//! A resonator is a ball of `N` nested spherical layers with radii
//! `r_1 > r_2 > ... > r_N > 0`, where odd-indexed layers (counting from the
//! outermost interface) carry the high-contrast resonator material and
//! even-indexed layers, together with the unbounded exterior, carry the
//! background material. The library computes:
//!
//! * the characteristic values of the block-tridiagonal dispersion matrix
//!   (the resonant frequencies), by a scaled-determinant Muller search;
//! * closed-form two-term approximations of those frequencies for up to
//!   four layers, plus the capacity/volume form for a single resonator;
//! * normalized radial eigenmodes and derived diagnostics (field samples,
//!   per-resonator flatness).
//!
//! Frequencies live in the lower half-plane: `Re ω > 0`, `Im ω ≤ 0`.

pub mod asymptotics;
pub mod dispersion;
mod error;
pub mod medium;
pub mod modes;
pub mod quadrature;
pub mod rootfind;
pub mod specfun;

pub use error::Error;
pub use num_complex::Complex64;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
