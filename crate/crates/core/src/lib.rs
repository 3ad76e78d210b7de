//! Desk-scale numerics for modular localization of the massive scalar
//! one-particle representation of the Poincaré group.
//!
//! The crate is `no_std` (with `alloc`). Everything here is a pure function
//! of its inputs; IO, configuration and report formats live in the `modloc`
//! crate.
//!
//! Conventions used throughout:
//!
//! * metric `diag(1, -1, -1, -1)`, natural units;
//! * the x³-boost `Λ(t)` acts actively with `Λ⁰₃ = Λ³₀ = -sinh t`, so a shell
//!   point of rapidity `θ` is mapped to rapidity `θ - t` and
//!   `U(Λ(t))φ(θ) = φ(θ + t)`;
//! * light-cone coordinates `η± = η⁰ ± η³`;
//! * inner products are antilinear in the first argument.
#![no_std]
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord, clippy::manual_is_multiple_of, clippy::explicit_counter_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod fft;
mod lp;

pub mod analytic;
pub mod flap;
pub mod geometry;
pub mod localization;
pub mod modular;
pub mod regions;
pub mod shell;
pub mod wigner;

pub use error::{Error, Result};

/// Double precision complex scalar used everywhere in the crate.
pub type C64 = num_complex::Complex64;

/// Convention tags embedded in every report.
pub mod conventions {
    pub const BOOST_SIGN: &str = "Λ(t)⁰₃ = -sinh t (active); U(t)φ(θ) = φ(θ+t); Λ(iπ)⁻¹ = -Υ";
    pub const LIGHT_CONE: &str = "η± = η⁰ ± η³";
    pub const PAIRING_EUCLIDEAN: &str = "euclidean";
    pub const PAIRING_MINKOWSKI: &str = "minkowski(1,3)";
    pub const NORM_MAX: &str = "|ζ| = max_j |ζ_j|";
}
