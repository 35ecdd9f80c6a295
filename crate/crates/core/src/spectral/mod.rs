//! Lattices, fields and Fourier multipliers.
//!
//! The transform convention is `f^(xi) = int f(x) exp(-i xi.x) dx` on the box
//! `[-L, L)^n`, approximated with the discrete Fourier transform so that the
//! inverse and forward maps are exact inverses of each other.

pub mod fft;
pub mod field;
pub mod fractional;
pub mod gp;
pub mod grid;
pub mod multiplier;
pub mod norms;

pub use field::{Field, Representation};
pub use fractional::{bessel_potential, frac_derivative, square_function_norm, square_function_oracle};
pub use grid::Grid;
pub use multiplier::{apply_multiplier, Multiplier, Nyquist};
pub use norms::{homogeneous_sobolev_norm, l2_norm, lp_norm, mixed_norm, sobolev_norm};
