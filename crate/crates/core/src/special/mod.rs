//! Pearcey integral, Airy function and modified Bessel function `K_nu`, each
//! returned with an error estimate and the method used.

pub mod airy;
pub mod bessel;
pub mod pearcey;

use num_complex::Complex64;
use serde::Serialize;

pub use airy::airy_ai;
pub use bessel::bessel_k;
pub use pearcey::{pearcey, pearcey_asymptotic, pearcey_quadrature, pearcey_with, PearceyConfig};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpecialValue {
    pub value: Complex64,
    pub est_error: f64,
    pub method: &'static str,
}

impl SpecialValue {
    pub fn real(value: f64, est_error: f64, method: &'static str) -> Self {
        Self {
            value: Complex64::new(value, 0.0),
            est_error,
            method,
        }
    }
}
