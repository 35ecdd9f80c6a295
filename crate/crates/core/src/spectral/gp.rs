//! Fourier operators attached to the linearisation of the Gross-Pitaevskii
//! equation about the constant state `psi = 1`.
//!
//! All symbols are radial and written in terms of `k2 = |xi|^2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::multiplier::{apply_multiplier, norm_sq, Multiplier};
use crate::error::{Error, Result};

/// Dispersion relation `A = sqrt(k2 (k2 + 2))`.
pub fn a_symbol(k2: f64) -> f64 {
    (k2 * (k2 + 2.0)).sqrt()
}

/// `B = sqrt(k2 / (2 + k2))`, vanishing at the origin.
pub fn b_symbol(k2: f64) -> f64 {
    (k2 / (2.0 + k2)).sqrt()
}

/// `B^{-1}` away from the origin; the zero mode is handled by [`ZeroModePolicy`].
pub fn b_inv_symbol(k2: f64) -> f64 {
    ((2.0 + k2) / k2).sqrt()
}

/// `r = -2 k2 / (A + k2)^2`, evaluated through the equivalent `-1 / (1 + k2 + A)`
/// which has no cancellation near the origin.
pub fn r_symbol(k2: f64) -> f64 {
    -1.0 / (1.0 + k2 + a_symbol(k2))
}

/// `a = 1 + r`, so that `A = k2 + a`.
pub fn small_a_symbol(k2: f64) -> f64 {
    1.0 + r_symbol(k2)
}

/// `b_1 = B - 1 = -2 / ((2 + k2)(B + 1))`, so `B = Id + B_1` with `B_1` smoothing of order two.
pub fn b1_symbol(k2: f64) -> f64 {
    -2.0 / ((2.0 + k2) * (b_symbol(k2) + 1.0))
}

/// `b_2 = B^{-1} - 1 = 2 / ((2 + k2) B (B + 1))`, singular at the origin.
pub fn b2_symbol(k2: f64) -> f64 {
    let b = b_symbol(k2);
    2.0 / ((2.0 + k2) * b * (b + 1.0))
}

/// `kappa(xi, t) = exp(i t r(xi)) - 1`, computed without cancellation for small `t r`.
pub fn kappa_symbol(k2: f64, t: f64) -> Complex64 {
    let phi = t * r_symbol(k2);
    // exp(i phi) - 1 = 2 i sin(phi/2) exp(i phi/2)
    Complex64::new(0.0, 2.0 * (phi / 2.0).sin()) * Complex64::from_polar(1.0, phi / 2.0)
}

/// Zero-mode handling for `B^{-1}` and `Upsilon^{-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ZeroModePolicy {
    /// Drop the zero mode and report how much was removed.
    Project,
    /// Fail if the zero-mode coefficient exceeds `tol` in modulus.
    Strict { tol: f64 },
}

/// The named multipliers as [`Multiplier`] values.
pub struct GpOperators;

impl GpOperators {
    pub fn a() -> Multiplier {
        Multiplier::real("A", |xi| a_symbol(norm_sq(xi)))
    }
    pub fn b() -> Multiplier {
        Multiplier::real("B", |xi| b_symbol(norm_sq(xi)))
    }
    /// `B^{-1}` with the zero mode sent to zero.
    pub fn b_inv_projected() -> Multiplier {
        Multiplier::real("B^-1", |xi| {
            let k2 = norm_sq(xi);
            if k2 == 0.0 {
                0.0
            } else {
                b_inv_symbol(k2)
            }
        })
    }
    pub fn b1() -> Multiplier {
        Multiplier::real("B1", |xi| b1_symbol(norm_sq(xi)))
    }
    /// `B_2` with the zero mode sent to zero.
    pub fn b2() -> Multiplier {
        Multiplier::real("B2", |xi| {
            let k2 = norm_sq(xi);
            if k2 == 0.0 {
                0.0
            } else {
                b2_symbol(k2)
            }
        })
    }
    pub fn r() -> Multiplier {
        Multiplier::real("r", |xi| r_symbol(norm_sq(xi)))
    }
    pub fn small_a() -> Multiplier {
        Multiplier::real("a", |xi| small_a_symbol(norm_sq(xi)))
    }
    pub fn kappa(t: f64) -> Multiplier {
        Multiplier::new(format!("kappa({t})"), move |xi| kappa_symbol(norm_sq(xi), t))
    }
}

/// Zero-mode coefficient of a field, normalised as the spatial mean times the box volume.
pub fn zero_mode(field: &Field) -> Complex64 {
    field.to_frequency().samples()[0]
}

/// Apply `B^{-1}` to a field. Returns the result and the removed zero-mode coefficient.
pub fn apply_b_inv(field: &Field, policy: ZeroModePolicy) -> Result<(Field, Complex64)> {
    let z = zero_mode(field);
    if let ZeroModePolicy::Strict { tol } = policy {
        if z.norm() > tol {
            return Err(Error::Domain(format!(
                "B^-1 applied to a field with zero-mode coefficient {:e} above tolerance {tol:e}",
                z.norm()
            )));
        }
    }
    Ok((apply_multiplier(field, &GpOperators::b_inv_projected())?, z))
}

fn real_part(f: &Field) -> Field {
    f.map(|z| Complex64::new(z.re, 0.0))
}

fn imag_part(f: &Field) -> Field {
    f.map(|z| Complex64::new(z.im, 0.0))
}

fn combine(re: &Field, im: &Field) -> Field {
    let s_re = re.to_space();
    let s_im = im.to_space();
    let data = s_re
        .samples()
        .iter()
        .zip(s_im.samples())
        .map(|(a, b)| Complex64::new(a.re, b.re))
        .collect();
    Field::from_samples(re.grid(), data, super::field::Representation::Space).expect("same grid")
}

/// `Upsilon f = B Re f + i Im f`.
pub fn upsilon(field: &Field) -> Result<Field> {
    let s = field.to_space();
    let re = apply_multiplier(&real_part(&s), &GpOperators::b())?;
    Ok(combine(&re, &imag_part(&s)))
}

/// `Upsilon^{-1} f = B^{-1} Re f + i Im f`. Returns the removed zero mode of `Re f`.
pub fn upsilon_inv(field: &Field, policy: ZeroModePolicy) -> Result<(Field, f64)> {
    let s = field.to_space();
    let (re, z) = apply_b_inv(&real_part(&s), policy)?;
    Ok((combine(&re, &imag_part(&s)), z.re))
}

/// `Re f + i B Im f`, the operator that appears on the left of the
/// `v`-equation after applying `i d/dt - A`.
pub fn upsilon_dual(field: &Field) -> Result<Field> {
    let s = field.to_space();
    let im = apply_multiplier(&imag_part(&s), &GpOperators::b())?;
    Ok(combine(&real_part(&s), &im))
}

/// Inverse of [`upsilon_dual`]: `Re f + i B^{-1} Im f`. Returns the removed zero mode of `Im f`.
pub fn upsilon_dual_inv(field: &Field, policy: ZeroModePolicy) -> Result<(Field, f64)> {
    let s = field.to_space();
    let (im, z) = apply_b_inv(&imag_part(&s), policy)?;
    Ok((combine(&real_part(&s), &im), z.re))
}
