//! Modified Bessel function of the second kind for real order and positive argument.

use num_complex::Complex64;

use super::SpecialValue;
use crate::error::{Error, Result};
use crate::quad::integrate;

/// `K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt`, relative error about `1e-12`.
pub fn bessel_k(nu: f64, x: f64) -> Result<SpecialValue> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain(format!("bessel_k needs x > 0, got {x}")));
    }
    if !nu.is_finite() || nu.abs() > 50.0 {
        return Err(Error::Domain(format!("bessel_k order must satisfy |nu| <= 50, got {nu}")));
    }
    let nu = nu.abs();
    // Log of the integrand (up to exp(-x)) peaks at t = asinh(nu / x); cut 60 e-folds below.
    let log_f = |t: f64| nu * t - x * (t.cosh() - 1.0);
    let peak = log_f((nu / x).asinh());
    let mut t_max: f64 = 1.0 + (nu / x).asinh();
    while log_f(t_max) > peak - 60.0 {
        t_max *= 1.25;
    }
    // Factor exp(-x) out to keep the integrand of order one.
    let r = integrate(
        |t| Complex64::new((-x * (t.cosh() - 1.0)).exp() * (nu * t).cosh(), 0.0),
        0.0,
        t_max,
        8,
        0.0,
        1e-14,
        4000,
    );
    let scale = (-x).exp();
    Ok(SpecialValue::real(
        r.value.re * scale,
        (r.error + r.value.norm() * 1e-15) * scale,
        "integral_representation",
    ))
}
