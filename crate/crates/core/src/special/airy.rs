//! Airy function `Ai` on the real line.
//!
//! Power series near the origin, asymptotic expansions in the oscillatory
//! and exponentially decaying tails.

use std::f64::consts::PI;

use super::SpecialValue;
use crate::error::{Error, Result};

/// `Ai(0)`
pub const AI0: f64 = 0.355_028_053_887_817_239_260_063_186_004_183_9;
/// `-Ai'(0)`
pub const AIP0: f64 = 0.258_819_403_792_806_798_405_183_560_189_203_96;

const SERIES_MIN: f64 = -8.0;
const SERIES_MAX: f64 = 6.0;
/// Largest `|z|` accepted.
pub const DOMAIN: f64 = 50.0;

/// `Ai(z)` for real `|z| <= 50` with absolute error at most `1e-10`.
pub fn airy_ai(z: f64) -> Result<SpecialValue> {
    if !z.is_finite() || z.abs() > DOMAIN {
        return Err(Error::Domain(format!("airy argument must satisfy |z| <= {DOMAIN}, got {z}")));
    }
    if (SERIES_MIN..=SERIES_MAX).contains(&z) {
        Ok(series(z))
    } else if z > 0.0 {
        Ok(decaying(z))
    } else {
        Ok(oscillatory(-z))
    }
}

/// `Ai(z)` for any finite real `z`; beyond `|z| = 50` only the asymptotic
/// expansions are used, which are more accurate there than inside.
pub fn airy_ai_extended(z: f64) -> Result<SpecialValue> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("airy argument must be finite, got {z}")));
    }
    if z.abs() <= DOMAIN {
        airy_ai(z)
    } else if z > 0.0 {
        Ok(decaying(z))
    } else {
        Ok(oscillatory(-z))
    }
}

fn series(z: f64) -> SpecialValue {
    let z3 = z * z * z;
    let mut f = 1.0;
    let mut g = z;
    let mut tf = 1.0f64;
    let mut tg = z;
    let mut largest = 1.0f64.max(z.abs());
    let mut k = 0.0;
    loop {
        tf *= z3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg *= z3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
        f += tf;
        g += tg;
        largest = largest.max(tf.abs()).max(tg.abs());
        k += 1.0;
        if tf.abs() < 1e-18 * f.abs().max(1e-300) && tg.abs() < 1e-18 * g.abs().max(1e-300) {
            break;
        }
        if k > 200.0 {
            break;
        }
    }
    SpecialValue::real(AI0 * f - AIP0 * g, 8.0 * largest * f64::EPSILON, "power_series")
}

// u_k coefficients of the standard asymptotic expansions.
fn u_coeff(k: usize) -> f64 {
    let mut u = 1.0;
    for j in 1..=k {
        let jf = j as f64;
        u *= (6.0 * jf - 5.0) * (6.0 * jf - 3.0) * (6.0 * jf - 1.0) / ((2.0 * jf - 1.0) * 216.0 * jf);
    }
    u
}

fn decaying(z: f64) -> SpecialValue {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut term_err = 0.0;
    for k in 0..60 {
        let t = u_coeff(k) / zeta.powi(k as i32) * if k % 2 == 0 { 1.0 } else { -1.0 };
        if t.abs() > last {
            break;
        }
        sum += t;
        last = t.abs();
        term_err = t.abs();
    }
    let pref = (-zeta).exp() / (2.0 * PI.sqrt() * z.powf(0.25));
    SpecialValue::real(pref * sum, pref * (term_err + 4.0 * f64::EPSILON), "asymptotic_decay")
}

fn oscillatory(x: f64) -> SpecialValue {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let mut p = 0.0;
    let mut q = 0.0;
    let mut last = f64::INFINITY;
    let mut term_err = 0.0;
    for k in 0..40 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let tp = sign * u_coeff(2 * k) / zeta.powi(2 * k as i32);
        let tq = sign * u_coeff(2 * k + 1) / zeta.powi(2 * k as i32 + 1);
        let m = tp.abs().max(tq.abs());
        if m > last {
            break;
        }
        p += tp;
        q += tq;
        last = m;
        term_err = m;
    }
    let theta = zeta + PI / 4.0;
    let pref = 1.0 / (PI.sqrt() * x.powf(0.25));
    let value = pref * (theta.sin() * p - theta.cos() * q);
    // The phase is only known to the rounding of zeta.
    let phase_err = zeta * f64::EPSILON * 2.0;
    SpecialValue::real(value, pref * (term_err + phase_err + 4.0 * f64::EPSILON), "asymptotic_oscillatory")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_value() {
        assert!((airy_ai(0.0).unwrap().value.re - AI0).abs() < 1e-16);
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(airy_ai(50.5).is_err());
        assert!(airy_ai(f64::NAN).is_err());
    }

    #[test]
    fn branches_agree_at_switch_points() {
        for z in [SERIES_MAX, SERIES_MIN] {
            let s = series(z).value.re;
            let a = if z > 0.0 { decaying(z) } else { oscillatory(-z) }.value.re;
            assert!((s - a).abs() < 1e-10, "z={z}: {s} vs {a}");
        }
    }
}
