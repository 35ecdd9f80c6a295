//! Pearcey integral `B(x, y) = (1/pi) int exp(i (s^4/4 + x s^2/2 + y s)) ds`.
//!
//! Bounded `|y|` uses quadrature along a rotated line through the dominant
//! real stationary point. Large `|y|` uses the saddle-point series about the
//! single real stationary point, truncated at its smallest term.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use super::SpecialValue;
use crate::error::{Error, Result};
use crate::quad::integrate;

/// Tuning for [`pearcey_with`].
#[derive(Clone, Copy, Debug)]
pub struct PearceyConfig {
    /// Use the asymptotic series when `|y| >= y_switch`.
    pub y_switch: f64,
    /// Requested absolute accuracy.
    pub tol: f64,
}

impl Default for PearceyConfig {
    fn default() -> Self {
        Self { y_switch: 15.0, tol: 1e-10 }
    }
}

/// Largest `|x|` or `|y|` accepted.
pub const DOMAIN: f64 = 1.0e4;

pub fn pearcey(x: f64, y: f64) -> Result<SpecialValue> {
    pearcey_with(x, y, &PearceyConfig::default())
}

pub fn pearcey_with(x: f64, y: f64, cfg: &PearceyConfig) -> Result<SpecialValue> {
    check_domain(x, y)?;
    if y.abs() >= cfg.y_switch {
        if let Some(v) = asymptotic(x, y) {
            if v.est_error <= cfg.tol {
                return Ok(v);
            }
        }
    }
    Ok(quadrature(x, y, cfg.tol))
}

fn check_domain(x: f64, y: f64) -> Result<()> {
    if !(x.is_finite() && y.is_finite()) || x.abs() > DOMAIN || y.abs() > DOMAIN {
        return Err(Error::Domain(format!(
            "pearcey arguments must be finite with |x|, |y| <= {DOMAIN}, got ({x}, {y})"
        )));
    }
    Ok(())
}

fn phase(x: f64, y: f64, s: Complex64) -> Complex64 {
    let s2 = s * s;
    s2 * s2 / 4.0 + x * s2 / 2.0 + y * s
}

/// Real roots of `s^3 + x s + y = 0`, the stationary points of the phase.
pub fn real_stationary_points(x: f64, y: f64) -> Vec<f64> {
    let disc = 4.0 * x * x * x + 27.0 * y * y;
    let mut roots = if disc > 0.0 {
        let h = (y * y / 4.0 + x * x * x / 27.0).sqrt();
        vec![(-y / 2.0 + h).cbrt() + (-y / 2.0 - h).cbrt()]
    } else if x == 0.0 {
        vec![0.0]
    } else {
        let r = (-x / 3.0).sqrt();
        let arg = (3.0 * y / (2.0 * x * r)).clamp(-1.0, 1.0);
        let th = arg.acos() / 3.0;
        (0..3).map(|k| 2.0 * r * (th - 2.0 * PI * k as f64 / 3.0).cos()).collect()
    };
    for s in roots.iter_mut() {
        for _ in 0..3 {
            let f = *s * *s * *s + x * *s + y;
            let d = 3.0 * *s * *s + x;
            if d != 0.0 {
                *s -= f / d;
            }
        }
    }
    roots
}

/// Quadrature along `s = c + u exp(i pi/8)`.
pub fn pearcey_quadrature(x: f64, y: f64, tol: f64) -> Result<SpecialValue> {
    check_domain(x, y)?;
    Ok(quadrature(x, y, tol))
}

fn quadrature(x: f64, y: f64, tol: f64) -> SpecialValue {
    let dir = Complex64::from_polar(1.0, PI / 8.0);
    let growth = |c: f64, u: f64| -phase(x, y, c + u * dir).im;
    let mut candidates = real_stationary_points(x, y);
    candidates.push(0.0);
    let scale = 2.0 + x.abs().sqrt() + y.abs().cbrt();
    let peak_of = |c: f64| {
        (-400..=400)
            .map(|k| growth(c, k as f64 * scale / 100.0))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let (c, peak) = candidates
        .iter()
        .map(|&c| (c, peak_of(c)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty");
    let reach = |sign: f64| {
        let mut u = 0.0;
        let mut below = 0;
        while below < 4 {
            u += 0.05 * scale;
            if growth(c, sign * u) < peak - 46.0 {
                below += 1;
            } else {
                below = 0;
            }
        }
        sign * u
    };
    let (lo, hi) = (reach(-1.0), reach(1.0));
    let panels = ((hi - lo) * scale).ceil().max(8.0) as usize;
    let mag = peak.exp();
    let r = integrate(
        |u| (phase(x, y, c + u * dir) * Complex64::i()).exp(),
        lo,
        hi,
        panels,
        0.05 * tol * PI,
        0.0,
        200_000,
    );
    let value = r.value * dir / PI;
    let roundoff = mag * (hi - lo) * 8.0 * f64::EPSILON / PI;
    SpecialValue {
        value,
        est_error: r.error / PI + roundoff,
        method: "quadrature",
    }
}

/// Saddle-point series about the single real stationary point.
///
/// Returns `None` outside the region where exactly one real stationary point
/// with positive curvature exists.
pub fn pearcey_asymptotic(x: f64, y: f64) -> Option<SpecialValue> {
    check_domain(x, y).ok()?;
    asymptotic(x, y)
}

fn asymptotic(x: f64, y: f64) -> Option<SpecialValue> {
    let roots = real_stationary_points(x, y);
    if roots.len() != 1 {
        return None;
    }
    let s0 = roots[0];
    let phi2 = 3.0 * s0 * s0 + x;
    if !(phi2 > 0.0) || s0 == 0.0 {
        return None;
    }
    let ln_s0 = s0.abs().ln();
    let ln_phi2 = phi2.ln();
    let ln_dfact = |j: usize| j as f64 * 2f64.ln() + ln_gamma(j as f64 + 0.5) - 0.5 * PI.ln();
    let ipow = |p: usize| match p % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let group = |m: usize| {
        let mut g = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for k4 in 0..=m {
            let k3 = 2 * (m - k4);
            let j = 3 * m - k4;
            let ln_t = k3 as f64 * ln_s0 - k4 as f64 * 4f64.ln() - ln_gamma(k3 as f64 + 1.0) - ln_gamma(k4 as f64 + 1.0)
                + ln_dfact(j)
                - j as f64 * ln_phi2;
            let t = ln_t.exp();
            mag += t;
            g += ipow(k3 + k4 + j) * t;
        }
        (g, mag)
    };
    let mut sum = Complex64::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut omitted = f64::INFINITY;
    for m in 0..120 {
        let (g, mag) = group(m);
        if mag > prev {
            omitted = prev;
            break;
        }
        sum += g;
        prev = mag;
        omitted = mag;
    }
    let phi0 = s0.powi(4) / 4.0 + x * s0 * s0 / 2.0 + y * s0;
    let pref = (2.0 * PI / phi2).sqrt() / PI;
    let value = Complex64::from_polar(pref, phi0 + PI / 4.0) * sum;

    // Exponentially small contribution of the complex stationary point in the upper half plane.
    let roots_c = complex_stationary_points(x, s0);
    let complex_part = roots_c
        .iter()
        .map(|&sc| {
            let im = phase(x, y, sc).im.abs();
            let curv = (3.0 * sc * sc + x).norm();
            (2.0 * PI / curv).sqrt() / PI * (-im).exp()
        })
        .fold(0.0, f64::max);
    let phase_round = phi0.abs() * 4.0 * f64::EPSILON;
    Some(SpecialValue {
        value,
        est_error: pref * (omitted + phase_round) + complex_part,
        method: "asymptotic",
    })
}

// With s0 real, s^3 + x s + y = (s - s0)(s^2 + s0 s + s0^2 + x).
fn complex_stationary_points(x: f64, s0: f64) -> Vec<Complex64> {
    let b = s0;
    let c = s0 * s0 + x;
    let disc = Complex64::new(b * b - 4.0 * c, 0.0).sqrt();
    vec![(-b + disc) / 2.0, (-b - disc) / 2.0]
}
