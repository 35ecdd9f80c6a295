//! Slow reference computations that do not use the FFT path: direct
//! quadrature of the free Schrödinger kernel against the data, contour
//! quadrature of the fourth- and third-order fundamental solutions, and a
//! space-time quadrature of the Duhamel term.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::data::{build, DataSpec, Family, Window};
use crate::error::{Error, Result};
use crate::linear::{evolve_linear, fourth_order_kernel, third_order_kernel, LinearModel};
use crate::nonlinear::{duhamel_extract, evolve, ModelSpec, Trajectory};
use crate::quad::{gk15, integrate};
use crate::spectral::{Field, Grid, Representation};

/// Largest phase change allowed across one quadrature panel.
pub const PANEL_PHASE: f64 = PI / 2.0;
/// Multiple of the combined error estimates allowed between a fast path and an oracle.
pub const AGREEMENT_FACTOR: f64 = 3.0;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: Complex64,
    pub est_error: f64,
    pub method: String,
}

/// `|fast - oracle| <= 3 (err_fast + err_oracle)`.
pub fn agrees(fast: Complex64, fast_error: f64, oracle: &OracleResult) -> bool {
    (fast - oracle.value).norm() <= AGREEMENT_FACTOR * (fast_error + oracle.est_error)
}

/// Relative coefficient mass dropped when truncating an interpolant to its band.
pub const BAND_TAIL: f64 = 1e-9;

/// Trigonometric interpolant of lattice data, evaluated without transforms,
/// keeping the modes below the band.
struct TrigInterp {
    coeffs: Vec<(i64, Complex64, bool)>,
    half_modes: usize,
    scale: f64,
    band: f64,
    dropped: f64,
}

impl TrigInterp {
    fn new(field: &Field) -> Self {
        let f = field.to_frequency();
        let grid = f.grid();
        let l = grid.extent()[0];
        let scale = PI / l;
        let mut coeffs: Vec<(i64, Complex64, bool)> = f
            .samples()
            .iter()
            .enumerate()
            .map(|(j, c)| (grid.mode(0, j), c / (2.0 * l), grid.is_nyquist(0, j)))
            .collect();
        coeffs.sort_by_key(|c| std::cmp::Reverse(c.0.abs()));
        let total: f64 = coeffs.iter().map(|c| c.1.norm()).sum();
        let mut dropped = 0.0;
        let mut cut = 0;
        for (i, c) in coeffs.iter().enumerate() {
            if dropped + c.1.norm() > BAND_TAIL * total {
                break;
            }
            dropped += c.1.norm();
            cut = i + 1;
        }
        coeffs.drain(..cut);
        let half_modes = coeffs.iter().map(|c| c.0.unsigned_abs() as usize).max().unwrap_or(0);
        Self {
            coeffs,
            half_modes,
            scale,
            band: half_modes as f64 * scale,
            dropped,
        }
    }

    fn eval(&self, y: f64) -> Complex64 {
        let w = Complex64::from_polar(1.0, self.scale * y);
        let mut powers = Vec::with_capacity(self.half_modes + 1);
        let mut p = Complex64::new(1.0, 0.0);
        for _ in 0..=self.half_modes {
            powers.push(p);
            p *= w;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for &(m, c, nyq) in &self.coeffs {
            let e = if m >= 0 { powers[m as usize] } else { powers[(-m) as usize].conj() };
            acc += if nyq { c * e.re } else { c * e };
        }
        acc
    }
}

/// A one-dimensional function with a bound on its local angular frequency.
pub struct Profile<'a> {
    eval: Box<dyn Fn(f64) -> Complex64 + Sync + Send + 'a>,
    rate: Box<dyn Fn(f64) -> f64 + Sync + Send + 'a>,
    support: (f64, f64),
    chirp: Option<(f64, f64)>,
    band: Option<f64>,
    dropped: f64,
}

impl<'a> Profile<'a> {
    /// Data of `spec` on `[-L, L]`.
    pub fn from_spec(spec: &'a DataSpec, l: f64) -> Result<Self> {
        spec.validate(1)?;
        let q = spec.q.first().copied().unwrap_or(0.0);
        let alpha = spec.alpha;
        let (rate, chirp): (Box<dyn Fn(f64) -> f64 + Sync + Send>, _) = match &spec.family {
            Family::EllipticChirp | Family::AmplitudeChirp | Family::GpProfile => {
                (Box::new(move |y: f64| 2.0 * alpha * (y - q).abs() + 2.0), Some((alpha, q)))
            }
            Family::HyperbolicChirp { j } => (Box::new(move |y: f64| 2.0 * alpha * (y - q).abs() + 2.0), (*j >= 1).then_some((alpha, q))),
            Family::Gaussian { width, momentum } => {
                let k = momentum.first().copied().unwrap_or(0.0).abs() + 4.0 / width;
                (Box::new(move |_| k), None)
            }
            _ => {
                let k = spec.required_wavenumber(&[l])[0];
                (Box::new(move |_| k), None)
            }
        };
        Ok(Self {
            eval: Box::new(move |y| spec.eval(&[y], &[l]).unwrap_or(Complex64::new(f64::NAN, f64::NAN))),
            rate,
            support: (-l, l),
            chirp,
            band: None,
            dropped: 0.0,
        })
    }

    /// Trigonometric interpolant of a one-dimensional lattice field on its box.
    pub fn from_field(field: &Field) -> Result<Profile<'static>> {
        if field.grid().dim() != 1 {
            return Err(Error::Validation("oracle profiles are one-dimensional".into()));
        }
        let l = field.grid().extent()[0];
        let interp = TrigInterp::new(field);
        let band = interp.band;
        let dropped = interp.dropped;
        Ok(Profile {
            eval: Box::new(move |y| interp.eval(y)),
            rate: Box::new(move |_| band),
            support: (-l, l),
            chirp: None,
            band: Some(band),
            dropped,
        })
    }

    pub fn eval(&self, y: f64) -> Complex64 {
        (self.eval)(y)
    }

    /// Largest retained angular frequency of an interpolant.
    pub fn band(&self) -> Option<f64> {
        self.band
    }
}

// Panels on which the total phase `phase_rate` changes by at most PANEL_PHASE.
fn chirp_panels(a: f64, b: f64, rate: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    let max_width = (b - a) / 8.0;
    let mut out = Vec::new();
    let mut y = a;
    while y < b {
        let mut h = (PANEL_PHASE / rate(y).max(1e-12)).min(max_width);
        let r2 = rate((y + h).min(b));
        if r2 * h > PANEL_PHASE {
            h = PANEL_PHASE / r2;
        }
        let end = if y + h >= b - 1e-12 * (b - a) { b } else { y + h };
        out.push((y, end));
        y = end;
    }
    out
}

fn panel_quadrature(f: &(dyn Fn(f64) -> Complex64 + Sync), panels: &[(f64, f64)], tol: f64) -> (Complex64, f64) {
    let span: f64 = panels.iter().map(|p| p.1 - p.0).sum();
    let parts: Vec<(Complex64, f64)> = panels
        .par_iter()
        .map(|&(a, b)| {
            let mut g = |y: f64| f(y);
            let (v, e) = gk15(&mut g, a, b);
            let budget = tol * (b - a) / span;
            if e <= budget {
                (v, e)
            } else {
                let r = integrate(|y| f(y), a, b, 2, budget, 0.0, 256);
                (r.value, r.error)
            }
        })
        .collect();
    parts.iter().fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), p| (v + p.0, e + p.1))
}

/// `(e^{i s t d_xx} f)(x)` with `s = +-1`, as
/// `(4 i pi s t)^{-1/2} int exp(i s (x-y)^2 / 4t) f(y) dy` over the support of `f`.
pub fn apply_free_kernel(profile: &Profile, x: f64, t: f64, sign: f64, tol: f64) -> Result<OracleResult> {
    if t == 0.0 {
        return Err(Error::Validation("kernel evaluation needs t ≠ 0".into()));
    }
    let s = if t * sign > 0.0 { 1.0 } else { -1.0 };
    let t = t.abs();
    let pref = Complex64::new(0.0, 4.0 * PI * s * t).sqrt().inv();
    let (mut a, mut b) = profile.support;
    // For band-limited data with |xi| <= K only y with |x - y| <= 2tK are
    // stationary. Beyond that a smooth erfc cutoff of width w leaves a
    // remainder of order exp(-36).
    let mut cutoff: Option<(f64, f64)> = None;
    if let Some(k) = profile.band {
        let w = 2.0 * t.sqrt();
        let r = 2.0 * t * k + 24.0 * t.sqrt();
        if x - r - 6.0 * w > a || x + r + 6.0 * w < b {
            a = a.max(x - r - 6.0 * w);
            b = b.min(x + r + 6.0 * w);
            cutoff = Some((r, w));
        }
    }
    let integrand = |y: f64| {
        let chi = cutoff.map_or(1.0, |(r, w)| 0.5 * erfc(((x - y).abs() - r) / w));
        Complex64::from_polar(chi, s * (x - y) * (x - y) / (4.0 * t)) * profile.eval(y)
    };
    let panels = chirp_panels(a, b, |y| (x - y).abs() / (2.0 * t) + (profile.rate)(y));
    let (v, e) = panel_quadrature(&integrand, &panels, tol / pref.norm());
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::Quadrature {
            estimate: f64::INFINITY,
            tolerance: tol,
        });
    }
    Ok(OracleResult {
        value: pref * v,
        est_error: pref.norm() * e + 4.0 * f64::EPSILON * (pref * v).norm() + profile.dropped,
        method: format!("chirp-panel gauss-kronrod ({} panels)", panels.len()),
    })
}

/// Value of the linear flow of the data at `(x, t)` by direct quadrature.
///
/// At the focus `(q, 1/(4 alpha))` of a chirp the kernel phase cancels the
/// data phase and the reduced form
/// `(alpha/(i pi))^{1/2} e^{i alpha (x^2 - q^2)} int e^{-2 i alpha y (x - q)} a(y) dy` is used.
pub fn kernel_point_eval(model: &LinearModel, spec: &DataSpec, l: f64, x: f64, t: f64) -> Result<OracleResult> {
    let sign = match model {
        LinearModel::Free => 1.0,
        LinearModel::Nonelliptic { j } => {
            if *j >= 1 {
                1.0
            } else {
                -1.0
            }
        }
        other => {
            return Err(Error::Validation(format!(
                "kernel quadrature covers the second-order groups, not {}",
                other.label()
            )))
        }
    };
    let profile = Profile::from_spec(spec, l)?;
    let tol = 1e-12;
    if let Some((alpha, q)) = profile.chirp {
        if sign > 0.0 && (t - 1.0 / (4.0 * alpha)).abs() <= 1e-14 * t {
            let pref = Complex64::new(alpha / PI, 0.0).sqrt() * Complex64::new(0.0, -1.0).sqrt() * Complex64::from_polar(1.0, alpha * (x * x - q * q));
            let demod = |y: f64| profile.eval(y) * Complex64::from_polar(1.0, alpha * (y - q) * (y - q) - 2.0 * alpha * y * (x - q));
            let rate = 2.0 * alpha * (x - q).abs() + 2.0;
            let panels = chirp_panels(profile.support.0, profile.support.1, |_| rate);
            let (v, e) = panel_quadrature(&demod, &panels, tol);
            return Ok(OracleResult {
                value: pref * v,
                est_error: pref.norm() * e + 4.0 * f64::EPSILON * (pref * v).norm(),
                method: "reduced focus integral".into(),
            });
        }
    }
    apply_free_kernel(&profile, x, t, sign, tol)
}

/// Which fundamental solution to check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "order", rename_all = "snake_case")]
pub enum KernelOrder {
    /// `(1/2pi) int exp(i t (xi^4 + alpha xi^2) + i x xi) dxi`.
    Fourth { alpha: f64 },
    /// `(1/2pi) int exp(i t (alpha xi^2 + beta xi^3) + i x xi) dxi`.
    Third { alpha: f64, beta: f64 },
}

// Smallest radius beyond which `|integrand| < e^{-45}` along the contour.
fn contour_cutoff(decay: impl Fn(f64) -> f64) -> f64 {
    let mut r = 1.0;
    while decay(r) < 45.0 {
        r *= 1.1;
    }
    r
}

/// Defining frequency integral of the fundamental solution, evaluated on
/// contours where it decays: `xi = u e^{i pi/8}` for the fourth order, rays
/// at `pi/6` and `5pi/6` (mirrored for `beta < 0`) for the third order.
pub fn fundamental_quadrature(order: KernelOrder, x: f64, t: f64) -> Result<OracleResult> {
    if !(t > 0.0) {
        return Err(Error::Validation(format!("fundamental solution needs t > 0, got {t}")));
    }
    let tol = 1e-13;
    match order {
        KernelOrder::Fourth { alpha } => {
            let rot = Complex64::from_polar(1.0, PI / 8.0);
            let cut = contour_cutoff(|u| t * u.powi(4) - alpha.abs() * t * u * u * (PI / 4.0).sin() - x.abs() * u * (PI / 8.0).sin());
            let f = |u: f64| {
                let xi = rot * u;
                let xi2 = xi * xi;
                (Complex64::i() * (t * (xi2 * xi2 + alpha * xi2) + x * xi)).exp() * rot
            };
            let r = integrate(f, -cut, cut, 64, tol, 1e-13, 20_000);
            Ok(OracleResult {
                value: r.value / (2.0 * PI),
                est_error: r.error / (2.0 * PI),
                method: "rotated contour pi/8".into(),
            })
        }
        KernelOrder::Third { alpha, beta } => {
            if beta == 0.0 {
                return Err(Error::Validation("third-order kernel needs beta ≠ 0".into()));
            }
            let (t1, t2) = if beta > 0.0 { (PI / 6.0, 5.0 * PI / 6.0) } else { (-PI / 6.0, -5.0 * PI / 6.0) };
            let cut = contour_cutoff(|r| t * beta.abs() * r.powi(3) - t * alpha.abs() * r * r * (PI / 3.0).sin() - x.abs() * r * 0.5);
            let ray = |theta: f64| {
                let dir = Complex64::from_polar(1.0, theta);
                move |r: f64| {
                    let xi = dir * r;
                    (Complex64::i() * (t * (alpha * xi * xi + beta * xi * xi * xi) + x * xi)).exp() * dir
                }
            };
            let right = integrate(ray(t1), 0.0, cut, 32, tol, 1e-13, 20_000);
            let left = integrate(ray(t2), 0.0, cut, 32, tol, 1e-13, 20_000);
            Ok(OracleResult {
                value: (right.value - left.value) / (2.0 * PI),
                est_error: (right.error + left.error) / (2.0 * PI),
                method: "steepest-descent rays".into(),
            })
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FundamentalSample {
    pub x: f64,
    pub t: f64,
    pub formula: Complex64,
    pub formula_error: f64,
    pub quadrature: OracleResult,
    pub difference: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FundamentalReport {
    pub order: KernelOrder,
    pub samples: Vec<FundamentalSample>,
    /// `C` in `|K(x,t)| <= C t^{-gamma}` fitted as the smallest constant over the samples.
    pub envelope_constant: f64,
    pub envelope_exponent: f64,
    pub envelope_holds: bool,
    /// Log-log slope of `|K(0, t)|` against `t` over the samples with `x = 0`.
    pub origin_slope: Option<f64>,
}

/// Special-function formula against contour quadrature at each `(x, t)`.
pub fn fundamental_solution_check(order: KernelOrder, samples: &[(f64, f64)]) -> Result<FundamentalReport> {
    let evaluated = samples
        .par_iter()
        .map(|&(x, t)| {
            if !(t > 0.0 && t <= 1.0) {
                return Err(Error::Validation(format!("sample time {t} outside (0, 1]")));
            }
            let formula = match order {
                KernelOrder::Fourth { alpha } => fourth_order_kernel(alpha, x, t)?,
                KernelOrder::Third { alpha, beta } => third_order_kernel(alpha, beta, x, t)?,
            };
            let quadrature = fundamental_quadrature(order, x, t)?;
            Ok(FundamentalSample {
                x,
                t,
                formula: formula.value,
                formula_error: formula.est_error,
                difference: (formula.value - quadrature.value).norm(),
                quadrature,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let gamma = match order {
        KernelOrder::Fourth { .. } => 0.25,
        KernelOrder::Third { .. } => 1.0 / 3.0,
    };
    let constant = evaluated
        .iter()
        .map(|s| s.quadrature.value.norm() * s.t.powf(gamma))
        .fold(0.0, f64::max);
    let holds = evaluated
        .iter()
        .all(|s| s.quadrature.value.norm() <= constant * s.t.powf(-gamma) * (1.0 + 1e-12));
    let origin: Vec<(f64, f64)> = evaluated
        .iter()
        .filter(|s| s.x == 0.0)
        .map(|s| (s.t.ln(), s.quadrature.value.norm().ln()))
        .collect();
    let origin_slope = (origin.len() >= 2).then(|| {
        let n = origin.len() as f64;
        let mx = origin.iter().map(|p| p.0).sum::<f64>() / n;
        let my = origin.iter().map(|p| p.1).sum::<f64>() / n;
        origin.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / origin.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>()
    });
    Ok(FundamentalReport {
        order,
        samples: evaluated,
        envelope_constant: constant,
        envelope_exponent: gamma,
        envelope_holds: holds,
        origin_slope,
    })
}

/// Snapshot times `t - (k sqrt(t) / K)^2`, `k = K, ..., 0`, needed by [`duhamel_quadrature`].
pub fn duhamel_nodes(t: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals)
        .rev()
        .map(|k| {
            let frac = (k * k) as f64 / (intervals * intervals) as f64;
            t * (1.0 - frac)
        })
        .collect()
}

fn simpson(h: f64, values: &[Complex64]) -> Complex64 {
    let n = values.len() - 1;
    let mut acc = values[0] + values[n];
    for (k, v) in values.iter().enumerate().take(n).skip(1) {
        acc += v * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// Largest lattice size accepted by [`duhamel_quadrature`].
pub const DUHAMEL_MAX_POINTS: usize = 2048;

/// `I(x, t) = int_0^t [S(t - s) N(u(s))](x) ds` from stored snapshots, with
/// `s = t - sigma^2` so the `(t - s)^{-1/2}` kernel prefactor cancels, Simpson
/// in `sigma`, and direct kernel quadrature in space.
///
/// The trajectory must hold the snapshots of [`duhamel_nodes`] for some `K`
/// divisible by four.
pub fn duhamel_quadrature(traj: &Trajectory, x: f64, t: f64) -> Result<OracleResult> {
    let grid = traj.grid();
    if grid.dim() != 1 {
        return Err(Error::Validation("duhamel quadrature is one-dimensional".into()));
    }
    if grid.len() > DUHAMEL_MAX_POINTS || traj.times.len() > 64 {
        return Err(Error::Cost(format!(
            "duhamel quadrature limited to N ≤ {DUHAMEL_MAX_POINTS} and 64 snapshots (have {} and {})",
            grid.len(),
            traj.times.len()
        )));
    }
    let power = match &traj.model {
        ModelSpec::Linear { .. } => {
            return Ok(OracleResult {
                value: Complex64::new(0.0, 0.0),
                est_error: 0.0,
                method: "linear model".into(),
            })
        }
        ModelSpec::Nls { p, .. } => *p,
        other => {
            return Err(Error::Validation(format!(
                "duhamel quadrature uses the free kernel and needs an nls model, not {}",
                other.label()
            )))
        }
    };
    let mut nodes: Vec<(f64, usize)> = traj
        .times
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= t * (1.0 + 1e-12))
        .map(|(i, &s)| ((t - s).max(0.0).sqrt(), i))
        .collect();
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    let k = nodes.len().saturating_sub(1);
    let h = t.sqrt() / k.max(1) as f64;
    let uniform = k >= 4 && k % 4 == 0 && nodes.iter().enumerate().all(|(j, n)| (n.0 - j as f64 * h).abs() <= 1e-9 * t.sqrt());
    if !uniform {
        return Err(Error::Contract(format!(
            "snapshots must sit at duhamel_nodes(t, K) with K divisible by 4; e.g. {:?}",
            duhamel_nodes(t, 8)
        )));
    }
    let values = nodes
        .par_iter()
        .map(|&(sigma, i)| {
            if sigma == 0.0 {
                return Ok((Complex64::new(0.0, 0.0), 0.0));
            }
            let g = traj.fields[i].map(|z| z * z.norm().powf(power));
            let profile = Profile::from_field(&g)?;
            let r = apply_free_kernel(&profile, x, sigma * sigma, 1.0, 1e-12)?;
            Ok((r.value * 2.0 * sigma, r.est_error * 2.0 * sigma))
        })
        .collect::<Result<Vec<_>>>()?;
    let vals: Vec<Complex64> = values.iter().map(|v| v.0).collect();
    let fine = simpson(h, &vals);
    let coarse_vals: Vec<Complex64> = vals.iter().step_by(2).cloned().collect();
    let coarse = simpson(2.0 * h, &coarse_vals);
    let inner: f64 = values.iter().map(|v| v.1).sum::<f64>() * h * 4.0 / 3.0;
    Ok(OracleResult {
        value: fine,
        est_error: (fine - coarse).norm() / 15.0 + inner,
        method: format!("sqrt substitution, simpson over {k} intervals"),
    })
}

/// One probe of [`duhamel_cross_check`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DuhamelProbe {
    pub x: f64,
    pub fast: Complex64,
    /// `|I_dt - I_{dt/2}| / 3`, the step-halving estimate for the finer run.
    pub fast_error: f64,
    pub oracle: OracleResult,
    /// `|u(x,t) - (S(t) u0)(x) - i sigma I_oracle(x,t)|` with `S(t) u0` also by quadrature.
    pub reconstruction_error: f64,
    pub reconstruction_tolerance: f64,
}

impl DuhamelProbe {
    pub fn agrees(&self) -> bool {
        agrees(self.fast, self.fast_error, &self.oracle)
    }
}

/// Compare `duhamel_extract` with [`duhamel_quadrature`] at the probe points.
pub fn duhamel_cross_check(model: &ModelSpec, u0: &Field, t: f64, xs: &[f64], intervals: usize, substeps: usize) -> Result<Vec<DuhamelProbe>> {
    let nodes = duhamel_nodes(t, intervals);
    let dt = t / (intervals * intervals * substeps) as f64;
    let coarse = evolve(model, u0, t, dt, &nodes)?;
    let fine = evolve(model, u0, t, dt / 2.0, &nodes)?;
    let i_coarse = duhamel_extract(&coarse)?.pop().expect("snapshot at t");
    let i_fine = duhamel_extract(&fine)?.pop().expect("snapshot at t");
    let u_fine = fine.last().clone();
    let u0_profile = Profile::from_field(u0)?;
    let sigma = model.duhamel_sign();
    xs.iter()
        .map(|&x| {
            let fast = i_fine.interpolate(&[x]);
            let fast_error = (i_coarse.interpolate(&[x]) - fast).norm() / 3.0;
            let oracle = duhamel_quadrature(&fine, x, t)?;
            let free = apply_free_kernel(&u0_profile, x, t, 1.0, 1e-12)?;
            let rebuilt = free.value + Complex64::new(0.0, sigma) * oracle.value;
            Ok(DuhamelProbe {
                x,
                fast,
                fast_error,
                reconstruction_error: (u_fine.interpolate(&[x]) - rebuilt).norm(),
                reconstruction_tolerance: AGREEMENT_FACTOR * (fast_error + oracle.est_error + free.est_error),
                oracle,
            })
        })
        .collect()
}

/// Box enlargement used by [`spectral_vs_oracle`] so the periodic images of
/// the data do not reach the probe points.
pub const ORACLE_PADDING: usize = 8;

/// Zero-pad a one-dimensional field into a box `factor` times larger with the same spacing.
pub fn zero_pad(field: &Field, factor: usize) -> Result<Field> {
    let grid = field.grid();
    if grid.dim() != 1 || factor == 0 {
        return Err(Error::Validation("zero padding is one-dimensional".into()));
    }
    let n = grid.points()[0];
    let big = Grid::new(&[grid.extent()[0] * factor as f64], &[n * factor])?;
    let offset = n * (factor - 1) / 2;
    let mut data = vec![Complex64::new(0.0, 0.0); n * factor];
    let space = field.to_space();
    data[offset..offset + n].copy_from_slice(space.samples());
    Field::from_samples(&big, data, Representation::Space)
}

/// Spectral flow of the data against kernel quadrature at seeded random
/// points with `|x| <= L/2` and `t` below the focus time; returns
/// `(x, t, spectral, oracle)`. The spectral side runs on a zero-padded box.
pub fn spectral_vs_oracle(spec: &DataSpec, grid: &Grid, samples: usize, seed: u64) -> Result<Vec<(f64, f64, Complex64, OracleResult)>> {
    let l = grid.extent()[0];
    let u0 = zero_pad(&build(spec, grid)?.field, ORACLE_PADDING)?;
    let t_max = spec.focus(1).map_or(0.25, |f| f.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(f64, f64)> = (0..samples)
        .map(|_| (rng.gen_range(-0.5 * l..0.5 * l), rng.gen_range(0.2 * t_max..0.95 * t_max)))
        .collect();
    points
        .into_iter()
        .map(|(x, t)| {
            let fast = evolve_linear(&LinearModel::Free, &u0, t)?.interpolate(&[x]);
            let oracle = kernel_point_eval(&LinearModel::Free, spec, l, x, t)?;
            Ok((x, t, fast, oracle))
        })
        .collect()
}

/// One named comparison in the [`oracle_suite`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteCheck {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub checks: Vec<SuiteCheck>,
    pub passed: bool,
}

fn check(name: &str, measured: f64, tolerance: f64, detail: String) -> SuiteCheck {
    SuiteCheck {
        name: name.into(),
        passed: measured <= tolerance,
        measured,
        tolerance,
        detail,
    }
}

/// The full cross-validation suite behind `oracle-check`.
pub fn oracle_suite() -> Result<SuiteReport> {
    let mut checks = Vec::new();

    let gauss = DataSpec::gaussian(1.0, 1.0);
    let mut worst = 0.0f64;
    for (x, t) in [(0.0, 0.1), (0.7, 0.3), (-1.5, 0.5), (2.0, 1.0)] {
        let r = kernel_point_eval(&LinearModel::Free, &gauss, 12.0, x, t)?;
        let d = Complex64::new(1.0, 4.0 * t);
        let exact = d.sqrt().inv() * (-(x * x) / d).exp();
        worst = worst.max((r.value - exact).norm());
    }
    checks.push(check("gaussian closed form", worst, 1e-8, "4 points".into()));

    let alpha = 4.0;
    let l = 40.0;
    let bare = DataSpec::elliptic_chirp(alpha, 0.5, 1.0).with_window(Window::None);
    let at_focus = kernel_point_eval(&LinearModel::Free, &bare, l, 0.0, 1.0 / (4.0 * alpha))?;
    let exact = (alpha / PI).sqrt() * 2.0 * l.asinh();
    checks.push(check(
        "focus modulus",
        (at_focus.value.norm() - exact).abs(),
        1e-6,
        format!("|u(0, 1/16)| = {} vs {exact}", at_focus.value.norm()),
    ));

    let windowed = DataSpec::elliptic_chirp(1.0, 0.5, 1.0);
    let grid = Grid::new(&[10.0], &[1024])?;
    let pts = spectral_vs_oracle(&windowed, &grid, 5, 7)?;
    let worst = pts.iter().map(|p| (p.2 - p.3.value).norm()).fold(0.0, f64::max);
    checks.push(check("spectral vs oracle", worst, 1e-5, "5 seeded points".into()));

    let samples = [(0.0, 0.04), (0.0, 0.16), (0.0, 0.64), (1.0, 0.25), (-2.0, 0.5), (3.0, 1.0)];
    let fourth = fundamental_solution_check(KernelOrder::Fourth { alpha: 0.0 }, &samples)?;
    let slope = fourth.origin_slope.unwrap_or(f64::NAN);
    checks.push(check("fourth-order origin slope", (slope + 0.25).abs(), 0.02, format!("slope {slope}")));
    let at = fourth.samples.iter().find(|s| s.x == 1.0).expect("sample (1, 0.25)");
    checks.push(check(
        "pearcey formula vs contour quadrature",
        at.difference,
        at.formula_error + at.quadrature.est_error + 1e-14,
        "x = 1, t = 0.25".into(),
    ));
    let third = fundamental_solution_check(KernelOrder::Third { alpha: 1.0, beta: 1.0 }, &[(0.0, 1.0)])?;
    checks.push(check("airy formula vs contour quadrature", third.samples[0].difference, 1e-6, "x = 0, t = 1".into()));

    let probe_grid = Grid::new(&[5.0], &[256])?;
    let u0 = zero_pad(&build(&DataSpec::elliptic_chirp(1.0, 0.5, 0.1), &probe_grid)?.field, ORACLE_PADDING)?;
    let probes = duhamel_cross_check(&ModelSpec::Nls { p: 2.0, sign: 1.0 }, &u0, 0.2, &[-1.0], 32, 1)?;
    for p in &probes {
        let bound = AGREEMENT_FACTOR * (p.fast_error + p.oracle.est_error);
        checks.push(check(
            &format!("duhamel at x = {}", p.x),
            (p.fast - p.oracle.value).norm(),
            bound,
            format!("fast {} oracle {}", p.fast, p.oracle.value),
        ));
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport { checks, passed })
}
