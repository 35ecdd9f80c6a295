//! Exact linear evolutions.
//!
//! Every flow here is diagonal in frequency, `u^(t) = exp(-i t w(xi)) u0^`,
//! with the dispersion relation `w` read off from the equation, except the
//! quadratic-potential flows which use the Mehler kernel or the lens
//! transform of the free flow.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::airy::airy_ai_extended;
use crate::special::{pearcey, SpecialValue};
use crate::spectral::fft::convolve;
use crate::spectral::gp::a_symbol;
use crate::spectral::multiplier::norm_sq;
use crate::spectral::{Field, Grid, Representation};

/// Linear dispersive model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LinearModel {
    /// `i u_t + Lap u = 0`.
    Free,
    /// `i u_t + Lap_H u = 0` with `+` on the first `j` axes.
    Nonelliptic { j: usize },
    /// `i u_t + (-Lap)^{a/2} u = 0`, `0 < a < 1`.
    Fractional { a: f64 },
    /// `i u_t - alpha Lap u + Lap^2 u = 0`, `alpha` in `{-1, 0, 1}`.
    FourthOrder { alpha: f64 },
    /// `u_t + i alpha u_xx + beta u_xxx = 0` in one dimension.
    ThirdOrder { alpha: f64, beta: f64 },
    /// `i v_t - A v = 0` with `A = sqrt(|xi|^2 (|xi|^2 + 2))`.
    GpGroup,
}

impl LinearModel {
    pub fn label(&self) -> &'static str {
        match self {
            LinearModel::Free => "free",
            LinearModel::Nonelliptic { .. } => "nonelliptic",
            LinearModel::Fractional { .. } => "fractional",
            LinearModel::FourthOrder { .. } => "fourth_order",
            LinearModel::ThirdOrder { .. } => "third_order",
            LinearModel::GpGroup => "gp_group",
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        match *self {
            LinearModel::Nonelliptic { j } if j < 1 || j > dim => Err(Error::Validation(format!(
                "nonelliptic: number of positive axes j = {j} must satisfy 1 ≤ j ≤ n (n = {dim})"
            ))),
            LinearModel::Fractional { a } if !(a > 0.0 && a < 1.0) => {
                Err(Error::Validation(format!("fractional: exponent a = {a} must lie in (0, 1)")))
            }
            LinearModel::FourthOrder { alpha } if ![-1.0, 0.0, 1.0].contains(&alpha) => Err(Error::Validation(format!(
                "fourth_order: alpha = {alpha} must be one of -1, 0, 1"
            ))),
            LinearModel::ThirdOrder { beta, .. } if dim != 1 || beta == 0.0 || !beta.is_finite() => Err(
                Error::Validation("third_order: one dimension and a finite nonzero beta are required".into()),
            ),
            _ => Ok(()),
        }
    }

    /// Dispersion relation `w(xi)`.
    pub fn dispersion(&self) -> Dispersion {
        match *self {
            LinearModel::Free => Dispersion::new(norm_sq),
            LinearModel::Nonelliptic { j } => Dispersion::new(move |xi: &[f64]| {
                xi.iter()
                    .enumerate()
                    .map(|(a, k)| if a < j { k * k } else { -k * k })
                    .sum()
            }),
            LinearModel::Fractional { a } => Dispersion::new(move |xi: &[f64]| -norm_sq(xi).powf(0.5 * a)),
            LinearModel::FourthOrder { alpha } => fourth_order_dispersion(1.0, alpha),
            LinearModel::ThirdOrder { alpha, beta } => {
                Dispersion::new(move |xi: &[f64]| -(alpha * xi[0] * xi[0] + beta * xi[0] * xi[0] * xi[0]))
            }
            LinearModel::GpGroup => Dispersion::new(|xi: &[f64]| a_symbol(norm_sq(xi))),
        }
    }
}

/// `w = -(beta |xi|^4 + alpha |xi|^2)`, the relation of `i u_t - alpha Lap u + beta Lap^2 u = 0`.
pub fn fourth_order_dispersion(beta: f64, alpha: f64) -> Dispersion {
    Dispersion::new(move |xi: &[f64]| {
        let k2 = norm_sq(xi);
        -(beta * k2 * k2 + alpha * k2)
    })
}

/// A real dispersion relation `w(xi)`.
#[derive(Clone)]
pub struct Dispersion(Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>);

impl std::fmt::Debug for Dispersion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Dispersion")
    }
}

impl Dispersion {
    pub fn new(w: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(w))
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        (self.0)(xi)
    }
}

/// Dispersion relation tabulated on a lattice, for repeated evolution.
#[derive(Clone, Debug)]
pub struct Propagator {
    grid: Grid,
    omega: Vec<f64>,
}

impl Propagator {
    pub fn new(grid: &Grid, dispersion: &Dispersion) -> Self {
        let dim = grid.dim();
        let omega = grid.frequencies().iter().map(|xi| dispersion.eval(&xi[..dim])).collect();
        Self {
            grid: grid.clone(),
            omega,
        }
    }

    pub fn for_model(grid: &Grid, model: &LinearModel) -> Result<Self> {
        model.validate(grid.dim())?;
        Ok(Self::new(grid, &model.dispersion()))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    /// `exp(-i t w)` at every lattice frequency.
    pub fn factors(&self, t: f64) -> Vec<Complex64> {
        self.omega.iter().map(|w| Complex64::from_polar(1.0, -t * w)).collect()
    }

    /// Multiply frequency samples by precomputed factors, in place.
    pub fn apply_factors(&self, field: &mut Field, factors: &[Complex64]) {
        let rep = field.rep();
        field.set_rep(Representation::Frequency);
        for (v, f) in field.samples_mut().iter_mut().zip(factors) {
            *v *= f;
        }
        field.set_rep(rep);
    }

    pub fn evolve(&self, u0: &Field, t: f64) -> Result<Field> {
        if u0.grid() != &self.grid {
            return Err(Error::Contract("field and propagator live on different grids".into()));
        }
        let mut u = u0.clone();
        self.apply_factors(&mut u, &self.factors(t));
        Ok(u)
    }
}

/// `u(t)` for the model, returned in the representation of `u0`.
pub fn evolve_linear(model: &LinearModel, u0: &Field, t: f64) -> Result<Field> {
    Propagator::for_model(u0.grid(), model)?.evolve(u0, t)
}

/// Which way a transform between flows goes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Inverse,
}

/// Translate a field by `shift` (`g(x) = f(x + shift)`) with the shift theorem.
pub fn translate(field: &Field, shift: &[f64]) -> Result<Field> {
    let grid = field.grid().clone();
    let dim = grid.dim();
    let rep = field.rep();
    let mut f = field.to_frequency();
    let freqs = grid.frequencies();
    for (flat, v) in f.samples_mut().iter_mut().enumerate() {
        let idx = grid.unravel(flat);
        if (0..dim).any(|a| grid.is_nyquist(a, idx[a])) {
            *v = Complex64::new(0.0, 0.0);
            continue;
        }
        let phase: f64 = (0..dim).map(|a| freqs[flat][a] * shift[a]).sum();
        *v *= Complex64::from_polar(1.0, phase);
    }
    f.set_rep(rep);
    Ok(f)
}

/// Avron-Herbst map between free solutions and solutions of
/// `i v_t + Lap v - (E.x) v = 0` with the same initial data.
///
/// Forward takes a free solution `u` to
/// `v(x,t) = u(x + t^2 E, t) exp(-i t E.x - i t^3 |E|^2 / 3)`;
/// inverse takes `v` back to
/// `u(x,t) = v(x - t^2 E, t) exp(i t E.x - 2 i t^3 |E|^2 / 3)`.
/// A focus of `u` at `x*` appears in `v` at `x* - t*^2 E`.
///
/// `max_shift_fraction` bounds `|t^2 E_i| / L_i`; larger shifts would carry
/// the solution through the periodic boundary.
pub fn stark_transform(
    times: &[f64],
    fields: &[Field],
    e: &[f64],
    direction: Direction,
    max_shift_fraction: f64,
) -> Result<Vec<Field>> {
    if times.len() != fields.len() {
        return Err(Error::Contract("one time per field is required".into()));
    }
    let mut out = Vec::with_capacity(fields.len());
    for (&t, f) in times.iter().zip(fields) {
        let grid = f.grid();
        let dim = grid.dim();
        if e.len() != dim {
            return Err(Error::Validation(format!("field E has {} components, grid has dimension {dim}", e.len())));
        }
        for a in 0..dim {
            let s = t * t * e[a];
            if s.abs() > max_shift_fraction * grid.extent()[a] {
                return Err(Error::WrapAround(format!(
                    "stark shift {s} on axis {a} at t = {t} exceeds {max_shift_fraction} of the half-length {}",
                    grid.extent()[a]
                )));
            }
        }
        let e2: f64 = e.iter().map(|v| v * v).sum();
        let (shift, phase_t, cubic): (Vec<f64>, f64, f64) = match direction {
            Direction::Forward => (e.iter().map(|v| t * t * v).collect(), -t, -t * t * t * e2 / 3.0),
            Direction::Inverse => (e.iter().map(|v| -t * t * v).collect(), t, -2.0 * t * t * t * e2 / 3.0),
        };
        let moved = translate(&f.to_space(), &shift)?;
        let positions = grid.positions();
        let mut g = moved;
        for (v, x) in g.samples_mut().iter_mut().zip(&positions) {
            let ex: f64 = (0..dim).map(|a| e[a] * x[a]).sum();
            *v *= Complex64::from_polar(1.0, phase_t * ex + cubic);
        }
        out.push(g.to_rep(f.rep()));
    }
    Ok(out)
}

/// Sign of the quadratic potential in `i u_t + Lap u -+ w^2 |x|^2 u = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Potential {
    /// `- w^2 |x|^2 u`: bounded oscillation with period `pi / w`.
    Attractive,
    /// `+ w^2 |x|^2 u`: exponential spreading.
    Repulsive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HarmonicMethod {
    Mehler,
    Lens,
}

/// Smallest `|sin 2wt|` accepted near the attractive caustic `2wt = pi`.
pub const CAUSTIC_GUARD: f64 = 1e-3;
/// Above this many points per axis the Mehler sum is evaluated by chirp-z.
pub const MEHLER_DIRECT_MAX: usize = 4096;

fn trig(potential: Potential, theta: f64) -> (f64, f64) {
    match potential {
        Potential::Attractive => (theta.sin(), theta.cos()),
        Potential::Repulsive => (theta.sinh(), theta.cosh()),
    }
}

/// Solution of `i u_t + Lap u -+ w^2 |x|^2 u = 0` at time `t`.
///
/// Mehler: `u(x,t) = prod_axes (w / (2 pi i S))^{1/2} int exp(i w ((x^2+y^2) C - 2 x y) / (2 S)) u0(y) dy`
/// with `S, C = sin, cos(2wt)` (attractive) or `sinh, cosh(2wt)` (repulsive),
/// evaluated as the lattice sum over `y`.
///
/// Lens: `u(x,t) = C^{-n/2} u_free(x / C, T / (2w)) exp(-+ i (w/2) |x|^2 T)` with
/// `T = tan 2wt` (attractive, phase `-`) or `tanh 2wt` (repulsive, phase `+`),
/// the free solution being read off its trigonometric interpolant.
pub fn harmonic_evolve(u0: &Field, t: f64, omega: f64, potential: Potential, method: HarmonicMethod) -> Result<Field> {
    if !(omega > 0.0) || !t.is_finite() {
        return Err(Error::Validation(format!("harmonic flow needs w > 0 and finite t, got w = {omega}, t = {t}")));
    }
    if t == 0.0 {
        return Ok(u0.clone());
    }
    let theta = 2.0 * omega * t;
    let (s, c) = trig(potential, theta);
    if potential == Potential::Attractive && theta.abs() >= PI {
        return Err(Error::Singularity(format!(
            "attractive harmonic flow is evaluated only for |t| < pi/(2w) = {}",
            PI / (2.0 * omega)
        )));
    }
    let rep = u0.rep();
    let out = match method {
        HarmonicMethod::Mehler => {
            // Near t = 0 the kernel tends to the free one; only the caustic at 2wt = pi is singular.
            if s.abs() < CAUSTIC_GUARD && c < 0.0 {
                return Err(Error::Singularity(format!("Mehler kernel is singular at t = {t} (|sin 2wt| = {})", s.abs())));
            }
            mehler(u0, omega, s, c)?
        }
        HarmonicMethod::Lens => {
            if potential == Potential::Attractive && c.abs() < CAUSTIC_GUARD {
                return Err(Error::Singularity(format!("lens transform is singular at t = {t}")));
            }
            lens(u0, omega, c, s / c, potential)?
        }
    };
    Ok(out.to_rep(rep))
}

fn mehler(u0: &Field, omega: f64, s: f64, c: f64) -> Result<Field> {
    let grid = u0.grid().clone();
    let mut data = u0.to_space().into_samples();
    let pref = (Complex64::new(omega, 0.0) / (Complex64::new(0.0, 2.0 * PI * s))).sqrt();
    let a = omega * c / (2.0 * s);
    let b = omega / s;
    for axis in 0..grid.dim() {
        let x = grid.coordinates(axis);
        let dy = grid.spacing(axis);
        let n = x.len();
        let op = |line: &[Complex64]| -> Vec<Complex64> {
            // Outer chirp exp(i a x^2) is applied on both sides.
            let g: Vec<Complex64> = line
                .iter()
                .zip(&x)
                .map(|(v, y)| v * Complex64::from_polar(dy, a * y * y))
                .collect();
            let inner = if n <= MEHLER_DIRECT_MAX {
                x.iter()
                    .map(|xi| {
                        g.iter()
                            .zip(&x)
                            .fold(Complex64::new(0.0, 0.0), |acc, (gv, y)| acc + gv * Complex64::from_polar(1.0, -b * xi * y))
                    })
                    .collect()
            } else {
                chirp_z(&g, &x, b)
            };
            inner
                .into_iter()
                .zip(&x)
                .map(|(v, xi): (Complex64, &f64)| v * pref * Complex64::from_polar(1.0, a * xi * xi))
                .collect()
        };
        apply_along_axis(&grid, &mut data, axis, op);
    }
    Field::from_samples(&grid, data, Representation::Space)
}

// sum_j g_j exp(-i b x_i x_j) on the uniform lattice x_j = x_0 + j h, by
// Bluestein's identity i j = (i^2 + j^2 - (i - j)^2) / 2.
fn chirp_z(g: &[Complex64], x: &[f64], b: f64) -> Vec<Complex64> {
    let n = g.len();
    let x0 = x[0];
    let h = x[1] - x[0];
    let q = b * h * h;
    let pre: Vec<Complex64> = g
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let jf = j as f64;
            v * Complex64::from_polar(1.0, -b * x0 * h * jf - 0.5 * q * jf * jf)
        })
        .collect();
    let kernel: Vec<Complex64> = (0..2 * n - 1)
        .map(|k| {
            let d = k as f64 - (n - 1) as f64;
            Complex64::from_polar(1.0, 0.5 * q * d * d)
        })
        .collect();
    let conv = convolve(&pre, &kernel);
    (0..n)
        .map(|i| {
            let fi = i as f64;
            conv[i + n - 1] * Complex64::from_polar(1.0, -b * x0 * x0 - b * x0 * h * fi - 0.5 * q * fi * fi)
        })
        .collect()
}

fn lens(u0: &Field, omega: f64, c: f64, tan: f64, potential: Potential) -> Result<Field> {
    let grid = u0.grid().clone();
    let dim = grid.dim();
    let tau = tan / (2.0 * omega);
    let free = evolve_linear(&LinearModel::Free, u0, tau)?;
    let coords: Vec<Vec<f64>> = (0..dim)
        .map(|a| grid.coordinates(a).iter().map(|x| x / c).collect())
        .collect();
    let mut data = free.interpolate_tensor(&coords);
    let sign = match potential {
        Potential::Attractive => -1.0,
        Potential::Repulsive => 1.0,
    };
    let amp = c.abs().powf(-0.5 * dim as f64);
    for (v, x) in data.iter_mut().zip(grid.positions()) {
        let r2: f64 = x[..dim].iter().map(|v| v * v).sum();
        *v *= Complex64::from_polar(amp, sign * 0.5 * omega * r2 * tan);
    }
    Field::from_samples(&grid, data, Representation::Space)
}

/// Apply a linear map to every line of samples along `axis`.
pub fn apply_along_axis(grid: &Grid, data: &mut [Complex64], axis: usize, op: impl Fn(&[Complex64]) -> Vec<Complex64>) {
    let n = grid.points()[axis];
    let inner: usize = grid.points()[axis + 1..].iter().product();
    let outer: usize = grid.points()[..axis].iter().product();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for o in 0..outer {
        for i in 0..inner {
            let base = o * n * inner + i;
            for (k, v) in line.iter_mut().enumerate() {
                *v = data[base + k * inner];
            }
            let out = op(&line);
            for (k, v) in out.into_iter().enumerate() {
                data[base + k * inner] = v;
            }
        }
    }
}

/// Kernel of the one-dimensional fourth-order flow
/// `Sigma(x,t) = (1/2pi) int exp(i t (xi^4 + alpha xi^2) + i x xi) dxi`
/// through the Pearcey integral:
/// `Sigma(x,t) = (1/2) (4t)^{-1/4} B(alpha t^{1/2}, x (4t)^{-1/4})`.
pub fn fourth_order_kernel(alpha: f64, x: f64, t: f64) -> Result<SpecialValue> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("fourth-order kernel needs t > 0, got {t}")));
    }
    let c = (4.0 * t).powf(0.25);
    let b = pearcey(alpha * t.sqrt(), x / c)?;
    Ok(SpecialValue {
        value: b.value * (0.5 / c),
        est_error: b.est_error * 0.5 / c,
        method: b.method,
    })
}

/// Kernel of `u_t + i alpha u_xx + beta u_xxx = 0`,
/// `Lambda(x,t) = (1/2pi) int exp(i t (beta xi^3 + alpha xi^2) + i x xi) dxi
///   = (3 t beta)^{-1/3} exp(i (2 t alpha^3 / (27 beta^2) - alpha x / (3 beta))) Ai((x - t alpha^2 / (3 beta)) / (3 t beta)^{1/3})`
/// for `beta > 0`.
pub fn third_order_kernel(alpha: f64, beta: f64, x: f64, t: f64) -> Result<SpecialValue> {
    if !(t > 0.0 && beta > 0.0) {
        return Err(Error::Domain(format!("third-order kernel needs t > 0 and beta > 0, got t = {t}, beta = {beta}")));
    }
    let k = (3.0 * t * beta).cbrt();
    let z = (x - t * alpha * alpha / (3.0 * beta)) / k;
    let ai = airy_ai_extended(z)?;
    let phase = 2.0 * t * alpha.powi(3) / (27.0 * beta * beta) - alpha * x / (3.0 * beta);
    Ok(SpecialValue {
        value: Complex64::from_polar(ai.value.re / k, phase),
        est_error: ai.est_error / k,
        method: ai.method,
    })
}
