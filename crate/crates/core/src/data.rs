//! Initial data that focus at a prescribed point.
//!
//! Every family is a tapered profile multiplied by the conjugate of the
//! linear propagator's kernel at the focus time, so the linear flow gathers
//! all of the data at the focus at the same instant.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::airy::airy_ai_extended;
use crate::special::pearcey;
use crate::spectral::gp::upsilon;
use crate::spectral::multiplier::derivative;
use crate::spectral::{apply_multiplier, l2_norm, Field, Grid};

/// Taper applied on top of the profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Window {
    /// Hard cutoff at the box boundary.
    None,
    /// Radial raised cosine over the outer `fraction` of the smallest half-length.
    RaisedCosine { fraction: f64 },
}

impl Default for Window {
    fn default() -> Self {
        Window::RaisedCosine { fraction: 0.1 }
    }
}

impl Window {
    /// Radius inside which the window equals one.
    pub fn flat_radius(&self, l: f64) -> f64 {
        match self {
            Window::None => l,
            Window::RaisedCosine { fraction } => (1.0 - fraction) * l,
        }
    }

    pub fn eval(&self, r: f64, l: f64) -> f64 {
        match *self {
            Window::None => {
                if r <= l {
                    1.0
                } else {
                    0.0
                }
            }
            Window::RaisedCosine { fraction } => {
                let rho = r / l;
                if rho <= 1.0 - fraction {
                    1.0
                } else if rho >= 1.0 {
                    0.0
                } else {
                    0.5 * (1.0 + (PI * (rho - 1.0 + fraction) / fraction).cos())
                }
            }
        }
    }
}

/// Profile family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Family {
    /// `exp(-i alpha |x - q|^2) (1 + |x|^2)^{-m}`.
    EllipticChirp,
    /// Chirp whose phase has `+` on the first `j` axes and `-` on the rest.
    HyperbolicChirp { j: usize },
    /// Elliptic chirp with the slower amplitude `ln(2 + |x|^2) (1 + |x|^2)^{-m}`.
    AmplitudeChirp,
    /// Conjugated Pearcey kernel of the fourth-order flow at `t_focus` (default 1/4).
    PearceyProfile {
        #[serde(default)]
        t_focus: Option<f64>,
    },
    /// Conjugated Airy kernel of the third-order flow at `t_focus` (default 1).
    AiryProfile {
        beta: f64,
        #[serde(default)]
        t_focus: Option<f64>,
    },
    /// Elliptic chirp used as the `v` variable of the Gross-Pitaevskii flow.
    GpProfile,
    /// Smooth Gaussian `exp(-|x - q|^2 / width^2 + i k.x)`; not a focusing family.
    Gaussian {
        width: f64,
        #[serde(default)]
        momentum: Vec<f64>,
    },
    /// Sum of profiles.
    Superposition { components: Vec<DataSpec> },
    /// A profile plus `amplitude * exp(-|x - center|^2 / width^2)`.
    Perturbed {
        base: Box<DataSpec>,
        amplitude: f64,
        center: Vec<f64>,
        width: f64,
    },
}

fn one() -> f64 {
    1.0
}

/// Initial-data request.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DataSpec {
    pub family: Family,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default)]
    pub q: Vec<f64>,
    #[serde(default)]
    pub m: f64,
    #[serde(default = "one")]
    pub delta: f64,
    #[serde(default)]
    pub window: Window,
}

impl DataSpec {
    pub fn elliptic_chirp(alpha: f64, m: f64, delta: f64) -> Self {
        Self {
            family: Family::EllipticChirp,
            alpha,
            q: Vec::new(),
            m,
            delta,
            window: Window::default(),
        }
    }

    pub fn gaussian(width: f64, delta: f64) -> Self {
        Self {
            family: Family::Gaussian {
                width,
                momentum: Vec::new(),
            },
            alpha: 1.0,
            q: Vec::new(),
            m: 0.0,
            delta,
            window: Window::None,
        }
    }

    pub fn with_q(mut self, q: &[f64]) -> Self {
        self.q = q.to_vec();
        self
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        self
    }

    pub fn with_family(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::EllipticChirp => "elliptic_chirp",
            Family::HyperbolicChirp { .. } => "hyperbolic_chirp",
            Family::AmplitudeChirp => "amplitude_chirp",
            Family::PearceyProfile { .. } => "pearcey_profile",
            Family::AiryProfile { .. } => "airy_profile",
            Family::GpProfile => "gp_profile",
            Family::Gaussian { .. } => "gaussian",
            Family::Superposition { .. } => "superposition",
            Family::Perturbed { .. } => "perturbed",
        }
    }

    fn q_or_zero(&self, dim: usize) -> Vec<f64> {
        if self.q.is_empty() {
            vec![0.0; dim]
        } else {
            self.q.clone()
        }
    }

    /// Focus time and point predicted by the linear flow, if the family focuses.
    pub fn focus(&self, dim: usize) -> Option<(f64, Vec<f64>)> {
        match &self.family {
            Family::EllipticChirp | Family::AmplitudeChirp | Family::GpProfile | Family::HyperbolicChirp { .. } => {
                Some((1.0 / (4.0 * self.alpha), self.q_or_zero(dim)))
            }
            Family::PearceyProfile { t_focus } => Some((t_focus.unwrap_or(0.25), vec![0.0])),
            Family::AiryProfile { t_focus, .. } => Some((t_focus.unwrap_or(1.0), vec![0.0])),
            Family::Perturbed { base, .. } => base.focus(dim),
            Family::Superposition { components } => components.first().and_then(|c| c.focus(dim)),
            Family::Gaussian { .. } => None,
        }
    }

    /// Check parameter ranges for a grid of dimension `dim`.
    pub fn validate(&self, dim: usize) -> Result<()> {
        let n = dim as f64;
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::Validation(format!("delta must be positive, got {}", self.delta)));
        }
        if !self.q.is_empty() && self.q.len() != dim {
            return Err(Error::Validation(format!(
                "focus point q has {} components but the grid has dimension {dim}",
                self.q.len()
            )));
        }
        if let Window::RaisedCosine { fraction } = self.window {
            if !(fraction > 0.0 && fraction < 0.5) {
                return Err(Error::Validation(format!("window fraction must lie in (0, 0.5), got {fraction}")));
            }
        }
        let chirp_range = |name: &str| -> Result<()> {
            if !(self.alpha > 0.0) {
                return Err(Error::Validation(format!("{name}: alpha must be positive, got {}", self.alpha)));
            }
            if !(self.m > n / 4.0 && self.m <= n / 2.0) {
                return Err(Error::Validation(format!(
                    "{name}: m = {} outside the admissible range n/4 < m ≤ n/2 (n = {dim})",
                    self.m
                )));
            }
            Ok(())
        };
        match &self.family {
            Family::EllipticChirp | Family::AmplitudeChirp | Family::GpProfile => chirp_range(self.family_name()),
            Family::HyperbolicChirp { j } => {
                chirp_range("hyperbolic_chirp")?;
                if *j < 1 || *j >= dim {
                    return Err(Error::Validation(format!(
                        "hyperbolic_chirp: number of positive axes j = {j} must satisfy 1 ≤ j < n (n = {dim})"
                    )));
                }
                Ok(())
            }
            Family::PearceyProfile { t_focus } => {
                if dim != 1 {
                    return Err(Error::Validation("pearcey_profile is one-dimensional".into()));
                }
                if !(self.m > 1.0 / 12.0 && self.m <= 1.0 / 6.0) {
                    return Err(Error::Validation(format!(
                        "pearcey_profile: m = {} outside the admissible range 1/12 < m ≤ 1/6",
                        self.m
                    )));
                }
                if !(t_focus.unwrap_or(0.25) > 0.0) {
                    return Err(Error::Validation("pearcey_profile: focus time must be positive".into()));
                }
                Ok(())
            }
            Family::AiryProfile { beta, t_focus } => {
                if dim != 1 {
                    return Err(Error::Validation("airy_profile is one-dimensional".into()));
                }
                if !(self.m > 1.0 / 8.0 && self.m <= 0.25) {
                    return Err(Error::Validation(format!(
                        "airy_profile: m = {} outside the admissible range 1/8 < m ≤ 1/4",
                        self.m
                    )));
                }
                if !(*beta > 0.0) || !(t_focus.unwrap_or(1.0) > 0.0) {
                    return Err(Error::Validation("airy_profile: beta and the focus time must be positive".into()));
                }
                Ok(())
            }
            Family::Gaussian { width, momentum } => {
                if !(*width > 0.0) {
                    return Err(Error::Validation(format!("gaussian: width must be positive, got {width}")));
                }
                if !momentum.is_empty() && momentum.len() != dim {
                    return Err(Error::Validation("gaussian: momentum length must equal the dimension".into()));
                }
                Ok(())
            }
            Family::Superposition { components } => {
                if components.is_empty() {
                    return Err(Error::Validation("superposition needs at least one component".into()));
                }
                components.iter().try_for_each(|c| c.validate(dim))
            }
            Family::Perturbed {
                base, width, center, ..
            } => {
                base.validate(dim)?;
                if !(*width > 0.0) || center.len() != dim {
                    return Err(Error::Validation(
                        "perturbed: width must be positive and center must match the dimension".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Largest angular frequency the profile carries on each axis, with a safety margin of 16.
    pub fn required_wavenumber(&self, extent: &[f64]) -> Vec<f64> {
        const MARGIN: f64 = 16.0;
        let dim = extent.len();
        let q = self.q_or_zero(dim);
        match &self.family {
            Family::EllipticChirp | Family::AmplitudeChirp | Family::GpProfile | Family::HyperbolicChirp { .. } => (0..dim)
                .map(|a| 2.0 * self.alpha * (extent[a] + q[a].abs()) + MARGIN)
                .collect(),
            Family::PearceyProfile { t_focus } => {
                let t = t_focus.unwrap_or(0.25);
                let c = (4.0 * t).powf(0.25);
                let y = extent[0] / c;
                let s0 = crate::special::pearcey::real_stationary_points(self.alpha * t.sqrt(), y)
                    .iter()
                    .fold(0.0f64, |m, s| m.max(s.abs()));
                vec![s0 / c + MARGIN]
            }
            Family::AiryProfile { beta, t_focus } => {
                let t = t_focus.unwrap_or(1.0);
                let k = (3.0 * t * beta).cbrt();
                let z = (extent[0] + t * self.alpha * self.alpha / (3.0 * beta)) / k;
                vec![self.alpha.abs() / (3.0 * beta) + z.sqrt() / k + MARGIN]
            }
            Family::Gaussian { width, momentum } => (0..dim)
                .map(|a| momentum.get(a).copied().unwrap_or(0.0).abs() + 12.0 / width)
                .collect(),
            Family::Superposition { components } => {
                let mut out = vec![0.0f64; dim];
                for c in components {
                    for (o, r) in out.iter_mut().zip(c.required_wavenumber(extent)) {
                        *o = o.max(r);
                    }
                }
                out
            }
            Family::Perturbed { base, width, .. } => base
                .required_wavenumber(extent)
                .into_iter()
                .map(|r| r.max(12.0 / width))
                .collect(),
        }
    }

    /// Smallest power-of-two point count per axis that resolves the profile.
    pub fn required_points(&self, extent: &[f64]) -> Vec<usize> {
        self.required_wavenumber(extent)
            .iter()
            .zip(extent)
            .map(|(k, l)| {
                let n = (2.0 * l * k / PI).ceil() as usize;
                n.max(4).next_power_of_two()
            })
            .collect()
    }

    /// Amplitude factor that multiplies the conjugated kernel, without taper.
    pub fn amplitude(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        match self.family {
            Family::AmplitudeChirp => (2.0 + r2).ln() * (1.0 + r2).powf(-self.m),
            _ => (1.0 + r2).powf(-self.m),
        }
    }

    /// Pointwise value of the (windowed) profile at `x` on a box of half-lengths `extent`.
    pub fn eval(&self, x: &[f64], extent: &[f64]) -> Result<Complex64> {
        let dim = x.len();
        let l = extent.iter().cloned().fold(f64::INFINITY, f64::min);
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let q = self.q_or_zero(dim);
        let w = match self.family {
            Family::Superposition { .. } | Family::Perturbed { .. } | Family::Gaussian { .. } => 1.0,
            _ => self.window.eval(r, l),
        };
        if w == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let value = match &self.family {
            Family::EllipticChirp | Family::AmplitudeChirp | Family::GpProfile => {
                let d2: f64 = x.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum();
                Complex64::from_polar(self.amplitude(x), -self.alpha * d2)
            }
            Family::HyperbolicChirp { j } => {
                let quad: f64 = x
                    .iter()
                    .zip(&q)
                    .enumerate()
                    .map(|(a, (xa, qa))| if a < *j { (xa - qa).powi(2) } else { -(xa - qa).powi(2) })
                    .sum();
                Complex64::from_polar(self.amplitude(x), -self.alpha * quad)
            }
            Family::PearceyProfile { t_focus } => {
                let t = t_focus.unwrap_or(0.25);
                let c = (4.0 * t).powf(0.25);
                let b = pearcey(self.alpha * t.sqrt(), -x[0] / c)?;
                b.value.conj() * self.amplitude(x)
            }
            Family::AiryProfile { beta, t_focus } => {
                let t = t_focus.unwrap_or(1.0);
                let k = (3.0 * t * beta).cbrt();
                let z = (-x[0] - t * self.alpha * self.alpha / (3.0 * beta)) / k;
                let ai = airy_ai_extended(z)?;
                Complex64::from_polar(ai.value.re * self.amplitude(x), -self.alpha * x[0] / (3.0 * beta))
            }
            Family::Gaussian { width, momentum } => {
                let d2: f64 = x.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum();
                let kx: f64 = momentum.iter().zip(x).map(|(k, v)| k * v).sum();
                Complex64::from_polar((-d2 / (width * width)).exp(), kx)
            }
            Family::Superposition { components } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in components {
                    acc += c.eval(x, extent)?;
                }
                acc
            }
            Family::Perturbed {
                base,
                amplitude,
                center,
                width,
            } => {
                let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                base.eval(x, extent)? + amplitude * (-d2 / (width * width)).exp()
            }
        };
        Ok(value * w * self.delta)
    }
}

/// How [`build_with`] treats grids coarser than the resolution rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResolutionCheck {
    Enforce,
    Warn,
}

/// Metadata attached to built data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DataMeta {
    pub family: String,
    pub t_focus: Option<f64>,
    pub x_focus: Option<Vec<f64>>,
    /// Radius inside which the taper equals one.
    pub l_eff: f64,
    pub l2_norm: f64,
    pub required_points: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct BuiltData {
    pub field: Field,
    pub meta: DataMeta,
}

pub fn build(spec: &DataSpec, grid: &Grid) -> Result<BuiltData> {
    build_with(spec, grid, ResolutionCheck::Enforce)
}

pub fn build_with(spec: &DataSpec, grid: &Grid, check: ResolutionCheck) -> Result<BuiltData> {
    spec.validate(grid.dim())?;
    let required = spec.required_points(grid.extent());
    for (axis, (&need, &have)) in required.iter().zip(grid.points()).enumerate() {
        if have < need {
            match check {
                ResolutionCheck::Enforce => {
                    return Err(Error::Resolution {
                        axis,
                        required: need,
                        actual: have,
                    })
                }
                ResolutionCheck::Warn => log::warn!(
                    "{}: axis {axis} has {have} points, resolution rule asks for {need}",
                    spec.family_name()
                ),
            }
        }
    }
    let dim = grid.dim();
    let mut samples = Vec::with_capacity(grid.len());
    for x in grid.positions() {
        samples.push(spec.eval(&x[..dim], grid.extent())?);
    }
    let field = Field::from_samples(grid, samples, crate::spectral::Representation::Space)?;
    let l = grid.extent().iter().cloned().fold(f64::INFINITY, f64::min);
    let focus = spec.focus(dim);
    let meta = DataMeta {
        family: spec.family_name().to_string(),
        t_focus: focus.as_ref().map(|f| f.0),
        x_focus: focus.map(|f| f.1),
        l_eff: spec.window.flat_radius(l),
        l2_norm: l2_norm(&field),
        required_points: required,
    };
    Ok(BuiltData { field, meta })
}

/// Sum of several profiles with every predicted focus.
#[derive(Clone, Debug)]
pub struct Superposed {
    pub field: Field,
    /// `(t_focus, x_focus)` for each component that has one, in input order.
    pub foci: Vec<(f64, Vec<f64>)>,
}

/// Pointwise sum of the built components.
pub fn superpose(specs: &[DataSpec], grid: &Grid) -> Result<Superposed> {
    superpose_with(specs, grid, ResolutionCheck::Enforce)
}

pub fn superpose_with(specs: &[DataSpec], grid: &Grid, check: ResolutionCheck) -> Result<Superposed> {
    if specs.is_empty() {
        return Err(Error::Validation("superpose needs at least one profile".into()));
    }
    let mut foci: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut total: Option<Field> = None;
    for spec in specs {
        let built = build_with(spec, grid, check)?;
        if let (Some(t), Some(x)) = (built.meta.t_focus, built.meta.x_focus) {
            if foci.iter().any(|(s, y)| *s == t && *y == x) {
                return Err(Error::Validation(format!("two profiles share the focus t = {t}, x = {x:?}")));
            }
            foci.push((t, x));
        }
        total = Some(match total {
            None => built.field,
            Some(acc) => acc.add(&built.field)?,
        });
    }
    Ok(Superposed {
        field: total.expect("non-empty"),
        foci,
    })
}

/// Gross-Pitaevskii data: `v0 = build(spec)` and `psi0 = 1 + B Re v0 + i Im v0`.
pub fn gp_initial(spec: &DataSpec, grid: &Grid) -> Result<(Field, Field)> {
    gp_initial_with(spec, grid, ResolutionCheck::Enforce)
}

pub fn gp_initial_with(spec: &DataSpec, grid: &Grid, check: ResolutionCheck) -> Result<(Field, Field)> {
    match spec.family {
        Family::EllipticChirp | Family::AmplitudeChirp | Family::GpProfile | Family::HyperbolicChirp { .. } => {}
        _ => {
            return Err(Error::Validation(format!(
                "gp_initial needs a chirp family, got {}",
                spec.family_name()
            )))
        }
    }
    let v0 = build_with(spec, grid, check)?.field;
    let u0 = upsilon(&v0)?;
    let excess = l2_norm(&u0);
    if !excess.is_finite() {
        return Err(Error::Contract("psi0 - 1 is not square integrable on the lattice".into()));
    }
    Ok((u0.map(|z| z + 1.0), v0))
}

/// How the gradient term of [`ginzburg_landau_energy`] is summed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyQuadrature {
    /// Spectral gradient sampled on the lattice, rectangle rule in `x`.
    Space,
    /// `sum |xi|^2 |psi^|^2` over the dual lattice (Parseval).
    Frequency,
}

/// `1/2 int |grad psi|^2 + 1/4 int (1 - |psi|^2)^2`.
pub fn ginzburg_landau_energy(psi: &Field, quadrature: EnergyQuadrature) -> Result<f64> {
    let grid = psi.grid();
    let s = psi.to_space();
    let potential: f64 = s.samples().iter().map(|z| (1.0 - z.norm_sqr()).powi(2)).sum::<f64>() * grid.cell_volume();
    let kinetic = match quadrature {
        EnergyQuadrature::Space => {
            let mut acc = 0.0;
            for axis in 0..grid.dim() {
                let d = apply_multiplier(&s, &derivative(axis))?;
                acc += d.samples().iter().map(|z| z.norm_sqr()).sum::<f64>();
            }
            acc * grid.cell_volume()
        }
        EnergyQuadrature::Frequency => {
            let f = s.to_frequency();
            let dim = grid.dim();
            let mut acc = 0.0;
            for (flat, z) in f.samples().iter().enumerate() {
                let idx = grid.unravel(flat);
                // Odd derivative: the unpaired Nyquist mode does not contribute.
                let k2: f64 = (0..dim)
                    .filter(|&a| !grid.is_nyquist(a, idx[a]))
                    .map(|a| grid.wavenumber(a, idx[a]).powi(2))
                    .sum();
                acc += k2 * z.norm_sqr();
            }
            acc * grid.dual_cell_volume() / (2.0 * PI).powi(dim as i32)
        }
    };
    Ok(0.5 * kinetic + 0.25 * potential)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_range_error_names_constraint() {
        let spec = DataSpec::elliptic_chirp(4.0, 0.6, 1.0);
        let g = Grid::new(&[10.0], &[1024]).unwrap();
        let err = build(&spec, &g).unwrap_err().to_string();
        assert!(err.contains("n/4 < m ≤ n/2"), "{err}");
    }

    #[test]
    fn resolution_rule() {
        let spec = DataSpec::elliptic_chirp(4.0, 0.5, 1.0);
        assert_eq!(spec.required_points(&[40.0]), vec![1 << 14]);
        assert_eq!(spec.required_points(&[80.0]), vec![1 << 16]);
        assert_eq!(spec.required_points(&[160.0]), vec![1 << 18]);
        let g = Grid::new(&[40.0], &[1 << 13]).unwrap();
        match build(&spec, &g) {
            Err(Error::Resolution { required, .. }) => assert_eq!(required, 1 << 14),
            other => panic!("expected resolution error, got {other:?}"),
        }
    }

    #[test]
    fn window_is_flat_then_zero() {
        let w = Window::default();
        assert_eq!(w.eval(0.5, 1.0), 1.0);
        assert_eq!(w.eval(0.9, 1.0), 1.0);
        assert!((w.eval(0.95, 1.0) - 0.5).abs() < 1e-15);
        assert_eq!(w.eval(1.0, 1.0), 0.0);
    }

    #[test]
    fn focus_metadata() {
        let spec = DataSpec::elliptic_chirp(4.0, 0.5, 1.0).with_q(&[1.5]);
        let (t, x) = spec.focus(1).unwrap();
        assert_eq!(t, 1.0 / 16.0);
        assert_eq!(x, vec![1.5]);
    }
}
