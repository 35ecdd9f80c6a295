//! Strang splitting for the nonlinear models.
//!
//! Each step is half a nonlinear substep, one exact linear step in
//! frequency, and another half nonlinear substep. For the power-type models
//! the nonlinear substep is an exact pointwise phase rotation; for the
//! Gross-Pitaevskii flow in the `v` variable it is a classical Runge-Kutta
//! step of the nonlocal right-hand side.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::{fourth_order_dispersion, Dispersion, LinearModel, Potential, Propagator};
use crate::spectral::gp::{upsilon, upsilon_dual_inv, upsilon_inv, ZeroModePolicy};
use crate::spectral::multiplier::{norm_sq, riesz};
use crate::spectral::{apply_multiplier, Field, Grid, Multiplier, Nyquist, Representation};

/// Largest `max |u|` tolerated before a run is declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;
/// Upper bound on `points x steps` for one run.
pub const MAX_WORK: f64 = 2e10;

/// Real potential `V(x, t)` of `i u_t + Lap u - V u = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// `V = E.x`.
    Stark { field: Vec<f64> },
    /// `V = +- w^2 |x|^2` (attractive is `+`).
    Harmonic { omega: f64, potential: Potential },
    /// `V = amplitude cos(frequency t) exp(-|x - center|^2 / width^2)`.
    GaussianWell {
        amplitude: f64,
        center: Vec<f64>,
        width: f64,
        #[serde(default)]
        frequency: f64,
    },
}

impl PotentialSpec {
    pub fn eval(&self, x: &[f64], t: f64) -> f64 {
        match self {
            PotentialSpec::Stark { field } => field.iter().zip(x).map(|(e, v)| e * v).sum(),
            PotentialSpec::Harmonic { omega, potential } => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                let s = if *potential == Potential::Attractive { 1.0 } else { -1.0 };
                s * omega * omega * r2
            }
            PotentialSpec::GaussianWell {
                amplitude,
                center,
                width,
                frequency,
            } => {
                let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                amplitude * (frequency * t).cos() * (-d2 / (width * width)).exp()
            }
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        let ok = match self {
            PotentialSpec::Stark { field } => field.len() == dim,
            PotentialSpec::Harmonic { omega, .. } => omega.is_finite(),
            PotentialSpec::GaussianWell { center, width, .. } => center.len() == dim && *width > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Validation("potential parameters do not match the grid dimension".into()))
        }
    }
}

/// Evolution selected by a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelSpec {
    /// Any linear model of [`LinearModel`].
    Linear { model: LinearModel },
    /// `i u_t + Lap u + sign |u|^p u = 0`, `sign = +-1`.
    Nls { p: f64, sign: f64 },
    /// Gross-Pitaevskii flow `i psi_t + Lap psi + (1 - |psi|^2) psi = 0`, integrated in the `v` variable.
    Gp {
        #[serde(default = "default_policy")]
        zero_mode: ZeroModePolicy,
    },
    /// `i u_t + sign u_{x1x1} + u_{x2x2} = alpha |u|^2 u + beta u d_{x1} phi`, `Lap phi = d_{x1} |u|^2`.
    DaveyStewartson { alpha: f64, beta: f64, sign: f64 },
    /// `i u_t + alpha Lap u + beta Lap^2 u + lambda |u|^p u = 0`.
    FourthNls { alpha: f64, beta: f64, lambda: f64, p: f64 },
    /// `u_t + i alpha u_xx + beta u_xxx + i gamma |u|^2 u = 0`.
    ThirdNls { alpha: f64, beta: f64, gamma: f64 },
    /// `i u_t + Lap u - V(x, t) u = 0`.
    LinearPotential { potential: PotentialSpec },
}

fn default_policy() -> ZeroModePolicy {
    ZeroModePolicy::Project
}

impl ModelSpec {
    pub fn label(&self) -> &'static str {
        match self {
            ModelSpec::Linear { model } => model.label(),
            ModelSpec::Nls { .. } => "nls",
            ModelSpec::Gp { .. } => "gp",
            ModelSpec::DaveyStewartson { .. } => "davey_stewartson",
            ModelSpec::FourthNls { .. } => "fourth_nls",
            ModelSpec::ThirdNls { .. } => "third_nls",
            ModelSpec::LinearPotential { .. } => "linear_potential",
        }
    }

    pub fn is_nonlinear(&self) -> bool {
        !matches!(self, ModelSpec::Linear { .. } | ModelSpec::LinearPotential { .. })
    }

    /// Power of the nonlinearity, where the model has one.
    pub fn power(&self) -> Option<f64> {
        match self {
            ModelSpec::Nls { p, .. } | ModelSpec::FourthNls { p, .. } => Some(*p),
            ModelSpec::DaveyStewartson { .. } | ModelSpec::ThirdNls { .. } => Some(2.0),
            ModelSpec::Gp { .. } => Some(1.0),
            _ => None,
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.is_nonlinear() && dim > 2 {
            return Err(Error::Validation(format!(
                "{}: nonlinear runs are limited to n ≤ 2 (n = {dim})",
                self.label()
            )));
        }
        let unit = |s: f64, what: &str| {
            if s == 1.0 || s == -1.0 {
                Ok(())
            } else {
                Err(Error::Validation(format!("{what} must be +1 or -1, got {s}")))
            }
        };
        match self {
            ModelSpec::Linear { model } => model.validate(dim),
            ModelSpec::Nls { p, sign } => {
                if !(*p > 0.0) {
                    return Err(Error::Validation(format!("nls: p = {p} must be positive")));
                }
                unit(*sign, "nls: sign")
            }
            ModelSpec::Gp { zero_mode } => match zero_mode {
                ZeroModePolicy::Strict { tol } if !(*tol >= 0.0) => {
                    Err(Error::Validation("gp: strict zero-mode tolerance must be non-negative".into()))
                }
                _ => Ok(()),
            },
            ModelSpec::DaveyStewartson { sign, alpha, beta } => {
                if dim != 2 {
                    return Err(Error::Validation(format!("davey_stewartson is two-dimensional (n = {dim})")));
                }
                if !(alpha.is_finite() && beta.is_finite()) {
                    return Err(Error::Validation("davey_stewartson: alpha and beta must be finite".into()));
                }
                unit(*sign, "davey_stewartson: sign")
            }
            ModelSpec::FourthNls { beta, p, .. } => {
                if *beta == 0.0 || !(*p > 0.0) {
                    return Err(Error::Validation("fourth_nls: beta must be nonzero and p positive".into()));
                }
                Ok(())
            }
            ModelSpec::ThirdNls { beta, .. } => {
                if dim != 1 {
                    return Err(Error::Validation(format!("third_nls is one-dimensional (n = {dim})")));
                }
                if *beta == 0.0 {
                    return Err(Error::Validation("third_nls: beta must be nonzero".into()));
                }
                Ok(())
            }
            ModelSpec::LinearPotential { potential } => potential.validate(dim),
        }
    }

    /// Dispersion relation of the linear part.
    pub fn dispersion(&self) -> Dispersion {
        match self {
            ModelSpec::Linear { model } => model.dispersion(),
            ModelSpec::Nls { .. } | ModelSpec::LinearPotential { .. } => LinearModel::Free.dispersion(),
            ModelSpec::Gp { .. } => LinearModel::GpGroup.dispersion(),
            ModelSpec::DaveyStewartson { sign, .. } => {
                let s = *sign;
                Dispersion::new(move |xi: &[f64]| s * xi[0] * xi[0] + xi[1] * xi[1])
            }
            // i u_t + alpha Lap u + beta Lap^2 u = 0  =>  w = alpha |xi|^2 - beta |xi|^4
            ModelSpec::FourthNls { alpha, beta, .. } => fourth_order_dispersion(*beta, -*alpha),
            ModelSpec::ThirdNls { alpha, beta, .. } => LinearModel::ThirdOrder {
                alpha: *alpha,
                beta: *beta,
            }
            .dispersion(),
        }
    }

    /// `sigma` in `u(t) = S(t) u0 + i sigma int_0^t S(t-s) N(u(s)) ds`, where
    /// `N` is the nonlinearity as it appears in the Duhamel term.
    pub fn duhamel_sign(&self) -> f64 {
        match self {
            ModelSpec::Nls { sign, .. } => *sign,
            ModelSpec::FourthNls { lambda, .. } => *lambda,
            ModelSpec::ThirdNls { gamma, .. } => -*gamma,
            ModelSpec::Gp { .. } | ModelSpec::DaveyStewartson { .. } | ModelSpec::LinearPotential { .. } => -1.0,
            ModelSpec::Linear { .. } => 1.0,
        }
    }
}

/// Which unknown a trajectory stores.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    U,
    /// Gross-Pitaevskii `v` with `psi = 1 + Upsilon v`.
    V,
    Psi,
}

/// Snapshots of one run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub model: ModelSpec,
    pub variable: Variable,
    pub times: Vec<f64>,
    pub fields: Vec<Field>,
    pub u0: Field,
    pub dt: f64,
    /// `int_0^T int F2 dx dt`, the zero mode of `Im F` dropped by `B^{-1}`
    /// (Gross-Pitaevskii only). On the periodic box `Re u = B Re v` has no mean,
    /// while the true `int Re u` drifts by exactly this amount.
    pub zero_mode_removed: f64,
}

impl Trajectory {
    pub fn grid(&self) -> &Grid {
        self.u0.grid()
    }

    pub fn last(&self) -> &Field {
        self.fields.last().expect("trajectory holds u0")
    }
}

/// One Strang step at a time, with the linear factors cached per step size.
pub struct Stepper {
    model: ModelSpec,
    prop: Propagator,
    cached: Option<(f64, Vec<Complex64>)>,
    positions: Vec<[f64; 3]>,
    r11: Option<Multiplier>,
    zero_mode_removed: f64,
}

impl Stepper {
    pub fn new(model: &ModelSpec, grid: &Grid) -> Result<Self> {
        model.validate(grid.dim())?;
        let r11 = match model {
            ModelSpec::DaveyStewartson { .. } => Some(ds_symbol()),
            _ => None,
        };
        Ok(Self {
            model: model.clone(),
            prop: Propagator::new(grid, &model.dispersion()),
            cached: None,
            positions: if matches!(model, ModelSpec::LinearPotential { .. }) {
                grid.positions()
            } else {
                Vec::new()
            },
            r11,
            zero_mode_removed: 0.0,
        })
    }

    pub fn zero_mode_removed(&self) -> f64 {
        self.zero_mode_removed
    }

    /// Advance `u` (space representation) from `t` to `t + dt`.
    pub fn step(&mut self, u: &mut Field, t: f64, dt: f64) -> Result<()> {
        u.set_rep(Representation::Space);
        self.nonlinear(u, t, 0.5 * dt)?;
        let factors = match &self.cached {
            Some((h, f)) if *h == dt => f.clone(),
            _ => {
                let f = self.prop.factors(dt);
                self.cached = Some((dt, f.clone()));
                f
            }
        };
        self.prop.apply_factors(u, &factors);
        self.nonlinear(u, t + dt, 0.5 * dt)?;
        Ok(())
    }

    // Nonlinear substep of length h, starting at time t.
    fn nonlinear(&mut self, u: &mut Field, t: f64, h: f64) -> Result<()> {
        match &self.model {
            ModelSpec::Linear { .. } => Ok(()),
            ModelSpec::Nls { p, sign } => {
                rotate(u, |z| sign * z.norm().powf(*p) * h);
                Ok(())
            }
            ModelSpec::FourthNls { lambda, p, .. } => {
                rotate(u, |z| lambda * z.norm().powf(*p) * h);
                Ok(())
            }
            ModelSpec::ThirdNls { gamma, .. } => {
                rotate(u, |z| -gamma * z.norm_sqr() * h);
                Ok(())
            }
            ModelSpec::DaveyStewartson { alpha, beta, .. } => {
                // |u| is unchanged by the rotation, so the nonlocal coefficient is exact over the substep.
                let density = u.map(|z| Complex64::new(z.norm_sqr(), 0.0));
                let nonlocal = apply_multiplier(&density, self.r11.as_ref().expect("ds symbol"))?;
                let (alpha, beta) = (*alpha, *beta);
                for (v, r) in u.samples_mut().iter_mut().zip(nonlocal.samples()) {
                    let potential = alpha * v.norm_sqr() - beta * r.re;
                    *v *= Complex64::from_polar(1.0, -potential * h);
                }
                Ok(())
            }
            ModelSpec::LinearPotential { potential } => {
                // Trapezoid in time over the two half substeps keeps second order.
                let dim = u.grid().dim();
                for (v, x) in u.samples_mut().iter_mut().zip(&self.positions) {
                    *v *= Complex64::from_polar(1.0, -potential.eval(&x[..dim], t) * h);
                }
                Ok(())
            }
            ModelSpec::Gp { zero_mode } => {
                let policy = *zero_mode;
                let rhs = |v: &Field| -> Result<(Field, f64)> {
                    let (n, z) = gp_rhs(v, policy)?;
                    Ok((n.scale(Complex64::new(0.0, -1.0)), z))
                };
                // Classical RK4 for v_t = -i (F1 + i B^{-1} F2).
                let one = Complex64::new(1.0, 0.0);
                let (k1, z) = rhs(u)?;
                let (k2, _) = rhs(&u.axpby(one, &k1, Complex64::new(0.5 * h, 0.0))?)?;
                let (k3, _) = rhs(&u.axpby(one, &k2, Complex64::new(0.5 * h, 0.0))?)?;
                let (k4, _) = rhs(&u.axpby(one, &k3, Complex64::new(h, 0.0))?)?;
                let data: Vec<Complex64> = u
                    .samples()
                    .iter()
                    .zip(k1.samples())
                    .zip(k2.samples())
                    .zip(k3.samples())
                    .zip(k4.samples())
                    .map(|((((v, a), b), c), d)| v + (a + 2.0 * b + 2.0 * c + d) * (h / 6.0))
                    .collect();
                *u = Field::from_samples(u.grid(), data, Representation::Space)?;
                self.zero_mode_removed += z * h;
                Ok(())
            }
        }
    }
}

fn rotate(u: &mut Field, phase: impl Fn(Complex64) -> f64) {
    for v in u.samples_mut() {
        let p = phase(*v);
        *v *= Complex64::from_polar(1.0, p);
    }
}

/// Symbol of `R1 R1`, `-xi_1^2 / |xi|^2`, with the zero mode sent to zero.
fn ds_symbol() -> Multiplier {
    Multiplier::real("R1R1", |xi| {
        let k2 = norm_sq(xi);
        if k2 == 0.0 {
            0.0
        } else {
            -xi[0] * xi[0] / k2
        }
    })
}

/// Gross-Pitaevskii nonlinearity `F(u) = u^2 + 2|u|^2 + |u|^2 u`.
pub fn gp_nonlinearity(u: &Field) -> Field {
    u.to_space().map(|z| z * z + 2.0 * z.norm_sqr() + z.norm_sqr() * z)
}

/// Right-hand side `F1 + i B^{-1} F2` of `i v_t - A v = ...` with `u = Upsilon v`,
/// and the zero mode of `F2` removed by the policy.
pub fn gp_rhs(v: &Field, policy: ZeroModePolicy) -> Result<(Field, f64)> {
    let u = upsilon(v)?;
    upsilon_dual_inv(&gp_nonlinearity(&u), policy)
}

/// The expansion `B^{-1}(3u1^2 + u2^2 + |u|^2 u1) + i u2 (2u1 + |u|^2)` of
/// `Upsilon^{-1} F(u)`, from the real and imaginary parts of `u`.
pub fn gp_expanded_upsilon_inv(u: &Field, policy: ZeroModePolicy) -> Result<(Field, f64)> {
    let parts = u.to_space().map(|z| {
        let (u1, u2) = (z.re, z.im);
        let m = z.norm_sqr();
        Complex64::new(3.0 * u1 * u1 + u2 * u2 + m * u1, u2 * (2.0 * u1 + m))
    });
    upsilon_inv(&parts, policy)
}

fn steps_for(t: f64, dt: f64) -> Result<usize> {
    let k = (t / dt).round();
    if (t / dt - k).abs() > 1e-8 * k.max(1.0) {
        return Err(Error::Validation(format!("time {t} is not a whole number of steps dt = {dt}")));
    }
    Ok(k as usize)
}

/// Integrate to `t_final` with step `dt`, storing `u0` and every requested snapshot.
///
/// Snapshot times must be whole multiples of `dt`; for the Gross-Pitaevskii
/// model `u0` is the `v` variable.
pub fn evolve(model: &ModelSpec, u0: &Field, t_final: f64, dt: f64, snapshot_times: &[f64]) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) || !(t_final >= 0.0) {
        return Err(Error::Validation(format!("need dt > 0 and T ≥ 0, got dt = {dt}, T = {t_final}")));
    }
    let grid = u0.grid().clone();
    let total = steps_for(t_final, dt)?;
    let work = grid.len() as f64 * total as f64;
    if work > MAX_WORK {
        return Err(Error::Cost(format!("{} points x {total} steps exceeds the work limit {MAX_WORK:e}", grid.len())));
    }
    let mut marks: Vec<usize> = Vec::new();
    for &s in snapshot_times {
        if s < 0.0 || s > t_final * (1.0 + 1e-12) {
            return Err(Error::Validation(format!("snapshot time {s} outside [0, {t_final}]")));
        }
        marks.push(steps_for(s, dt)?);
    }
    marks.sort_unstable();
    marks.dedup();
    let mut stepper = Stepper::new(model, &grid)?;
    let mut u = u0.to_space();
    let mut times = vec![0.0];
    let mut fields = vec![u.clone()];
    for k in 0..total {
        let t = k as f64 * dt;
        stepper.step(&mut u, t, dt)?;
        let m = u.max_modulus();
        if !(m <= DIVERGENCE_THRESHOLD) {
            return Err(Error::Divergence {
                time: t + dt,
                max_modulus: m,
            });
        }
        if marks.binary_search(&(k + 1)).is_ok() {
            times.push((k + 1) as f64 * dt);
            fields.push(u.clone());
        }
    }
    Ok(Trajectory {
        model: model.clone(),
        variable: if matches!(model, ModelSpec::Gp { .. }) { Variable::V } else { Variable::U },
        times,
        fields,
        u0: u0.to_space(),
        dt,
        zero_mode_removed: stepper.zero_mode_removed(),
    })
}

/// `R1 R1 |u|^2` and the potential `phi` with `Lap phi = d_{x1} |u|^2`.
#[derive(Clone, Debug)]
pub struct DsAuxiliary {
    pub nonlocal: Field,
    pub phi: Field,
    /// `|| Lap phi - d_{x1} |u|^2 ||_{L^2}` over the nonzero modes.
    pub residual: f64,
}

/// Nonlocal term of the Davey-Stewartson system.
pub fn ds_auxiliary(u: &Field) -> Result<DsAuxiliary> {
    if u.grid().dim() != 2 {
        return Err(Error::Validation("ds_auxiliary needs a two-dimensional field".into()));
    }
    let density = u.to_space().map(|z| Complex64::new(z.norm_sqr(), 0.0));
    let nonlocal = apply_multiplier(&density, &ds_symbol())?;
    // phi^ = -i xi_1 rho^ / |xi|^2
    let inv = Multiplier::new("phi", |xi| {
        let k2 = norm_sq(xi);
        if k2 == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -xi[0] / k2)
        }
    })
    .with_nyquist(Nyquist::Zero);
    let phi = apply_multiplier(&density, &inv)?;
    let lap_phi = apply_multiplier(&phi, &crate::spectral::multiplier::laplacian())?;
    let d1 = crate::spectral::multiplier::derivative(0);
    let nonzero = Multiplier::real("nonzero", |xi| if norm_sq(xi) == 0.0 { 0.0 } else { 1.0 }).with_nyquist(Nyquist::Zero);
    let rhs = apply_multiplier(&apply_multiplier(&density, &d1)?, &nonzero)?;
    let residual = crate::spectral::l2_norm(&lap_phi.sub(&rhs)?);
    Ok(DsAuxiliary { nonlocal, phi, residual })
}

/// `R1` applied twice; equals the `nonlocal` field of [`ds_auxiliary`].
pub fn ds_nonlocal_by_riesz(u: &Field) -> Result<Field> {
    let density = u.to_space().map(|z| Complex64::new(z.norm_sqr(), 0.0));
    let r1 = riesz(0);
    apply_multiplier(&apply_multiplier(&density, &r1)?, &r1)
}

/// Duhamel term `I(t) = (u(t) - S(t) u0) / (i sigma)` at every snapshot.
pub fn duhamel_extract(traj: &Trajectory) -> Result<Vec<Field>> {
    let prop = Propagator::new(traj.grid(), &traj.model.dispersion());
    let c = Complex64::new(0.0, traj.model.duhamel_sign()).inv();
    traj.times
        .iter()
        .zip(&traj.fields)
        .map(|(&t, u)| {
            let free = if t == 0.0 { traj.u0.clone() } else { prop.evolve(&traj.u0, t)? };
            Ok(u.sub(&free)?.scale(c))
        })
        .collect()
}

/// Free part `S(t) u0` at every snapshot.
pub fn free_part(traj: &Trajectory) -> Result<Vec<Field>> {
    let prop = Propagator::new(traj.grid(), &traj.model.dispersion());
    traj.times
        .iter()
        .map(|&t| if t == 0.0 { Ok(traj.u0.clone()) } else { prop.evolve(&traj.u0, t) })
        .collect()
}

/// `psi = 1 + Upsilon v` at every snapshot of a Gross-Pitaevskii trajectory.
pub fn gp_change_of_variables(traj: &Trajectory) -> Result<Trajectory> {
    if traj.variable != Variable::V {
        return Err(Error::Contract("change of variables needs a trajectory in the v variable".into()));
    }
    let to_psi = |v: &Field| -> Result<Field> { Ok(upsilon(v)?.map(|z| z + 1.0)) };
    Ok(Trajectory {
        model: traj.model.clone(),
        variable: Variable::Psi,
        times: traj.times.clone(),
        fields: traj.fields.iter().map(to_psi).collect::<Result<_>>()?,
        u0: to_psi(&traj.u0)?,
        dt: traj.dt,
        zero_mode_removed: traj.zero_mode_removed,
    })
}

/// Direct split-step integration of `i psi_t + Lap psi + (1 - |psi|^2) psi = 0`,
/// used to cross-check the `v`-variable integrator.
pub fn gp_psi_split_step(psi0: &Field, t_final: f64, dt: f64) -> Result<Field> {
    let steps = steps_for(t_final, dt)?;
    let prop = Propagator::new(psi0.grid(), &LinearModel::Free.dispersion());
    let factors = prop.factors(dt);
    let mut psi = psi0.to_space();
    let half = |p: &mut Field| rotate(p, |z| (1.0 - z.norm_sqr()) * 0.5 * dt);
    for _ in 0..steps {
        half(&mut psi);
        prop.apply_factors(&mut psi, &factors);
        half(&mut psi);
    }
    Ok(psi)
}
