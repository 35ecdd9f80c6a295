//! Configuration-driven runs: build data, evolve, compute the requested
//! diagnostics, and write snapshots, CSV tables and a checksummed report.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::data::{build_with, gp_initial_with, ginzburg_landau_energy, DataSpec, EnergyQuadrature, ResolutionCheck};
use crate::diagnostics::{strichartz_functional, GroupOrder};
use crate::error::Error;
use crate::linear::LinearModel;
use crate::nonlinear::{duhamel_extract, evolve, gp_change_of_variables, ModelSpec, Trajectory, Variable};
use crate::spectral::gp::upsilon;
use crate::spectral::{l2_norm, sobolev_norm, Field, Grid};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    #[serde(default = "one")]
    pub dim: usize,
    #[serde(rename = "L")]
    pub l: f64,
    /// Points per axis; chosen from the data when absent.
    #[serde(default)]
    pub points: Option<usize>,
    /// Raise `points` to the resolution the data needs.
    #[serde(default)]
    pub auto_nyquist: bool,
}

fn one() -> usize {
    1
}

/// Quantities recorded at every snapshot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiagnosticRequest {
    /// `||u(t)||_{L^2}` and its drift from `t = 0`.
    Mass,
    /// `max |u|` and where it is attained.
    Peak,
    /// `||I(t)||_{H^s}` of the Duhamel term next to `||u(t)||_{H^s}`.
    Duhamel { s: f64 },
    /// Space-time norm over the snapshots.
    Strichartz { p: f64, q: f64 },
    /// Ginzburg-Landau energy of `psi = 1 + Upsilon v` (GP only).
    Energy,
}

impl DiagnosticRequest {
    pub fn name(&self) -> &'static str {
        match self {
            DiagnosticRequest::Mass => "mass",
            DiagnosticRequest::Peak => "peak",
            DiagnosticRequest::Duhamel { .. } => "duhamel",
            DiagnosticRequest::Strichartz { .. } => "strichartz",
            DiagnosticRequest::Energy => "energy",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub data: DataSpec,
    pub grid: GridConfig,
    pub t_final: f64,
    pub dt: f64,
    /// Extra snapshot times; `0` and `t_final` are always stored.
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    #[serde(default)]
    pub diagnostics: Vec<DiagnosticRequest>,
    /// Where snapshots, tables and the report go; nothing is written when absent.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, RunFailure> {
        let text = fs::read_to_string(path).map_err(|e| RunFailure::new(Stage::Config, Error::Io(e)).at(path))?;
        serde_json::from_str(&text).map_err(|e| RunFailure::new(Stage::Config, Error::Json(e)).at(path))
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.t_final > 0.0) || !(self.dt > 0.0) || self.dt > self.t_final {
            return Err(Error::Validation(format!(
                "need 0 < dt <= t_final, got dt = {}, t_final = {}",
                self.dt, self.t_final
            )));
        }
        if !(self.grid.l > 0.0) || !(1..=3).contains(&self.grid.dim) {
            return Err(Error::Validation(format!("grid needs L > 0 and dim in 1..=3, got {:?}", self.grid)));
        }
        self.model.validate(self.grid.dim)?;
        self.data.validate(self.grid.dim)
    }

    /// Points per axis after applying `auto_nyquist`.
    pub fn points(&self) -> usize {
        let need = self.data.required_points(&vec![self.grid.l; self.grid.dim]).into_iter().max().unwrap_or(4);
        match self.grid.points {
            Some(n) if self.grid.auto_nyquist => n.max(need),
            Some(n) => n,
            None => need,
        }
    }
}

/// Which part of a run failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Config,
    InitialData,
    Solver,
    Diagnostics,
    Output,
}

impl Stage {
    pub fn module(&self) -> &'static str {
        match self {
            Stage::Config | Stage::Output => "cli_runner",
            Stage::InitialData => "initial_data",
            Stage::Solver => "nonlinear_solver",
            Stage::Diagnostics => "diagnostics",
        }
    }
}

#[derive(Debug)]
pub struct RunFailure {
    pub stage: Stage,
    pub config: Option<PathBuf>,
    pub error: Error,
}

impl RunFailure {
    pub fn new(stage: Stage, error: Error) -> Self {
        Self { stage, config: None, error }
    }

    pub fn at(mut self, path: &Path) -> Self {
        self.config = Some(path.to_path_buf());
        self
    }

    /// 2 for invalid input, 3 for numerical divergence, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.error.is_divergence() {
            3
        } else if self.error.is_validation() {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.stage.module())?;
        if let Some(p) = &self.config {
            write!(f, " {}:", p.display())?;
        }
        write!(f, " {}", self.error)
    }
}

impl std::error::Error for RunFailure {}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotSummary {
    pub t: f64,
    pub l2: f64,
    pub max_modulus: f64,
    /// File name of the binary snapshot when an output directory is set.
    pub file: Option<String>,
}

/// One diagnostic as a table: the CSV written for it has these columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub model: String,
    pub family: String,
    pub dim: usize,
    pub l: f64,
    pub points: usize,
    pub steps: usize,
    pub variable: Variable,
    pub snapshots: Vec<SnapshotSummary>,
    pub diagnostics: Vec<DiagnosticTable>,
    /// Mean zero mode dropped by the GP evolution.
    pub zero_mode_removed: f64,
    pub config_sha256: String,
    /// SHA-256 of this report with `wall_seconds` and `checksum` blanked.
    pub checksum: String,
    pub wall_seconds: f64,
}

impl RunReport {
    fn digest(&self) -> String {
        let mut copy = self.clone();
        copy.wall_seconds = 0.0;
        copy.checksum.clear();
        hex::encode(Sha256::digest(serde_json::to_vec(&copy).expect("report serialises")))
    }

    /// Recompute the checksum and compare.
    pub fn verify(&self) -> bool {
        self.digest() == self.checksum
    }
}

/// Physical field of a snapshot: `Upsilon v` for GP, the solution otherwise.
fn physical(traj: &Trajectory, f: &Field) -> crate::Result<Field> {
    if traj.variable == Variable::V {
        upsilon(f)
    } else {
        Ok(f.clone())
    }
}

fn diagnostic(req: &DiagnosticRequest, traj: &Trajectory) -> crate::Result<DiagnosticTable> {
    let table = |columns: &[&str], rows: Vec<Vec<f64>>| DiagnosticTable {
        name: req.name().into(),
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows,
    };
    match req {
        DiagnosticRequest::Mass => {
            let m0 = l2_norm(&traj.u0);
            let rows = traj
                .times
                .iter()
                .zip(&traj.fields)
                .map(|(&t, f)| {
                    let m = l2_norm(f);
                    vec![t, m, (m - m0) / m0.max(1e-300)]
                })
                .collect();
            Ok(table(&["t", "l2", "relative_drift"], rows))
        }
        DiagnosticRequest::Peak => {
            let dim = traj.grid().dim();
            let mut rows = Vec::new();
            for (&t, f) in traj.times.iter().zip(&traj.fields) {
                let u = physical(traj, f)?;
                let grid = u.grid().clone();
                let (j, m) = u
                    .samples()
                    .iter()
                    .map(|z| z.norm())
                    .enumerate()
                    .fold((0, 0.0), |b, (j, m)| if m > b.1 { (j, m) } else { b });
                let mut row = vec![t, m];
                row.extend_from_slice(&grid.positions()[j][..dim]);
                rows.push(row);
            }
            let mut cols = vec!["t", "max_modulus"];
            cols.extend(["x1", "x2", "x3"].iter().take(dim));
            Ok(table(&cols, rows))
        }
        DiagnosticRequest::Duhamel { s } => {
            let duh = duhamel_extract(traj)?;
            let rows = traj
                .times
                .iter()
                .zip(&traj.fields)
                .zip(&duh)
                .map(|((&t, u), i)| vec![t, sobolev_norm(i, *s), sobolev_norm(u, *s)])
                .collect();
            Ok(table(&["t", "duhamel_hs", "solution_hs"], rows))
        }
        DiagnosticRequest::Strichartz { p, q } => {
            let order = match &traj.model {
                ModelSpec::Linear {
                    model: LinearModel::FourthOrder { .. },
                }
                | ModelSpec::FourthNls { .. } => GroupOrder::Fourth,
                _ => GroupOrder::Second,
            };
            let v = strichartz_functional(&traj.times, &traj.fields, *p, *q, order)?;
            Ok(table(&["p", "q", "value", "ratio"], vec![vec![*p, *q, v.value, v.ratio]]))
        }
        DiagnosticRequest::Energy => {
            let psi = gp_change_of_variables(traj)?;
            let rows = psi
                .times
                .iter()
                .zip(&psi.fields)
                .map(|(&t, f)| {
                    Ok(vec![
                        t,
                        ginzburg_landau_energy(f, EnergyQuadrature::Space)?,
                        ginzburg_landau_energy(f, EnergyQuadrature::Frequency)?,
                    ])
                })
                .collect::<crate::Result<Vec<_>>>()?;
            Ok(table(&["t", "energy_space", "energy_frequency"], rows))
        }
    }
}

/// Little-endian `f64` pairs `(re, im)` in row-major order.
pub fn snapshot_bytes(field: &Field) -> Vec<u8> {
    let s = field.to_space();
    let mut out = Vec::with_capacity(s.samples().len() * 16);
    for z in s.samples() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

/// Metadata stored next to each binary snapshot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotSidecar {
    pub t: f64,
    pub dim: usize,
    pub extent: Vec<f64>,
    pub points: Vec<usize>,
    pub variable: Variable,
    pub layout: String,
    pub sha256: String,
}

fn write_outputs(dir: &Path, traj: &Trajectory, report: &mut RunReport) -> crate::Result<()> {
    fs::create_dir_all(dir)?;
    let grid = traj.grid();
    for (k, (&t, f)) in traj.times.iter().zip(&traj.fields).enumerate() {
        let bytes = snapshot_bytes(f);
        let name = format!("snapshot_{k:04}.bin");
        fs::write(dir.join(&name), &bytes)?;
        let side = SnapshotSidecar {
            t,
            dim: grid.dim(),
            extent: grid.extent().to_vec(),
            points: grid.points().to_vec(),
            variable: traj.variable,
            layout: "row-major, interleaved re/im, f64 little-endian".into(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        };
        fs::write(dir.join(format!("snapshot_{k:04}.json")), serde_json::to_vec_pretty(&side)?)?;
        report.snapshots[k].file = Some(name);
    }
    for table in &report.diagnostics {
        let mut w = csv::Writer::from_path(dir.join(format!("{}.csv", table.name))).map_err(csv_error)?;
        w.write_record(&table.columns).map_err(csv_error)?;
        for row in &table.rows {
            w.write_record(row.iter().map(|v| format!("{v:e}"))).map_err(csv_error)?;
        }
        w.flush()?;
    }
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

/// Run one configuration end to end.
pub fn run(config: &RunConfig) -> Result<RunReport, RunFailure> {
    let start = Instant::now();
    config.validate().map_err(|e| RunFailure::new(Stage::Config, e))?;
    let n = config.points();
    let grid = Grid::cube(config.grid.dim, config.grid.l, n).map_err(|e| RunFailure::new(Stage::Config, e))?;
    let check = if config.grid.auto_nyquist || config.grid.points.is_none() {
        ResolutionCheck::Enforce
    } else {
        ResolutionCheck::Warn
    };
    let u0 = if matches!(config.model, ModelSpec::Gp { .. }) {
        gp_initial_with(&config.data, &grid, check).map(|p| p.1)
    } else {
        build_with(&config.data, &grid, check).map(|b| b.field)
    }
    .map_err(|e| RunFailure::new(Stage::InitialData, e))?;

    let steps = (config.t_final / config.dt).round().max(1.0) as usize;
    let dt = config.t_final / steps as f64;
    let mut snaps: Vec<f64> = config
        .snapshot_times
        .iter()
        .map(|&t| (t / dt).round() * dt)
        .filter(|&t| t > 0.0 && t <= config.t_final)
        .collect();
    snaps.push(config.t_final);
    snaps.sort_by(f64::total_cmp);
    snaps.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * config.t_final);
    let traj = evolve(&config.model, &u0, config.t_final, dt, &snaps).map_err(|e| RunFailure::new(Stage::Solver, e))?;

    let diagnostics = config
        .diagnostics
        .iter()
        .map(|d| diagnostic(d, &traj))
        .collect::<crate::Result<Vec<_>>>()
        .map_err(|e| RunFailure::new(Stage::Diagnostics, e))?;
    let snapshots = traj
        .times
        .iter()
        .zip(&traj.fields)
        .map(|(&t, f)| {
            let u = physical(&traj, f)?;
            Ok(SnapshotSummary {
                t,
                l2: l2_norm(&u),
                max_modulus: u.max_modulus(),
                file: None,
            })
        })
        .collect::<crate::Result<Vec<_>>>()
        .map_err(|e| RunFailure::new(Stage::Diagnostics, e))?;
    let mut cfg = config.clone();
    cfg.output_dir = None;
    let config_sha256 = hex::encode(Sha256::digest(serde_json::to_vec(&cfg).expect("config serialises")));
    let mut report = RunReport {
        model: config.model.label().to_string(),
        family: config.data.family_name().into(),
        dim: config.grid.dim,
        l: config.grid.l,
        points: n,
        steps,
        variable: traj.variable,
        snapshots,
        diagnostics,
        zero_mode_removed: traj.zero_mode_removed,
        config_sha256,
        checksum: String::new(),
        wall_seconds: 0.0,
    };
    if let Some(dir) = &config.output_dir {
        write_outputs(dir, &traj, &mut report).map_err(|e| RunFailure::new(Stage::Output, e))?;
    }
    report.checksum = report.digest();
    report.wall_seconds = start.elapsed().as_secs_f64();
    if let Some(dir) = &config.output_dir {
        let mut f = fs::File::create(dir.join("report.json")).map_err(|e| RunFailure::new(Stage::Output, Error::Io(e)))?;
        f.write_all(&serde_json::to_vec_pretty(&report).expect("report serialises"))
            .map_err(|e| RunFailure::new(Stage::Output, Error::Io(e)))?;
    }
    Ok(report)
}

/// Replace the value at a dotted path such as `data.delta` or `grid.L`.
pub fn set_path(config: &RunConfig, path: &str, value: Value) -> crate::Result<RunConfig> {
    let mut root = serde_json::to_value(config)?;
    let mut node = &mut root;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, key) in parts.iter().enumerate() {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| Error::Validation(format!("sweep axis '{path}': '{key}' is not inside an object")))?;
        if i + 1 == parts.len() {
            if !obj.contains_key(*key) {
                return Err(Error::Validation(format!("sweep axis '{path}': no field '{key}'")));
            }
            obj.insert(key.to_string(), value.clone());
            break;
        }
        node = obj
            .get_mut(*key)
            .ok_or_else(|| Error::Validation(format!("sweep axis '{path}': no field '{key}'")))?;
    }
    Ok(serde_json::from_value(root)?)
}

/// One point of a sweep; failures are kept instead of aborting the sweep.
#[derive(Debug)]
pub struct SweepPoint {
    pub value: Value,
    pub outcome: Result<RunReport, RunFailure>,
}

/// Run `base` once per value of the dotted `axis`, in parallel. Each run
/// writes to `<output_dir>/<axis>=<value>` when the base has an output directory.
pub fn sweep(base: &RunConfig, axis: &str, values: &[Value]) -> crate::Result<Vec<SweepPoint>> {
    let configs = values
        .iter()
        .map(|v| {
            let mut c = set_path(base, axis, v.clone())?;
            if let Some(dir) = &base.output_dir {
                c.output_dir = Some(dir.join(format!("{axis}={v}")));
            }
            Ok((v.clone(), c))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(configs
        .into_par_iter()
        .map(|(value, c)| SweepPoint {
            value,
            outcome: run(&c),
        })
        .collect())
}
