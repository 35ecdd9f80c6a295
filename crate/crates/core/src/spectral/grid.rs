use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic lattice on the box `[-L_i, L_i)` in one to three dimensions.
///
/// Samples are stored row-major with axis 0 slowest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    extent: Vec<f64>,
    points: Vec<usize>,
}

impl Grid {
    pub fn new(extent: &[f64], points: &[usize]) -> Result<Self> {
        if extent.is_empty() || extent.len() > 3 {
            return Err(Error::Contract(format!(
                "grid dimension must be 1, 2 or 3, got {}",
                extent.len()
            )));
        }
        if extent.len() != points.len() {
            return Err(Error::Contract(format!(
                "extent has {} axes but points has {}",
                extent.len(),
                points.len()
            )));
        }
        for (axis, (&l, &n)) in extent.iter().zip(points).enumerate() {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::Contract(format!("axis {axis}: half-length must be positive, got {l}")));
            }
            if n < 4 || !n.is_power_of_two() {
                return Err(Error::Contract(format!(
                    "axis {axis}: point count must be a power of two and at least 4, got {n}"
                )));
            }
        }
        Ok(Self {
            extent: extent.to_vec(),
            points: points.to_vec(),
        })
    }

    /// Same half-length and point count on every axis.
    pub fn cube(dim: usize, extent: f64, points: usize) -> Result<Self> {
        Self::new(&vec![extent; dim], &vec![points; dim])
    }

    pub fn dim(&self) -> usize {
        self.extent.len()
    }

    pub fn extent(&self) -> &[f64] {
        &self.extent
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        2.0 * self.extent[axis] / self.points[axis] as f64
    }

    /// Volume of one lattice cell.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }

    /// Volume of one cell of the dual lattice, `prod pi / L_i`.
    pub fn dual_cell_volume(&self) -> f64 {
        self.extent.iter().map(|l| PI / l).product()
    }

    pub fn coordinate(&self, axis: usize, j: usize) -> f64 {
        -self.extent[axis] + j as f64 * self.spacing(axis)
    }

    pub fn coordinates(&self, axis: usize) -> Vec<f64> {
        (0..self.points[axis]).map(|j| self.coordinate(axis, j)).collect()
    }

    /// Signed integer mode for storage index `j`: `0..N/2` then `-N/2..0`.
    pub fn mode(&self, axis: usize, j: usize) -> i64 {
        let n = self.points[axis];
        if j < n / 2 {
            j as i64
        } else {
            j as i64 - n as i64
        }
    }

    /// Angular frequency of storage index `j`.
    ///
    /// The unpaired Nyquist mode is reported as `+pi N / (2L)`.
    pub fn wavenumber(&self, axis: usize, j: usize) -> f64 {
        let n = self.points[axis];
        let k = if j == n / 2 { (n / 2) as i64 } else { self.mode(axis, j) };
        PI * k as f64 / self.extent[axis]
    }

    pub fn wavenumbers(&self, axis: usize) -> Vec<f64> {
        (0..self.points[axis]).map(|j| self.wavenumber(axis, j)).collect()
    }

    pub fn is_nyquist(&self, axis: usize, j: usize) -> bool {
        j == self.points[axis] / 2
    }

    pub fn max_wavenumber(&self, axis: usize) -> f64 {
        PI * (self.points[axis] / 2) as f64 / self.extent[axis]
    }

    /// Multi-index of a flat row-major offset.
    pub fn unravel(&self, mut flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        for axis in (0..self.dim()).rev() {
            idx[axis] = flat % self.points[axis];
            flat /= self.points[axis];
        }
        idx
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        let mut flat = 0;
        for axis in 0..self.dim() {
            flat = flat * self.points[axis] + idx[axis];
        }
        flat
    }

    /// Position of every lattice point, flattened.
    pub fn positions(&self) -> Vec<[f64; 3]> {
        (0..self.len())
            .map(|f| {
                let idx = self.unravel(f);
                let mut x = [0.0; 3];
                for a in 0..self.dim() {
                    x[a] = self.coordinate(a, idx[a]);
                }
                x
            })
            .collect()
    }

    /// Frequency vector of every lattice mode, flattened.
    pub fn frequencies(&self) -> Vec<[f64; 3]> {
        (0..self.len())
            .map(|f| {
                let idx = self.unravel(f);
                let mut xi = [0.0; 3];
                for a in 0..self.dim() {
                    xi[a] = self.wavenumber(a, idx[a]);
                }
                xi
            })
            .collect()
    }

    /// Storage index of the lattice point closest to `x` on each axis.
    pub fn nearest_index(&self, x: &[f64]) -> Vec<usize> {
        (0..self.dim())
            .map(|a| {
                let j = ((x[a] + self.extent[a]) / self.spacing(a)).round() as i64;
                j.rem_euclid(self.points[a] as i64) as usize
            })
            .collect()
    }
}
