use num_complex::Complex64;
use rustfft::FftDirection;
use serde::{Deserialize, Serialize};

use super::fft::dft;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Which domain the samples of a [`Field`] live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Space,
    Frequency,
}

/// Complex samples on a [`Grid`], either in space or as Fourier coefficients.
///
/// Frequency samples approximate the continuous transform
/// `f^(xi) = int f(x) exp(-i xi.x) dx` at the lattice frequencies, so
/// `sum |f^|^2 / (2L)^n` equals the discrete `L^2` norm squared.
#[derive(Clone, Debug)]
pub struct Field {
    grid: Grid,
    data: Vec<Complex64>,
    rep: Representation,
}

impl Field {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            data: vec![Complex64::new(0.0, 0.0); grid.len()],
            rep: Representation::Space,
        }
    }

    pub fn from_samples(grid: &Grid, data: Vec<Complex64>, rep: Representation) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::Contract(format!(
                "field has {} samples but grid has {} points",
                data.len(),
                grid.len()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            data,
            rep,
        })
    }

    /// Sample a function of position on the lattice.
    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let dim = grid.dim();
        let data = grid.positions().iter().map(|x| f(&x[..dim])).collect();
        Self {
            grid: grid.clone(),
            data,
            rep: Representation::Space,
        }
    }

    pub fn from_real_fn(grid: &Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn rep(&self) -> Representation {
        self.rep
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.data
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.data
    }

    /// Switch to the requested representation in place.
    pub fn set_rep(&mut self, rep: Representation) {
        if self.rep == rep {
            return;
        }
        match rep {
            Representation::Frequency => self.forward(),
            Representation::Space => self.inverse(),
        }
    }

    pub fn to_rep(&self, rep: Representation) -> Self {
        let mut f = self.clone();
        f.set_rep(rep);
        f
    }

    pub fn to_space(&self) -> Self {
        self.to_rep(Representation::Space)
    }

    pub fn to_frequency(&self) -> Self {
        self.to_rep(Representation::Frequency)
    }

    // Multiplying by dx and the alternating sign places the origin of the
    // continuous transform at x = 0 instead of at the first sample.
    fn forward(&mut self) {
        dft(&self.grid, &mut self.data, FftDirection::Forward);
        let scale = self.grid.cell_volume();
        self.apply_sign_and_scale(scale);
        self.rep = Representation::Frequency;
    }

    fn inverse(&mut self) {
        let scale = 1.0 / (self.grid.cell_volume() * self.grid.len() as f64);
        self.apply_sign_and_scale(scale);
        dft(&self.grid, &mut self.data, FftDirection::Inverse);
        self.rep = Representation::Space;
    }

    fn apply_sign_and_scale(&mut self, scale: f64) {
        let grid = &self.grid;
        for (flat, v) in self.data.iter_mut().enumerate() {
            let idx = grid.unravel(flat);
            let parity: usize = idx[..grid.dim()].iter().sum();
            let s = if parity % 2 == 0 { scale } else { -scale };
            *v *= s;
        }
    }

    /// Pointwise map in the current representation.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid.clone(),
            data: self.data.iter().map(|&z| f(z)).collect(),
            rep: self.rep,
        }
    }

    fn check_compatible(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Contract("fields live on different grids".into()));
        }
        Ok(())
    }

    /// `a * self + b * other`, taking `other` into this field's representation.
    pub fn axpby(&self, a: Complex64, other: &Field, b: Complex64) -> Result<Self> {
        self.check_compatible(other)?;
        let o = other.to_rep(self.rep);
        Ok(Self {
            grid: self.grid.clone(),
            data: self.data.iter().zip(&o.data).map(|(x, y)| a * x + b * y).collect(),
            rep: self.rep,
        })
    }

    pub fn sub(&self, other: &Field) -> Result<Self> {
        self.axpby(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    pub fn add(&self, other: &Field) -> Result<Self> {
        self.axpby(Complex64::new(1.0, 0.0), other, Complex64::new(1.0, 0.0))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| c * z)
    }

    /// Largest modulus of the space samples.
    pub fn max_modulus(&self) -> f64 {
        let s = self.to_space();
        s.data.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// Evaluate the trigonometric interpolant at an arbitrary point.
    ///
    /// Costs one pass over the frequency samples.
    pub fn interpolate(&self, x: &[f64]) -> Complex64 {
        let f = self.to_frequency();
        let grid = &self.grid;
        let dim = grid.dim();
        let mut phases: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
        for a in 0..dim {
            phases.push(
                (0..grid.points()[a])
                    .map(|j| {
                        let k = grid.mode(a, j) as f64 * std::f64::consts::PI / grid.extent()[a];
                        if grid.is_nyquist(a, j) {
                            // The unpaired mode is split evenly between +k and -k.
                            Complex64::new((k * x[a]).cos(), 0.0)
                        } else {
                            Complex64::from_polar(1.0, k * x[a])
                        }
                    })
                    .collect(),
            );
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (flat, v) in f.data.iter().enumerate() {
            let idx = grid.unravel(flat);
            let mut p = *v;
            for a in 0..dim {
                p *= phases[a][idx[a]];
            }
            acc += p;
        }
        let volume: f64 = grid.extent().iter().map(|l| 2.0 * l).product();
        acc / volume
    }

    /// Evaluate the trigonometric interpolant on the tensor product of
    /// per-axis coordinate lists, returned in row-major order.
    ///
    /// Costs one dense per-axis matrix product.
    pub fn interpolate_tensor(&self, coords: &[Vec<f64>]) -> Vec<Complex64> {
        let f = self.to_frequency();
        let grid = &self.grid;
        let dim = grid.dim();
        let mut shape: Vec<usize> = grid.points().to_vec();
        let mut data = f.data;
        for a in 0..dim {
            let n_in = shape[a];
            let n_out = coords[a].len();
            let inner: usize = shape[a + 1..].iter().product();
            let outer: usize = shape[..a].iter().product();
            let scale = 1.0 / (2.0 * grid.extent()[a]);
            let matrix: Vec<Complex64> = coords[a]
                .iter()
                .flat_map(|&x| {
                    (0..n_in).map(move |j| {
                        let k = grid.mode(a, j) as f64 * std::f64::consts::PI / grid.extent()[a];
                        if grid.is_nyquist(a, j) {
                            Complex64::new((k * x).cos() * scale, 0.0)
                        } else {
                            Complex64::from_polar(scale, k * x)
                        }
                    })
                })
                .collect();
            let mut out = vec![Complex64::new(0.0, 0.0); outer * n_out * inner];
            for o in 0..outer {
                for i in 0..inner {
                    for r in 0..n_out {
                        let row = &matrix[r * n_in..(r + 1) * n_in];
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (j, m) in row.iter().enumerate() {
                            acc += m * data[(o * n_in + j) * inner + i];
                        }
                        out[(o * n_out + r) * inner + i] = acc;
                    }
                }
            }
            data = out;
            shape[a] = n_out;
        }
        data
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_transform_matches_closed_form() {
        let g = Grid::new(&[20.0], &[256]).unwrap();
        let f = Field::from_real_fn(&g, |x| (-x[0] * x[0]).exp()).to_frequency();
        for (j, v) in f.samples().iter().enumerate() {
            let xi = g.wavenumber(0, j);
            let exact = PI.sqrt() * (-xi * xi / 4.0).exp();
            assert!((v - exact).norm() < 1e-10, "j={j}");
        }
    }

    #[test]
    fn roundtrip_identity() {
        let g = Grid::new(&[3.0, 5.0], &[16, 32]).unwrap();
        let f = Field::from_fn(&g, |x| Complex64::new((x[0] * x[1]).sin(), x[0].cos() * x[1]));
        let back = f.to_frequency().to_space();
        for (a, b) in f.samples().iter().zip(back.samples()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn interpolation_reproduces_lattice_and_smooth_values() {
        let g = Grid::new(&[10.0], &[128]).unwrap();
        let f = Field::from_real_fn(&g, |x| (-x[0] * x[0]).exp());
        assert!((f.interpolate(&[g.coordinate(0, 70)]) - f.samples()[70]).norm() < 1e-12);
        let x = 0.3337;
        assert!((f.interpolate(&[x]).re - (-x * x).exp()).abs() < 1e-12);
    }
}
