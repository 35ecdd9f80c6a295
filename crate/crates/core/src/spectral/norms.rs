use super::field::{Field, Representation};
use super::multiplier::norm_sq;
use crate::error::{Error, Result};

/// `(int |f|^p dx)^(1/p)` by the lattice rule; `p = inf` gives the max.
pub fn lp_norm(field: &Field, p: f64) -> f64 {
    let f = field.to_space();
    if p.is_infinite() {
        return f.max_modulus();
    }
    let dv = f.grid().cell_volume();
    let sum: f64 = f.samples().iter().map(|z| z.norm().powf(p)).sum();
    (sum * dv).powf(1.0 / p)
}

pub fn l2_norm(field: &Field) -> f64 {
    lp_norm(field, 2.0)
}

/// `||f||_{H^s} = ||(1+|xi|^2)^{s/2} f^||_{L^2}`, normalised so `H^0 = L^2`.
pub fn sobolev_norm(field: &Field, s: f64) -> f64 {
    weighted_frequency_norm(field, |xi| (1.0 + norm_sq(xi)).powf(s))
}

/// Homogeneous version with weight `|xi|^{2s}`.
pub fn homogeneous_sobolev_norm(field: &Field, s: f64) -> f64 {
    weighted_frequency_norm(field, |xi| norm_sq(xi).powf(s))
}

fn weighted_frequency_norm(field: &Field, weight: impl Fn(&[f64]) -> f64) -> f64 {
    let f = field.to_rep(Representation::Frequency);
    let grid = f.grid();
    let dim = grid.dim();
    let freqs = grid.frequencies();
    let sum: f64 = f
        .samples()
        .iter()
        .zip(&freqs)
        .map(|(z, xi)| weight(&xi[..dim]) * z.norm_sqr())
        .sum();
    let volume: f64 = grid.extent().iter().map(|l| 2.0 * l).product();
    (sum / volume).sqrt()
}

/// `(int_0^T ||u(t)||_{L^r}^q dt)^{1/q}` from stored snapshots by the trapezoid rule.
///
/// `q = inf` gives `sup_t ||u(t)||_{L^r}`.
pub fn mixed_norm(times: &[f64], fields: &[Field], q: f64, r: f64) -> Result<f64> {
    if times.len() != fields.len() || times.len() < 2 {
        return Err(Error::Contract("mixed norm needs at least two snapshots, one per time".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Contract("snapshot times must be increasing".into()));
    }
    let values: Vec<f64> = fields.iter().map(|f| lp_norm(f, r)).collect();
    if q.is_infinite() {
        return Ok(values.iter().cloned().fold(0.0, f64::max));
    }
    let mut integral = 0.0;
    for k in 1..times.len() {
        integral += 0.5 * (times[k] - times[k - 1]) * (values[k].powf(q) + values[k - 1].powf(q));
    }
    Ok(integral.powf(1.0 / q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Grid;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_norms() {
        let g = Grid::new(&[15.0], &[256]).unwrap();
        let f = Field::from_real_fn(&g, |x| (-x[0] * x[0]).exp());
        assert!((l2_norm(&f) - (PI / 2.0).powf(0.25)).abs() < 1e-13);
        assert!((sobolev_norm(&f, 0.0) - l2_norm(&f)).abs() < 1e-13);
        // ||f'||^2 = int 4x^2 e^{-2x^2} = sqrt(pi/2)
        let h1 = homogeneous_sobolev_norm(&f, 1.0);
        assert!((h1 * h1 - (PI / 2.0).sqrt()).abs() < 1e-12);
        assert!((lp_norm(&f, f64::INFINITY) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mixed_norm_of_constant_trajectory() {
        let g = Grid::new(&[15.0], &[128]).unwrap();
        let f = Field::from_real_fn(&g, |x| (-x[0] * x[0]).exp());
        let times = [0.0, 0.5, 1.0, 2.0];
        let fields = vec![f.clone(); 4];
        let v = mixed_norm(&times, &fields, 4.0, 2.0).unwrap();
        assert!((v - l2_norm(&f) * 2f64.powf(0.25)).abs() < 1e-12);
    }
}
