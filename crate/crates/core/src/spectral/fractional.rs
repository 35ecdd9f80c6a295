use num_complex::Complex64;

use super::field::Field;
use super::multiplier::{apply_multiplier, norm_sq, Multiplier};
use crate::error::{Error, Result};

/// `D^s` with symbol `|xi|^s`, or `D^s_{x_j}` with symbol `|xi_j|^s` when `axis` is given.
pub fn frac_derivative(field: &Field, s: f64, axis: Option<usize>) -> Result<Field> {
    if s < 0.0 {
        return Err(Error::Domain(format!("fractional derivative order must be non-negative, got {s}")));
    }
    apply_multiplier(field, &frac_derivative_symbol(s, axis))
}

pub fn frac_derivative_symbol(s: f64, axis: Option<usize>) -> Multiplier {
    match axis {
        None => Multiplier::real(format!("D^{s}"), move |xi| norm_sq(xi).sqrt().powf(s)),
        Some(j) => Multiplier::real(format!("D^{s}_x{j}"), move |xi| xi[j].abs().powf(s)),
    }
}

/// Bessel potential `J^s = (1 - Delta)^{s/2}`; with `exclude = Some(j)` the
/// Laplacian runs over every axis except `j`.
pub fn bessel_potential(field: &Field, s: f64, exclude: Option<usize>) -> Result<Field> {
    let m = Multiplier::real(format!("J^{s}"), move |xi| {
        let k2: f64 = xi
            .iter()
            .enumerate()
            .filter(|(a, _)| Some(*a) != exclude)
            .map(|(_, x)| x * x)
            .sum();
        (1.0 + k2).powf(s / 2.0)
    });
    apply_multiplier(field, &m)
}

/// Largest grid the quadratic-cost square function accepts.
pub const SQUARE_FUNCTION_MAX_POINTS: usize = 4096;

/// Pointwise fractional square function
/// `(int |f(x) - f(y)|^2 / |x - y|^{1+2s} dy)^{1/2}` in one dimension.
///
/// The field is extended by zero outside the box; the exterior contributes
/// in closed form and the diagonal cell uses the local linear behaviour of `f`.
pub fn square_function_oracle(field: &Field, s: f64) -> Result<Vec<f64>> {
    let grid = field.grid();
    if grid.dim() != 1 {
        return Err(Error::Contract("square function oracle is one-dimensional".into()));
    }
    let n = grid.len();
    if n > SQUARE_FUNCTION_MAX_POINTS {
        return Err(Error::Cost(format!(
            "square function oracle needs N <= {SQUARE_FUNCTION_MAX_POINTS}, got {n}"
        )));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("square function order must lie in (0, 1), got {s}")));
    }
    let f = field.to_space();
    let u = f.samples();
    let dx = grid.spacing(0);
    let l = grid.extent()[0];
    let expo = 1.0 + 2.0 * s;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let xi = grid.coordinate(0, i);
        let mut acc = 0.0;
        for (j, uj) in u.iter().enumerate() {
            if j == i {
                continue;
            }
            let d = (i as f64 - j as f64).abs() * dx;
            acc += (u[i] - uj).norm_sqr() / d.powf(expo) * dx;
        }
        let left = if i > 0 { u[i - 1] } else { Complex64::new(0.0, 0.0) };
        let right = if i + 1 < n { u[i + 1] } else { Complex64::new(0.0, 0.0) };
        let slope = ((right - left) / (2.0 * dx)).norm_sqr();
        let h = dx / 2.0;
        acc += 2.0 * slope * h.powf(2.0 - 2.0 * s) / (2.0 - 2.0 * s);
        let near = xi - dx / 2.0 + l;
        let far = l - xi - dx / 2.0;
        acc += u[i].norm_sqr() * (near.max(dx / 2.0).powf(-2.0 * s) + far.max(dx / 2.0).powf(-2.0 * s)) / (2.0 * s);
        out.push(acc.sqrt());
    }
    Ok(out)
}

/// `L^2` norm of the square function, for comparison with `||D^s f||_{L^2}`.
pub fn square_function_norm(field: &Field, s: f64) -> Result<f64> {
    let v = square_function_oracle(field, s)?;
    let dx = field.grid().spacing(0);
    Ok((v.iter().map(|x| x * x).sum::<f64>() * dx).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::grid::Grid;
    use crate::spectral::norms::l2_norm;

    #[test]
    fn zero_order_is_identity() {
        let g = Grid::new(&[8.0], &[64]).unwrap();
        let f = Field::from_real_fn(&g, |x| (-x[0] * x[0]).exp() * (1.0 + x[0]));
        let d = frac_derivative(&f, 0.0, None).unwrap();
        for (a, b) in f.samples().iter().zip(d.samples()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn semigroup_property() {
        let g = Grid::new(&[10.0], &[128]).unwrap();
        let f = Field::from_real_fn(&g, |x| (-x[0] * x[0]).exp());
        let a = frac_derivative(&frac_derivative(&f, 0.3, None).unwrap(), 0.5, None).unwrap();
        let b = frac_derivative(&f, 0.8, None).unwrap();
        assert!(l2_norm(&a.sub(&b).unwrap()) < 1e-12);
    }

    #[test]
    fn rejects_large_grids() {
        let g = Grid::new(&[10.0], &[8192]).unwrap();
        let f = Field::zeros(&g);
        assert!(matches!(square_function_oracle(&f, 0.5), Err(Error::Cost(_))));
    }
}
