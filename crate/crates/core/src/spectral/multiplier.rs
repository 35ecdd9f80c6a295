use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::field::{Field, Representation};
use crate::error::{Error, Result};

/// What to do with the unpaired Nyquist mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nyquist {
    /// Evaluate the symbol at `+xi_Nyquist`.
    Evaluate,
    /// Set the mode to zero; used for odd symbols such as Hilbert or Riesz.
    Zero,
}

type Symbol = dyn Fn(&[f64]) -> Complex64 + Send + Sync;

/// Fourier multiplier `f -> F^-1[m(xi) f^(xi)]`.
#[derive(Clone)]
pub struct Multiplier {
    label: String,
    symbol: Arc<Symbol>,
    nyquist: Nyquist,
}

impl fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Multiplier")
            .field("label", &self.label)
            .field("nyquist", &self.nyquist)
            .finish()
    }
}

impl Multiplier {
    pub fn new(label: impl Into<String>, symbol: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            symbol: Arc::new(symbol),
            nyquist: Nyquist::Evaluate,
        }
    }

    pub fn real(label: impl Into<String>, symbol: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(label, move |xi| Complex64::new(symbol(xi), 0.0))
    }

    pub fn with_nyquist(mut self, nyquist: Nyquist) -> Self {
        self.nyquist = nyquist;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn nyquist(&self) -> Nyquist {
        self.nyquist
    }

    pub fn eval(&self, xi: &[f64]) -> Complex64 {
        (self.symbol)(xi)
    }

    /// Product of two symbols.
    pub fn compose(&self, other: &Multiplier) -> Multiplier {
        let (a, b) = (self.symbol.clone(), other.symbol.clone());
        let nyquist = if self.nyquist == Nyquist::Zero || other.nyquist == Nyquist::Zero {
            Nyquist::Zero
        } else {
            Nyquist::Evaluate
        };
        Multiplier {
            label: format!("{}*{}", self.label, other.label),
            symbol: Arc::new(move |xi| a(xi) * b(xi)),
            nyquist,
        }
    }
}

/// Apply a multiplier, returning the result in the caller's representation.
pub fn apply_multiplier(field: &Field, m: &Multiplier) -> Result<Field> {
    let rep = field.rep();
    let mut f = field.to_frequency();
    let grid = f.grid().clone();
    let dim = grid.dim();
    let freqs = grid.frequencies();
    for (flat, v) in f.samples_mut().iter_mut().enumerate() {
        let xi = &freqs[flat][..dim];
        if m.nyquist == Nyquist::Zero {
            let idx = grid.unravel(flat);
            if (0..dim).any(|a| grid.is_nyquist(a, idx[a])) {
                *v = Complex64::new(0.0, 0.0);
                continue;
            }
        }
        let s = m.eval(xi);
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::Multiplier {
                label: m.label.clone(),
                frequency: xi.to_vec(),
            });
        }
        *v *= s;
    }
    if rep == Representation::Space {
        f.set_rep(Representation::Space);
    }
    Ok(f)
}

/// `|xi|^2` for a frequency vector.
pub fn norm_sq(xi: &[f64]) -> f64 {
    xi.iter().map(|x| x * x).sum()
}

/// Hilbert transform symbol `-i sgn(xi)` in one dimension.
pub fn hilbert() -> Multiplier {
    Multiplier::new("hilbert", |xi| Complex64::new(0.0, -xi[0].signum() * (xi[0] != 0.0) as i32 as f64))
        .with_nyquist(Nyquist::Zero)
}

/// Riesz transform along `axis`, symbol `i xi_j / |xi|`, zero at the origin.
pub fn riesz(axis: usize) -> Multiplier {
    Multiplier::new(format!("riesz{axis}"), move |xi| {
        let r = norm_sq(xi).sqrt();
        if r == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, xi[axis] / r)
        }
    })
    .with_nyquist(Nyquist::Zero)
}

/// Partial derivative along `axis`.
pub fn derivative(axis: usize) -> Multiplier {
    Multiplier::new(format!("d{axis}"), move |xi| Complex64::new(0.0, xi[axis])).with_nyquist(Nyquist::Zero)
}

/// The Laplacian, symbol `-|xi|^2`.
pub fn laplacian() -> Multiplier {
    Multiplier::real("laplacian", |xi| -norm_sq(xi))
}
