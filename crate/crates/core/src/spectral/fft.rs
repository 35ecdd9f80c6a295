//! Multi-dimensional unnormalised DFT built from rustfft line transforms.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::grid::Grid;

type Plan = Arc<dyn Fft<f64>>;

fn plan(n: usize, direction: FftDirection) -> Plan {
    static CACHE: OnceLock<Mutex<(FftPlanner<f64>, HashMap<(usize, bool), Plan>)>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = cache.lock().expect("fft planner poisoned");
    let key = (n, direction == FftDirection::Forward);
    if let Some(p) = guard.1.get(&key) {
        return p.clone();
    }
    let p = guard.0.plan_fft(n, direction);
    guard.1.insert(key, p.clone());
    p
}

/// In-place unnormalised DFT along every axis of a row-major array.
pub fn dft(grid: &Grid, data: &mut [Complex64], direction: FftDirection) {
    let dims = grid.points();
    for axis in 0..dims.len() {
        dft_axis(dims, axis, data, direction);
    }
}

/// One-dimensional DFT of a contiguous buffer.
pub fn dft_1d(data: &mut [Complex64], direction: FftDirection) {
    plan(data.len(), direction).process(data);
}

fn dft_axis(dims: &[usize], axis: usize, data: &mut [Complex64], direction: FftDirection) {
    let n = dims[axis];
    let p = plan(n, direction);
    let inner: usize = dims[axis + 1..].iter().product();
    if inner == 1 {
        p.process(data);
        return;
    }
    let outer: usize = dims[..axis].iter().product();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); p.get_inplace_scratch_len()];
    for o in 0..outer {
        let base = o * n * inner;
        for i in 0..inner {
            for (k, v) in line.iter_mut().enumerate() {
                *v = data[base + k * inner + i];
            }
            p.process_with_scratch(&mut line, &mut scratch);
            for (k, v) in line.iter().enumerate() {
                data[base + k * inner + i] = *v;
            }
        }
    }
}

/// Pad-free linear convolution of two sequences via FFT.
pub fn convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let out_len = a.len() + b.len() - 1;
    let m = out_len.next_power_of_two();
    let mut fa = vec![Complex64::new(0.0, 0.0); m];
    let mut fb = vec![Complex64::new(0.0, 0.0); m];
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    dft_1d(&mut fa, FftDirection::Forward);
    dft_1d(&mut fb, FftDirection::Forward);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= *y / m as f64;
    }
    dft_1d(&mut fa, FftDirection::Inverse);
    fa.truncate(out_len);
    fa
}
