//! Adaptive Gauss-Kronrod quadrature (7-point Gauss, 15-point Kronrod) for
//! complex-valued integrands on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Integral estimate with an error bound.
#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

/// One 15-point panel: Kronrod value and |Kronrod - Gauss|.
pub fn gk15(f: &mut impl FnMut(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error && self.a == o.a
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error
            .total_cmp(&o.error)
            .then_with(|| o.a.total_cmp(&self.a))
    }
}

/// Globally adaptive integration over `[a, b]` starting from `initial` equal panels.
///
/// Stops when the summed error is below `max(abs_tol, rel_tol |I|)` or after
/// `max_panels` panels; the returned error is the honest sum either way.
pub fn integrate(
    mut f: impl FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    initial: usize,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> QuadResult {
    let initial = initial.max(1);
    let mut heap = BinaryHeap::new();
    let width = (b - a) / initial as f64;
    let mut evaluations = 0;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for k in 0..initial {
        let pa = a + k as f64 * width;
        let pb = if k + 1 == initial { b } else { pa + width };
        let (value, error) = gk15(&mut f, pa, pb);
        evaluations += 15;
        total += value;
        err += error;
        heap.push(Panel { a: pa, b: pb, value, error });
    }
    while err > abs_tol.max(rel_tol * total.norm()) && heap.len() < max_panels {
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        // Panels at the rounding floor cannot be improved by bisection.
        if mid <= worst.a || mid >= worst.b || worst.error <= 50.0 * f64::EPSILON * worst.value.norm() {
            heap.push(worst);
            break;
        }
        total -= worst.value;
        err -= worst.error;
        for (pa, pb) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(&mut f, pa, pb);
            evaluations += 15;
            total += value;
            err += error;
            heap.push(Panel { a: pa, b: pb, value, error });
        }
    }
    let (value, error) = totals(&heap);
    QuadResult {
        value,
        error: error + roundoff(&heap),
        evaluations,
    }
}

// Sum in a fixed order so the result does not depend on heap layout.
fn totals(heap: &BinaryHeap<Panel>) -> (Complex64, f64) {
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut v = Complex64::new(0.0, 0.0);
    let mut e = 0.0;
    for p in panels {
        v += p.value;
        e += p.error;
    }
    (v, e)
}

fn roundoff(heap: &BinaryHeap<Panel>) -> f64 {
    let mass: f64 = heap.iter().map(|p| p.value.norm()).sum();
    mass * 4.0 * f64::EPSILON
}
