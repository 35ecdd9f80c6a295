use std::f64::consts::PI;

use dbu_lab::data::{build, DataSpec, Window};
use dbu_lab::linear::LinearModel;
use dbu_lab::nonlinear::{evolve, ModelSpec};
use dbu_lab::oracle::*;
use dbu_lab::spectral::Grid;
use num_complex::Complex64;

#[test]
fn gaussian_matches_closed_form() {
    let spec = DataSpec::gaussian(1.0, 1.0);
    for (x, t) in [(0.0, 0.05), (1.2, 0.4), (-2.5, 1.0), (0.3, 2.0)] {
        let r = kernel_point_eval(&LinearModel::Free, &spec, 12.0, x, t).unwrap();
        let d = Complex64::new(1.0, 4.0 * t);
        let exact = d.sqrt().inv() * (-(x * x) / d).exp();
        assert!((r.value - exact).norm() < 1e-8, "x {x} t {t}: {} vs {exact}", r.value);
        assert!(r.est_error < 1e-8);
    }
}

#[test]
fn backward_flow_is_conjugate() {
    let spec = DataSpec::gaussian(1.0, 1.0);
    let fwd = kernel_point_eval(&LinearModel::Free, &spec, 12.0, 0.7, 0.3).unwrap();
    let back = kernel_point_eval(&LinearModel::Free, &spec, 12.0, 0.7, -0.3).unwrap();
    assert!((fwd.value.conj() - back.value).norm() < 1e-10);
}

#[test]
fn unwindowed_focus_modulus() {
    for (alpha, l) in [(1.0, 10.0), (4.0, 40.0)] {
        let spec = DataSpec::elliptic_chirp(alpha, 0.5, 1.0).with_window(Window::None);
        let r = kernel_point_eval(&LinearModel::Free, &spec, l, 0.0, 1.0 / (4.0 * alpha)).unwrap();
        let exact = (alpha / PI).sqrt() * 2.0 * l.asinh();
        assert!((r.value.norm() - exact).abs() < 1e-6, "{} vs {exact}", r.value.norm());
    }
}

#[test]
fn reduced_focus_form_matches_generic_path_nearby() {
    let spec = DataSpec::elliptic_chirp(1.0, 0.5, 1.0);
    let at = kernel_point_eval(&LinearModel::Free, &spec, 10.0, 0.4, 0.25).unwrap();
    let near = kernel_point_eval(&LinearModel::Free, &spec, 10.0, 0.4, 0.25 * (1.0 - 1e-9)).unwrap();
    assert!((at.value - near.value).norm() < 1e-6, "{} vs {}", at.value, near.value);
    assert_ne!(at.method, near.method);
}

#[test]
fn spectral_flow_agrees_at_seeded_points() {
    let spec = DataSpec::elliptic_chirp(1.0, 0.5, 1.0);
    let grid = Grid::new(&[10.0], &[1024]).unwrap();
    for (x, t, fast, oracle) in spectral_vs_oracle(&spec, &grid, 5, 2024).unwrap() {
        assert!(x.abs() <= 5.0 && t <= 0.25);
        assert!((fast - oracle.value).norm() < 1e-5, "x {x} t {t}: {fast} vs {}", oracle.value);
    }
}

#[test]
fn non_second_order_models_are_rejected() {
    let spec = DataSpec::gaussian(1.0, 1.0);
    assert!(kernel_point_eval(&LinearModel::FourthOrder { alpha: 0.0 }, &spec, 10.0, 0.0, 0.1).is_err());
    assert!(kernel_point_eval(&LinearModel::Free, &spec, 10.0, 0.0, 0.0).is_err());
}

#[test]
fn fourth_order_kernel_scaling_at_origin() {
    let rep = fundamental_solution_check(KernelOrder::Fourth { alpha: 0.0 }, &[(0.0, 0.04), (0.0, 0.16), (0.0, 0.64)]).unwrap();
    let slope = rep.origin_slope.unwrap();
    assert!((slope + 0.25).abs() <= 0.02, "slope {slope}");
    assert!(rep.envelope_holds);
    for s in &rep.samples {
        assert!(s.difference < 1e-8, "t {}: {}", s.t, s.difference);
    }
}

#[test]
fn fourth_order_formula_vs_contour_off_axis() {
    let rep = fundamental_solution_check(KernelOrder::Fourth { alpha: 1.0 }, &[(1.0, 0.25), (-2.0, 0.5), (3.0, 1.0)]).unwrap();
    for s in &rep.samples {
        assert!(s.difference <= 3.0 * (s.formula_error + s.quadrature.est_error) + 1e-12, "{s:?}");
    }
}

#[test]
fn third_order_formula_vs_contour() {
    for beta in [1.0, 0.5] {
        let rep = fundamental_solution_check(KernelOrder::Third { alpha: 1.0, beta }, &[(0.0, 1.0), (1.5, 0.5), (-2.0, 0.3)]).unwrap();
        for s in &rep.samples {
            assert!(s.difference < 1e-6, "beta {beta}: {s:?}");
        }
        assert!(rep.envelope_holds);
    }
}

#[test]
fn sample_time_outside_unit_interval_is_rejected() {
    assert!(fundamental_solution_check(KernelOrder::Fourth { alpha: 0.0 }, &[(0.0, 2.0)]).is_err());
}

#[test]
fn duhamel_quadrature_matches_fast_path() {
    let grid = Grid::new(&[5.0], &[256]).unwrap();
    let u0 = zero_pad(&build(&DataSpec::elliptic_chirp(1.0, 0.5, 0.1), &grid).unwrap().field, ORACLE_PADDING).unwrap();
    let probes = duhamel_cross_check(&ModelSpec::Nls { p: 2.0, sign: 1.0 }, &u0, 0.2, &[-1.0, 0.5], 32, 1).unwrap();
    for p in &probes {
        assert!(p.agrees(), "{p:?}");
        assert!(p.reconstruction_error <= p.reconstruction_tolerance + 1e-10, "{p:?}");
    }
}

#[test]
fn duhamel_vanishes_for_linear_model() {
    let grid = Grid::new(&[10.0], &[256]).unwrap();
    let u0 = build(&DataSpec::gaussian(1.0, 1.0), &grid).unwrap().field;
    let traj = evolve(&ModelSpec::Linear { model: LinearModel::Free }, &u0, 0.1, 0.1 / 64.0, &duhamel_nodes(0.1, 4)).unwrap();
    assert_eq!(duhamel_quadrature(&traj, 0.0, 0.1).unwrap().value, Complex64::new(0.0, 0.0));
}

#[test]
fn duhamel_needs_square_spaced_snapshots() {
    let grid = Grid::new(&[10.0], &[256]).unwrap();
    let u0 = build(&DataSpec::gaussian(1.0, 0.1), &grid).unwrap().field;
    let traj = evolve(&ModelSpec::Nls { p: 2.0, sign: 1.0 }, &u0, 0.1, 0.1 / 64.0, &[0.05, 0.1]).unwrap();
    assert!(duhamel_quadrature(&traj, 0.0, 0.1).is_err());
}

#[test]
fn suite_passes() {
    let rep = oracle_suite().unwrap();
    for c in &rep.checks {
        assert!(c.passed, "{c:?}");
    }
}
