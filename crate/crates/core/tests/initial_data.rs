use dbu_lab::data::*;
use dbu_lab::spectral::gp::upsilon;
use dbu_lab::spectral::{l2_norm, sobolev_norm, Grid};
use dbu_lab::Error;
use proptest::prelude::*;

fn grid_for(spec: &DataSpec, l: f64) -> Grid {
    let n = spec.required_points(&[l])[0];
    Grid::new(&[l], &[n]).unwrap()
}

#[test]
fn chirp_modulus_and_phase_inside_flat_region() {
    let spec = DataSpec::elliptic_chirp(2.0, 0.4, 0.3);
    let g = grid_for(&spec, 10.0);
    let b = build(&spec, &g).unwrap();
    let flat = spec.window.flat_radius(10.0);
    for (z, x) in b.field.samples().iter().zip(g.positions()) {
        let x = x[0];
        if x.abs() < flat {
            let want = 0.3 * (1.0 + x * x).powf(-0.4);
            assert!((z.norm() - want).abs() < 1e-14);
            let phase = (z / z.norm()) * num_complex::Complex64::from_polar(1.0, 2.0 * x * x);
            assert!((phase - 1.0).norm() < 1e-10);
        }
        assert!(z.norm() <= 0.3 + 1e-15);
    }
    assert_eq!(b.meta.t_focus, Some(0.125));
    assert_eq!(b.meta.l_eff, flat);
}

#[test]
fn window_vanishes_at_the_boundary() {
    let spec = DataSpec::elliptic_chirp(1.0, 0.5, 1.0);
    let g = grid_for(&spec, 8.0);
    let b = build(&spec, &g).unwrap();
    assert!(b.field.samples()[0].norm() < 1e-12);
    let w = Window::RaisedCosine { fraction: 0.1 };
    assert_eq!(w.eval(7.0, 8.0), 1.0);
    assert!(w.eval(7.6, 8.0) > 0.0 && w.eval(7.6, 8.0) < 1.0);
    assert_eq!(w.eval(8.0, 8.0), 0.0);
}

#[test]
fn admissible_range_of_m() {
    for (m, dim, ok) in [(0.25, 1, false), (0.26, 1, true), (0.5, 1, true), (0.51, 1, false), (0.5, 2, false), (1.0, 2, true)] {
        let r = DataSpec::elliptic_chirp(1.0, m, 1.0).validate(dim);
        assert_eq!(r.is_ok(), ok, "m {m} dim {dim}");
    }
    assert!(DataSpec::elliptic_chirp(-1.0, 0.5, 1.0).validate(1).is_err());
    assert!(DataSpec::elliptic_chirp(1.0, 0.5, 0.0).validate(1).is_err());
    let hyp = DataSpec::elliptic_chirp(1.0, 0.75, 1.0).with_family(Family::HyperbolicChirp { j: 1 });
    assert!(hyp.validate(2).is_ok());
    assert!(hyp.validate(1).is_err());
}

#[test]
fn coarse_grid_is_rejected_unless_warned() {
    let spec = DataSpec::elliptic_chirp(4.0, 0.5, 1.0);
    let g = Grid::new(&[20.0], &[256]).unwrap();
    assert!(matches!(build(&spec, &g), Err(Error::Resolution { .. })));
    assert!(build_with(&spec, &g, ResolutionCheck::Warn).is_ok());
}

#[test]
fn sobolev_threshold_separates_bounded_and_growing_norms() {
    // Chirp data with decay (1+x^2)^{-m} lies in H^s exactly for s < 2m - n/2.
    let spec = DataSpec::elliptic_chirp(1.0, 0.5, 1.0);
    let norms = |s: f64| -> Vec<f64> {
        [20.0, 80.0]
            .iter()
            .map(|&l| sobolev_norm(&build(&spec, &grid_for(&spec, l)).unwrap().field, s))
            .collect()
    };
    let below = norms(0.2);
    let above = norms(0.8);
    assert!(below[1] / below[0] < 1.1, "{below:?}");
    assert!(above[1] / above[0] > 1.4, "{above:?}");
}

#[test]
fn superposition_sums_and_records_foci() {
    let a = DataSpec::elliptic_chirp(1.0, 0.5, 1.0).with_q(&[-2.0]);
    let b = DataSpec::elliptic_chirp(1.0, 0.5, 0.5).with_q(&[2.0]);
    let g = grid_for(&a, 12.0);
    let s = superpose(&[a.clone(), b.clone()], &g).unwrap();
    let fa = build(&a, &g).unwrap().field;
    let fb = build(&b, &g).unwrap().field;
    let diff = s.field.sub(&fa.add(&fb).unwrap()).unwrap();
    assert!(diff.max_modulus() < 1e-15);
    assert_eq!(s.foci, vec![(0.25, vec![-2.0]), (0.25, vec![2.0])]);
    assert!(superpose(&[], &g).is_err());
    assert!(superpose(&[a.clone(), a], &g).is_err());
}

#[test]
fn gp_data_is_vacuum_plus_upsilon() {
    let spec = DataSpec::elliptic_chirp(1.0, 0.5, 0.05).with_family(Family::GpProfile);
    let g = grid_for(&spec, 10.0);
    let (psi, v) = gp_initial(&spec, &g).unwrap();
    let u = upsilon(&v).unwrap();
    let d = psi.map(|z| z - 1.0).sub(&u).unwrap();
    assert!(d.max_modulus() < 1e-15);
    assert!(psi.samples().iter().all(|z| (z - 1.0).norm() < 0.2));
    assert!(gp_initial(&DataSpec::gaussian(1.0, 1.0), &g).is_err());
}

#[test]
fn energy_quadratures_agree() {
    let spec = DataSpec::elliptic_chirp(1.0, 0.5, 0.05).with_family(Family::GpProfile);
    let g = grid_for(&spec, 10.0);
    let (psi, _) = gp_initial(&spec, &g).unwrap();
    let a = ginzburg_landau_energy(&psi, EnergyQuadrature::Space).unwrap();
    let b = ginzburg_landau_energy(&psi, EnergyQuadrature::Frequency).unwrap();
    assert!(a > 0.0);
    assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "{a} vs {b}");
}

#[test]
fn pearcey_and_airy_profiles_build() {
    let p = DataSpec {
        family: Family::PearceyProfile { t_focus: None },
        alpha: 1.0,
        q: vec![],
        m: 1.0 / 6.0,
        delta: 1.0,
        window: Window::default(),
    };
    let g = grid_for(&p, 8.0);
    let b = build(&p, &g).unwrap();
    assert!(l2_norm(&b.field) > 0.0);
    assert_eq!(b.meta.t_focus, Some(0.25));
    let a = DataSpec {
        family: Family::AiryProfile { beta: 1.0, t_focus: None },
        m: 0.25,
        ..p
    };
    let b = build(&a, &grid_for(&a, 8.0)).unwrap();
    assert!(b.field.samples().iter().all(|z| z.re.is_finite() && z.im.is_finite()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn amplitude_is_homogeneous_in_delta(delta in 0.01f64..10.0, m in 0.26f64..0.5, alpha in 0.5f64..3.0) {
        let one = DataSpec::elliptic_chirp(alpha, m, 1.0);
        let scaled = DataSpec::elliptic_chirp(alpha, m, delta);
        let g = Grid::new(&[6.0], &[one.required_points(&[6.0])[0]]).unwrap();
        let a = build(&one, &g).unwrap().field;
        let b = build(&scaled, &g).unwrap().field;
        for (x, y) in a.samples().iter().zip(b.samples()) {
            prop_assert!((x * delta - y).norm() <= 1e-14 * delta);
        }
    }

    #[test]
    fn window_is_monotone_and_bounded(r1 in 0.0f64..10.0, r2 in 0.0f64..10.0, frac in 0.01f64..0.49) {
        let w = Window::RaisedCosine { fraction: frac };
        let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
        prop_assert!(w.eval(lo, 10.0) >= w.eval(hi, 10.0));
        prop_assert!((0.0..=1.0).contains(&w.eval(lo, 10.0)));
    }
}
