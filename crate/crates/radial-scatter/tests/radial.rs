use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use radial_scatter::oracle::{bessel_pair, mirrored_bessel, mirrored_characteristic};
use radial_scatter::*;
use stackel_core::{Preset, StackelMatrix, Tolerances};

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn build(p: Preset) -> StackelMatrix {
    p.build(1.0, TAU, TAU).unwrap()
}

fn presets() -> Vec<(&'static str, StackelMatrix)> {
    [Preset::example1(), Preset::example2(), Preset::example3(), Preset::template()]
        .into_iter()
        .map(|p| (p.name(), build(p)))
        .collect()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn energy_factors_have_equal_modulus() {
    for &l in &[0.3, 1.0, -2.0] {
        let e = EnergyContext::new(l).unwrap();
        assert!((e.omega_plus.norm() - e.omega_minus.norm()).abs() < 1e-14 * e.omega_plus.norm());
        assert!((e.kappa().norm() - 2.0 * l.abs()).abs() < 1e-13);
    }
    assert!(EnergyContext::new(0.0).is_err());
}

#[test]
fn template_potential_near_left_end() {
    let s = build(Preset::template());
    let (lambda, nu_sq) = (0.7, 2.0);
    let pot = build_potential(&s, Gauge::Mu, lambda, c(0.0), c(nu_sq)).unwrap();
    assert!((pot.length() - 1.0).abs() < 1e-12);
    let strength = pot.singular_strength(End::Left).unwrap();
    assert!((strength - (lambda * lambda + 0.25)).abs() < 1e-3, "{strength}");
    // q̂ on the same matrix is the same function with the roles swapped
    let hat = build_potential(&s, Gauge::Nu, lambda, c(nu_sq), c(0.0)).unwrap();
    for &x in &[0.01, 0.3, 0.77] {
        assert!((pot.eval(x).1 - hat.eval(x).1).norm() < 1e-9 * pot.eval(x).1.norm());
    }
    let joint = build_potential(&s, Gauge::Joint, lambda, c(-9.0), c(-16.0)).unwrap();
    assert!((joint.length() - pot.length()).abs() < 1e-13);
    assert_eq!(joint.spectral(), c(-25.0));
}

#[test]
fn wrong_endpoint_strength_is_rejected() {
    let r = RadialPotential::from_profile(1.0, 0.5, c(0.0), |x| c(-1.0 / (x * x) - 0.5 / ((1.0 - x) * (1.0 - x))));
    assert!(matches!(r, Err(RadialError::AhStructure { .. })));
}

#[test]
fn bessel_end_matches_series() {
    for &(lambda, mu_sq, nu_sq) in &[(0.5, 1.0, 2.0), (1.3, 0.2, 0.1), (0.8, -3.0, 1.0)] {
        let pot = mirrored_bessel(lambda, 1.0, c(mu_sq), nu_sq).unwrap();
        let omega_sq = c(mu_sq + nu_sq);
        let xs: Vec<f64> = (0..=18).map(|k| 0.1 + 0.05 * k as f64).collect();
        let got = trace_pair(&pot, End::Left, 1e-6 * pot.length(), &xs, 1e-12).unwrap();
        let mut worst: f64 = 0.0;
        for (g, &x) in got.iter().zip(&xs) {
            let want = bessel_pair(lambda, omega_sq, x);
            for k in 0..4 {
                worst = worst.max(rel(g[k], want[k]));
            }
        }
        assert!(worst < 1e-6, "λ = {lambda}: {worst:e}");
    }
}

#[test]
fn bessel_characteristic_and_transmission() {
    let (lambda, mu_sq, nu_sq) = (0.9, 1.5, 0.5);
    let pot = mirrored_bessel(lambda, 1.0, c(mu_sq), nu_sq).unwrap();
    let fss = solve_fss(&pot, &FssOptions::default()).unwrap();
    let chi = characteristic(&fss, 1e-8);
    let (big, small) = mirrored_characteristic(lambda, 1.0, c(mu_sq + nu_sq));
    assert!(rel(chi.delta_big, big) < 1e-6, "{:?} vs {big}", chi.delta_big);
    assert!(rel(chi.delta_small, small) < 1e-6);
    let e = EnergyContext::new(lambda).unwrap();
    let entry = scattering_entry(&chi, &e, 1e-6).unwrap();
    assert!(rel(entry.t_left, e.kappa() / big) < 1e-6);
    assert!(entry.unitarity_residual < 1e-6, "{}", entry.unitarity_residual);
}

#[test]
fn wronskians_of_every_preset() {
    for (name, s) in presets() {
        for gauge in Gauge::ALL {
            let pot = build_potential(&s, gauge, 0.6, c(2.0), c(3.0)).unwrap();
            let fss = solve_fss(&pot, &FssOptions::default()).unwrap();
            assert!(fss.wronskian_error < 1e-8, "{name} {gauge}: {:e}", fss.wronskian_error);
            let chi = characteristic(&fss, 1e-8);
            assert!(chi.spread < 1e-7 * (1.0 + chi.delta_big.norm()), "{name} {gauge}: {:e}", chi.spread);
        }
    }
}

#[test]
fn gauges_share_characteristic_values() {
    for (name, s) in presets() {
        for &(m2, n2) in &[(0.5, 1.5), (4.0, 3.0), (10.0, 40.0)] {
            let chi = |g: Gauge| {
                let pot = build_potential(&s, g, 1.1, c(m2), c(n2)).unwrap();
                characteristic(&solve_fss(&pot, &FssOptions::default()).unwrap(), 1e-8)
            };
            let (q, hat, joint) = (chi(Gauge::Mu), chi(Gauge::Nu), chi(Gauge::Joint));
            let scale = 1.0 + q.delta_big.norm();
            assert!((q.delta_big - hat.delta_big).norm() < 1e-6 * scale, "{name}: {:?} {:?}", q.delta_big, hat.delta_big);
            assert!((q.delta_big - joint.delta_big).norm() < 1e-6 * scale, "{name}: {:?} {:?}", q.delta_big, joint.delta_big);
        }
    }
}

#[test]
fn sign_of_spectral_root_is_irrelevant() {
    let s = build(Preset::example2());
    let mu = Complex64::new(1.3, 0.4);
    let chi = |m: Complex64| {
        let pot = build_potential(&s, Gauge::Mu, 0.8, m * m, c(2.0)).unwrap();
        characteristic(&solve_fss(&pot, &FssOptions::default()).unwrap(), 1e-8)
    };
    let (a, b) = (chi(mu), chi(-mu));
    assert_eq!(a.delta_big, b.delta_big);
    assert_eq!(a.delta_small, b.delta_small);
}

#[test]
fn unitarity_on_real_modes() {
    let tol = Tolerances::default();
    for (name, s) in presets() {
        let e = EnergyContext::new(0.75).unwrap();
        for (m, &mode) in [(0.5, 1.5), (3.0, 7.0), (20.0, 30.0)].iter().enumerate() {
            let rec = scatter_mode(&s, Gauge::Mu, &e, m + 1, mode, &tol).unwrap();
            let res = rec.unitarity_residual.unwrap();
            assert!(res < 1e-6, "{name} {mode:?}: {res:e}");
            let (l, t) = (rec.l.unwrap(), rec.t.unwrap());
            assert!((l.norm_sqr() + t.norm_sqr() - 1.0).abs() < 1e-6);
        }
    }
}

#[test]
fn tolerance_halving_is_stable() {
    let s = build(Preset::example3());
    let pot = build_potential(&s, Gauge::Mu, 0.5, c(2.0), c(5.0)).unwrap();
    let run = |rtol: f64| {
        let opts = FssOptions { rtol, ladder: None, ..Default::default() };
        characteristic(&solve_fss(&pot, &opts).unwrap(), 1e-8).delta_big
    };
    let (a, b) = (run(1e-10), run(5e-11));
    assert!((a - b).norm() < 10.0 * 1e-10 * (1.0 + a.norm()), "{:e}", (a - b).norm());
}

#[test]
fn template_asymptotics_improve() {
    let s = build(Preset::template());
    let rows = asymptotics_check(&s, 0.7, &[20.0, 40.0, 80.0, 160.0], 1.0, &FssOptions::default()).unwrap();
    for r in &rows {
        println!("y = {:>5}: Δ error {:.3e}, δ error {:.3e}", r.y, r.error_big, r.error_small);
    }
    for w in rows.windows(2) {
        assert!(w[1].error_big < w[0].error_big);
    }
    assert!(rows[3].error_big < 0.05);
}

#[test]
fn identical_pair_has_vanishing_psi() {
    let s = build(Preset::example2());
    let grid = [
        (Complex64::new(0.0, 2.0), Complex64::new(0.0, 1.0)),
        (Complex64::new(1.0, 1.0), Complex64::new(0.5, 0.0)),
        (Complex64::new(2.0, 0.0), Complex64::new(0.0, 3.0)),
    ];
    let rep = cam_diagnostics(&s, &s, 0.5, &grid, &[(1.0, 2.0)], 1e-7, &FssOptions::default()).unwrap();
    assert!(rep.points.iter().all(|p| p.psi.norm() < 1e-7));
    assert!(rep.vanishes_on_spectrum);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn wronskian_stays_normalized(lambda in 0.2f64..2.0, mu_sq in 0.1f64..20.0, nu_sq in 0.1f64..20.0) {
        let s = build(Preset::example1());
        let pot = build_potential(&s, Gauge::Mu, lambda, c(mu_sq), c(nu_sq)).unwrap();
        let fss = solve_fss(&pot, &FssOptions::default()).unwrap();
        prop_assert!(fss.wronskian_error < 1e-8);
    }
}
