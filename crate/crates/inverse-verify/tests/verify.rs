use std::f64::consts::TAU;

use angular_spectrum::coupled_solve;
use inverse_verify::generators::{gauge_pair, perturb_s11, reparametrize_radial};
use inverse_verify::*;
use proptest::prelude::*;
use stackel_core::{Preset, StackelMatrix, Tolerances};

fn build(p: Preset) -> StackelMatrix {
    p.build(1.0, TAU, TAU).unwrap()
}

fn normalized(p: Preset) -> StackelMatrix {
    normalize(&build(p), &Tolerances::default()).unwrap()
}

#[test]
fn self_comparison_is_exact() {
    let tol = Tolerances::default();
    let s = build(Preset::example1());
    let r = verify(&s, &s, 0.8, 8.0, &tol).unwrap();
    assert_eq!(r.verdict, Verdict::Equivalent, "{}", r.reason);
    let sc = r.scattering.unwrap();
    assert_eq!(sc.max_deviation, 0.0);
    assert_eq!(sc.spectrum_deviation, 0.0);
    assert_eq!(r.pullback.unwrap().deviation, 0.0);
}

#[test]
fn gauge_pair_is_recovered() {
    let tol = Tolerances::default();
    let s = normalized(Preset::example2());
    let st = gauge_pair(&s, 0.1, [0.3, -0.2]).unwrap();
    let (rec, aligned) = angular_recover(&s, &st, &tol).unwrap();
    assert!(rec.passed && aligned.is_some());
    assert!((rec.c - 0.1).abs() < 1e-8);
    assert!((rec.shifts[0] - 0.3).abs() < 1e-8 && (rec.shifts[1] + 0.2).abs() < 1e-8);

    let r = verify(&s, &st, 0.8, 10.0, &tol).unwrap();
    assert_eq!(r.verdict, Verdict::Equivalent, "{}", r.reason);
    assert!(r.scattering.unwrap().max_deviation < 1e-6);
    let radial = r.radial.unwrap();
    assert!(radial.u_direct < 1e-6 && radial.u_cauchy < 1e-6);
}

#[test]
fn reparametrized_radial_row_is_equivalent() {
    let tol = Tolerances::default();
    let s = build(Preset::example3());
    let st = reparametrize_radial(&s, 0.15).unwrap();
    assert!(reparametrize_radial(&s, 0.3).is_err());
    let r = verify(&s, &st, 1.1, 8.0, &tol).unwrap();
    assert_eq!(r.verdict, Verdict::Equivalent, "{}", r.reason);
    assert!(r.pullback.unwrap().deviation < 1e-8);
}

#[test]
fn bump_pair_is_distinct() {
    let tol = Tolerances::default();
    let s = build(Preset::example2());
    let r = verify(&s, &perturb_s11(&s, 1e-2), 0.8, 10.0, &tol).unwrap();
    assert_eq!(r.verdict, Verdict::Distinct);
    let sc = r.scattering.unwrap();
    assert!(sc.modes.iter().any(|m| m.deviation > 1e-3), "{:e}", sc.max_deviation);
    assert!(r.radial.is_none());
}

#[test]
fn changed_angular_row_stops_at_first_stage() {
    let tol = Tolerances::default();
    let s = normalized(Preset::example1());
    let other = normalized(Preset::example2());
    let r = verify(&s, &other, 0.8, 8.0, &tol).unwrap();
    assert_eq!(r.verdict, Verdict::Distinct);
    assert!(!r.angular.passed);
    assert!(r.scattering.is_none());
}

#[test]
fn reconstruction_coefficient_is_positive() {
    let tol = Tolerances::default();
    for p in [Preset::example1(), Preset::example2(), Preset::example3(), Preset::template()] {
        let name = p.name();
        let s = normalized(p);
        let spec = coupled_solve(&s, 0.8, 8.0, &solve_options(&tol)).unwrap();
        let rec = radial_recover(&s, &s, 0.8, &spec, &tol).unwrap();
        assert!(rec.coefficient_min > 0.0, "{name}: {}", rec.coefficient_min);
        assert!(rec.passed, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn angular_gauge_round_trip(c in -0.4f64..0.4, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
        let tol = Tolerances::default();
        let s = normalized(Preset::example3());
        let st = gauge_pair(&s, c, [c1, c2]).unwrap();
        let (rec, _) = angular_recover(&s, &st, &tol).unwrap();
        prop_assert!(rec.passed);
        prop_assert!((rec.c - c).abs() < 1e-9);
        prop_assert!((rec.shifts[0] - c1).abs() < 1e-9 && (rec.shifts[1] - c2).abs() < 1e-9);
    }
}
