use std::f64::consts::{PI, TAU};
use std::time::Instant;

use angular_spectrum::{
    angular_schrodinger, cone_bounds, count_in_cone, coupled_solve, curve_separation, det, discriminant,
    monodromy, monodromy_of, periodicity_char, wronskian_drift, AngularError, AngularProblem, Schrodinger,
    SolveOptions, Spectrum,
};
use proptest::prelude::*;
use stackel_core::{Preset, StackelMatrix};

fn preset(p: Preset) -> StackelMatrix {
    p.build(1.0, TAU, TAU).unwrap()
}

fn constant_preset() -> StackelMatrix {
    preset(Preset::example1())
}

/// `(μ², ν², multiplicity)` of the constant-row lattice inside the norm ball.
fn lattice(r_max: f64) -> Vec<(f64, f64, u8)> {
    let mut out = Vec::new();
    let kmax = r_max.sqrt().ceil() as i64 + 1;
    for k in 0..=kmax {
        for l in 0..=kmax {
            if k == 0 && l == 0 {
                continue;
            }
            let (kk, ll) = ((k * k) as f64, (l * l) as f64);
            let (mu, nu) = (1.5 * kk + 0.5 * ll, 0.5 * kk + 1.5 * ll);
            if mu.hypot(nu) <= r_max {
                out.push((mu, nu, if k > 0 && l > 0 { 4 } else { 2 }));
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    out
}

fn free(energy: f64, length: f64) -> Schrodinger<impl Fn(f64) -> f64> {
    Schrodinger { q: |_| 0.0, energy, length }
}

#[test]
fn free_monodromy_examples() {
    let m = monodromy_of(&free(1.0, PI), 1e-12).unwrap();
    assert!((m[0][0] + 1.0).abs() < 1e-9 && m[0][1].abs() < 1e-9);
    let m = monodromy_of(&free(4.0, PI), 1e-12).unwrap();
    assert!((m[0][0] - 1.0).abs() < 1e-9);
    assert!(discriminant(&m).abs() < 1e-9);
    assert!(discriminant(&monodromy_of(&free(1.0, TAU), 1e-12).unwrap()).abs() < 1e-9);
    assert!((discriminant(&monodromy_of(&free(0.25, TAU), 1e-12).unwrap()) - 4.0).abs() < 1e-9);
}

#[test]
fn constant_potential_trace() {
    for (c, e, l) in [(0.5, 3.0, 2.0), (-1.0, 0.2, 5.0), (2.0, 7.5, 1.3)] {
        let m = monodromy_of(&Schrodinger { q: move |_| c, energy: e, length: l }, 1e-12).unwrap();
        let trace = m[0][0] + m[1][1];
        assert!((trace - 2.0 * (f64::sqrt(e - c) * l).cos()).abs() < 1e-9);
    }
}

#[test]
fn wronskian_is_conserved() {
    let q = |x: f64| 0.7 * (2.0 * x).cos() + 0.2 * x.sin();
    let h = Schrodinger { q, energy: 6.0, length: TAU };
    assert!(wronskian_drift(&h, 1e-12).unwrap() < 1e-9);
    let s = preset(Preset::example2());
    let p = AngularProblem::new(&s, 2, 1.0);
    for (mu, theta) in [(3.0, 1.0), (12.0, 0.6), (40.0, 1.2)] {
        let m = monodromy(&p, mu, theta, 1e-12).unwrap();
        assert!((det(&m) - 1.0).abs() < 1e-9);
    }
}

#[test]
fn constant_row_potential_and_lengths() {
    let s = constant_preset();
    let p2 = AngularProblem::new(&s, 2, 0.8);
    let p3 = AngularProblem::new(&s, 3, 0.8);
    for theta in [0.5, 1.0, 2.5] {
        let v = angular_schrodinger(&p2, 1.0, theta).unwrap();
        assert_eq!(v.q.as_const(), Some(0.0));
        assert!((v.length - TAU * (0.75 - 0.25 * theta).sqrt()).abs() < 1e-10);
        let w = angular_schrodinger(&p3, 1.0, theta).unwrap();
        assert!((w.length - TAU * (-0.25 + 0.75 * theta).sqrt()).abs() < 1e-10);
    }
}

#[test]
fn coupling_drops_out_without_first_column() {
    let s = preset(Preset::example2());
    let p = AngularProblem::new(&s, 2, 0.3);
    let q = AngularProblem::new(&s, 2, 4.0);
    let (a, b) = (angular_schrodinger(&p, 2.0, 1.2).unwrap(), angular_schrodinger(&q, 2.0, 1.2).unwrap());
    for x in [0.1, 1.0, 2.5] {
        assert!((a.q.value(x) - b.q.value(x)).abs() < 1e-12);
    }
}

#[test]
fn weight_outside_window_is_rejected() {
    let s = constant_preset();
    let p = AngularProblem::new(&s, 2, 1.0);
    assert!(matches!(angular_schrodinger(&p, 1.0, 3.5), Err(AngularError::Window { .. })));
    let p = AngularProblem::new(&s, 3, 1.0);
    assert!(matches!(periodicity_char(&p, 1.0, 0.2, 1e-10), Err(AngularError::Window { .. })));
}

#[test]
fn lattice_point_is_periodic_for_both_rows() {
    let s = constant_preset();
    for row in [2, 3] {
        let p = AngularProblem::new(&s, row, 1.0);
        // (μ², ν²) = (2, 2)
        assert!(periodicity_char(&p, 2.0, 1.0, 1e-12).unwrap().abs() < 1e-9);
    }
}

#[test]
fn discriminant_converges_with_tolerance() {
    let s = preset(Preset::example3());
    let p = AngularProblem::new(&s, 3, 1.0);
    for t in [1e-6, 1e-8, 1e-10] {
        let coarse = periodicity_char(&p, 5.0, 1.4, t).unwrap();
        let fine = periodicity_char(&p, 5.0, 1.4, t / 10.0).unwrap();
        assert!((coarse - fine).abs() <= 10.0 * t, "t = {t}: {coarse} vs {fine}");
    }
}

#[test]
fn constant_preset_matches_lattice() {
    let start = Instant::now();
    let s = constant_preset();
    let spec = coupled_solve(&s, 1.3, 20.0, &SolveOptions::default()).unwrap();
    let want = lattice(20.0);
    assert_eq!(spec.eigenvalues.len(), want.len());
    for (e, (mu, nu, mult)) in spec.eigenvalues.iter().zip(&want) {
        assert!((e.mu_sq - mu).abs() < 1e-8 && (e.nu_sq - nu).abs() < 1e-8, "{e:?} vs {mu}, {nu}");
        assert_eq!(e.multiplicity, *mult);
        assert_eq!(e.floquet_multiplicity, Some(*mult));
        assert!(!e.flagged, "{e:?}");
    }
    let first = &spec.eigenvalues[0];
    assert_eq!((first.mu_sq, first.nu_sq), (0.5, 1.5));
    assert_eq!(spec.dropped, 1);
    assert!(start.elapsed().as_secs() < 60);
}

fn assert_ordered(spec: &Spectrum) {
    for w in spec.eigenvalues.windows(2) {
        assert!((w[0].mu_sq, w[0].nu_sq) < (w[1].mu_sq, w[1].nu_sq));
        assert_eq!(w[1].m, w[0].m + 1);
    }
}

#[test]
fn varying_rows_give_verified_spectrum() {
    for p in [Preset::example2(), Preset::example3()] {
        let s = preset(p);
        let spec = coupled_solve(&s, 1.0, 10.0, &SolveOptions::default()).unwrap();
        assert!(!spec.eigenvalues.is_empty());
        assert!(spec.failed_cells.is_empty());
        let bounds = cone_bounds(&s, 1.0);
        for e in &spec.eigenvalues {
            let [d2, d3] = e.delta.unwrap();
            assert!(d2.abs() < 1e-7 && d3.abs() < 1e-7, "{e:?}");
            assert!(!e.flagged, "{e:?}");
            assert!((1..=4).contains(&e.multiplicity));
            assert!(bounds.contains(e.mu_sq, e.nu_sq), "{e:?} outside {bounds:?}");
        }
        assert_ordered(&spec);
    }
}

#[test]
fn cone_of_constant_preset() {
    let s = constant_preset();
    let b = cone_bounds(&s, 2.0);
    assert!((b.c1 - 1.0 / 3.0).abs() < 1e-15 && (b.c2 - 3.0).abs() < 1e-15);
    assert_eq!((b.d1, b.d2), (0.0, 0.0));
    assert!((b.lower(1.5) - 0.5).abs() < 1e-15);
    assert!(b.contains(1.5, 0.5) && !b.contains(1.5, 0.49));
    for p in [Preset::example2(), Preset::example3()] {
        let b = cone_bounds(&preset(p), 1.0);
        assert!(b.c1 > 0.0 && b.c1 < b.c2);
    }
}

#[test]
fn counting_in_cone() {
    let s = constant_preset();
    let opts = SolveOptions { verify: false, ..SolveOptions::default() };
    let spec = coupled_solve(&s, 1.0, 1600.0, &opts).unwrap();
    let cone = (1.0 / 3.0, 3.0);
    let counts: Vec<_> = [10.0, 20.0, 40.0].iter().map(|r| count_in_cone(&s, &spec, cone, *r, 100_000, 7)).collect();
    let growth = counts[1].n as f64 / counts[0].n as f64;
    assert!(growth > 4.0 / 1.5 && growth < 4.0 * 1.5, "growth {growth}");
    let ratios: Vec<f64> = counts.iter().map(|c| c.ratio).collect();
    let (lo, hi) = (ratios.iter().cloned().fold(f64::INFINITY, f64::min), ratios.iter().cloned().fold(0.0, f64::max));
    assert!(hi / lo < 1.5, "{ratios:?}");
    for c in &counts {
        let q = c.symbol_ratio / c.ratio;
        assert!(q > 0.25 && q < 4.0 + 1e-9, "{c:?}");
    }
    // large r: lattice density is a quarter of the phase-space density
    assert!((counts[2].symbol_ratio / counts[2].ratio - 4.0).abs() < 0.4);
    assert_eq!(count_in_cone(&s, &spec, (2.0, 1.0), 20.0, 1000, 7).n, 0);
}

#[test]
fn curve_spacing() {
    let s = constant_preset();
    let theta: f64 = 1.44;
    let sep = curve_separation(&s, 1.0, (theta, theta), (1, 5)).unwrap();
    let b = TAU * (0.75 - 0.25 * theta).sqrt();
    assert!((sep.h_row2 - TAU / b * (1.0 + theta.sqrt())).abs() < 1e-9);
    let wide = curve_separation(&s, 1.0, (0.5, 2.0), (1, 5)).unwrap();
    assert!(wide.h > 0.0 && wide.h <= sep.h + 1e-12);
    for p in [Preset::example2(), Preset::example3()] {
        assert!(curve_separation(&preset(p), 1.0, (0.8, 1.4), (1, 8)).unwrap().h > 0.0);
    }
    assert!(matches!(curve_separation(&s, 1.0, (0.5, 3.5), (1, 2)), Err(AngularError::Window { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn monodromy_is_unimodular(c in -3.0..3.0f64, e in 0.0..30.0f64, l in 0.5..7.0f64, a in 0.0..2.0f64) {
        let h = Schrodinger { q: move |x: f64| c + a * (3.0 * x).cos(), energy: e, length: l };
        prop_assert!(wronskian_drift(&h, 1e-12).unwrap() < 1e-9);
    }

    #[test]
    fn eigenpairs_stay_in_cone(lambda in 0.1..3.0f64, amp in 0.0..0.15f64) {
        let s = preset(Preset::Example2 { p12: 0.3, a: 1.0, amp2: amp, amp3: amp });
        let opts = SolveOptions { verify: false, ..SolveOptions::default() };
        let spec = coupled_solve(&s, lambda, 6.0, &opts).unwrap();
        let b = cone_bounds(&s, lambda);
        for e in &spec.eigenvalues {
            prop_assert!(b.contains(e.mu_sq, e.nu_sq));
            prop_assert!(e.multiplicity <= 4);
        }
        assert_ordered(&spec);
    }
}
