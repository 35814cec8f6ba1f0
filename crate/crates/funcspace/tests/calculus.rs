use funcspace::chart::{build_chart, potential_terms_at, pushforward_potential_terms};
use funcspace::ode::{integrate, OdeOptions};
use funcspace::{Expr, Jet, SmoothFn1D};
use proptest::prelude::*;

#[test]
fn quadratic_weight_chart() {
    let w = SmoothFn1D::from_expr(Expr::x().powi(2), 0.0, 1.0);
    let c = build_chart(&w, 1e-12).unwrap();
    assert!((c.length() - 0.5).abs() < 1e-13);
    for i in 1..10 {
        let x = i as f64 / 10.0;
        assert!((c.forward(x) - 0.5 * x * x).abs() < 1e-13);
    }
}

#[test]
fn chart_roundtrip_on_64_points() {
    let w = SmoothFn1D::from_expr(1.0 + 0.3 * (Expr::x() * std::f64::consts::PI).sin().powi(2), 0.0, 2.0);
    let c = build_chart(&w, 1e-12).unwrap();
    let len = c.length();
    for i in 0..64 {
        let x = 2.0 * (i as f64 + 0.5) / 64.0;
        let back = c.inverse(c.forward(x)).unwrap();
        assert!((back - x).abs() < 1e-10, "x = {x}, back = {back}");
        let big = len * (i as f64 + 0.5) / 64.0;
        assert!((c.forward(c.inverse(big).unwrap()) - big).abs() < 1e-10);
    }
    let tail = c.distance_to_end(1.999_999);
    assert!((tail - (len - c.forward(1.999_999))).abs() < 1e-12);
}

#[test]
fn chart_inverse_near_left_end() {
    let w = SmoothFn1D::from_expr(1.0 + 0.5 * Expr::x(), 0.0, 1.0);
    let c = build_chart(&w, 1e-12).unwrap();
    let big = 1e-6 * c.length();
    let x = c.inverse(big).unwrap();
    assert!(((c.forward(x) - big) / big).abs() < 1e-12);
}

#[test]
fn periodic_seam_of_trig_expression() {
    let b = 3.0;
    let f = SmoothFn1D::periodic(0.7 + 0.1 * (Expr::x() * (std::f64::consts::TAU / b)).cos(), b);
    assert!(f.seam_mismatch().unwrap() < 1e-14);
}

#[test]
fn second_derivative_richardson_consistent() {
    // analytic f'' against central differences at h and h/2
    let f = SmoothFn1D::from_expr((Expr::x() * 1.3).sin() * Expr::x().exp(), -2.0, 2.0);
    let x = 0.7;
    let exact = f.jet(x).d2;
    let d2 = |h: f64| (f.value(x + h) - 2.0 * f.value(x) + f.value(x - h)) / (h * h);
    let (e1, e2) = ((d2(1e-3) - exact).abs(), (d2(5e-4) - exact).abs());
    // second-order scheme: halving h quarters the error
    assert!((e1 / e2 - 4.0).abs() < 0.1, "ratio {}", e1 / e2);
}

#[test]
fn complex_oscillator_as_split_state() {
    // u' = i u, u(0) = 1
    let f = |_x: f64, y: &[f64; 2]| [-y[1], y[0]];
    let r = integrate(f, 0.0, [1.0, 0.0], &[2.0], &OdeOptions::tight(1e-12)).unwrap();
    assert!((r[0][0] - 2f64.cos()).abs() < 1e-11 && (r[0][1] - 2f64.sin()).abs() < 1e-11);
}

fn poly(c: [f64; 3]) -> Expr {
    // strictly positive on [0, 1]: c0 + c1 x + c2 x^2 with c0 > |c1| + |c2|
    c[0] + c[1] * Expr::x() + c[2] * Expr::x().powi(2)
}

proptest! {
    #[test]
    fn correction_terms_respect_log_linearity(
        a in prop::array::uniform3(-1.0f64..1.0),
        b in prop::array::uniform3(-1.0f64..1.0),
        wc in 0.0f64..0.9,
        x in 0.05f64..0.95,
    ) {
        let fa = [3.0 + a[0], a[1], a[2]];
        let fb = [3.0 + b[0], b[1], b[2]];
        let f = poly(fa);
        let g = poly(fb);
        let w = SmoothFn1D::from_expr(1.0 + wc * Expr::x(), 0.0, 1.0).jet(x);
        let (f1, f2) = potential_terms_at(f.eval(Jet::var(x)), w);
        let (g1, g2) = potential_terms_at(g.eval(Jet::var(x)), w);
        let (h1, h2) = potential_terms_at((f * g).eval(Jet::var(x)), w);
        prop_assert!((h2 - (f2 + g2)).abs() < 1e-12);
        // (a+b)²/16 = a²/16 + b²/16 + 2ab/16, with a = 4 sqrt(f1) up to sign
        let lf = poly(fa).eval(Jet::var(x));
        let lg = poly(fb).eval(Jet::var(x));
        let cross = (lf.d1 / lf.v) * (lg.d1 / lg.v) / w.v / 8.0;
        prop_assert!((h1 - (f1 + g1 + cross)).abs() < 1e-12);
    }

    #[test]
    fn chart_is_increasing(wc in 0.0f64..2.0, p in 0.0f64..0.9) {
        let w = SmoothFn1D::from_expr(1.0 + wc * Expr::x().powi(2) - p * Expr::x(), 0.0, 1.0);
        let c = build_chart(&w, 1e-10).unwrap();
        let mut prev = -1.0;
        for i in 0..=32 {
            let g = c.forward(i as f64 / 32.0);
            prop_assert!(g > prev);
            prev = g;
        }
        prop_assert!((c.forward(1.0) - c.length()).abs() < 1e-12);
    }
}

#[test]
fn pushforward_rejects_nonpositive() {
    let c = build_chart(&SmoothFn1D::constant(1.0, 0.0, 1.0), 1e-12).unwrap();
    let f = SmoothFn1D::from_expr(Expr::x() - 0.5, 0.0, 1.0);
    assert!(pushforward_potential_terms(&c, &f).is_err());
}
