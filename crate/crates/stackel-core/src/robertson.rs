use funcspace::{build_chart_on, Expr, HyperDual, Scalar, SmoothFn1D};

use crate::error::StackelError;
use crate::matrix::{minors, StackelMatrix};
use crate::metric::{angular_grid, radial_grid};

/// Separable factorization `R = f1(x1) f2(x2) f3(x3)` with
/// `R = s^11 s^21 s^31 / det`.
#[derive(Clone, Debug)]
pub struct RobertsonFactors {
    pub f1: SmoothFn1D,
    pub f2: SmoothFn1D,
    pub f3: SmoothFn1D,
    /// Max over the grid of `|∂i∂j log R| / (1 + |∂i log R| |∂j log R|)`.
    pub residual: f64,
    pub worst: [f64; 3],
    /// Base point of the coordinate lines.
    pub base: [f64; 3],
}

const ANGULAR_SAMPLES: usize = 16;

fn log_r_mixed(s: &StackelMatrix, x: [f64; 3], i: usize, j: usize) -> f64 {
    let mut v = [HyperDual::cst(x[0]), HyperDual::cst(x[1]), HyperDual::cst(x[2])];
    v[i].b = 1.0;
    v[j].c = 1.0;
    let m = minors(s.row_generic(1, v[0]), s.row_generic(2, v[1]), s.row_generic(3, v[2]));
    let r = m.robertson();
    // log|R|: the sign is constant on a riemannian matrix
    let lr = if r.a < 0.0 { (-r).ln() } else { r.ln() };
    lr.d.abs() / (1.0 + lr.b.abs() * lr.c.abs())
}

fn r_value(s: &StackelMatrix, x: [f64; 3]) -> f64 {
    s.minors_at(x).robertson()
}

/// `R` along the `x^row` coordinate line through `base`, as a function of one variable.
fn line_factor(s: &StackelMatrix, row: usize, base: [f64; 3]) -> SmoothFn1D {
    let period = s.period(row);
    let cst = |v: f64| SmoothFn1D::constant(v, 0.0, period);
    let mut rows: Vec<[SmoothFn1D; 3]> = Vec::with_capacity(3);
    for k in 1..=3 {
        if k == row {
            rows.push(s.rows()[k - 1].clone());
        } else {
            rows.push(s.row(k, base[k - 1]).map(cst));
        }
    }
    let (r1, r2, r3) = (&rows[0], &rows[1], &rows[2]);
    let m11 = r2[1].mul(&r3[2]).sub(&r2[2].mul(&r3[1]));
    let m21 = r1[2].mul(&r3[1]).sub(&r1[1].mul(&r3[2]));
    let m31 = r1[1].mul(&r2[2]).sub(&r1[2].mul(&r2[1]));
    let det = r1[0].mul(&m11).add(&r2[0].mul(&m21)).add(&r3[0].mul(&m31));
    m11.mul(&m21).mul(&m31).div(&det).with_period(Some(period))
}

/// Check multiplicative separability of `R` through its mixed log-partials and
/// extract the three factors along lines through `(A/2, B/2, C/2)`.
pub fn check_robertson(s: &StackelMatrix, tol: f64) -> Result<RobertsonFactors, StackelError> {
    let x1s: Vec<f64> = radial_grid(s.a).into_iter().step_by(4).collect();
    let x2s = angular_grid(s.b, ANGULAR_SAMPLES);
    let x3s = angular_grid(s.c, ANGULAR_SAMPLES);
    let mut residual = 0.0;
    let mut worst = [0.0; 3];
    for &x1 in &x1s {
        for &x2 in &x2s {
            for &x3 in &x3s {
                let x = [x1, x2, x3];
                for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                    let r = log_r_mixed(s, x, i, j);
                    if !(r <= residual) {
                        residual = r;
                        worst = x;
                    }
                }
            }
        }
    }
    if !(residual <= tol) {
        return Err(StackelError::RobertsonViolated { residual, x1: worst[0], x2: worst[1], x3: worst[2] });
    }

    let base = [0.5 * s.a, 0.5 * s.b, 0.5 * s.c];
    let r0 = r_value(s, base);
    // f2 ∝ s23 - s22 and f3 ∝ s32 - s33 (limit of s11 R at the x1 = 0 end)
    let k2 = s.entry(2, 3).value(base[1]) - s.entry(2, 2).value(base[1]);
    let k3 = s.entry(3, 2).value(base[2]) - s.entry(3, 3).value(base[2]);
    let f2 = line_factor(s, 2, base).scale(k2 / r0);
    let f3 = line_factor(s, 3, base).scale(k3 / r0);
    let denom = k2 * k3;
    let f1 = SmoothFn1D::from_fn(
        {
            let s = s.clone();
            move |x| r_value(&s, [x, base[1], base[2]]) / denom
        },
        0.0,
        s.a,
    );
    Ok(RobertsonFactors { f1, f2, f3, residual, worst, base })
}

fn near_one(f: &SmoothFn1D, period: f64) -> bool {
    if let Some(c) = f.as_const() {
        return (c - 1.0).abs() <= 1e-12;
    }
    angular_grid(period, 64).iter().all(|&x| (f.value(x) - 1.0).abs() <= 1e-12)
}

fn constant_value(f: &SmoothFn1D, period: f64) -> Option<f64> {
    if let Some(c) = f.as_const() {
        return Some(c);
    }
    let v0 = f.value(0.0);
    angular_grid(period, 64).iter().all(|&x| (f.value(x) - v0).abs() <= 1e-12 * v0.abs()).then_some(v0)
}

/// Divide row `row` by `f` and change the angular coordinate by `dy = sqrt(f) dx`
/// so the metric is unchanged. Returns the new row and period.
fn reduce_row(s: &StackelMatrix, row: usize, f: &SmoothFn1D, tol: f64) -> Result<([SmoothFn1D; 3], f64), StackelError> {
    let period = s.period(row);
    let entries = &s.rows()[row - 1];
    for &x in &angular_grid(period, 256) {
        let v = f.value(x);
        if !(v > 0.0) {
            return Err(StackelError::AngularGauge(format!("factor f{row} = {v:e} at x{row} = {x}")));
        }
    }
    if let Some(c) = constant_value(f, period) {
        let inner = Expr::x() * (1.0 / c.sqrt());
        let new_period = period * c.sqrt();
        let out = entries.clone().map(|e| match e.expr() {
            Some(ex) => SmoothFn1D::periodic(ex.clone().compose(inner.clone()) * (1.0 / c), new_period),
            None => {
                let e = e.clone();
                SmoothFn1D::from_fn(move |y| e.value(y / c.sqrt()) / c, 0.0, new_period).with_period(Some(new_period))
            }
        });
        return Ok((out, new_period));
    }
    let chart = build_chart_on(&f.clone().with_period(None), 0.0, period, tol)?;
    let new_period = chart.length();
    let out = entries.clone().map(|e| {
        let (e, f, chart) = (e.clone(), f.clone(), chart.clone());
        SmoothFn1D::from_fn(
            move |y| {
                let y = y.rem_euclid(new_period);
                let x = chart.inverse(y).unwrap_or(y);
                e.value(x) / f.value(x)
            },
            0.0,
            new_period,
        )
        .with_period(Some(new_period))
    });
    Ok((out, new_period))
}

/// Bring the angular factors to `f2 = f3 = 1`, then check `s23 - s22 ≡ 1` and `s32 - s33 ≡ 1`.
pub fn normalize_angular_gauge(s: &StackelMatrix, tol: f64) -> Result<StackelMatrix, StackelError> {
    let factors = check_robertson(s, tol)?;
    let mut rows = s.rows().clone();
    let mut periods = [s.b, s.c];
    for (k, f) in [(2usize, &factors.f2), (3, &factors.f3)] {
        if near_one(f, s.period(k)) {
            continue;
        }
        let (r, p) = reduce_row(s, k, f, 1e-12)?;
        rows[k - 1] = r;
        periods[k - 2] = p;
    }
    let out = StackelMatrix::new(rows, s.a, periods[0], periods[1])?;
    for (row, p, q) in [(2usize, 3usize, 2usize), (3, 2, 3)] {
        let period = out.period(row);
        for &x in &angular_grid(period, 256) {
            let d = out.entry(row, p).value(x) - out.entry(row, q).value(x);
            if (d - 1.0).abs() > 1e-8 {
                return Err(StackelError::AngularGauge(format!(
                    "s{row}{p} - s{row}{q} = {d} at x{row} = {x} after reduction (run gauge_normalize first)"
                )));
            }
        }
    }
    Ok(out)
}
