use funcspace::Jet;
use serde::{Deserialize, Serialize};

use crate::matrix::StackelMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    Zero,
    A,
}

/// Weighted decay of the row-1 entries toward one radial end.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AHEndReport {
    pub end: End,
    pub epsilon: f64,
    /// `[n][k]`: sup of `(1+|log d|)^(min(n,1)+1+eps) |(d ∂_d)^n dev_k|` for
    /// `dev = (d² s11 - 1, s12/α - 1, s13/β - 1)`.
    pub deviations: [[f64; 3]; 2],
    /// Limits of `s12`, `s13` at this end.
    pub limits: [f64; 2],
    pub bound: f64,
    /// Weighted deviations do not grow toward the end.
    pub decaying: bool,
    pub pass: bool,
}

const POINTS: usize = 48;
const INNERMOST: f64 = 1e-12;
const OUTERMOST: f64 = 0.25;

fn distances(a: f64) -> Vec<f64> {
    let ratio = (INNERMOST / OUTERMOST).powf(1.0 / (POINTS - 1) as f64);
    (0..POINTS).map(|k| OUTERMOST * a * ratio.powi(k as i32)).collect()
}

fn end_report(s: &StackelMatrix, end: End, eps: f64, bound: f64) -> AHEndReport {
    let a = s.a;
    let point = |d: f64| match end {
        End::Zero => d,
        End::A => a - d,
    };
    let limit = |j: usize| {
        let f = s.entry(1, j);
        let edge = point(0.0);
        let v = f.value(edge);
        if v.is_finite() {
            v
        } else {
            f.value(point(INNERMOST * 1e-2 * a))
        }
    };
    let limits = [limit(2), limit(3)];
    // per grid point (innermost last), weighted deviations flattened to 6 numbers
    let mut rows: Vec<[f64; 6]> = Vec::with_capacity(POINTS);
    for d0 in distances(a) {
        let x = point(d0);
        let d = match end {
            End::Zero => x,
            End::A => a - x,
        };
        let dir = if end == End::Zero { 1.0 } else { -1.0 };
        let r = [s.entry(1, 1).jet(x), s.entry(1, 2).jet(x), s.entry(1, 3).jet(x)];
        let dist = Jet::new(d, dir, 0.0);
        let devs = [dist * dist * r[0] - 1.0, r[1] / limits[0] - 1.0, r[2] / limits[1] - 1.0];
        let log = 1.0 + d.ln().abs();
        let mut out = [0.0; 6];
        for (k, dv) in devs.iter().enumerate() {
            out[k] = log.powf(1.0 + eps) * dv.v.abs();
            // d ∂_d = dir · d · ∂_x
            out[3 + k] = log.powf(2.0 + eps) * (d * dv.d1).abs();
        }
        rows.push(out);
    }
    let mut deviations = [[0.0; 3]; 2];
    for r in &rows {
        for k in 0..6 {
            let v = if r[k].is_finite() { r[k] } else { f64::INFINITY };
            deviations[k / 3][k % 3] = f64::max(deviations[k / 3][k % 3], v);
        }
    }
    let split = POINTS - POINTS / 4;
    let decaying = (0..6).all(|k| {
        let outer = rows[..split].iter().map(|r| r[k]).fold(0.0, f64::max);
        let inner = rows[split..].iter().map(|r| r[k]).fold(0.0, f64::max);
        inner <= (1.0 + 1e-6) * outer + 1e-12
    });
    let bounded = deviations.iter().flatten().all(|v| *v <= bound);
    let unit_limits = limits.iter().all(|l| (l - 1.0).abs() <= 1e-8);
    AHEndReport { end, epsilon: eps, deviations, limits, bound, decaying, pass: bounded && decaying && unit_limits }
}

/// Weighted decay of `d² s11 - 1`, `s12 - 1`, `s13 - 1` and their `d ∂_d`
/// derivatives on a geometric grid toward each end (`d` is the distance to it).
pub fn check_ah_ends(s: &StackelMatrix, eps0: f64, eps1: f64, bound: f64) -> [AHEndReport; 2] {
    [end_report(s, End::Zero, eps0, bound), end_report(s, End::A, eps1, bound)]
}
