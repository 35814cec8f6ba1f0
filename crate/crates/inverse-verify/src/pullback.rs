use funcspace::build_chart_on;
use serde::{Deserialize, Serialize};
use stackel_core::{StackelMatrix, Tolerances};

use crate::error::VerifyError;

const RADIAL: usize = 32;
const ANGULAR: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PullbackComparison {
    pub length: [f64; 2],
    /// Largest relative difference of `(H1²/s12, H2², H3²)` over the grid.
    pub deviation: f64,
    /// `(X, x², x³)` of the worst point.
    pub worst_at: [f64; 3],
    pub passed: bool,
}

/// Metric coefficients of both matrices in the chart `X = ∫ sqrt(s12)`.
/// Radial reparametrizations and the column gauges leave these unchanged,
/// so equal values mean the identity in the chart is an isometry.
pub fn pullback_compare(s: &StackelMatrix, st: &StackelMatrix, tol: &Tolerances) -> Result<PullbackComparison, VerifyError> {
    let ca = build_chart_on(s.entry(1, 2), 0.0, s.a, 1e-13)?;
    let cb = build_chart_on(st.entry(1, 2), 0.0, st.a, 1e-13)?;
    let length = [ca.length(), cb.length()];
    let mut out = PullbackComparison { length, deviation: f64::NAN, worst_at: [f64::NAN; 3], passed: false };
    if !((length[0] - length[1]).abs() <= tol.structural * length[0]) || s.b != st.b || s.c != st.c {
        return Ok(out);
    }
    let coeffs = |m: &StackelMatrix, x: [f64; 3]| {
        let mn = m.minors_at(x);
        let s12 = m.entry(1, 2).value(x[0]);
        [mn.det / (s12 * mn.m11), mn.det / mn.m21, mn.det / mn.m31]
    };
    let mut worst: f64 = 0.0;
    let mut at = [0.0; 3];
    for i in 0..RADIAL {
        let big_x = length[0] * (i as f64 + 0.5) / RADIAL as f64;
        let (xa, xb) = (ca.inverse(big_x)?, cb.inverse(big_x)?);
        for j in 0..ANGULAR {
            let y = s.b * j as f64 / ANGULAR as f64;
            for k in 0..ANGULAR {
                let z = s.c * k as f64 / ANGULAR as f64;
                let (p, q) = (coeffs(s, [xa, y, z]), coeffs(st, [xb, y, z]));
                for n in 0..3 {
                    let d = (p[n] - q[n]).abs() / p[n].abs();
                    if !(d <= worst) {
                        worst = d;
                        at = [big_x, y, z];
                    }
                }
            }
        }
    }
    out.deviation = worst;
    out.worst_at = at;
    out.passed = worst <= tol.spectral;
    Ok(out)
}
