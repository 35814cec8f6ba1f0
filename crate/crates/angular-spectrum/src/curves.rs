use std::f64::consts::TAU;

use funcspace::quad;
use serde::{Deserialize, Serialize};
use stackel_core::StackelMatrix;

use crate::error::AngularError;
use crate::problem::AngularProblem;

const WINDOW_SAMPLES: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSeparation {
    /// Smallest distance between successive curves over all sampled pairs.
    pub h: f64,
    /// Same, restricted to the row-2 family `μ = 2mπ / B̃(θ²)`.
    pub h_row2: f64,
    /// Same, restricted to the row-3 family `μ = 2kπ / C̃(θ²)`.
    pub h_row3: f64,
    /// `θ²` samples with the chart lengths `B̃`, `C̃` there.
    pub lengths: Vec<[f64; 3]>,
}

fn chart_length(p: &AngularProblem, theta_sq: f64) -> Result<f64, AngularError> {
    p.check_window(theta_sq)?;
    let w = p.weight(theta_sq);
    Ok(quad::integrate(&|x: f64| w.value(x).max(0.0).sqrt(), 0.0, p.period, 1e-13, 1e-15).value)
}

/// Spacing of the approximating curves `μ_m(θ) = 2mπ / L(θ²)`, `ν = θ μ`:
/// the minimum over `m` in `m_range` and sampled `θ₁, θ₂` in the window of
/// `|μ_{m+1}(θ₂) - μ_m(θ₁)| + |ν_{m+1}(θ₂) - ν_m(θ₁)|`.
///
/// `B̃` must decrease and `C̃` increase across the window.
pub fn curve_separation(
    s: &StackelMatrix,
    lambda: f64,
    theta_window: (f64, f64),
    m_range: (usize, usize),
) -> Result<CurveSeparation, AngularError> {
    let (lo, hi) = theta_window;
    if !(lo <= hi) || lo <= 0.0 {
        return Err(AngularError::Window { theta_sq: lo, reason: format!("empty window [{lo}, {hi}]") });
    }
    let p2 = AngularProblem::new(s, 2, lambda);
    let p3 = AngularProblem::new(s, 3, lambda);
    let n = if lo == hi { 1 } else { WINDOW_SAMPLES };
    let mut lengths = Vec::with_capacity(n);
    for i in 0..n {
        let t = if n == 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
        lengths.push([t, chart_length(&p2, t)?, chart_length(&p3, t)?]);
    }
    for w in lengths.windows(2) {
        if !(w[1][1] < w[0][1]) {
            return Err(AngularError::Window { theta_sq: w[1][0], reason: "row-2 chart length is not decreasing".into() });
        }
        if !(w[1][2] > w[0][2]) {
            return Err(AngularError::Window { theta_sq: w[1][0], reason: "row-3 chart length is not increasing".into() });
        }
    }
    let family = |col: usize| {
        let mut h = f64::INFINITY;
        for m in m_range.0..=m_range.1 {
            for a in &lengths {
                for b in &lengths {
                    let (t1, t2) = (a[0].sqrt(), b[0].sqrt());
                    let mu1 = TAU * m as f64 / a[col];
                    let mu2 = TAU * (m + 1) as f64 / b[col];
                    h = h.min((mu2 - mu1).abs() + (t2 * mu2 - t1 * mu1).abs());
                }
            }
        }
        h
    };
    let (h_row2, h_row3) = (family(1), family(2));
    Ok(CurveSeparation { h: h_row2.min(h_row3), h_row2, h_row3, lengths })
}
