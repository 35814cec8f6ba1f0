use std::f64::consts::PI;

use funcspace::special::gamma;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use stackel_core::StackelMatrix;

use crate::characteristic::characteristic;
use crate::error::RadialError;
use crate::fss::{solve_fss, FssOptions};
use crate::potential::{build_potential, Gauge};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRow {
    pub y: f64,
    /// Joint-gauge chart length at this mode.
    pub length: f64,
    pub delta_big: Complex64,
    pub predicted_big: Complex64,
    /// `|Δ / prediction - 1|`
    pub error_big: f64,
    pub delta_small: Complex64,
    pub predicted_small: Complex64,
    pub error_small: f64,
}

/// Leading behaviour for `ω = iy`, `y > 0`:
/// `Δ ≈ Γ(1-iλ)²/(π 2^{2iλ}) ω^{2iλ} e^{λπ} 2cosh(ωL - λπ)` and
/// `δ ≈ Γ(1-iλ)Γ(1+iλ)/(2iλπ) 2cosh(ωL)`.
pub fn predicted(lambda: f64, y: f64, length: f64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let omega = Complex64::new(0.0, y);
    let g_minus = gamma(Complex64::new(1.0, -lambda));
    let g_plus = gamma(Complex64::new(1.0, lambda));
    let two_il = 2.0 * i * lambda;
    let big = g_minus * g_minus / (PI * (two_il * 2f64.ln()).exp())
        * (two_il * omega.ln()).exp()
        * (lambda * PI).exp()
        * 2.0
        * (omega * length - lambda * PI).cosh();
    let small = g_minus * g_plus / (two_il * PI) * 2.0 * (omega * length).cosh();
    (big, small)
}

/// Joint-gauge characteristic values along the ray `μ² = -y²/(1+θ²)`,
/// `ν² = θ² μ²` against the large-`y` prediction.
pub fn asymptotics_check(
    s: &StackelMatrix,
    lambda: f64,
    ys: &[f64],
    theta_sq: f64,
    opts: &FssOptions,
) -> Result<Vec<AsymptoticRow>, RadialError> {
    if !(theta_sq > 0.0) {
        return Err(RadialError::Parameters(format!("ray slope must be positive, got {theta_sq}")));
    }
    ys.par_iter()
        .map(|&y| {
            let mu_sq = -y * y / (1.0 + theta_sq);
            let pot = build_potential(s, Gauge::Joint, lambda, Complex64::new(mu_sq, 0.0), Complex64::new(theta_sq * mu_sq, 0.0))?;
            let chi = characteristic(&solve_fss(&pot, opts)?, 0.0);
            let length = pot.length();
            let (pb, ps) = predicted(lambda, y, length);
            Ok(AsymptoticRow {
                y,
                length,
                delta_big: chi.delta_big,
                predicted_big: pb,
                error_big: (chi.delta_big / pb - 1.0).norm(),
                delta_small: chi.delta_small,
                predicted_small: ps,
                error_small: (chi.delta_small / ps - 1.0).norm(),
            })
        })
        .collect()
}
