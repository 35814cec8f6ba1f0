use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use stackel_core::StackelMatrix;

use crate::characteristic::characteristic;
use crate::error::RadialError;
use crate::fss::{solve_fss, FssOptions};
use crate::potential::{build_potential, Gauge};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CamPoint {
    pub mu: Complex64,
    pub nu: Complex64,
    /// `ψ = Δ̃ δ - Δ δ̃`
    pub psi: Complex64,
    /// `|ψ| / (|Δ̃ δ| + |Δ δ̃|)`
    pub relative: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CamReport {
    pub points: Vec<CamPoint>,
    /// Largest `|ψ|` over the grid points in `(iℝ)²`.
    pub imaginary_max: Option<f64>,
    /// Least-squares `(log C, A, B)` in `log|ψ| ≈ log C + A|Re μ| + B|Re ν|`.
    pub growth: Option<[f64; 3]>,
    /// Relative `|ψ|` at each supplied spectrum point.
    pub spectrum_relative: Vec<f64>,
    /// Every spectrum point has relative `|ψ|` below the tolerance.
    pub vanishes_on_spectrum: bool,
}

fn psi_at(
    s: &StackelMatrix,
    s_tilde: &StackelMatrix,
    lambda: f64,
    mu: Complex64,
    nu: Complex64,
    opts: &FssOptions,
) -> Result<CamPoint, RadialError> {
    let chi = |m: &StackelMatrix| -> Result<_, RadialError> {
        let pot = build_potential(m, Gauge::Mu, lambda, mu * mu, nu * nu)?;
        Ok(characteristic(&solve_fss(&pot, opts)?, 0.0))
    };
    let (a, b) = (chi(s)?, chi(s_tilde)?);
    let (p, q) = (b.delta_big * a.delta_small, a.delta_big * b.delta_small);
    let psi = p - q;
    Ok(CamPoint { mu, nu, psi, relative: psi.norm() / (p.norm() + q.norm()).max(f64::MIN_POSITIVE) })
}

fn fit_growth(points: &[CamPoint]) -> Option<[f64; 3]> {
    let rows: Vec<&CamPoint> = points.iter().filter(|p| p.psi.norm() > 0.0).collect();
    if rows.len() < 3 {
        return None;
    }
    let a = DMatrix::from_fn(rows.len(), 3, |i, j| match j {
        0 => 1.0,
        1 => rows[i].mu.re.abs(),
        _ => rows[i].nu.re.abs(),
    });
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|p| p.psi.norm().ln()));
    let sol = a.svd(true, true).solve(&b, 1e-12).ok()?;
    let out = [sol[0], sol[1], sol[2]];
    out.iter().all(|v| v.is_finite()).then_some(out)
}

/// Evaluates `ψ` for two matrices with shared angular data on a grid of
/// complex `(μ, ν)` and on the real joint spectrum points `(μ², ν²)`.
pub fn cam_diagnostics(
    s: &StackelMatrix,
    s_tilde: &StackelMatrix,
    lambda: f64,
    grid: &[(Complex64, Complex64)],
    spectrum: &[(f64, f64)],
    tol: f64,
    opts: &FssOptions,
) -> Result<CamReport, RadialError> {
    let points = grid
        .par_iter()
        .map(|&(mu, nu)| psi_at(s, s_tilde, lambda, mu, nu, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let spectrum_relative = spectrum
        .par_iter()
        .map(|&(m2, n2)| {
            let root = |v: f64| Complex64::new(v, 0.0).sqrt();
            psi_at(s, s_tilde, lambda, root(m2), root(n2), opts).map(|p| p.relative)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let imaginary_max = points
        .iter()
        .filter(|p| p.mu.re == 0.0 && p.nu.re == 0.0)
        .map(|p| p.psi.norm())
        .reduce(f64::max);
    Ok(CamReport {
        growth: fit_growth(&points),
        imaginary_max,
        vanishes_on_spectrum: spectrum_relative.iter().all(|r| *r < tol),
        spectrum_relative,
        points,
    })
}
