use angular_spectrum::{coupled_solve, SolveOptions, Spectrum};
use num_complex::Complex64;
use radial_scatter::{scatter_mode, EnergyContext, Gauge, ScatteringRecord};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use stackel_core::{StackelMatrix, Tolerances};

use crate::error::VerifyError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeDeviation {
    pub m: usize,
    pub mu_sq: f64,
    pub nu_sq: f64,
    pub l: f64,
    pub t: f64,
    pub r: f64,
    /// `max(l, t, r)`; at a pole of either side, the relative change of `Δ`.
    pub deviation: f64,
    pub pole: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatteringComparison {
    pub lambda: f64,
    pub r_max: f64,
    /// Spectrum sizes of the two sides.
    pub count: [usize; 2],
    /// Largest relative difference of paired eigenvalues.
    pub spectrum_deviation: f64,
    /// First index at which the spectra disagree.
    pub mismatch: Option<usize>,
    pub modes: Vec<ModeDeviation>,
    pub max_deviation: f64,
}

pub fn solve_options(tol: &Tolerances) -> SolveOptions {
    SolveOptions { ode_rtol: tol.ode_rtol, residual: tol.angular_residual, cluster: tol.cluster, ..Default::default() }
}

fn dist(a: Option<Complex64>, b: Option<Complex64>) -> f64 {
    match (a, b) {
        (Some(a), Some(b)) => (a - b).norm(),
        _ => f64::NAN,
    }
}

fn deviation(m: usize, a: &ScatteringRecord, b: &ScatteringRecord) -> ModeDeviation {
    let pole = a.wt.is_none() || b.wt.is_none();
    let (l, t, r) = (dist(a.l, b.l), dist(a.t, b.t), dist(a.r, b.r));
    let deviation = if pole {
        (a.delta_big - b.delta_big).norm() / (1.0 + a.delta_big.norm())
    } else {
        l.max(t).max(r)
    };
    ModeDeviation { m, mu_sq: a.mu_sq, nu_sq: a.nu_sq, l, t, r, deviation, pole }
}

/// Pairs two spectra in order; returns the largest relative difference and
/// the first index that disagrees (including a cardinality difference).
pub fn pair_spectra(a: &Spectrum, b: &Spectrum, tol: f64) -> (f64, Option<usize>) {
    let mut worst: f64 = 0.0;
    let mut mismatch = None;
    for (i, (x, y)) in a.eigenvalues.iter().zip(&b.eigenvalues).enumerate() {
        let d = ((x.mu_sq - y.mu_sq).abs() + (x.nu_sq - y.nu_sq).abs()) / (1.0 + x.mu_sq.abs() + x.nu_sq.abs());
        worst = worst.max(d);
        if mismatch.is_none() && !(d <= tol) {
            mismatch = Some(i);
        }
    }
    if mismatch.is_none() && a.eigenvalues.len() != b.eigenvalues.len() {
        mismatch = Some(a.eigenvalues.len().min(b.eigenvalues.len()));
    }
    (worst, mismatch)
}

/// Both coupled spectra up to `r_max` and the per-mode difference of the
/// partial scattering matrices.
pub fn compare_scattering(
    s: &StackelMatrix,
    st: &StackelMatrix,
    lambda: f64,
    r_max: f64,
    tol: &Tolerances,
) -> Result<(ScatteringComparison, Spectrum), VerifyError> {
    let opts = solve_options(tol);
    let (a, b) = rayon::join(|| coupled_solve(s, lambda, r_max, &opts), || coupled_solve(st, lambda, r_max, &opts));
    let (a, b) = (a?, b?);
    let (spectrum_deviation, mismatch) = pair_spectra(&a, &b, tol.spectral);
    let mut out = ScatteringComparison {
        lambda,
        r_max,
        count: [a.eigenvalues.len(), b.eigenvalues.len()],
        spectrum_deviation,
        mismatch,
        modes: Vec::new(),
        max_deviation: f64::NAN,
    };
    if mismatch.is_some() {
        return Ok((out, a));
    }
    let energy = EnergyContext::new(lambda)?;
    out.modes = a
        .eigenvalues
        .par_iter()
        .map(|e| -> Result<ModeDeviation, VerifyError> {
            let mode = (e.mu_sq, e.nu_sq);
            let x = scatter_mode(s, Gauge::Mu, &energy, e.m, mode, tol)?;
            let y = scatter_mode(st, Gauge::Mu, &energy, e.m, mode, tol)?;
            Ok(deviation(e.m, &x, &y))
        })
        .collect::<Result<_, _>>()?;
    out.max_deviation = out.modes.iter().map(|m| m.deviation).fold(0.0, f64::max);
    Ok((out, a))
}
