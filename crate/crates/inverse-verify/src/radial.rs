use angular_spectrum::Spectrum;
use funcspace::ode::{integrate, OdeOptions};
use funcspace::{build_chart_on, Jet, LiouvilleChart, Scalar};
use num_complex::Complex64;
use radial_scatter::{build_potential, Gauge};
use serde::{Deserialize, Serialize};
use stackel_core::{minors, StackelMatrix, Tolerances};

use crate::error::VerifyError;

const GRID: usize = 64;
const ANGULAR_GRID: usize = 16;
const CHART_TOL: f64 = 1e-13;
/// Start of the Cauchy problem as a fraction of the chart length.
const CAUCHY_START: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialRecovery {
    /// Chart lengths `∫ sqrt(s12)` of both sides.
    pub length: [f64; 2],
    pub length_match: bool,
    /// The `ν²` values whose potentials were compared.
    pub nu_values: Vec<f64>,
    /// Largest relative difference of the `μ² = 0` potentials.
    pub potential_deviation: f64,
    /// Largest difference of `s13/s12` recovered from the potentials.
    pub ratio_recovered: f64,
    /// Largest relative differences of `s11/s12` and `s13/s12` in the chart.
    pub ratio_deviation: [f64; 2],
    /// Smallest value of `(l s32 - s33)(s23 - l s22)/s^11` on the grid.
    pub coefficient_min: f64,
    /// `max |u - 1|` with `u = (h/h̃)^{1/4}`, `h = s12/f1`.
    pub u_direct: f64,
    /// `max |u - 1|` for the Cauchy problem started at the left end with `u = 1`.
    pub u_cauchy: f64,
    pub passed: bool,
}

/// Row-1 data in the chart of `s12`.
struct Side<'a> {
    s: &'a StackelMatrix,
    chart: LiouvilleChart,
    angular: [[f64; 3]; 2],
}

impl<'a> Side<'a> {
    fn new(s: &'a StackelMatrix) -> Result<Self, VerifyError> {
        let chart = build_chart_on(s.entry(1, 2), 0.0, s.a, CHART_TOL)?;
        Ok(Side { s, chart, angular: [s.row(2, 0.5 * s.b), s.row(3, 0.5 * s.c)] })
    }

    /// `(f, l, log h, d(log h)/dX)` at chart position `big_x`.
    fn at(&self, big_x: f64) -> Result<[f64; 4], VerifyError> {
        let x = self.chart.inverse(big_x)?;
        let r1 = self.s.row_generic(1, Jet::var(x));
        let f1 = minors(r1, self.angular[0].map(Jet::cst), self.angular[1].map(Jet::cst)).robertson();
        let h = r1[1] / f1;
        let dlog = h.d1 / h.v / self.chart.sqrt_weight(x);
        Ok([r1[0].v / r1[1].v, r1[2].v / r1[1].v, h.v.abs().ln(), dlog])
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs())
}

/// First two distinct `ν²` values of a spectrum.
fn distinct_nu(spec: &Spectrum, tol: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for e in &spec.eigenvalues {
        if out.iter().all(|v| (v - e.nu_sq).abs() > tol * (1.0 + v.abs())) {
            out.push(e.nu_sq);
            if out.len() == 2 {
                break;
            }
        }
    }
    out
}

/// Radial comparison of `s` with `st`, whose angular rows must already
/// coincide with those of `s`. Everything is compared in the chart of `s12`,
/// which removes radial reparametrizations.
pub fn radial_recover(
    s: &StackelMatrix,
    st: &StackelMatrix,
    lambda: f64,
    spec: &Spectrum,
    tol: &Tolerances,
) -> Result<RadialRecovery, VerifyError> {
    let (a, b) = (Side::new(s)?, Side::new(st)?);
    let length = [a.chart.length(), b.chart.length()];
    let length_match = (length[0] - length[1]).abs() <= tol.structural * length[0];
    let nu_values = distinct_nu(spec, tol.cluster);
    let mut out = RadialRecovery {
        length,
        length_match,
        nu_values: nu_values.clone(),
        potential_deviation: f64::NAN,
        ratio_recovered: f64::NAN,
        ratio_deviation: [f64::NAN; 2],
        coefficient_min: f64::NAN,
        u_direct: f64::NAN,
        u_cauchy: f64::NAN,
        passed: false,
    };
    if !length_match {
        return Ok(out);
    }
    if nu_values.len() < 2 {
        return Err(VerifyError::Insufficient(format!("need two distinct ν² values, found {}", nu_values.len())));
    }
    let len = length[0];
    let grid: Vec<f64> = (0..GRID).map(|i| len * (i as f64 + 0.5) / GRID as f64).collect();

    // potentials at μ² = 0 and the two ν² values
    let zero = Complex64::new(0.0, 0.0);
    let mut pots = Vec::new();
    for &nu in &nu_values {
        let nu = Complex64::new(nu, 0.0);
        pots.push((build_potential(s, Gauge::Mu, lambda, zero, nu)?, build_potential(st, Gauge::Mu, lambda, zero, nu)?));
    }
    let mut pdev: f64 = 0.0;
    let mut ldev: f64 = 0.0;
    let mut fdev: f64 = 0.0;
    let mut l_direct: f64 = 0.0;
    let mut u_direct: f64 = 0.0;
    let mut kmin = f64::INFINITY;
    let rows2: Vec<[f64; 3]> = (0..ANGULAR_GRID).map(|i| s.row(2, s.b * i as f64 / ANGULAR_GRID as f64)).collect();
    let rows3: Vec<[f64; 3]> = (0..ANGULAR_GRID).map(|i| s.row(3, s.c * i as f64 / ANGULAR_GRID as f64)).collect();
    for &big_x in &grid {
        let (fa, fb) = (a.at(big_x)?, b.at(big_x)?);
        let xa = a.chart.inverse(big_x)?;
        let xb = b.chart.inverse(big_x)?;
        let mut vals = [[zero; 2]; 2];
        for (k, (p, pt)) in pots.iter().enumerate() {
            vals[k] = [p.eval(xa).1, pt.eval(xb).1];
            pdev = pdev.max((vals[k][0] - vals[k][1]).norm() / (1.0 + vals[k][0].norm()));
        }
        // P(ν₁) - P(ν₂) = (ν₁ - ν₂) s13/s12
        let dnu = nu_values[0] - nu_values[1];
        let la = ((vals[0][0] - vals[1][0]) / dnu).re;
        let lb = ((vals[0][1] - vals[1][1]) / dnu).re;
        ldev = ldev.max(rel(la, lb));
        fdev = fdev.max(rel(fa[0], fb[0]));
        l_direct = l_direct.max(rel(fa[1], fb[1]));
        u_direct = u_direct.max((((fa[2] - fb[2]) / 4.0).exp() - 1.0).abs());
        let l = fa[1];
        for r2 in &rows2 {
            for r3 in &rows3 {
                let cof = r2[1] * r3[2] - r2[2] * r3[1];
                kmin = kmin.min((l * r3[1] - r3[2]) * (r2[2] - l * r2[1]) / cof);
            }
        }
    }
    out.potential_deviation = pdev;
    out.ratio_recovered = ldev;
    out.ratio_deviation = [fdev, l_direct];
    out.coefficient_min = kmin;
    out.u_direct = u_direct;
    out.u_cauchy = cauchy(&a, &b, lambda, &grid, tol)?;
    let scale = tol.spectral;
    out.passed = pdev <= scale
        && ldev <= scale
        && fdev <= scale
        && l_direct <= scale
        && kmin > 0.0
        && u_direct <= scale
        && out.u_cauchy <= scale;
    Ok(out)
}

/// `u'' + ½ (log h̃)' u' + (λ² + 1)(f̃ - f) u = 0` in the chart, `u = 1`,
/// `u' = 0` at the left end.
fn cauchy(a: &Side, b: &Side, lambda: f64, grid: &[f64], tol: &Tolerances) -> Result<f64, VerifyError> {
    let coupling = lambda * lambda + 1.0;
    let x0 = CAUCHY_START * a.chart.length();
    let rhs = |big_x: f64, y: &[f64; 2]| {
        match (a.at(big_x), b.at(big_x)) {
            (Ok(fa), Ok(fb)) => [y[1], -0.5 * fb[3] * y[1] - coupling * (fb[0] - fa[0]) * y[0]],
            _ => [f64::NAN; 2],
        }
    };
    let states = integrate(rhs, x0, [1.0, 0.0], grid, &OdeOptions::tight(tol.ode_rtol))?;
    Ok(states.iter().map(|y| (y[0] - 1.0).abs()).fold(0.0, f64::max))
}
