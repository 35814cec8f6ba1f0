use funcspace::ode::{integrate, OdeOptions};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use stackel_core::Tolerances;

use crate::error::RadialError;
use crate::potential::{End, Gauge, RadialPotential};

/// Number of points at which `W(S₁ₙ, S₂ₙ) = 1` is checked.
pub const WRONSKIAN_POINTS: usize = 16;
/// Chart fractions at which the characteristic Wronskians are averaged.
pub const INTERIOR_FRACTIONS: [f64; 5] = [0.4, 0.45, 0.5, 0.55, 0.6];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FssOptions {
    /// Relative tolerance of the integrator.
    pub rtol: f64,
    /// Start offset `ε₁` as a fraction of the chart length.
    pub offset: f64,
    /// Agreement required between starts at `ε₁` and `ε₁/4`; `None` skips the rerun.
    pub ladder: Option<f64>,
    /// Allowed `|W(S₁ₙ, S₂ₙ) - 1|`.
    pub wronskian: f64,
}

impl Default for FssOptions {
    fn default() -> Self {
        FssOptions { rtol: 1e-12, offset: 1e-6, ladder: Some(1e-7), wronskian: 1e-8 }
    }
}

impl FssOptions {
    pub fn from_tolerances(tol: &Tolerances) -> Self {
        FssOptions { rtol: tol.ode_rtol, ladder: Some(tol.ladder), wronskian: tol.wronskian, ..Default::default() }
    }
}

/// Values and chart derivatives of the pair started at one end:
/// `[S₁, Ṡ₁, S₂, Ṡ₂]`.
pub type PairState = [Complex64; 4];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalSystem {
    pub gauge: Option<Gauge>,
    pub lambda: f64,
    pub mu_sq: Complex64,
    pub nu_sq: Complex64,
    /// Chart length.
    pub length: f64,
    /// `ε₁` in the chart variable.
    pub offset: f64,
    /// Chart positions of the samples, increasing.
    pub points: Vec<f64>,
    /// Indices into `points` of the interior evaluation points.
    pub interior: Vec<usize>,
    /// `S₁₀, S₂₀` at each sample.
    pub left: Vec<PairState>,
    /// `S₁₁, S₂₁` at each sample.
    pub right: Vec<PairState>,
    /// Largest `|W(S₁ₙ, S₂ₙ) - 1|` over the samples, both ends.
    pub wronskian_error: f64,
    /// Change of `(Δ, δ)` when the start offset is divided by 4.
    pub ladder_diff: Option<f64>,
}

pub fn wronskian(u: Complex64, du: Complex64, v: Complex64, dv: Complex64) -> Complex64 {
    u * dv - du * v
}

/// Frobenius start `c d^s (1 + c₁ d + c₂ d²)` and its `d`-derivative.
fn frobenius(s: Complex64, scale: Complex64, r: (Complex64, Complex64), d: f64) -> (Complex64, Complex64) {
    let c1 = r.0 / (2.0 * s);
    let c2 = (r.0 * c1 + r.1) / (4.0 * s + 2.0);
    let p = Complex64::new(d, 0.0).powc(s);
    let series = 1.0 + d * (c1 + d * c2);
    let dseries = c1 + 2.0 * d * c2;
    (scale * p * series, scale * (s * p / d * series + p * dseries))
}

/// Integrates the pair normalized at `end` from chart distance `offset`
/// through the chart positions `targets` (increasing).
pub fn trace_pair(
    pot: &RadialPotential,
    end: End,
    offset: f64,
    targets: &[f64],
    rtol: f64,
) -> Result<Vec<PairState>, RadialError> {
    let lambda = pot.lambda;
    let i_lam = Complex64::new(0.0, lambda);
    let exps = [0.5 - i_lam, 0.5 + i_lam];
    let scales = match end {
        End::Left => [Complex64::new(1.0, 0.0), 1.0 / (2.0 * i_lam)],
        End::Right => [Complex64::new(1.0, 0.0), -1.0 / (2.0 * i_lam)],
    };
    // d/dX = ∓ d/dd at the left / right end
    let orient = if end == End::Left { 1.0 } else { -1.0 };
    let coeffs = pot.regular_coefficients(end)?;
    let (x0, d0) = pot.point_at(end, offset)?;
    let delta0 = pot.raw_distance(end, x0);
    let mut y0 = [0.0; 8];
    for k in 0..2 {
        let (u, du) = frobenius(exps[k], scales[k], coeffs, d0);
        let z = du * (orient * delta0);
        y0[4 * k..4 * k + 4].copy_from_slice(&[u.re, u.im, z.re, z.im]);
    }
    let mut xs = targets.iter().map(|&t| pot.chart().inverse(t)).collect::<Result<Vec<_>, _>>()?;
    if end == End::Right {
        xs.reverse();
    }
    // state (U, δ U̇) with δ the raw distance to the start: both parts
    // scale like δ^{1/2} near the end
    let rhs = |x: f64, y: &[f64; 8]| {
        let (sw, p) = pot.eval(x);
        let delta = pot.raw_distance(end, x);
        let mut out = [0.0; 8];
        for k in 0..2 {
            let u = Complex64::new(y[4 * k], y[4 * k + 1]);
            let z = Complex64::new(y[4 * k + 2], y[4 * k + 3]);
            let du = z / delta;
            let dz = du * orient + p * u * (delta * sw);
            let du_dx = du * sw;
            out[4 * k..4 * k + 4].copy_from_slice(&[du_dx.re, du_dx.im, dz.re, dz.im]);
        }
        out
    };
    let states = integrate(rhs, x0, y0, &xs, &OdeOptions::tight(rtol))?;
    let mut out: Vec<PairState> = states
        .iter()
        .zip(&xs)
        .map(|(y, &x)| {
            let delta = pot.raw_distance(end, x);
            let c = |i: usize| Complex64::new(y[i], y[i + 1]);
            [c(0), c(2) / delta, c(4), c(6) / delta]
        })
        .collect();
    if end == End::Right {
        out.reverse();
    }
    Ok(out)
}

fn sample_points() -> (Vec<f64>, Vec<usize>) {
    let mut pts: Vec<(f64, bool)> = (1..=WRONSKIAN_POINTS)
        .map(|k| (k as f64 / (WRONSKIAN_POINTS + 1) as f64, false))
        .chain(INTERIOR_FRACTIONS.iter().map(|&f| (f, true)))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let interior = pts.iter().enumerate().filter(|p| p.1 .1).map(|p| p.0).collect();
    (pts.into_iter().map(|p| p.0).collect(), interior)
}

fn solve_once(pot: &RadialPotential, offset: f64, rtol: f64) -> Result<FundamentalSystem, RadialError> {
    let len = pot.length();
    let (fractions, interior) = sample_points();
    let points: Vec<f64> = fractions.iter().map(|f| f * len).collect();
    let left = trace_pair(pot, End::Left, offset, &points, rtol)?;
    let right = trace_pair(pot, End::Right, offset, &points, rtol)?;
    let mut werr: f64 = 0.0;
    for (i, (l, r)) in left.iter().zip(&right).enumerate() {
        if interior.contains(&i) {
            continue;
        }
        werr = werr.max((wronskian(l[0], l[1], l[2], l[3]) - 1.0).norm());
        werr = werr.max((wronskian(r[0], r[1], r[2], r[3]) - 1.0).norm());
    }
    Ok(FundamentalSystem {
        gauge: pot.gauge,
        lambda: pot.lambda,
        mu_sq: pot.mu_sq,
        nu_sq: pot.nu_sq,
        length: len,
        offset,
        points,
        interior,
        left,
        right,
        wronskian_error: werr,
        ladder_diff: None,
    })
}

impl FundamentalSystem {
    /// `(Δ, δ)` at each interior point.
    pub fn interior_wronskians(&self) -> Vec<(Complex64, Complex64)> {
        self.interior
            .iter()
            .map(|&i| {
                let (l, r) = (&self.left[i], &self.right[i]);
                (wronskian(r[0], r[1], l[0], l[1]), wronskian(r[0], r[1], l[2], l[3]))
            })
            .collect()
    }

    /// Interior averages of `(Δ, δ)`.
    pub fn averaged(&self) -> (Complex64, Complex64) {
        let w = self.interior_wronskians();
        let n = w.len() as f64;
        let (a, b) = w.iter().fold((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), |acc, p| (acc.0 + p.0, acc.1 + p.1));
        (a / n, b / n)
    }
}

/// Fundamental system with the endpoint asymptotics
/// `S₁₀ ~ X^{1/2-iλ}`, `S₂₀ ~ X^{1/2+iλ}/(2iλ)`,
/// `S₁₁ ~ (L-X)^{1/2-iλ}`, `S₂₁ ~ -(L-X)^{1/2+iλ}/(2iλ)`.
pub fn solve_fss(pot: &RadialPotential, opts: &FssOptions) -> Result<FundamentalSystem, RadialError> {
    let offset = opts.offset * pot.length();
    let mut fss = solve_once(pot, offset, opts.rtol)?;
    if !(fss.wronskian_error <= opts.wronskian) {
        return Err(RadialError::Accuracy(format!(
            "Wronskian drift {:e} exceeds {:e}",
            fss.wronskian_error, opts.wronskian
        )));
    }
    if let Some(tol) = opts.ladder {
        let finer = solve_once(pot, 0.25 * offset, opts.rtol)?;
        let (a, b) = (fss.averaged(), finer.averaged());
        let diff = ((a.0 - b.0).norm() / (1.0 + a.0.norm())).max((a.1 - b.1).norm() / (1.0 + a.1.norm()));
        fss.ladder_diff = Some(diff);
        if !(diff <= tol) {
            return Err(RadialError::Ladder { diff, tol });
        }
    }
    Ok(fss)
}
