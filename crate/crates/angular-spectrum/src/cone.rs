use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use stackel_core::StackelMatrix;

use crate::coupled::Spectrum;

const EXTREMA_SAMPLES: usize = 1024;

/// `C1 μ² + D1 ≤ ν² ≤ C2 μ² + D2` for every joint eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeBounds {
    pub c1: f64,
    pub c2: f64,
    pub d1: f64,
    pub d2: f64,
}

impl ConeBounds {
    pub fn lower(&self, mu_sq: f64) -> f64 {
        self.c1 * mu_sq + self.d1
    }

    pub fn upper(&self, mu_sq: f64) -> f64 {
        self.c2 * mu_sq + self.d2
    }

    /// Inequalities hold up to rounding of the bound itself.
    pub fn contains(&self, mu_sq: f64, nu_sq: f64) -> bool {
        let slack = 1e-12 * (1.0 + mu_sq.abs() + nu_sq.abs());
        nu_sq >= self.lower(mu_sq) - slack && nu_sq <= self.upper(mu_sq) + slack
    }
}

fn row_min(s: &StackelMatrix, row: usize, f: impl Fn([f64; 3]) -> f64) -> f64 {
    let period = s.period(row);
    (0..EXTREMA_SAMPLES)
        .map(|i| f(s.row(row, period * i as f64 / EXTREMA_SAMPLES as f64)))
        .fold(f64::INFINITY, f64::min)
}

/// Extrema of the angular coefficient ratios on a 1024-point grid per row.
pub fn cone_bounds(s: &StackelMatrix, lambda: f64) -> ConeBounds {
    let coupling = lambda * lambda + 1.0;
    ConeBounds {
        c1: row_min(s, 3, |r| -r[1] / r[2]),
        c2: -row_min(s, 2, |r| r[1] / r[2]),
        d1: coupling * row_min(s, 3, |r| r[0] / r[2]),
        d2: -coupling * row_min(s, 2, |r| -r[0] / r[2]),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeCount {
    /// Distinct eigenvalues with `θ²` in the cone and `μ² + ν² ≤ r²`.
    pub n: usize,
    /// `n / r²`
    pub ratio: f64,
    /// Phase-space volume of the same region divided by `4π² r²`.
    pub symbol_ratio: f64,
}

/// Counts the spectrum inside a `θ²` cone and a ball of radius `r` in the
/// `(μ, ν)` plane, next to the Monte Carlo symbol volume of that region.
pub fn count_in_cone(s: &StackelMatrix, spectrum: &Spectrum, cone: (f64, f64), r: f64, samples: usize, seed: u64) -> ConeCount {
    let (lo, hi) = cone;
    if lo > hi || r <= 0.0 {
        return ConeCount { n: 0, ratio: 0.0, symbol_ratio: 0.0 };
    }
    let n = spectrum
        .eigenvalues
        .iter()
        .filter(|e| e.mu_sq + e.nu_sq <= r * r && e.theta_sq >= lo && e.theta_sq <= hi)
        .count();
    let volume = symbol_volume(s, cone, r, samples, seed);
    ConeCount { n, ratio: n as f64 / (r * r), symbol_ratio: volume / (4.0 * PI * PI * r * r) }
}

/// Volume of `{(x, ξ) ∈ T*T² : p(x, ξ) ∈ cone ∩ B(0, r)}` for the principal
/// symbols `p1² = (-s33 ξ2² + s23 ξ3²)/s^11`, `p2² = (s32 ξ2² - s22 ξ3²)/s^11`.
///
/// For each sampled base point the fibre is sampled in the box enclosing the
/// ellipse `p1² + p2² ≤ r²`.
pub fn symbol_volume(s: &StackelMatrix, cone: (f64, f64), r: f64, samples: usize, seed: u64) -> f64 {
    let (lo, hi) = cone;
    if lo > hi || samples == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = 0.0;
    for _ in 0..samples {
        let x2 = rng.gen::<f64>() * s.b;
        let x3 = rng.gen::<f64>() * s.c;
        let [_, s22, s23] = s.row(2, x2);
        let [_, s32, s33] = s.row(3, x3);
        let s11 = s22 * s33 - s23 * s32;
        let (a2, a3) = ((s32 - s33) / s11, (s23 - s22) / s11);
        if !(s11 > 0.0 && a2 > 0.0 && a3 > 0.0) {
            continue;
        }
        let (h2, h3) = (r / a2.sqrt(), r / a3.sqrt());
        let xi2 = (2.0 * rng.gen::<f64>() - 1.0) * h2;
        let xi3 = (2.0 * rng.gen::<f64>() - 1.0) * h3;
        let p1 = (-s33 * xi2 * xi2 + s23 * xi3 * xi3) / s11;
        let p2 = (s32 * xi2 * xi2 - s22 * xi3 * xi3) / s11;
        if p1 + p2 <= r * r && p2 >= lo * p1 && p2 <= hi * p1 {
            acc += 4.0 * h2 * h3;
        }
    }
    s.b * s.c * acc / samples as f64
}
