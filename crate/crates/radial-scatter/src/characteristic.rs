use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fss::FundamentalSystem;
use crate::potential::Gauge;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicData {
    pub gauge: Option<Gauge>,
    pub mu_sq: Complex64,
    pub nu_sq: Complex64,
    /// `Δ = W(S₁₁, S₁₀)`
    pub delta_big: Complex64,
    /// `δ = W(S₁₁, S₂₀)`
    pub delta_small: Complex64,
    /// `M = -δ/Δ`, absent at a pole.
    pub wt: Option<Complex64>,
    pub pole: bool,
    /// Largest deviation of a single interior Wronskian from the average.
    pub spread: f64,
}

/// Averaged characteristic Wronskians; `M` is withheld when
/// `|Δ| < tol_pole (|δ| + 1)`.
pub fn characteristic(fss: &FundamentalSystem, tol_pole: f64) -> CharacteristicData {
    let (big, small) = fss.averaged();
    let spread = fss
        .interior_wronskians()
        .iter()
        .map(|(a, b)| (a - big).norm().max((b - small).norm()))
        .fold(0.0, f64::max);
    let pole = big.norm() < tol_pole * (small.norm() + 1.0);
    CharacteristicData {
        gauge: fss.gauge,
        mu_sq: fss.mu_sq,
        nu_sq: fss.nu_sq,
        delta_big: big,
        delta_small: small,
        wt: (!pole).then(|| -small / big),
        pole,
        spread,
    }
}
