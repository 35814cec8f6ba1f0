use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use stackel_core::{StackelMatrix, Tolerances};

use crate::characteristic::{characteristic, CharacteristicData};
use crate::energy::EnergyContext;
use crate::error::RadialError;
use crate::fss::{solve_fss, FssOptions};
use crate::potential::{build_potential, Gauge};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialScatteringMatrix {
    pub l: Complex64,
    pub t_left: Complex64,
    pub t_right: Complex64,
    pub r: Complex64,
    /// `‖S S* - I‖∞`
    pub unitarity_residual: f64,
    pub flagged: bool,
}

impl PartialScatteringMatrix {
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.l, self.t_right], [self.t_left, self.r]]
    }
}

pub fn unitarity_residual(s: [[Complex64; 2]; 2]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        let mut row = 0.0;
        for j in 0..2 {
            let mut v = s[i][0] * s[j][0].conj() + s[i][1] * s[j][1].conj();
            if i == j {
                v -= 1.0;
            }
            row += v.norm();
        }
        worst = worst.max(row);
    }
    worst
}

/// `L = -k M`, `T = k/Δ`, `R = k (conj Δ/Δ) conj M` with `k = 2iλ ω₋/ω₊`.
///
/// Only meaningful on the real spectrum. Entries whose unitarity residual
/// exceeds `tol_unit` are returned flagged.
pub fn scattering_entry(
    chi: &CharacteristicData,
    energy: &EnergyContext,
    tol_unit: f64,
) -> Result<PartialScatteringMatrix, RadialError> {
    let Some(m) = chi.wt else { return Err(RadialError::Pole(chi.delta_big.norm())) };
    let k = energy.kappa();
    let d = chi.delta_big;
    let t = k / d;
    let mut out = PartialScatteringMatrix {
        l: -k * m,
        t_left: t,
        t_right: t,
        r: k * (d.conj() / d) * m.conj(),
        unitarity_residual: 0.0,
        flagged: false,
    };
    out.unitarity_residual = unitarity_residual(out.matrix());
    out.flagged = !(out.unitarity_residual <= tol_unit);
    Ok(out)
}

/// Per-mode output line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatteringRecord {
    pub m: usize,
    pub mu_sq: f64,
    pub nu_sq: f64,
    #[serde(rename = "Delta")]
    pub delta_big: Complex64,
    #[serde(rename = "delta")]
    pub delta_small: Complex64,
    /// `None` at a pole.
    #[serde(rename = "M")]
    pub wt: Option<Complex64>,
    #[serde(rename = "L")]
    pub l: Option<Complex64>,
    #[serde(rename = "T")]
    pub t: Option<Complex64>,
    #[serde(rename = "R")]
    pub r: Option<Complex64>,
    pub unitarity_residual: Option<f64>,
    pub wronskian_error: f64,
    pub flagged: bool,
}

/// Solves mode `m` in `gauge` and assembles its record.
pub fn scatter_mode(
    s: &StackelMatrix,
    gauge: Gauge,
    energy: &EnergyContext,
    m: usize,
    (mu_sq, nu_sq): (f64, f64),
    tol: &Tolerances,
) -> Result<ScatteringRecord, RadialError> {
    let pot = build_potential(s, gauge, energy.lambda, Complex64::new(mu_sq, 0.0), Complex64::new(nu_sq, 0.0))?;
    let fss = solve_fss(&pot, &FssOptions::from_tolerances(tol))?;
    let chi = characteristic(&fss, tol.pole);
    let entry = scattering_entry(&chi, energy, tol.unitarity).ok();
    Ok(ScatteringRecord {
        m,
        mu_sq,
        nu_sq,
        delta_big: chi.delta_big,
        delta_small: chi.delta_small,
        wt: chi.wt,
        l: entry.map(|e| e.l),
        t: entry.map(|e| e.t_left),
        r: entry.map(|e| e.r),
        unitarity_residual: entry.map(|e| e.unitarity_residual),
        wronskian_error: fss.wronskian_error,
        flagged: entry.map_or(true, |e| e.flagged),
    })
}
