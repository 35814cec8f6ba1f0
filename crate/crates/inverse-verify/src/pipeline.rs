use serde::{Deserialize, Serialize};
use stackel_core::{gauge_normalize, normalize_angular_gauge, StackelMatrix, Tolerances};

use crate::angular::{angular_recover, AngularRecovery};
use crate::error::VerifyError;
use crate::pullback::{pullback_compare, PullbackComparison};
use crate::radial::{radial_recover, RadialRecovery};
use crate::scattering::{compare_scattering, ScatteringComparison};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equivalent,
    Distinct,
}

/// Outcome of [`verify`]. Stages after the first failing one are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub lambda: f64,
    pub r_max: f64,
    pub angular: AngularRecovery,
    pub scattering: Option<ScatteringComparison>,
    pub radial: Option<RadialRecovery>,
    pub pullback: Option<PullbackComparison>,
    pub verdict: Verdict,
    pub reason: String,
}

/// Radial gauge normalization followed by the angular one.
pub fn normalize(s: &StackelMatrix, tol: &Tolerances) -> Result<StackelMatrix, VerifyError> {
    let (n, _) = gauge_normalize(s)?;
    Ok(normalize_angular_gauge(&n, tol.robertson)?)
}

/// Decides whether two manifolds are isometric from their scattering data
/// up to `r_max`. Stages run in order: angular recovery, spectra and
/// scattering matrices, radial reconstruction, metric pullback.
///
/// The block gauge and the first-column shifts relabel the separation
/// constants without changing the metric, so the scattering stage compares
/// `S` against `S̃` with the recovered gauge undone.
pub fn verify(
    s: &StackelMatrix,
    st: &StackelMatrix,
    lambda: f64,
    r_max: f64,
    tol: &Tolerances,
) -> Result<ComparisonReport, VerifyError> {
    let (s, st) = (normalize(s, tol)?, normalize(st, tol)?);
    let (angular, aligned) = angular_recover(&s, &st, tol)?;
    let mut report = ComparisonReport {
        lambda,
        r_max,
        angular,
        scattering: None,
        radial: None,
        pullback: None,
        verdict: Verdict::Distinct,
        reason: String::new(),
    };
    let aligned = match aligned {
        Some(m) if report.angular.passed => m,
        _ => {
            report.reason = format!("angular data differ (residual {:e})", report.angular.aligned_residual.max(report.angular.s11_residual));
            return Ok(report);
        }
    };

    let (sc, spectrum) = compare_scattering(&s, &aligned, lambda, r_max, tol)?;
    let scattering_reason = if let Some(i) = sc.mismatch {
        Some(format!("spectra differ from index {i} (counts {} vs {})", sc.count[0], sc.count[1]))
    } else if !(sc.max_deviation <= tol.scattering) {
        Some(format!("scattering matrices differ by {:e}", sc.max_deviation))
    } else {
        None
    };
    report.scattering = Some(sc);
    if let Some(r) = scattering_reason {
        report.reason = r;
        return Ok(report);
    }

    let radial = radial_recover(&s, &aligned, lambda, &spectrum, tol)?;
    let passed = radial.passed;
    let reason = format!(
        "radial data differ (potential {:e}, u {:e})",
        radial.potential_deviation, radial.u_direct
    );
    report.radial = Some(radial);
    if !passed {
        report.reason = reason;
        return Ok(report);
    }

    let pb = pullback_compare(&s, &aligned, tol)?;
    let passed = pb.passed;
    let reason = format!("metric pullback differs by {:e}", pb.deviation);
    report.pullback = Some(pb);
    if !passed {
        report.reason = reason;
        return Ok(report);
    }
    report.verdict = Verdict::Equivalent;
    report.reason = "all stages agree".into();
    Ok(report)
}
