use std::collections::BTreeMap;

use angular_spectrum::{cone_bounds, count_in_cone, coupled_solve, ConeBounds, ConeCount, Spectrum};
use inverse_verify::{normalize, solve_options, verify, ComparisonReport, Verdict};
use num_complex::Complex64;
use radial_scatter::{
    asymptotics_check, build_potential, characteristic, scatter_mode, solve_fss, AsymptoticRow, EnergyContext,
    FssOptions, Gauge, ScatteringRecord,
};
use rayon::prelude::*;
use serde::Serialize;
use stackel_core::{
    check_ah_ends, check_robertson, gauge_normalize, normalize_angular_gauge, satisfies_normal_form, AHEndReport,
    Mat2, StackelMatrix, Tolerances,
};

use crate::config::ManifoldConfig;
use crate::error::CliError;
use crate::output::{float, to_json, OutDir, RunManifest};

/// Rungs of the asymptotic ladder and the ray `ν²/μ²` they lie on.
pub const LADDER: [f64; 4] = [20.0, 40.0, 80.0, 160.0];
pub const LADDER_RAY: f64 = 1.0;
const COUNT_SAMPLES: usize = 100_000;
const COUNT_SEED: u64 = 7;

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass,
    Distinct(String),
    /// Written a report, but a structural check failed.
    Structural(String),
}

#[derive(Serialize)]
struct Wrapped<'a, T> {
    manifest: &'a RunManifest,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize)]
struct RobertsonSummary {
    residual: f64,
    worst: [f64; 3],
    base: [f64; 3],
}

#[derive(Serialize)]
struct NormalizeReport {
    column_gauge: Mat2,
    normal_form: bool,
    robertson: RobertsonSummary,
    ah: [AHEndReport; 2],
    pass: bool,
}

pub fn cmd_normalize(cfg: &ManifoldConfig, tol: &Tolerances, manifest: &RunManifest, out: &OutDir) -> Result<Outcome, CliError> {
    let s = cfg.build()?;
    let (n, g) = gauge_normalize(&s)?;
    let n = normalize_angular_gauge(&n, tol.robertson)?;
    let rob = check_robertson(&n, tol.robertson)?;
    let ah = check_ah_ends(&n, cfg.eps0, cfg.eps1, tol.ah_bound);
    let normal_form = satisfies_normal_form(&n, tol.structural);
    let pass = normal_form && ah.iter().all(|r| r.pass);

    let dump = ManifoldConfig {
        preset: None,
        rows: None,
        matrix: Some(n),
        manifest: Some(manifest.clone()),
        ..cfg.clone()
    };
    out.write("normalized.json", &(to_json(&dump, true) + "\n"))?;
    let report = NormalizeReport {
        column_gauge: g,
        normal_form,
        robertson: RobertsonSummary { residual: rob.residual, worst: rob.worst, base: rob.base },
        ah,
        pass,
    };
    out.write("normalize_report.json", &(to_json(&Wrapped { manifest, body: &report }, true) + "\n"))?;
    Ok(if pass {
        Outcome::Pass
    } else if !normal_form {
        Outcome::Structural("normalized matrix misses the normal form".into())
    } else {
        let end = report.ah.iter().find(|r| !r.pass).map(|r| format!("{:?}", r.end)).unwrap_or_default();
        Outcome::Structural(format!("asymptotically hyperbolic decay fails at end {end}"))
    })
}

#[derive(Serialize)]
struct SpectrumLine {
    m: usize,
    mu_sq: f64,
    nu_sq: f64,
    multiplicity: u8,
}

#[derive(Serialize)]
struct CountLine {
    r: f64,
    #[serde(flatten)]
    count: ConeCount,
}

#[derive(Serialize)]
struct SpectrumReport {
    lambda: f64,
    r_max: f64,
    eigenvalues: Vec<SpectrumLine>,
    dropped: usize,
    flagged: usize,
    failed_cells: Vec<[usize; 2]>,
    cone: ConeBounds,
    in_cone: bool,
    counts: Vec<CountLine>,
}

fn solve(s: &StackelMatrix, lambda: f64, r_max: f64, tol: &Tolerances) -> Result<Spectrum, CliError> {
    let spec = coupled_solve(s, lambda, r_max, &solve_options(tol))?;
    if !spec.failed_cells.is_empty() {
        eprintln!("warning: {} branch pairs did not converge: {:?}", spec.failed_cells.len(), spec.failed_cells);
    }
    Ok(spec)
}

pub fn cmd_spectrum(
    cfg: &ManifoldConfig,
    lambda: f64,
    r_max: f64,
    tol: &Tolerances,
    manifest: &RunManifest,
    out: &OutDir,
) -> Result<Outcome, CliError> {
    let s = normalize(&cfg.build()?, tol)?;
    let spec = solve(&s, lambda, r_max, tol)?;
    let cone = cone_bounds(&s, lambda);
    let in_cone = spec.eigenvalues.iter().all(|e| cone.contains(e.mu_sq, e.nu_sq));
    // count radii stay inside the solved norm ball μ² + ν² ≤ r_max
    let counts = [0.25, 0.5, 1.0]
        .iter()
        .map(|f| {
            let r = f * r_max.sqrt();
            CountLine { r, count: count_in_cone(&s, &spec, (cone.c1, cone.c2), r, COUNT_SAMPLES, COUNT_SEED) }
        })
        .collect();
    let report = SpectrumReport {
        lambda,
        r_max,
        eigenvalues: spec
            .eigenvalues
            .iter()
            .map(|e| SpectrumLine { m: e.m, mu_sq: e.mu_sq, nu_sq: e.nu_sq, multiplicity: e.multiplicity })
            .collect(),
        dropped: spec.dropped,
        flagged: spec.flagged(),
        failed_cells: spec.failed_cells.clone(),
        cone,
        in_cone,
        counts,
    };
    out.write("spectrum.json", &(to_json(&Wrapped { manifest, body: &report }, true) + "\n"))?;
    Ok(if in_cone { Outcome::Pass } else { Outcome::Structural("eigenvalue outside the cone bounds".into()) })
}

/// Mode record in the `μ²` gauge plus `Δ` from the other two gauges.
#[derive(Clone, Debug, Serialize)]
pub struct ModeLine {
    #[serde(flatten)]
    pub record: ScatteringRecord,
    #[serde(rename = "Delta_nu")]
    pub delta_nu: Complex64,
    #[serde(rename = "Delta_joint")]
    pub delta_joint: Complex64,
    /// Largest relative difference of `Δ` across the three gauges.
    pub gauge_spread: f64,
}

fn delta_in(s: &StackelMatrix, gauge: Gauge, lambda: f64, mode: (f64, f64), tol: &Tolerances) -> Result<Complex64, CliError> {
    let pot = build_potential(s, gauge, lambda, Complex64::new(mode.0, 0.0), Complex64::new(mode.1, 0.0))?;
    let fss = solve_fss(&pot, &FssOptions::from_tolerances(tol))?;
    Ok(characteristic(&fss, tol.pole).delta_big)
}

pub fn scatter_modes(s: &StackelMatrix, spec: &Spectrum, tol: &Tolerances) -> Result<Vec<ModeLine>, CliError> {
    let energy = EnergyContext::new(spec.lambda)?;
    spec.eigenvalues
        .par_iter()
        .map(|e| {
            let mode = (e.mu_sq, e.nu_sq);
            let record = scatter_mode(s, Gauge::Mu, &energy, e.m, mode, tol)?;
            let delta_nu = delta_in(s, Gauge::Nu, spec.lambda, mode, tol)?;
            let delta_joint = delta_in(s, Gauge::Joint, spec.lambda, mode, tol)?;
            let base = record.delta_big;
            let gauge_spread = (delta_nu - base).norm().max((delta_joint - base).norm()) / base.norm();
            Ok(ModeLine { record, delta_nu, delta_joint, gauge_spread })
        })
        .collect()
}

fn asymptotics_csv(rows: &[AsymptoticRow], manifest: &RunManifest) -> String {
    let mut text = format!("# manifest {}\n", to_json(manifest, false));
    text.push_str("y,length,Delta_re,Delta_im,predicted_re,predicted_im,ratio_error,delta_re,delta_im,predicted_small_re,predicted_small_im,ratio_error_small\n");
    for r in rows {
        let cols = [
            r.y,
            r.length,
            r.delta_big.re,
            r.delta_big.im,
            r.predicted_big.re,
            r.predicted_big.im,
            r.error_big,
            r.delta_small.re,
            r.delta_small.im,
            r.predicted_small.re,
            r.predicted_small.im,
            r.error_small,
        ];
        text.push_str(&cols.map(float).join(","));
        text.push('\n');
    }
    text
}

pub fn ladder(s: &StackelMatrix, lambda: f64, tol: &Tolerances) -> Result<Vec<AsymptoticRow>, CliError> {
    Ok(asymptotics_check(s, lambda, &LADDER, LADDER_RAY, &FssOptions::from_tolerances(tol))?)
}

pub fn cmd_scatter(
    cfg: &ManifoldConfig,
    lambda: f64,
    r_max: f64,
    tol: &Tolerances,
    manifest: &RunManifest,
    out: &OutDir,
) -> Result<Outcome, CliError> {
    let s = normalize(&cfg.build()?, tol)?;
    let spec = solve(&s, lambda, r_max, tol)?;
    let lines = scatter_modes(&s, &spec, tol)?;
    let mut text = to_json(&BTreeMap::from([("manifest", manifest)]), false) + "\n";
    for l in &lines {
        text.push_str(&to_json(l, false));
        text.push('\n');
    }
    out.write("scattering.jsonl", &text)?;
    out.write("asymptotics.csv", &asymptotics_csv(&ladder(&s, lambda, tol)?, manifest))?;
    let poles = lines.iter().filter(|l| l.record.wt.is_none()).count();
    if poles > 0 {
        eprintln!("note: {poles} modes sit at a pole and carry no scattering matrix");
    }
    Ok(Outcome::Pass)
}

pub fn cmd_asymptotics(
    cfg: &ManifoldConfig,
    lambda: f64,
    tol: &Tolerances,
    manifest: &RunManifest,
    out: &OutDir,
) -> Result<Outcome, CliError> {
    let s = normalize(&cfg.build()?, tol)?;
    out.write("asymptotics.csv", &asymptotics_csv(&ladder(&s, lambda, tol)?, manifest))?;
    Ok(Outcome::Pass)
}

pub fn cmd_verify(
    a: &ManifoldConfig,
    b: &ManifoldConfig,
    lambda: f64,
    r_max: f64,
    tol: &Tolerances,
    manifest: &RunManifest,
    out: &OutDir,
) -> Result<(Outcome, ComparisonReport), CliError> {
    let report = verify(&a.build()?, &b.build()?, lambda, r_max, tol)?;
    out.write("comparison.json", &(to_json(&Wrapped { manifest, body: &report }, true) + "\n"))?;
    let outcome = match report.verdict {
        Verdict::Equivalent => Outcome::Pass,
        Verdict::Distinct => Outcome::Distinct(report.reason.clone()),
    };
    Ok((outcome, report))
}

