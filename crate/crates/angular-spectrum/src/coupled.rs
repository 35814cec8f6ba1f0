use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use stackel_core::StackelMatrix;

use crate::error::AngularError;
use crate::galerkin::Pencil;
use crate::hill::{discriminant, monodromy_of, Mat2};
use crate::problem::AngularProblem;

/// One joint eigenvalue `(μ², ν²)` of the two angular operators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoupledEigenvalue {
    /// 1-based position in the spectrum ordering.
    pub m: usize,
    pub mu_sq: f64,
    pub nu_sq: f64,
    pub theta_sq: f64,
    pub multiplicity: u8,
    /// Lowest `(j, k)` Galerkin branch pair meeting at this point: `j` counts
    /// the `ν²` branches of the row-2 equation from the top, `k` the `μ²`
    /// branches of the row-3 equation.
    pub branch: [usize; 2],
    /// `(Δ₂, Δ₃)` from the Floquet check, when it ran.
    pub delta: Option<[f64; 2]>,
    /// Periodic-solution dimension product from the monodromies.
    pub floquet_multiplicity: Option<u8>,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub lambda: f64,
    pub r_max: f64,
    pub eigenvalues: Vec<CoupledEigenvalue>,
    /// Modes with `min(μ², ν²) < 0` (and the zero mode) left out of the list.
    pub dropped: usize,
    /// Branch pairs whose root search did not converge.
    pub failed_cells: Vec<[usize; 2]>,
}

impl Spectrum {
    pub fn flagged(&self) -> usize {
        self.eigenvalues.iter().filter(|e| e.flagged).count()
    }

    /// Number of eigenvalues counted with multiplicity.
    pub fn total_multiplicity(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.multiplicity as usize).sum()
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Cross-check every eigenvalue with the Floquet discriminants.
    pub verify: bool,
    pub ode_rtol: f64,
    pub residual: f64,
    pub cluster: f64,
    /// Threshold on the scaled monodromy off-diagonals for a 2-dimensional
    /// periodic solution space.
    pub floquet_offdiag: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { verify: true, ode_rtol: 1e-12, residual: 1e-7, cluster: 1e-4, floquet_offdiag: 1e-7 }
    }
}

const SLOPE_SAFETY: f64 = 0.9;
const MAX_ITER: usize = 200;
const BRACKET_GROWTH: usize = 60;

fn extreme(p: &AngularProblem, f: impl Fn(&[f64; 3]) -> f64, min: bool) -> f64 {
    let vals = p.samples(1024).iter().map(&f).collect::<Vec<_>>();
    if min {
        vals.into_iter().fold(f64::INFINITY, f64::min)
    } else {
        vals.into_iter().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Lower bound on `dG/dμ²` for `G = μ²_k(ν²_j(μ²)) - μ²`.
fn slope_floor(p2: &AngularProblem, p3: &AngularProblem) -> Result<f64, AngularError> {
    // dν²/dμ² ≥ min(-s22/s23), dμ²/dν² ≥ min(-s33/s32)
    let a2 = extreme(p2, |r| -r[1] / r[2], true);
    let a3 = extreme(p3, |r| -r[2] / r[1], true);
    let g = a2 * a3 - 1.0;
    if !(g > 0.0) || !g.is_finite() {
        return Err(AngularError::Transversality(format!(
            "min(-s22/s23) * min(-s33/s32) = {} is not above 1",
            a2 * a3
        )));
    }
    Ok(SLOPE_SAFETY * g)
}

/// Fourier modes needed so that every branch with `|E| ≲ 2 r_max` is resolved.
fn mode_budget(p: &AngularProblem, r_max: f64) -> usize {
    let (t_entry, w_entry) = if p.row == 2 { (1, 2) } else { (2, 1) };
    let wmax = extreme(p, |r| r[w_entry].abs(), false);
    let pmax = extreme(p, |r| r[t_entry].abs(), false);
    let qmax = extreme(p, |r| r[0].abs(), false);
    let reach = 2.0 * r_max.abs() + 10.0;
    let kappa = std::f64::consts::TAU / p.period;
    let energy = wmax * reach + pmax * reach + p.coupling() * qmax;
    (energy.sqrt() / kappa).ceil() as usize + 2
}

#[derive(Clone, Copy, Debug)]
struct Root {
    mu_sq: f64,
    nu_sq: f64,
    converged: bool,
    truncated: bool,
    j: usize,
    k: usize,
}

struct Branches {
    row2: Pencil,
    row3: Pencil,
    slope: f64,
}

impl Branches {
    /// `(G, G', ν²)` at `μ² = t`, on the standard truncation or a refined one.
    fn eval(&self, t: f64, j: usize, k: usize, refine: bool) -> Option<(f64, f64, f64)> {
        let (e, de) = if refine { self.row2.eig_refined(t, j)? } else { self.row2.eig(t, j)? };
        let nu = -e;
        let (f, df) = if refine { self.row3.eig_refined(nu, k)? } else { self.row3.eig(nu, k)? };
        Some((-f - t, df * de - 1.0, nu))
    }

    fn root(&self, j: usize, k: usize, seed: f64) -> Option<Root> {
        let (g0, _, nu0) = self.eval(seed, j, k, false)?;
        let done = |t: f64, nu: f64, converged: bool| Root { mu_sq: t, nu_sq: nu, converged, truncated: false, j, k };
        if g0 == 0.0 {
            return Some(done(seed, nu0, true));
        }
        // G is increasing with slope at least `self.slope`
        let step = -g0 / self.slope;
        let (mut lo, mut hi) = if g0 < 0.0 { (seed, seed + step) } else { (seed + step, seed) };
        for _ in 0..BRACKET_GROWTH {
            let edge = if g0 < 0.0 { hi } else { lo };
            let (g, _, _) = self.eval(edge, j, k, false)?;
            if (g0 < 0.0) == (g < 0.0) {
                let w = 2.0 * (hi - lo);
                if g0 < 0.0 {
                    hi += w;
                } else {
                    lo -= w;
                }
            } else {
                break;
            }
        }
        let mut t = seed;
        let mut best = (g0.abs(), seed, nu0);
        for _ in 0..MAX_ITER {
            let (g, dg, nu) = self.eval(t, j, k, false)?;
            if g.abs() < best.0 {
                best = (g.abs(), t, nu);
            }
            if g.abs() <= 1e-13 * (1.0 + t.abs()) {
                return Some(done(t, nu, true));
            }
            if g < 0.0 {
                lo = lo.max(t);
            } else {
                hi = hi.min(t);
            }
            if hi - lo <= 4.0 * f64::EPSILON * (1.0 + t.abs()) {
                return Some(done(best.1, best.2, best.0 <= 1e-10 * (1.0 + t.abs())));
            }
            let newton = t - g / dg;
            t = if dg > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        }
        Some(done(best.1, best.2, best.0 <= 1e-10 * (1.0 + best.1.abs())))
    }

    fn check_truncation(&self, mut r: Root) -> Root {
        if self.row2.is_diagonal() && self.row3.is_diagonal() {
            return r;
        }
        let agrees = match self.eval(r.mu_sq, r.j, r.k, true) {
            Some((g, _, nu)) => g.abs() <= 1e-9 * (1.0 + r.mu_sq.abs()) && (nu - r.nu_sq).abs() <= 1e-9 * (1.0 + r.nu_sq.abs()),
            None => false,
        };
        r.truncated = !agrees;
        r
    }
}

fn outside(r: &Root, r_max: f64) -> bool {
    r.mu_sq > r_max || r.nu_sq > r_max || (r.mu_sq >= 0.0 && r.nu_sq >= 0.0 && r.mu_sq.hypot(r.nu_sq) > r_max)
}

/// Periodic-solution dimension of a monodromy: 2 when both off-diagonal
/// entries vanish (after scaling by the local frequency `scale`).
fn floquet_dim(m: &Mat2, scale: f64, tol: f64) -> u8 {
    if (m[0][1] * scale).abs() < tol && (m[1][0] / scale).abs() < tol {
        2
    } else {
        1
    }
}

/// All joint eigenvalues `(μ², ν²)` with `sqrt(μ⁴ + ν⁴) ≤ r_max`, ordered by
/// `μ²` then `ν²`.
///
/// Each row's equation is discretized as a Hermitian pencil in a Fourier
/// basis; branch `j` of `ν²(μ²)` and branch `k` of `μ²(ν²)` meet exactly
/// once, at the root of a strictly increasing function of `μ²`.
pub fn coupled_solve(s: &StackelMatrix, lambda: f64, r_max: f64, opts: &SolveOptions) -> Result<Spectrum, AngularError> {
    let p2 = AngularProblem::new(s, 2, lambda);
    let p3 = AngularProblem::new(s, 3, lambda);
    let slope = slope_floor(&p2, &p3)?;
    let row2 = Pencil::new(&p2, mode_budget(&p2, r_max) + Pencil::MARGIN);
    let row3 = Pencil::new(&p3, mode_budget(&p3, r_max) + Pencil::MARGIN);
    let branches = Branches { row2, row3, slope };
    let (j_limit, k_limit) = (branches.row2.index_limit(), branches.row3.index_limit());

    // first root of every ν² branch; they increase with j
    let mut firsts = Vec::new();
    let mut failed_cells = Vec::new();
    let mut seed = 0.0;
    for j in 0.. {
        if j > j_limit {
            return Err(AngularError::Basis { size: branches.row2.max_size(), index: j });
        }
        let r = branches.root(j, 0, seed).ok_or(AngularError::Basis { size: branches.row2.max_size(), index: j })?;
        if outside(&r, r_max) {
            break;
        }
        seed = r.mu_sq;
        firsts.push(r);
    }

    let rows: Vec<Result<(Vec<Root>, Vec<[usize; 2]>), AngularError>> = firsts
        .par_iter()
        .map(|first| {
            let mut out = vec![*first];
            let mut failed = Vec::new();
            let mut seed = first.mu_sq;
            for k in 1.. {
                if k > k_limit {
                    return Err(AngularError::Basis { size: branches.row3.max_size(), index: k });
                }
                let r = branches.root(first.j, k, seed).ok_or(AngularError::Basis { size: branches.row3.max_size(), index: k })?;
                if outside(&r, r_max) {
                    break;
                }
                seed = r.mu_sq;
                if !r.converged {
                    failed.push([r.j, r.k]);
                }
                out.push(r);
            }
            Ok((out, failed))
        })
        .collect();
    let mut roots = Vec::new();
    for (j, row) in rows.into_iter().enumerate() {
        let (r, f) = row?;
        if !firsts[j].converged {
            failed_cells.push([j, 0]);
        }
        roots.extend(r);
        failed_cells.extend(f);
    }
    let roots: Vec<Root> = roots.into_par_iter().map(|r| branches.check_truncation(r)).collect();

    let clusters = cluster(roots, opts.cluster);
    let mut dropped = 0;
    let mut kept = Vec::new();
    for c in clusters {
        let r = c[0];
        if r.mu_sq.min(r.nu_sq) < 0.0 || r.mu_sq.hypot(r.nu_sq) <= 1e-9 {
            dropped += 1;
            continue;
        }
        if r.mu_sq.hypot(r.nu_sq) > r_max {
            continue;
        }
        kept.push(c);
    }

    let mut eigenvalues: Vec<CoupledEigenvalue> = kept
        .par_iter()
        .map(|c| {
            let r = c[0];
            let count = c.len();
            let mut e = CoupledEigenvalue {
                m: 0,
                mu_sq: r.mu_sq,
                nu_sq: r.nu_sq,
                theta_sq: r.nu_sq / r.mu_sq,
                multiplicity: count.min(4) as u8,
                branch: [r.j, r.k],
                delta: None,
                floquet_multiplicity: None,
                flagged: count > 4 || c.iter().any(|r| !r.converged || r.truncated),
            };
            if opts.verify {
                match floquet_check(&p2, &p3, r.mu_sq, r.nu_sq, opts) {
                    Ok((delta, dim)) => {
                        e.flagged |= delta.iter().any(|d| !(d.abs() < opts.residual)) || dim as usize != count;
                        e.delta = Some(delta);
                        e.floquet_multiplicity = Some(dim);
                    }
                    Err(_) => e.flagged = true,
                }
            }
            e
        })
        .collect();
    eigenvalues.sort_by(|a, b| a.mu_sq.total_cmp(&b.mu_sq).then(a.nu_sq.total_cmp(&b.nu_sq)));
    for (i, e) in eigenvalues.iter_mut().enumerate() {
        e.m = i + 1;
    }
    failed_cells.sort_unstable();
    Ok(Spectrum { lambda, r_max, eigenvalues, dropped, failed_cells })
}

/// Groups roots that agree within `tol·(1 + |·|)` in both components.
fn cluster(mut roots: Vec<Root>, tol: f64) -> Vec<Vec<Root>> {
    roots.sort_by(|a, b| a.mu_sq.total_cmp(&b.mu_sq).then(a.nu_sq.total_cmp(&b.nu_sq)).then(a.j.cmp(&b.j)).then(a.k.cmp(&b.k)));
    let mut out: Vec<Vec<Root>> = Vec::new();
    for r in roots {
        let near = |c: &Vec<Root>| {
            let h = c[0];
            (h.mu_sq - r.mu_sq).abs() <= tol * (1.0 + h.mu_sq.abs()) && (h.nu_sq - r.nu_sq).abs() <= tol * (1.0 + h.nu_sq.abs())
        };
        // clusters are opened in μ² order, so only the recent ones can match
        let hit = out
            .iter_mut()
            .rev()
            .take_while(|c| r.mu_sq - c[0].mu_sq <= tol * (1.0 + c[0].mu_sq.abs()))
            .find(|c| near(c));
        match hit {
            Some(c) => c.push(r),
            None => out.push(vec![r]),
        }
    }
    for c in out.iter_mut() {
        c.sort_by_key(|r| (r.j, r.k));
    }
    out
}

/// `(Δ₂, Δ₃)` at the joint point and the product of periodic-solution dimensions.
pub fn floquet_check(
    p2: &AngularProblem,
    p3: &AngularProblem,
    mu_sq: f64,
    nu_sq: f64,
    opts: &SolveOptions,
) -> Result<([f64; 2], u8), AngularError> {
    let m2 = monodromy_of(&p2.x_form(mu_sq, nu_sq), opts.ode_rtol)?;
    let m3 = monodromy_of(&p3.x_form(mu_sq, nu_sq), opts.ode_rtol)?;
    let scale = (1.0 + mu_sq.abs() + nu_sq.abs()).sqrt();
    let dim = floquet_dim(&m2, scale, opts.floquet_offdiag) * floquet_dim(&m3, scale, opts.floquet_offdiag);
    Ok(([discriminant(&m2), discriminant(&m3)], dim))
}
