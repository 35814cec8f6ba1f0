//! Column normalization: sign pattern `s12, s13 > 0`, `s22 < 0 < s23`,
//! `s33 < 0 < s32` and unit limits of `s12`, `s13` at `x1 = 0`, reached through
//! constant column transforms only.

use std::f64::consts::{PI, TAU};

use crate::error::StackelError;
use crate::matrix::StackelMatrix;
use crate::metric::{angular_grid, metric, radial_grid};

pub type Mat2 = [[f64; 2]; 2];

pub const IDENTITY: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

const ANGULAR_SAMPLES: usize = 256;

pub fn mat_mul(a: Mat2, b: Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SignClass {
    Positive,
    Negative,
    /// Non-negative with at least one zero sample.
    TouchesPos,
    TouchesNeg,
    Zero,
}

impl SignClass {
    fn strict(self) -> bool {
        matches!(self, SignClass::Positive | SignClass::Negative)
    }
}

/// Column 2 and 3 samples of each row.
#[derive(Clone)]
struct Samples {
    rows: [Vec<[f64; 2]>; 3],
    /// `(s12, s13)` limits at `x1 = 0`.
    limit0: [f64; 2],
}

impl Samples {
    fn new(s: &StackelMatrix) -> Self {
        let take = |row: usize, xs: Vec<f64>| -> Vec<[f64; 2]> {
            xs.into_iter()
                .map(|x| {
                    let r = s.row(row, x);
                    [r[1], r[2]]
                })
                .collect()
        };
        let rows = [
            take(1, radial_grid(s.a)),
            take(2, angular_grid(s.b, ANGULAR_SAMPLES)),
            take(3, angular_grid(s.c, ANGULAR_SAMPLES)),
        ];
        let lim = |j: usize| {
            let f = s.entry(1, j);
            let v = f.value(0.0);
            if v.is_finite() {
                v
            } else {
                f.value(1e-10 * s.a)
            }
        };
        Samples { rows, limit0: [lim(2), lim(3)] }
    }

    fn transform(&self, g: Mat2) -> Self {
        let t = |v: [f64; 2]| [v[0] * g[0][0] + v[1] * g[1][0], v[0] * g[0][1] + v[1] * g[1][1]];
        Samples { rows: self.rows.clone().map(|r| r.into_iter().map(t).collect()), limit0: t(self.limit0) }
    }

    fn class(&self, row: usize, col: usize) -> Result<SignClass, StackelError> {
        let vals = self.rows[row].iter().map(|v| v[col]);
        let scale = self.rows[row].iter().map(|v| v[col].abs()).fold(0.0, f64::max);
        let floor = 1e-13 * scale.max(1e-300);
        let (mut pos, mut neg, mut zero) = (false, false, false);
        for v in vals {
            if v > floor {
                pos = true;
            } else if v < -floor {
                neg = true;
            } else {
                zero = true;
            }
        }
        Ok(match (pos, neg, zero) {
            (true, true, _) => return Err(StackelError::NotStackelRiemannian { row: row + 1, col: col + 2 }),
            (true, false, false) => SignClass::Positive,
            (false, true, false) => SignClass::Negative,
            (true, false, true) => SignClass::TouchesPos,
            (false, true, true) => SignClass::TouchesNeg,
            (false, false, _) => SignClass::Zero,
        })
    }

    fn classes(&self) -> Result<[[SignClass; 2]; 3], StackelError> {
        let mut out = [[SignClass::Zero; 2]; 3];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cls) in row.iter_mut().enumerate() {
                *cls = self.class(r, c)?;
            }
        }
        Ok(out)
    }

    /// `sup |s_ia / s_ib|` over the rows where `s_ib` is strictly signed.
    fn quotient_bound(&self, classes: &[[SignClass; 2]; 3], num: usize, den: usize) -> f64 {
        let mut m: f64 = 1.0;
        for (r, cls) in classes.iter().enumerate() {
            if cls[den].strict() {
                for v in &self.rows[r] {
                    m = m.max((v[num] / v[den]).abs());
                }
            }
        }
        m
    }

    /// Column direction `g` with `t_i (s_i2, s_i3) · g > 0` for all samples,
    /// chosen at the middle of the admissible arc.
    fn separating_direction(&self, targets: [f64; 3]) -> Option<[f64; 2]> {
        let mut angles: Vec<f64> = Vec::new();
        for (r, t) in targets.iter().enumerate() {
            for v in &self.rows[r] {
                angles.push((t * v[1]).atan2(t * v[0]).rem_euclid(TAU));
            }
        }
        angles.sort_by(f64::total_cmp);
        // largest gap between consecutive normal directions, wrapping around
        let n = angles.len();
        let (mut gap, mut at) = (angles[0] + TAU - angles[n - 1], n - 1);
        for k in 0..n - 1 {
            let d = angles[k + 1] - angles[k];
            if d > gap {
                gap = d;
                at = k;
            }
        }
        if gap <= PI + 1e-12 {
            return None;
        }
        // occupied arc runs from angles[at + 1] to angles[at] (mod 2π)
        let start = angles[(at + 1) % n];
        let width = TAU - gap;
        let mid = start + 0.5 * width;
        Some([mid.cos(), mid.sin()])
    }

    fn satisfies(&self, col: usize, targets: [f64; 3]) -> bool {
        self.rows.iter().zip(targets).all(|(r, t)| r.iter().all(|v| t * v[col] > 0.0))
    }
}

const COL2: [f64; 3] = [1.0, -1.0, 1.0];
const COL3: [f64; 3] = [1.0, 1.0, -1.0];

/// Find the column transform reaching the normalized sign pattern and unit
/// limits. Returns the transformed matrix and the accumulated `G`.
pub fn gauge_normalize(s: &StackelMatrix) -> Result<(StackelMatrix, Mat2), StackelError> {
    let mut g_total = IDENTITY;
    let mut samples = Samples::new(s);

    // riemannian sign -1: flipping one column flips every first-column minor
    let m = s.minors_at([0.5 * s.a, 0.0, 0.0]);
    if m.det < 0.0 {
        let flip = [[1.0, 0.0], [0.0, -1.0]];
        samples = samples.transform(flip);
        g_total = mat_mul(g_total, flip);
    }

    // A coefficient changing sign is left to the separating-direction step,
    // which fails (and reports it) only when no column transform exists.
    let class_error = samples.classes().err();
    if let Err(e) = metric(s) {
        return Err(class_error.unwrap_or(e));
    }
    if let Some(classes) = samples.classes().ok().filter(|c| c.iter().flatten().any(|c| !c.strict())) {
        let a = 2.0 * samples.quotient_bound(&classes, 1, 0);
        let b = 2.0 * samples.quotient_bound(&classes, 0, 1);
        let mut found = None;
        for (sigma, tau) in [(1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)] {
            let g = [[a, sigma], [tau, b]];
            if (a * b - sigma * tau).abs() < 1e-12 {
                continue;
            }
            let t = samples.transform(g);
            if t.classes().map(|c| c.iter().flatten().all(|c| c.strict())).unwrap_or(false) {
                found = Some((g, t));
                break;
            }
        }
        let (g, t) = found.ok_or_else(|| {
            StackelError::Normalization("no strictly signed columns reachable from vanishing coefficients".into())
        })?;
        samples = t;
        g_total = mat_mul(g_total, g);
    }

    let col = |c: usize, targets: [f64; 3]| -> Result<[f64; 2], StackelError> {
        if samples.satisfies(c, targets) {
            let mut e = [0.0; 2];
            e[c] = 1.0;
            return Ok(e);
        }
        samples.separating_direction(targets).ok_or_else(|| {
            class_error
                .clone()
                .unwrap_or_else(|| StackelError::Normalization(format!("column {} quotients are not separable", c + 2)))
        })
    };
    let (g2, g3) = (col(0, COL2)?, col(1, COL3)?);
    let g = [[g2[0], g3[0]], [g2[1], g3[1]]];
    if (g[0][0] * g[1][1] - g[0][1] * g[1][0]).abs() < 1e-12 {
        return Err(StackelError::Normalization("column directions are parallel".into()));
    }
    if g != IDENTITY {
        samples = samples.transform(g);
        g_total = mat_mul(g_total, g);
    }
    if !(samples.satisfies(0, COL2) && samples.satisfies(1, COL3)) {
        return Err(StackelError::Normalization("sign pattern not reached".into()));
    }

    let [alpha, beta] = samples.limit0;
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(StackelError::Normalization(format!("limits at x1 = 0 are ({alpha}, {beta})")));
    }
    let unit = |v: f64| if (v - 1.0).abs() <= 1e-14 { 1.0 } else { 1.0 / v };
    let d = [[unit(alpha), 0.0], [0.0, unit(beta)]];
    g_total = mat_mul(g_total, d);

    if g_total == IDENTITY {
        return Ok((s.clone(), g_total));
    }
    Ok((s.apply_column_invariance(g_total)?, g_total))
}

/// Check the sign pattern and limits on the validation grids.
pub fn satisfies_normal_form(s: &StackelMatrix, tol: f64) -> bool {
    let samples = Samples::new(s);
    samples.satisfies(0, COL2)
        && samples.satisfies(1, COL3)
        && (samples.limit0[0] - 1.0).abs() <= tol
        && (samples.limit0[1] - 1.0).abs() <= tol
}
