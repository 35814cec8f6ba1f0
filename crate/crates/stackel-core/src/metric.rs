use crate::error::StackelError;
use crate::matrix::{minors, Minors, StackelMatrix};

pub const RADIAL_POINTS: usize = 64;
pub const ANGULAR_POINTS: usize = 32;
const INNERMOST: f64 = 1e-6;

/// 32 points geometric from `A/2` toward each end (innermost `1e-6 A`), sorted.
pub fn radial_grid(a: f64) -> Vec<f64> {
    let half = RADIAL_POINTS / 2;
    let ratio = (2.0 * INNERMOST).powf(1.0 / (half - 1) as f64);
    let mut g: Vec<f64> = (0..half)
        .flat_map(|k| {
            let d = 0.5 * a * ratio.powi(k as i32);
            [d, a - d]
        })
        .collect();
    g.sort_by(f64::total_cmp);
    g
}

pub fn angular_grid(period: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| period * i as f64 / n as f64).collect()
}

/// Row values sampled once per coordinate on the validation grids.
pub struct GridSamples {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub x3: Vec<f64>,
    pub r1: Vec<[f64; 3]>,
    pub r2: Vec<[f64; 3]>,
    pub r3: Vec<[f64; 3]>,
}

impl GridSamples {
    pub fn new(s: &StackelMatrix, x1: Vec<f64>, n_ang: usize) -> Self {
        let x2 = angular_grid(s.b, n_ang);
        let x3 = angular_grid(s.c, n_ang);
        let r1 = x1.iter().map(|&x| s.row(1, x)).collect();
        let r2 = x2.iter().map(|&x| s.row(2, x)).collect();
        let r3 = x3.iter().map(|&x| s.row(3, x)).collect();
        GridSamples { x1, x2, x3, r1, r2, r3 }
    }

    pub fn standard(s: &StackelMatrix) -> Self {
        Self::new(s, radial_grid(s.a), ANGULAR_POINTS)
    }

    pub fn for_each(&self, mut f: impl FnMut([usize; 3], Minors<f64>)) {
        for (i, r1) in self.r1.iter().enumerate() {
            for (j, r2) in self.r2.iter().enumerate() {
                for (k, r3) in self.r3.iter().enumerate() {
                    f([i, j, k], minors(*r1, *r2, *r3));
                }
            }
        }
    }
}

/// Metric evaluators backed by the matrix plus the grid validation summary.
#[derive(Clone, Debug)]
pub struct MetricData {
    matrix: StackelMatrix,
    /// Common sign of `det` and the three first-column minors (+1 or -1).
    pub sign: f64,
    pub min_h_sq: [f64; 3],
    pub cofactor_residual: f64,
}

impl MetricData {
    pub fn h_sq(&self, x: [f64; 3]) -> [f64; 3] {
        self.matrix.h_sq(x)
    }
    pub fn det(&self, x: [f64; 3]) -> f64 {
        self.matrix.minors_at(x).det
    }
    pub fn minors(&self, x: [f64; 3]) -> [f64; 3] {
        let m = self.matrix.minors_at(x);
        [m.m11, m.m21, m.m31]
    }
    pub fn matrix(&self) -> &StackelMatrix {
        &self.matrix
    }
}

/// Validate the riemannian sign condition and the cofactor identity on the
/// standard grid.
pub fn metric(s: &StackelMatrix) -> Result<MetricData, StackelError> {
    let g = GridSamples::standard(s);
    let mut sign = 0.0;
    let mut fail = None;
    let mut min_h = [f64::INFINITY; 3];
    let mut cof: f64 = 0.0;
    g.for_each(|[i, j, k], m| {
        if fail.is_some() {
            return;
        }
        let vals = [m.det, m.m11, m.m21, m.m31];
        if sign == 0.0 {
            sign = m.det.signum();
        }
        if vals.iter().any(|v| !(v * sign > 0.0) || !v.is_finite()) {
            fail = Some(([g.x1[i], g.x2[j], g.x3[k]], m));
            return;
        }
        for (mh, h) in min_h.iter_mut().zip(m.h_sq()) {
            *mh = mh.min(h);
        }
        // expansion along the first row
        let (r1, r2, r3) = (g.r1[i], g.r2[j], g.r3[k]);
        let c12 = r2[2] * r3[0] - r2[0] * r3[2];
        let c13 = r2[0] * r3[1] - r2[1] * r3[0];
        let by_row = r1[0] * m.m11 + r1[1] * c12 + r1[2] * c13;
        let scale = (r1[0] * m.m11).abs() + (r1[1] * c12).abs() + (r1[2] * c13).abs();
        cof = cof.max((by_row - m.det).abs() / scale.max(1e-300));
    });
    if let Some((x, m)) = fail {
        return Err(StackelError::NonRiemannian { x1: x[0], x2: x[1], x3: x[2], det: m.det, minors: [m.m11, m.m21, m.m31] });
    }
    if cof > 1e-10 {
        return Err(StackelError::Invalid(format!("cofactor identity residual {cof:e}")));
    }
    Ok(MetricData { matrix: s.clone(), sign, min_h_sq: min_h, cofactor_residual: cof })
}
