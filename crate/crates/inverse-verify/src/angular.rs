use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use stackel_core::{Mat2, StackelMatrix, Tolerances};

use crate::error::VerifyError;

const GRID: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngularRecovery {
    pub s11_match: bool,
    /// Largest relative difference of the cofactor `s^11 = s22 s33 - s23 s32`.
    pub s11_residual: f64,
    /// `c` with `s22 - s̃22 = c = s̃33 - s33`.
    pub c: f64,
    /// Largest deviation of those differences from `c`.
    pub constancy_residual: f64,
    /// `G = [[1-c, -c], [c, 1+c]]`, with the angular block of `S` equal to `S̃ G`.
    pub block_gauge: Mat2,
    /// `(C1, C2)` with `s21 = s̃21 - C1 s23 - C2 s22`, same for row 3.
    pub shifts: [f64; 2],
    /// Fit residual of the shifts on row 2 and row 3 separately.
    pub shift_residual: [f64; 2],
    /// Largest entry difference of rows 2 and 3 after undoing `G` and the shifts.
    pub aligned_residual: f64,
    pub passed: bool,
}

fn grid(period: f64) -> Vec<f64> {
    (0..GRID).map(|i| period * i as f64 / GRID as f64).collect()
}

fn undo(st: &StackelMatrix, c: f64, shifts: [f64; 2]) -> Result<StackelMatrix, VerifyError> {
    let g = [[1.0 - c, -c], [c, 1.0 + c]];
    let mut out = if c == 0.0 { st.clone() } else { st.apply_column_invariance(g)? };
    if shifts != [0.0, 0.0] {
        out = out.apply_first_column_shift(-shifts[1], -shifts[0]);
    }
    Ok(out)
}

/// Angular data of two normalized matrices: cofactor equality, the block
/// gauge `c` and the first-column shifts. On success also returns `S̃`
/// with both invariances undone, so that its angular rows equal those of `S`.
pub fn angular_recover(
    s: &StackelMatrix,
    st: &StackelMatrix,
    tol: &Tolerances,
) -> Result<(AngularRecovery, Option<StackelMatrix>), VerifyError> {
    let (g2, g3) = (grid(s.b), grid(s.c));
    let (gt2, gt3) = (grid(st.b), grid(st.c));
    let rows = |m: &StackelMatrix, row: usize, xs: &[f64]| xs.iter().map(|&x| m.row(row, x)).collect::<Vec<_>>();
    let (a2, a3) = (rows(s, 2, &g2), rows(s, 3, &g3));
    let (b2, b3) = (rows(st, 2, &gt2), rows(st, 3, &gt3));

    let mut scale: f64 = 0.0;
    let mut s11_residual: f64 = 0.0;
    for (r2, t2) in a2.iter().zip(&b2) {
        for (r3, t3) in a3.iter().zip(&b3) {
            let m = r2[1] * r3[2] - r2[2] * r3[1];
            let mt = t2[1] * t3[2] - t2[2] * t3[1];
            scale = scale.max(m.abs());
            s11_residual = s11_residual.max((m - mt).abs());
        }
    }
    s11_residual /= scale.max(f64::MIN_POSITIVE);
    let periods_match = (s.b - st.b).abs() <= tol.structural * s.b && (s.c - st.c).abs() <= tol.structural * s.c;
    let s11_match = periods_match && s11_residual <= tol.structural;

    let diffs: Vec<f64> = a2
        .iter()
        .zip(&b2)
        .map(|(r, t)| r[1] - t[1])
        .chain(a3.iter().zip(&b3).map(|(r, t)| t[2] - r[2]))
        .collect();
    let c = diffs.iter().sum::<f64>() / diffs.len() as f64;
    let constancy_residual = diffs.iter().map(|d| (d - c).abs()).fold(0.0, f64::max);
    let block_gauge = [[1.0 - c, -c], [c, 1.0 + c]];
    let mut report = AngularRecovery {
        s11_match,
        s11_residual,
        c,
        constancy_residual,
        block_gauge,
        shifts: [0.0; 2],
        shift_residual: [f64::NAN; 2],
        aligned_residual: f64::NAN,
        passed: false,
    };
    if !s11_match || constancy_residual > tol.structural {
        return Ok((report, None));
    }

    // s̃_i1 - s_i1 = C1 s_i3 + C2 s_i2 on both rows at once: constant rows
    // leave row 2 alone rank deficient
    let aligned = undo(st, c, [0.0, 0.0])?;
    let (c2, c3) = (rows(&aligned, 2, &g2), rows(&aligned, 3, &g3));
    let lhs: Vec<[f64; 2]> = a2.iter().chain(&a3).map(|r| [r[2], r[1]]).collect();
    let rhs: Vec<f64> = c2.iter().zip(&a2).chain(c3.iter().zip(&a3)).map(|(t, r)| t[0] - r[0]).collect();
    let mut shifts = [0.0; 2];
    if rhs.iter().any(|v| *v != 0.0) {
        let a = DMatrix::from_fn(lhs.len(), 2, |i, j| lhs[i][j]);
        let sol = a
            .svd(true, true)
            .solve(&DVector::from_vec(rhs.clone()), 1e-13)
            .map_err(|e| VerifyError::Insufficient(format!("shift fit: {e}")))?;
        shifts = [sol[0], sol[1]];
    }
    let fit = |k: usize| lhs[k][0] * shifts[0] + lhs[k][1] * shifts[1] - rhs[k];
    report.shifts = shifts;
    report.shift_residual = [
        (0..GRID).map(|k| fit(k).abs()).fold(0.0, f64::max),
        (GRID..2 * GRID).map(|k| fit(k).abs()).fold(0.0, f64::max),
    ];

    let aligned = undo(st, c, shifts)?;
    let mut res: f64 = 0.0;
    for (row, xs) in [(2, &g2), (3, &g3)] {
        for &x in xs.iter() {
            let (r, t) = (s.row(row, x), aligned.row(row, x));
            for j in 0..3 {
                res = res.max((r[j] - t[j]).abs() / (1.0 + r[j].abs()));
            }
        }
    }
    report.aligned_residual = res;
    report.passed = res <= tol.structural;
    Ok((report, Some(aligned)))
}
