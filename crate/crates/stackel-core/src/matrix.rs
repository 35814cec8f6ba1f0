use funcspace::{Scalar, SmoothFn1D};
use serde::{Deserialize, Serialize};

use crate::error::StackelError;

/// Row `i` holds functions of the single coordinate `x^i`: row 1 lives on the
/// radial interval `(0, A)`, rows 2 and 3 are periodic with periods `B`, `C`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StackelMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    rows: [[SmoothFn1D; 3]; 3],
}

/// First-column cofactors and determinant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minors<T> {
    pub m11: T,
    pub m21: T,
    pub m31: T,
    pub det: T,
}

pub fn minors<T: Scalar>(r1: [T; 3], r2: [T; 3], r3: [T; 3]) -> Minors<T> {
    let m11 = r2[1] * r3[2] - r2[2] * r3[1];
    let m21 = r1[2] * r3[1] - r1[1] * r3[2];
    let m31 = r1[1] * r2[2] - r1[2] * r2[1];
    let det = r1[0] * m11 + r2[0] * m21 + r3[0] * m31;
    Minors { m11, m21, m31, det }
}

impl<T: Scalar> Minors<T> {
    pub fn h_sq(&self) -> [T; 3] {
        [self.det / self.m11, self.det / self.m21, self.det / self.m31]
    }
    /// `s^11 s^21 s^31 / det`
    pub fn robertson(&self) -> T {
        self.m11 * self.m21 * self.m31 / self.det
    }
}

impl StackelMatrix {
    pub fn new(rows: [[SmoothFn1D; 3]; 3], a: f64, b: f64, c: f64) -> Result<Self, StackelError> {
        if !(a > 0.0 && b > 0.0 && c > 0.0) || !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(StackelError::Invalid(format!("domain sizes must be positive, got A={a}, B={b}, C={c}")));
        }
        let [r1, r2, r3] = rows;
        let r1 = r1.map(|f| f.with_period(None));
        let r2 = r2.map(|f| f.with_period(Some(b)));
        let r3 = r3.map(|f| f.with_period(Some(c)));
        for f in r1.iter() {
            let (lo, hi) = f.domain();
            if lo > 0.0 || hi < a {
                return Err(StackelError::Invalid(format!("row 1 entry domain [{lo}, {hi}] does not cover (0, {a})")));
            }
        }
        Ok(StackelMatrix { a, b, c, rows: [r1, r2, r3] })
    }

    pub fn rows(&self) -> &[[SmoothFn1D; 3]; 3] {
        &self.rows
    }

    /// Entry `s_{ij}` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> &SmoothFn1D {
        &self.rows[i - 1][j - 1]
    }

    pub fn period(&self, row: usize) -> f64 {
        match row {
            1 => self.a,
            2 => self.b,
            _ => self.c,
        }
    }

    /// Row `i` (1-based) at `x`.
    #[inline]
    pub fn row(&self, i: usize, x: f64) -> [f64; 3] {
        let r = &self.rows[i - 1];
        [r[0].value(x), r[1].value(x), r[2].value(x)]
    }

    pub fn row_generic<T: Scalar>(&self, i: usize, x: T) -> [T; 3] {
        let r = &self.rows[i - 1];
        [r[0].eval_generic(x), r[1].eval_generic(x), r[2].eval_generic(x)]
    }

    pub fn minors_at(&self, x: [f64; 3]) -> Minors<f64> {
        minors(self.row(1, x[0]), self.row(2, x[1]), self.row(3, x[2]))
    }

    pub fn h_sq(&self, x: [f64; 3]) -> [f64; 3] {
        self.minors_at(x).h_sq()
    }

    /// Worst seam mismatch of the angular rows (value and slope).
    pub fn periodicity_defect(&self) -> [f64; 2] {
        let worst = |row: &[SmoothFn1D; 3]| row.iter().filter_map(|f| f.seam_mismatch()).fold(0.0, f64::max);
        [worst(&self.rows[1]), worst(&self.rows[2])]
    }

    pub fn check_periodic(&self, tol: f64) -> Result<(), StackelError> {
        let d = self.periodicity_defect();
        for (k, m) in d.iter().enumerate() {
            let scale = self.rows[k + 1].iter().map(|f| f.value(0.0).abs()).fold(1.0, f64::max);
            if *m > tol * scale {
                return Err(StackelError::NotPeriodic { row: k + 2, mismatch: *m });
            }
        }
        Ok(())
    }

    /// Columns 2 and 3 right-multiplied by `g` (row-major 2×2).
    pub fn apply_column_invariance(&self, g: [[f64; 2]; 2]) -> Result<Self, StackelError> {
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let scale = g.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        if !det.is_finite() || det.abs() <= 1e-14 * scale * scale {
            return Err(StackelError::InvalidGauge(format!("singular column transform, det = {det:e}")));
        }
        let mut out = self.clone();
        for (i, row) in self.rows.iter().enumerate() {
            out.rows[i][1] = combine(&row[1], g[0][0], &row[2], g[1][0]);
            out.rows[i][2] = combine(&row[1], g[0][1], &row[2], g[1][1]);
        }
        Ok(out)
    }

    /// `s_{i1} += c1 s_{i2} + c2 s_{i3}` on every row.
    pub fn apply_first_column_shift(&self, c1: f64, c2: f64) -> Self {
        let mut out = self.clone();
        for (i, row) in self.rows.iter().enumerate() {
            let shift = combine(&row[1], c1, &row[2], c2);
            out.rows[i][0] = if shift.as_const() == Some(0.0) { row[0].clone() } else { row[0].add(&shift) };
        }
        out
    }

    /// Multiply row `i` by a positive function of its own variable.
    pub fn scale_row(&self, i: usize, f: &SmoothFn1D) -> Self {
        let mut out = self.clone();
        out.rows[i - 1] = self.rows[i - 1].clone().map(|e| e.mul(f));
        out
    }

    pub fn divide_row(&self, i: usize, f: &SmoothFn1D) -> Self {
        let mut out = self.clone();
        out.rows[i - 1] = self.rows[i - 1].clone().map(|e| e.div(f));
        out
    }

    pub fn replace_entry(&self, i: usize, j: usize, f: SmoothFn1D) -> Self {
        let mut out = self.clone();
        let period = out.rows[i - 1][j - 1].period();
        out.rows[i - 1][j - 1] = f.with_period(period);
        out
    }
}

/// `a*f + b*g`, skipping zero coefficients so constant trees stay small.
fn combine(f: &SmoothFn1D, a: f64, g: &SmoothFn1D, b: f64) -> SmoothFn1D {
    let period = f.period().or(g.period());
    let out = match (a == 0.0, b == 0.0) {
        (true, true) => SmoothFn1D::constant(0.0, f.domain().0, f.domain().1),
        (false, true) => {
            if a == 1.0 {
                f.clone()
            } else {
                f.scale(a)
            }
        }
        (true, false) => {
            if b == 1.0 {
                g.clone()
            } else {
                g.scale(b)
            }
        }
        _ => f.lin(a, g, b),
    };
    out.with_period(period)
}

#[cfg(test)]
mod tests {
    use super::*;
    use funcspace::Expr;

    #[test]
    fn cofactor_example() {
        let a = 1.0;
        let rows = [
            [
                SmoothFn1D::from_expr(Expr::x().powi(-2), 0.0, a),
                SmoothFn1D::constant(1.0, 0.0, a),
                SmoothFn1D::constant(1.0, 0.0, a),
            ],
            [SmoothFn1D::constant(0.0, 0.0, 1.0), SmoothFn1D::constant(-0.75, 0.0, 1.0), SmoothFn1D::constant(0.25, 0.0, 1.0)],
            [SmoothFn1D::constant(0.0, 0.0, 1.0), SmoothFn1D::constant(0.25, 0.0, 1.0), SmoothFn1D::constant(-0.75, 0.0, 1.0)],
        ];
        let s = StackelMatrix::new(rows, a, 1.0, 1.0).unwrap();
        let m = s.minors_at([0.5, 0.1, 0.2]);
        assert_eq!((m.m11, m.m21, m.m31), (0.5, 1.0, 1.0));
        assert!((m.det - 2.0).abs() < 1e-15);
        let h = m.h_sq();
        assert!((h[0] - 4.0).abs() < 1e-15 && (h[1] - 2.0).abs() < 1e-15 && (h[2] - 2.0).abs() < 1e-15);
    }
}
