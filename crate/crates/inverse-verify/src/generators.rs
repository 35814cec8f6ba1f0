//! Constructions of test pairs: gauge-equivalent copies and small
//! radial perturbations.

use std::f64::consts::PI;

use funcspace::{Expr, SmoothFn1D};
use stackel_core::{StackelMatrix, StackelError};

/// `S̃` with `S_block = S̃_block G(c)` and `s_i1 = s̃_i1 - C1 s_i3 - C2 s_i2`,
/// so that angular recovery on `(S, S̃)` returns `c` and `(C1, C2)`.
pub fn gauge_pair(s: &StackelMatrix, c: f64, shifts: [f64; 2]) -> Result<StackelMatrix, StackelError> {
    let shifted = s.apply_first_column_shift(shifts[1], shifts[0]);
    if c == 0.0 {
        return Ok(shifted);
    }
    shifted.apply_column_invariance([[1.0 + c, c], [-c, 1.0 - c]])
}

/// Row 1 pulled back along `φ(y) = y + a (A/π) sin³(πy/A)` and scaled by
/// `φ'²`, a radial change of variable fixing both ends to second order.
/// `φ` is increasing for `|a| < 0.27`.
pub fn reparametrize_radial(s: &StackelMatrix, a: f64) -> Result<StackelMatrix, StackelError> {
    if !(a.abs() < 0.27) {
        return Err(StackelError::Invalid(format!("reparametrization amplitude {a} is not below 0.27")));
    }
    let len = s.a;
    let k = PI / len;
    let arg = Expr::c(k) * Expr::x();
    let phi = Expr::x() + Expr::c(a / k) * arg.clone().sin().powi(3);
    let dphi = Expr::c(1.0) + Expr::c(3.0 * a) * arg.clone().sin().powi(2) * arg.cos();
    let phi = SmoothFn1D::from_expr(phi, 0.0, len);
    let jac = SmoothFn1D::from_expr(dphi.powi(2), 0.0, len);
    let mut out = s.clone();
    for j in 1..=3 {
        out = out.replace_entry(1, j, s.entry(1, j).compose(&phi).mul(&jac));
    }
    Ok(out)
}

/// `s11` multiplied by `1 + amp exp(-((x - A/2)/(A/10))²)`.
pub fn perturb_s11(s: &StackelMatrix, amp: f64) -> StackelMatrix {
    let len = s.a;
    let t = (Expr::x() - Expr::c(0.5 * len)) * Expr::c(10.0 / len);
    let bump = Expr::c(1.0) + Expr::c(amp) * (-(t.clone() * t)).exp();
    let bump = SmoothFn1D::from_expr(bump, 0.0, len);
    s.replace_entry(1, 1, s.entry(1, 1).mul(&bump))
}
