//! Transfer matrices of first-order systems `y' = a(x) p`, `p' = b(x) y` over one period.

use funcspace::ode::{integrate, OdeOptions};

use crate::error::AngularError;

pub type Mat2 = [[f64; 2]; 2];

pub trait Hill {
    fn length(&self) -> f64;
    /// `(a, b)` at `x`.
    fn coeffs(&self, x: f64) -> (f64, f64);
}

/// `-y'' + q y = energy y` on `[0, length]`.
pub struct Schrodinger<F: Fn(f64) -> f64> {
    pub q: F,
    pub energy: f64,
    pub length: f64,
}

impl<F: Fn(f64) -> f64> Hill for Schrodinger<F> {
    fn length(&self) -> f64 {
        self.length
    }
    fn coeffs(&self, x: f64) -> (f64, f64) {
        (1.0, (self.q)(x) - self.energy)
    }
}

/// Fundamental matrix `[[C(x), S(x)], [C'(x), S'(x)]]` at every point of `at`,
/// with `C(0) = 1, C'(0) = 0, S(0) = 0, S'(0) = 1`.
pub fn transfer_path<H: Hill + ?Sized>(h: &H, at: &[f64], rtol: f64) -> Result<Vec<Mat2>, AngularError> {
    let rhs = |x: f64, s: &[f64; 4]| {
        let (a, b) = h.coeffs(x);
        [a * s[1], b * s[0], a * s[3], b * s[2]]
    };
    let out = integrate(rhs, 0.0, [1.0, 0.0, 0.0, 1.0], at, &OdeOptions::tight(rtol))?;
    Ok(out.into_iter().map(|s| [[s[0], s[2]], [s[1], s[3]]]).collect())
}

pub fn monodromy_of<H: Hill + ?Sized>(h: &H, rtol: f64) -> Result<Mat2, AngularError> {
    Ok(transfer_path(h, &[h.length()], rtol)?[0])
}

/// `2 - trace`: zero exactly when a periodic solution exists.
pub fn discriminant(m: &Mat2) -> f64 {
    2.0 - m[0][0] - m[1][1]
}

pub fn det(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Largest deviation of the Wronskian from 1 at 16 interior points and the end.
pub fn wronskian_drift<H: Hill + ?Sized>(h: &H, rtol: f64) -> Result<f64, AngularError> {
    let l = h.length();
    let at: Vec<f64> = (1..=17).map(|k| l * k as f64 / 17.0).collect();
    Ok(transfer_path(h, &at, rtol)?.iter().map(|m| (det(m) - 1.0).abs()).fold(0.0, f64::max))
}
