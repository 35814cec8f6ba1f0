//! Closed-form solutions of the pure inverse-square problem
//! `-U'' - (λ² + ¼)/X² U + ω² U = 0`, used as reference values.

use num_complex::Complex64;

use crate::error::RadialError;
use crate::fss::PairState;
use crate::potential::RadialPotential;

const MAX_TERMS: usize = 500;

/// `X^s Σ (ω² X²/4)^k / (k! Π_{j≤k} (j + s - ½))` and its derivative.
///
/// With `s = ½ - iλ` this is `Γ(1-iλ)(ω/2)^{iλ} √X I_{-iλ}(ωX)`.
fn series(s: Complex64, omega_sq: Complex64, x: f64) -> (Complex64, Complex64) {
    let z = omega_sq * (0.25 * x * x);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = s * term;
    for k in 1..MAX_TERMS {
        term = term * z / (k as f64 * (k as f64 + s - 0.5));
        sum += term;
        dsum += term * (s + 2.0 * k as f64);
        if term.norm() <= 1e-18 * sum.norm() && k as f64 > z.norm().sqrt() {
            break;
        }
    }
    let p = Complex64::new(x, 0.0).powc(s);
    (p * sum, p * dsum / x)
}

/// `[S₁₀, Ṡ₁₀, S₂₀, Ṡ₂₀]` at `x` for the pure left end.
pub fn bessel_pair(lambda: f64, omega_sq: Complex64, x: f64) -> PairState {
    let i_lam = Complex64::new(0.0, lambda);
    let (a, da) = series(0.5 - i_lam, omega_sq, x);
    let (b, db) = series(0.5 + i_lam, omega_sq, x);
    let k = 1.0 / (2.0 * i_lam);
    [a, da, b * k, db * k]
}

/// Potential `-(λ² + ¼)/d² + ν² + μ²` with `d` the distance to the nearer
/// end of `(0, 2 half)`: each half is the pure end, glued at the midpoint.
pub fn mirrored_bessel(lambda: f64, half: f64, mu_sq: Complex64, nu_sq: f64) -> Result<RadialPotential, RadialError> {
    let strength = lambda * lambda + 0.25;
    let len = 2.0 * half;
    RadialPotential::from_profile(len, lambda, mu_sq, move |x| {
        let d = x.min(len - x);
        Complex64::new(nu_sq - strength / (d * d), 0.0)
    })
}

/// `(Δ, δ)` of [`mirrored_bessel`]: by symmetry `S₁₁(X) = S₁₀(2h - X)`, so
/// at the midpoint `Δ = 2 S₁₀ Ṡ₁₀` and `δ = S₁₀ Ṡ₂₀ + Ṡ₁₀ S₂₀`.
pub fn mirrored_characteristic(lambda: f64, half: f64, omega_sq: Complex64) -> (Complex64, Complex64) {
    let [a, da, b, db] = bessel_pair(lambda, omega_sq, half);
    (2.0 * a * da, a * db + da * b)
}
