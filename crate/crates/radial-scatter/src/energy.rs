use std::f64::consts::PI;

use funcspace::special::gamma;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::RadialError;

/// `λ` with the factors `ω±(λ) = π / ((2λ sinh πλ)^{1/2} Γ(1 ∓ iλ))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyContext {
    pub lambda: f64,
    pub omega_plus: Complex64,
    pub omega_minus: Complex64,
}

impl EnergyContext {
    pub fn new(lambda: f64) -> Result<Self, RadialError> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(RadialError::Parameters(format!("energy parameter must be finite and nonzero, got {lambda}")));
        }
        // 2λ sinh(πλ) > 0 for either sign of λ
        let root = (2.0 * lambda * (PI * lambda).sinh()).sqrt();
        let omega = |sign: f64| Complex64::new(PI / root, 0.0) / gamma(Complex64::new(1.0, -sign * lambda));
        Ok(EnergyContext { lambda, omega_plus: omega(1.0), omega_minus: omega(-1.0) })
    }

    /// `2iλ ω₋ / ω₊`, the common factor of the scattering entries.
    pub fn kappa(&self) -> Complex64 {
        Complex64::new(0.0, 2.0 * self.lambda) * self.omega_minus / self.omega_plus
    }
}
