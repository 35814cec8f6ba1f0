use serde::{Deserialize, Serialize};

/// Every numerical threshold used across the pipeline, overridable from config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub quad: f64,
    pub inverse: f64,
    pub periodic: f64,
    pub robertson: f64,
    pub structural: f64,
    pub spectral: f64,
    pub scattering: f64,
    pub sensitivity: f64,
    pub pole: f64,
    pub unitarity: f64,
    pub wronskian: f64,
    pub ladder: f64,
    pub ode_rtol: f64,
    pub angular_residual: f64,
    pub cluster: f64,
    pub ah_bound: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quad: 1e-12,
            inverse: 1e-10,
            periodic: 1e-8,
            robertson: 1e-8,
            structural: 1e-8,
            spectral: 1e-6,
            scattering: 1e-6,
            sensitivity: 1e-3,
            pole: 1e-8,
            unitarity: 1e-6,
            wronskian: 1e-8,
            ladder: 1e-7,
            ode_rtol: 1e-12,
            angular_residual: 1e-7,
            cluster: 1e-4,
            ah_bound: 10.0,
        }
    }
}
