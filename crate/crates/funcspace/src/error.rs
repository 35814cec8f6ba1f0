use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuncError {
    #[error("point {x} outside domain [{lo}, {hi}]")]
    Domain { x: f64, lo: f64, hi: f64 },
    #[error("weight not positive at x = {x} (value {value})")]
    Positivity { x: f64, value: f64 },
    #[error("derivative order {0} not supported (max 2)")]
    Order(usize),
    #[error("invalid spline table: {0}")]
    Table(String),
    #[error("chart inverse failed to converge at X = {0}")]
    Inverse(f64),
}
