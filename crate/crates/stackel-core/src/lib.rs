//! Stäckel matrices on a toric cylinder `(0, A) × T²`: the separable metric
//! they define, the constant column transforms that leave it unchanged,
//! normalization of the column signs, separability of the Helmholtz equation
//! and decay checks at the two radial ends.

pub mod ah;
pub mod error;
pub mod matrix;
pub mod metric;
pub mod normalize;
pub mod presets;
pub mod robertson;
pub mod tolerances;

pub use ah::{check_ah_ends, AHEndReport, End};
pub use error::StackelError;
pub use matrix::{minors, Minors, StackelMatrix};
pub use metric::{metric, MetricData};
pub use normalize::{gauge_normalize, satisfies_normal_form, Mat2};
pub use presets::{tabulated, EntrySpec, Preset};
pub use robertson::{check_robertson, normalize_angular_gauge, RobertsonFactors};
pub use tolerances::Tolerances;
