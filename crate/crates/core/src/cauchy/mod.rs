//! Cauchy transform of compactly supported densities, its `∂̄` identity, and
//! the constants in its moduli of continuity.

pub mod constants;
pub mod dbar;
pub mod field;
pub mod modulus;
pub mod polar;
pub mod transform;

pub use constants::{modulus_constants, ContinuityConstants};
pub use dbar::{dbar_residual, DbarResidual};
pub use field::SampledField;
pub use modulus::{empirical_modulus, ModulusEstimate, ModulusKind};
pub use polar::{exterior_sum, DiskCauchy, PolarMesh};
pub use transform::{cauchy_transform, cell_integral, TransformConfig, TransformResult};
