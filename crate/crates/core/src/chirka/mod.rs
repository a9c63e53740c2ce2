//! Extension of a holomorphic motion of finitely many points to a motion of
//! the whole sphere, by solving a `∂̄` fixed-point problem on the parameter
//! disk for each point.

pub mod bump;
pub mod constants;
pub mod extend;
pub mod motion;
pub mod phi;
pub mod solver;

pub use bump::Bump;
pub use constants::{motion_constants, ConstantsMesh, MotionConstants};
pub use extend::{extend_motion, parameter_holomorphy_residual, ExtendedMotion, ExtensionDiagnostics};
pub use motion::{FinitePointMotion, Trajectory};
pub use phi::BumpField;
pub use solver::{ChirkaMotion, ExtensionConfig, SolvedTrajectory, SolverConfig};
