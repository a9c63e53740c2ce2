//! Fatou coordinates of parabolic germs built from holomorphic motions of
//! pairs of vertical lines.

pub mod chart;
pub mod conjugacy;
pub mod germ;
pub mod series;

pub use chart::{boundary_motion, exact_conjugate, exact_eta_coefficients, petal_chart, BoundaryMotion, PetalChart};
pub use conjugacy::{fatou_coordinate, orbit_asymptotics, strip_conjugacy, test_grid, FatouCoordinate, StageRecord, StripAudit, StripConjugacy};
pub use germ::{DEFAULT_TERMS, GermFile, ParabolicGerm};
pub use series::PowerSeries;
