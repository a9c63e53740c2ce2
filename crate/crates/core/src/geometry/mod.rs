//! Sphere points, Möbius maps, hyperbolic densities, and the quadrature
//! rules they rely on.

pub mod density;
pub mod mobius;
pub mod quadrature;
pub mod sphere;

pub use density::{lizhong_margin, LiZhongBound, agard_density, disk_density, disk_distance, hypothesis_integral, punctured_disk_density, three_point_integral, DensityValue};
pub use mobius::{mobius_through, MobiusMap};
pub use quadrature::{PlaneQuadrature, QuadratureValue};
pub use sphere::{cross_ratio, spherical_distance, SpherePoint};
