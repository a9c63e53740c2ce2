//! Tangent vectors of holomorphic motions and their moduli of continuity,
//! and the Hölder regularity of the motion maps.

pub mod modulus;
pub mod tangent;

pub use modulus::{holder_exponent_fit, log_spaced_pairs, vector_modulus_check, HolderFit, ModulusReport};
pub use tangent::{default_steps, quotient_bound, tangent_vector, vanishing_probe, TangentEstimate, TangentField, VanishingProbe};
