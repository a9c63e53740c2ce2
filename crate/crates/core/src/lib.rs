//! Numerical toolkit for holomorphic motions: Cauchy transforms and their
//! moduli of continuity, Chirka extension of finite motions,
//! quasiconformality audits, regularity of tangent vectors, Fatou
//! coordinates of parabolic germs, and Kobayashi distances on Beltrami balls.
//!
//! Kernels are generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod cauchy;
pub mod chirka;
pub mod error;
pub mod fatou;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod kobayashi;
pub mod motion;
pub mod qc;
pub mod regularity;
pub mod scalar;

pub use error::{Error, ErrorCategory, Result};
pub use scalar::Real;

pub type C64 = num_complex::Complex<f64>;
pub type Grid = grid::GridSpec<f64>;
pub type Samples = grid::GridSamples<f64>;
pub type Field = cauchy::SampledField<f64>;
pub type Trajectory = chirka::Trajectory<f64>;
pub type FiniteMotion = chirka::FinitePointMotion<f64>;
pub type Extension = chirka::ChirkaMotion<f64>;
pub type Extended = chirka::ExtendedMotion<f64>;
pub type Beltrami = qc::BeltramiField<f64>;
pub type Tangents = regularity::TangentField<f64>;
pub type Germ = fatou::ParabolicGerm<f64>;
pub type Chart = fatou::PetalChart<f64>;
pub type Ball = kobayashi::BallPoint<f64>;
