//! Quasiconformality diagnostics for sampled maps and motions.

pub mod audit;
pub mod beltrami;

pub use audit::{
    beltrami_holomorphy_residual, circular_distortion, circular_distortion_with, cross_ratio_track, dilatation_bound_check,
    dilatation_on_grid, dilatation_table, track_table,
};
pub use beltrami::{beltrami, BeltramiField, DilatationReport};
