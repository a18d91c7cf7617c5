//! Two classical rewriting systems: pulling triangulations of point
//! configurations and dicing of polytopes by hyperplanes.

mod dicing;
mod pulling;

pub use dicing::{dice, dicing_family, DiceRule, Hyperplane};
pub use pulling::{pulling_family, pulling_triangulation, PointConfig, PullRule};
