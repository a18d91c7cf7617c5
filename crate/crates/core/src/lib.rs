//! Exact unimodular triangulations of dilated lattice polytopes.
//!
//! Subdivisions are produced by terminating, confluent rewriting systems on
//! Cayley cells; all arithmetic is exact.

pub mod lattice;
pub mod geometry;
pub mod complexes;
pub mod rewrite;
pub mod classic;
pub mod cayley;
pub mod boxpoints;
pub mod kmw;
pub mod mixed;
pub mod sampling;
pub mod verify;
pub mod io;
pub mod cli;
