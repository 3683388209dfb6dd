//! Exact harmonic-measure computations on finite weighted graphs, with a
//! lattice front end for planar star-like domains and statistical harnesses
//! for maximum principles, Harnack bounds and Carleson-measure estimates.

pub mod dahlberg;
pub mod dirichlet;
pub mod error;
pub mod harnack;
pub mod lattice;
pub mod graph;
pub mod num;
pub mod union;
pub mod verify;
pub mod solver;

pub use error::{Error, Result};

/// Default `f64` graph type.
pub type Graph = graph::WeightedGraph<f64>;
/// Default `f64` boundary data.
pub type Boundary = dirichlet::BoundaryData<f64>;
/// Default `f64` harmonic kernel.
pub type Kernel = dirichlet::HarmonicKernel<f64>;
