//! Vertex separators from a continuous bilinear program, refined over a
//! multilevel hierarchy.

pub mod coarsen;
pub mod driver;
pub mod error;
pub mod graph;
pub mod harness;
pub mod io;
pub mod oracle;
pub mod perturb;
pub mod qp;

pub use coarsen::MatchingRule;
pub use driver::{derive_bounds, solve, solve_with, RunStats, SolveOptions};
pub use error::{Result, VsepError};
pub use graph::WeightedGraph;
pub use qp::{Bounds, ContinuousPoint, Label, Partition, SeparatorProblem, Side};
