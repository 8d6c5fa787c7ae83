//! Finite-graph hyperfiniteness certificates.
//!
//! The crate computes, validates and converts between six kinds of
//! certificates on finite bounded-degree graphs with vertex measures:
//! Reiter families (uniform amenability), local hyperfiniteness witnesses,
//! `K`-separators, weighted separators, separator distributions and
//! fractional `K`-partitions. Exact rational arithmetic is the default.

pub mod certificates;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod lp;
pub mod measure;
pub mod rational;
pub mod solvers;
pub mod subsets;
pub mod transforms;

pub use error::{Error, Result};
pub use graph::BoundedDegreeGraph;
pub use measure::VertexMeasure;
pub use rational::Rational;
pub use subsets::KSubset;
