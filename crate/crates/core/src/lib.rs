//! Steiner forest on structured graph classes.
//!
//! The crate provides exact reference solvers, safe reductions, a
//! treewidth-2 dynamic programme, detectors for wedges, citruses and bushes,
//! the polynomial solvers built on those decompositions, complexity
//! classifiers for forbidden-subgraph and deletion-set parameters, and a
//! generator for hard instances.

pub mod citrus;
pub mod dichotomy;
pub mod dispatch;
pub mod error;
pub mod graph;
pub mod hardness;
pub mod lemon;
pub mod hspec;
pub mod oracle;
pub mod reductions;
pub mod tangle;
pub mod tw2;

pub use error::{Error, Result};
pub use graph::{edge, Edge, Graph};
pub use hspec::{HSpec, SpecComponent};
pub use oracle::{schools, solve_exact, solve_exhaustive, Schools, SteinerForest, TerminalSet};
