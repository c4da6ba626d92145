//! Reconfiguration of graph homomorphisms.
//!
//! The crate provides a graph type with loops, homomorphisms and the
//! recoloring graph Col(G, H), an exhaustive BFS reachability oracle, folds
//! and dismantling, and the reductions between recoloring problems:
//! vertex-edge / vertex-clique incidence graphs, the product with `K2`, and
//! the reflexive-closure expansions. A small harness turns the equivalences
//! into exhaustive or seeded random regression campaigns.

pub mod cliques;
pub mod error;
pub mod format;
pub mod graph;
pub mod harness;
pub mod hom;
pub mod instance;
pub mod oracle;
pub mod reductions;
pub mod structure;

pub use error::{GraphError, HomError, OracleError, ParseError, PathError, ReductionError};
pub use graph::{Bipartition, Graph};
pub use hom::{Homomorphism, RecoloringPath, RecoloringStep};
pub use instance::Instance;
