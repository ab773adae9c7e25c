//! Hierarchical signed-graph clustering via Harary cuts.
//!
//! The engine keeps the fraction of positive edges inside clusters high
//! while pushing negative edges between clusters, without a predefined
//! cluster count and without spectral decompositions: each connected
//! component is repeatedly split along the best Harary cut found by
//! sampling random spanning trees, and a split is kept only while the
//! whole-graph quality keeps improving.
//!
//! Modules:
//! * [`graph`] — signed-graph model, edge-list parsing, preprocessing,
//!   components and subgraphs;
//! * [`balance`] — switching functions, frustration, balanced states and
//!   Harary cuts;
//! * [`metrics`] — quality measures of a labeled signed graph;
//! * [`cluster`] — the hierarchical split/commit/undo loop;
//! * [`duality`] — dense spectral cross-checks of the balance theory on
//!   small graphs.

pub mod balance;
pub mod cluster;
pub mod duality;
pub mod error;
pub mod graph;
pub mod metrics;

pub use error::{Error, Result};
