//! Isoperimetric connectivity of finite reflexive digraphs and Cayley graphs.
//!
//! The crate computes the connectivities `κ_k`, fragments and atoms of a
//! graph, extracts Menger certificates with max-flow, and sweeps catalogs of
//! small groups checking structural statements about sumsets.

pub mod digraph;
pub mod error;
pub mod groups;
pub mod iso;
pub mod menger;
pub mod set;
pub mod verify;

pub use digraph::{cayley_graph, Digraph, GraphFile, Sign};
pub use error::{Error, Result};
pub use groups::{make_group, Catalog, FiniteGroup, GroupSpec};
pub use set::ElementSet;
