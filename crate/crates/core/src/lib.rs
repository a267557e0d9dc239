//! Matrix trees and the machinery around them for bounding big Ramsey
//! degrees of finite 3-uniform hypergraphs.
//!
//! - [`trees`]: the binary-vector tree and the tree of strictly lower
//!   triangular 0/1 matrices, with truncations.
//! - [`subtrees`]: meet-closed node sets, strong subtrees, completion and
//!   enumeration of vector strong subtrees.
//! - [`valuation`]: valuation trees and structural isomorphisms.
//! - [`hypergraph`]: finite hypergraphs, the matrix hypergraph, the vertex
//!   coding, universal prefixes and embedding search.
//! - [`envelope`]: bounded-height valuation trees around coded vertex sets.
//! - [`experiments`]: copy enumeration, colorings, subtree search and the
//!   end-to-end pipeline.

pub mod cli;
pub mod envelope;
pub mod error;
pub mod experiments;
pub mod hypergraph;
pub mod subtrees;
pub mod trees;
pub mod valuation;

pub use error::{Error, Result};
