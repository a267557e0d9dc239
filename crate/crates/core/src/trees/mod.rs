//! Nodes of the binary vector tree `T1` and the matrix tree `T2`, and the
//! primitive order-theoretic operations shared by both.
//!
//! Both trees are handled through [`TreeNode`], which fixes a canonical
//! encoding of immediate-successor *directions*: a node of `T1` at level `l`
//! has two directions (the appended bit), a node of `T2` at level `l` has
//! `2^l` directions (the appended row, read as an `l`-bit number with entry 0
//! as the most significant bit). Under this encoding numeric order of
//! directions agrees with the canonical lexicographic node order.

mod bitvec;
mod matrix;
mod truncation;

use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

pub use bitvec::BitVector;
pub use matrix::LtMatrix;
pub use truncation::{level_size, truncation_size, TreeTruncation, DEFAULT_NODE_BUDGET};

use crate::error::{Error, Result};

/// Which of the two trees a node belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeKind {
    T1,
    T2,
}

impl std::str::FromStr for TreeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t1" => Ok(TreeKind::T1),
            "t2" => Ok(TreeKind::T2),
            other => Err(Error::usage(format!("unknown tree kind `{other}`"))),
        }
    }
}

impl std::fmt::Display for TreeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TreeKind::T1 => "t1",
            TreeKind::T2 => "t2",
        })
    }
}

/// A node of `T1` or `T2`.
///
/// `Ord` is the canonical node order: level-major, then lexicographic on the
/// bit sequence.
pub trait TreeNode: Clone + Ord + Eq + Hash + Debug + Send + Sync + 'static {
    const KIND: TreeKind;

    /// The root (empty vector / empty matrix).
    fn root() -> Self;

    /// Number of strict predecessors in the tree.
    fn level(&self) -> usize;

    /// The unique predecessor at `level`; `level` must not exceed `self.level()`.
    fn truncate(&self, level: usize) -> Self;

    /// `self <= other` in the tree order.
    fn is_below(&self, other: &Self) -> bool;

    /// Largest common predecessor.
    fn meet(&self, other: &Self) -> Self;

    /// Number of immediate successors of any node at `level`.
    fn branching(level: usize) -> u64;

    /// The direction taken at `level` on the way up to `self`. Requires
    /// `level < self.level()`.
    fn direction_at(&self, level: usize) -> u64;

    /// The immediate successor in direction `dir`.
    fn step(&self, dir: u64) -> Self;

    /// Number of free bits needed to extend a node at level `from` to level `to`.
    fn free_bits(from: usize, to: usize) -> u32;

    /// Extend to level `to`, filling the free bits from `bits` with the most
    /// significant bit first. `bits` ranges over `0..2^free_bits(level, to)`,
    /// and numeric order of `bits` is canonical order of the results.
    fn fill(&self, to: usize, bits: u64) -> Self;

    /// Extend to level `to` with all new entries zero.
    fn zero_extend(&self, to: usize) -> Self {
        self.fill(to, 0)
    }

    /// All nodes at `level`, in canonical order.
    fn nodes_at_level(level: usize) -> Box<dyn Iterator<Item = Self>> {
        let bits = Self::free_bits(0, level);
        assert!(bits < 64, "level {level} too large to enumerate");
        let root = Self::root();
        Box::new((0..(1u64 << bits)).map(move |b| root.fill(level, b)))
    }

    /// Immediate successors in canonical order.
    fn successors(&self) -> Vec<Self> {
        (0..Self::branching(self.level()))
            .map(|d| self.step(d))
            .collect()
    }

    /// All extensions of `self` at level `to`, in canonical order.
    fn extensions_at(&self, to: usize) -> Vec<Self> {
        let bits = Self::free_bits(self.level(), to);
        assert!(bits < 64, "too many extensions to enumerate");
        (0..(1u64 << bits)).map(|b| self.fill(to, b)).collect()
    }

    /// Single-line text form.
    fn to_token(&self) -> String;

    /// Inverse of [`TreeNode::to_token`].
    fn from_token(s: &str) -> Result<Self>;
}

/// A node of either tree, for interfaces that accept both kinds at runtime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Vector(BitVector),
    Matrix(LtMatrix),
}

impl Node {
    pub fn kind(&self) -> TreeKind {
        match self {
            Node::Vector(_) => TreeKind::T1,
            Node::Matrix(_) => TreeKind::T2,
        }
    }

    pub fn level(&self) -> usize {
        match self {
            Node::Vector(v) => v.level(),
            Node::Matrix(m) => m.level(),
        }
    }
}

impl From<BitVector> for Node {
    fn from(v: BitVector) -> Self {
        Node::Vector(v)
    }
}

impl From<LtMatrix> for Node {
    fn from(m: LtMatrix) -> Self {
        Node::Matrix(m)
    }
}

/// Level of a node of either tree.
pub fn level(node: &Node) -> usize {
    node.level()
}

/// Tree order on nodes of the same kind.
pub fn tree_leq(a: &Node, b: &Node) -> Result<bool> {
    match (a, b) {
        (Node::Vector(a), Node::Vector(b)) => Ok(a.is_below(b)),
        (Node::Matrix(a), Node::Matrix(b)) => Ok(a.is_below(b)),
        _ => Err(mixed(a, b)),
    }
}

/// Meet of two nodes of the same kind.
pub fn meet(a: &Node, b: &Node) -> Result<Node> {
    match (a, b) {
        (Node::Vector(a), Node::Vector(b)) => Ok(Node::Vector(a.meet(b))),
        (Node::Matrix(a), Node::Matrix(b)) => Ok(Node::Matrix(a.meet(b))),
        _ => Err(mixed(a, b)),
    }
}

fn mixed(a: &Node, b: &Node) -> Error {
    Error::usage(format!(
        "cannot compare a {} node with a {} node",
        a.kind(),
        b.kind()
    ))
}

/// `A⌢v`: the extension of a matrix by a row.
pub fn extend(a: &LtMatrix, v: &BitVector) -> Result<LtMatrix> {
    a.extend(v)
}

/// `A↾k`: the upper-left `k × k` submatrix.
pub fn restrict(a: &LtMatrix, k: usize) -> Result<LtMatrix> {
    a.restrict(k)
}

/// Immediate successors of `node` inside a truncation.
pub fn immediate_successors<N: TreeNode>(node: &N, within: &TreeTruncation<N>) -> Result<Vec<N>> {
    within.immediate_successors(node)
}

/// Materialize `T(<h)`.
pub fn enumerate_truncation<N: TreeNode>(height: usize, budget: u128) -> Result<TreeTruncation<N>> {
    TreeTruncation::enumerate(height, budget)
}

/// Direction of a `T2` node at `level` along a given row prefix, i.e. the
/// encoding of `v` as an immediate-successor direction of a level-`|v|` matrix.
pub fn row_direction(v: &BitVector) -> u64 {
    v.as_number()
}
