//! Subtrees, strong subtrees and their enumeration.
//!
//! A *subtree* here is a meet-closed node set. A *strong subtree* is stored by
//! level slices; [`StrongTree`] abstracts over a materialized
//! [`StrongSubtree`] and the implicit [`Completion`] produced from a
//! meet-closed seed set, which is how trees too large to store are handled.

mod completion;
mod enumerate;
mod strong;

use std::collections::BTreeSet;

pub use completion::{complete_to_strong, complete_with_levels, Completion};
pub use enumerate::{
    colex_subsets, count_strong_subtrees, enumerate_strong_subtrees, enumerate_strong_subtrees_upto,
    FullTree, Host, StrongSubtreeStream, SubtreeWalker, VectorTruncation,
};
pub use strong::{is_strong_subtree, StrongSubtree, TextNode, VectorStrongSubtree};

use crate::trees::TreeNode;

/// A finite set of nodes of one tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeSet<N: TreeNode> {
    nodes: BTreeSet<N>,
}

impl<N: TreeNode> Default for NodeSet<N> {
    fn default() -> Self {
        NodeSet {
            nodes: BTreeSet::new(),
        }
    }
}

impl<N: TreeNode> NodeSet<N> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, node: N) -> bool {
        self.nodes.insert(node)
    }

    pub fn remove(&mut self, node: &N) -> bool {
        self.nodes.remove(node)
    }

    pub fn contains(&self, node: &N) -> bool {
        self.nodes.contains(node)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = &N> {
        self.nodes.iter()
    }

    pub fn as_set(&self) -> &BTreeSet<N> {
        &self.nodes
    }

    /// `L(D)`: sorted distinct levels.
    pub fn level_set(&self) -> Vec<usize> {
        level_set(self)
    }

    /// Nodes with no other member strictly below them.
    pub fn minimal_nodes(&self) -> Vec<N> {
        self.nodes
            .iter()
            .filter(|x| !self.nodes.iter().any(|y| y != *x && y.is_below(x)))
            .cloned()
            .collect()
    }

    /// First pair whose meet is missing, if any.
    pub fn missing_meet(&self) -> Option<(N, N, N)> {
        let nodes: Vec<&N> = self.nodes.iter().collect();
        for (i, a) in nodes.iter().enumerate() {
            for b in &nodes[i + 1..] {
                let m = a.meet(b);
                if !self.nodes.contains(&m) {
                    return Some(((*a).clone(), (*b).clone(), m));
                }
            }
        }
        None
    }

    /// Add pairwise meets until closed.
    pub fn meet_closure(&self) -> NodeSet<N> {
        let mut out = self.clone();
        while let Some((_, _, m)) = out.missing_meet() {
            out.insert(m);
        }
        out
    }
}

impl<N: TreeNode> FromIterator<N> for NodeSet<N> {
    fn from_iter<I: IntoIterator<Item = N>>(iter: I) -> Self {
        NodeSet {
            nodes: iter.into_iter().collect(),
        }
    }
}

impl<N: TreeNode> IntoIterator for NodeSet<N> {
    type Item = N;
    type IntoIter = std::collections::btree_set::IntoIter<N>;

    fn into_iter(self) -> Self::IntoIter {
        self.nodes.into_iter()
    }
}

/// `L(D) = {|t| : t ∈ D}`, sorted.
pub fn level_set<N: TreeNode>(d: &NodeSet<N>) -> Vec<usize> {
    let levels: BTreeSet<usize> = d.iter().map(TreeNode::level).collect();
    levels.into_iter().collect()
}

/// A node set is a subtree when it is closed under pairwise meets.
pub fn is_subtree<N: TreeNode>(d: &NodeSet<N>) -> bool {
    d.missing_meet().is_none()
}

/// Read access shared by materialized and implicit strong subtrees.
pub trait StrongTree<N: TreeNode> {
    /// Ambient levels of the slices, increasing.
    fn levels(&self) -> &[usize];

    fn root_node(&self) -> Option<N>;

    /// The unique member of the next slice above `node.step(dir)`, where
    /// `node` is a member at a non-top slice.
    fn child(&self, node: &N, dir: u64) -> Option<N>;

    fn contains_node(&self, node: &N) -> bool;

    fn height(&self) -> usize {
        self.levels().len()
    }

    /// Slice `i` in canonical order, rebuilt from the root through [`StrongTree::child`].
    fn slice_nodes(&self, i: usize) -> Vec<N> {
        let Some(root) = self.root_node() else {
            return Vec::new();
        };
        let mut slice = vec![root];
        for j in 0..i {
            let level = self.levels()[j];
            slice = slice
                .iter()
                .flat_map(|x| (0..N::branching(level)).filter_map(move |d| self.child(x, d)))
                .collect();
        }
        slice.sort();
        slice
    }
}
