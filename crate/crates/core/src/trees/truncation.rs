use super::{TreeKind, TreeNode};
use crate::error::{Error, Result};

/// Default cap on the number of materialized nodes.
pub const DEFAULT_NODE_BUDGET: u128 = 1 << 22;

/// `|T(n)|`, or `None` when it does not fit in a `u128`.
pub fn level_size<N: TreeNode>(n: usize) -> Option<u128> {
    let bits = N::free_bits(0, n);
    1u128.checked_shl(bits)
}

/// `|T(<h)|`, or `None` on overflow.
pub fn truncation_size<N: TreeNode>(height: usize) -> Option<u128> {
    (0..height).try_fold(0u128, |acc, n| acc.checked_add(level_size::<N>(n)?))
}

/// All nodes of `T(<h)`, grouped by level, each level in canonical order.
#[derive(Clone, Debug)]
pub struct TreeTruncation<N> {
    height: usize,
    levels: Vec<Vec<N>>,
}

impl<N: TreeNode> TreeTruncation<N> {
    /// Materialize `T(<height)`, failing before any allocation if the node
    /// count exceeds `budget`.
    pub fn enumerate(height: usize, budget: u128) -> Result<Self> {
        if height == 0 {
            return Err(Error::usage("truncation height must be at least 1"));
        }
        let mut total = 0u128;
        for n in 0..height {
            total = level_size::<N>(n)
                .and_then(|s| total.checked_add(s))
                .filter(|&t| t <= budget)
                .ok_or_else(|| {
                    Error::budget(format!("{} truncation of height {height}", N::KIND), budget, Some(n))
                })?;
        }
        let levels = (0..height).map(|n| N::nodes_at_level(n).collect()).collect();
        Ok(TreeTruncation { height, levels })
    }

    pub fn kind(&self) -> TreeKind {
        N::KIND
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Nodes at `level`, canonical order. Empty at or above the height.
    pub fn level(&self, level: usize) -> &[N] {
        self.levels.get(level).map_or(&[], Vec::as_slice)
    }

    pub fn level_counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes in canonical (level-major) order.
    pub fn nodes(&self) -> impl Iterator<Item = &N> {
        self.levels.iter().flatten()
    }

    pub fn contains(&self, node: &N) -> bool {
        self.levels
            .get(node.level())
            .is_some_and(|lvl| lvl.binary_search(node).is_ok())
    }

    /// Canonical index of a node in [`TreeTruncation::nodes`] order.
    pub fn index_of(&self, node: &N) -> Option<usize> {
        let lvl = node.level();
        let pos = self.levels.get(lvl)?.binary_search(node).ok()?;
        Some(self.levels[..lvl].iter().map(Vec::len).sum::<usize>() + pos)
    }

    /// Immediate successors of `node` that lie in the truncation.
    pub fn immediate_successors(&self, node: &N) -> Result<Vec<N>> {
        if !self.contains(node) {
            return Err(Error::usage(format!(
                "node {} is not in the {} truncation of height {}",
                node.to_token(),
                N::KIND,
                self.height
            )));
        }
        if node.level() + 1 >= self.height {
            return Ok(Vec::new());
        }
        Ok(node.successors())
    }
}
