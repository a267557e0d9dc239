use super::{level_set, NodeSet, StrongSubtree, StrongTree};
use crate::error::{Error, Result};
use crate::trees::{TreeNode, TreeTruncation, DEFAULT_NODE_BUDGET};

/// The strong subtree obtained by completing a meet-closed seed set to a
/// prescribed level set, held implicitly.
///
/// Going up from a member `s` at slice `i` in direction `t`, the selected
/// member of slice `i + 1` is the restriction of the lowest seed above `t`
/// when one exists, and the zero-extension of `t` otherwise. Every seed is
/// a member, and membership of any node can be decided by walking up from
/// the root, so nothing needs to be stored beyond the seeds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion<N: TreeNode> {
    levels: Vec<usize>,
    seeds: Vec<N>,
    root: N,
}

impl<N: TreeNode> Completion<N> {
    /// `seeds` must be meet-closed with a single minimal node, and its level
    /// set must be contained in `levels`. An empty seed set completes to the
    /// zero node at `levels[0]` and its zero-padded successors.
    pub fn new(seeds: &NodeSet<N>, levels: Vec<usize>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::usage("cannot complete to an empty level set"));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::usage("level set must be strictly increasing"));
        }
        if let Some((a, b, m)) = seeds.missing_meet() {
            return Err(Error::usage(format!(
                "seed set is not meet-closed: meet {} of {} and {} is missing",
                m.to_token(),
                a.to_token(),
                b.to_token()
            )));
        }
        let minimal = seeds.minimal_nodes();
        if minimal.len() > 1 {
            return Err(Error::usage(format!(
                "seed set has {} minimal nodes",
                minimal.len()
            )));
        }
        if let Some(bad) = seeds.iter().find(|x| levels.binary_search(&x.level()).is_err()) {
            return Err(Error::usage(format!(
                "seed {} lies outside the level set {levels:?}",
                bad.to_token()
            )));
        }
        let root = match minimal.first() {
            Some(m) => m.truncate(levels[0]),
            None => N::root().zero_extend(levels[0]),
        };
        Ok(Completion {
            levels,
            seeds: seeds.iter().cloned().collect(),
            root,
        })
    }

    pub fn seeds(&self) -> &[N] {
        &self.seeds
    }

    pub fn root(&self) -> &N {
        &self.root
    }

    /// Slice sizes implied by the branching condition; `None` on overflow.
    pub fn slice_sizes(&self) -> Vec<Option<u128>> {
        let mut sizes = Vec::with_capacity(self.levels.len());
        let mut current = Some(1u128);
        for (i, &lvl) in self.levels.iter().enumerate() {
            sizes.push(current);
            if i + 1 < self.levels.len() {
                current = current.and_then(|c| c.checked_mul(u128::from(N::branching(lvl))));
            }
        }
        sizes
    }

    /// Total node count, `None` on overflow.
    pub fn size(&self) -> Option<u128> {
        self.slice_sizes()
            .into_iter()
            .try_fold(0u128, |acc, s| acc.checked_add(s?))
    }

    /// Store every member, provided the total fits `budget`.
    pub fn materialize(&self, budget: u128) -> Result<StrongSubtree<N>> {
        let mut total = 0u128;
        for (i, size) in self.slice_sizes().into_iter().enumerate() {
            total = size
                .and_then(|s| total.checked_add(s))
                .filter(|&t| t <= budget)
                .ok_or_else(|| {
                    Error::budget(
                        format!("materializing a {} strong subtree", N::KIND),
                        budget,
                        Some(self.levels[i]),
                    )
                })?;
        }
        let slices = (0..self.levels.len()).map(|i| self.slice_nodes(i)).collect();
        StrongSubtree::from_slices(self.levels.clone(), slices)
    }

    /// Local strong-subtree check around every seed: each restriction of a
    /// seed to a slice level is a member, and every direction out of it
    /// leads to a member of the next slice above the stepped node.
    pub fn verify_skeleton(&self) -> std::result::Result<(), String> {
        for s in &self.seeds {
            for (i, &l) in self.levels.iter().enumerate().take_while(|(_, &l)| l <= s.level()) {
                let node = s.truncate(l);
                if !self.contains_node(&node) {
                    return Err(format!("{} is not a member", node.to_token()));
                }
                let Some(&next) = self.levels.get(i + 1) else {
                    continue;
                };
                for dir in 0..N::branching(l) {
                    let t = node.step(dir);
                    match self.child(&node, dir) {
                        Some(c) if c.level() == next && t.is_below(&c) => {}
                        _ => {
                            return Err(format!(
                                "no member at level {next} above {}",
                                t.to_token()
                            ))
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn lowest_seed_above(&self, t: &N) -> Option<&N> {
        self.seeds
            .iter()
            .filter(|s| t.is_below(s))
            .min_by_key(|s| s.level())
    }
}

impl<N: TreeNode> StrongTree<N> for Completion<N> {
    fn levels(&self) -> &[usize] {
        &self.levels
    }

    fn root_node(&self) -> Option<N> {
        Some(self.root.clone())
    }

    fn child(&self, node: &N, dir: u64) -> Option<N> {
        let i = self.levels.binary_search(&node.level()).ok()?;
        let next = *self.levels.get(i + 1)?;
        let t = node.step(dir);
        Some(match self.lowest_seed_above(&t) {
            Some(s) => s.truncate(next),
            None => t.zero_extend(next),
        })
    }

    fn contains_node(&self, node: &N) -> bool {
        let Ok(top) = self.levels.binary_search(&node.level()) else {
            return false;
        };
        let mut cur = self.root.clone();
        if node.truncate(self.levels[0]) != cur {
            return false;
        }
        for j in 0..top {
            let dir = node.direction_at(self.levels[j]);
            match self.child(&cur, dir) {
                Some(c) if c == node.truncate(self.levels[j + 1]) => cur = c,
                _ => return false,
            }
        }
        true
    }
}

/// Complete a meet-closed set with a single minimal node to a strong subtree
/// with the same level set.
pub fn complete_to_strong<N: TreeNode>(
    e: &NodeSet<N>,
    ambient: &TreeTruncation<N>,
) -> Result<StrongSubtree<N>> {
    if e.is_empty() {
        return Err(Error::usage("cannot complete an empty node set"));
    }
    if let Some(x) = e.iter().find(|x| !ambient.contains(x)) {
        return Err(Error::usage(format!(
            "node {} is outside the ambient truncation",
            x.to_token()
        )));
    }
    complete_with_levels(e, level_set(e), DEFAULT_NODE_BUDGET)
}

/// Complete `e` to a strong subtree with level set `levels ⊇ L(e)`.
pub fn complete_with_levels<N: TreeNode>(
    e: &NodeSet<N>,
    levels: Vec<usize>,
    budget: u128,
) -> Result<StrongSubtree<N>> {
    Completion::new(e, levels)?.materialize(budget)
}
