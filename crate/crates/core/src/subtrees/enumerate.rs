use std::marker::PhantomData;

use super::{StrongSubtree, VectorStrongSubtree};
use crate::error::{Error, Result};
use crate::trees::{BitVector, LtMatrix, TreeNode};

/// A tree inside which strong subtrees are chosen: its slices sit at
/// `host_levels()`, and a node of slice `idx` is reached from any host node
/// through [`Host::host_extensions`].
pub trait Host<N: TreeNode> {
    fn host_levels(&self) -> &[usize];

    /// Nodes of slice `idx`, canonical order.
    fn host_nodes(&self, idx: usize) -> Vec<N>;

    /// Nodes of slice `idx` lying above `t`, canonical order.
    fn host_extensions(&self, t: &N, idx: usize) -> Vec<N>;
}

impl<N: TreeNode, H: Host<N>> Host<N> for &H {
    fn host_levels(&self) -> &[usize] {
        (**self).host_levels()
    }

    fn host_nodes(&self, idx: usize) -> Vec<N> {
        (**self).host_nodes(idx)
    }

    fn host_extensions(&self, t: &N, idx: usize) -> Vec<N> {
        (**self).host_extensions(t, idx)
    }
}

/// The full truncation `T(<h)` as a host; slice `i` is level `i`.
#[derive(Clone, Debug)]
pub struct FullTree<N> {
    levels: Vec<usize>,
    _node: PhantomData<N>,
}

impl<N: TreeNode> FullTree<N> {
    pub fn new(height: usize) -> Self {
        FullTree {
            levels: (0..height).collect(),
            _node: PhantomData,
        }
    }
}

impl<N: TreeNode> Host<N> for FullTree<N> {
    fn host_levels(&self) -> &[usize] {
        &self.levels
    }

    fn host_nodes(&self, idx: usize) -> Vec<N> {
        N::nodes_at_level(self.levels[idx]).collect()
    }

    fn host_extensions(&self, t: &N, idx: usize) -> Vec<N> {
        t.extensions_at(self.levels[idx])
    }
}

impl<N: TreeNode> Host<N> for StrongSubtree<N> {
    fn host_levels(&self) -> &[usize] {
        self.levels()
    }

    fn host_nodes(&self, idx: usize) -> Vec<N> {
        self.slice(idx).to_vec()
    }

    fn host_extensions(&self, t: &N, idx: usize) -> Vec<N> {
        self.members_above(t, idx).to_vec()
    }
}

/// The vector truncation `(T1(<h), T2(<h))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VectorTruncation {
    pub height: usize,
}

impl VectorTruncation {
    pub fn new(height: usize) -> Self {
        VectorTruncation { height }
    }

    pub fn hosts(&self) -> (FullTree<BitVector>, FullTree<LtMatrix>) {
        (FullTree::new(self.height), FullTree::new(self.height))
    }
}

/// Choices for one slice: one option list per slot, and a mixed-radix
/// counter over them (last slot fastest).
struct SliceState {
    opts1: Vec<Vec<BitVector>>,
    opts2: Vec<Vec<LtMatrix>>,
    counter: Vec<usize>,
    slice1: Vec<BitVector>,
    slice2: Vec<LtMatrix>,
}

impl SliceState {
    fn new(opts1: Vec<Vec<BitVector>>, opts2: Vec<Vec<LtMatrix>>) -> Option<Self> {
        if opts1.iter().any(Vec::is_empty) || opts2.iter().any(Vec::is_empty) {
            return None;
        }
        let counter = vec![0; opts1.len() + opts2.len()];
        let mut st = SliceState {
            opts1,
            opts2,
            counter,
            slice1: Vec::new(),
            slice2: Vec::new(),
        };
        st.refresh();
        Some(st)
    }

    fn refresh(&mut self) {
        let n1 = self.opts1.len();
        self.slice1 = self
            .opts1
            .iter()
            .zip(&self.counter[..n1])
            .map(|(o, &c)| o[c].clone())
            .collect();
        self.slice1.sort();
        self.slice2 = self
            .opts2
            .iter()
            .zip(&self.counter[n1..])
            .map(|(o, &c)| o[c].clone())
            .collect();
        self.slice2.sort();
    }

    fn radix(&self, slot: usize) -> usize {
        let n1 = self.opts1.len();
        if slot < n1 {
            self.opts1[slot].len()
        } else {
            self.opts2[slot - n1].len()
        }
    }

    fn increment(&mut self) -> bool {
        for slot in (0..self.counter.len()).rev() {
            self.counter[slot] += 1;
            if self.counter[slot] < self.radix(slot) {
                self.refresh();
                return true;
            }
            self.counter[slot] = 0;
        }
        false
    }
}

/// Depth-first walk over vector strong subtrees of a host pair, one level
/// set at a time, with optional pruning of prefixes.
///
/// Order: level sets in the given order; within a level set, slice 0 choices
/// first, then slice 1, and so on, each slice choosing `S1` slots before `S2`
/// slots and each slot ranging over host nodes in canonical order.
pub struct SubtreeWalker<H1, H2> {
    h1: H1,
    h2: H2,
    sets: Vec<Vec<usize>>,
    set_idx: usize,
    set_open: bool,
    stack: Vec<SliceState>,
    pending_advance: bool,
}

impl<H1: Host<BitVector>, H2: Host<LtMatrix>> SubtreeWalker<H1, H2> {
    /// `sets` are increasing lists of host slice indices.
    pub fn new(h1: H1, h2: H2, sets: Vec<Vec<usize>>) -> Result<Self> {
        if h1.host_levels() != h2.host_levels() {
            return Err(Error::usage("host trees have different level sets"));
        }
        let n = h1.host_levels().len();
        if let Some(bad) = sets
            .iter()
            .find(|s| s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&i| i >= n))
        {
            return Err(Error::usage(format!("invalid level index set {bad:?}")));
        }
        Ok(SubtreeWalker {
            h1,
            h2,
            sets,
            set_idx: 0,
            set_open: false,
            stack: Vec::new(),
            pending_advance: false,
        })
    }

    fn current_set(&self) -> &[usize] {
        &self.sets[self.set_idx]
    }

    fn build_state(&self, depth: usize) -> Option<SliceState> {
        let set = self.current_set();
        let idx = set[depth];
        if depth == 0 {
            return SliceState::new(vec![self.h1.host_nodes(idx)], vec![self.h2.host_nodes(idx)]);
        }
        let prev = &self.stack[depth - 1];
        let opts1 = prev
            .slice1
            .iter()
            .flat_map(|x| (0..2).map(move |d| x.step(d)))
            .map(|t| self.h1.host_extensions(&t, idx))
            .collect();
        let opts2 = prev
            .slice2
            .iter()
            .flat_map(|x| (0..LtMatrix::branching(x.level())).map(move |d| x.step(d)))
            .map(|t| self.h2.host_extensions(&t, idx))
            .collect();
        SliceState::new(opts1, opts2)
    }

    fn partial(&self) -> VectorStrongSubtree {
        let host_levels = self.h1.host_levels();
        let levels: Vec<usize> = self.current_set()[..self.stack.len()]
            .iter()
            .map(|&i| host_levels[i])
            .collect();
        let s1 = StrongSubtree::from_slices(
            levels.clone(),
            self.stack.iter().map(|s| s.slice1.clone()).collect(),
        )
        .expect("slices sit at their levels");
        let s2 = StrongSubtree::from_slices(
            levels,
            self.stack.iter().map(|s| s.slice2.clone()).collect(),
        )
        .expect("slices sit at their levels");
        VectorStrongSubtree::new(s1, s2).expect("shared level set")
    }

    fn prefix_ok<P>(&self, prune: &mut Option<&mut P>) -> bool
    where
        P: FnMut(&VectorStrongSubtree) -> bool,
    {
        match prune {
            Some(p) => p(&self.partial()),
            None => true,
        }
    }

    /// Push the next slice; `false` means the caller must advance.
    fn push_state<P>(&mut self, prune: &mut Option<&mut P>) -> bool
    where
        P: FnMut(&VectorStrongSubtree) -> bool,
    {
        match self.build_state(self.stack.len()) {
            Some(st) => {
                self.stack.push(st);
                self.prefix_ok(prune)
            }
            None => false,
        }
    }

    /// Next candidate whose every prefix is accepted by `prune`.
    pub fn next_with<P>(&mut self, mut prune: Option<&mut P>) -> Option<VectorStrongSubtree>
    where
        P: FnMut(&VectorStrongSubtree) -> bool,
    {
        let mut advance = std::mem::take(&mut self.pending_advance);
        loop {
            if self.stack.is_empty() && !advance {
                if self.set_open {
                    self.set_idx += 1;
                }
                if self.set_idx >= self.sets.len() {
                    self.set_open = false;
                    return None;
                }
                self.set_open = true;
                if self.current_set().is_empty() {
                    return Some(VectorStrongSubtree::empty());
                }
                advance = !self.push_state(&mut prune);
            }
            if advance {
                let mut resumed = false;
                while let Some(top) = self.stack.last_mut() {
                    if top.increment() {
                        if self.prefix_ok(&mut prune) {
                            resumed = true;
                            break;
                        }
                    } else {
                        self.stack.pop();
                    }
                }
                advance = false;
                if !resumed {
                    continue;
                }
            }
            while self.stack.len() < self.current_set().len() {
                if !self.push_state(&mut prune) {
                    advance = true;
                    break;
                }
            }
            if advance {
                continue;
            }
            self.pending_advance = true;
            return Some(self.partial());
        }
    }
}

/// Stream of vector strong subtrees in canonical order.
pub struct StrongSubtreeStream<H1, H2> {
    walker: SubtreeWalker<H1, H2>,
}

impl<H1: Host<BitVector>, H2: Host<LtMatrix>> StrongSubtreeStream<H1, H2> {
    pub fn new(walker: SubtreeWalker<H1, H2>) -> Self {
        StrongSubtreeStream { walker }
    }
}

impl<H1: Host<BitVector>, H2: Host<LtMatrix>> Iterator for StrongSubtreeStream<H1, H2> {
    type Item = VectorStrongSubtree;

    fn next(&mut self) -> Option<Self::Item> {
        self.walker
            .next_with(None::<&mut fn(&VectorStrongSubtree) -> bool>)
    }
}

/// All `k`-subsets of `0..n` in colexicographic order.
pub fn colex_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}

/// log2 of the number of vector strong subtrees of `(T1, T2)` with level
/// set `levels` (always a power of two), or `None` on overflow.
fn log2_count(levels: &[usize]) -> Option<u128> {
    let Some(&l0) = levels.first() else {
        return Some(0);
    };
    let mut e = l0 as u128 + LtMatrix::free_bits(0, l0) as u128;
    let mut s2_slice_log = 0u128;
    for (i, w) in levels.windows(2).enumerate() {
        let (lo, hi) = (w[0], w[1]);
        let s1_slots = 1u128.checked_shl(u32::try_from(i + 1).ok()?)?;
        e = e.checked_add(((hi - lo - 1) as u128).checked_mul(s1_slots)?)?;
        s2_slice_log = s2_slice_log.checked_add(lo as u128)?;
        let s2_slots = 1u128.checked_shl(u32::try_from(s2_slice_log).ok()?)?;
        e = e.checked_add((LtMatrix::free_bits(lo + 1, hi) as u128).checked_mul(s2_slots)?)?;
    }
    Some(e)
}

/// `|Str_k(T1(<h), T2(<h))|`, or `None` if it overflows `u128`.
pub fn count_strong_subtrees(height: usize, k: usize) -> Option<u128> {
    colex_subsets(height, k).iter().try_fold(0u128, |acc, l| {
        let e = u32::try_from(log2_count(l)?).ok()?;
        acc.checked_add(1u128.checked_shl(e)?)
    })
}

/// Stream `Str_k` of a vector truncation, refusing when the count exceeds `budget`.
pub fn enumerate_strong_subtrees(
    ambient: &VectorTruncation,
    k: usize,
    budget: u128,
) -> Result<StrongSubtreeStream<FullTree<BitVector>, FullTree<LtMatrix>>> {
    if k > ambient.height {
        return Err(Error::usage(format!(
            "subtree height {k} exceeds truncation height {}",
            ambient.height
        )));
    }
    count_strong_subtrees(ambient.height, k)
        .filter(|&c| c <= budget)
        .ok_or_else(|| Error::budget(format!("Str_{k} of a height-{} truncation", ambient.height), budget, None))?;
    let (h1, h2) = ambient.hosts();
    let walker = SubtreeWalker::new(h1, h2, colex_subsets(ambient.height, k))?;
    Ok(StrongSubtreeStream::new(walker))
}

/// `Str_{<=k}`: heights `0..=k` in turn.
pub fn enumerate_strong_subtrees_upto(
    ambient: &VectorTruncation,
    k: usize,
    budget: u128,
) -> Result<impl Iterator<Item = VectorStrongSubtree>> {
    let streams = (0..=k)
        .map(|j| enumerate_strong_subtrees(ambient, j, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(streams.into_iter().flatten())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_order() {
        assert_eq!(
            colex_subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 3],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(colex_subsets(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn height_zero_is_the_empty_subtree() {
        let all: Vec<_> = enumerate_strong_subtrees(&VectorTruncation::new(3), 0, 10)
            .unwrap()
            .collect();
        assert_eq!(all, vec![VectorStrongSubtree::empty()]);
    }

    #[test]
    fn two_level_roots_are_forced() {
        let all: Vec<_> = enumerate_strong_subtrees(&VectorTruncation::new(2), 2, 100)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].s1().slice_sizes(), vec![1, 2]);
        assert_eq!(all[0].s2().slice_sizes(), vec![1, 1]);
    }

    #[test]
    fn count_matches_stream() {
        for h in 1..=4 {
            for k in 0..=h.min(3) {
                let n = enumerate_strong_subtrees(&VectorTruncation::new(h), k, 1 << 20)
                    .unwrap()
                    .count() as u128;
                assert_eq!(Some(n), count_strong_subtrees(h, k), "h={h} k={k}");
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            enumerate_strong_subtrees(&VectorTruncation::new(5), 3, 10),
            Err(Error::Budget { .. })
        ));
    }
}
