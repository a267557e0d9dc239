use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{NodeSet, StrongTree};
use crate::error::{Error, Result};
use crate::trees::{BitVector, LtMatrix, TreeNode, TreeTruncation};

/// A strong subtree stored as level slices.
///
/// `levels[i]` is the ambient level of slice `i`; each slice is kept in
/// canonical order. Construction does not check the strong-subtree
/// conditions; use [`StrongSubtree::validate`] or [`is_strong_subtree`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "N: Serialize + serde::de::DeserializeOwned")]
pub struct StrongSubtree<N: TreeNode> {
    levels: Vec<usize>,
    slices: Vec<Vec<N>>,
}

impl<N: TreeNode> Default for StrongSubtree<N> {
    fn default() -> Self {
        StrongSubtree {
            levels: Vec::new(),
            slices: Vec::new(),
        }
    }
}

impl<N: TreeNode> StrongSubtree<N> {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Build from explicit slices. Each node must sit at its slice's level.
    pub fn from_slices(levels: Vec<usize>, mut slices: Vec<Vec<N>>) -> Result<Self> {
        if levels.len() != slices.len() {
            return Err(Error::usage(format!(
                "{} levels but {} slices",
                levels.len(),
                slices.len()
            )));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::usage("level set must be strictly increasing"));
        }
        for (lvl, slice) in levels.iter().zip(slices.iter_mut()) {
            if let Some(bad) = slice.iter().find(|x| x.level() != *lvl) {
                return Err(Error::usage(format!(
                    "node {} is not at level {lvl}",
                    bad.to_token()
                )));
            }
            slice.sort();
            slice.dedup();
        }
        Ok(StrongSubtree { levels, slices })
    }

    /// Group an arbitrary node set by ambient level.
    pub fn from_nodes(nodes: &NodeSet<N>) -> Self {
        let mut by_level: BTreeMap<usize, Vec<N>> = BTreeMap::new();
        for x in nodes.iter() {
            by_level.entry(x.level()).or_default().push(x.clone());
        }
        let (levels, slices) = by_level.into_iter().unzip();
        StrongSubtree { levels, slices }
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn slice(&self, i: usize) -> &[N] {
        &self.slices[i]
    }

    pub fn slices(&self) -> &[Vec<N>] {
        &self.slices
    }

    pub fn slice_sizes(&self) -> Vec<usize> {
        self.slices.iter().map(Vec::len).collect()
    }

    pub fn root(&self) -> Option<&N> {
        self.slices.first().and_then(|s| s.first())
    }

    pub fn len(&self) -> usize {
        self.slices.iter().map(Vec::len).sum()
    }

    /// Nodes in canonical order.
    pub fn nodes(&self) -> impl Iterator<Item = &N> {
        self.slices.iter().flatten()
    }

    pub fn node_set(&self) -> NodeSet<N> {
        self.nodes().cloned().collect()
    }

    pub fn slice_index(&self, level: usize) -> Option<usize> {
        self.levels.binary_search(&level).ok()
    }

    pub fn contains(&self, node: &N) -> bool {
        self.slice_index(node.level())
            .is_some_and(|i| self.slices[i].binary_search(node).is_ok())
    }

    /// Members of slice `i` lying above `t`. Contiguous in canonical order.
    pub fn members_above(&self, t: &N, i: usize) -> &[N] {
        let slice = &self.slices[i];
        let lvl = t.level();
        if lvl > self.levels[i] {
            return &[];
        }
        let lo = slice.partition_point(|x| x.truncate(lvl) < *t);
        let hi = slice.partition_point(|x| x.truncate(lvl) <= *t);
        &slice[lo..hi]
    }

    /// The first `n` slices.
    pub fn prefix(&self, n: usize) -> Self {
        StrongSubtree {
            levels: self.levels[..n].to_vec(),
            slices: self.slices[..n].to_vec(),
        }
    }

    /// Check rootedness, level alignment, balance, the branching condition
    /// and meet closure. `max_height` bounds the ambient levels when given.
    pub fn validate(&self, max_height: Option<usize>) -> std::result::Result<(), String> {
        if self.levels.is_empty() {
            return Ok(());
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err("level set is not strictly increasing".into());
        }
        if let Some(h) = max_height {
            if self.levels.last().is_some_and(|&l| l >= h) {
                return Err(format!("level {} is outside the ambient height {h}", self.levels.last().unwrap()));
            }
        }
        for (i, slice) in self.slices.iter().enumerate() {
            if slice.is_empty() {
                return Err(format!("slice {i} is empty"));
            }
            if let Some(x) = slice.iter().find(|x| x.level() != self.levels[i]) {
                return Err(format!("node {} is not at level {}", x.to_token(), self.levels[i]));
            }
        }
        if self.slices[0].len() != 1 {
            return Err(format!("not rooted: {} nodes at the lowest level", self.slices[0].len()));
        }
        for i in 1..self.slices.len() {
            let below = self.levels[i - 1];
            for x in &self.slices[i] {
                if self.slices[i - 1].binary_search(&x.truncate(below)).is_err() {
                    return Err(format!(
                        "node {} has no predecessor in slice {}",
                        x.to_token(),
                        i - 1
                    ));
                }
            }
        }
        for i in 0..self.slices.len() - 1 {
            let lvl = self.levels[i];
            let branching = N::branching(lvl);
            for s in &self.slices[i] {
                let mut dirs: Vec<u64> = self
                    .members_above(s, i + 1)
                    .iter()
                    .map(|c| c.direction_at(lvl))
                    .collect();
                let total = dirs.len();
                dirs.dedup();
                if dirs.len() != total {
                    return Err(format!(
                        "node {} has two successors above the same immediate successor",
                        s.to_token()
                    ));
                }
                if dirs.len() as u64 != branching {
                    return Err(format!(
                        "node {} covers {} of its {branching} immediate successors",
                        s.to_token(),
                        dirs.len()
                    ));
                }
            }
        }
        if let Some((a, b, m)) = self.node_set().missing_meet() {
            return Err(format!(
                "meet {} of {} and {} is missing",
                m.to_token(),
                a.to_token(),
                b.to_token()
            ));
        }
        Ok(())
    }

    /// Text block: the level set, then for each slice its node count followed
    /// by one node per entry.
    pub fn to_text(&self) -> String
    where
        N: TextNode,
    {
        let mut out = self
            .levels
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        out.push('\n');
        for slice in &self.slices {
            out.push_str(&format!("{}\n", slice.len()));
            for x in slice {
                out.push_str(&x.node_text());
            }
        }
        out
    }

    /// Parse one block written by [`StrongSubtree::to_text`].
    pub fn parse_lines<'a, I>(lines: &mut I) -> Result<Self>
    where
        I: Iterator<Item = (usize, &'a str)>,
        N: TextNode,
    {
        let (no, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "missing level-set line"))?;
        let levels: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(no, format!("bad level `{t}`"))))
            .collect::<Result<_>>()?;
        let mut slices = Vec::with_capacity(levels.len());
        for _ in &levels {
            let (no, count) = lines
                .next()
                .ok_or_else(|| Error::parse(no, "missing slice count"))?;
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| Error::parse(no, format!("bad slice count `{}`", count.trim())))?;
            let slice = (0..count)
                .map(|_| N::parse_node(lines))
                .collect::<Result<Vec<_>>>()?;
            slices.push(slice);
        }
        StrongSubtree::from_slices(levels, slices).map_err(|e| Error::parse(no, e.to_string()))
    }
}

/// Multi-line node serialization used inside subtree blocks.
pub trait TextNode: TreeNode {
    fn node_text(&self) -> String;
    fn parse_node<'a, I>(lines: &mut I) -> Result<Self>
    where
        I: Iterator<Item = (usize, &'a str)>;
}

impl TextNode for BitVector {
    fn node_text(&self) -> String {
        format!("{self}\n")
    }

    fn parse_node<'a, I>(lines: &mut I) -> Result<Self>
    where
        I: Iterator<Item = (usize, &'a str)>,
    {
        let (no, line) = lines.next().ok_or_else(|| Error::parse(0, "missing vector"))?;
        line.parse::<BitVector>()
            .map_err(|e| Error::parse(no, e.to_string()))
    }
}

impl TextNode for LtMatrix {
    fn node_text(&self) -> String {
        self.to_text()
    }

    fn parse_node<'a, I>(lines: &mut I) -> Result<Self>
    where
        I: Iterator<Item = (usize, &'a str)>,
    {
        LtMatrix::parse_lines(lines)
    }
}

impl<N: TreeNode> StrongTree<N> for StrongSubtree<N> {
    fn levels(&self) -> &[usize] {
        &self.levels
    }

    fn root_node(&self) -> Option<N> {
        self.root().cloned()
    }

    fn child(&self, node: &N, dir: u64) -> Option<N> {
        let i = self.slice_index(node.level())?;
        if i + 1 >= self.slices.len() {
            return None;
        }
        match self.members_above(&node.step(dir), i + 1) {
            [only] => Some(only.clone()),
            _ => None,
        }
    }

    fn contains_node(&self, node: &N) -> bool {
        self.contains(node)
    }

    fn slice_nodes(&self, i: usize) -> Vec<N> {
        self.slices[i].clone()
    }
}

/// Whether `s` is a strong subtree of the ambient truncation.
pub fn is_strong_subtree<N: TreeNode>(s: &StrongSubtree<N>, ambient: &TreeTruncation<N>) -> bool {
    s.nodes().all(|x| ambient.contains(x)) && s.validate(Some(ambient.height())).is_ok()
}

/// A level-compatible pair `(S1, S2)` of strong subtrees of `T1` and `T2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VectorStrongSubtree {
    s1: StrongSubtree<BitVector>,
    s2: StrongSubtree<LtMatrix>,
}

impl VectorStrongSubtree {
    pub fn new(s1: StrongSubtree<BitVector>, s2: StrongSubtree<LtMatrix>) -> Result<Self> {
        if s1.levels() != s2.levels() {
            return Err(Error::usage(format!(
                "level sets differ: {:?} vs {:?}",
                s1.levels(),
                s2.levels()
            )));
        }
        Ok(VectorStrongSubtree { s1, s2 })
    }

    pub fn empty() -> Self {
        VectorStrongSubtree {
            s1: StrongSubtree::empty(),
            s2: StrongSubtree::empty(),
        }
    }

    pub fn s1(&self) -> &StrongSubtree<BitVector> {
        &self.s1
    }

    pub fn s2(&self) -> &StrongSubtree<LtMatrix> {
        &self.s2
    }

    pub fn levels(&self) -> &[usize] {
        self.s1.levels()
    }

    pub fn height(&self) -> usize {
        self.s1.height()
    }

    /// Both components pass validation.
    pub fn validate(&self, max_height: Option<usize>) -> std::result::Result<(), String> {
        self.s1.validate(max_height).map_err(|e| format!("S1: {e}"))?;
        self.s2.validate(max_height).map_err(|e| format!("S2: {e}"))
    }

    /// `S1` block followed by `S2` block.
    pub fn to_text(&self) -> String {
        format!("{}{}", self.s1.to_text(), self.s2.to_text())
    }

    /// Lines starting with `#` are ignored.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.starts_with('#'));
        let s1 = StrongSubtree::<BitVector>::parse_lines(&mut lines)?;
        let s2 = StrongSubtree::<LtMatrix>::parse_lines(&mut lines)?;
        if let Some((no, l)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::parse(no, format!("trailing input `{l}`")));
        }
        VectorStrongSubtree::new(s1, s2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::DEFAULT_NODE_BUDGET;

    fn v(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn t1(h: usize) -> TreeTruncation<BitVector> {
        TreeTruncation::enumerate(h, DEFAULT_NODE_BUDGET).unwrap()
    }

    #[test]
    fn single_node_is_strong() {
        let s = StrongSubtree::from_nodes(&[v("01")].into_iter().collect());
        assert!(is_strong_subtree(&s, &t1(3)));
    }

    #[test]
    fn branching_condition() {
        let good = StrongSubtree::from_nodes(&[v("-"), v("01"), v("10")].into_iter().collect());
        assert!(is_strong_subtree(&good, &t1(3)));
        let bad = StrongSubtree::from_nodes(&[v("-"), v("01")].into_iter().collect());
        assert!(!is_strong_subtree(&bad, &t1(3)));
        let doubled =
            StrongSubtree::from_nodes(&[v("-"), v("01"), v("00"), v("10")].into_iter().collect());
        assert!(!is_strong_subtree(&doubled, &t1(3)));
    }

    #[test]
    fn child_lookup() {
        let s = StrongSubtree::from_nodes(&[v("-"), v("01"), v("10")].into_iter().collect());
        assert_eq!(s.child(&v("-"), 0), Some(v("01")));
        assert_eq!(s.child(&v("-"), 1), Some(v("10")));
        assert_eq!(s.child(&v("01"), 0), None);
    }

    #[test]
    fn text_round_trip() {
        let s1 = StrongSubtree::from_nodes(&[v("-"), v("01"), v("10")].into_iter().collect());
        let s2 = StrongSubtree::from_slices(
            vec![0, 2],
            vec![
                vec![LtMatrix::empty()],
                vec![LtMatrix::from_rows(&[[0u8, 0], [1, 0]]).unwrap()],
            ],
        )
        .unwrap();
        let vs = VectorStrongSubtree::new(s1, s2).unwrap();
        let text = vs.to_text();
        assert_eq!(text, "0 2\n1\n-\n2\n01\n10\n0 2\n1\n0\n1\n2\n0 0\n1 0\n");
        assert_eq!(VectorStrongSubtree::parse_text(&text).unwrap(), vs);
    }
}
