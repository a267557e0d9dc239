//! Valuation trees built from vector strong subtrees, and the structural
//! isomorphism from a full matrix truncation onto them.
//!
//! Starting from the root of `S2`, a member `A` in slice `i` gets one child
//! per vector `v` in slice `i` of `S1`: the member of slice `i + 1` of `S2`
//! lying above `A⌢v`. Slice `i` of the result therefore has
//! `2^(i(i-1)/2)` nodes, the same as level `i` of `T2`.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::subtrees::{
    level_set, Completion, NodeSet, StrongSubtree, StrongTree, VectorStrongSubtree,
};
use crate::trees::{truncation_size, BitVector, LtMatrix, TreeNode, DEFAULT_NODE_BUDGET};

/// `Σ_{n<k} 2^(n(n-1)/2)`, the node count of every valuation tree of height `k`.
pub fn valuation_node_count(k: usize) -> Option<u128> {
    truncation_size::<LtMatrix>(k)
}

/// The pair a valuation tree was generated from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValuationOrigin {
    /// A stored vector strong subtree.
    Subtree(VectorStrongSubtree),
    /// Implicit completions, used when the strong subtrees are too large to store.
    Completion {
        s1: Completion<BitVector>,
        s2: Completion<LtMatrix>,
    },
}

impl ValuationOrigin {
    pub fn s1(&self) -> &dyn StrongTree<BitVector> {
        match self {
            ValuationOrigin::Subtree(s) => s.s1(),
            ValuationOrigin::Completion { s1, .. } => s1,
        }
    }

    pub fn s2(&self) -> &dyn StrongTree<LtMatrix> {
        match self {
            ValuationOrigin::Subtree(s) => s.s2(),
            ValuationOrigin::Completion { s2, .. } => s2,
        }
    }
}

/// A valuation tree; nodes are stored when they fit the budget used to
/// build it, and decided by walking the origin otherwise.
#[derive(Clone, Debug)]
pub struct ValuationTree {
    levels: Vec<usize>,
    slices: Option<Vec<Vec<LtMatrix>>>,
    origin: Option<ValuationOrigin>,
}

impl ValuationTree {
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    pub fn origin(&self) -> Option<&ValuationOrigin> {
        self.origin.as_ref()
    }

    pub fn is_materialized(&self) -> bool {
        self.slices.is_some()
    }

    /// Stored slices, each in canonical order.
    pub fn slices(&self) -> Option<&[Vec<LtMatrix>]> {
        self.slices.as_deref()
    }

    pub fn node_set(&self) -> Option<NodeSet<LtMatrix>> {
        self.slices
            .as_ref()
            .map(|s| s.iter().flatten().cloned().collect())
    }

    /// Number of nodes, computed without materializing.
    pub fn node_count(&self) -> Option<u128> {
        valuation_node_count(self.height())
    }

    pub fn root(&self) -> Option<LtMatrix> {
        match (&self.slices, &self.origin) {
            (Some(s), _) => s.first().and_then(|r| r.first().cloned()),
            (None, Some(o)) => o.s2().root_node(),
            (None, None) => None,
        }
    }

    pub fn contains(&self, c: &LtMatrix) -> bool {
        let Ok(top) = self.levels.binary_search(&c.level()) else {
            return false;
        };
        if let Some(slices) = &self.slices {
            return slices[top].binary_search(c).is_ok();
        }
        let Some(origin) = &self.origin else {
            return false;
        };
        let (s1, s2) = (origin.s1(), origin.s2());
        if s2.root_node().as_ref() != Some(&c.truncate(self.levels[0])) {
            return false;
        }
        (0..top).all(|i| {
            let lvl = self.levels[i];
            let v = c.sub_row(lvl);
            s1.contains_node(&v)
                && s2.child(&c.truncate(lvl), v.as_number()) == Some(c.truncate(self.levels[i + 1]))
        })
    }

    /// Level line, then per slice a count line and the matrices.
    pub fn to_text(&self) -> Result<String> {
        let slices = self
            .slices
            .as_ref()
            .ok_or_else(|| Error::usage("valuation tree is not materialized"))?;
        let s = StrongSubtree::from_slices(self.levels.clone(), slices.clone())?;
        Ok(s.to_text())
    }
}

impl Serialize for ValuationTree {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("ValuationTree", 4)?;
        st.serialize_field("height", &self.height())?;
        st.serialize_field("levels", &self.levels)?;
        st.serialize_field("node_count", &self.node_count().map(|c| c.to_string()))?;
        st.serialize_field("slices", &self.slices)?;
        st.end()
    }
}

fn materialize_slices(
    s1: &dyn StrongTree<BitVector>,
    s2: &dyn StrongTree<LtMatrix>,
) -> Result<Vec<Vec<LtMatrix>>> {
    let Some(root) = s2.root_node() else {
        return Ok(Vec::new());
    };
    let mut slices = vec![vec![root]];
    for i in 0..s2.height().saturating_sub(1) {
        let vectors = s1.slice_nodes(i);
        let mut next = Vec::new();
        for a in &slices[i] {
            for v in &vectors {
                let c = s2.child(a, v.as_number()).ok_or_else(|| {
                    Error::invariant(format!(
                        "no unique successor of {} above its extension by {v}",
                        a.to_token()
                    ))
                })?;
                next.push(c);
            }
        }
        next.sort();
        next.dedup();
        slices.push(next);
    }
    Ok(slices)
}

/// `val(S1, S2)` of a stored vector strong subtree.
pub fn build_valuation(s: &VectorStrongSubtree) -> Result<ValuationTree> {
    if s.height() == 0 {
        return Err(Error::usage("valuation tree of an empty subtree"));
    }
    let slices = materialize_slices(s.s1(), s.s2())?;
    Ok(ValuationTree {
        levels: s.levels().to_vec(),
        slices: Some(slices),
        origin: Some(ValuationOrigin::Subtree(s.clone())),
    })
}

/// `val(S1, S2)` of two implicit completions; stored only if the node count fits `budget`.
pub fn build_valuation_from_completions(
    s1: Completion<BitVector>,
    s2: Completion<LtMatrix>,
    budget: u128,
) -> Result<ValuationTree> {
    if s1.levels() != s2.levels() {
        return Err(Error::usage("completions have different level sets"));
    }
    let levels = s1.levels().to_vec();
    let slices = match valuation_node_count(levels.len()) {
        Some(c) if c <= budget => Some(materialize_slices(&s1, &s2)?),
        _ => None,
    };
    Ok(ValuationTree {
        levels,
        slices,
        origin: Some(ValuationOrigin::Completion { s1, s2 }),
    })
}

/// A bijection from `T2(<k)` onto a valuation tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralIso {
    height: usize,
    map: BTreeMap<LtMatrix, LtMatrix>,
}

impl StructuralIso {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn map(&self) -> &BTreeMap<LtMatrix, LtMatrix> {
        &self.map
    }

    pub fn apply(&self, a: &LtMatrix) -> Option<&LtMatrix> {
        self.map.get(a)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn domain(&self) -> NodeSet<LtMatrix> {
        self.map.keys().cloned().collect()
    }

    pub fn image(&self) -> NodeSet<LtMatrix> {
        self.map.values().cloned().collect()
    }

    /// One `domain -> image` line per node, compact matrix tokens.
    pub fn to_text(&self) -> String {
        self.map
            .iter()
            .map(|(a, b)| format!("{} -> {}\n", a.to_token(), b.to_token()))
            .collect()
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (a, b) = line
                .split_once("->")
                .ok_or_else(|| Error::parse(i + 1, "expected `domain -> image`"))?;
            let a = LtMatrix::from_token(a).map_err(|e| Error::parse(i + 1, e.to_string()))?;
            let b = LtMatrix::from_token(b).map_err(|e| Error::parse(i + 1, e.to_string()))?;
            map.insert(a, b);
        }
        let height = map.keys().map(|a| a.level() + 1).max().unwrap_or(0);
        Ok(StructuralIso { height, map })
    }
}

impl Serialize for StructuralIso {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(String, String)> = self
            .map
            .iter()
            .map(|(a, b)| (a.to_token(), b.to_token()))
            .collect();
        let mut st = ser.serialize_struct("StructuralIso", 2)?;
        st.serialize_field("height", &self.height)?;
        st.serialize_field("map", &pairs)?;
        st.end()
    }
}

fn iso_from(
    s1: &dyn StrongTree<BitVector>,
    s2: &dyn StrongTree<LtMatrix>,
) -> Result<BTreeMap<LtMatrix, LtMatrix>> {
    let k = s2.height();
    let mut map = BTreeMap::new();
    let (Some(r1), Some(r2)) = (s1.root_node(), s2.root_node()) else {
        return Ok(map);
    };
    map.insert(LtMatrix::empty(), r2);
    // Paths of S1: a vector `u` of length n names the S1 node reached from
    // the root by taking direction `u_i` out of slice `i`.
    let mut paths = vec![(BitVector::empty(), r1)];
    for n in 0..k.saturating_sub(1) {
        for a in LtMatrix::nodes_at_level(n) {
            let fa = map[&a].clone();
            for (u, v) in &paths {
                let c = s2.child(&fa, v.as_number()).ok_or_else(|| {
                    Error::invariant(format!("no S2 successor of {} towards {v}", fa.to_token()))
                })?;
                map.insert(a.extend(u)?, c);
            }
        }
        paths = paths
            .iter()
            .flat_map(|(u, v)| (0..2).map(move |d| (u.step(d), s1.child(v, d))))
            .map(|(u, v)| {
                v.map(|v| (u, v))
                    .ok_or_else(|| Error::invariant("S1 is missing a successor"))
            })
            .collect::<Result<_>>()?;
    }
    Ok(map)
}

/// The structural isomorphism `T2(<k) -> t`.
pub fn structural_isomorphism(t: &ValuationTree) -> Result<StructuralIso> {
    let k = t.height();
    truncation_size::<LtMatrix>(k)
        .filter(|&c| c <= DEFAULT_NODE_BUDGET)
        .ok_or_else(|| Error::budget("structural isomorphism domain", DEFAULT_NODE_BUDGET, None))?;
    let map = match &t.origin {
        Some(o) => iso_from(o.s1(), o.s2())?,
        None => {
            let nodes = t
                .node_set()
                .ok_or_else(|| Error::usage("valuation tree has neither nodes nor origin"))?;
            match is_valuation_tree(&nodes) {
                Recognition::Valuation(w) => iso_from(w.s1(), w.s2())?,
                Recognition::NotValuation(why) => {
                    return Err(Error::usage(format!("not a valuation tree: {why}")))
                }
            }
        }
    };
    Ok(StructuralIso { height: k, map })
}

/// Bijective, order-, meet- and relative-height-preserving, and
/// `f(C)[|f(B)|][|f(A)|] = C[|B|][|A|]` whenever `|A| <= |B| < |C|`.
pub fn is_structural_isomorphism(
    f: &BTreeMap<LtMatrix, LtMatrix>,
    domain: &NodeSet<LtMatrix>,
    target: &NodeSet<LtMatrix>,
) -> bool {
    if f.len() != domain.len() || domain.len() != target.len() {
        return false;
    }
    if !f.keys().eq(domain.iter()) {
        return false;
    }
    let image: NodeSet<LtMatrix> = f.values().cloned().collect();
    if &image != target {
        return false;
    }
    let dl = level_set(domain);
    let tl = level_set(target);
    if dl.len() != tl.len() {
        return false;
    }
    let rank = |levels: &[usize], x: &LtMatrix| levels.binary_search(&x.level()).ok();
    if f.iter().any(|(a, b)| rank(&dl, a) != rank(&tl, b)) {
        return false;
    }
    let pairs: Vec<(&LtMatrix, &LtMatrix)> = f.iter().collect();
    for (i, (a, fa)) in pairs.iter().enumerate() {
        for (b, fb) in &pairs[i + 1..] {
            if a.is_below(b) != fa.is_below(fb) || b.is_below(a) != fb.is_below(fa) {
                return false;
            }
            match f.get(&a.meet(b)) {
                Some(fm) if *fm == fa.meet(fb) => {}
                _ => return false,
            }
        }
    }
    // The entry condition depends on A and B only through (|A|, |f(A)|).
    let level_pairs: Vec<(usize, usize)> = dl.iter().copied().zip(tl.iter().copied()).collect();
    f.iter().all(|(c, fc)| {
        level_pairs.iter().all(|&(la, fla)| {
            level_pairs
                .iter()
                .filter(|&&(lb, _)| la <= lb && lb < c.level())
                .all(|&(lb, flb)| fc.get(flb, fla) == c.get(lb, la))
        })
    })
}

/// Every structural isomorphism `domain -> target`, by trying all
/// level-preserving bijections. Refuses when more than `limit` candidates exist.
pub fn brute_force_isomorphisms(
    domain: &NodeSet<LtMatrix>,
    target: &NodeSet<LtMatrix>,
    limit: u128,
) -> Result<Vec<BTreeMap<LtMatrix, LtMatrix>>> {
    let group = |s: &NodeSet<LtMatrix>| -> Vec<Vec<LtMatrix>> {
        let levels = level_set(s);
        levels
            .iter()
            .map(|&l| s.iter().filter(|x| x.level() == l).cloned().collect())
            .collect()
    };
    let (dg, tg) = (group(domain), group(target));
    if dg.len() != tg.len() || dg.iter().zip(&tg).any(|(a, b)| a.len() != b.len()) {
        return Ok(Vec::new());
    }
    let candidates = dg.iter().try_fold(1u128, |acc, g| {
        (1..=g.len() as u128).try_fold(acc, |a, x| a.checked_mul(x))
    });
    candidates
        .filter(|&c| c <= limit)
        .ok_or_else(|| Error::budget("level-preserving bijections", limit, None))?;

    let perms: Vec<Vec<Vec<usize>>> = dg.iter().map(|g| permutations(g.len())).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; dg.len()];
    loop {
        let mut map = BTreeMap::new();
        for (lvl, &p) in choice.iter().enumerate() {
            for (j, &t) in perms[lvl][p].iter().enumerate() {
                map.insert(dg[lvl][j].clone(), tg[lvl][t].clone());
            }
        }
        if is_structural_isomorphism(&map, domain, target) {
            out.push(map);
        }
        let mut pos = choice.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < perms[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Outcome of valuation-tree recognition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recognition {
    /// A generating pair whose valuation tree is exactly the input.
    Valuation(VectorStrongSubtree),
    /// The first reconstruction step that failed.
    NotValuation(String),
}

impl Recognition {
    pub fn is_valuation(&self) -> bool {
        matches!(self, Recognition::Valuation(_))
    }

    pub fn witness(&self) -> Option<&VectorStrongSubtree> {
        match self {
            Recognition::Valuation(w) => Some(w),
            Recognition::NotValuation(_) => None,
        }
    }

    pub fn diagnostic(&self) -> Option<&str> {
        match self {
            Recognition::Valuation(_) => None,
            Recognition::NotValuation(d) => Some(d),
        }
    }
}

/// Decide whether `nodes` is a valuation tree by rebuilding a candidate
/// generating pair and replaying the construction.
pub fn is_valuation_tree(nodes: &NodeSet<LtMatrix>) -> Recognition {
    match recognize(nodes) {
        Ok(w) => Recognition::Valuation(w),
        Err(why) => Recognition::NotValuation(why),
    }
}

fn recognize(nodes: &NodeSet<LtMatrix>) -> std::result::Result<VectorStrongSubtree, String> {
    if nodes.is_empty() {
        return Err("empty node set".into());
    }
    let closed = nodes.meet_closure();
    let levels = closed.level_set();
    let s2 = Completion::new(&closed, levels.clone())
        .and_then(|c| c.materialize(DEFAULT_NODE_BUDGET))
        .map_err(|e| format!("S2 completion failed: {e}"))?;

    let mut vectors: NodeSet<BitVector> = NodeSet::new();
    for c in closed.iter() {
        let j = levels.binary_search(&c.level()).expect("level of a member");
        if j > 0 {
            vectors.insert(c.sub_row(levels[j - 1]));
        }
    }
    if vectors.is_empty() {
        vectors.insert(BitVector::zeros(levels[0]));
    }
    let s1 = Completion::new(&vectors.meet_closure(), levels)
        .and_then(|c| c.materialize(DEFAULT_NODE_BUDGET))
        .map_err(|e| format!("S1 completion failed: {e}"))?;

    let witness = VectorStrongSubtree::new(s1, s2).map_err(|e| e.to_string())?;
    witness
        .validate(None)
        .map_err(|e| format!("reconstructed pair is not strong: {e}"))?;
    let replay = build_valuation(&witness).map_err(|e| format!("replay failed: {e}"))?;
    let replayed = replay.node_set().expect("materialized");
    if &replayed != nodes {
        let extra = nodes.iter().find(|x| !replayed.contains(x));
        let missing = replayed.iter().find(|x| !nodes.contains(x));
        return Err(match (extra, missing) {
            (Some(x), _) => format!("node {} is not generated by the reconstruction", x.to_token()),
            (None, Some(x)) => format!("reconstruction also generates {}", x.to_token()),
            (None, None) => unreachable!("sets differ"),
        });
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subtrees::{enumerate_strong_subtrees, VectorTruncation};
    use crate::trees::TreeTruncation;

    fn full_pair(k: usize) -> VectorStrongSubtree {
        let t1 = TreeTruncation::<BitVector>::enumerate(k, DEFAULT_NODE_BUDGET).unwrap();
        let t2 = TreeTruncation::<LtMatrix>::enumerate(k, DEFAULT_NODE_BUDGET).unwrap();
        let levels: Vec<usize> = (0..k).collect();
        let s1 = StrongSubtree::from_slices(levels.clone(), (0..k).map(|l| t1.level(l).to_vec()).collect())
            .unwrap();
        let s2 = StrongSubtree::from_slices(levels, (0..k).map(|l| t2.level(l).to_vec()).collect()).unwrap();
        VectorStrongSubtree::new(s1, s2).unwrap()
    }

    #[test]
    fn full_pair_gives_full_truncation_and_identity() {
        let v = build_valuation(&full_pair(3)).unwrap();
        let t2: NodeSet<LtMatrix> = LtMatrix::nodes_at_level(0)
            .chain(LtMatrix::nodes_at_level(1))
            .chain(LtMatrix::nodes_at_level(2))
            .collect();
        assert_eq!(v.node_set().unwrap(), t2);
        let f = structural_isomorphism(&v).unwrap();
        assert!(f.map().iter().all(|(a, b)| a == b));
        assert!(is_structural_isomorphism(f.map(), &t2, &t2));
    }

    #[test]
    fn height_one_maps_empty_to_root() {
        let all: Vec<_> = enumerate_strong_subtrees(&VectorTruncation::new(3), 1, 100)
            .unwrap()
            .collect();
        for s in all {
            let v = build_valuation(&s).unwrap();
            assert_eq!(v.node_set().unwrap().len(), 1);
            let f = structural_isomorphism(&v).unwrap();
            assert_eq!(f.apply(&LtMatrix::empty()), s.s2().root());
        }
    }

    #[test]
    fn node_counts() {
        assert_eq!(
            (1..=5).map(|k| valuation_node_count(k).unwrap()).collect::<Vec<_>>(),
            vec![1, 2, 4, 12, 76]
        );
    }

    #[test]
    fn recognition_examples() {
        let root: NodeSet<LtMatrix> = [LtMatrix::empty()].into_iter().collect();
        assert!(is_valuation_tree(&root).is_valuation());
        let t2_3: NodeSet<LtMatrix> = (0..3).flat_map(LtMatrix::nodes_at_level).collect();
        assert!(is_valuation_tree(&t2_3).is_valuation());
        // Three nodes cannot be a valuation tree of any height.
        let three: NodeSet<LtMatrix> = [
            LtMatrix::empty(),
            LtMatrix::zero(1),
            LtMatrix::zero(2),
        ]
        .into_iter()
        .collect();
        let r = is_valuation_tree(&three);
        assert!(!r.is_valuation());
        assert!(r.diagnostic().is_some());
    }

    #[test]
    fn empty_plus_one_level_two_matrix_is_generated() {
        let m = LtMatrix::with_ones(2, &[(1, 0)]).unwrap();
        let nodes: NodeSet<LtMatrix> = [LtMatrix::empty(), m].into_iter().collect();
        let r = is_valuation_tree(&nodes);
        let w = r.witness().expect("generated by a pair with levels {0, 2}");
        assert_eq!(w.levels(), &[0, 2]);
        assert_eq!(build_valuation(w).unwrap().node_set().unwrap(), nodes);
    }

    #[test]
    fn implicit_membership_matches_stored() {
        let seeds2: NodeSet<LtMatrix> = [LtMatrix::zero(1), LtMatrix::with_ones(3, &[(2, 0)]).unwrap()]
            .into_iter()
            .collect();
        let seeds1: NodeSet<BitVector> = [BitVector::zeros(1)].into_iter().collect();
        let levels = vec![1, 3, 4];
        let s1 = Completion::new(&seeds1, levels.clone()).unwrap();
        let s2 = Completion::new(&seeds2, levels).unwrap();
        let stored = build_valuation_from_completions(s1.clone(), s2.clone(), 1000).unwrap();
        let implicit = build_valuation_from_completions(s1, s2, 0).unwrap();
        assert!(stored.is_materialized() && !implicit.is_materialized());
        assert_eq!(stored.node_set().unwrap().len(), 4);
        for lvl in 0..5 {
            for m in LtMatrix::nodes_at_level(lvl) {
                assert_eq!(stored.contains(&m), implicit.contains(&m), "{}", m.to_token());
            }
        }
    }

    #[test]
    fn iso_text_round_trip() {
        let v = build_valuation(&full_pair(3)).unwrap();
        let f = structural_isomorphism(&v).unwrap();
        assert_eq!(StructuralIso::parse_text(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn rejects_maps_between_different_sizes() {
        let a: NodeSet<LtMatrix> = [LtMatrix::empty()].into_iter().collect();
        let b: NodeSet<LtMatrix> = (0..2).flat_map(LtMatrix::nodes_at_level).collect();
        let f: BTreeMap<_, _> = [(LtMatrix::empty(), LtMatrix::empty())].into_iter().collect();
        assert!(!is_structural_isomorphism(&f, &a, &b));
    }
}
