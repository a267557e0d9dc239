//! Generators and independent reference checks shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use bigramsey::hypergraph::Hypergraph3;
use bigramsey::subtrees::{NodeSet, StrongSubtree, VectorStrongSubtree};
use bigramsey::trees::{BitVector, LtMatrix, TreeNode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Hypergraph on `n` vertices with each triple an edge with probability `p`.
pub fn random_hypergraph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Hypergraph3 {
    let mut h = Hypergraph3::new(n);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if rng.gen_bool(p) {
                    h.add_edge(i, j, k).unwrap();
                }
            }
        }
    }
    h
}

fn random_extension<N: TreeNode>(rng: &mut ChaCha8Rng, t: &N, to: usize) -> N {
    let bits = N::free_bits(t.level(), to);
    t.fill(to, rng.gen_range(0..1u64 << bits))
}

/// A random strong subtree on `levels`: random root, then above each
/// immediate successor of each node a random extension to the next level.
pub fn random_strong<N: TreeNode>(rng: &mut ChaCha8Rng, levels: &[usize]) -> StrongSubtree<N> {
    let mut slices: Vec<Vec<N>> = vec![vec![random_extension(rng, &N::root(), levels[0])]];
    for w in levels.windows(2) {
        let mut next = Vec::new();
        for t in slices.last().unwrap() {
            for s in t.successors() {
                next.push(random_extension(rng, &s, w[1]));
            }
        }
        slices.push(next);
    }
    StrongSubtree::from_slices(levels.to_vec(), slices).unwrap()
}

/// Random `k` levels below `max_level` (inclusive), sorted.
pub fn random_levels(rng: &mut ChaCha8Rng, k: usize, max_level: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..=max_level).collect();
    let mut out = Vec::new();
    for _ in 0..k {
        out.push(all.remove(rng.gen_range(0..all.len())));
    }
    out.sort_unstable();
    out
}

pub fn random_vector_subtree(rng: &mut ChaCha8Rng, k: usize, max_level: usize) -> VectorStrongSubtree {
    let levels = random_levels(rng, k, max_level);
    let s1 = random_strong::<BitVector>(rng, &levels);
    let s2 = random_strong::<LtMatrix>(rng, &levels);
    VectorStrongSubtree::new(s1, s2).unwrap()
}

/// Random nonempty node set below `height`, closed under meets.
pub fn random_meet_closed<N: TreeNode>(rng: &mut ChaCha8Rng, height: usize, max_seeds: usize) -> NodeSet<N> {
    let n = rng.gen_range(1..=max_seeds);
    let seeds: NodeSet<N> = (0..n)
        .map(|_| {
            let l = rng.gen_range(0..height);
            random_extension(rng, &N::root(), l)
        })
        .collect();
    seeds.meet_closure()
}

/// Strong-subtree test written from the definition, independent of the
/// library's validator: rooted, and above every immediate successor of every
/// non-top node exactly one node of the next slice, with nothing else there.
pub fn strong_by_definition<N: TreeNode>(nodes: &BTreeSet<N>) -> bool {
    if nodes.is_empty() {
        return true;
    }
    let levels: BTreeSet<usize> = nodes.iter().map(TreeNode::level).collect();
    let levels: Vec<usize> = levels.into_iter().collect();
    let slice = |l: usize| -> Vec<&N> { nodes.iter().filter(|x| x.level() == l).collect() };
    if slice(levels[0]).len() != 1 {
        return false;
    }
    for w in levels.windows(2) {
        let lower = slice(w[0]);
        let upper = slice(w[1]);
        let mut covered = 0;
        for t in &lower {
            for s in t.successors() {
                let above = upper.iter().filter(|u| s.is_below(u)).count();
                if above != 1 {
                    return false;
                }
                covered += 1;
            }
        }
        if covered != upper.len() {
            return false;
        }
    }
    true
}

/// A strictly lower triangular matrix as plain rows, built without the library.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlainMatrix(pub Vec<Vec<u8>>);

impl PlainMatrix {
    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn to_lt(&self) -> LtMatrix {
        let ones: Vec<(usize, usize)> = (0..self.order())
            .flat_map(|i| (0..i).filter(move |&j| self.0[i][j] == 1).map(move |j| (i, j)))
            .collect();
        LtMatrix::with_ones(self.order(), &ones).unwrap()
    }
}

/// Every strictly lower triangular 0/1 matrix of order below `h`.
pub fn plain_matrices_below(h: usize) -> Vec<PlainMatrix> {
    let mut out = Vec::new();
    for n in 0..h {
        let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
        for mask in 0..(1u64 << cells.len()) {
            let mut rows = vec![vec![0u8; n]; n];
            for (b, &(i, j)) in cells.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    rows[i][j] = 1;
                }
            }
            out.push(PlainMatrix(rows));
        }
    }
    out
}

/// Edge relation of the matrix hypergraph, from its definition.
pub fn plain_edge(a: &PlainMatrix, b: &PlainMatrix, c: &PlainMatrix) -> bool {
    let mut t = [a, b, c];
    t.sort_by_key(|m| m.order());
    let [a, b, c] = t;
    a.order() < b.order() && b.order() < c.order() && c.0[b.order()][a.order()] == 1
}

/// The code of vertex `i` built directly from its defining entries.
pub fn plain_code(i: usize, h: &Hypergraph3) -> PlainMatrix {
    let n = 2 * i + 1;
    let mut rows = vec![vec![0u8; n]; n];
    for &[j, k, top] in h.edges() {
        if top == i {
            rows[2 * k + 1][2 * j] = 1;
            rows[2 * k + 1][2 * j + 1] = 1;
        }
    }
    PlainMatrix(rows)
}

/// Length of the longest common initial segment of two matrices, from entries.
pub fn plain_meet_order(a: &LtMatrix, b: &LtMatrix) -> usize {
    let mut k = 0;
    while k < a.order().min(b.order()) && (0..k).all(|j| a.get(k, j) == b.get(k, j)) {
        k += 1;
    }
    k
}

/// Strictly sub-diagonal rows of a matrix as bit strings.
pub fn plain_rows(a: &LtMatrix) -> Vec<Vec<bool>> {
    (0..a.order()).map(|i| (0..i).map(|j| a.get(i, j)).collect()).collect()
}
