//! Finite 3-uniform hypergraphs, the matrix hypergraph on `T2`, the matrix
//! coding of vertices, seeded universal prefixes and induced-embedding search.

mod coding;
mod embedding;
mod universal;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subtrees::NodeSet;
use crate::trees::{truncation_size, LtMatrix, TreeNode};

pub use coding::{g_edge, parity_facts, phi, phi_image, ParityFailure, ParityReport};
pub use embedding::{
    find_embedding, find_embeddings, verify_embedding, DEFAULT_SEARCH_BUDGET,
};
pub use universal::{universal_prefix, universal_prefix_with, DEFAULT_RICHNESS};

/// Anything with numbered vertices and a symmetric 3-edge predicate.
pub trait HypergraphLike {
    fn vertex_count(&self) -> usize;

    /// Whether `{a, b, c}` is an edge; arguments are distinct and in any order.
    fn has_edge(&self, a: usize, b: usize, c: usize) -> bool;
}

fn sorted3(a: usize, b: usize, c: usize) -> [usize; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

/// A 3-uniform hypergraph on `{0, .., n-1}`; edges kept as sorted triples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hypergraph3 {
    n: usize,
    edges: BTreeSet<[usize; 3]>,
}

impl Hypergraph3 {
    pub fn new(n: usize) -> Self {
        Hypergraph3 {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn with_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = [usize; 3]>,
    {
        let mut h = Hypergraph3::new(n);
        for [a, b, c] in edges {
            h.add_edge(a, b, c)?;
        }
        Ok(h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted triples in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = &[usize; 3]> {
        self.edges.iter()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    /// Insert `{a, b, c}`; returns whether it was new.
    pub fn add_edge(&mut self, a: usize, b: usize, c: usize) -> Result<bool> {
        let t = sorted3(a, b, c);
        if t[0] == t[1] || t[1] == t[2] {
            return Err(Error::usage(format!("edge {t:?} has repeated vertices")));
        }
        if t[2] >= self.n {
            return Err(Error::usage(format!(
                "edge {t:?} uses a vertex outside 0..{}",
                self.n
            )));
        }
        Ok(self.edges.insert(t))
    }

    /// Induced sub-hypergraph on `vertices`, relabelled `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Hypergraph3 {
        let mut h = Hypergraph3::new(vertices.len());
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                for k in j + 1..vertices.len() {
                    if self.has_edge(vertices[i], vertices[j], vertices[k]) {
                        h.edges.insert([i, j, k]);
                    }
                }
            }
        }
        h
    }

    /// `n <n>` then `e i j k` per edge, sorted.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for [a, b, c] in &self.edges {
            out.push_str(&format!("e {a} {b} {c}\n"));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut h: Option<Hypergraph3> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let no = i + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let tag = parts.next().unwrap_or_default();
            let nums = parts
                .map(|p| {
                    p.parse::<usize>()
                        .map_err(|_| Error::parse(no, format!("bad integer `{p}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            match (tag, nums.as_slice(), h.as_mut()) {
                ("n", [n], None) => h = Some(Hypergraph3::new(*n)),
                ("n", _, Some(_)) => return Err(Error::parse(no, "duplicate `n` line")),
                ("n", _, None) => return Err(Error::parse(no, "expected `n <count>`")),
                ("e", [a, b, c], Some(g)) => {
                    g.add_edge(*a, *b, *c).map_err(|e| Error::parse(no, e.to_string()))?;
                }
                ("e", _, Some(_)) => return Err(Error::parse(no, "expected `e i j k`")),
                ("e", _, None) => return Err(Error::parse(no, "edge before `n` line")),
                (other, _, _) => return Err(Error::parse(no, format!("unknown line tag `{other}`"))),
            }
        }
        h.ok_or_else(|| Error::parse(1, "missing `n <count>` line"))
    }
}

impl HypergraphLike for Hypergraph3 {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn has_edge(&self, a: usize, b: usize, c: usize) -> bool {
        self.edges.contains(&sorted3(a, b, c))
    }
}

impl fmt::Display for Hypergraph3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Hypergraph3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Hypergraph3::parse_text(s)
    }
}

/// The sub-hypergraph of the matrix hypergraph induced on a finite node set;
/// vertex `i` is the `i`-th node in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixHypergraphView {
    nodes: Vec<LtMatrix>,
}

impl MatrixHypergraphView {
    pub fn new(nodes: &NodeSet<LtMatrix>) -> Self {
        MatrixHypergraphView {
            nodes: nodes.iter().cloned().collect(),
        }
    }

    /// `G_h`: all matrices of order below `height`.
    pub fn truncation(height: usize, budget: u128) -> Result<Self> {
        truncation_size::<LtMatrix>(height)
            .filter(|&s| s <= budget)
            .ok_or_else(|| Error::budget(format!("G on T2(<{height})"), budget, None))?;
        Ok(MatrixHypergraphView {
            nodes: (0..height).flat_map(LtMatrix::nodes_at_level).collect(),
        })
    }

    pub fn nodes(&self) -> &[LtMatrix] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &LtMatrix {
        &self.nodes[i]
    }

    pub fn index_of(&self, m: &LtMatrix) -> Option<usize> {
        self.nodes.binary_search(m).ok()
    }

    /// Materialize the induced edges as a plain hypergraph.
    pub fn to_hypergraph(&self) -> Hypergraph3 {
        let n = self.nodes.len();
        let mut h = Hypergraph3::new(n);
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if self.has_edge(i, j, k) {
                        h.edges.insert([i, j, k]);
                    }
                }
            }
        }
        h
    }
}

impl HypergraphLike for MatrixHypergraphView {
    fn vertex_count(&self) -> usize {
        self.nodes.len()
    }

    fn has_edge(&self, a: usize, b: usize, c: usize) -> bool {
        g_edge(&self.nodes[a], &self.nodes[b], &self.nodes[c])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_is_sorted() {
        let h = Hypergraph3::with_edges(4, [[3, 1, 2], [0, 1, 2]]).unwrap();
        let text = h.to_text();
        assert_eq!(text, "n 4\ne 0 1 2\ne 1 2 3\n");
        assert_eq!(text.parse::<Hypergraph3>().unwrap(), h);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match Hypergraph3::parse_text("n 3\ne 0 1 3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Hypergraph3::parse_text("e 0 1 2\n").is_err());
        assert!(Hypergraph3::parse_text("").is_err());
    }

    #[test]
    fn rejects_degenerate_edges() {
        assert!(Hypergraph3::new(3).add_edge(0, 0, 1).is_err());
    }

    #[test]
    fn induced_relabels() {
        let h = Hypergraph3::with_edges(5, [[1, 3, 4]]).unwrap();
        let sub = h.induced(&[4, 1, 3]);
        assert!(sub.has_edge(0, 1, 2));
        assert_eq!(sub.edge_count(), 1);
    }

    #[test]
    fn g_truncation_sizes() {
        let g = MatrixHypergraphView::truncation(4, 1000).unwrap();
        assert_eq!(g.vertex_count(), 12);
        assert_eq!(g.to_hypergraph().edge_count(), 21);
        assert!(MatrixHypergraphView::truncation(8, 1000).is_err());
    }
}
