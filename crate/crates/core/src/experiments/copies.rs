use serde::Serialize;

use super::{ColorVector, Coloring};
use crate::envelope::r_bound;
use crate::error::{Error, Result};
use crate::hypergraph::{find_embeddings, g_edge, Hypergraph3, MatrixHypergraphView, DEFAULT_SEARCH_BUDGET};
use crate::subtrees::VectorStrongSubtree;
use crate::trees::{truncation_size, LtMatrix, DEFAULT_NODE_BUDGET};
use crate::valuation::{build_valuation, structural_isomorphism};

/// Patterns with more vertices are refused by [`copies_in_g`].
pub const MAX_PATTERN_VERTICES: usize = 4;

/// `size^n` cap used to decide which heights are feasible for a bound.
pub const COPY_SEARCH_LIMIT: u128 = 1_000_000;

/// An embedding of a pattern into the matrix hypergraph: image of each pattern vertex.
pub type MatrixCopy = Vec<LtMatrix>;

/// All embeddings of `a` into `G` restricted to `T2(<h)`, ordered
/// lexicographically by the image sequence.
pub fn copies_in_g(a: &Hypergraph3, h: usize) -> Result<Vec<MatrixCopy>> {
    copies_in_g_with(a, h, DEFAULT_NODE_BUDGET, DEFAULT_SEARCH_BUDGET)
}

pub fn copies_in_g_with(
    a: &Hypergraph3,
    h: usize,
    node_budget: u128,
    steps: u64,
) -> Result<Vec<MatrixCopy>> {
    if a.n() > MAX_PATTERN_VERTICES {
        return Err(Error::budget(
            "pattern vertices",
            MAX_PATTERN_VERTICES as u128,
            None,
        ));
    }
    let g = MatrixHypergraphView::truncation(h, node_budget)?;
    let maps = find_embeddings(a, &g, steps)?;
    Ok(maps
        .into_iter()
        .map(|m| m.into_iter().map(|i| g.node(i).clone()).collect())
        .collect())
}

/// Number of unordered edge triples of `G` inside `T2(<h)`.
pub fn edge_triple_count(h: usize) -> Result<usize> {
    let g = MatrixHypergraphView::truncation(h, DEFAULT_NODE_BUDGET)?;
    let nodes = g.nodes();
    // Edges need three distinct orders; only the top node's entry matters.
    let mut count = 0;
    for (i, a) in nodes.iter().enumerate() {
        for (j, b) in nodes.iter().enumerate().skip(i + 1) {
            if a.order() == b.order() {
                continue;
            }
            count += nodes[j + 1..].iter().filter(|c| g_edge(a, b, c)).count();
        }
    }
    Ok(count)
}

/// `χ̄(S)`: color of the image of each canonical copy under the structural
/// isomorphism onto `val(S)`.
pub fn color_vector(s: &VectorStrongSubtree, chi: &Coloring, a: &Hypergraph3) -> Result<ColorVector> {
    let copies = copies_in_g(a, s.height())?;
    color_vector_of(s, &copies, |img| chi.color(img))
}

/// [`color_vector`] over precomputed copies with an arbitrary coloring.
pub fn color_vector_of<F>(s: &VectorStrongSubtree, copies: &[MatrixCopy], mut chi: F) -> Result<ColorVector>
where
    F: FnMut(&[LtMatrix]) -> Result<usize>,
{
    let val = build_valuation(s)?;
    let f = structural_isomorphism(&val)?;
    let entries = copies
        .iter()
        .map(|c| {
            let img = c
                .iter()
                .map(|x| {
                    f.apply(x).cloned().ok_or_else(|| {
                        Error::usage(format!("copy node {x:?} is outside the isomorphism domain"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            chi(&img)
        })
        .collect::<Result<_>>()?;
    Ok(ColorVector { entries })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBound {
    pub pattern_vertices: usize,
    /// Height at which the copies were counted.
    pub height: usize,
    /// Height the full argument calls for.
    pub required_height: usize,
    /// Number of copies at `height`.
    pub ell: usize,
    /// `true` when `height` is below `required_height`.
    pub partial: bool,
}

fn feasible(n: usize, h: usize) -> bool {
    truncation_size::<LtMatrix>(h)
        .filter(|&s| s <= DEFAULT_NODE_BUDGET)
        .and_then(|s| s.checked_pow(n as u32))
        .is_some_and(|w| w <= COPY_SEARCH_LIMIT)
}

/// Copy count of `a` at the required height, or at the largest feasible
/// height below it with the certificate marked partial.
pub fn degree_upper_bound(a: &Hypergraph3) -> Result<DegreeBound> {
    let required = r_bound(a.n().max(1));
    let h = (1..=required)
        .take_while(|&h| feasible(a.n(), h))
        .last()
        .ok_or_else(|| Error::budget("copy enumeration for any height", COPY_SEARCH_LIMIT, None))?;
    degree_upper_bound_at(a, h)
}

/// Copy count of `a` at height `h`.
pub fn degree_upper_bound_at(a: &Hypergraph3, h: usize) -> Result<DegreeBound> {
    let required = r_bound(a.n().max(1));
    let ell = copies_in_g(a, h)?.len();
    Ok(DegreeBound {
        pattern_vertices: a.n(),
        height: h,
        required_height: required,
        ell,
        partial: h < required,
    })
}
