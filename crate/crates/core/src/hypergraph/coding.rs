use serde::Serialize;

use super::{Hypergraph3, MatrixHypergraphView};
use crate::subtrees::NodeSet;
use crate::trees::{BitVector, LtMatrix, TreeNode};

/// Edge predicate of the matrix hypergraph: orders pairwise distinct and,
/// sorted as `|A| < |B| < |C|`, `C[|B|][|A|] = 1`.
pub fn g_edge(a: &LtMatrix, b: &LtMatrix, c: &LtMatrix) -> bool {
    let mut t = [a, b, c];
    t.sort_by_key(|m| m.order());
    let [a, b, c] = t;
    a.order() < b.order() && b.order() < c.order() && c.get(b.order(), a.order())
}

/// The code of vertex `i`: order `2i + 1`, with entries `(2k+1, 2j)` and
/// `(2k+1, 2j+1)` set for every edge `{j, k, i}`, `j < k < i`.
pub fn phi(i: usize, h: &Hypergraph3) -> LtMatrix {
    let ones: Vec<(usize, usize)> = h
        .edges()
        .filter(|e| e[2] == i)
        .flat_map(|&[j, k, _]| [(2 * k + 1, 2 * j), (2 * k + 1, 2 * j + 1)])
        .collect();
    LtMatrix::with_ones(2 * i + 1, &ones).expect("coded entries lie below the diagonal")
}

/// The codes of all vertices; vertex `i` of the view is `phi(i, h)`
/// because codes are increasing in order.
pub fn phi_image(h: &Hypergraph3) -> MatrixHypergraphView {
    let nodes: NodeSet<LtMatrix> = (0..h.n()).map(|i| phi(i, h)).collect();
    MatrixHypergraphView::new(&nodes)
}

/// First violation found by [`parity_facts`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ParityFailure {
    NonzeroEvenRow { matrix: String, row: usize },
    EvenMeetOrder { a: String, b: String, order: usize },
    OddRowMeet { u: String, v: String, length: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    pub matrices: usize,
    pub meets_checked: usize,
    pub row_pairs_checked: usize,
    pub failure: Option<ParityFailure>,
}

impl ParityReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Parity checks on a set of coded vertices: even rows vanish, pairwise
/// meets have odd order, and two rows that branch apart (neither a prefix
/// of the other) do so at an even index.
///
/// Rows are read as their strictly sub-diagonal parts. Rows where one is a
/// prefix of the other are skipped: their meet is the shorter row, whose
/// length is the (odd) row index.
pub fn parity_facts(s: &[LtMatrix]) -> ParityReport {
    let mut report = ParityReport {
        matrices: s.len(),
        meets_checked: 0,
        row_pairs_checked: 0,
        failure: None,
    };
    for m in s {
        if let Some(row) = (0..m.order())
            .step_by(2)
            .find(|&r| !m.sub_row(r).is_zero())
        {
            report.failure = Some(ParityFailure::NonzeroEvenRow {
                matrix: m.to_token(),
                row,
            });
            return report;
        }
    }
    for (i, a) in s.iter().enumerate() {
        for b in &s[i..] {
            report.meets_checked += 1;
            let order = a.meet(b).order();
            if order % 2 == 0 {
                report.failure = Some(ParityFailure::EvenMeetOrder {
                    a: a.to_token(),
                    b: b.to_token(),
                    order,
                });
                return report;
            }
        }
    }
    let rows: NodeSet<BitVector> = s
        .iter()
        .flat_map(|m| (0..m.order()).map(move |r| m.sub_row(r)))
        .collect();
    let rows: Vec<BitVector> = rows.into_iter().collect();
    for (i, u) in rows.iter().enumerate() {
        for v in &rows[i + 1..] {
            if u.is_below(v) || v.is_below(u) {
                continue;
            }
            report.row_pairs_checked += 1;
            let length = u.meet(v).len();
            if length % 2 == 1 {
                report.failure = Some(ParityFailure::OddRowMeet {
                    u: u.to_string(),
                    v: v.to_string(),
                    length,
                });
                return report;
            }
        }
    }
    report
}
