//! Bounded-height valuation trees around finitely many coded vertices.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{phi, Hypergraph3};
use crate::subtrees::{level_set, Completion, NodeSet, StrongTree, VectorStrongSubtree};
use crate::trees::{BitVector, LtMatrix, TreeNode};
use crate::valuation::{build_valuation_from_completions, ValuationTree};

/// Largest vertex index accepted by [`build_envelope`].
pub const DEFAULT_MAX_VERTEX: usize = 6;

/// Valuation trees up to this many nodes are stored.
pub const DEFAULT_VALUATION_BUDGET: u128 = 1 << 16;

/// Height bound for envelopes of `k` vertices:
/// `(2k-1) + 2((2k-1)^2 + 1)`. The first term counts levels of the meet set,
/// the second the lengths of the vector meets.
pub fn r_bound(k: usize) -> usize {
    let m = (2 * k).saturating_sub(1);
    m + 2 * (m * m + 1)
}

#[derive(Clone, Copy, Debug)]
pub struct EnvelopeOptions {
    pub max_vertex: usize,
    pub valuation_budget: u128,
}

impl Default for EnvelopeOptions {
    fn default() -> Self {
        EnvelopeOptions {
            max_vertex: DEFAULT_MAX_VERTEX,
            valuation_budget: DEFAULT_VALUATION_BUDGET,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Envelope {
    pub vertices: Vec<usize>,
    /// Pairwise meets of the codes.
    pub e02: NodeSet<LtMatrix>,
    /// Rows of those meets at each other's orders, plus a zero vector.
    pub e01: NodeSet<BitVector>,
    /// Meet closure of `e01`.
    pub e1: NodeSet<BitVector>,
    /// `e02` with restrictions to the lengths in `e1`.
    pub e2: NodeSet<LtMatrix>,
    pub level_set: Vec<usize>,
    pub s1: Completion<BitVector>,
    pub s2: Completion<LtMatrix>,
    pub valuation: ValuationTree,
}

impl Envelope {
    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    pub fn height(&self) -> usize {
        self.level_set.len()
    }

    /// Store both strong subtrees, if they fit `budget` nodes each.
    pub fn strong_subtree(&self, budget: u128) -> Result<VectorStrongSubtree> {
        VectorStrongSubtree::new(self.s1.materialize(budget)?, self.s2.materialize(budget)?)
    }
}

fn pairwise_meets<N: TreeNode>(xs: &NodeSet<N>) -> NodeSet<N> {
    let v: Vec<&N> = xs.iter().collect();
    let mut out = NodeSet::new();
    for (i, a) in v.iter().enumerate() {
        for b in &v[i..] {
            out.insert(a.meet(b));
        }
    }
    out
}

fn check_vertices(vertices: &[usize], h: &Hypergraph3, max_vertex: usize) -> Result<Vec<usize>> {
    let set: BTreeSet<usize> = vertices.iter().copied().collect();
    if set.is_empty() {
        return Err(Error::usage("envelope of an empty vertex set"));
    }
    if let Some(&v) = set.iter().find(|&&v| v >= h.n()) {
        return Err(Error::usage(format!("vertex {v} is not in a {}-vertex hypergraph", h.n())));
    }
    if let Some(&v) = set.iter().find(|&&v| v > max_vertex) {
        return Err(Error::budget(
            format!("envelope vertex index {v}"),
            max_vertex as u128,
            Some(2 * v + 1),
        ));
    }
    Ok(set.into_iter().collect())
}

pub fn build_envelope(vertices: &[usize], h: &Hypergraph3) -> Result<Envelope> {
    build_envelope_with(vertices, h, EnvelopeOptions::default())
}

pub fn build_envelope_with(
    vertices: &[usize],
    h: &Hypergraph3,
    opts: EnvelopeOptions,
) -> Result<Envelope> {
    let vertices = check_vertices(vertices, h, opts.max_vertex)?;
    let codes: NodeSet<LtMatrix> = vertices.iter().map(|&i| phi(i, h)).collect();

    let e02 = pairwise_meets(&codes);

    let top = e02.iter().map(LtMatrix::order).max().expect("nonempty");
    let mut e01: NodeSet<BitVector> = NodeSet::new();
    for a in e02.iter() {
        for b in e02.iter().filter(|b| b.order() < a.order()) {
            e01.insert(a.sub_row(b.order()));
        }
    }
    e01.insert(BitVector::zeros(top));

    let e1 = pairwise_meets(&e01).meet_closure();

    let mut e2 = e02.clone();
    for a in e02.iter() {
        for v in e1.iter().filter(|v| v.len() <= a.order()) {
            e2.insert(a.truncate(v.len()));
        }
    }

    let levels = level_set(&e2);
    let s1 = Completion::new(&e1, levels.clone())?;
    let s2 = Completion::new(&e2, levels.clone())?;
    let valuation = build_valuation_from_completions(s1.clone(), s2.clone(), opts.valuation_budget)?;
    Ok(Envelope {
        vertices,
        e02,
        e01,
        e1,
        e2,
        level_set: levels,
        s1,
        s2,
        valuation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnvelopeCheck {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnvelopeReport {
    pub k: usize,
    pub height: usize,
    pub r_bound: usize,
    pub checks: Vec<EnvelopeCheck>,
}

impl EnvelopeReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EnvelopeCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&EnvelopeCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "envelope k={} height={} bound={}\n",
            self.k, self.height, self.r_bound
        );
        for c in &self.checks {
            let _ = write!(out, "[{}] {}", if c.passed { "pass" } else { "FAIL" }, c.name);
            if let Some(w) = &c.witness {
                let _ = write!(out, ": {w}");
            }
            out.push('\n');
        }
        out
    }
}

fn tokens<N: TreeNode>(xs: &NodeSet<N>) -> String {
    xs.iter().map(TreeNode::to_token).collect::<Vec<_>>().join(" ")
}

/// Re-check an envelope from scratch against the hypergraph it came from.
pub fn verify_envelope(env: &Envelope, vertices: &[usize], h: &Hypergraph3) -> EnvelopeReport {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, failure: Option<String>| {
        checks.push(EnvelopeCheck {
            name,
            passed: failure.is_none(),
            witness: failure,
        });
    };
    let set: BTreeSet<usize> = vertices.iter().copied().collect();
    let k = set.len();
    let codes: Vec<LtMatrix> = set
        .iter()
        .filter(|&&i| i < h.n())
        .map(|&i| phi(i, h))
        .collect();
    push(
        "vertices",
        (codes.len() != k || env.vertices != set.iter().copied().collect::<Vec<_>>())
            .then(|| format!("envelope built for {:?}, expected {set:?}", env.vertices)),
    );

    let expected_e02: NodeSet<LtMatrix> = codes
        .iter()
        .flat_map(|a| codes.iter().map(move |b| a.meet(b)))
        .collect();
    push(
        "meets of codes",
        (expected_e02 != env.e02).then(|| format!("e02 = {} expected {}", tokens(&env.e02), tokens(&expected_e02))),
    );

    let (n02, n01, n1, n2) = (env.e02.len(), env.e01.len(), env.e1.len(), env.e2.len());
    let bounds = [
        ("|e02| <= 2k-1", n02, 2 * k - 1),
        ("|e01| <= |e02|^2+1", n01, n02 * n02 + 1),
        ("|e1| <= 2|e01|-1", n1, (2 * n01).saturating_sub(1)),
        ("|e2| <= |e02|(|e1|+1)", n2, n02 * (n1 + 1)),
    ];
    for (name, got, bound) in bounds {
        push(name, (got > bound).then(|| format!("{got} > {bound}")));
    }

    let sub_failure = env
        .e02
        .iter()
        .find(|x| !env.e2.contains(x))
        .map(|x| format!("{} in e02 but not e2", x.to_token()))
        .or_else(|| {
            env.e01
                .iter()
                .find(|x| !env.e1.contains(x))
                .map(|x| format!("{x} in e01 but not e1"))
        });
    push("inclusions", sub_failure);

    push(
        "e1 meet-closed",
        env.e1
            .missing_meet()
            .map(|(a, b, m)| format!("meet {m} of {a} and {b} missing")),
    );
    push(
        "e2 meet-closed",
        env.e2.missing_meet().map(|(a, b, m)| {
            format!("meet {} of {} and {} missing", m.to_token(), a.to_token(), b.to_token())
        }),
    );

    let l1 = level_set(&env.e1);
    let l2 = level_set(&env.e2);
    let sync = if l1 != l2 {
        Some(format!("L(e1) = {l1:?}, L(e2) = {l2:?}"))
    } else if env.level_set != l2 || env.s1.levels() != l2 || env.s2.levels() != l2 {
        Some(format!(
            "level set {:?}, S1 {:?}, S2 {:?}, L(e2) {l2:?}",
            env.level_set,
            env.s1.levels(),
            env.s2.levels()
        ))
    } else {
        None
    };
    push("level sync", sync);

    let strong = |name: &str, seeds: Option<String>, skel: std::result::Result<(), String>| {
        seeds.or_else(|| skel.err()).map(|e| format!("{name}: {e}"))
    };
    let s1_fail = strong(
        "S1",
        env.e1
            .iter()
            .find(|x| !env.s1.contains_node(x))
            .map(|x| format!("{x} not in S1")),
        env.s1.verify_skeleton(),
    );
    let s2_fail = strong(
        "S2",
        env.e2
            .iter()
            .find(|x| !env.s2.contains_node(x))
            .map(|x| format!("{} not in S2", x.to_token())),
        env.s2.verify_skeleton(),
    );
    push("strong subtrees", s1_fail.or(s2_fail));

    push(
        "containment",
        codes
            .iter()
            .find(|a| !env.valuation.contains(a))
            .map(|a| format!("code {} is not in the valuation tree", a.to_token())),
    );

    let bound = r_bound(k.max(1));
    push(
        "height bound",
        (env.valuation.height() > bound || env.height() != env.valuation.height())
            .then(|| format!("height {} vs bound {bound}", env.valuation.height())),
    );

    let l02 = level_set(&env.e02);
    let l01: BTreeSet<usize> = level_set(&env.e01).into_iter().collect();
    let parity = l02
        .iter()
        .find(|l| *l % 2 == 0)
        .map(|l| format!("meet level {l} is even"))
        .or_else(|| {
            l1.iter()
                .filter(|l| !l01.contains(l))
                .find(|l| *l % 2 == 1)
                .map(|l| format!("vector meet level {l} is odd"))
        });
    push("parity", parity);

    EnvelopeReport {
        k,
        height: env.height(),
        r_bound: bound,
        checks,
    }
}
