use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use serde::Serialize;

use super::{color_vector_of, copies_in_g, milliken_search_by, Coloring, MillikenOutcome, DEFAULT_MILLIKEN_BUDGET};
use crate::error::{Error, Result};
use crate::hypergraph::{
    find_embedding, phi, universal_prefix, verify_embedding, Hypergraph3,
    MatrixHypergraphView,
};
use crate::subtrees::{VectorStrongSubtree, VectorTruncation};
use crate::trees::{LtMatrix, TreeNode, DEFAULT_NODE_BUDGET};
use crate::valuation::{build_valuation, structural_isomorphism};

/// Sizes and seeds for one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineConfig {
    /// Vertices of the seeded universal prefix.
    pub prefix: usize,
    pub seed: u64,
    /// Height of the piece of `G` embedded into the prefix, and of the
    /// truncation searched for a monochromatic subtree.
    pub piece: usize,
    /// Height at which copies of the pattern are enumerated.
    pub copy_height: usize,
    /// Height of the subtree sought.
    pub target: usize,
    /// Backtracking steps allowed for embedding the piece.
    pub embed_steps: u64,
    /// Partial subtrees the search may visit.
    pub search_steps: u64,
}

impl PipelineConfig {
    /// Defaults for a pattern with `n` vertices.
    pub fn for_pattern(n: usize) -> Self {
        let copy_height = n.max(1);
        let target = copy_height.max(2);
        PipelineConfig {
            prefix: 32,
            seed: 0,
            piece: target + 1,
            copy_height,
            target,
            embed_steps: 200_000,
            search_steps: DEFAULT_MILLIKEN_BUDGET,
        }
    }

    /// Override fields from `key=value` pairs separated by commas; keys are
    /// `prefix`, `seed`, `piece`, `copy`, `target`, `embed`, `search`.
    pub fn apply_spec(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::usage(format!("budget item `{item}` is not key=value")))?;
            let num = u64::from_str(value.trim())
                .map_err(|_| Error::usage(format!("budget value `{value}` is not a number")))?;
            match key.trim() {
                "prefix" => self.prefix = num as usize,
                "seed" => self.seed = num,
                "piece" => self.piece = num as usize,
                "copy" => self.copy_height = num as usize,
                "target" => self.target = num as usize,
                "embed" => self.embed_steps = num,
                "search" => self.search_steps = num,
                other => return Err(Error::usage(format!("unknown budget key `{other}`"))),
            }
        }
        Ok(self)
    }
}

/// How the piece of `G` was placed into the prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaRoute {
    /// Found inside the prefix by backtracking.
    Search,
    /// Appended to the prefix as fresh vertices.
    Amalgamation,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub config: PipelineConfig,
    pub pattern_vertices: usize,
    /// Vertex count of the host after placing the piece.
    pub host_vertices: usize,
    pub theta_route: ThetaRoute,
    /// Host vertex of each piece node, in canonical node order.
    pub theta: Vec<usize>,
    /// Copies of the pattern at the copy height.
    pub ell: usize,
    pub milliken_visited: u64,
    pub witness: Option<VectorStrongSubtree>,
    pub valuation_nodes: Option<usize>,
    /// Copies of the pattern inside the final image.
    pub final_copies: Option<usize>,
    pub final_colors: Option<BTreeSet<usize>>,
    pub within_bound: Option<bool>,
    /// Host vertices `i` with a defined image, and `θ(ψ(φ(i)))`.
    pub g: Vec<(usize, usize)>,
    /// Whether `g` preserves edges and non-edges among those vertices.
    pub g_is_embedding: bool,
}

impl PipelineReport {
    pub fn final_color_count(&self) -> Option<usize> {
        self.final_colors.as_ref().map(BTreeSet::len)
    }

    pub fn to_text(&self) -> String {
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        let mut out = String::new();
        out.push_str(&format!(
            "host vertices: {} (theta by {:?})\n",
            self.host_vertices, self.theta_route
        ));
        out.push_str(&format!("ell: {} at copy height {}\n", self.ell, self.config.copy_height));
        out.push_str(&format!(
            "witness: {}\n",
            self.witness
                .as_ref()
                .map_or("none (exhausted)".to_string(), |w| format!("levels {:?}", w.levels()))
        ));
        out.push_str(&format!("search visited: {}\n", self.milliken_visited));
        out.push_str(&format!("valuation nodes: {}\n", opt(self.valuation_nodes)));
        out.push_str(&format!("final copies: {}\n", opt(self.final_copies)));
        out.push_str(&format!("final colors: {}\n", opt(self.final_color_count())));
        out.push_str(&format!(
            "within bound: {}\n",
            self.within_bound.map_or("-".to_string(), |b| b.to_string())
        ));
        out.push_str(&format!(
            "g on {} vertices, embedding: {}\n",
            self.g.len(),
            self.g_is_embedding
        ));
        out
    }
}

/// Place `piece` into `host`, by search if possible, otherwise by appending
/// a disjoint copy.
fn place_piece(piece: &Hypergraph3, host: &mut Hypergraph3, steps: u64) -> Result<(Vec<usize>, ThetaRoute)> {
    match find_embedding(piece, host, steps) {
        Ok(Some(map)) => return Ok((map, ThetaRoute::Search)),
        Ok(None) | Err(Error::Budget { .. }) => {}
        Err(e) => return Err(e),
    }
    let map: Vec<usize> = (0..piece.n()).map(|_| host.add_vertex()).collect();
    for [a, b, c] in piece.edges() {
        host.add_edge(map[*a], map[*b], map[*c])?;
    }
    Ok((map, ThetaRoute::Amalgamation))
}

/// Run the whole chain at finite scale: place a piece of `G` into a seeded
/// universal prefix, pull `chi0` back to `G`, search for a subtree whose
/// color vectors agree, and count colors on the copies inside its image.
pub fn run_pipeline(a: &Hypergraph3, chi0: &Coloring, cfg: PipelineConfig) -> Result<PipelineReport> {
    let PipelineConfig {
        piece: piece_height,
        copy_height,
        target,
        ..
    } = cfg;
    if !(1..=target).contains(&copy_height) || target > piece_height {
        return Err(Error::usage(format!(
            "need 1 <= copy <= target <= piece, got {copy_height}, {target}, {piece_height}"
        )));
    }

    let prefix = universal_prefix(cfg.prefix, cfg.seed).map_err(|e| e.in_stage("prefix"))?;
    let mut host = prefix.clone();
    let piece_view =
        MatrixHypergraphView::truncation(piece_height, DEFAULT_NODE_BUDGET).map_err(|e| e.in_stage("piece"))?;
    let piece = piece_view.to_hypergraph();
    let (theta, route) = place_piece(&piece, &mut host, cfg.embed_steps).map_err(|e| e.in_stage("theta"))?;
    if !verify_embedding(&piece, &host, &theta) {
        return Err(Error::invariant("theta is not an embedding").in_stage("theta"));
    }
    let index: BTreeMap<&LtMatrix, usize> = piece_view
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, m)| (m, theta[i]))
        .collect();
    let lift = |copy: &[LtMatrix]| -> Result<Vec<usize>> {
        copy.iter()
            .map(|m| {
                index
                    .get(m)
                    .copied()
                    .ok_or_else(|| Error::usage(format!("{} is outside the embedded piece", m.to_token())))
            })
            .collect()
    };
    let chi = |copy: &[LtMatrix]| -> Result<usize> { chi0.color(&lift(copy)?[..]) };

    let copies = copies_in_g(a, copy_height).map_err(|e| e.in_stage("copies"))?;
    let ell = copies.len();

    let ambient = VectorTruncation::new(piece_height);
    let search = milliken_search_by(
        &ambient,
        copy_height,
        target,
        |s| color_vector_of(s, &copies, &chi),
        cfg.search_steps,
    )
    .map_err(|e| e.in_stage("milliken"))?;

    let mut report = PipelineReport {
        config: cfg,
        pattern_vertices: a.n(),
        host_vertices: host.n(),
        theta_route: route,
        theta,
        ell,
        milliken_visited: search.visited,
        witness: None,
        valuation_nodes: None,
        final_copies: None,
        final_colors: None,
        within_bound: None,
        g: Vec::new(),
        g_is_embedding: true,
    };
    let MillikenOutcome::Found(witness) = search.outcome else {
        return Ok(report);
    };

    let val = build_valuation(&witness).map_err(|e| e.in_stage("valuation"))?;
    let psi = structural_isomorphism(&val).map_err(|e| e.in_stage("valuation"))?;
    report.valuation_nodes = Some(psi.len());
    report.witness = Some(witness);

    let final_copies = copies_in_g(a, target).map_err(|e| e.in_stage("final"))?;
    let mut colors = BTreeSet::new();
    for c in &final_copies {
        let img: Vec<LtMatrix> = c
            .iter()
            .map(|x| psi.apply(x).cloned().expect("copy lies in the domain"))
            .collect();
        colors.insert(chi(&img).map_err(|e| e.in_stage("final"))?);
    }
    report.final_copies = Some(final_copies.len());
    report.within_bound = Some(colors.len() <= ell);
    report.final_colors = Some(colors);

    let domain: Vec<usize> = (0..prefix.n()).take_while(|&i| 2 * i + 1 < target).collect();
    for &i in &domain {
        let img = psi.apply(&phi(i, &prefix)).expect("code lies in the domain");
        report.g.push((i, index[img]));
    }
    let g_map: Vec<usize> = report.g.iter().map(|&(_, y)| y).collect();
    report.g_is_embedding = verify_embedding(&prefix.induced(&domain), &host, &g_map);
    Ok(report)
}
