//! Command-line front end. [`run`] parses arguments and returns the rendered
//! output so it can be tested without a process.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::envelope::{build_envelope_with, verify_envelope, EnvelopeOptions};
use crate::error::{Error, Result};
use crate::experiments::{
    copies_in_g_with, degree_upper_bound, degree_upper_bound_at, milliken_search, run_pipeline, Coloring,
    MillikenOutcome, PipelineConfig, DEFAULT_MILLIKEN_BUDGET,
};
use crate::hypergraph::{parity_facts, phi, phi_image, Hypergraph3, DEFAULT_SEARCH_BUDGET};
use crate::subtrees::{VectorStrongSubtree, VectorTruncation};
use crate::trees::{enumerate_truncation, BitVector, LtMatrix, TreeNode, TreeTruncation, DEFAULT_NODE_BUDGET};
use crate::valuation::{build_valuation, is_structural_isomorphism, structural_isomorphism};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    T1,
    T2,
}

#[derive(Debug, Parser)]
#[command(name = "bigramsey", version, about = "Matrix trees, valuation trees and envelopes for 3-uniform hypergraphs")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Largest node count any materialized truncation may have.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget_nodes: u128,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Operations on a single tree.
    Tree {
        #[command(subcommand)]
        command: TreeCommand,
    },
    /// Code every vertex of a hypergraph as a matrix and check the coding.
    Embed {
        #[arg(long)]
        hypergraph: PathBuf,
    },
    /// Build and verify the envelope of a vertex set.
    Envelope {
        /// Comma-separated vertex indices.
        #[arg(long)]
        vertices: String,
        #[arg(long)]
        hypergraph: PathBuf,
    },
    /// Valuation tree and structural isomorphism of a stored vector strong subtree.
    Valuation {
        #[arg(long)]
        subtree: PathBuf,
    },
    /// Copies of a pattern in the matrix hypergraph below a height.
    Copies {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        height: usize,
    },
    /// Copy-count certificate for a pattern.
    DegreeBound {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        height: Option<usize>,
    },
    /// Search for a subtree all of whose smaller subtrees share a color.
    Milliken {
        /// Height of the ambient truncation.
        #[arg(long)]
        height: usize,
        /// Height of the colored subtrees.
        #[arg(long)]
        sub_height: usize,
        /// Height of the subtree sought.
        #[arg(long)]
        target: usize,
        #[arg(long)]
        coloring: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// End-to-end run for a pattern and a coloring of its copies.
    Pipeline {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        coloring: String,
        /// `key=value` pairs: prefix, seed, piece, copy, target, embed, search.
        #[arg(long, default_value = "")]
        budget: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum TreeCommand {
    /// List every node below a height, level by level.
    Enumerate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        height: usize,
    },
}

/// Rendered output of one command.
struct Output {
    text: String,
    json: Value,
}

/// Parse `args` (program name first) and execute; returns what would be
/// printed, or writes it to `--out` and returns an empty string.
pub fn run<I, T>(args: I) -> Result<String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Usage(e.to_string()))?;
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Result<String> {
    let out = dispatch(cli)?;
    let rendered = match cli.format {
        Format::Text => out.text,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json)?;
            s.push('\n');
            s
        }
    };
    match &cli.out {
        Some(path) => {
            write_atomic(path, rendered.as_bytes())?;
            Ok(String::new())
        }
        None => Ok(rendered),
    }
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::Parse { .. } => 2,
        Error::Budget { .. } => 3,
        Error::Stage { source, .. } => exit_code(source),
        _ => 1,
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn read_hypergraph(path: &Path) -> Result<Hypergraph3> {
    Hypergraph3::parse_text(&read(path)?)
}

fn dispatch(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Tree {
            command: TreeCommand::Enumerate { kind, height },
        } => match kind {
            Kind::T1 => tree_enumerate::<BitVector>(*height, cli.budget_nodes),
            Kind::T2 => tree_enumerate::<LtMatrix>(*height, cli.budget_nodes),
        },
        Command::Embed { hypergraph } => embed(&read_hypergraph(hypergraph)?),
        Command::Envelope { vertices, hypergraph } => {
            let vs = parse_list(vertices)?;
            envelope(&vs, &read_hypergraph(hypergraph)?, cli.budget_nodes)
        }
        Command::Valuation { subtree } => valuation(&VectorStrongSubtree::parse_text(&read(subtree)?)?),
        Command::Copies { pattern, height } => copies(&read_hypergraph(pattern)?, *height, cli.budget_nodes),
        Command::DegreeBound { pattern, height } => {
            let a = read_hypergraph(pattern)?;
            let b = match height {
                Some(h) => degree_upper_bound_at(&a, *h)?,
                None => degree_upper_bound(&a)?,
            };
            Ok(Output {
                text: format!(
                    "pattern vertices: {}\nheight: {}\nrequired height: {}\nell: {}\npartial: {}\n",
                    b.pattern_vertices, b.height, b.required_height, b.ell, b.partial
                ),
                json: serde_json::to_value(&b)?,
            })
        }
        Command::Milliken {
            height,
            sub_height,
            target,
            coloring,
            seed,
        } => milliken(*height, *sub_height, *target, &Coloring::parse(coloring, seed.unwrap_or(0))?),
        Command::Pipeline {
            pattern,
            coloring,
            budget,
        } => {
            let a = read_hypergraph(pattern)?;
            let cfg = PipelineConfig::for_pattern(a.n()).apply_spec(budget)?;
            let chi = Coloring::parse(coloring, cfg.seed)?;
            let report = run_pipeline(&a, &chi, cfg)?;
            Ok(Output {
                text: report.to_text(),
                json: serde_json::to_value(&report)?,
            })
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::usage(format!("bad vertex `{t}`"))))
        .collect()
}

fn tree_enumerate<N: TreeNode>(height: usize, budget: u128) -> Result<Output> {
    let t: TreeTruncation<N> = enumerate_truncation(height, budget)?;
    let mut text = format!("{} below height {}: {} nodes\n", N::KIND, height, t.len());
    let mut levels = Vec::new();
    for l in 0..height {
        let tokens: Vec<String> = t.level(l).iter().map(TreeNode::to_token).collect();
        text.push_str(&format!("level {l} ({}): {}\n", tokens.len(), tokens.join(" ")));
        levels.push(tokens);
    }
    Ok(Output {
        text,
        json: json!({
            "kind": N::KIND,
            "height": height,
            "level_counts": t.level_counts(),
            "levels": levels,
        }),
    })
}

fn embed(h: &Hypergraph3) -> Result<Output> {
    let codes: Vec<LtMatrix> = (0..h.n()).map(|i| phi(i, h)).collect();
    let image = phi_image(h).to_hypergraph();
    let faithful = image == *h;
    let parity = parity_facts(&codes);
    let mut text = String::new();
    for (i, c) in codes.iter().enumerate() {
        text.push_str(&format!("vertex {i}\n{}", c.to_text()));
    }
    text.push_str(&format!(
        "image edges: {}\nedges preserved: {faithful}\nparity checks: {}\n",
        image.edge_count(),
        if parity.passed() { "pass" } else { "fail" }
    ));
    Ok(Output {
        text,
        json: json!({
            "codes": codes.iter().map(TreeNode::to_token).collect::<Vec<_>>(),
            "image_edges": image.edges().collect::<Vec<_>>(),
            "edges_preserved": faithful,
            "parity": parity,
        }),
    })
}

fn envelope(vs: &[usize], h: &Hypergraph3, budget: u128) -> Result<Output> {
    let opts = EnvelopeOptions {
        valuation_budget: budget,
        ..EnvelopeOptions::default()
    };
    let env = build_envelope_with(vs, h, opts)?;
    let report = verify_envelope(&env, vs, h);
    let mut text = report.to_text();
    text.push_str(&format!("levels: {:?}\n", env.level_set));
    Ok(Output {
        text,
        json: json!({
            "vertices": env.vertices,
            "levels": env.level_set,
            "e02": env.e02.iter().map(TreeNode::to_token).collect::<Vec<_>>(),
            "e01": env.e01.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "e1": env.e1.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "e2": env.e2.iter().map(TreeNode::to_token).collect::<Vec<_>>(),
            "valuation_nodes": env.valuation.node_count().map(|c| c.to_string()),
            "report": report,
        }),
    })
}

fn valuation(s: &VectorStrongSubtree) -> Result<Output> {
    let val = build_valuation(s)?;
    let iso = structural_isomorphism(&val)?;
    let nodes = val
        .node_set()
        .ok_or_else(|| Error::invariant("valuation tree of a stored subtree is not stored"))?;
    let verified = is_structural_isomorphism(iso.map(), &iso.domain(), &nodes);
    let text = format!(
        "{}isomorphism ({} nodes, verified: {verified})\n{}",
        val.to_text()?,
        iso.len(),
        iso.to_text()
    );
    Ok(Output {
        text,
        json: json!({
            "valuation": val,
            "isomorphism": iso,
            "verified": verified,
        }),
    })
}

fn copies(a: &Hypergraph3, h: usize, budget: u128) -> Result<Output> {
    let cs = copies_in_g_with(a, h, budget, DEFAULT_SEARCH_BUDGET)?;
    let rows: Vec<Vec<String>> = cs.iter().map(|c| c.iter().map(TreeNode::to_token).collect()).collect();
    let mut text = format!("copies: {}\n", cs.len());
    for r in &rows {
        text.push_str(&r.join(" "));
        text.push('\n');
    }
    Ok(Output {
        text,
        json: json!({ "height": h, "count": cs.len(), "copies": rows }),
    })
}

fn milliken(height: usize, k: usize, m: usize, chi: &Coloring) -> Result<Output> {
    let t = VectorTruncation::new(height);
    let r = milliken_search(&t, k, m, chi, DEFAULT_MILLIKEN_BUDGET)?;
    let text = match &r.outcome {
        MillikenOutcome::Found(s) => format!("# witness, visited {}\n{}", r.visited, s.to_text()),
        MillikenOutcome::Exhausted => format!("none, exhausted (visited {})\n", r.visited),
    };
    Ok(Output {
        text,
        json: serde_json::to_value(&r)?,
    })
}
