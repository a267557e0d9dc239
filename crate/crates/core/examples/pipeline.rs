//! End-to-end run: color copies in a universal prefix and bound the colors seen.
use bigramsey::experiments::{run_pipeline, Coloring, PipelineConfig};
use bigramsey::hypergraph::Hypergraph3;

fn main() -> bigramsey::Result<()> {
    let edge = Hypergraph3::with_edges(3, [[0, 1, 2]])?;
    let cfg = PipelineConfig::for_pattern(edge.n()).apply_spec("prefix=24,seed=5,piece=4")?;
    for spec in ["hash:2", "hash:3", "order:3"] {
        let chi = Coloring::parse(spec, cfg.seed)?;
        let r = run_pipeline(&edge, &chi, cfg)?;
        println!("coloring {spec}:\n{}", r.to_text());
    }
    Ok(())
}
