//! A seeded prefix of a universal hypergraph, and embeddings into it.
use bigramsey::hypergraph::{find_embeddings, universal_prefix, Hypergraph3};

fn main() -> bigramsey::Result<()> {
    let u = universal_prefix(24, 11)?;
    println!("{} vertices, {} edges", u.n(), u.edge_count());
    let patterns = [
        ("non-edge", Hypergraph3::new(3)),
        ("edge", Hypergraph3::with_edges(3, [[0, 1, 2]])?),
        ("two edges", Hypergraph3::with_edges(4, [[0, 1, 2], [1, 2, 3]])?),
    ];
    for (name, p) in &patterns {
        let maps = find_embeddings(p, &u, 10_000_000)?;
        println!("{name}: {} embeddings, first {:?}", maps.len(), maps.first());
    }
    Ok(())
}
