//! Copies of small patterns in the matrix hypergraph and copy-count certificates.
use bigramsey::experiments::{copies_in_g, degree_upper_bound, edge_triple_count};
use bigramsey::hypergraph::Hypergraph3;
use bigramsey::trees::TreeNode;

fn main() -> bigramsey::Result<()> {
    let vertex = Hypergraph3::new(1);
    let edge = Hypergraph3::with_edges(3, [[0, 1, 2]])?;
    for h in 1..=4 {
        println!(
            "height {h}: {} single-vertex copies, {} edge triples",
            copies_in_g(&vertex, h)?.len(),
            edge_triple_count(h)?
        );
    }
    let first = &copies_in_g(&edge, 4)?[0];
    println!("first edge copy: {:?}", first.iter().map(TreeNode::to_token).collect::<Vec<_>>());
    for (name, a) in [("vertex", &vertex), ("edge", &edge)] {
        let b = degree_upper_bound(a)?;
        println!(
            "{name}: {} copies at height {} (required {}, partial {})",
            b.ell, b.height, b.required_height, b.partial
        );
    }
    Ok(())
}
