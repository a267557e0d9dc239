//! Code a small hypergraph into the matrix tree and read the edges back.
use bigramsey::hypergraph::{parity_facts, phi, phi_image, Hypergraph3};

fn main() -> bigramsey::Result<()> {
    let h: Hypergraph3 = "n 4\ne 0 1 2\ne 0 1 3\ne 1 2 3\n".parse()?;
    let codes: Vec<_> = (0..h.n()).map(|i| phi(i, &h)).collect();
    for (i, c) in codes.iter().enumerate() {
        println!("vertex {i}:\n{}", c.to_text());
    }
    let back = phi_image(&h).to_hypergraph();
    println!("edges read back: {:?}", back.edges().collect::<Vec<_>>());
    println!("same hypergraph: {}", back == h);

    let report = parity_facts(&codes);
    println!(
        "parity: {} ({} meets, {} row pairs)",
        if report.passed() { "ok" } else { "violated" },
        report.meets_checked,
        report.row_pairs_checked
    );
    Ok(())
}
