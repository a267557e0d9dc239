//! Envelope of a vertex set and its verification report.
use bigramsey::envelope::{build_envelope, r_bound, verify_envelope};
use bigramsey::hypergraph::Hypergraph3;

fn main() -> bigramsey::Result<()> {
    let h = Hypergraph3::with_edges(6, [[0, 1, 2], [0, 1, 3], [1, 2, 3], [2, 4, 5], [0, 3, 5]])?;
    for vs in [vec![1, 3], vec![0, 2, 5]] {
        let env = build_envelope(&vs, &h)?;
        println!("vertices {vs:?}: levels {:?}, bound {}", env.level_set, r_bound(vs.len()));
        println!(
            "  |E02| = {}, |E01| = {}, |E1| = {}, |E2| = {}",
            env.e02.len(),
            env.e01.len(),
            env.e1.len(),
            env.e2.len()
        );
        print!("{}", verify_envelope(&env, &vs, &h).to_text());
    }
    Ok(())
}
