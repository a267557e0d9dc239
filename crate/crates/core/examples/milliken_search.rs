//! Search a finite truncation for a subtree whose smaller subtrees share a color.
use bigramsey::experiments::{milliken_exhaustive_reversed, milliken_search, Coloring, MillikenOutcome};
use bigramsey::subtrees::VectorTruncation;

fn main() -> bigramsey::Result<()> {
    for (spec, height, k, m) in [("constant", 4, 2, 3), ("parity:2", 2, 1, 2), ("parity:2", 3, 1, 2), ("hash:2:7", 4, 1, 2)] {
        let chi = Coloring::parse(spec, 0)?;
        let t = VectorTruncation::new(height);
        let r = milliken_search(&t, k, m, &chi, 1_000_000)?;
        let check = milliken_exhaustive_reversed(&t, k, m, |s| chi.color(s), 1_000_000)?;
        let found = match &r.outcome {
            MillikenOutcome::Found(s) => format!("levels {:?}", s.levels()),
            MillikenOutcome::Exhausted => "none".into(),
        };
        println!(
            "{spec} on height {height}, k={k}, m={m}: {found} after {} nodes; second pass agrees on existence: {}",
            r.visited,
            check.witness().is_some() == r.outcome.witness().is_some()
        );
    }
    Ok(())
}
