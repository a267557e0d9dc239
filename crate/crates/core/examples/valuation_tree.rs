//! Valuation tree of a vector strong subtree and its structural isomorphism.
use bigramsey::subtrees::{enumerate_strong_subtrees, VectorTruncation};
use bigramsey::valuation::{build_valuation, is_structural_isomorphism, is_valuation_tree, structural_isomorphism};

fn main() -> bigramsey::Result<()> {
    let t = VectorTruncation::new(4);
    // Skip ahead to a subtree that is not the first in canonical order.
    let s = enumerate_strong_subtrees(&t, 3, 1 << 20)?
        .nth(20)
        .expect("enough height-3 subtrees");
    println!("subtree on levels {:?}", s.levels());

    let val = build_valuation(&s)?;
    println!("valuation tree ({:?} nodes):\n{}", val.node_count(), val.to_text()?);

    let f = structural_isomorphism(&val)?;
    let nodes = val.node_set().expect("stored");
    println!("isomorphism:\n{}", f.to_text());
    println!("passes the triple scan: {}", is_structural_isomorphism(f.map(), &f.domain(), &nodes));
    println!("recognized as a valuation tree: {}", is_valuation_tree(&nodes).is_valuation());
    Ok(())
}
