//! Complete a meet-closed set to a strong subtree and count vector strong subtrees.
use bigramsey::subtrees::{
    complete_to_strong, count_strong_subtrees, enumerate_strong_subtrees, is_strong_subtree, NodeSet,
    VectorTruncation,
};
use bigramsey::trees::{enumerate_truncation, BitVector, TreeTruncation};

fn main() -> bigramsey::Result<()> {
    let ambient: TreeTruncation<BitVector> = enumerate_truncation(4, 1 << 10)?;
    let seeds: NodeSet<BitVector> = ["-", "01", "010"].iter().map(|s| s.parse().unwrap()).collect();
    let s = complete_to_strong(&seeds, &ambient)?;
    println!("completion of {{-, 01, 010}} (levels {:?}):\n{}", s.levels(), s.to_text());
    println!("strong: {}", is_strong_subtree(&s, &ambient));

    let t = VectorTruncation::new(4);
    for k in 0..=3 {
        let n = enumerate_strong_subtrees(&t, k, 1 << 20)?.count();
        println!("height {k}: {n} vector strong subtrees (closed form {:?})", count_strong_subtrees(4, k));
    }
    Ok(())
}
