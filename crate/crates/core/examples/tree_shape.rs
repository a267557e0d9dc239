//! Level sizes of both trees and the immediate successors of a matrix.
use bigramsey::trees::{enumerate_truncation, BitVector, LtMatrix, TreeNode, TreeTruncation};

fn main() -> bigramsey::Result<()> {
    let t1: TreeTruncation<BitVector> = enumerate_truncation(5, 1 << 20)?;
    let t2: TreeTruncation<LtMatrix> = enumerate_truncation(5, 1 << 20)?;
    println!("T1 level sizes: {:?}", t1.level_counts());
    println!("T2 level sizes: {:?}", t2.level_counts());

    let a = LtMatrix::with_ones(3, &[(1, 0), (2, 1)])?;
    println!("successors of {}:", a.to_token());
    for b in t2.immediate_successors(&a)? {
        println!("  {}  (appended row {})", b.to_token(), b.row_prefix(a.order())?);
    }
    let b = LtMatrix::with_ones(3, &[(1, 0), (2, 0), (2, 1)])?;
    println!("meet of {} and {}: {}", a.to_token(), b.to_token(), a.meet(&b).to_token());
    Ok(())
}
