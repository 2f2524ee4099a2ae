//! Majorization checks on plain and block vectors.

use optframe::vecmaj::{block_majorizes, majorizes, submajorizes, BlockVector};

fn main() -> optframe::Result<()> {
    let y = [3.0, 2.0, 1.0];
    let x = [2.0, 2.0, 2.0];
    println!("{x:?} ≺ {y:?}: {}", majorizes(&y, &x, 1e-12)?);
    println!("{y:?} ≺ {x:?}: {}", majorizes(&x, &y, 1e-12)?);

    // weak majorization: partial sums only, traces may differ
    println!("(1, 1) ≺w (3, 0): {}", submajorizes(&[3.0, 0.0], &[1.0, 1.0], 1e-12)?);

    // a block vector only needs its partial sums checked at block boundaries
    let a = BlockVector::new(vec![2.0, 1.0], vec![1, 2])?;
    println!("{:?} ≺ (3, 0.5, 0.5): {}", a.expand().as_slice(), block_majorizes(&a, &[3.0, 0.5, 0.5], 1e-12)?);
    Ok(())
}
