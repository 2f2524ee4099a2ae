//! Block form of the optimal spectrum and the multiplicity formula.

use optframe::partition::{block_multiplicities, dimension_counts};
use optframe::{solve, ProblemInput, ToleranceConfig};

fn main() -> optframe::Result<()> {
    let dims = [6, 5, 4, 2];
    println!("h = {:?}", dimension_counts(&dims));
    println!("cuts (3, 5, 6) give multiplicities {:?}", block_multiplicities(&dims, &[3, 5, 6]));

    let input = ProblemInput::new(&[20.0, 19.5, 10.0, 5.0, 4.5, 3.0, 2.4, 2.0], &[5, 4, 4, 3, 2])?;
    let sol = solve(&input, &ToleranceConfig::default())?;
    let b = &sol.blocks;
    println!("p = {}", b.p);
    for l in 0..b.p {
        println!("  level {:.6} × {} (cut at {})", b.levels[l], b.mults[l], b.cuts[l]);
    }
    println!("sorted spectrum {:?}", sol.lambda.as_slice());
    Ok(())
}
