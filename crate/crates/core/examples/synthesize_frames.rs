//! Explicit frame vectors for an optimal design, checked against their
//! targets.

use optframe::potentials::lambda_vector;
use optframe::synth::{frame_operator, schur_horn_vectors};
use optframe::{solve, synthesize_design, ProblemInput, SortedVector, ToleranceConfig};

fn main() -> optframe::Result<()> {
    let input = ProblemInput::new(&[10.0, 10.0, 10.0, 1.0, 1.0], &[4, 2])?;
    let sol = solve(&input, &ToleranceConfig::default())?;
    let design = synthesize_design(&sol)?;
    let lam = lambda_vector(&design)?;
    for (j, f) in design.iter().enumerate() {
        println!("group {} ({} vectors in R^{}):", j + 1, f.count(), f.dim());
        println!("{:.4}", f.synthesis());
        println!("  squared norms {:?}", f.norms_sq());
        println!("  spectrum      {:?}", lam.per_group[j].as_slice());
    }

    // four unit vectors and two zero vectors forming a Parseval frame
    let f = schur_horn_vectors(&[1.0, 1.0, 1.0, 1.0, 0.0, 0.0], &SortedVector::constant(1.0, 4), 1e-12)?;
    println!("frame operator of the Parseval family:{:.3}", frame_operator(&f));
    Ok(())
}
