//! Frame potential, mean squared error and other convex potentials of the
//! optimal design.

use optframe::potentials::{joint_potential, SpectrumVector};
use optframe::{solve, Potential, ProblemInput, ToleranceConfig};

fn main() -> optframe::Result<()> {
    let input = ProblemInput::new(&[10.0, 10.0, 10.0, 1.0, 1.0], &[4, 2])?;
    let sol = solve(&input, &ToleranceConfig::default())?;
    let spec = SpectrumVector::from_groups(sol.spectra.clone());
    for pot in [Potential::frame(), Potential::mse(), Potential::power(3.0), Potential::exp()] {
        println!("{:<5} {:.6}", pot.name(), joint_potential(&spec, &pot)?);
    }

    let entropy = Potential::new("x log x", |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() }, 0.0, true);
    println!("{:<5} {:.6}", entropy.name(), joint_potential(&spec, &entropy)?);
    Ok(())
}
