//! Random designs with the same weights never beat the computed optimum.

use optframe::oracle::{brute_force_small, optimality_trial, TrialConfig};
use optframe::potentials::potential_of;
use optframe::{solve, Potential, ProblemInput, ToleranceConfig};

fn main() -> optframe::Result<()> {
    let input = ProblemInput::new(&[20.0, 19.5, 10.0, 5.0, 4.5, 3.0, 2.4, 2.0], &[5, 4, 4, 3, 2])?;
    let cfg = TrialConfig {
        seed: 7,
        trials: 2000,
        ..TrialConfig::default()
    };
    let report = optimality_trial(&input, &cfg)?;
    println!("{} trials, {} majorization violations", report.trials, report.majorization_violations);
    for p in &report.potentials {
        println!(
            "{:<5} optimum {:>10.4}  best random {:>10.4}  violations {}",
            p.name, p.optimal, p.min_trial, p.violations
        );
    }

    // exhaustive grid on a tiny instance
    let small = ProblemInput::new(&[3.0, 2.0, 0.5], &[2, 1])?;
    let fp = Potential::frame();
    let ours = potential_of(solve(&small, &ToleranceConfig::default())?.lambda.as_slice(), &fp)?;
    let grid = brute_force_small(&small, 200, &fp)?;
    println!("grid minimum {grid:.6} vs computed {ours:.6}");
    Ok(())
}
