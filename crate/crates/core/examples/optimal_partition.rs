//! Optimal split of eleven weights among subspaces of dimension 7, 5 and 3.

use optframe::{solve, verify_solution, ProblemInput, ToleranceConfig};

fn main() -> optframe::Result<()> {
    let alpha = [9.0, 8.0, 7.0, 5.0, 4.0, 2.5, 2.0, 2.0, 1.5, 0.6, 0.5];
    let input = ProblemInput::new(&alpha, &[7, 5, 3])?;
    let cfg = ToleranceConfig::default();
    let sol = solve(&input, &cfg)?;

    println!("partition:");
    for row in sol.partition.rows() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:8.4}")).collect();
        println!("  {}", cells.join(" "));
    }
    for (j, g) in sol.spectra.iter().enumerate() {
        println!("spectrum {}: {:?}", j + 1, g.as_slice());
    }
    println!("fixed points {:?}, stopped at iteration {}", sol.t_seq, sol.stop_iteration);

    let report = verify_solution(&input, &sol, &cfg);
    for c in &report.checks {
        println!("{:<18} {}", c.name, if c.passed { "ok" } else { &c.detail });
    }
    Ok(())
}
