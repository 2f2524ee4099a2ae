//! Smaller weights give entrywise smaller optimal spectra.

use optframe::oracle::monotonicity_trial;

fn main() -> optframe::Result<()> {
    let alpha = [9.0, 8.0, 7.0, 5.0, 4.0, 2.5, 2.0, 2.0, 1.5, 0.6, 0.5];
    let beta = [8.5, 7.0, 6.0, 4.0, 3.8, 2.0, 1.6, 1.4, 1.0, 0.5, 0.4];
    let r = monotonicity_trial(&alpha, &beta, &[7, 5, 3], 1e-9)?;
    for (j, (big, small)) in r.larger.iter().zip(&r.smaller).enumerate() {
        println!("group {}:", j + 1);
        for (b, s) in big.iter().zip(small) {
            println!("  {b:.4} ≥ {s:.4}");
        }
    }
    println!("{} entries checked, {} violations", r.checked, r.violations);
    Ok(())
}
