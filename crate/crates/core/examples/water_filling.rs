//! Water-filling of a weight vector and the deformation family built on it.

use optframe::waterfill::{water_fill, DeformationFamily};
use optframe::SortedVector;

fn main() -> optframe::Result<()> {
    let alpha = SortedVector::new(vec![10.0, 8.5, 7.0, 5.0, 3.8, 3.8, 2.4, 2.0, 1.7, 0.8])?;
    let wf = water_fill(&alpha, 6)?;
    println!("level {}", wf.level);
    println!("spectrum {:?}", wf.gamma.as_slice());
    println!("first flooded index {}", wf.split_index);

    let fam = DeformationFamily::new(SortedVector::new(vec![10.0, 10.0, 10.0, 1.0, 1.0])?, 4)?;
    for t in [0.0, 2.0, 6.0, fam.t_max()] {
        println!(
            "t = {t:>4}: a(t) = {:?}, spectrum = {:?}",
            fam.deform_at(t)?,
            fam.deformed_spectrum(t)?.as_slice()
        );
    }
    Ok(())
}
