//! Optimal frame designs for multitasking devices with energy restrictions.
//!
//! A device splits a power budget `α_i` for each of `n` signals among `m`
//! subspaces of dimensions `d_1 ≥ … ≥ d_m`. The crate computes the
//! partition of the budget whose frames minimize every convex potential at
//! once, their spectra, and explicit frame vectors realizing them.
//!
//! ```
//! use optframe::{solve, ProblemInput, ToleranceConfig};
//!
//! let input = ProblemInput::new(&[10.0, 10.0, 10.0, 1.0, 1.0], &[4, 2]).unwrap();
//! let sol = solve(&input, &ToleranceConfig::default()).unwrap();
//! assert!((sol.lambda[0] - 6.0).abs() < 1e-9);
//! assert!((sol.lambda[5] - 2.0).abs() < 1e-9);
//! ```

pub mod cli;
pub mod error;
pub mod oracle;
pub mod partition;
pub mod potentials;
pub mod synth;
pub mod vecmaj;
pub mod waterfill;

pub use error::{Error, Result};
pub use partition::{solve, verify_solution, PartitionSolution, ProblemInput, ToleranceConfig};
pub use potentials::Potential;
pub use synth::{schur_horn_vectors, synthesize_design, FrameFamily};
pub use vecmaj::{majorizes, SortedVector};
pub use waterfill::water_fill;
