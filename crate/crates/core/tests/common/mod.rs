#![allow(dead_code)]

use optframe::SortedVector;
use rand::Rng;

pub const SMALL_ALPHA: [f64; 5] = [10.0, 10.0, 10.0, 1.0, 1.0];
pub const SMALL_DIMS: [usize; 2] = [4, 2];

pub const THREE_GROUP_ALPHA: [f64; 11] = [9.0, 8.0, 7.0, 5.0, 4.0, 2.5, 2.0, 2.0, 1.5, 0.6, 0.5];
pub const THREE_GROUP_LIGHT_ALPHA: [f64; 11] = [8.5, 7.0, 6.0, 4.0, 3.8, 2.0, 1.6, 1.4, 1.0, 0.5, 0.4];
pub const THREE_GROUP_DIMS: [usize; 3] = [7, 5, 3];

/// Printed to four decimals.
pub const THREE_GROUP_TABLE: [[f64; 3]; 11] = [
    [3.0, 3.0, 3.0],
    [2.7583, 2.7583, 2.4833],
    [2.7583, 2.7583, 1.4833],
    [2.7583, 1.8135, 0.4282],
    [2.5267, 1.1307, 0.3425],
    [1.5792, 0.7067, 0.2141],
    [1.2634, 0.5654, 0.1713],
    [1.2634, 0.5654, 0.1713],
    [0.9475, 0.4240, 0.1285],
    [0.3790, 0.1696, 0.0514],
    [0.3158, 0.1413, 0.0428],
];

pub const FIVE_GROUP_ALPHA: [f64; 8] = [20.0, 19.5, 10.0, 5.0, 4.5, 3.0, 2.4, 2.0];
pub const FIVE_GROUP_DIMS: [usize; 5] = [5, 4, 4, 3, 2];

/// Printed to four decimals.
pub const FIVE_GROUP_TABLE: [[f64; 5]; 8] = [
    [4.0, 4.0, 4.0, 4.0, 4.0],
    [3.9, 3.9, 3.9, 3.9, 3.9],
    [3.3625, 2.8875, 2.5, 1.25, 0.0],
    [1.9896, 1.1354, 1.25, 0.625, 0.0],
    [1.7907, 1.0218, 1.125, 0.5625, 0.0],
    [1.1938, 0.6812, 0.75, 0.375, 0.0],
    [0.955, 0.545, 0.6, 0.3, 0.0],
    [0.7959, 0.4541, 0.5, 0.25, 0.0],
];

pub const UNIFORM_ALPHA: [f64; 6] = [1.0; 6];
pub const UNIFORM_DIMS: [usize; 2] = [4, 2];

/// Squared norms majorized by the zero-padded spectrum: start from the padded
/// spectrum, average random pairs, shuffle.
pub fn random_feasible<R: Rng>(rng: &mut R, d_max: usize, extra_max: usize) -> (Vec<f64>, SortedVector) {
    let d = rng.gen_range(1..=d_max);
    let n = d + rng.gen_range(0..=extra_max);
    let mut lambda: Vec<f64> = (0..d).map(|_| rng.gen_range(0.01..10.0)).collect();
    lambda.sort_by(|a, b| b.total_cmp(a));
    let mut a = lambda.clone();
    a.resize(n, 0.0);
    for _ in 0..rng.gen_range(0..3 * n) {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        let w: f64 = rng.gen();
        let (x, y) = (a[i], a[j]);
        a[i] = w * x + (1.0 - w) * y;
        a[j] = (1.0 - w) * x + w * y;
    }
    for i in (1..n).rev() {
        a.swap(i, rng.gen_range(0..=i));
    }
    (a, SortedVector::new(lambda).unwrap())
}

/// Positive weights strictly below `alpha`, entrywise.
pub fn shrink<R: Rng>(rng: &mut R, alpha: &[f64]) -> Vec<f64> {
    alpha.iter().map(|a| a * rng.gen_range(0.05..1.0)).collect()
}
