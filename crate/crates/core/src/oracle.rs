//! Randomized and exhaustive checks that computed designs are optimal.
//!
//! Every trial draws from its own ChaCha stream (`seed`, stream = trial
//! index), so reports are identical whether trials run serially or on the
//! rayon pool.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{solve, ProblemInput, ToleranceConfig, WeightPartition};
use crate::potentials::{joint_potential, lambda_vector, Potential};
use crate::synth::FrameFamily;
use crate::vecmaj::{majorizes, SortedVector};

#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: usize,
    pub potentials: Vec<Potential>,
    pub tol: f64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 1000,
            potentials: vec![Potential::frame(), Potential::mse(), Potential::power(3.0)],
            tol: 1e-9,
        }
    }
}

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Splits every weight among `m` columns with random positive proportions.
pub fn random_partition<R: Rng>(alpha: &[f64], m: usize, rng: &mut R) -> Result<WeightPartition> {
    if m == 0 {
        return Err(Error::InvalidInput("need at least one column".into()));
    }
    if let Some(a) = alpha.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
        return Err(Error::InvalidInput(format!("weight {a} is not positive")));
    }
    let rows: Vec<Vec<f64>> = alpha
        .iter()
        .map(|&a| {
            let w: Vec<f64> = (0..m).map(|_| rng.gen::<f64>() + f64::MIN_POSITIVE).collect();
            let total: f64 = w.iter().sum();
            let mut row: Vec<f64> = w[..m - 1].iter().map(|x| a * x / total).collect();
            let rest = a - row.iter().sum::<f64>();
            row.push(rest.max(0.0));
            row
        })
        .collect();
    WeightPartition::from_rows(&rows)
}

fn random_direction<R: Rng>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Vector `i` of group `j` points in a uniformly random direction of
/// `ℝ^{d_j}` and has squared norm `A_ij`.
pub fn random_design<R: Rng>(a: &WeightPartition, dims: &[usize], rng: &mut R) -> Result<Vec<FrameFamily>> {
    if a.m() != dims.len() {
        return Err(Error::Dimension(format!("{} columns for {} groups", a.m(), dims.len())));
    }
    dims.iter()
        .enumerate()
        .map(|(j, &d)| {
            let vectors: Vec<Vec<f64>> = (0..a.n())
                .map(|i| {
                    let w = a.get(i, j);
                    if w == 0.0 {
                        vec![0.0; d]
                    } else {
                        let s = w.sqrt();
                        random_direction(d, rng).into_iter().map(|x| x * s).collect()
                    }
                })
                .collect();
            FrameFamily::from_vectors(d, &vectors)
        })
        .collect()
}

/// Random weights in `(0, 10]` with up to `n_max` entries and up to `m_max`
/// groups of admissible dimensions.
pub fn random_instance<R: Rng>(rng: &mut R, n_max: usize, m_max: usize) -> (Vec<f64>, Vec<usize>) {
    let n = rng.gen_range(1..=n_max);
    let m = rng.gen_range(1..=m_max);
    let alpha = (0..n).map(|_| 10.0 * (1.0 - rng.gen::<f64>())).collect();
    let dims = (0..m).map(|_| rng.gen_range(1..=n)).collect();
    (alpha, dims)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialTally {
    pub name: String,
    pub optimal: f64,
    pub min_trial: f64,
    pub violations: usize,
    /// Trial designs outside the potential's domain (counted as `+∞`).
    pub undefined: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalityReport {
    pub trials: usize,
    pub majorization_violations: usize,
    pub potentials: Vec<PotentialTally>,
}

impl OptimalityReport {
    pub fn violations(&self) -> usize {
        self.majorization_violations + self.potentials.iter().map(|p| p.violations).sum::<usize>()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }
}

struct TrialOutcome {
    majorized: bool,
    values: Vec<Option<f64>>,
}

/// Draws `cfg.trials` random designs and counts those that beat the computed
/// optimum, either in majorization or in any of `cfg.potentials`.
pub fn optimality_trial(input: &ProblemInput, cfg: &TrialConfig) -> Result<OptimalityReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let sol = solve(input, &ToleranceConfig::default())?;
    let lambda_op = sol.lambda.as_slice().to_vec();
    let trace: f64 = input.alpha().trace();
    let maj_tol = cfg.tol * trace.max(1.0);
    let op_spec = crate::potentials::SpectrumVector::from_groups(sol.spectra.clone());
    let optimal = cfg
        .potentials
        .iter()
        .map(|p| joint_potential(&op_spec, p))
        .collect::<Result<Vec<_>>>()?;

    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(cfg.seed, k as u64);
            let a = random_partition(input.alpha().as_slice(), input.m(), &mut rng)?;
            let design = random_design(&a, input.dims(), &mut rng)?;
            let lam = lambda_vector(&design)?;
            let majorized = majorizes(&lam.concatenated, &lambda_op, maj_tol)?;
            let values = cfg
                .potentials
                .iter()
                .map(|p| match joint_potential(&lam, p) {
                    Ok(v) => Ok(Some(v)),
                    Err(Error::Domain(_)) => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TrialOutcome { majorized, values })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut tallies: Vec<PotentialTally> = cfg
        .potentials
        .iter()
        .zip(&optimal)
        .map(|(p, &v)| PotentialTally {
            name: p.name().to_string(),
            optimal: v,
            min_trial: f64::INFINITY,
            violations: 0,
            undefined: 0,
        })
        .collect();
    let mut majorization_violations = 0;
    for out in &outcomes {
        if !out.majorized {
            majorization_violations += 1;
        }
        for (t, v) in tallies.iter_mut().zip(&out.values) {
            match v {
                Some(v) => {
                    t.min_trial = t.min_trial.min(*v);
                    if t.optimal > v + cfg.tol * t.optimal.abs().max(1.0) {
                        t.violations += 1;
                    }
                }
                None => t.undefined += 1,
            }
        }
    }
    Ok(OptimalityReport {
        trials: cfg.trials,
        majorization_violations,
        potentials: tallies,
    })
}

/// Water-filling of an arbitrary non-negative column, by trying every
/// number of untouched top entries.
fn grid_water_fill(col: &[f64], d: usize) -> Vec<f64> {
    let mut c = col.to_vec();
    c.sort_by(|a, b| b.total_cmp(a));
    let n = c.len();
    for k in 0..d {
        let level = c[k..].iter().sum::<f64>() / (d - k) as f64;
        let above_ok = k == 0 || c[k - 1] >= level;
        if above_ok && level >= c[k] {
            let mut out = c[..k].to_vec();
            out.extend(std::iter::repeat_n(level, d - k));
            return out;
        }
    }
    debug_assert!(d <= n);
    c.truncate(d);
    c
}

/// Minimum of the joint potential over the grid of two-column partitions
/// `A = [t ⊙ α, (1 − t) ⊙ α]`, `t_i ∈ {0, 1/g, …, 1}`, each column paired
/// with its water-filling. Only `n ≤ 3`, `m = 2`.
pub fn brute_force_small(input: &ProblemInput, grid_steps: usize, pot: &Potential) -> Result<f64> {
    let n = input.n();
    if n > 3 || input.m() != 2 {
        return Err(Error::InvalidInput(format!(
            "grid search needs n ≤ 3 and two groups, got n = {n}, m = {}",
            input.m()
        )));
    }
    if grid_steps == 0 {
        return Err(Error::InvalidInput("grid needs at least one step".into()));
    }
    let alpha = input.alpha().as_slice();
    let (d1, d2) = (input.dims()[0], input.dims()[1]);
    let g = grid_steps + 1;
    let cells = g.pow(n as u32);
    let best = (0..cells)
        .into_par_iter()
        .map(|mut code| {
            let mut c1 = [0.0; 3];
            let mut c2 = [0.0; 3];
            for i in 0..n {
                let t = (code % g) as f64 / grid_steps as f64;
                code /= g;
                c1[i] = t * alpha[i];
                c2[i] = alpha[i] - c1[i];
            }
            let s1 = grid_water_fill(&c1[..n], d1);
            let s2 = grid_water_fill(&c2[..n], d2);
            s1.iter()
                .chain(&s2)
                .map(|&x| pot.eval(x))
                .sum::<Result<f64>>()
                .unwrap_or(f64::INFINITY)
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub checked: usize,
    pub violations: usize,
    /// Largest `δ_ij − γ_ij` seen (negative when dominance is strict).
    pub max_excess: f64,
    pub larger: Vec<Vec<f64>>,
    pub smaller: Vec<Vec<f64>>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Compares the optimal spectra for `α` and for a smaller `β ≤ α`
/// (entrywise after sorting), same dimensions.
pub fn monotonicity_trial(alpha: &[f64], beta: &[f64], dims: &[usize], tol: f64) -> Result<MonotonicityReport> {
    if alpha.len() != beta.len() {
        return Err(Error::Dimension(format!(
            "{} weights against {}",
            alpha.len(),
            beta.len()
        )));
    }
    let a = ProblemInput::new(alpha, dims)?;
    let b = ProblemInput::new(beta, dims)?;
    if let Some(i) = (0..a.n()).find(|&i| b.alpha()[i] > a.alpha()[i]) {
        return Err(Error::InvalidInput(format!(
            "sorted β_{} = {} exceeds α_{} = {}",
            i + 1,
            b.alpha()[i],
            i + 1,
            a.alpha()[i]
        )));
    }
    let cfg = ToleranceConfig::default();
    let sa = solve(&a, &cfg)?;
    let sb = solve(&b, &cfg)?;
    let slack = tol * a.alpha()[0].max(1.0);
    let mut checked = 0;
    let mut violations = 0;
    let mut max_excess = f64::NEG_INFINITY;
    for (ga, gb) in sa.spectra.iter().zip(&sb.spectra) {
        for i in 0..ga.len() {
            let excess = gb[i] - ga[i];
            checked += 1;
            max_excess = max_excess.max(excess);
            if excess > slack {
                violations += 1;
            }
        }
    }
    let rows = |s: &[SortedVector]| s.iter().map(|g| g.as_slice().to_vec()).collect();
    Ok(MonotonicityReport {
        checked,
        violations,
        max_excess,
        larger: rows(&sa.spectra),
        smaller: rows(&sb.spectra),
    })
}
