//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

mod common;

use std::time::{Duration, Instant};

use common::*;
use optframe::oracle::{brute_force_small, monotonicity_trial, optimality_trial, random_instance, TrialConfig};
use optframe::partition::{block_multiplicities, solve, verify_solution, ProblemInput, ToleranceConfig};
use optframe::potentials::{potential_of, Potential};
use optframe::synth::{frame_operator, schur_horn_vectors, sym_eigenvalues};
use optframe::waterfill::{water_fill, DeformationFamily};
use optframe::SortedVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SPECTRUM_ABS_TOL: f64 = 1e-9;
const SMALL_BUDGET: Duration = Duration::from_millis(10);
const TABLE_TOL: f64 = 1e-3;
const LEVEL_TOL: f64 = 1e-4;
const THREE_GROUP_BUDGET: Duration = Duration::from_millis(50);
const MONO_CASES: usize = 100;
const MONO_TOL: f64 = 1e-9;
const BLOCK_CASES: usize = 200;
const BLOCK_REL_TOL: f64 = 1e-8;
const SAMPLE_TRIALS: usize = 1000;
const SAMPLE_SEED: u64 = 20240601;
const SAMPLE_BUDGET: Duration = Duration::from_secs(30);
const GRID_STEPS: usize = 200;
const GRID_TOL: f64 = 1e-3;
const SYNTH_CASES: usize = 500;
const NORM_REL_TOL: f64 = 1e-10;
const SYNTH_SPECTRUM_REL_TOL: f64 = 1e-8;
const PARSEVAL_TOL: f64 = 1e-10;
const WF_CASES: usize = 1000;
const WF_REL_TOL: f64 = 1e-12;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn timed_solve(alpha: &[f64], dims: &[usize]) -> Result<(optframe::PartitionSolution, Duration), String> {
    let input = ProblemInput::new(alpha, dims).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let sol = solve(&input, &cfg()).map_err(|e| e.to_string())?;
    Ok((sol, start.elapsed()))
}

fn check_table<const M: usize>(sol: &optframe::PartitionSolution, table: &[[f64; M]]) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for (i, row) in table.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            let got = sol.partition.get(i, j);
            worst = worst.max((got - want).abs());
            ensure((got - want).abs() <= TABLE_TOL, || {
                format!("a[{}][{}] = {got:.6}, table has {want}", i + 1, j + 1)
            })?;
        }
    }
    Ok(worst)
}

fn check_levels(sol: &optframe::PartitionSolution, levels: &[(usize, f64)]) -> Result<(), String> {
    // (first index in every spectrum, level) pairs; the level holds up to
    // the next listed index or the end of the spectrum
    for (j, gamma) in sol.spectra.iter().enumerate() {
        for i in 0..gamma.len() {
            let want = levels.iter().rev().find(|(from, _)| *from <= i).unwrap().1;
            ensure((gamma[i] - want).abs() <= LEVEL_TOL, || {
                format!("γ[{}][{}] = {:.6}, expected {want:.6}", j + 1, i + 1, gamma[i])
            })?;
        }
    }
    Ok(())
}

fn small_example() -> Outcome {
    let (sol, elapsed) = timed_solve(&SMALL_ALPHA, &SMALL_DIMS)?;
    let want = [6.0, 6.0, 6.0, 6.0, 6.0, 2.0];
    ensure(sol.lambda.len() == want.len(), || format!("Λ has length {}", sol.lambda.len()))?;
    let dev = sol
        .lambda
        .as_slice()
        .iter()
        .zip(want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    ensure(dev <= SPECTRUM_ABS_TOL, || format!("Λ = {:?}", sol.lambda.as_slice()))?;
    ensure(elapsed < SMALL_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("max |ΔΛ| = {dev:.1e}, {elapsed:?}"))
}

fn three_group_table() -> Outcome {
    let (sol, elapsed) = timed_solve(&THREE_GROUP_ALPHA, &THREE_GROUP_DIMS)?;
    let worst = check_table(&sol, &THREE_GROUP_TABLE)?;
    check_levels(&sol, &[(0, 3.0), (1, 33.1 / 12.0)])?;
    let report = verify_solution(&sol.input, &sol, &cfg());
    ensure(report.passed(), || format!("verification failed: {:?}", report.failed()))?;
    ensure(elapsed < THREE_GROUP_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("max table deviation {worst:.1e}, {elapsed:?}"))
}

fn three_group_light_spectra() -> Outcome {
    let (sol, _) = timed_solve(&THREE_GROUP_LIGHT_ALPHA, &THREE_GROUP_DIMS)?;
    check_levels(&sol, &[(0, 8.5 / 3.0), (1, 7.0 / 3.0), (2, 20.7 / 9.0)])?;
    Ok(format!("levels {:?}", sol.blocks.levels))
}

fn five_group_table() -> Outcome {
    let (sol, _) = timed_solve(&FIVE_GROUP_ALPHA, &FIVE_GROUP_DIMS)?;
    let worst = check_table(&sol, &FIVE_GROUP_TABLE)?;
    for i in 2..FIVE_GROUP_ALPHA.len() {
        ensure(sol.partition.get(i, 4) == 0.0, || {
            format!("last column has {} at row {}", sol.partition.get(i, 4), i + 1)
        })?;
    }
    check_levels(&sol, &[(0, 4.0), (1, 3.9), (2, 26.9 / 8.0)])?;
    let report = verify_solution(&sol.input, &sol, &cfg());
    ensure(report.passed(), || format!("verification failed: {:?}", report.failed()))?;
    Ok(format!("max table deviation {worst:.1e}"))
}

fn monotonicity() -> Outcome {
    let r = monotonicity_trial(&THREE_GROUP_ALPHA, &THREE_GROUP_LIGHT_ALPHA, &THREE_GROUP_DIMS, MONO_TOL)
        .map_err(|e| e.to_string())?;
    ensure(r.passed(), || format!("table instances: {} violations", r.violations))?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut violations = 0;
    for _ in 0..MONO_CASES {
        let (alpha, dims) = random_instance(&mut rng, 10, 4);
        let beta = shrink(&mut rng, &alpha);
        let r = monotonicity_trial(&alpha, &beta, &dims, MONO_TOL).map_err(|e| e.to_string())?;
        violations += r.violations;
    }
    ensure(violations == 0, || format!("{violations} entrywise violations"))?;
    Ok(format!("{MONO_CASES} random pairs, 0 violations"))
}

fn block_identities() -> Outcome {
    let r = block_multiplicities(&[6, 5, 4, 2], &[3, 5, 6]);
    ensure(r == vec![11, 5, 1], || format!("multiplicities {r:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let c = ToleranceConfig {
        verify_tol: BLOCK_REL_TOL,
        ..cfg()
    };
    for case in 0..BLOCK_CASES {
        let (alpha, dims) = random_instance(&mut rng, 12, 5);
        let input = ProblemInput::new(&alpha, &dims).map_err(|e| e.to_string())?;
        let sol = solve(&input, &c).map_err(|e| format!("case {case} {alpha:?} {dims:?}: {e}"))?;
        let report = verify_solution(&input, &sol, &c);
        ensure(report.passed(), || {
            format!("case {case} {alpha:?} {dims:?}: {:?}", report.failed())
        })?;
    }
    Ok(format!("{BLOCK_CASES} random instances, multiplicities (11, 5, 1) from cuts (3, 5, 6)"))
}

fn optimality_sampling() -> Outcome {
    let instances: [(&[f64], &[usize]); 6] = [
        (&SMALL_ALPHA, &SMALL_DIMS),
        (&THREE_GROUP_ALPHA, &THREE_GROUP_DIMS),
        (&THREE_GROUP_LIGHT_ALPHA, &THREE_GROUP_DIMS),
        (&FIVE_GROUP_ALPHA, &FIVE_GROUP_DIMS),
        (&UNIFORM_ALPHA, &UNIFORM_DIMS),
        (&SMALL_ALPHA, &[4]),
    ];
    let start = Instant::now();
    let tc = TrialConfig {
        seed: SAMPLE_SEED,
        trials: SAMPLE_TRIALS,
        ..TrialConfig::default()
    };
    let mut undefined = 0;
    for (alpha, dims) in instances {
        let input = ProblemInput::new(alpha, dims).map_err(|e| e.to_string())?;
        let r = optimality_trial(&input, &tc).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{alpha:?} {dims:?}: {r:?}"))?;
        undefined += r.potentials.iter().map(|p| p.undefined).sum::<usize>();
        if alpha == UNIFORM_ALPHA {
            let fp = &r.potentials[0];
            ensure(fp.min_trial >= 6.0 - 1e-9, || format!("trial frame potential {}", fp.min_trial))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SAMPLE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} instances × {SAMPLE_TRIALS} trials × 3 potentials, 0 violations ({undefined} singular trials), {elapsed:.1?}",
        instances.len()
    ))
}

fn grid_oracle() -> Outcome {
    let cases: [(&[f64], &[usize]); 8] = [
        (&[2.0, 1.0], &[1, 1]),
        (&[1.0, 1.0], &[1, 1]),
        (&[10.0, 10.0, 10.0], &[1, 1]),
        (&[10.0, 10.0, 10.0], &[2, 1]),
        (&[10.0, 10.0, 10.0], &[2, 2]),
        (&[3.0, 2.0, 0.5], &[2, 1]),
        (&[5.0, 1.0, 1.0], &[2, 2]),
        (&[4.0, 1.0], &[2, 1]),
    ];
    let fp = Potential::frame();
    let mut worst = f64::NEG_INFINITY;
    for (alpha, dims) in cases {
        let input = ProblemInput::new(alpha, dims).map_err(|e| e.to_string())?;
        let sol = solve(&input, &cfg()).map_err(|e| e.to_string())?;
        let ours = potential_of(sol.lambda.as_slice(), &fp).map_err(|e| e.to_string())?;
        let grid = brute_force_small(&input, GRID_STEPS, &fp).map_err(|e| e.to_string())?;
        ensure(grid - ours >= -GRID_TOL, || format!("{alpha:?} {dims:?}: grid {grid} < ours {ours}"))?;
        worst = worst.max(grid - ours);
    }
    Ok(format!("{} instances, largest grid excess {worst:.1e}", cases.len()))
}

fn synthesis_fidelity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut norm_dev, mut spec_dev) = (0.0f64, 0.0f64);
    for case in 0..SYNTH_CASES {
        let (a, lambda) = random_feasible(&mut rng, 8, 8);
        let f = schur_horn_vectors(&a, &lambda, 1e-9).map_err(|e| format!("case {case}: {e}"))?;
        for (got, want) in f.norms_sq().iter().zip(&a) {
            let dev = (got - want).abs() / want.max(1.0);
            norm_dev = norm_dev.max(dev);
            ensure(dev <= NORM_REL_TOL, || format!("case {case}: norm {got} vs {want}"))?;
        }
        let eig = sym_eigenvalues(&frame_operator(&f), 1e-12).map_err(|e| e.to_string())?;
        for i in 0..lambda.len() {
            let dev = (eig[i] - lambda[i]).abs() / lambda[0].max(1.0);
            spec_dev = spec_dev.max(dev);
            ensure(dev <= SYNTH_SPECTRUM_REL_TOL, || format!("case {case}: λ {} vs {}", eig[i], lambda[i]))?;
        }
    }
    let f = schur_horn_vectors(&[1.0, 1.0, 1.0, 1.0, 0.0, 0.0], &SortedVector::constant(1.0, 4), 1e-12)
        .map_err(|e| e.to_string())?;
    let s = frame_operator(&f);
    let parseval = (s - nalgebra::DMatrix::<f64>::identity(4, 4)).amax();
    ensure(parseval <= PARSEVAL_TOL, || format!("‖S − I‖_max = {parseval}"))?;
    Ok(format!(
        "{SYNTH_CASES} pairs, norm dev {norm_dev:.1e}, spectrum dev {spec_dev:.1e}, Parseval dev {parseval:.1e}"
    ))
}

fn rel_close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= WF_REL_TOL * scale.max(1.0)
}

fn water_filling_properties() -> Outcome {
    let weights = SortedVector::new(vec![10.0, 8.5, 7.0, 5.0, 3.8, 3.8, 2.4, 2.0, 1.7, 0.8]).unwrap();
    let wf = water_fill(&weights, 6).map_err(|e| e.to_string())?;
    ensure(rel_close(wf.level, 6.5, 6.5), || format!("level {}", wf.level))?;

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let sorted = |v: Vec<f64>| SortedVector::from_unsorted(&v).unwrap();
    for case in 0..WF_CASES {
        let n = rng.gen_range(1..=12);
        let d = rng.gen_range(1..=n);
        let alpha = sorted((0..n).map(|_| rng.gen_range(0.0..10.0)).collect());
        let scale = alpha[0].max(1.0);
        let gamma = water_fill(&alpha, d).map_err(|e| e.to_string())?.gamma;
        let fail = |what: &str| format!("case {case}: {what} for α = {:?}, d = {d}", alpha.as_slice());

        let s = rng.gen_range(0.0..5.0);
        let scaled = water_fill(&alpha.scaled(s), d).map_err(|e| e.to_string())?.gamma;
        ensure((0..d).all(|i| rel_close(scaled[i], s * gamma[i], s * scale)), || fail("scaling"))?;

        let beta = sorted(alpha.as_slice().iter().map(|a| a * rng.gen_range(0.0..1.0)).collect());
        // sorting a dominated vector keeps it dominated
        let gb = water_fill(&beta, d).map_err(|e| e.to_string())?.gamma;
        ensure((0..d).all(|i| gb[i] <= gamma[i] + WF_REL_TOL * scale), || fail("monotonicity"))?;

        if gamma[0] - gamma[d - 1] <= WF_REL_TOL * scale {
            let d2 = rng.gen_range(1..=d);
            let g2 = water_fill(&alpha, d2).map_err(|e| e.to_string())?.gamma;
            ensure(
                g2[0] - g2[d2 - 1] <= WF_REL_TOL * scale && g2[0] >= gamma[0] - WF_REL_TOL * scale,
                || fail("dimension reduction"),
            )?;
        }

        let fam = DeformationFamily::new(alpha.clone(), d).map_err(|e| e.to_string())?;
        let t = rng.gen_range(0.0..=fam.t_max());
        let deformed = sorted(fam.deform_at(t).map_err(|e| e.to_string())?);
        let direct = water_fill(&deformed, d).map_err(|e| e.to_string())?.gamma;
        let truncated = fam.deformed_spectrum(t).map_err(|e| e.to_string())?;
        ensure(
            (0..d).all(|i| rel_close(direct[i], truncated[i], scale) && rel_close(truncated[i], gamma[i].min(t), scale)),
            || fail("deformation identity"),
        )?;
    }
    Ok(format!("level 6.5 (dev {:.1e}), {WF_CASES} random cases", (wf.level - 6.5).abs()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("small example spectrum", small_example),
        ("three-group partition table", three_group_table),
        ("three-group lighter weights spectra", three_group_light_spectra),
        ("five-group partition table", five_group_table),
        ("spectral monotonicity", monotonicity),
        ("block-structure identities", block_identities),
        ("optimality sampling", optimality_sampling),
        ("grid oracle", grid_oracle),
        ("synthesis fidelity", synthesis_fidelity),
        ("water-filling properties", water_filling_properties),
    ];
    let mut failures = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS  {:>2}  {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {:>2}  {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
