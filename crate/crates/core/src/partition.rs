//! Optimal weight partitions via recursive multi-water-filling.
//!
//! Given weights `α` (sorted, positive) and dimensions `d_1 ≥ … ≥ d_m`,
//! [`solve`] computes an `n × m` partition `A` whose rows sum to `α` and
//! whose column water-fillings `γ_j` give the optimal spectra. Column `m` is
//! built from the level-`m−1` output: the first `m−1` columns are deformed
//! along `t ↦ a_j(t)` and column `m` takes the residual mass. Each row
//! iteration solves one scalar equation `γ_top(t) = t` by bisection and the
//! level stops as soon as the residual column water-fills flat.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vecmaj::{kahan_sum, sort_desc, BlockVector, SortedVector};
use crate::waterfill::{water_fill, DeformationFamily};

/// Numerical knobs of the solver and of the post-hoc checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Root tolerance for `t`, relative to `max(1, γ'_top)`.
    pub t_tol: f64,
    /// Relative spread under which a spectrum counts as flat.
    pub flat_tol: f64,
    /// Relative gap under which adjacent spectral levels are merged.
    pub merge_tol: f64,
    /// Residual entries down to `-clamp_tol` (relative) are rounded to zero.
    pub clamp_tol: f64,
    pub max_bisect: usize,
    /// Relative tolerance for identities checked after the fact.
    pub verify_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            t_tol: 1e-12,
            flat_tol: 1e-9,
            merge_tol: 1e-7,
            clamp_tol: 1e-12,
            max_bisect: 200,
            verify_tol: 1e-8,
        }
    }
}

/// Validated problem data in canonical (non-increasing) order, together with
/// the permutations back to the caller's order.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInput {
    alpha: SortedVector,
    dims: Vec<usize>,
    alpha_perm: Vec<usize>,
    dims_perm: Vec<usize>,
}

impl ProblemInput {
    /// Weights and dimensions in any order.
    pub fn new(alpha: &[f64], dims: &[usize]) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidInput("no weights given".into()));
        }
        if dims.is_empty() {
            return Err(Error::InvalidInput("no dimensions given".into()));
        }
        if let Some(a) = alpha.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::InvalidInput(format!("weights must be finite and positive, got {a}")));
        }
        if dims.contains(&0) {
            return Err(Error::Dimension("dimensions must be at least 1".into()));
        }
        let (alpha_sorted, alpha_perm) = sort_desc(alpha)?;
        let mut order: Vec<usize> = (0..dims.len()).collect();
        order.sort_by(|&a, &b| dims[b].cmp(&dims[a]));
        let sorted_dims: Vec<usize> = order.iter().map(|&i| dims[i]).collect();
        let mut dims_perm = vec![0; dims.len()];
        for (pos, &orig) in order.iter().enumerate() {
            dims_perm[orig] = pos;
        }
        if sorted_dims[0] > alpha.len() {
            return Err(Error::Dimension(format!(
                "largest dimension {} exceeds the number of weights {}",
                sorted_dims[0],
                alpha.len()
            )));
        }
        Ok(Self {
            alpha: alpha_sorted,
            dims: sorted_dims,
            alpha_perm,
            dims_perm,
        })
    }

    pub fn alpha(&self) -> &SortedVector {
        &self.alpha
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `alpha_perm()[i]` is the canonical position of the caller's weight `i`.
    pub fn alpha_perm(&self) -> &[usize] {
        &self.alpha_perm
    }

    pub fn dims_perm(&self) -> &[usize] {
        &self.dims_perm
    }

    /// Weights in the caller's order.
    pub fn alpha_user(&self) -> Vec<f64> {
        self.alpha_perm.iter().map(|&p| self.alpha[p]).collect()
    }

    pub fn dims_user(&self) -> Vec<usize> {
        self.dims_perm.iter().map(|&p| self.dims[p]).collect()
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn m(&self) -> usize {
        self.dims.len()
    }

    /// `|d| = Σ d_j`.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// An `n × m` non-negative matrix whose rows sum to `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightPartition {
    matrix: DMatrix<f64>,
}

impl WeightPartition {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Self {
        Self { matrix }
    }

    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let n = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::InvalidInput("columns of unequal length".into()));
        }
        Ok(Self {
            matrix: DMatrix::from_fn(n, columns.len(), |i, j| columns[j][i]),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidInput("rows of unequal length".into()));
        }
        Ok(Self {
            matrix: DMatrix::from_fn(rows.len(), m, |i, j| rows[i][j]),
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn m(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.matrix.column(j).iter().copied().collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| self.matrix.row(i).iter().copied().collect())
            .collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n())
            .map(|i| kahan_sum(self.matrix.row(i).iter().copied()))
            .collect()
    }
}

/// `Γ↓ = (γ_ℓ 𝟙_{r_ℓ})_ℓ` with strictly decreasing levels, cut at indices
/// `g_1 < … < g_p = d_1` of the largest dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSpectrum {
    pub p: usize,
    pub levels: Vec<f64>,
    pub mults: Vec<usize>,
    /// `g_1, …, g_p` (the implicit `g_0 = 0` is not stored).
    pub cuts: Vec<usize>,
    /// `h_i = #{j : d_j ≥ i}` for `i = 1..=d_1`.
    pub h: Vec<usize>,
}

/// Output of [`solve`], in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSolution {
    pub input: ProblemInput,
    pub partition: WeightPartition,
    /// `γ_j`, the water-filling of column `j` in dimension `d_j`.
    pub spectra: Vec<SortedVector>,
    /// Fixed points `t_1 ≥ … ≥ t_k` of the last level (empty when `m = 1`).
    pub t_seq: Vec<f64>,
    /// Iteration `k` at which the last level stopped (0 when `m = 1`).
    pub stop_iteration: usize,
    /// `Γ↓`, all spectra concatenated and sorted.
    pub lambda: SortedVector,
    pub blocks: BlockSpectrum,
}

impl PartitionSolution {
    /// The partition with rows and columns in the caller's order.
    pub fn partition_user_order(&self) -> DMatrix<f64> {
        let ap = self.input.alpha_perm();
        let dp = self.input.dims_perm();
        let a = self.partition.matrix();
        DMatrix::from_fn(ap.len(), dp.len(), |i, j| a[(ap[i], dp[j])])
    }

    /// Spectra in the caller's group order.
    pub fn spectra_user_order(&self) -> Vec<SortedVector> {
        self.input
            .dims_perm()
            .iter()
            .map(|&p| self.spectra[p].clone())
            .collect()
    }
}

/// True when `max − min ≤ flat_tol · max`.
pub fn is_flat(gamma: &SortedVector, cfg: &ToleranceConfig) -> bool {
    match (gamma.first(), gamma.last()) {
        (Some(hi), Some(lo)) => hi - lo <= cfg.flat_tol * hi.abs(),
        _ => true,
    }
}

/// `α_i − Σ_j a_ij(t)`, the mass left for the new column at parameter `t`.
pub fn residual_column(
    families: &[DeformationFamily],
    alpha: &SortedVector,
    t: f64,
    cfg: &ToleranceConfig,
) -> Result<Vec<f64>> {
    let deformed = families
        .iter()
        .map(|f| f.deform_at(t))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(alpha.len());
    for i in 0..alpha.len() {
        let v = alpha[i] - kahan_sum(deformed.iter().map(|col| col[i]));
        let slack = cfg.clamp_tol * alpha[i].max(1.0);
        if v < -slack {
            return Err(Error::InvariantViolation(format!(
                "residual entry {i} is {v:e} at t = {t}"
            )));
        }
        out.push(v.max(0.0));
    }
    Ok(out)
}

fn sorted_tail(v: &[f64], start: usize, scale: f64, cfg: &ToleranceConfig) -> Result<SortedVector> {
    SortedVector::repair(v[start..].to_vec(), 1e3 * cfg.clamp_tol * scale.max(1.0))
}

/// Top entry of the residual water-filling for rows `row..` in dimension
/// `d_m − row`, minus `t`. Strictly decreasing in `t`.
fn fixed_point_gap(
    families: &[DeformationFamily],
    alpha: &SortedVector,
    d_m: usize,
    row: usize,
    t: f64,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    let resid = residual_column(families, alpha, t, cfg)?;
    let tail = sorted_tail(&resid, row, alpha[0], cfg)?;
    let wf = water_fill(&tail, d_m - row)?;
    Ok(wf.gamma[0] - t)
}

/// Solves `γ_top(t) = t` on `[0, γ'_{row,1}]` for row iteration `row`
/// (0-based) of a level whose new dimension is `d_m`.
pub fn find_t(
    families: &[DeformationFamily],
    alpha: &SortedVector,
    d_m: usize,
    row: usize,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    let first = families
        .first()
        .ok_or_else(|| Error::InvalidInput("no previous columns".into()))?;
    if row >= d_m {
        return Err(Error::Dimension(format!("row {row} outside dimension {d_m}")));
    }
    // the top levels agree in exact arithmetic; round-off in earlier levels
    // can leave some families marginally lower
    let hi0 = families
        .iter()
        .map(DeformationFamily::t_max)
        .fold(first.source_fill().gamma[row], f64::min);
    let tol = cfg.t_tol * hi0.max(1.0);
    let gap = |t: f64| fixed_point_gap(families, alpha, d_m, row, t, cfg);

    let (mut lo, mut hi) = (0.0f64, hi0);
    let (mut glo, mut ghi) = (gap(lo)?, gap(hi)?);
    if glo < -tol || ghi > tol {
        return Err(Error::InvariantViolation(format!(
            "fixed point not bracketed on [0, {hi0}]: g(0) = {glo}, g(hi) = {ghi}"
        )));
    }
    if glo.abs() <= tol {
        return Ok(lo);
    }
    if ghi.abs() <= tol {
        return Ok(hi);
    }

    // accept early only at round-off level; `tol` is the final bound
    let exact = 8.0 * f64::EPSILON * hi0.max(1.0);
    for _ in 0..cfg.max_bisect {
        if hi - lo <= tol {
            // g is piecewise linear, so a secant step on a small bracket is
            // usually exact
            let cand = lo + glo * (hi - lo) / (glo - ghi);
            if cand > lo && cand < hi && gap(cand)?.abs() <= exact {
                return Ok(cand);
            }
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // bracket collapsed to adjacent floats
            return Ok(if glo.abs() <= ghi.abs() { lo } else { hi });
        }
        let gm = gap(mid)?;
        if gm == 0.0 {
            return Ok(mid);
        }
        if gm > 0.0 {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
    }
    let (best, gbest) = if glo.abs() <= ghi.abs() { (lo, glo) } else { (hi, ghi) };
    if gbest.abs() <= tol {
        return Ok(best);
    }
    Err(Error::Convergence(format!(
        "no fixed point within {} bisection steps (bracket [{lo}, {hi}])",
        cfg.max_bisect
    )))
}

struct LevelOutput {
    columns: Vec<Vec<f64>>,
    t_seq: Vec<f64>,
    stop_iteration: usize,
}

/// One level of the recursion: previous columns in `families`, new column of
/// dimension `d_m`. Only the first-iteration families are evaluated; later
/// row iterations reuse them on shrinking index ranges.
fn solve_level(
    families: &[DeformationFamily],
    alpha: &SortedVector,
    d_m: usize,
    cfg: &ToleranceConfig,
) -> Result<LevelOutput> {
    let n = alpha.len();
    let prev = families.len();
    let mut columns = vec![vec![0.0; n]; prev + 1];
    let mut t_seq = Vec::new();

    for row in 0..d_m {
        let t = find_t(families, alpha, d_m, row, cfg)?;
        t_seq.push(t);
        let resid = residual_column(families, alpha, t, cfg)?;
        let tail = sorted_tail(&resid, row, alpha[0], cfg)?;
        let gamma = water_fill(&tail, d_m - row)?.gamma;
        let stop = is_flat(&gamma, cfg);
        let rows = if stop { row..n } else { row..row + 1 };
        for i in rows {
            for (j, fam) in families.iter().enumerate() {
                columns[j][i] = fam.entry_at(i, t);
            }
            columns[prev][i] = resid[i];
        }
        if stop {
            return Ok(LevelOutput {
                columns,
                t_seq,
                stop_iteration: row + 1,
            });
        }
    }
    Err(Error::InvariantViolation(format!(
        "level with dimension {d_m} never reached a flat residual"
    )))
}

/// Computes the optimal partition, its spectra and their block structure.
pub fn solve(input: &ProblemInput, cfg: &ToleranceConfig) -> Result<PartitionSolution> {
    let alpha = input.alpha();
    let dims = input.dims();
    let mut columns = vec![alpha.as_slice().to_vec()];
    let mut t_seq = Vec::new();
    let mut stop_iteration = 0;

    for level in 1..dims.len() {
        let families = columns
            .iter()
            .zip(dims)
            .map(|(col, &d)| {
                let sorted = SortedVector::repair(col.clone(), 1e3 * cfg.clamp_tol * alpha[0].max(1.0))?;
                DeformationFamily::new(sorted, d)
            })
            .collect::<Result<Vec<_>>>()?;
        let out = solve_level(&families, alpha, dims[level], cfg)?;
        columns = out.columns;
        t_seq = out.t_seq;
        stop_iteration = out.stop_iteration;
    }

    let partition = WeightPartition::from_columns(&columns)?;
    let spectra = column_spectra(&partition, dims)?;
    let lambda = concat_sorted(&spectra)?;
    let blocks = extract_blocks(&spectra, dims, alpha, cfg)?;
    Ok(PartitionSolution {
        input: input.clone(),
        partition,
        spectra,
        t_seq,
        stop_iteration,
        lambda,
        blocks,
    })
}

/// Water-filling of every column (sorted first) in its dimension.
pub fn column_spectra(partition: &WeightPartition, dims: &[usize]) -> Result<Vec<SortedVector>> {
    if partition.m() != dims.len() {
        return Err(Error::Dimension(format!(
            "{} columns but {} dimensions",
            partition.m(),
            dims.len()
        )));
    }
    dims.iter()
        .enumerate()
        .map(|(j, &d)| {
            let col = SortedVector::from_unsorted(&partition.column(j))?;
            Ok(water_fill(&col, d)?.gamma)
        })
        .collect()
}

pub(crate) fn concat_sorted(spectra: &[SortedVector]) -> Result<SortedVector> {
    let all: Vec<f64> = spectra.iter().flat_map(|s| s.as_slice().iter().copied()).collect();
    SortedVector::from_unsorted(&all)
}

/// `h_i = #{j : d_j ≥ i}` for `i = 1..=d_1`.
pub fn dimension_counts(dims: &[usize]) -> Vec<usize> {
    let d1 = dims.iter().copied().max().unwrap_or(0);
    (1..=d1).map(|i| dims.iter().filter(|&&d| d >= i).count()).collect()
}

/// `r_ℓ = Σ_j (min{g_ℓ, d_j} − g_{ℓ−1})^+` for cuts `g_1 < … < g_p`.
pub fn block_multiplicities(dims: &[usize], cuts: &[usize]) -> Vec<usize> {
    let mut prev = 0usize;
    cuts.iter()
        .map(|&g| {
            let r = dims.iter().map(|&d| g.min(d).saturating_sub(prev)).sum();
            prev = g;
            r
        })
        .collect()
}

/// Reads the block structure off the spectra and checks its four defining
/// identities:
///
/// * (a) `Γ↓ = (γ_ℓ 𝟙_{r_ℓ})_ℓ`;
/// * (b) `r_ℓ = Σ_j (min{g_ℓ, d_j} − g_{ℓ−1})^+`;
/// * (c) `r_ℓ γ_ℓ = Σ_{g_{ℓ−1} < i ≤ g_ℓ} α_i` for `ℓ < p`;
/// * (d) `r_p γ_p = Σ_{i > g_{p−1}} α_i`.
///
/// Any failure is a [`Error::Structure`].
pub fn extract_blocks(
    spectra: &[SortedVector],
    dims: &[usize],
    alpha: &SortedVector,
    cfg: &ToleranceConfig,
) -> Result<BlockSpectrum> {
    if spectra.len() != dims.len() || spectra.is_empty() {
        return Err(Error::Dimension("one spectrum per dimension required".into()));
    }
    for (j, (s, &d)) in spectra.iter().zip(dims).enumerate() {
        if s.len() != d {
            return Err(Error::Dimension(format!("spectrum {j} has length {} ≠ {d}", s.len())));
        }
    }
    let first = BlockVector::from_sorted(&spectra[0], cfg.merge_tol)?;
    let mut cuts = Vec::with_capacity(first.mults().len());
    let mut acc = 0;
    for &c in first.mults() {
        acc += c;
        cuts.push(acc);
    }
    let h = dimension_counts(dims);
    let mut prev = 0;
    let mults_h: Vec<usize> = cuts
        .iter()
        .map(|&g| {
            let r = h[prev..g].iter().sum();
            prev = g;
            r
        })
        .collect();
    let mults = block_multiplicities(dims, &cuts);
    if mults != mults_h {
        return Err(Error::Structure(format!(
            "(b) multiplicities {mults:?} disagree with column counts {mults_h:?}"
        )));
    }
    let levels = first.levels().to_vec();
    let p = levels.len();

    // (a)
    let lambda = concat_sorted(spectra)?;
    let scale = lambda.first().unwrap_or(1.0).abs().max(1.0);
    let expanded = BlockVector::new(levels.clone(), mults.clone())?.expand();
    if expanded.len() != lambda.len() {
        return Err(Error::Structure(format!(
            "(a) multiplicities sum to {} but |d| = {}",
            expanded.len(),
            lambda.len()
        )));
    }
    if let Some(i) = (0..lambda.len())
        .find(|&i| (lambda[i] - expanded[i]).abs() > cfg.verify_tol * scale)
    {
        return Err(Error::Structure(format!(
            "(a) sorted spectrum entry {i} is {} but block form gives {}",
            lambda[i], expanded[i]
        )));
    }

    // (c), (d)
    let mut start = 0;
    for l in 0..p {
        let end = if l + 1 == p { alpha.len() } else { cuts[l] };
        let mass = kahan_sum(alpha.as_slice()[start..end].iter().copied());
        let lhs = mults[l] as f64 * levels[l];
        if (lhs - mass).abs() > cfg.verify_tol * mass.abs().max(1.0) {
            let which = if l + 1 == p { "(d)" } else { "(c)" };
            return Err(Error::Structure(format!(
                "{which} block {}: r·γ = {lhs} but weight mass is {mass}",
                l + 1
            )));
        }
        start = cuts[l];
    }

    Ok(BlockSpectrum {
        p,
        levels,
        mults,
        cuts,
        h,
    })
}

/// One named check of [`verify_solution`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }
}

fn outcome(name: &str, failure: Option<String>) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: failure.is_none(),
        detail: failure.unwrap_or_else(|| "ok".into()),
    }
}

/// Re-derives every structural property of a solution from its partition.
///
/// Spectra are recomputed from the partition columns, so a tampered
/// partition shows up even when the stored spectra are untouched.
pub fn verify_solution(
    input: &ProblemInput,
    solution: &PartitionSolution,
    cfg: &ToleranceConfig,
) -> VerifyReport {
    let tol = cfg.verify_tol;
    let alpha = input.alpha();
    let dims = input.dims();
    let part = &solution.partition;
    let mut checks = Vec::new();

    let shape_ok = part.n() == input.n() && part.m() == input.m();
    checks.push(outcome(
        "shape",
        (!shape_ok).then(|| {
            format!(
                "partition is {}×{}, expected {}×{}",
                part.n(),
                part.m(),
                input.n(),
                input.m()
            )
        }),
    ));
    if !shape_ok {
        return VerifyReport { checks };
    }

    let neg = part.matrix().iter().copied().fold(0.0f64, f64::min);
    checks.push(outcome(
        "nonnegative",
        (neg < -tol).then(|| format!("entry {neg} is negative")),
    ));

    let row_fail = part
        .row_sums()
        .iter()
        .enumerate()
        .find(|(i, s)| (*s - alpha[*i]).abs() > tol * alpha[*i].max(1.0))
        .map(|(i, s)| format!("row {} sums to {s}, weight is {}", i + 1, alpha[i]));
    checks.push(outcome("row_sums", row_fail));

    let recomputed = match column_spectra(part, dims) {
        Ok(s) => s,
        Err(e) => {
            checks.push(outcome("column_waterfill", Some(e.to_string())));
            return VerifyReport { checks };
        }
    };
    let scale = alpha[0].max(1.0);

    let wf_fail = (|| {
        if solution.spectra.len() != recomputed.len() {
            return Some(format!(
                "{} stored spectra for {} groups",
                solution.spectra.len(),
                recomputed.len()
            ));
        }
        for (j, (s, r)) in solution.spectra.iter().zip(&recomputed).enumerate() {
            if s.len() != r.len() {
                return Some(format!("spectrum {} has length {}", j + 1, s.len()));
            }
            for i in 0..s.len() {
                if (s[i] - r[i]).abs() > tol * scale {
                    return Some(format!(
                        "group {} entry {}: stored {} but column water-fills to {}",
                        j + 1,
                        i + 1,
                        s[i],
                        r[i]
                    ));
                }
            }
        }
        None
    })();
    checks.push(outcome("column_waterfill", wf_fail));

    let inter_fail = (|| {
        for s in 1..recomputed.len() {
            for r in 0..s {
                let pairs = recomputed[r].as_slice().iter().zip(recomputed[s].as_slice());
                for (i, (a, b)) in pairs.enumerate() {
                    if (a - b).abs() > tol * scale {
                        return Some(format!(
                            "γ[{}][{}] = {a} differs from γ[{}][{}] = {b}",
                            r + 1,
                            i + 1,
                            s + 1,
                            i + 1
                        ));
                    }
                }
            }
        }
        None
    })();
    checks.push(outcome("interleaving", inter_fail));

    let t = &solution.t_seq;
    let t_fail = t
        .windows(2)
        .position(|w| w[1] > w[0] + tol * scale)
        .map(|i| format!("t[{}] = {} < t[{}] = {}", i + 1, t[i], i + 2, t[i + 1]))
        .or_else(|| {
            t.iter()
                .position(|&v| v < -tol)
                .map(|i| format!("t[{}] = {} is negative", i + 1, t[i]))
        });
    checks.push(outcome("t_monotone", t_fail));

    let m = input.m() as f64;
    let top = solution.stop_iteration.saturating_sub(1).min(input.n());
    let top_fail = (0..top)
        .flat_map(|i| (0..input.m()).map(move |j| (i, j)))
        .find(|&(i, j)| (part.get(i, j) - alpha[i] / m).abs() > tol * scale)
        .map(|(i, j)| {
            format!(
                "a[{}][{}] = {} but α_i/m = {}",
                i + 1,
                j + 1,
                part.get(i, j),
                alpha[i] / m
            )
        });
    checks.push(outcome("top_rows", top_fail));

    checks.push(outcome(
        "block_identities",
        extract_blocks(&recomputed, dims, alpha, cfg).err().map(|e| e.to_string()),
    ));

    let min_lambda = recomputed
        .iter()
        .filter_map(|s| s.last())
        .fold(f64::INFINITY, f64::min);
    checks.push(outcome(
        "lambda_positive",
        (min_lambda <= 0.0).then(|| format!("smallest eigenvalue {min_lambda} is not positive")),
    ));

    VerifyReport { checks }
}
