//! Sorted vectors, block vectors and (sub)majorization predicates.
//!
//! All comparisons work on the non-increasing rearrangement `x↓` of their
//! arguments. Partial sums use compensated summation so that golden values
//! computed on ~20 entries stay reproducible to the last couple of ulps.

use crate::error::{Error, Result};

/// Relative tolerance used by [`default_tol`].
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Default comparison tolerance for majorization checks against `y`:
/// `1e-9 * max(1, |tr y|)`.
pub fn default_tol(y: &[f64]) -> f64 {
    DEFAULT_REL_TOL * kahan_sum(y.iter().copied()).abs().max(1.0)
}

/// Compensated (Kahan–Babuška/Neumaier) sum.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Compensated running partial sums: `out[k] = x[0] + ... + x[k]`.
pub fn partial_sums(x: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len());
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in x {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
        out.push(sum + comp);
    }
    out
}

fn check_finite(x: &[f64], what: &str) -> Result<()> {
    if let Some(v) = x.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("{what} contains non-finite entry {v}")));
    }
    Ok(())
}

/// A vector whose entries are finite and arranged in non-increasing order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SortedVector(Vec<f64>);

impl SortedVector {
    /// Wraps `entries`, failing if they are not finite and non-increasing.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        check_finite(&entries, "vector")?;
        if let Some(w) = entries.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "entries not non-increasing at index {}: {} < {}",
                w,
                entries[w],
                entries[w + 1]
            )));
        }
        Ok(Self(entries))
    }

    /// Sorts arbitrary finite entries into non-increasing order.
    pub fn from_unsorted(entries: &[f64]) -> Result<Self> {
        Ok(sort_desc(entries)?.0)
    }

    /// Accepts a vector that is non-increasing up to `tol` and removes the
    /// residual inversions by lowering the later entry. Rows keep their
    /// positions, which matters for weight columns.
    pub fn repair(mut entries: Vec<f64>, tol: f64) -> Result<Self> {
        check_finite(&entries, "vector")?;
        for i in 1..entries.len() {
            if entries[i] > entries[i - 1] {
                if entries[i] - entries[i - 1] > tol {
                    return Err(Error::InvariantViolation(format!(
                        "entry {} exceeds its predecessor by {:e}",
                        i,
                        entries[i] - entries[i - 1]
                    )));
                }
                entries[i] = entries[i - 1];
            }
        }
        Ok(Self(entries))
    }

    pub fn constant(value: f64, len: usize) -> Self {
        Self(vec![value; len])
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn trace(&self) -> f64 {
        kahan_sum(self.0.iter().copied())
    }

    pub fn first(&self) -> Option<f64> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<f64> {
        self.0.last().copied()
    }

    /// Entries from `start` on; still non-increasing.
    pub fn tail(&self, start: usize) -> SortedVector {
        SortedVector(self.0[start.min(self.0.len())..].to_vec())
    }

    /// Multiplies every entry by a non-negative factor.
    pub fn scaled(&self, factor: f64) -> SortedVector {
        debug_assert!(factor >= 0.0);
        SortedVector(self.0.iter().map(|v| v * factor).collect())
    }
}

impl std::ops::Index<usize> for SortedVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl AsRef<[f64]> for SortedVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A non-increasing vector stored as strictly decreasing levels with
/// multiplicities, `(γ_1 𝟙_{r_1}, …, γ_p 𝟙_{r_p})`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector {
    levels: Vec<f64>,
    mults: Vec<usize>,
}

impl BlockVector {
    pub fn new(levels: Vec<f64>, mults: Vec<usize>) -> Result<Self> {
        if levels.len() != mults.len() || levels.is_empty() {
            return Err(Error::InvalidInput(format!(
                "block vector needs matching non-empty levels/multiplicities, got {} and {}",
                levels.len(),
                mults.len()
            )));
        }
        check_finite(&levels, "levels")?;
        if levels.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidInput("levels must be strictly decreasing".into()));
        }
        if mults.contains(&0) {
            return Err(Error::InvalidInput("multiplicities must be positive".into()));
        }
        Ok(Self { levels, mults })
    }

    /// Groups adjacent entries of a sorted vector that differ by at most
    /// `rel_tol * |entry|`. Each group keeps its mean value.
    pub fn from_sorted(x: &SortedVector, rel_tol: f64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidInput("empty vector".into()));
        }
        let mut levels = Vec::new();
        let mut mults = Vec::new();
        let mut sum = x[0];
        let mut count = 1usize;
        for i in 1..x.len() {
            let prev = x[i - 1];
            if prev - x[i] <= rel_tol * prev.abs() {
                sum += x[i];
                count += 1;
            } else {
                levels.push(sum / count as f64);
                mults.push(count);
                sum = x[i];
                count = 1;
            }
        }
        levels.push(sum / count as f64);
        mults.push(count);
        Self::new(levels, mults)
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    /// Length of the represented vector, `Σ r_ℓ`.
    pub fn len(&self) -> usize {
        self.mults.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn trace(&self) -> f64 {
        kahan_sum(self.levels.iter().zip(&self.mults).map(|(g, &r)| g * r as f64))
    }

    pub fn expand(&self) -> SortedVector {
        let mut out = Vec::with_capacity(self.len());
        for (&g, &r) in self.levels.iter().zip(&self.mults) {
            out.extend(std::iter::repeat_n(g, r));
        }
        SortedVector(out)
    }
}

/// Stable non-increasing sort.
///
/// Returns the sorted vector and a permutation `perm` with
/// `sorted[perm[i]] == x[i]`, i.e. `perm` sends original indices to sorted
/// positions. Ties keep their original relative order.
pub fn sort_desc(x: &[f64]) -> Result<(SortedVector, Vec<usize>)> {
    if x.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidInput("NaN entry".into()));
    }
    check_finite(x, "vector")?;
    let mut order: Vec<usize> = (0..x.len()).collect();
    // total_cmp is fine here: NaN has been rejected
    order.sort_by(|&a, &b| x[b].total_cmp(&x[a]));
    let sorted = order.iter().map(|&i| x[i]).collect();
    let mut perm = vec![0; x.len()];
    for (pos, &orig) in order.iter().enumerate() {
        perm[orig] = pos;
    }
    Ok((SortedVector(sorted), perm))
}

fn sorted_copy(x: &[f64]) -> Result<Vec<f64>> {
    Ok(sort_desc(x)?.0.into_vec())
}

/// `x ≺_w y`: every partial sum of `x↓` is at most the matching partial sum
/// of `y↓` (up to `tol`), for `j ≤ min(len x, len y)`.
pub fn submajorizes(y: &[f64], x: &[f64], tol: f64) -> Result<bool> {
    let ys = partial_sums(&sorted_copy(y)?);
    let xs = partial_sums(&sorted_copy(x)?);
    Ok(xs.iter().zip(&ys).all(|(a, b)| *a <= *b + tol))
}

/// `x ≺ y`: submajorization plus equal traces (up to `tol`). Lengths may
/// differ; traces compare full sums.
pub fn majorizes(y: &[f64], x: &[f64], tol: f64) -> Result<bool> {
    if !submajorizes(y, x, tol)? {
        return Ok(false);
    }
    let ty = kahan_sum(y.iter().copied());
    let tx = kahan_sum(x.iter().copied());
    Ok((ty - tx).abs() <= tol)
}

/// `a ≺ b` for a block vector `a`, checked only at the block boundaries
/// `s_k = r_1 + … + r_k`, `k < p`. For equal-length vectors with equal trace
/// this is equivalent to the full partial-sum test.
pub fn block_majorizes(a: &BlockVector, b: &[f64], tol: f64) -> Result<bool> {
    check_finite(b, "vector")?;
    if b.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput("b must be non-increasing".into()));
    }
    if b.len() != a.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: block vector has {} entries, b has {}",
            a.len(),
            b.len()
        )));
    }
    let ta = a.trace();
    let tb = kahan_sum(b.iter().copied());
    if (ta - tb).abs() > tol {
        return Err(Error::TraceMismatch { lhs: ta, rhs: tb });
    }
    let bsums = partial_sums(b);
    let mut block_sum = 0.0;
    let mut s = 0usize;
    let p = a.levels.len();
    for k in 0..p.saturating_sub(1) {
        block_sum += a.levels[k] * a.mults[k] as f64;
        s += a.mults[k];
        if block_sum > bsums[s - 1] + tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `tr φ(x) = Σ φ(x_i)`. A non-finite value of `φ` is reported as a domain
/// error.
pub fn trace_phi<F: Fn(f64) -> f64>(x: &[f64], phi: F) -> Result<f64> {
    let mut vals = Vec::with_capacity(x.len());
    for &v in x {
        let y = phi(v);
        if !y.is_finite() {
            return Err(Error::Domain(format!("φ({v}) = {y}")));
        }
        vals.push(y);
    }
    Ok(kahan_sum(vals))
}
