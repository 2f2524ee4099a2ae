//! Water-filling of a sorted weight vector and the one-parameter deformation
//! family used by the partition algorithm.

use crate::error::{Error, Result};
use crate::vecmaj::{kahan_sum, SortedVector};

/// Water-filling of `α` in dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterFillResult {
    /// `γ_i = max{α_i, c}` for the first `d` entries.
    pub gamma: SortedVector,
    /// Water level `c ≥ α_d`.
    pub level: f64,
    /// First (0-based) index `r` with `c ≥ α_r`; entries from `r` to `d-1`
    /// sit at the water level.
    pub split_index: usize,
}

impl WaterFillResult {
    /// True when every entry is flooded, i.e. `γ = c·𝟙_d`.
    pub fn is_flooded(&self) -> bool {
        self.split_index == 0
    }
}

/// Water-fills `alpha` in dimension `d`.
///
/// The level solves `Σ_{i≤d} (c − α_i)^+ = Σ_{i>d} α_i`. The left side is
/// piecewise linear in `c`, so the segment holding the root is found by
/// scanning upwards from `α_d` and `c` is then read off in closed form.
pub fn water_fill(alpha: &SortedVector, d: usize) -> Result<WaterFillResult> {
    let n = alpha.len();
    if d < 1 || d > n {
        return Err(Error::Dimension(format!("need 1 ≤ d ≤ n, got d = {d}, n = {n}")));
    }
    if let Some(v) = alpha.as_slice().iter().find(|v| **v < 0.0) {
        return Err(Error::InvalidInput(format!("negative weight {v}")));
    }
    let a = alpha.as_slice();
    let tail = kahan_sum(a[d..].iter().copied());

    // flood entries k..d (0-based k..d-1); widen while the level overtops a_{k-1}
    let mut k = d - 1;
    let mut flooded_sum = a[k];
    let mut level = tail + flooded_sum;
    while k > 0 && level > a[k - 1] {
        k -= 1;
        flooded_sum += a[k];
        level = (tail + flooded_sum) / (d - k) as f64;
    }

    let gamma: Vec<f64> = a[..d].iter().map(|&v| v.max(level)).collect();
    let split_index = a[..d].iter().position(|&v| level >= v).unwrap_or(d - 1);
    Ok(WaterFillResult {
        gamma: SortedVector::new(gamma)?,
        level,
        split_index,
    })
}

/// The family `t ↦ a(t)` built from a source vector `a'` and its
/// water-filling `(γ', c')` in dimension `d`:
///
/// `a_i(t) = min{t, c'}/c' · min{a'_i, max{t, c'}}`, for `t ∈ [0, γ'_1]`.
///
/// Its water-filling in dimension `d` is `(min{γ'_i, t})_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationFamily {
    source: SortedVector,
    dim: usize,
    source_fill: WaterFillResult,
}

/// Relative slack accepted at the ends of the parameter range.
const RANGE_SLACK: f64 = 1e-12;

impl DeformationFamily {
    pub fn new(source: SortedVector, dim: usize) -> Result<Self> {
        let source_fill = water_fill(&source, dim)?;
        Ok(Self {
            source,
            dim,
            source_fill,
        })
    }

    pub fn source(&self) -> &SortedVector {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn source_fill(&self) -> &WaterFillResult {
        &self.source_fill
    }

    /// `γ'_1`, the right end of the parameter range.
    pub fn t_max(&self) -> f64 {
        self.source_fill.gamma.first().unwrap_or(0.0)
    }

    fn check_t(&self, t: f64) -> Result<f64> {
        let hi = self.t_max();
        let slack = RANGE_SLACK * hi.max(1.0);
        if !(t >= -slack && t <= hi + slack) {
            return Err(Error::Range { t, lo: 0.0, hi });
        }
        Ok(t.clamp(0.0, hi))
    }

    /// Evaluates `a(t)`. A zero source gives the zero vector for every `t`.
    pub fn deform_at(&self, t: f64) -> Result<Vec<f64>> {
        let t = self.check_t(t)?;
        let c = self.source_fill.level;
        if c <= 0.0 {
            return Ok(vec![0.0; self.source.len()]);
        }
        let scale = t.min(c) / c;
        let cap = t.max(c);
        Ok(self
            .source
            .as_slice()
            .iter()
            .map(|&a| scale * a.min(cap))
            .collect())
    }

    /// Single entry `a_i(t)`, no allocation.
    pub fn entry_at(&self, i: usize, t: f64) -> f64 {
        let c = self.source_fill.level;
        if c <= 0.0 {
            return 0.0;
        }
        let t = t.clamp(0.0, self.t_max());
        t.min(c) / c * self.source[i].min(t.max(c))
    }

    /// Water-filling of `a(t)` in dimension `d`, via `γ(t) = min{γ', t}`.
    pub fn deformed_spectrum(&self, t: f64) -> Result<SortedVector> {
        let t = self.check_t(t)?;
        SortedVector::new(
            self.source_fill
                .gamma
                .as_slice()
                .iter()
                .map(|&g| g.min(t))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sv(v: &[f64]) -> SortedVector {
        SortedVector::new(v.to_vec()).unwrap()
    }

    /// Oracle: water level by bisection on the flood equation.
    fn level_by_bisection(a: &[f64], d: usize) -> f64 {
        let tail: f64 = a[d..].iter().sum();
        let flood = |c: f64| a[..d].iter().map(|&x| (c - x).max(0.0)).sum::<f64>();
        let (mut lo, mut hi) = (a[d - 1], a[0] + tail + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if flood(mid) < tail {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn ten_weights_in_six_dimensions() {
        let alpha = sv(&[10.0, 8.5, 7.0, 5.0, 3.8, 3.8, 2.4, 2.0, 1.7, 0.8]);
        let w = water_fill(&alpha, 6).unwrap();
        assert!((w.level - 6.5).abs() <= 1e-12 * 6.5);
        let expect = [10.0, 8.5, 7.0, 6.5, 6.5, 6.5];
        for (g, e) in w.gamma.as_slice().iter().zip(expect) {
            assert!((g - e).abs() < 1e-12);
        }
        assert_eq!(w.split_index, 3);
        assert!((level_by_bisection(alpha.as_slice(), 6) - 6.5).abs() < 1e-9);
    }

    #[test]
    fn full_dimension_is_identity() {
        let alpha = sv(&[4.0, 3.0, 3.0, 0.5]);
        let w = water_fill(&alpha, 4).unwrap();
        assert_eq!(w.gamma.as_slice(), alpha.as_slice());
        assert_eq!(w.level, 0.5);
    }

    #[test]
    fn uniform_weights() {
        let alpha = SortedVector::constant(1.0, 7);
        let w = water_fill(&alpha, 3).unwrap();
        for g in w.gamma.as_slice() {
            assert!((g - 7.0 / 3.0).abs() < 1e-14);
        }
        assert!(w.is_flooded());
    }

    #[test]
    fn first_recursion_level_of_small_example() {
        let w = water_fill(&sv(&[10.0, 10.0, 10.0, 1.0, 1.0]), 4).unwrap();
        assert_eq!(w.gamma.as_slice(), &[10.0, 10.0, 10.0, 2.0]);
        assert_eq!(w.level, 2.0);
    }

    #[test]
    fn dimension_errors() {
        let alpha = sv(&[2.0, 1.0]);
        assert!(matches!(water_fill(&alpha, 0), Err(Error::Dimension(_))));
        assert!(matches!(water_fill(&alpha, 3), Err(Error::Dimension(_))));
        assert!(matches!(water_fill(&sv(&[1.0, -1.0]), 1), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn deform_examples() {
        let fam = DeformationFamily::new(sv(&[4.0, 2.0, 1.0, 1.0]), 2).unwrap();
        assert_eq!(fam.source_fill().gamma.as_slice(), &[4.0, 4.0]);
        assert_eq!(fam.deform_at(2.0).unwrap(), vec![2.0, 1.0, 0.5, 0.5]);

        let fam = DeformationFamily::new(sv(&[10.0, 10.0, 10.0, 1.0, 1.0]), 4).unwrap();
        assert_eq!(fam.deform_at(6.0).unwrap(), vec![6.0, 6.0, 6.0, 1.0, 1.0]);
        assert_eq!(fam.deformed_spectrum(6.0).unwrap().as_slice(), &[6.0, 6.0, 6.0, 2.0]);
        assert_eq!(fam.deform_at(0.0).unwrap(), vec![0.0; 5]);
        assert_eq!(fam.deformed_spectrum(0.0).unwrap().as_slice(), &[0.0; 4]);
        assert_eq!(
            fam.deformed_spectrum(fam.t_max()).unwrap(),
            fam.source_fill().gamma.clone()
        );
    }

    #[test]
    fn deform_out_of_range() {
        let fam = DeformationFamily::new(sv(&[3.0, 1.0]), 1).unwrap();
        assert!(matches!(fam.deform_at(4.5), Err(Error::Range { .. })));
        assert!(matches!(fam.deform_at(-0.1), Err(Error::Range { .. })));
    }

    #[test]
    fn zero_source_deforms_to_zero() {
        let fam = DeformationFamily::new(SortedVector::zeros(3), 2).unwrap();
        assert_eq!(fam.deform_at(0.0).unwrap(), vec![0.0; 3]);
    }

    fn random_sorted(rng: &mut ChaCha8Rng, n: usize) -> SortedVector {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
        SortedVector::from_unsorted(&v).unwrap()
    }

    #[test]
    fn level_matches_bisection_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let n = rng.gen_range(1..15);
            let d = rng.gen_range(1..=n);
            let a = random_sorted(&mut rng, n);
            let w = water_fill(&a, d).unwrap();
            let oracle = level_by_bisection(a.as_slice(), d);
            if d < n {
                assert!((w.level - oracle).abs() < 1e-9 * oracle.max(1.0));
            }
            assert!((w.gamma.trace() - a.trace()).abs() < 1e-12 * a.trace().max(1.0));
            assert!(w.level >= a[d - 1]);
        }
    }

    #[test]
    fn dropping_the_top_entry() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 200 {
            let n = rng.gen_range(2..12);
            let d = rng.gen_range(2..=n);
            let a = random_sorted(&mut rng, n);
            let fam = DeformationFamily::new(a.clone(), d).unwrap();
            let c = fam.source_fill().level;
            if a[0] < c {
                continue;
            }
            checked += 1;
            let fam2 = DeformationFamily::new(a.tail(1), d - 1).unwrap();
            assert!((fam2.source_fill().level - c).abs() < 1e-9 * c.max(1.0));
            let g2 = fam.source_fill().gamma[1];
            for s in 0..=20 {
                let t = g2 * s as f64 / 20.0;
                let full = fam.deform_at(t).unwrap();
                let trunc = fam2.deform_at(t).unwrap();
                for i in 1..n {
                    assert!((full[i] - trunc[i - 1]).abs() < 1e-9 * full[i].max(1.0));
                }
            }
            for s in 0..=20 {
                let t = fam.t_max() * s as f64 / 20.0;
                let spec = fam.deformed_spectrum(t).unwrap();
                let a_t = fam.deform_at(t).unwrap();
                assert!((spec[0] - t).abs() < 1e-12 * t.max(1.0));
                assert!((a_t[0] - t).abs() < 1e-12 * t.max(1.0));
            }
        }
    }

    #[test]
    fn family_is_monotone_in_t() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let n = rng.gen_range(1..10);
            let d = rng.gen_range(1..=n);
            let fam = DeformationFamily::new(random_sorted(&mut rng, n), d).unwrap();
            let mut prev = fam.deform_at(0.0).unwrap();
            for s in 1..=40 {
                let cur = fam.deform_at(fam.t_max() * s as f64 / 40.0).unwrap();
                for (p, c) in prev.iter().zip(&cur) {
                    assert!(c + 1e-12 >= *p);
                }
                assert!(cur.windows(2).all(|w| w[0] >= w[1]));
                prev = cur;
            }
        }
    }
}
