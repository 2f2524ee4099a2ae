//! Convex potentials `P_φ(F) = tr φ(S_F)` and their joint version over
//! designs.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::partition::concat_sorted;
use crate::synth::{frame_operator, sym_eigenvalues, FrameFamily};
use crate::vecmaj::{kahan_sum, SortedVector};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A convex scalar function together with the smallest argument it accepts.
#[derive(Clone)]
pub struct Potential {
    phi: ScalarFn,
    name: String,
    domain_min: f64,
    strictly_convex: bool,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Potential")
            .field("name", &self.name)
            .field("domain_min", &self.domain_min)
            .field("strictly_convex", &self.strictly_convex)
            .finish()
    }
}

impl Potential {
    pub fn new<F>(name: &str, phi: F, domain_min: f64, strictly_convex: bool) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            phi: Arc::new(phi),
            name: name.to_string(),
            domain_min,
            strictly_convex,
        }
    }

    /// Frame potential, `φ(x) = x²`.
    pub fn frame() -> Self {
        Self::new("fp", |x| x * x, 0.0, true)
    }

    /// Mean squared error, `φ(x) = 1/x`; singular spectra are rejected.
    pub fn mse() -> Self {
        Self::new("mse", |x| 1.0 / x, 1e-12, true)
    }

    /// `φ(x) = x^p`, `p ≥ 1`.
    pub fn power(p: f64) -> Self {
        Self::new(&format!("x^{p}"), move |x| x.powf(p), 0.0, p > 1.0)
    }

    pub fn exp() -> Self {
        Self::new("exp", f64::exp, f64::NEG_INFINITY, true)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain_min(&self) -> f64 {
        self.domain_min
    }

    pub fn strictly_convex(&self) -> bool {
        self.strictly_convex
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < self.domain_min {
            return Err(Error::Domain(format!("{} undefined at {x}", self.name)));
        }
        let y = (self.phi)(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Domain(format!("{} is not finite at {x}", self.name)))
        }
    }

    /// Midpoint convexity on every pair of `samples` inside the domain.
    pub fn is_convex_on(&self, samples: &[f64]) -> bool {
        let pts: Vec<f64> = samples.iter().copied().filter(|&x| x >= self.domain_min).collect();
        pts.iter().all(|&x| {
            pts.iter().all(|&y| match (self.eval(x), self.eval(y), self.eval(0.5 * (x + y))) {
                (Ok(fx), Ok(fy), Ok(fm)) => fm <= 0.5 * (fx + fy) + 1e-12 * (fx.abs() + fy.abs()).max(1.0),
                _ => false,
            })
        })
    }
}

/// `Σ_i φ(λ_i)`.
pub fn potential_of(lambda: &[f64], pot: &Potential) -> Result<f64> {
    let vals = lambda.iter().map(|&x| pot.eval(x)).collect::<Result<Vec<_>>>()?;
    Ok(kahan_sum(vals))
}

/// Per-group frame-operator spectra of a design and their concatenation `Λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumVector {
    pub per_group: Vec<SortedVector>,
    pub concatenated: Vec<f64>,
}

impl SpectrumVector {
    pub fn from_groups(per_group: Vec<SortedVector>) -> Self {
        let concatenated = per_group.iter().flat_map(|g| g.as_slice().iter().copied()).collect();
        Self {
            per_group,
            concatenated,
        }
    }

    pub fn len(&self) -> usize {
        self.concatenated.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concatenated.is_empty()
    }

    pub fn sorted(&self) -> SortedVector {
        concat_sorted(&self.per_group).expect("spectra are finite")
    }
}

/// `Σ_j P_φ(F_j)`, computed group by group.
pub fn joint_potential(spec: &SpectrumVector, pot: &Potential) -> Result<f64> {
    let per = spec
        .per_group
        .iter()
        .map(|g| potential_of(g.as_slice(), pot))
        .collect::<Result<Vec<_>>>()?;
    Ok(kahan_sum(per))
}

pub fn joint_potential_of_design(design: &[FrameFamily], pot: &Potential) -> Result<f64> {
    joint_potential(&lambda_vector(design)?, pot)
}

fn clamped_spectrum(s: &DMatrix<f64>) -> Result<SortedVector> {
    let eig = sym_eigenvalues(s, 1e-10)?;
    let floor = -1e-12 * eig.first().unwrap_or(0.0).abs().max(1.0);
    let v: Vec<f64> = eig
        .as_slice()
        .iter()
        .map(|&x| if x < 0.0 && x >= floor { 0.0 } else { x })
        .collect();
    SortedVector::new(v)
}

/// `Λ_Φ`: the frame-operator spectrum of every family. Round-off negatives
/// of a positive semidefinite operator are reported as zero.
pub fn lambda_vector(design: &[FrameFamily]) -> Result<SpectrumVector> {
    let groups = design
        .iter()
        .map(|f| clamped_spectrum(&frame_operator(f)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumVector::from_groups(groups))
}

/// `tr φ(C_d(S_G))` for `n` vectors in `ℝ^{|d|}` given as the columns of
/// `global`, where `C_d` keeps only the diagonal blocks of sizes `dims`.
pub fn pinched_potential(global: &DMatrix<f64>, dims: &[usize], pot: &Potential) -> Result<f64> {
    let total: usize = dims.iter().sum();
    if global.nrows() != total {
        return Err(Error::InvalidInput(format!(
            "vectors live in ℝ^{} but the blocks add up to {total}",
            global.nrows()
        )));
    }
    let s = global * global.transpose();
    let s = (&s + s.transpose()) * 0.5;
    let mut start = 0;
    let mut parts = Vec::with_capacity(dims.len());
    for &d in dims {
        let block = s.view((start, start), (d, d)).clone_owned();
        parts.push(potential_of(clamped_spectrum(&block)?.as_slice(), pot)?);
        start += d;
    }
    Ok(kahan_sum(parts))
}
