//! Frame synthesis with prescribed vector norms and frame-operator spectrum.
//!
//! [`schur_horn_vectors`] starts from `[diag(√λ) | 0]`, whose columns are
//! mutually orthogonal with squared norms `(λ, 0, …, 0)`, and repeatedly
//! rotates two adjacent (in norm order) free columns so that one of them hits
//! the largest outstanding target exactly. Right rotations leave `T Tᵀ`
//! untouched, so the frame operator stays `diag(λ)` throughout.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::partition::PartitionSolution;
use crate::vecmaj::{kahan_sum, majorizes, sort_desc, SortedVector};

/// `n` vectors in `ℝ^d`, stored as the columns of the synthesis matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameFamily {
    synthesis: DMatrix<f64>,
}

impl FrameFamily {
    pub fn new(synthesis: DMatrix<f64>) -> Self {
        Self { synthesis }
    }

    pub fn from_vectors(dim: usize, vectors: &[Vec<f64>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::Dimension(format!("vector of length {} in ℝ^{dim}", v.len())));
        }
        Ok(Self {
            synthesis: DMatrix::from_fn(dim, vectors.len(), |i, j| vectors[j][i]),
        })
    }

    pub fn synthesis(&self) -> &DMatrix<f64> {
        &self.synthesis
    }

    pub fn dim(&self) -> usize {
        self.synthesis.nrows()
    }

    pub fn count(&self) -> usize {
        self.synthesis.ncols()
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.synthesis.column(i).iter().copied().collect()
    }

    pub fn norms_sq(&self) -> Vec<f64> {
        self.synthesis
            .column_iter()
            .map(|c| kahan_sum(c.iter().map(|x| x * x)))
            .collect()
    }

    pub fn frame_operator(&self) -> DMatrix<f64> {
        frame_operator(self)
    }
}

/// `S = T Tᵀ`, symmetrized.
pub fn frame_operator(f: &FrameFamily) -> DMatrix<f64> {
    let t = f.synthesis();
    let s = t * t.transpose();
    (&s + s.transpose()) * 0.5
}

/// A family with `‖f_i‖² = norms_sq[i]` (any order) and `λ(S_F) = spectrum`.
///
/// Feasible exactly when the norms are majorized by the spectrum padded with
/// zeros to length `n`; otherwise [`Error::InfeasibleDesign`].
pub fn schur_horn_vectors(norms_sq: &[f64], spectrum: &SortedVector, tol: f64) -> Result<FrameFamily> {
    let n = norms_sq.len();
    let d = spectrum.len();
    if n < d {
        return Err(Error::InvalidInput(format!(
            "{n} vectors cannot span a spectrum of length {d}"
        )));
    }
    if let Some(x) = norms_sq.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::InvalidInput(format!("squared norm {x} is not a non-negative number")));
    }
    if spectrum.last().is_some_and(|x| x < 0.0) {
        return Err(Error::InvalidInput("spectrum has negative entries".into()));
    }
    let mut padded = spectrum.as_slice().to_vec();
    padded.resize(n, 0.0);
    if !majorizes(&padded, norms_sq, tol)? {
        return Err(Error::InfeasibleDesign(format!(
            "norms {norms_sq:?} are not majorized by spectrum {:?}",
            spectrum.as_slice()
        )));
    }

    let (targets, perm) = sort_desc(norms_sq)?;
    let mut origin = vec![0; n];
    for (orig, &pos) in perm.iter().enumerate() {
        origin[pos] = orig;
    }

    let mut x = DMatrix::<f64>::zeros(d, n);
    for i in 0..d {
        x[(i, i)] = spectrum[i].sqrt();
    }
    // free columns as (column, squared norm), non-increasing in norm
    let mut free: Vec<(usize, f64)> = padded.iter().copied().enumerate().collect();
    let mut out = DMatrix::<f64>::zeros(d, n);

    for s in 0..n {
        let v = targets[s];
        let k = free.iter().rposition(|&(_, mu)| mu >= v).unwrap_or(0);
        let fixed = if k + 1 == free.len() || free[k].1 == v {
            free.remove(k).0
        } else {
            let (ck, mk) = free[k];
            let (cl, ml) = free[k + 1];
            let c2 = if mk > ml {
                ((v - ml) / (mk - ml)).clamp(0.0, 1.0)
            } else {
                1.0
            };
            let (c, sn) = (c2.sqrt(), (1.0 - c2).sqrt());
            let a = x.column(ck).clone_owned();
            let b = x.column(cl).clone_owned();
            x.set_column(ck, &(&a * c + &b * sn));
            let rest = &b * c - &a * sn;
            let w = rest.norm_squared();
            x.set_column(cl, &rest);
            free.remove(k);
            free[k] = (cl, w);
            ck
        };
        out.set_column(origin[s], &x.column(fixed));
    }
    Ok(FrameFamily::new(out))
}

/// One family per group of a solved partition, realizing column `j` of the
/// partition as squared norms and `γ_j` as spectrum.
pub fn synthesize_design(solution: &PartitionSolution) -> Result<Vec<FrameFamily>> {
    solution
        .spectra
        .iter()
        .enumerate()
        .map(|(j, gamma)| {
            let norms = solution.partition.column(j);
            let tol = 1e-8 * gamma.trace().abs().max(1.0);
            schur_horn_vectors(&norms, gamma, tol)
        })
        .collect()
}

/// Eigenvalues (non-increasing) and matching unit eigenvectors (as columns)
/// of a symmetric matrix, by cyclic Jacobi sweeps.
pub fn sym_eigen(s: &DMatrix<f64>, tol: f64) -> Result<(SortedVector, DMatrix<f64>)> {
    let n = s.nrows();
    if s.ncols() != n {
        return Err(Error::Dimension(format!("{}×{} matrix is not square", n, s.ncols())));
    }
    if s.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let scale = s.amax().max(1.0);
    for i in 0..n {
        for j in 0..i {
            if (s[(i, j)] - s[(j, i)]).abs() > tol * scale {
                return Err(Error::InvalidInput(format!(
                    "matrix is not symmetric at ({i}, {j}): {} vs {}",
                    s[(i, j)],
                    s[(j, i)]
                )));
            }
        }
    }

    let mut a = (s + s.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    let norm = a.norm();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * norm * 1e-2 || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let sn = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    let (values, perm) = sort_desc(&diag)?;
    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for (orig, &pos) in perm.iter().enumerate() {
        vectors.set_column(pos, &v.column(orig));
    }
    Ok((values, vectors))
}

pub fn sym_eigenvalues(s: &DMatrix<f64>, tol: f64) -> Result<SortedVector> {
    Ok(sym_eigen(s, tol)?.0)
}
