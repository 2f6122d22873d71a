//! Dense symmetric matrices, their ordered spectra and the partial-sum operators `P⁻ₖ`.
//!
//! Eigenvalues come from cyclic Jacobi rotations. The method is slow for large matrices but
//! unconditionally stable and deterministic, which is what the verification engine needs at the
//! dimensions it works in (N ≤ 10 or so).

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Off-diagonal Frobenius norm, relative to `‖M‖_F`, below which Jacobi sweeps stop.
pub const JACOBI_TOLERANCE: f64 = 1e-13;

/// Absolute comparison tolerance, scaled by `1 + ‖M‖_F` where a matrix is involved.
pub const COMPARISON_TOLERANCE: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Symmetric `N × N` matrix stored as its upper triangle in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct SymmetricMatrix {
    dim: usize,
    upper: Vec<f64>,
}

#[derive(Deserialize)]
struct RawMatrix {
    dim: usize,
    upper: Vec<f64>,
}

impl TryFrom<RawMatrix> for SymmetricMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        SymmetricMatrix::from_upper(raw.dim, raw.upper)
    }
}

fn upper_len(dim: usize) -> usize {
    dim * (dim + 1) / 2
}

impl SymmetricMatrix {
    pub fn from_upper(dim: usize, upper: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return invalid("matrix dimension must be at least 1");
        }
        if upper.len() != upper_len(dim) {
            return invalid(format!(
                "upper triangle of a {dim}x{dim} matrix needs {} entries, got {}",
                upper_len(dim),
                upper.len()
            ));
        }
        if let Some(pos) = upper.iter().position(|x| !x.is_finite()) {
            return invalid(format!("non-finite matrix entry at upper index {pos}"));
        }
        Ok(Self { dim, upper })
    }

    /// Builds a matrix from full rows, which must be square and symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return invalid("rows must form a non-empty square array");
        }
        let mut upper = Vec::with_capacity(upper_len(dim));
        for i in 0..dim {
            for j in i..dim {
                let (a, b) = (rows[i][j], rows[j][i]);
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    return invalid(format!("entries ({i},{j}) and ({j},{i}) differ: {a} vs {b}"));
                }
                upper.push(a);
            }
        }
        Self::from_upper(dim, upper)
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        let dim = diag.len();
        let mut upper = vec![0.0; upper_len(dim)];
        for (i, d) in diag.iter().enumerate() {
            upper[Self::index(dim, i, i)] = *d;
        }
        Self::from_upper(dim, upper)
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::from_upper(dim, vec![0.0; upper_len(dim)])
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::diagonal(&vec![1.0; dim])
    }

    fn index(dim: usize, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * (2 * dim - i + 1) / 2 + (j - i)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.dim && j < self.dim, "index ({i},{j}) out of bounds");
        self.upper[Self::index(self.dim, i, j)]
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = self.get(i, j);
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                let a = self.get(i, j);
                acc += if i == j { a * a } else { 2.0 * a * a };
            }
        }
        acc.sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn add(&self, other: &SymmetricMatrix) -> Result<Self> {
        if self.dim != other.dim {
            return invalid(format!("dimension mismatch: {} vs {}", self.dim, other.dim));
        }
        let upper = self.upper.iter().zip(&other.upper).map(|(a, b)| a + b).collect();
        Self::from_upper(self.dim, upper)
    }

    /// `M + c·I`.
    pub fn shifted(&self, c: f64) -> Result<Self> {
        let mut upper = self.upper.clone();
        for i in 0..self.dim {
            upper[Self::index(self.dim, i, i)] += c;
        }
        Self::from_upper(self.dim, upper)
    }

    /// `M + t·v vᵀ`.
    pub fn add_outer(&self, v: &[f64], t: f64) -> Result<Self> {
        if v.len() != self.dim {
            return invalid(format!("vector length {} does not match dimension {}", v.len(), self.dim));
        }
        let mut upper = self.upper.clone();
        for i in 0..self.dim {
            for j in i..self.dim {
                upper[Self::index(self.dim, i, j)] += t * v[i] * v[j];
            }
        }
        Self::from_upper(self.dim, upper)
    }

    /// `M·x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }
}

/// Eigenvalues in ascending order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn smallest(&self) -> f64 {
        self.values[0]
    }

    pub fn largest(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Sum of the `k` smallest eigenvalues.
    pub fn partial_sum(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.values.len() {
            return invalid(format!("operator index k = {k} outside 1..={}", self.values.len()));
        }
        Ok(self.values[..k].iter().sum())
    }
}

/// Ascending eigenvalues together with unit eigenvectors (`vectors[i]` belongs to `values[i]`).
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Raw Jacobi output: eigenvalues in column order and the rotation matrix (row-major).
struct JacobiResult {
    diag: Vec<f64>,
    rotation: Vec<f64>,
}

impl JacobiResult {
    fn column(&self, n: usize, col: usize) -> Vec<f64> {
        (0..n).map(|row| self.rotation[row * n + col]).collect()
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j] * a[i * n + j];
            }
        }
    }
    acc.sqrt()
}

fn jacobi(m: &SymmetricMatrix) -> Result<JacobiResult> {
    let n = m.dim();
    let mut a = m.to_dense();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm = m.frobenius_norm();
    let threshold = JACOBI_TOLERANCE * norm;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a, n) <= threshold {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    if diag.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("eigenvalue computation overflowed".into()));
    }
    Ok(JacobiResult { diag, rotation: v })
}

/// Column order of the Jacobi output sorted by ascending eigenvalue; ties keep column order.
fn ascending_order(diag: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..diag.len()).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    order
}

/// All eigenvalues of `m`, ascending.
pub fn eigenvalues_sym(m: &SymmetricMatrix) -> Result<Spectrum> {
    let jac = jacobi(m)?;
    let values = ascending_order(&jac.diag).into_iter().map(|i| jac.diag[i]).collect();
    Ok(Spectrum { values })
}

pub fn eigen_decomposition(m: &SymmetricMatrix) -> Result<EigenDecomposition> {
    let n = m.dim();
    let jac = jacobi(m)?;
    let order = ascending_order(&jac.diag);
    Ok(EigenDecomposition {
        values: order.iter().map(|&i| jac.diag[i]).collect(),
        vectors: order.iter().map(|&i| jac.column(n, i)).collect(),
    })
}

/// `P⁻ₖ(M)`: the sum of the `k` smallest eigenvalues.
pub fn pminus_k(m: &SymmetricMatrix, k: usize) -> Result<f64> {
    if k == 0 || k > m.dim() {
        return invalid(format!("operator index k = {k} outside 1..={}", m.dim()));
    }
    eigenvalues_sym(m)?.partial_sum(k)
}

/// `M + t·v vᵀ` where `v` is a unit eigenvector of the largest eigenvalue.
///
/// Among (numerically) tied top eigenvalues the Jacobi column with the lowest index is used.
pub fn add_rank_one_top(m: &SymmetricMatrix, t: f64) -> Result<SymmetricMatrix> {
    if !t.is_finite() || t < 0.0 {
        return invalid(format!("rank-one weight must be finite and nonnegative, got {t}"));
    }
    if t == 0.0 {
        return Ok(m.clone());
    }
    let n = m.dim();
    let jac = jacobi(m)?;
    let top = jac.diag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tie = COMPARISON_TOLERANCE * (1.0 + m.frobenius_norm());
    let col = jac
        .diag
        .iter()
        .position(|&d| d >= top - tie)
        .expect("a maximum exists for a non-empty spectrum");
    m.add_outer(&jac.column(n, col), t)
}
