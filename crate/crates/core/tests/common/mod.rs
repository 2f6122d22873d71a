//! Independent oracles shared by the integration tests.
//!
//! The eigenvalue oracle reduces to tridiagonal form with Householder reflections and then
//! isolates each eigenvalue by Sturm-sequence bisection, so it shares no code path with the
//! cyclic Jacobi solver under test.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trunclap_core::SymmetricMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense row-major copy of a symmetric matrix.
pub fn dense(m: &SymmetricMatrix) -> Vec<Vec<f64>> {
    let n = m.dim();
    (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect()
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> SymmetricMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-scale..scale);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    SymmetricMatrix::from_rows(&rows).unwrap()
}

/// `B Bᵀ` for a random `n × n` matrix `B`: positive semidefinite.
pub fn random_psd(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> SymmetricMatrix {
    let b: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(-scale..scale)).collect())
        .collect();
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            rows[i][j] = (0..n).map(|l| b[i][l] * b[j][l]).sum();
        }
    }
    for i in 0..n {
        for j in 0..i {
            rows[i][j] = rows[j][i];
        }
    }
    SymmetricMatrix::from_rows(&rows).unwrap()
}

/// Householder reduction of a symmetric matrix to tridiagonal `(diag, offdiag)`.
fn tridiagonalize(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    for col in 0..n.saturating_sub(2) {
        let x: Vec<f64> = (col + 1..n).map(|i| a[i][col]).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if x[0] > 0.0 { -norm } else { norm };
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // A ← H A H with H = I − 2 v vᵀ / vᵀv acting on rows/cols col+1..n
        let m = n - col - 1;
        let idx = |i: usize| col + 1 + i;
        // p = A v, on the full column range
        let p: Vec<f64> = (0..n)
            .map(|r| (0..m).map(|i| a[r][idx(i)] * v[i]).sum::<f64>())
            .collect();
        for r in 0..n {
            let coeff = 2.0 * p[r] / vnorm2;
            for i in 0..m {
                a[r][idx(i)] -= coeff * v[i];
            }
        }
        let q: Vec<f64> = (0..n)
            .map(|c| (0..m).map(|i| v[i] * a[idx(i)][c]).sum::<f64>())
            .collect();
        for c in 0..n {
            let coeff = 2.0 * q[c] / vnorm2;
            for i in 0..m {
                a[idx(i)][c] -= coeff * v[i];
            }
        }
    }
    let d = (0..n).map(|i| a[i][i]).collect();
    let e = (1..n).map(|i| 0.5 * (a[i][i - 1] + a[i - 1][i])).collect();
    (d, e)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`.
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let e2 = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] };
        q = d[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (1.0 + x.abs());
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Ascending eigenvalues by Householder tridiagonalization and Sturm bisection.
pub fn oracle_eigenvalues(m: &SymmetricMatrix) -> Vec<f64> {
    let (d, e) = tridiagonalize(dense(m));
    let n = d.len();
    let mut radius: f64 = 0.0;
    for i in 0..n {
        let off = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 };
        radius = radius.max(d[i].abs() + off);
    }
    let (lo0, hi0) = (-radius - 1.0, radius + 1.0);
    (0..n)
        .map(|j| {
            let (mut lo, mut hi) = (lo0, hi0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if sturm_count(&d, &e, mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

pub fn oracle_pminus(m: &SymmetricMatrix, k: usize) -> f64 {
    oracle_eigenvalues(m)[..k].iter().sum()
}

/// Closed-form positive radial solution of `P⁻ₖ(D²u) + u − u³ = 0`:
/// `v(r) = α / √(α² + (1 − α²) e^{r²/k})`.
pub fn allen_cahn_radial(alpha: f64, k: f64, r: f64) -> f64 {
    alpha / (alpha * alpha + (1.0 - alpha * alpha) * (r * r / k).exp()).sqrt()
}

/// Solution of `v' = −(r/k) v`, `v(0) = α`.
pub fn linear_radial(alpha: f64, k: f64, r: f64) -> f64 {
    alpha * (-r * r / (2.0 * k)).exp()
}
