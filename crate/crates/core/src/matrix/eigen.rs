//! Hermitian eigendecomposition.
//!
//! Householder reflections reduce the matrix to Hermitian tridiagonal form,
//! a diagonal phase similarity makes the tridiagonal real symmetric, and the
//! implicit QL iteration with Wilkinson shifts finishes the job. Rotations
//! are accumulated into the complex transformation so eigenvectors come out
//! in the original basis.

use super::{canonicalize_phases, ComplexMatrix, C64};
use crate::error::{Error, Result};

const MAX_QL_ITERATIONS: usize = 60;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`, phase-canonicalized.
    pub vectors: ComplexMatrix,
}

/// Eigendecomposition of the Hermitian part `(H + H*)/2` of a square matrix.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::Domain(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let n = h.rows();
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let mut a = h.hermitian_part();
    let mut q = ComplexMatrix::identity(n);
    tridiagonalize(&mut a, &mut q);

    // Phase similarity D with D* T D real: d_{k+1} = d_k · t_{k+1,k}/|t_{k+1,k}|.
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut phase = C64::new(1.0, 0.0);
    for k in 0..n {
        d[k] = a[(k, k)].re;
        if k > 0 {
            let t = a[(k, k - 1)];
            let r = t.norm();
            e[k - 1] = r;
            if r > 0.0 {
                phase *= t / r;
            }
            for row in 0..n {
                q[(row, k)] *= phase;
            }
        }
    }

    ql_implicit(&mut d, &mut e, &mut q)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vectors = ComplexMatrix::from_fn(n, n, |r, c| q[(r, order[c])]);
    canonicalize_phases(&mut vectors);
    Ok(HermitianEigen { values, vectors })
}

/// In-place reduction `A = Q T Q*`; `q` accumulates the reflections.
fn tridiagonalize(a: &mut ComplexMatrix, q: &mut ComplexMatrix) {
    let n = a.rows();
    let zero = C64::new(0.0, 0.0);
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x: Vec<C64> = (0..m).map(|i| a[(k + 1 + i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if tail == 0.0 {
            continue;
        }
        let x0 = x[0];
        let ph = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        let alpha = -ph * xnorm;
        let mut v = x.clone();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }

        // Trailing block B <- H B H with H = I - 2 v v*:
        // p = B v, K = v* p, w = p - K v, B <- B - 2 v w* - 2 w v*.
        let off = k + 1;
        let p: Vec<C64> = (0..m)
            .map(|i| (0..m).map(|j| a[(off + i, off + j)] * v[j]).sum())
            .collect();
        let kk: C64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let w: Vec<C64> = p.iter().zip(&v).map(|(pi, vi)| pi - kk.re * vi).collect();
        for i in 0..m {
            for j in 0..m {
                a[(off + i, off + j)] -= (v[i] * w[j].conj() + w[i] * v[j].conj()) * 2.0;
            }
        }
        a[(off, k)] = alpha;
        a[(k, off)] = alpha.conj();
        for i in 1..m {
            a[(off + i, k)] = zero;
            a[(k, off + i)] = zero;
        }

        // Q <- Q H on columns off..n.
        for r in 0..n {
            let s: C64 = (0..m).map(|j| q[(r, off + j)] * v[j]).sum();
            for j in 0..m {
                q[(r, off + j)] -= s * v[j].conj() * 2.0;
            }
        }
    }
}

/// Implicit QL on the real symmetric tridiagonal `(d, e)`, where `e[i]`
/// couples `i` and `i + 1`. Rotations are applied to the columns of `z`.
fn ql_implicit(d: &mut [f64], e: &mut [f64], z: &mut ComplexMatrix) -> Result<()> {
    let n = d.len();
    let rows = z.rows();
    // Off-diagonals below ε‖T‖ are dropped even when their neighbours are
    // tiny, otherwise clusters of near-zero eigenvalues never deflate.
    let norm = (0..n).map(|i| d[i].abs() + e[i].abs()).fold(0.0, f64::max);
    let floor = f64::EPSILON * norm;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::Internal("QL iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..rows {
                    let zi = z[(k, i)];
                    let zi1 = z[(k, i + 1)];
                    z[(k, i + 1)] = zi * s + zi1 * c;
                    z[(k, i)] = zi * c - zi1 * s;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
