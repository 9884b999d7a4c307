//! Dense complex matrices and the projection algebra built on one Hermitian
//! eigensolver.
//!
//! Every rank, positivity and projection decision goes through
//! [`hermitian_eigen`] so that a single [`ToleranceConfig`] governs them all.

mod eigen;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

pub use eigen::{hermitian_eigen, HermitianEigen};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Absolute tolerance for matrix identities (operator norm).
    pub eps: f64,
    /// Eigenvalues at or below `rank_rel * λmax` count as zero.
    pub rank_rel: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            eps: 1e-9,
            rank_rel: 1e-10,
        }
    }
}

impl ToleranceConfig {
    pub fn new(eps: f64, rank_rel: f64) -> Result<Self> {
        let t = ToleranceConfig { eps, rank_rel };
        t.validate()?;
        Ok(t)
    }

    /// Keeps the default relative rank cutoff unless it would exceed `eps`.
    pub fn with_eps(eps: f64) -> Result<Self> {
        let rank_rel = ToleranceConfig::default().rank_rel.min(eps / 10.0);
        ToleranceConfig::new(eps, rank_rel)
    }

    pub fn validate(&self) -> Result<()> {
        if 0.0 < self.rank_rel && self.rank_rel < self.eps && self.eps < 1.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "tolerances must satisfy 0 < rank_rel < eps < 1 (got rank_rel = {}, eps = {})",
                self.rank_rel, self.eps
            )))
        }
    }
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| {
                    let z = self[(r, c)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join("  "))?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Checked constructor from row-major entries; rejects non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Structural(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(z) = data.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Structural(format!("non-finite matrix entry {z}")));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count");
        ComplexMatrix {
            rows,
            cols,
            data: data.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = ComplexMatrix::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// A single column.
    pub fn column_vector(v: &[C64]) -> Self {
        ComplexMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Self {
        ComplexMatrix::from_fn(rows, columns.len(), |r, c| columns[c][r])
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[C64]) -> Self {
        ComplexMatrix::from_fn(v.len(), v.len(), |r, c| v[r] * v[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn columns(&self, range: std::ops::Range<usize>) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, range.len(), |r, c| self[(r, c + range.start)])
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &ComplexMatrix) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self[(r0 + r, c0 + c)] = b[(r, c)];
            }
        }
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: C64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> ComplexMatrix {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Spectral norm, `sqrt(λmax(A* A))`.
    pub fn op_norm(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        // Use the smaller Gram matrix.
        let g = if self.rows < self.cols {
            self * &self.adjoint()
        } else {
            &self.adjoint() * self
        };
        let e = hermitian_eigen(&g).expect("Gram matrices are square");
        e.values.last().copied().unwrap_or(0.0).max(0.0).sqrt()
    }

    /// `⟨x, y⟩ = Σ x_i conj(y_i)`, linear in the first slot.
    pub fn inner(x: &[C64], y: &[C64]) -> C64 {
        x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    pub fn hermitian_residual(&self) -> f64 {
        (self - &self.adjoint()).op_norm()
    }

    pub fn is_hermitian(&self, tol: &ToleranceConfig) -> bool {
        self.is_square() && self.hermitian_residual() <= tol.eps
    }

    /// `(A + A*) / 2`.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        (self + &self.adjoint()).scale_re(0.5)
    }

    /// Row-major entries as `[re, im]` pairs.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.data.iter().map(|z| [z.re, z.im]).collect()
    }

    pub fn from_pairs(rows: usize, cols: usize, pairs: &[[f64; 2]]) -> Result<Self> {
        ComplexMatrix::from_vec(rows, cols, pairs.iter().map(|p| C64::new(p[0], p[1])).collect())
    }

    /// Horizontal concatenation.
    pub fn hstack(parts: &[&ComplexMatrix]) -> ComplexMatrix {
        let rows = parts.first().map_or(0, |p| p.rows);
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = ComplexMatrix::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "row mismatch");
            out.set_block(0, c0, p);
            c0 += p.cols;
        }
        out
    }

    fn assert_same_shape(&self, other: &ComplexMatrix, op: &str) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "{op}: shape {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "product: {}x{} times {}x{}", self.rows, self.cols, rhs.rows, rhs.cols);
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            let dst = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
            for (k, &a) in row.iter().enumerate() {
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let src = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.assert_same_shape(rhs, "sum");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.assert_same_shape(rhs, "difference");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_re(-1.0)
    }
}

/// `‖A - B‖` in operator norm.
pub fn distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).op_norm()
}

fn require_square(a: &ComplexMatrix, what: &str) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be square, got {}x{}", a.rows(), a.cols())))
    }
}

/// `A* = A = A²` within `eps` in operator norm.
pub fn is_orthoprojection(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<bool> {
    require_square(a, "matrix")?;
    Ok(a.hermitian_residual() <= tol.eps && distance(&(a * a), a) <= tol.eps)
}

fn require_projection_pair(p: &ComplexMatrix, q: &ComplexMatrix, tol: &ToleranceConfig) -> Result<()> {
    if p.rows() != q.rows() || !p.is_square() || !q.is_square() {
        return Err(Error::Domain(format!(
            "projections must be square of equal size, got {}x{} and {}x{}",
            p.rows(),
            p.cols(),
            q.rows(),
            q.cols()
        )));
    }
    for (name, m) in [("first", p), ("second", q)] {
        if !is_orthoprojection(m, tol)? {
            return Err(Error::Domain(format!("{name} argument is not an orthoprojection")));
        }
    }
    Ok(())
}

/// Projection onto `range(P) ∩ range(Q)`: the null space of `(I - P) + (I - Q)`.
pub fn range_meet(p: &ComplexMatrix, q: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    require_projection_pair(p, q, tol)?;
    Ok(meet_unchecked(p, q, tol))
}

fn meet_unchecked(p: &ComplexMatrix, q: &ComplexMatrix, tol: &ToleranceConfig) -> ComplexMatrix {
    let n = p.rows();
    let id = ComplexMatrix::identity(n);
    let m = &(&id - p) + &(&id - q);
    let e = hermitian_eigen(&m).expect("square");
    let kernel: Vec<Vec<C64>> = (0..n)
        .filter(|&k| e.values[k] <= tol.eps)
        .map(|k| e.vectors.column(k))
        .collect();
    projector_onto(n, &kernel)
}

/// Projection onto the span of `range(P) ∪ range(Q)`, as `I - ((I-P) ∧ (I-Q))`.
pub fn range_join(p: &ComplexMatrix, q: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    require_projection_pair(p, q, tol)?;
    let id = ComplexMatrix::identity(p.rows());
    Ok(&id - &meet_unchecked(&(&id - p), &(&id - q), tol))
}

/// `Σ v v*` over orthonormal vectors.
pub fn projector_onto(n: usize, orthonormal: &[Vec<C64>]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(n, n);
    for v in orthonormal {
        out = &out + &ComplexMatrix::outer(v);
    }
    out
}

/// `G = V V*` for a positive semidefinite `G`.
#[derive(Debug, Clone)]
pub struct RankDecomposition {
    pub rank: usize,
    /// `n × rank`, equal to `U_r Λ_r^{1/2}`.
    pub factor: ComplexMatrix,
    /// Orthonormal eigenvectors of the kept eigenvalues, `n × rank`.
    pub basis: ComplexMatrix,
    /// Kept eigenvalues, descending.
    pub values: Vec<f64>,
}

/// Numerical rank by the relative cutoff `λ > rank_rel · λmax`.
pub fn rank_decomposition(g: &ComplexMatrix, tol: &ToleranceConfig) -> Result<RankDecomposition> {
    require_square(g, "Gram matrix")?;
    let herm = g.hermitian_residual();
    if herm > tol.eps {
        return Err(Error::Domain(format!("matrix is not Hermitian (‖G - G*‖ = {herm:.3e})")));
    }
    let n = g.rows();
    let e = hermitian_eigen(g)?;
    let min = e.values.first().copied().unwrap_or(0.0);
    if min < -tol.eps {
        return Err(Error::Domain(format!("matrix is not positive semidefinite (eigenvalue {min:.3e})")));
    }
    let max = e.values.last().copied().unwrap_or(0.0);
    let cutoff = tol.rank_rel * max;
    let kept: Vec<usize> = (0..n).rev().filter(|&k| e.values[k] > cutoff && e.values[k] > 0.0).collect();
    let basis = ComplexMatrix::from_fn(n, kept.len(), |r, c| e.vectors[(r, kept[c])]);
    let values: Vec<f64> = kept.iter().map(|&k| e.values[k]).collect();
    let factor = ComplexMatrix::from_fn(n, kept.len(), |r, c| basis[(r, c)] * values[c].sqrt());
    Ok(RankDecomposition {
        rank: kept.len(),
        factor,
        basis,
        values,
    })
}

/// `A <= B` in the positive semidefinite order, within `eps`.
pub fn operator_order(a: &ComplexMatrix, b: &ComplexMatrix, tol: &ToleranceConfig) -> Result<bool> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Domain("operator_order needs equal dimensions".into()));
    }
    if !a.is_hermitian(tol) || !b.is_hermitian(tol) {
        return Err(Error::Domain("operator_order needs Hermitian arguments".into()));
    }
    Ok(min_eigenvalue(&(b - a))? >= -tol.eps)
}

pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigen(h)?.values.first().copied().unwrap_or(0.0))
}

/// `f(H)` for Hermitian `H` through its spectral decomposition.
pub fn spectral_map(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let e = hermitian_eigen(h)?;
    let n = h.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let fk = f(e.values[k]);
        if fk == 0.0 {
            continue;
        }
        let v = e.vectors.column(k);
        out = &out + &ComplexMatrix::outer(&v).scale_re(fk);
    }
    Ok(out)
}

/// Moore-Penrose inverse of a positive semidefinite matrix, with the rank cutoff of `tol`.
pub fn psd_pseudo_inverse(g: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    let d = rank_decomposition(g, tol)?;
    let n = g.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..d.rank {
        let v = d.basis.column(k);
        out = &out + &ComplexMatrix::outer(&v).scale_re(1.0 / d.values[k]);
    }
    Ok(out)
}

/// Multiplies each column by a phase so its largest-magnitude entry is real
/// and positive. Ties within a relative 1e-9 go to the first index.
pub fn canonicalize_phases(m: &mut ComplexMatrix) {
    for c in 0..m.cols() {
        let max = (0..m.rows()).map(|r| m[(r, c)].norm()).fold(0.0, f64::max);
        if max == 0.0 {
            continue;
        }
        let pivot = (0..m.rows())
            .find(|&r| m[(r, c)].norm() >= max * (1.0 - 1e-9))
            .expect("max is attained");
        let z = m[(pivot, c)];
        let phase = z.conj() / z.norm();
        for r in 0..m.rows() {
            m[(r, c)] *= phase;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn plus() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5])
    }

    #[test]
    fn projections() {
        let t = tol();
        assert!(is_orthoprojection(&ComplexMatrix::identity(3), &t).unwrap());
        assert!(is_orthoprojection(&ComplexMatrix::diag(&[1.0, 0.0]), &t).unwrap());
        assert!(is_orthoprojection(&plus(), &t).unwrap());
        assert!(!is_orthoprojection(&ComplexMatrix::diag(&[2.0, 0.0]), &t).unwrap());
        assert!(matches!(is_orthoprojection(&ComplexMatrix::zeros(2, 3), &t), Err(Error::Domain(_))));
    }

    #[test]
    fn meets_and_joins() {
        let t = tol();
        let p = ComplexMatrix::diag(&[1.0, 0.0]);
        let id = ComplexMatrix::identity(2);
        let zero = ComplexMatrix::zeros(2, 2);
        assert!(distance(&range_meet(&p, &p, &t).unwrap(), &p) < 1e-12);
        assert!(range_meet(&p, &plus(), &t).unwrap().max_abs() < 1e-12);
        assert!(distance(&range_meet(&p, &id, &t).unwrap(), &p) < 1e-12);
        assert!(distance(&range_join(&p, &zero, &t).unwrap(), &p) < 1e-12);
        assert!(distance(&range_join(&p, &plus(), &t).unwrap(), &id) < 1e-12);
        assert!(distance(&range_join(&p, &p, &t).unwrap(), &p) < 1e-12);
        assert!(matches!(range_meet(&p, &ComplexMatrix::diag(&[2.0, 0.0]), &t), Err(Error::Domain(_))));
    }

    #[test]
    fn rank_decompositions() {
        let t = tol();
        let d = rank_decomposition(&ComplexMatrix::identity(4), &t).unwrap();
        assert_eq!(d.rank, 4);
        let ones = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let d = rank_decomposition(&ones, &t).unwrap();
        assert_eq!(d.rank, 1);
        let v = d.factor.column(0);
        assert!((v[0] - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((v[1] - C64::new(1.0, 0.0)).norm() < 1e-12);
        let d = rank_decomposition(&ComplexMatrix::zeros(3, 3), &t).unwrap();
        assert_eq!((d.rank, d.factor.cols()), (0, 0));
        assert!(matches!(rank_decomposition(&ComplexMatrix::diag(&[1.0, -1.0]), &t), Err(Error::Domain(_))));
    }

    #[test]
    fn psd_order() {
        let t = tol();
        let p = ComplexMatrix::diag(&[1.0, 0.0]);
        assert!(operator_order(&p, &p, &t).unwrap());
        assert!(operator_order(&ComplexMatrix::zeros(2, 2), &plus(), &t).unwrap());
        assert!(!operator_order(&p, &ComplexMatrix::diag(&[0.0, 1.0]), &t).unwrap());
        let skew = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        assert!(matches!(operator_order(&skew, &p, &t), Err(Error::Domain(_))));
    }

    #[test]
    fn operator_norm_of_mo2_pair() {
        let p1 = ComplexMatrix::diag(&[1.0, 0.0]);
        let prod = &p1 * &plus();
        assert!((prod.max_abs() - 0.5).abs() < 1e-15);
        assert!((prod.op_norm() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn tolerance_validation() {
        assert!(ToleranceConfig::new(1e-9, 1e-10).is_ok());
        assert!(ToleranceConfig::new(1e-9, 1e-8).is_err());
        assert!(ToleranceConfig::new(2.0, 1e-10).is_err());
        assert_eq!(ToleranceConfig::with_eps(1e-6).unwrap().rank_rel, 1e-10);
        assert!(ToleranceConfig::with_eps(1e-12).unwrap().rank_rel < 1e-12);
    }

    #[test]
    fn phase_canonicalization() {
        let i = C64::new(0.0, 1.0);
        let mut m = ComplexMatrix::from_vec(2, 1, vec![i * 0.6, i * -0.8]).unwrap();
        canonicalize_phases(&mut m);
        assert!((m[(1, 0)] - C64::new(0.8, 0.0)).norm() < 1e-15);
        assert!((m[(0, 0)] - C64::new(-0.6, 0.0)).norm() < 1e-15);
    }
}
