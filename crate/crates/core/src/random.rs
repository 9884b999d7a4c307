//! Seeded generators for randomized checks: Ginibre matrices, Haar-like
//! unitaries, density matrices, POVMs and relabeled powerset structures.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{spectral_map, ComplexMatrix, C64};
use crate::order::{ElementId, FinitePoset};
use crate::quasilogic::Quasilogic;

pub type QRng = ChaCha8Rng;

pub fn rng(seed: u64) -> QRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn complex_vector(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

pub fn unit_vector(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    let v = complex_vector(rng, n);
    let norm = ComplexMatrix::inner(&v, &v).re.sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Matrix with i.i.d. standard complex normal entries.
pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    ComplexMatrix::from_vec(rows, cols, data).expect("finite samples")
}

/// Gram-Schmidt on a Ginibre matrix, with the phase of each diagonal entry
/// of the triangular factor removed so the distribution is Haar.
pub fn unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut v = g.column(c);
        // Two passes keep the columns orthogonal to working precision.
        for _ in 0..2 {
            for q in &cols {
                let proj = ComplexMatrix::inner(&v, q);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = ComplexMatrix::inner(&v, &v).re.sqrt();
        let phase = {
            let r = ComplexMatrix::inner(&g.column(c), &v);
            if r.norm() > 0.0 { r.conj() / r.norm() } else { C64::new(1.0, 0.0) }
        };
        cols.push(v.into_iter().map(|z| z * phase.conj() / norm).collect());
    }
    ComplexMatrix::from_columns(n, &cols)
}

/// First `cols` columns of a random unitary.
pub fn isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    unitary(rng, rows).columns(0..cols)
}

/// `XX*/tr(XX*)` for a `d × rank` Ginibre `X`.
pub fn density_matrix(rng: &mut impl Rng, d: usize, rank: usize) -> ComplexMatrix {
    let x = ginibre(rng, d, rank);
    let rho = &x * &x.adjoint();
    let tr = rho.trace().re;
    rho.scale_re(1.0 / tr).hermitian_part()
}

pub fn projection(rng: &mut impl Rng, d: usize, rank: usize) -> ComplexMatrix {
    let v = isometry(rng, d, rank);
    (&v * &v.adjoint()).hermitian_part()
}

/// Effects `S^{-1/2} A_i S^{-1/2}` with Wishart `A_i` and `S = Σ A_i`.
pub fn povm(rng: &mut impl Rng, outcomes: usize, d: usize) -> Vec<ComplexMatrix> {
    let raw: Vec<ComplexMatrix> = (0..outcomes)
        .map(|_| {
            let x = ginibre(rng, d, d);
            &x * &x.adjoint()
        })
        .collect();
    let mut s = ComplexMatrix::zeros(d, d);
    for a in &raw {
        s = &s + a;
    }
    let inv_sqrt = spectral_map(&s, |x| 1.0 / x.sqrt()).expect("square");
    raw.iter()
        .map(|a| (&(&inv_sqrt * a) * &inv_sqrt).hermitian_part())
        .collect()
}

/// Spectral projections of a random orthonormal basis, each basis vector
/// assigned to a random outcome. Some outcomes may receive 0.
pub fn pvm(rng: &mut impl Rng, outcomes: usize, d: usize) -> Vec<ComplexMatrix> {
    let u = unitary(rng, d);
    let mut effects = vec![ComplexMatrix::zeros(d, d); outcomes];
    for k in 0..d {
        let i = rng.random_range(0..outcomes);
        effects[i] = &effects[i] + &ComplexMatrix::outer(&u.column(k));
    }
    effects
}

/// The boolean algebra of subsets of `n` atoms as a quasilogic with
/// `b - a = b \ a`, its elements listed in a random order.
pub fn shuffled_powerset(rng: &mut impl Rng, n: usize) -> Quasilogic {
    let mut masks: Vec<usize> = (0..1usize << n).collect();
    masks.shuffle(rng);
    powerset_quasilogic(&masks)
}

/// Powerset quasilogic with element `i` the subset encoded by `masks[i]`.
pub fn powerset_quasilogic(masks: &[usize]) -> Quasilogic {
    let labels = masks.iter().map(|m| format!("s{m}")).collect();
    let le = masks
        .iter()
        .map(|&a| masks.iter().map(|&b| a & !b == 0).collect())
        .collect();
    let poset = FinitePoset::from_relation(labels, le).expect("inclusion is a partial order");
    let pos = |m: usize| ElementId(masks.iter().position(|&x| x == m).expect("closed under difference"));
    let diff = masks
        .iter()
        .map(|&b| {
            masks
                .iter()
                .map(|&a| if a & !b == 0 { Some(pos(b & !a)) } else { None })
                .collect()
        })
        .collect();
    Quasilogic::new(poset, diff).expect("powerset difference is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{distance, is_orthoprojection, min_eigenvalue, ToleranceConfig};
    use crate::quasilogic::{classify, verify_quasilogic, ClassificationLabel};

    #[test]
    fn unitaries_are_unitary() {
        let mut r = rng(3);
        for n in 1..6 {
            let u = unitary(&mut r, n);
            assert!(distance(&(&u.adjoint() * &u), &ComplexMatrix::identity(n)) < 1e-12);
        }
    }

    #[test]
    fn densities_and_projections() {
        let mut r = rng(4);
        let t = ToleranceConfig::default();
        for d in 1..5 {
            for rank in 1..=d {
                let rho = density_matrix(&mut r, d, rank);
                assert!((rho.trace().re - 1.0).abs() < 1e-12);
                assert!(min_eigenvalue(&rho).unwrap() > -1e-12);
                assert!(is_orthoprojection(&projection(&mut r, d, rank), &t).unwrap());
            }
        }
    }

    #[test]
    fn povms_are_normalized() {
        let mut r = rng(5);
        for (outcomes, d) in [(2, 1), (3, 2), (5, 3)] {
            for effects in [povm(&mut r, outcomes, d), pvm(&mut r, outcomes, d)] {
                let mut s = ComplexMatrix::zeros(d, d);
                for e in &effects {
                    assert!(min_eigenvalue(e).unwrap() > -1e-12);
                    s = &s + e;
                }
                assert!(distance(&s, &ComplexMatrix::identity(d)) < 1e-12);
            }
        }
    }

    #[test]
    fn shuffled_powersets_are_boolean() {
        let mut r = rng(6);
        for n in 0..=3 {
            let q = shuffled_powerset(&mut r, n);
            assert!(verify_quasilogic(&q).is_valid());
            if n > 0 {
                assert_eq!(classify(&q).label, ClassificationLabel::BooleanAlgebra);
            }
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        assert_eq!(ginibre(&mut rng(9), 2, 2), ginibre(&mut rng(9), 2, 2));
    }
}
