//! Independent reference computations: nalgebra eigenvalues, brute-force
//! Gram ranks, direct matrix products and hand-derived counts.

mod common;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use qstruct::clan::theorem_2_4_check;
use qstruct::gns::{gns_construct, AlgebraState, ConcreteStarAlgebra};
use qstruct::io::{read_operator, read_structure};
use qstruct::matrix::{hermitian_eigen, ComplexMatrix, ToleranceConfig, C64};
use qstruct::naimark::{dilate, gram_matrix, trine_effects, FinitePovm};
use qstruct::random;

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
}

fn oracle_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(to_nalgebra(m)).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenvalues above the relative cutoff, counted by the reference solver.
fn oracle_rank(m: &ComplexMatrix, tol: &ToleranceConfig) -> usize {
    let v = oracle_eigenvalues(m);
    let top = v.iter().copied().fold(0.0, f64::max);
    v.iter().filter(|&&x| x > tol.rank_rel * top).count()
}

#[test]
fn eigenvalues_match_reference() {
    let mut rng = random::rng(101);
    for n in [1, 2, 3, 5, 8, 13, 21, 34, 64] {
        let g = random::ginibre(&mut rng, n, n);
        let h = (&g + &g.adjoint()).scale_re(0.5);
        let ours = hermitian_eigen(&h).unwrap().values;
        let theirs = oracle_eigenvalues(&h);
        let scale = theirs.iter().map(|x| x.abs()).fold(1.0, f64::max);
        for (a, b) in ours.iter().zip(&theirs) {
            assert!((a - b).abs() <= 1e-10 * scale, "n = {n}: {a} vs {b}");
        }
    }
}

#[test]
fn eigenvalues_of_degenerate_spectra_match_reference() {
    let mut rng = random::rng(102);
    for (n, k) in [(6, 2), (16, 3), (40, 5)] {
        let u = random::unitary(&mut rng, n);
        let values: Vec<f64> = (0..n).map(|i| (i % k) as f64).collect();
        let h = (&(&u * &ComplexMatrix::diag(&values)) * &u.adjoint()).hermitian_part();
        let ours = hermitian_eigen(&h).unwrap().values;
        let theirs = oracle_eigenvalues(&h);
        for (a, b) in ours.iter().zip(&theirs) {
            approx::assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }
}

#[test]
fn trine_gram_rank_is_three() {
    let tol = ToleranceConfig::default();
    let names = vec!["a".to_string(), "b".into(), "c".into()];
    let p = FinitePovm::from_atoms(names, trine_effects(), &tol).unwrap();
    let g = gram_matrix(&p, &tol).unwrap();
    assert_eq!(oracle_rank(&g, &tol), 3);
    assert_eq!(dilate(&p, &tol).unwrap().dim_e, 3);
}

#[test]
fn random_povm_dilation_dimension_matches_reference_rank() {
    let tol = ToleranceConfig::default();
    let mut rng = random::rng(103);
    for outcomes in 1..=5 {
        for d in 1..=3 {
            let names = (0..outcomes).map(|i| format!("o{i}")).collect();
            let p = FinitePovm::from_atoms(names, random::povm(&mut rng, outcomes, d), &tol).unwrap();
            let g = gram_matrix(&p, &tol).unwrap();
            assert_eq!(dilate(&p, &tol).unwrap().dim_e, oracle_rank(&g, &tol), "{outcomes} outcomes on C^{d}");
        }
    }
}

#[test]
fn gns_dimension_matches_reference_rank() {
    let tol = ToleranceConfig::default();
    let mut rng = random::rng(104);
    for d in 2..=4 {
        let alg = ConcreteStarAlgebra::full_matrix_algebra(d);
        for rank in 1..=d {
            let rho = random::density_matrix(&mut rng, d, rank);
            let g = gns_construct(&alg, &AlgebraState::Density(rho.clone()), &tol).unwrap();
            // Gram matrix G[j][k] = tr(ρ a_j a_k*) built directly from the basis.
            let basis = alg.basis();
            let gram = ComplexMatrix::from_fn(basis.len(), basis.len(), |j, k| {
                (&rho * &(&basis[j].1 * &basis[k].1.adjoint())).trace()
            });
            assert_eq!(g.space_dim, oracle_rank(&gram, &tol));
            assert_eq!(g.space_dim, d * rank);
        }
    }
}

#[test]
fn mo2_product_by_direct_multiplication() {
    let tol = ToleranceConfig::default();
    let file = read_operator(&common::fixture("operators/clan_mo2.json")).unwrap();
    let p1 = file.matrix("p1").unwrap();
    let q1 = file.matrix("q1").unwrap();
    let prod = &to_nalgebra(&p1) * &to_nalgebra(&q1);
    let max_entry = prod.iter().map(|z| z.norm()).fold(0.0, f64::max);
    approx::assert_abs_diff_eq!(max_entry, 0.5, epsilon = 1e-12);
    let sigma = prod.singular_values().max();
    approx::assert_abs_diff_eq!(sigma, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);

    let check = theorem_2_4_check(&file.to_clan().unwrap(), &tol).unwrap();
    let w = check.criterion_witness.expect("MO2 has a criterion witness");
    approx::assert_abs_diff_eq!(w.product_max_entry.unwrap(), max_entry, epsilon = 1e-12);
    approx::assert_abs_diff_eq!(w.product_op_norm.unwrap(), sigma, epsilon = 1e-12);
}

#[test]
fn stone_point_count_is_the_atom_count() {
    // For 2^n the atoms are the n one-letter labels; no order computation needed.
    for (rel, atoms) in [
        ("structures/two_element.json", 1),
        ("structures/bool2_semiring.json", 2),
        ("structures/bool3_semiring.json", 3),
        ("structures/bool4_semiring.json", 4),
    ] {
        let file = read_structure(&common::fixture(rel)).unwrap();
        let by_label = file.elements.iter().filter(|l| l.len() == 1 && *l != "0" && *l != "1").count();
        assert_eq!(by_label, atoms);
        let b = file.to_boolean_semiring().unwrap();
        assert_eq!(qstruct::boolean_rep::stone_map(&b).unwrap().points(), atoms, "{rel}");
    }
}

#[test]
fn unit_vector_state_reproduces_matrix_entries() {
    let tol = ToleranceConfig::default();
    let alg = ConcreteStarAlgebra::full_matrix_algebra(2);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = [C64::new(h, 0.0), C64::new(0.0, h)];
    let rho = ComplexMatrix::outer(&psi);
    let g = gns_construct(&alg, &AlgebraState::Density(rho.clone()), &tol).unwrap();
    // (π(a)ξ, ξ) must equal tr(ρa) = ⟨ψ, aψ⟩ for every basis element.
    for (label, a) in alg.basis() {
        let expected = ComplexMatrix::inner(&a.apply(&psi), &psi);
        let pi = &g.rep.iter().find(|(l, _)| l == label).unwrap().1;
        let got = ComplexMatrix::inner(&pi.apply(&g.cyclic), &g.cyclic);
        assert!((got - expected).norm() < 1e-12, "{label}: {got} vs {expected}");
    }
}
