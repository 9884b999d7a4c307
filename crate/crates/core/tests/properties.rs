//! Algebraic laws as properties over generated structures and matrices.

mod common;

use proptest::prelude::*;
use qstruct::boolean_rep::{represent_distribution, stone_map, BooleanSemiring, SetSystem};
use qstruct::clan::{theorem_2_4_check, Clan};
use qstruct::gns::{gns_construct, schwartz_check, AlgebraState, ConcreteStarAlgebra};
use qstruct::io::{
    parse_dilation, parse_operator, parse_structure, read_operator, read_structure, DilationFile,
};
use qstruct::matrix::{
    distance, hermitian_eigen, operator_order, range_join, range_meet, rank_decomposition, ComplexMatrix,
    ToleranceConfig, C64,
};
use qstruct::naimark::{dilate, unitary_equivalence, verify_dilation, FinitePovm};
use qstruct::ortho::{boolean_criterion, is_distributive, satisfies_weak_modular, verify_logic, OrthoLogic};
use qstruct::quasilogic::{check_de_morgan, check_sum_laws, verify_quasilogic};
use qstruct::random;
use qstruct::semilogic::{verify_semilogic, DistributionTable};
use qstruct::VerificationReport;
use rand::Rng;
use std::collections::BTreeSet;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn assert_valid(report: &VerificationReport) -> Result<(), TestCaseError> {
    match report.first_violation() {
        None => Ok(()),
        Some((axiom, v)) => Err(TestCaseError::fail(format!("{axiom} at ({}): {}", v.witness.join(", "), v.detail))),
    }
}

fn hermitian(rng: &mut random::QRng, n: usize) -> ComplexMatrix {
    let g = random::ginibre(rng, n, n);
    (&g + &g.adjoint()).scale_re(0.5)
}

/// Unions of blocks of a partition of `n` points into `k` nonempty blocks;
/// point `x < k` seeds block `x` and the rest follow `assignment`.
fn block_ring(n: usize, assignment: &[usize], k: usize) -> SetSystem {
    let block_of = |x: usize| if x < k { x } else { assignment[x] % k };
    let blocks: Vec<BTreeSet<usize>> = (0..k).map(|b| (0..n).filter(|&x| block_of(x) == b).collect()).collect();
    let sets = (0u32..1 << k)
        .map(|m| (0..k).filter(|i| m & (1 << i) != 0).flat_map(|i| blocks[i].iter().copied()).collect())
        .collect();
    SetSystem::new((0..n).map(|x| format!("x{x}")).collect(), sets).unwrap()
}

fn ring_strategy() -> impl Strategy<Value = (usize, usize, Vec<usize>)> {
    (1usize..=5).prop_flat_map(|n| (Just(n), 1..=n, prop::collection::vec(0usize..8, n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn powerset_quasilogics_satisfy_every_law(seed in any::<u64>(), n in 0usize..=4) {
        let q = random::shuffled_powerset(&mut random::rng(seed), n);
        assert_valid(&verify_quasilogic(&q))?;
        assert_valid(&check_sum_laws(&q))?;
        assert_valid(&check_de_morgan(&q))?;
    }

    #[test]
    fn powerset_ortho_logics_are_distributive_and_criterion_agrees(seed in any::<u64>(), n in 1usize..=4) {
        let q = random::shuffled_powerset(&mut random::rng(seed), n);
        let lg = OrthoLogic::from_quasilogic(q).unwrap();
        assert_valid(&verify_logic(&lg))?;
        prop_assert!(satisfies_weak_modular(&lg));
        prop_assert!(is_distributive(&lg).holds);
        prop_assert!(boolean_criterion(&lg).holds);
    }

    #[test]
    fn rings_of_sets_are_boolean_semirings((n, k, assignment) in ring_strategy()) {
        let ring = block_ring(n, &assignment, k);
        let s = ring.to_semilogic().unwrap();
        assert_valid(&verify_semilogic(&s))?;
        prop_assert!(s.is_logic());
        let b = BooleanSemiring::new(s).unwrap();
        let rep = stone_map(&b).unwrap();
        assert_valid(&rep.report)?;
        prop_assert_eq!(rep.points(), k);
    }

    #[test]
    fn stone_transfer_reproduces_distributions(
        (n, k, assignment) in ring_strategy(),
        weights in prop::collection::vec(0.01f64..1.0, 5),
    ) {
        let ring = block_ring(n, &assignment, k);
        let b = BooleanSemiring::new(ring.to_semilogic().unwrap()).unwrap();
        let total: f64 = weights[..n].iter().sum();
        let values = ring.sets.iter().map(|s| s.iter().map(|&x| weights[x] / total).sum()).collect();
        let table = DistributionTable::new(values);
        let (rep, mu) = represent_distribution(&b, &table).unwrap();
        for x in b.ids() {
            let m = mu.measure(&rep.h0[x.0]).unwrap();
            prop_assert!((m - table.get(x)).abs() <= 1e-12, "{}: {m} vs {}", b.label(x), table.get(x));
        }
    }

    #[test]
    fn eigen_decomposition_reconstructs(seed in any::<u64>(), n in 1usize..=64) {
        let h = hermitian(&mut random::rng(seed), n);
        let e = hermitian_eigen(&h).unwrap();
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let rebuilt = &(&e.vectors * &ComplexMatrix::diag(&e.values)) * &e.vectors.adjoint();
        prop_assert!(distance(&rebuilt, &h) <= 1e-9 * h.frobenius_norm().max(1.0));
        let gram = &e.vectors.adjoint() * &e.vectors;
        prop_assert!(distance(&gram, &ComplexMatrix::identity(n)) <= 1e-9);
    }

    #[test]
    fn rank_decomposition_recovers_rank(seed in any::<u64>(), n in 1usize..=64, k in 0usize..=8) {
        let k = k.min(n);
        let x = random::ginibre(&mut random::rng(seed), n, k);
        let g = (&x * &x.adjoint()).hermitian_part();
        let d = rank_decomposition(&g, &tol()).unwrap();
        prop_assert_eq!(d.rank, k);
        let back = &d.factor * &d.factor.adjoint();
        prop_assert!(distance(&back, &g) <= 1e-9 * g.frobenius_norm().max(1.0));
    }

    #[test]
    fn projection_meets_and_joins_obey_lattice_laws(seed in any::<u64>(), d in 1usize..=6, rp in 0usize..=6, rq in 0usize..=6) {
        let t = tol();
        let mut rng = random::rng(seed);
        let (p, q) = (random::projection(&mut rng, d, rp.min(d)), random::projection(&mut rng, d, rq.min(d)));
        let meet = range_meet(&p, &q, &t).unwrap();
        let join = range_join(&p, &q, &t).unwrap();
        prop_assert!(operator_order(&meet, &p, &t).unwrap());
        prop_assert!(operator_order(&meet, &q, &t).unwrap());
        prop_assert!(operator_order(&p, &join, &t).unwrap());
        prop_assert!(operator_order(&q, &join, &t).unwrap());
        prop_assert!(distance(&range_meet(&p, &q, &t).unwrap(), &range_meet(&q, &p, &t).unwrap()) <= 1e-9);
        prop_assert!(distance(&range_meet(&p, &p, &t).unwrap(), &p) <= 1e-9);
        let id = ComplexMatrix::identity(d);
        let de_morgan = &id - &range_meet(&(&id - &p), &(&id - &q), &t).unwrap();
        prop_assert!(distance(&join, &de_morgan) <= 1e-9);
    }

    #[test]
    fn rotated_diagonal_clans_are_distributive(seed in any::<u64>(), d in 1usize..=3) {
        let t = tol();
        let u = random::unitary(&mut random::rng(seed), d);
        let full = (1usize << d) - 1;
        let (labels, mats): (Vec<String>, Vec<ComplexMatrix>) = (0..=full)
            .map(|mask| {
                let diag: Vec<f64> = (0..d).map(|i| ((mask >> i) & 1) as f64).collect();
                (format!("d{mask}"), (&(&u * &ComplexMatrix::diag(&diag)) * &u.adjoint()).hermitian_part())
            })
            .unzip();
        let clan = Clan::new(labels, mats, &format!("d{full}")).unwrap();
        let c = theorem_2_4_check(&clan, &t).unwrap();
        prop_assert!(c.distributive && c.criterion);
    }

    #[test]
    fn gns_space_dimension_is_d_times_rank(seed in any::<u64>(), d in 2usize..=4, rank in 1usize..=4) {
        let t = tol();
        let rank = rank.min(d);
        let rho = random::density_matrix(&mut random::rng(seed), d, rank);
        let alg = ConcreteStarAlgebra::full_matrix_algebra(d);
        let g = gns_construct(&alg, &AlgebraState::Density(rho), &t).unwrap();
        assert_valid(&g.report)?;
        prop_assert_eq!(g.space_dim, d * rank);
        let r = &g.residuals;
        prop_assert!(r.reconstruction.max(r.multiplicativity).max(r.adjoint) <= 1e-9);
    }

    #[test]
    fn schwartz_slack_is_nonnegative(seed in any::<u64>(), d in 1usize..=4, rank in 1usize..=4) {
        let rank = rank.min(d);
        let mut rng = random::rng(seed);
        let rho = random::density_matrix(&mut rng, d, rank);
        let alg = ConcreteStarAlgebra::full_matrix_algebra(d);
        let strict = ToleranceConfig { eps: 1e-12, ..tol() };
        assert_valid(&schwartz_check(&alg, &AlgebraState::Density(rho), &strict, 100, rng.random()))?;
    }

    #[test]
    fn naimark_dilations_are_minimal_and_unique(seed in any::<u64>(), outcomes in 1usize..=5, d in 1usize..=3) {
        let t = tol();
        let mut rng = random::rng(seed);
        let names: Vec<String> = (0..outcomes).map(|i| format!("o{i}")).collect();
        let p = FinitePovm::from_atoms(names, random::povm(&mut rng, outcomes, d), &t).unwrap();
        let dil = dilate(&p, &t).unwrap();
        assert_valid(&verify_dilation(&p, &dil, &t))?;
        let w = random::unitary(&mut rng, dil.dim_e);
        let other = dil.conjugate(&w);
        let eq = unitary_equivalence(&dil, &other, &p, &t).unwrap();
        let phase = (0..dil.dim_e * dil.dim_e)
            .map(|i| (i / dil.dim_e, i % dil.dim_e))
            .find(|&(r, c)| w[(r, c)].norm() > 1e-3)
            .map(|(r, c)| w[(r, c)] / eq.u[(r, c)])
            .unwrap_or(C64::new(1.0, 0.0));
        prop_assert!(distance(&eq.u.scale(phase), &w) <= 1e-8);
    }

    #[test]
    fn projection_valued_measures_do_not_grow(seed in any::<u64>(), outcomes in 1usize..=5, d in 1usize..=3) {
        let t = tol();
        let names: Vec<String> = (0..outcomes).map(|i| format!("o{i}")).collect();
        let p = FinitePovm::from_atoms(names, random::pvm(&mut random::rng(seed), outcomes, d), &t).unwrap();
        prop_assert!(p.is_projection_valued(&t));
        prop_assert_eq!(dilate(&p, &t).unwrap().dim_e, d);
    }
}

#[test]
fn structure_files_round_trip() {
    for entry in std::fs::read_dir(common::fixture("structures")).unwrap() {
        let path = entry.unwrap().path();
        let file = read_structure(&path).unwrap();
        assert_eq!(parse_structure(file.to_json().as_bytes()).unwrap(), file, "{}", path.display());
    }
}

#[test]
fn operator_files_round_trip() {
    for entry in std::fs::read_dir(common::fixture("operators")).unwrap() {
        let path = entry.unwrap().path();
        let Ok(file) = read_operator(&path) else {
            continue; // bare state files
        };
        assert_eq!(parse_operator(file.to_json().as_bytes()).unwrap(), file, "{}", path.display());
    }
}

#[test]
fn dilation_files_round_trip() {
    let t = tol();
    let mut rng = random::rng(5);
    for outcomes in 1..=4 {
        let names: Vec<String> = (0..outcomes).map(|i| format!("o{i}")).collect();
        let p = FinitePovm::from_atoms(names, random::povm(&mut rng, outcomes, 2), &t).unwrap();
        let d = dilate(&p, &t).unwrap();
        let file = DilationFile::from_dilation(&p, &d);
        let back = parse_dilation(file.to_json().as_bytes()).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_dilation(&p).unwrap(), d);
    }
}
