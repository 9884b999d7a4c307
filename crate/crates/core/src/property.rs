//! Seeded randomized property suites.
//!
//! Each suite draws cases of growing size from a fixed seed. When a case
//! fails, the same case seed is replayed at every smaller size and the
//! smallest failing one is kept as the witness.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::boolean_rep::{represent_distribution, stone_map, BooleanSemiring, PointSet, SetSystem};
use crate::clan::{theorem_2_4_check, verify_clan, Clan};
use crate::error::{Error, Result};
use crate::gns::{gns_construct, schwartz_check, AlgebraState, ConcreteStarAlgebra};
use crate::io::{StructureFile, StructureKind};
use crate::matrix::hermitian_eigen;
use crate::matrix::{
    distance, operator_order, range_join, range_meet, rank_decomposition, ComplexMatrix, ToleranceConfig, C64,
};
use crate::naimark::{dilate, gram_matrix, unitary_equivalence, verify_dilation, FinitePovm};
use crate::ortho::{boolean_criterion, is_distributive, satisfies_weak_modular, segment_counterexample, verify_logic, OrthoLogic};
use crate::quasilogic::{check_sum_lattice_identity, check_sum_laws, classify, verify_quasilogic, ClassificationLabel};
use crate::random;
use crate::report::VerificationReport;
use crate::semilogic::{verify_semilogic, DistributionTable};

/// Suite names in the order `all` runs them.
pub const SUITES: &[&str] = &[
    "quasilogic",
    "semilogic",
    "ortho",
    "stone",
    "matrix",
    "clan",
    "gns",
    "schwartz",
    "naimark",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CaseFailure {
    pub detail: String,
    pub data: Value,
}

type CaseResult = std::result::Result<(), CaseFailure>;

fn fail(detail: impl Into<String>, data: Value) -> CaseResult {
    Err(CaseFailure {
        detail: detail.into(),
        data,
    })
}

fn check_report(report: &VerificationReport, data: impl FnOnce() -> Value) -> CaseResult {
    match report.first_violation() {
        None => Ok(()),
        Some((axiom, v)) => fail(format!("{axiom} at ({}): {}", v.witness.join(", "), v.detail), data()),
    }
}

fn lib<T>(r: Result<T>, data: impl FnOnce() -> Value) -> std::result::Result<T, CaseFailure> {
    r.map_err(|e| CaseFailure {
        detail: e.to_string(),
        data: data(),
    })
}

struct Suite {
    name: &'static str,
    default_iters: usize,
    max_size: usize,
    case: fn(&mut random::QRng, usize, &ToleranceConfig) -> CaseResult,
}

fn suite(name: &str) -> Option<Suite> {
    let s = |name, default_iters, max_size, case| Suite {
        name,
        default_iters,
        max_size,
        case,
    };
    Some(match name {
        "quasilogic" => s("quasilogic", 100, 4, quasilogic_case as fn(&mut _, _, &_) -> _),
        "semilogic" => s("semilogic", 60, 5, semilogic_case),
        "ortho" => s("ortho", 40, 4, ortho_case),
        "stone" => s("stone", 50, 5, stone_case),
        "matrix" => s("matrix", 60, 8, matrix_case),
        "clan" => s("clan", 30, 3, clan_case),
        "gns" => s("gns", 50, 3, gns_case),
        "schwartz" => s("schwartz", 30, 3, schwartz_case),
        "naimark" => s("naimark", 100, 15, naimark_case),
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizedWitness {
    pub suite: String,
    pub seed: u64,
    pub iteration: usize,
    pub case_seed: u64,
    pub size: usize,
    pub original_size: usize,
    pub detail: String,
    pub data: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub seed: u64,
    pub iters: usize,
    pub passed: bool,
    pub failure: Option<MinimizedWitness>,
}

fn case_seed(seed: u64, iteration: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (iteration as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9)
}

fn size_of(s: &Suite, iteration: usize) -> usize {
    1 + iteration % s.max_size
}

/// Unknown names are a structural error.
pub fn run_suite(name: &str, seed: u64, iters: Option<usize>, tol: &ToleranceConfig) -> Result<SuiteOutcome> {
    let s = suite(name).ok_or_else(|| {
        Error::Structural(format!("unknown suite \"{name}\"; known: all, {}", SUITES.join(", ")))
    })?;
    Ok(run_with(&s, seed, iters, tol))
}

fn run_with(s: &Suite, seed: u64, iters: Option<usize>, tol: &ToleranceConfig) -> SuiteOutcome {
    let iters = iters.unwrap_or(s.default_iters);
    for i in 0..iters {
        let cs = case_seed(seed, i);
        let size = size_of(s, i);
        if let Err(first) = (s.case)(&mut random::rng(cs), size, tol) {
            let (size, failure) = (1..size)
                .find_map(|k| (s.case)(&mut random::rng(cs), k, tol).err().map(|f| (k, f)))
                .unwrap_or((size, first));
            return SuiteOutcome {
                suite: s.name.into(),
                seed,
                iters,
                passed: false,
                failure: Some(MinimizedWitness {
                    suite: s.name.into(),
                    seed,
                    iteration: i,
                    case_seed: cs,
                    size,
                    original_size: size_of(s, i),
                    detail: failure.detail,
                    data: failure.data,
                }),
            };
        }
    }
    SuiteOutcome {
        suite: s.name.into(),
        seed,
        iters,
        passed: true,
        failure: None,
    }
}

/// `all` or a single suite name.
pub fn run(selection: &str, seed: u64, iters: Option<usize>, tol: &ToleranceConfig) -> Result<Vec<SuiteOutcome>> {
    if selection == "all" {
        SUITES.iter().map(|n| run_suite(n, seed, iters, tol)).collect()
    } else {
        Ok(vec![run_suite(selection, seed, iters, tol)?])
    }
}

pub fn write_witness(dir: &Path, w: &MinimizedWitness) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("qstruct-witness-{}-seed{}.json", w.suite, w.seed));
    std::fs::write(&path, serde_json::to_string_pretty(w).expect("witnesses serialize"))?;
    Ok(path)
}

fn quasilogic_case(rng: &mut random::QRng, n: usize, _: &ToleranceConfig) -> CaseResult {
    let q = random::shuffled_powerset(rng, n);
    let data = || serde_json::to_value(StructureFile::from_quasilogic(&q)).unwrap_or(Value::Null);
    check_report(&verify_quasilogic(&q), data)?;
    check_report(&check_sum_laws(&q), data)?;
    check_report(&check_sum_lattice_identity(&q), data)?;
    let c = classify(&q);
    if c.label != ClassificationLabel::BooleanAlgebra {
        return fail(format!("powerset classified as {}", c.label), data());
    }
    Ok(())
}

/// The ring of unions of blocks of a random partition of `n` points.
fn partition_ring(rng: &mut impl Rng, n: usize) -> SetSystem {
    let blocks_wanted = rng.random_range(1..=n);
    let mut blocks: Vec<PointSet> = vec![PointSet::new(); blocks_wanted];
    for x in 0..n {
        let b = if x < blocks_wanted { x } else { rng.random_range(0..blocks_wanted) };
        blocks[b].insert(x);
    }
    let sets = (0u32..1 << blocks_wanted)
        .map(|m| {
            (0..blocks_wanted)
                .filter(|i| m & (1 << i) != 0)
                .flat_map(|i| blocks[i].iter().copied())
                .collect::<BTreeSet<_>>()
        })
        .collect();
    let points = (0..n).map(|x| format!("x{x}")).collect();
    SetSystem::new(points, sets).expect("unions of blocks are distinct subsets")
}

fn semilogic_case(rng: &mut random::QRng, n: usize, _: &ToleranceConfig) -> CaseResult {
    let ring = partition_ring(rng, n);
    let sets = json!(ring.sets);
    let s = lib(ring.to_semilogic(), || sets.clone())?;
    let data = || serde_json::to_value(StructureFile::from_semilogic(&s, StructureKind::Semilogic)).unwrap_or(Value::Null);
    check_report(&verify_semilogic(&s), data)?;
    check_report(&crate::boolean_rep::verify_boolean_semiring(&s), data)?;
    if !s.is_logic() {
        return fail("a ring of sets is not a logic", data());
    }
    Ok(())
}

fn ortho_case(rng: &mut random::QRng, n: usize, _: &ToleranceConfig) -> CaseResult {
    let q = random::shuffled_powerset(rng, n);
    let data = || serde_json::to_value(StructureFile::from_quasilogic(&q)).unwrap_or(Value::Null);
    let lg = lib(OrthoLogic::from_quasilogic(q.clone()), data)?;
    check_report(&verify_logic(&lg), data)?;
    if !satisfies_weak_modular(&lg) {
        return fail("weak modular law fails on a powerset", data());
    }
    if let Some((a, c, why)) = segment_counterexample(&lg) {
        return fail(format!("segment [{}, {}]: {why}", lg.label(a), lg.label(c)), data());
    }
    let (d, b) = (is_distributive(&lg), boolean_criterion(&lg));
    if !d.holds || !b.holds {
        return fail(format!("distributive {} / criterion {}", d.holds, b.holds), data());
    }
    Ok(())
}

fn stone_case(rng: &mut random::QRng, n: usize, _: &ToleranceConfig) -> CaseResult {
    let ring = partition_ring(rng, n);
    let data = || json!({"points": ring.points, "sets": ring.sets});
    let b = lib(ring.to_semilogic().and_then(BooleanSemiring::new), data)?;
    let rep = lib(stone_map(&b), data)?;
    check_report(&rep.report, data)?;
    let atoms = lib(b.poset().atoms(), data)?.len();
    if rep.points() != atoms {
        return fail(format!("{} points for {atoms} atoms", rep.points()), data());
    }
    let weights: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let values = ring.sets.iter().map(|s| s.iter().map(|&x| weights[x] / total).sum()).collect();
    let table = DistributionTable::new(values);
    let (rep, mu) = lib(represent_distribution(&b, &table), data)?;
    for x in b.ids() {
        let err = mu.measure(&rep.h0[x.0]).map_or(f64::INFINITY, |m| (m - table.get(x)).abs());
        if err > 1e-12 {
            return fail(format!("n({}) differs from μ0(h0) by {err:.3e}", b.label(x)), data());
        }
    }
    Ok(())
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    json!({"rows": m.rows(), "cols": m.cols(), "entries": m.to_pairs()})
}

fn matrix_case(rng: &mut random::QRng, d: usize, tol: &ToleranceConfig) -> CaseResult {
    let g = random::ginibre(rng, d, d);
    let h = (&g + &g.adjoint()).scale_re(0.5);
    let data = || json!({"hermitian": matrix_json(&h)});
    let e = lib(hermitian_eigen(&h), data)?;
    let rebuilt = &(&e.vectors * &ComplexMatrix::diag(&e.values)) * &e.vectors.adjoint();
    let scale = h.frobenius_norm().max(1.0);
    if distance(&rebuilt, &h) > tol.eps * scale {
        return fail(format!("eigen reconstruction off by {:.3e}", distance(&rebuilt, &h)), data());
    }

    let (rp, rq) = (rng.random_range(0..=d), rng.random_range(0..=d));
    let (p, q) = (random::projection(rng, d, rp), random::projection(rng, d, rq));
    let data = || json!({"p": matrix_json(&p), "q": matrix_json(&q)});
    let meet = lib(range_meet(&p, &q, tol), data)?;
    let join = lib(range_join(&p, &q, tol), data)?;
    for (what, ok) in [
        ("P∧Q <= P", operator_order(&meet, &p, tol)),
        ("P∧Q <= Q", operator_order(&meet, &q, tol)),
        ("P <= P∨Q", operator_order(&p, &join, tol)),
        ("Q <= P∨Q", operator_order(&q, &join, tol)),
    ] {
        if !lib(ok, data)? {
            return fail(format!("{what} fails"), data());
        }
    }
    let self_meet = lib(range_meet(&p, &p, tol), data)?;
    if distance(&self_meet, &p) > tol.eps {
        return fail("P∧P differs from P", data());
    }

    let k = rng.random_range(0..=d);
    let x = random::ginibre(rng, d, k);
    let gram = (&x * &x.adjoint()).hermitian_part();
    let data = || json!({"gram": matrix_json(&gram)});
    let rd = lib(rank_decomposition(&gram, tol), data)?;
    if rd.rank != k {
        return fail(format!("rank {} for a product of rank {k}", rd.rank), data());
    }
    let back = &rd.factor * &rd.factor.adjoint();
    if distance(&back, &gram) > tol.eps * gram.frobenius_norm().max(1.0) {
        return fail("factor does not reproduce the Gram matrix", data());
    }
    Ok(())
}

fn conjugated(u: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    (&(u * m) * &u.adjoint()).hermitian_part()
}

fn clan_case(rng: &mut random::QRng, size: usize, tol: &ToleranceConfig) -> CaseResult {
    let d = size + 1;
    let u = random::unitary(rng, d);
    let data = || json!({"unitary": matrix_json(&u)});
    let full = (1usize << d) - 1;
    let (labels, mats): (Vec<String>, Vec<ComplexMatrix>) = (0..=full)
        .map(|mask| {
            let diag: Vec<f64> = (0..d).map(|i| f64::from((mask >> i) as u8 & 1)).collect();
            (format!("d{mask}"), conjugated(&u, &ComplexMatrix::diag(&diag)))
        })
        .unzip();
    let clan = lib(Clan::new(labels, mats, &format!("d{full}")), data)?;
    check_report(&verify_clan(&clan, tol), data)?;
    let c = lib(theorem_2_4_check(&clan, tol), data)?;
    if !(c.distributive && c.criterion) {
        return fail(format!("rotated diagonal clan gave {}/{}", c.distributive, c.criterion), data());
    }

    let u = random::unitary(rng, 2);
    let data = || json!({"unitary": matrix_json(&u)});
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let vecs = [[1.0, 0.0], [0.0, 1.0], [h, h], [h, -h]];
    let mut labels = vec!["0".to_string()];
    let mut mats = vec![ComplexMatrix::zeros(2, 2)];
    for (name, v) in ["p1", "p2", "q1", "q2"].iter().zip(vecs) {
        labels.push(name.to_string());
        let v: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
        mats.push(conjugated(&u, &ComplexMatrix::outer(&v)));
    }
    labels.push("I".into());
    mats.push(ComplexMatrix::identity(2));
    let mo2 = lib(Clan::new(labels, mats, "I"), data)?;
    let c = lib(theorem_2_4_check(&mo2, tol), data)?;
    let norm = c.criterion_witness.as_ref().and_then(|w| w.product_op_norm);
    if c.distributive || c.criterion {
        return fail(format!("rotated MO2 gave {}/{}", c.distributive, c.criterion), data());
    }
    match norm {
        Some(n) if (n - h).abs() <= tol.eps => Ok(()),
        other => fail(format!("MO2 witness product norm {other:?}, expected 1/√2"), data()),
    }
}

fn random_state(rng: &mut random::QRng, size: usize) -> (usize, usize, ComplexMatrix) {
    let d = size + 1;
    let rank = rng.random_range(1..=d);
    (d, rank, random::density_matrix(rng, d, rank))
}

fn gns_case(rng: &mut random::QRng, size: usize, tol: &ToleranceConfig) -> CaseResult {
    let (d, rank, rho) = random_state(rng, size);
    let data = || json!({"d": d, "density": matrix_json(&rho)});
    let alg = ConcreteStarAlgebra::full_matrix_algebra(d);
    let g = lib(gns_construct(&alg, &AlgebraState::Density(rho.clone()), tol), data)?;
    check_report(&g.report, data)?;
    let r = &g.residuals;
    let worst = r.reconstruction.max(r.multiplicativity).max(r.adjoint);
    if worst > tol.eps {
        return fail(format!("GNS residual {worst:.3e}"), data());
    }
    if g.space_dim != d * rank {
        return fail(format!("space_dim {} for a rank {rank} state on M_{d}", g.space_dim), data());
    }
    Ok(())
}

fn schwartz_case(rng: &mut random::QRng, size: usize, tol: &ToleranceConfig) -> CaseResult {
    let (d, _, rho) = random_state(rng, size);
    let data = || json!({"d": d, "density": matrix_json(&rho)});
    let alg = ConcreteStarAlgebra::full_matrix_algebra(d);
    let seed = rng.random();
    let strict = ToleranceConfig { eps: 1e-12, ..*tol };
    check_report(&schwartz_check(&alg, &AlgebraState::Density(rho.clone()), &strict, 200, seed), data)
}

fn naimark_case(rng: &mut random::QRng, size: usize, tol: &ToleranceConfig) -> CaseResult {
    let outcomes = 1 + (size - 1) % 5;
    let dim = 1 + (size - 1) / 5;
    let projective = rng.random_range(0..3) == 0;
    let effects = if projective {
        random::pvm(rng, outcomes, dim)
    } else {
        random::povm(rng, outcomes, dim)
    };
    let names: Vec<String> = (0..outcomes).map(|i| format!("o{i}")).collect();
    let data = || {
        json!({
            "outcomes": names,
            "effects": effects.iter().map(matrix_json).collect::<Vec<_>>(),
        })
    };
    let p = lib(FinitePovm::from_atoms(names.clone(), effects.clone(), tol), data)?;
    let d = lib(dilate(&p, tol), data)?;
    check_report(&verify_dilation(&p, &d, tol), data)?;
    let rank = lib(gram_matrix(&p, tol).and_then(|g| rank_decomposition(&g, tol)), data)?.rank;
    if d.dim_e != rank {
        return fail(format!("dim_E {} but Gram rank {rank}", d.dim_e), data());
    }
    if projective && d.dim_e != dim {
        return fail(format!("projective input dilated to dim_E {} > {dim}", d.dim_e), data());
    }
    let w = random::unitary(rng, d.dim_e);
    let eq = lib(unitary_equivalence(&d, &d.conjugate(&w), &p, tol), data)?;
    let overlap = (&w.adjoint() * &eq.u).trace();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { C64::new(1.0, 0.0) };
    let err = distance(&eq.u, &w.scale(phase));
    if err > 1e-8 {
        return fail(format!("recovered unitary off by {err:.3e}"), data());
    }
    Ok(())
}
