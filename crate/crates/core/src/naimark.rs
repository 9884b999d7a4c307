//! Dilation of an operator-valued probability distribution on a finite
//! boolean semiring to a projection-valued observable on a minimal space.
//!
//! The formal space is spanned by pairs `(B, η)` with the form
//! `⟨(B', η') | (B, η)⟩ = (m(B ∧ B')η, η')`. On coordinates `e_B ⊗ η` this is
//! the block matrix `G` with block `(j, l) = m(Bⱼ ∧ Bₗ)`. Writing
//! `G = U Λ U*` on its range, `T = Λ^{1/2} U*` maps the formal space onto the
//! quotient by the kernel, where `h(B)` acts as `T L(B) T⁺` with `L(B)` the
//! block shift `e_{B'} ⊗ η ↦ e_{B ∧ B'} ⊗ η`, and `F η = T (e_E ⊗ η)`.

use serde::Serialize;

use crate::boolean_rep::{BooleanSemiring, SetSystem};
use crate::error::{Error, PovmCondition, Result};
use crate::matrix::{
    distance, hermitian_eigen, is_orthoprojection, psd_pseudo_inverse, rank_decomposition, ComplexMatrix,
    ToleranceConfig, C64,
};
use crate::order::ElementId;
use crate::report::VerificationReport;

#[derive(Debug, Clone)]
pub struct FinitePovm {
    semiring: BooleanSemiring,
    dim_h: usize,
    effects: Vec<ComplexMatrix>,
    top: ElementId,
}

impl FinitePovm {
    /// `effects[i]` is `m` of element `i`. All three defining conditions are
    /// checked; the first failure is reported with its condition number.
    pub fn new(semiring: BooleanSemiring, effects: Vec<ComplexMatrix>, tol: &ToleranceConfig) -> Result<Self> {
        if effects.len() != semiring.len() {
            return Err(Error::Structural(format!(
                "{} effects for {} events",
                effects.len(),
                semiring.len()
            )));
        }
        let dim_h = effects[0].rows();
        if dim_h == 0 {
            return Err(Error::Structural("the Hilbert space must be nonzero".into()));
        }
        if let Some(i) = effects.iter().position(|m| m.rows() != dim_h || m.cols() != dim_h) {
            return Err(Error::Structural(format!(
                "effect of {} is {}x{}, expected {dim_h}x{dim_h}",
                semiring.label(ElementId(i)),
                effects[i].rows(),
                effects[i].cols()
            )));
        }
        let top = semiring
            .poset()
            .top()
            .ok_or_else(|| Error::Structural("the event semiring needs a unit E".into()))?;
        let p = FinitePovm {
            semiring,
            dim_h,
            effects,
            top,
        };
        p.check_conditions(tol)?;
        Ok(p)
    }

    /// Powerset events over `outcomes`, with `m` extended additively from the atom effects.
    pub fn from_atoms(outcomes: Vec<String>, atom_effects: Vec<ComplexMatrix>, tol: &ToleranceConfig) -> Result<Self> {
        if outcomes.len() != atom_effects.len() || outcomes.is_empty() {
            return Err(Error::Structural(format!(
                "{} outcomes with {} effects",
                outcomes.len(),
                atom_effects.len()
            )));
        }
        let d = atom_effects[0].rows();
        if let Some(i) = atom_effects.iter().position(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::Structural(format!("effect of {} is not {d}x{d}", outcomes[i])));
        }
        let system = SetSystem::powerset(outcomes);
        let semiring = BooleanSemiring::new(system.to_semilogic()?)?;
        let effects = system
            .sets
            .iter()
            .map(|s| {
                let mut m = ComplexMatrix::zeros(d, d);
                for &i in s {
                    m = &m + &atom_effects[i];
                }
                m
            })
            .collect();
        FinitePovm::new(semiring, effects, tol)
    }

    pub fn semiring(&self) -> &BooleanSemiring {
        &self.semiring
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn effect(&self, b: ElementId) -> &ComplexMatrix {
        &self.effects[b.0]
    }

    pub fn top(&self) -> ElementId {
        self.top
    }

    pub fn label(&self, b: ElementId) -> &str {
        self.semiring.label(b)
    }

    /// Every effect is an orthoprojection.
    pub fn is_projection_valued(&self, tol: &ToleranceConfig) -> bool {
        self.effects.iter().all(|m| is_orthoprojection(m, tol).unwrap_or(false))
    }

    fn check_conditions(&self, tol: &ToleranceConfig) -> Result<()> {
        for b in self.semiring.ids() {
            let m = self.effect(b);
            let herm = m.hermitian_residual();
            let min = hermitian_eigen(m)?.values[0];
            if herm > tol.eps || min < -tol.eps {
                return Err(Error::InvalidPovm {
                    condition: PovmCondition::Positivity,
                    detail: format!(
                        "m({}) has ‖m - m*‖ = {herm:.3e} and least eigenvalue {min:.3e}",
                        self.label(b)
                    ),
                });
            }
        }
        let s = self.semiring.semilogic();
        for a in self.semiring.ids() {
            for b in self.semiring.ids() {
                if b.0 <= a.0 || self.semiring.meet(a, b) != s.zero() {
                    continue;
                }
                let Some(sum) = s.sum(&[a, b]) else { continue };
                let r = distance(self.effect(sum), &(self.effect(a) + self.effect(b)));
                if r > tol.eps {
                    return Err(Error::InvalidPovm {
                        condition: PovmCondition::Additivity,
                        detail: format!(
                            "‖m({}) - m({}) - m({})‖ = {r:.3e}",
                            self.label(sum),
                            self.label(a),
                            self.label(b)
                        ),
                    });
                }
            }
        }
        let id = ComplexMatrix::identity(self.dim_h);
        let me = self.effect(self.top);
        let r = distance(me, &id);
        if r > tol.eps {
            let defect = hermitian_eigen(&(&id - me))?.values[0];
            let detail = if defect >= -tol.eps {
                format!(
                    "‖m(E) - I‖ = {r:.3e}; m(E) <= I, so this is a sub-normalized distribution, which is \
                     not completed automatically (add the defect I - m(E) as an explicit outcome)"
                )
            } else {
                format!("‖m(E) - I‖ = {r:.3e}")
            };
            return Err(Error::InvalidPovm {
                condition: PovmCondition::Normalization,
                detail,
            });
        }
        Ok(())
    }
}

/// Block `(j, l)` is `m(Bⱼ ∧ Bₗ)`, in the semiring's element order.
pub fn gram_matrix(p: &FinitePovm, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    let n = p.semiring.len();
    let d = p.dim_h;
    let mut g = ComplexMatrix::zeros(n * d, n * d);
    for j in 0..n {
        for l in 0..n {
            let meet = p.semiring.meet(ElementId(j), ElementId(l));
            g.set_block(j * d, l * d, p.effect(meet));
        }
    }
    let eig = hermitian_eigen(&g)?;
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min < -tol.eps {
        let v: Vec<String> = eig.vectors.column(0).iter().map(|z| format!("{:.4}{:+.4}i", z.re, z.im)).collect();
        return Err(Error::InvalidPovm {
            condition: PovmCondition::Positivity,
            detail: format!("Gram matrix has eigenvalue {min:.3e} along [{}]", v.join(", ")),
        });
    }
    Ok(g)
}

/// A projection-valued observable `h` on `C^{dim_e}` with the isometry `F : C^{dim_h} → C^{dim_e}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation {
    pub dim_e: usize,
    /// Indexed by semiring element.
    pub h: Vec<ComplexMatrix>,
    /// `dim_e × dim_h`.
    pub f: ComplexMatrix,
}

impl Dilation {
    pub fn dim_h(&self) -> usize {
        self.f.cols()
    }

    /// `h = m`, `F = I` for an input that is already projection-valued.
    pub fn identity_of(p: &FinitePovm) -> Dilation {
        Dilation {
            dim_e: p.dim_h,
            h: p.effects.clone(),
            f: ComplexMatrix::identity(p.dim_h),
        }
    }

    /// `(W h W*, W F)`.
    pub fn conjugate(&self, w: &ComplexMatrix) -> Dilation {
        let wstar = w.adjoint();
        Dilation {
            dim_e: self.dim_e,
            h: self.h.iter().map(|h| &(w * h) * &wstar).collect(),
            f: w * &self.f,
        }
    }

    /// Columns `h(B)Fη` over all events and basis vectors, `dim_e × (|B|·dim_h)`.
    fn generators(&self) -> ComplexMatrix {
        let blocks: Vec<ComplexMatrix> = self.h.iter().map(|h| h * &self.f).collect();
        ComplexMatrix::hstack(&blocks.iter().collect::<Vec<_>>())
    }
}

/// Quotient of the formal span by the Gram kernel, with every invariant of
/// the result checked before it is returned.
pub fn dilate(p: &FinitePovm, tol: &ToleranceConfig) -> Result<Dilation> {
    let g = gram_matrix(p, tol)?;
    let dec = rank_decomposition(&g, tol)?;
    let n = p.semiring.len();
    let d = p.dim_h;
    let r = dec.rank;
    let t = dec.factor.adjoint();
    let t_pinv = ComplexMatrix::from_fn(n * d, r, |i, k| dec.basis[(i, k)] / dec.values[k].sqrt());
    let kernel_proj = &ComplexMatrix::identity(n * d) - &(&t_pinv * &t);

    let mut h = Vec::with_capacity(n);
    let mut leak = 0.0f64;
    let mut leak_at = ElementId(0);
    for b in p.semiring.ids() {
        // Column block j of T L(B) is column block (B ∧ Bⱼ) of T.
        let mut tl = ComplexMatrix::zeros(r, n * d);
        for j in 0..n {
            let target = p.semiring.meet(b, ElementId(j)).0;
            tl.set_block(0, j * d, &t.block(0, target * d, r, d));
        }
        let l = (&tl * &kernel_proj).op_norm();
        if l > leak {
            leak = l;
            leak_at = b;
        }
        h.push(&tl * &t_pinv);
    }
    if leak > tol.eps {
        return Err(Error::Construction {
            identity: format!("h({}) maps the Gram kernel into itself", p.label(leak_at)),
            residual: leak,
        });
    }
    let f = t.block(0, p.top.0 * d, r, d);
    let dil = Dilation { dim_e: r, h, f };

    let report = verify_dilation(p, &dil, tol);
    if let Some(failed) = report.failed_axioms().next() {
        let residual = report
            .info
            .get(&format!("residual.{}", failed.name.trim_start_matches("dilation.")))
            .and_then(|v| v.as_f64())
            .unwrap_or(f64::NAN);
        return Err(Error::Construction {
            identity: failed.name.clone(),
            residual,
        });
    }
    Ok(dil)
}

/// Checks every dilation invariant from scratch, recording the largest
/// residual of each as `residual.<name>`.
pub fn verify_dilation(p: &FinitePovm, d: &Dilation, tol: &ToleranceConfig) -> VerificationReport {
    let mut report = VerificationReport::new("dilation");
    let e = d.dim_e;
    let shape_ok = d.h.len() == p.semiring.len()
        && d.h.iter().all(|h| h.rows() == e && h.cols() == e)
        && d.f.rows() == e
        && d.f.cols() == p.dim_h;
    report.check("dilation.shape").expect(shape_ok, || {
        (
            Vec::<String>::new(),
            format!("expected {} events, {e}x{e} projections and a {e}x{} isometry", p.semiring.len(), p.dim_h),
        )
    });
    if !shape_ok {
        return report;
    }
    let label = |b: ElementId| p.label(b).to_string();
    let worst = |report: &mut VerificationReport, name: &str, value: f64, witness: Vec<String>, what: &str| {
        let key = format!("residual.{name}");
        let prev = report.info.get(&key).and_then(|v| v.as_f64()).unwrap_or(0.0);
        report.note(&key, prev.max(value));
        report
            .check(&format!("dilation.{name}"))
            .expect(value <= tol.eps, || (witness, format!("{what} = {value:.3e}")));
    };

    for b in p.semiring.ids() {
        let h = &d.h[b.0];
        let r = h.hermitian_residual().max(distance(&(h * h), h));
        worst(&mut report, "projection", r, vec![label(b)], "max(‖h - h*‖, ‖h² - h‖)");
        let r = distance(p.effect(b), &(&(&d.f.adjoint() * h) * &d.f));
        worst(&mut report, "induces", r, vec![label(b)], "‖m(B) - F*h(B)F‖");
    }
    let s = p.semiring.semilogic();
    for a in p.semiring.ids() {
        for b in p.semiring.ids() {
            if b.0 <= a.0 {
                continue;
            }
            let meet = p.semiring.meet(a, b);
            let r = distance(&d.h[meet.0], &(&d.h[a.0] * &d.h[b.0]));
            worst(&mut report, "multiplicative", r, vec![label(a), label(b)], "‖h(A ∧ B) - h(A)h(B)‖");
            if meet == s.zero() {
                if let Some(sum) = s.sum(&[a, b]) {
                    let r = distance(&d.h[sum.0], &(&d.h[a.0] + &d.h[b.0]));
                    worst(&mut report, "additive", r, vec![label(a), label(b)], "‖h(A + B) - h(A) - h(B)‖");
                }
            }
        }
    }
    let r = distance(&(&d.f.adjoint() * &d.f), &ComplexMatrix::identity(d.f.cols()));
    worst(&mut report, "isometry", r, vec![], "‖F*F - I‖");
    let r = distance(&(&d.h[p.top.0] * &d.f), &d.f);
    worst(&mut report, "normalization", r, vec![label(p.top)], "‖h(E)F - F‖");

    let k = d.generators();
    let span_rank = rank_decomposition(&(&k * &k.adjoint()), tol).map(|x| x.rank).unwrap_or(0);
    report.check("dilation.minimal").expect(span_rank == e, || {
        (
            Vec::<String>::new(),
            format!("vectors h(B)Fη span a subspace of dimension {span_rank} in a space of dimension {e}"),
        )
    });
    report.note("dim_e", e);
    report.note("span_rank", span_rank);
    report
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceResiduals {
    /// `‖U*U - I‖`.
    pub unitarity: f64,
    /// `‖UF₁ - F₂‖`.
    pub intertwines_f: f64,
    /// `max_B ‖U h₁(B) U* - h₂(B)‖`.
    pub conjugation: f64,
}

#[derive(Debug, Clone)]
pub struct UnitaryEquivalence {
    pub u: ComplexMatrix,
    pub residuals: EquivalenceResiduals,
}

/// The unitary sending each `h₁(B)F₁η` to `h₂(B)F₂η`. With `Kᵢ` the matrix of
/// these generators, both Gram matrices `Kᵢ*Kᵢ` agree, and `U = K₂ (K₁*K₁)⁺ K₁*`.
/// Identical inputs return the identity exactly.
pub fn unitary_equivalence(
    d1: &Dilation,
    d2: &Dilation,
    p: &FinitePovm,
    tol: &ToleranceConfig,
) -> Result<UnitaryEquivalence> {
    for (name, d) in [("first", d1), ("second", d2)] {
        let rep = verify_dilation(p, d, tol);
        if let Some((axiom, v)) = rep.first_violation() {
            return Err(Error::Domain(format!("{name} dilation fails {axiom}: {}", v.detail)));
        }
    }
    if d1.dim_e != d2.dim_e {
        return Err(Error::Domain(format!(
            "dilation dimensions differ ({} vs {})",
            d1.dim_e, d2.dim_e
        )));
    }
    let u = if d1 == d2 {
        ComplexMatrix::identity(d1.dim_e)
    } else {
        let k1 = d1.generators();
        let k2 = d2.generators();
        let g = &k1.adjoint() * &k1;
        &(&k2 * &psd_pseudo_inverse(&g, tol)?) * &k1.adjoint()
    };
    let ustar = u.adjoint();
    let residuals = EquivalenceResiduals {
        unitarity: distance(&(&ustar * &u), &ComplexMatrix::identity(d1.dim_e)),
        intertwines_f: distance(&(&u * &d1.f), &d2.f),
        conjugation: d1
            .h
            .iter()
            .zip(&d2.h)
            .map(|(h1, h2)| distance(&(&(&u * h1) * &ustar), h2))
            .fold(0.0, f64::max),
    };
    for (identity, value) in [
        ("U*U = I", residuals.unitarity),
        ("UF₁ = F₂", residuals.intertwines_f),
        ("h₂(B) = Uh₁(B)U*", residuals.conjugation),
    ] {
        if value > tol.eps {
            return Err(Error::Construction {
                identity: identity.into(),
                residual: value,
            });
        }
    }
    Ok(UnitaryEquivalence { u, residuals })
}

/// Qubit trine: `m_k = (2/3)|ψ_k⟩⟨ψ_k|` with `ψ_k` at angles `2πk/3` in the real plane.
pub fn trine_effects() -> Vec<ComplexMatrix> {
    (0..3)
        .map(|k| {
            let th = std::f64::consts::PI * 2.0 * k as f64 / 3.0;
            let psi = [C64::new(th.cos(), 0.0), C64::new(th.sin(), 0.0)];
            ComplexMatrix::outer(&psi).scale_re(2.0 / 3.0)
        })
        .collect()
}
