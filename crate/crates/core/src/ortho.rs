//! Logics with negation (ortho-logics), the segment construction and the
//! lattice-level distributivity criteria.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::{ElementId, FinitePoset};
use crate::quasilogic::{verify_quasilogic, Quasilogic};
use crate::report::VerificationReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoLogic {
    base: Quasilogic,
    neg: Vec<ElementId>,
    one: ElementId,
    zero: ElementId,
}

/// Outcome of a structural criterion with the first failing instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criterion {
    pub holds: bool,
    pub witness: Option<Vec<String>>,
    pub detail: Option<String>,
}

impl Criterion {
    fn pass() -> Self {
        Criterion {
            holds: true,
            witness: None,
            detail: None,
        }
    }

    fn fail(witness: Vec<String>, detail: String) -> Self {
        Criterion {
            holds: false,
            witness: Some(witness),
            detail: Some(detail),
        }
    }
}

impl OrthoLogic {
    /// Pairs a quasilogic with a negation table. The negation must be an
    /// involution; everything else is left to [`verify_logic`].
    pub fn new(base: Quasilogic, neg: Vec<ElementId>) -> Result<Self> {
        let l = Self::raw(base, neg)?;
        for a in l.ids() {
            if l.neg(l.neg(a)) != a {
                return Err(Error::Structural(format!(
                    "negation is not involutive: {} -> {} -> {}",
                    l.label(a),
                    l.label(l.neg(a)),
                    l.label(l.neg(l.neg(a)))
                )));
            }
        }
        Ok(l)
    }

    fn raw(base: Quasilogic, neg: Vec<ElementId>) -> Result<Self> {
        let p = base.poset();
        let one = p
            .top()
            .ok_or_else(|| Error::Structural("a logic needs a greatest element 1".into()))?;
        let zero = p
            .bottom()
            .ok_or_else(|| Error::Structural("a logic needs a least element 0".into()))?;
        if neg.len() != p.len() || neg.iter().any(|x| x.0 >= p.len()) {
            return Err(Error::Structural("negation must map every element into the structure".into()));
        }
        Ok(OrthoLogic { base, neg, one, zero })
    }

    /// Derives the difference as `b - a = b ∧ ā` for `a <= b`.
    pub fn from_negation(poset: FinitePoset, neg: Vec<ElementId>) -> Result<Self> {
        if neg.len() != poset.len() || neg.iter().any(|x| x.0 >= poset.len()) {
            return Err(Error::Structural("negation must map every element into the structure".into()));
        }
        let diff = poset
            .ids()
            .map(|b| {
                poset
                    .ids()
                    .map(|a| if poset.le(a, b) { poset.meet(b, neg[a.0]) } else { None })
                    .collect()
            })
            .collect();
        OrthoLogic::new(Quasilogic::new(poset, diff)?, neg)
    }

    /// Derives the negation as `ā = 1 - a`.
    pub fn from_quasilogic(base: Quasilogic) -> Result<Self> {
        let one = base
            .poset()
            .top()
            .ok_or_else(|| Error::Structural("a logic needs a greatest element 1".into()))?;
        let neg = base
            .poset()
            .ids()
            .map(|a| {
                base.diff(one, a)
                    .ok_or_else(|| Error::Structural(format!("1 - {} is undefined", base.label(a))))
            })
            .collect::<Result<Vec<_>>>()?;
        OrthoLogic::new(base, neg)
    }

    pub fn base(&self) -> &Quasilogic {
        &self.base
    }

    pub fn poset(&self) -> &FinitePoset {
        self.base.poset()
    }

    pub fn ids(&self) -> impl Iterator<Item = ElementId> + Clone {
        self.poset().ids()
    }

    pub fn len(&self) -> usize {
        self.poset().len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset().is_empty()
    }

    pub fn label(&self, a: ElementId) -> &str {
        self.poset().label(a)
    }

    pub fn neg(&self, a: ElementId) -> ElementId {
        self.neg[a.0]
    }

    pub fn negation_table(&self) -> &[ElementId] {
        &self.neg
    }

    pub fn one(&self) -> ElementId {
        self.one
    }

    pub fn zero(&self) -> ElementId {
        self.zero
    }

    /// `a ⊥ b`: `b <= ā`.
    pub fn orthogonal(&self, a: ElementId, b: ElementId) -> bool {
        self.poset().le(b, self.neg(a))
    }

    /// `a ⊤ b`: `ā <= b`.
    pub fn cotangent(&self, a: ElementId, b: ElementId) -> bool {
        self.poset().le(self.neg(a), b)
    }
}

fn show(l: &OrthoLogic, x: Option<ElementId>) -> String {
    x.map(|x| l.label(x).to_string()).unwrap_or_else(|| "undefined".into())
}

/// Full axiom suite: the quasilogic axioms of the base, complements,
/// negation laws, de Morgan, the weak modular condition and the ⊥/⊤ conventions.
pub fn verify_logic(lg: &OrthoLogic) -> VerificationReport {
    let mut report = verify_quasilogic(lg.base());
    report.subject = "logic".into();
    let p = lg.poset();
    let l = |x: ElementId| lg.label(x).to_string();
    let (zero, one) = (lg.zero(), lg.one());

    for a in lg.ids() {
        let na = lg.neg(a);
        report.check("negation.matches_difference").expect(lg.base().diff(one, a) == Some(na), || {
            (
                vec![l(a)],
                format!("ā = {} but 1 - a = {}", l(na), show(lg, lg.base().diff(one, a))),
            )
        });
        report.check("complement.join").expect(p.join(a, na) == Some(one), || {
            (vec![l(a)], format!("a ∨ ā = {}", show(lg, p.join(a, na))))
        });
        report.check("complement.meet").expect(p.meet(a, na) == Some(zero), || {
            (vec![l(a)], format!("a ∧ ā = {}", show(lg, p.meet(a, na))))
        });
        report.check("negation.involutive").expect(lg.neg(na) == a, || {
            (vec![l(a)], format!("neg(neg(a)) = {}", l(lg.neg(na))))
        });
    }

    for a in lg.ids() {
        for b in lg.ids() {
            let (na, nb) = (lg.neg(a), lg.neg(b));
            if p.le(a, b) {
                report.check("negation.antitone").expect(p.le(nb, na), || {
                    (vec![l(a), l(b)], format!("b̄ = {} is not below ā = {}", l(nb), l(na)))
                });
            }
            if let Some(j) = p.join(a, b) {
                let rhs = p.meet(na, nb);
                report.check("de_morgan.join").expect(rhs == Some(lg.neg(j)), || {
                    (
                        vec![l(a), l(b)],
                        format!("neg(a∨b) = {} but ā∧b̄ = {}", l(lg.neg(j)), show(lg, rhs)),
                    )
                });
            }
            if let Some(m) = p.meet(a, b) {
                let rhs = p.join(na, nb);
                report.check("de_morgan.meet").expect(rhs == Some(lg.neg(m)), || {
                    (
                        vec![l(a), l(b)],
                        format!("neg(a∧b) = {} but ā∨b̄ = {}", l(lg.neg(m)), show(lg, rhs)),
                    )
                });
            }
            if lg.orthogonal(a, b) {
                report.check("orthogonal.disjoint").expect(p.meet(a, b) == Some(zero), || {
                    (vec![l(a), l(b)], format!("a ⊥ b but a∧b = {}", show(lg, p.meet(a, b))))
                });
            }
            if lg.cotangent(a, b) {
                report.check("cotangent.covers").expect(p.join(a, b) == Some(one), || {
                    (vec![l(a), l(b)], format!("a ⊤ b but a∨b = {}", show(lg, p.join(a, b))))
                });
            }
            if lg.base().summable(a, b) {
                report.check("logic.only_disjoint_summable").expect(p.meet(a, b) == Some(zero), || {
                    (
                        vec![l(a), l(b)],
                        format!("summable but a∧b = {}", show(lg, p.meet(a, b))),
                    )
                });
            }
        }
    }

    report.check("weak_modular");
    for (a, b, c) in weak_modular_triples(lg) {
        match weak_modular_at(lg, a, b, c) {
            None => report.check("weak_modular").pass(),
            Some((w, d)) => report.check("weak_modular").fail(&w, d),
        }
    }
    report
}

fn weak_modular_triples(lg: &OrthoLogic) -> impl Iterator<Item = (ElementId, ElementId, ElementId)> + '_ {
    let p = lg.poset();
    lg.ids().flat_map(move |a| {
        lg.ids().flat_map(move |b| {
            let nb = lg.neg(b);
            lg.ids()
                .filter(move |&c| p.le(a, nb) && p.le(nb, c))
                .map(move |c| (a, b, c))
        })
    })
}

fn weak_modular_at(lg: &OrthoLogic, a: ElementId, b: ElementId, c: ElementId) -> Option<(Vec<String>, String)> {
    let p = lg.poset();
    let l = |x: ElementId| lg.label(x).to_string();
    let lhs = p.join(a, b).and_then(|j| p.meet(j, c));
    let rhs = p.meet(b, c).and_then(|m| p.join(a, m));
    (lhs.is_none() || lhs != rhs).then(|| {
        (
            vec![l(a), l(b), l(c)],
            format!("(a∨b)∧c = {} but a∨(b∧c) = {}", show(lg, lhs), show(lg, rhs)),
        )
    })
}

/// Triples `a <= b̄ <= c` with `(a∨b)∧c != a∨(b∧c)`.
fn weak_modular_failures(lg: &OrthoLogic) -> Vec<(Vec<String>, String)> {
    weak_modular_triples(lg)
        .filter_map(|(a, b, c)| weak_modular_at(lg, a, b, c))
        .collect()
}

/// `(a∨b)∧c = a∨(b∧c)` whenever `a <= b̄ <= c`.
pub fn satisfies_weak_modular(lg: &OrthoLogic) -> bool {
    weak_modular_failures(lg).is_empty()
}

/// The logic on `[a, c]` with zero `a`, unity `c` and negation `b ↦ a ∨ (b̄ ∧ c)`.
///
/// Requires the weak modular condition on `lg`; the result is re-verified.
pub fn segment_logic(lg: &OrthoLogic, a: ElementId, c: ElementId) -> Result<OrthoLogic> {
    if !lg.poset().le(a, c) {
        return Err(Error::Domain(format!(
            "segment requires {} <= {}",
            lg.label(a),
            lg.label(c)
        )));
    }
    if let Some((w, d)) = weak_modular_failures(lg).into_iter().next() {
        return Err(Error::Domain(format!(
            "the logic violates the weak modular condition at ({}): {d}",
            w.join(", ")
        )));
    }
    let seg = segment_logic_unchecked(lg, a, c).map_err(|e| Error::Internal(format!("segment construction: {e}")))?;
    let report = verify_logic(&seg);
    if let Some((axiom, v)) = report.first_violation() {
        return Err(Error::Internal(format!(
            "segment [{}, {}] fails {axiom} at ({}): {}",
            lg.label(a),
            lg.label(c),
            v.witness.join(", "),
            v.detail
        )));
    }
    Ok(seg)
}

/// The segment construction without the precondition or the post-check.
/// The result may fail [`verify_logic`]; the negation need not be involutive.
pub fn segment_logic_unchecked(lg: &OrthoLogic, a: ElementId, c: ElementId) -> Result<OrthoLogic> {
    let p = lg.poset();
    let seg = p.segment(a, c)?;
    let undefined = |what: String| Error::Domain(format!("segment negation undefined: {what}"));
    let mut neg = Vec::with_capacity(seg.parent_ids.len());
    for &b in &seg.parent_ids {
        let inner = p
            .meet(lg.neg(b), c)
            .ok_or_else(|| undefined(format!("b̄ ∧ c for b = {}", lg.label(b))))?;
        let nb = p
            .join(a, inner)
            .ok_or_else(|| undefined(format!("a ∨ (b̄ ∧ c) for b = {}", lg.label(b))))?;
        let local = seg
            .local_id(nb)
            .ok_or_else(|| undefined(format!("value for b = {} leaves the segment", lg.label(b))))?;
        neg.push(local);
    }
    let sp = &seg.poset;
    let diff = sp
        .ids()
        .map(|y| {
            sp.ids()
                .map(|x| if sp.le(x, y) { sp.meet(y, neg[x.0]) } else { None })
                .collect()
        })
        .collect();
    let base = Quasilogic::new(seg.poset.clone(), diff)?;
    OrthoLogic::raw(base, neg)
}

/// Searches every segment of `lg` for one whose constructed logic fails
/// [`verify_logic`] or cannot be built. Returns the segment endpoints and the reason.
pub fn segment_counterexample(lg: &OrthoLogic) -> Option<(ElementId, ElementId, String)> {
    for a in lg.ids() {
        for c in lg.ids().filter(|&c| lg.poset().le(a, c)) {
            match segment_logic_unchecked(lg, a, c) {
                Err(e) => return Some((a, c, e.to_string())),
                Ok(seg) => {
                    let r = verify_logic(&seg);
                    if let Some((axiom, v)) = r.first_violation() {
                        return Some((a, c, format!("{axiom} at ({}): {}", v.witness.join(", "), v.detail)));
                    }
                }
            }
        }
    }
    None
}

/// Both distributive identities over all triples where the bounds exist.
pub fn is_distributive(lg: &OrthoLogic) -> Criterion {
    let p = lg.poset();
    let l = |x: ElementId| lg.label(x).to_string();
    for a in lg.ids() {
        for b in lg.ids() {
            for c in lg.ids() {
                let lhs = p.join(b, c).and_then(|j| p.meet(a, j));
                let rhs = match (p.meet(a, b), p.meet(a, c)) {
                    (Some(x), Some(y)) => p.join(x, y),
                    _ => None,
                };
                if lhs.is_some() && rhs.is_some() && lhs != rhs {
                    return Criterion::fail(
                        vec![l(a), l(b), l(c)],
                        format!("a∧(b∨c) = {} but (a∧b)∨(a∧c) = {}", show(lg, lhs), show(lg, rhs)),
                    );
                }
                let lhs = p.meet(b, c).and_then(|m| p.join(a, m));
                let rhs = match (p.join(a, b), p.join(a, c)) {
                    (Some(x), Some(y)) => p.meet(x, y),
                    _ => None,
                };
                if lhs.is_some() && rhs.is_some() && lhs != rhs {
                    return Criterion::fail(
                        vec![l(a), l(b), l(c)],
                        format!("a∨(b∧c) = {} but (a∨b)∧(a∨c) = {}", show(lg, lhs), show(lg, rhs)),
                    );
                }
            }
        }
    }
    Criterion::pass()
}

/// `a ∧ b = 0 ⟺ a ⊥ b` for every pair.
pub fn boolean_criterion(lg: &OrthoLogic) -> Criterion {
    let p = lg.poset();
    let l = |x: ElementId| lg.label(x).to_string();
    for a in lg.ids() {
        for b in lg.ids() {
            let disjoint = p.meet(a, b) == Some(lg.zero());
            let orth = lg.orthogonal(a, b);
            if disjoint != orth {
                let detail = if disjoint {
                    format!("a∧b = 0 but b̄ = {} is not above a", l(lg.neg(b)))
                } else {
                    format!("a ⊥ b but a∧b = {}", show(lg, p.meet(a, b)))
                };
                return Criterion::fail(vec![l(a), l(b)], detail);
            }
        }
    }
    Criterion::pass()
}
