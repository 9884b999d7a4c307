//! D-posets: a finite poset with a partial difference `b - a`, defined exactly
//! when `a <= b`.
//!
//! Addition, quasicommutation and the quasiproduct are derived from the
//! difference table by scanning majorants, so they can never drift out of
//! sync with it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::{verify_poset, ElementId, FinitePoset};
use crate::report::VerificationReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quasilogic {
    poset: FinitePoset,
    diff: Vec<Option<ElementId>>,
}

/// Position in the hierarchy, weakest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassificationLabel {
    Quasilogic,
    Logic,
    Quasiring,
    Ring,
    BooleanAlgebra,
}

impl std::fmt::Display for ClassificationLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ClassificationLabel::Quasilogic => "quasilogic",
            ClassificationLabel::Logic => "logic",
            ClassificationLabel::Quasiring => "quasiring",
            ClassificationLabel::Ring => "ring",
            ClassificationLabel::BooleanAlgebra => "boolean-algebra",
        };
        f.write_str(s)
    }
}

/// The raw relation scans behind [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub label: ClassificationLabel,
    /// Every summable pair is disjoint (`a ∧ b = 0`).
    pub only_disjoint_summable: bool,
    /// `a ↓ b` for every pair.
    pub all_quasicommute: bool,
    /// Every pair logically commutes.
    pub all_commute: bool,
    pub has_top: bool,
}

impl Quasilogic {
    /// `diff[b][a]` holds `b - a`. Entries are only allowed where `a <= b`;
    /// missing entries on that domain are reported by [`verify_quasilogic`].
    pub fn new(poset: FinitePoset, diff: Vec<Vec<Option<ElementId>>>) -> Result<Self> {
        let n = poset.len();
        if diff.len() != n || diff.iter().any(|r| r.len() != n) {
            return Err(Error::Structural(format!("difference table must be {n}x{n}")));
        }
        for b in poset.ids() {
            for a in poset.ids() {
                if let Some(c) = diff[b.0][a.0] {
                    if !poset.le(a, b) {
                        return Err(Error::Structural(format!(
                            "difference {} - {} defined but {} is not below {}",
                            poset.label(b),
                            poset.label(a),
                            poset.label(a),
                            poset.label(b)
                        )));
                    }
                    if c.0 >= n {
                        return Err(Error::Structural(format!("difference value {c} out of range")));
                    }
                }
            }
        }
        Ok(Quasilogic {
            poset,
            diff: diff.into_iter().flatten().collect(),
        })
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn label(&self, a: ElementId) -> &str {
        self.poset.label(a)
    }

    /// `b - a`, if defined.
    #[inline]
    pub fn diff(&self, b: ElementId, a: ElementId) -> Option<ElementId> {
        self.diff[b.0 * self.len() + a.0]
    }

    pub fn le(&self, a: ElementId, b: ElementId) -> bool {
        self.poset.le(a, b)
    }

    pub fn zero(&self) -> Option<ElementId> {
        self.poset.bottom()
    }

    fn majorants(&self, a: ElementId, b: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        self.poset.ids().filter(move |&c| self.le(a, c) && self.le(b, c))
    }

    /// Majorants `c` witnessing `a ↑ b`, i.e. `c - a >= b`.
    fn summing_majorants(&self, a: ElementId, b: ElementId) -> Vec<ElementId> {
        self.majorants(a, b)
            .filter(|&c| self.diff(c, a).is_some_and(|ca| self.le(b, ca)))
            .collect()
    }

    /// `a ↑ b`: some majorant `c` has `c - a >= b`.
    pub fn summable(&self, a: ElementId, b: ElementId) -> bool {
        !self.summing_majorants(a, b).is_empty()
    }

    /// `a + b = c - ((c - a) - b)`, checked to be independent of the majorant `c`.
    pub fn partial_sum(&self, a: ElementId, b: ElementId) -> Result<ElementId> {
        let cs = self.summing_majorants(a, b);
        if cs.is_empty() {
            return Err(Error::Domain(format!(
                "{} and {} are not summable",
                self.label(a),
                self.label(b)
            )));
        }
        let mut value: Option<(ElementId, ElementId)> = None;
        for c in cs {
            let s = self.sum_via(a, b, c).ok_or_else(|| {
                Error::axiom(
                    "sum.defined",
                    format!(
                        "c - ((c - a) - b) undefined for a={}, b={}, c={}",
                        self.label(a),
                        self.label(b),
                        self.label(c)
                    ),
                )
            })?;
            match value {
                None => value = Some((c, s)),
                Some((c0, s0)) if s0 != s => {
                    return Err(Error::axiom(
                        "sum.majorant_independent",
                        format!(
                            "a={}, b={}: majorant {} gives {} but {} gives {}",
                            self.label(a),
                            self.label(b),
                            self.label(c0),
                            self.label(s0),
                            self.label(c),
                            self.label(s)
                        ),
                    ))
                }
                _ => {}
            }
        }
        Ok(value.expect("nonempty").1)
    }

    fn sum_via(&self, a: ElementId, b: ElementId, c: ElementId) -> Option<ElementId> {
        let ca = self.diff(c, a)?;
        let cab = self.diff(ca, b)?;
        self.diff(c, cab)
    }

    /// `a ↓ b`: some majorant `c` has `c - a <= b`.
    pub fn quasicommutes(&self, a: ElementId, b: ElementId) -> bool {
        self.majorants(a, b)
            .any(|c| self.diff(c, a).is_some_and(|ca| self.le(ca, b)))
    }

    /// `a ∧ b = 0` and `a ↑ b`.
    pub fn disjoint(&self, a: ElementId, b: ElementId) -> bool {
        self.summable(a, b) && self.poset.meet(a, b) == self.zero()
    }

    /// Some majorant `c` makes `c - a` and `c - b` disjoint.
    pub fn logically_commute(&self, a: ElementId, b: ElementId) -> bool {
        self.majorants(a, b).any(|c| match (self.diff(c, a), self.diff(c, b)) {
            (Some(p), Some(q)) => self.disjoint(p, q),
            _ => false,
        })
    }

    /// Quasiproduct `(ab)_c = a - (c - b)`, cross-checked against `b - (c - a)`.
    pub fn quasiproduct(&self, a: ElementId, b: ElementId, c: ElementId) -> Result<ElementId> {
        let ca = (self.le(a, c) && self.le(b, c))
            .then(|| self.diff(c, a))
            .flatten()
            .filter(|&ca| self.le(ca, b))
            .ok_or_else(|| {
                Error::Domain(format!(
                    "quasiproduct needs c >= a, b and c - a <= b (a={}, b={}, c={})",
                    self.label(a),
                    self.label(b),
                    self.label(c)
                ))
            })?;
        let via_b = self
            .diff(c, b)
            .and_then(|cb| self.diff(a, cb))
            .ok_or_else(|| {
                Error::axiom(
                    "quasiproduct.defined",
                    format!(
                        "a - (c - b) undefined for a={}, b={}, c={}",
                        self.label(a),
                        self.label(b),
                        self.label(c)
                    ),
                )
            })?;
        let via_a = self.diff(b, ca).ok_or_else(|| {
            Error::axiom("quasiproduct.defined", "b - (c - a) undefined".to_string())
        })?;
        if via_a != via_b {
            return Err(Error::axiom(
                "quasiproduct.symmetric",
                format!(
                    "a - (c - b) = {} but b - (c - a) = {}",
                    self.label(via_b),
                    self.label(via_a)
                ),
            ));
        }
        Ok(via_b)
    }
}

/// Checks the difference axioms, directedness and the zero element.
pub fn verify_quasilogic(q: &Quasilogic) -> VerificationReport {
    let p = q.poset();
    let mut report = verify_poset(p);
    report.subject = "quasilogic".into();
    let l = |x: ElementId| q.label(x).to_string();

    for b in p.ids() {
        for a in p.ids() {
            if p.le(a, b) {
                report.check("difference.defined_on_order").expect(q.diff(b, a).is_some(), || {
                    (vec![l(b), l(a)], "b - a missing although a <= b".to_string())
                });
            }
        }
    }

    // b - a <= b and b - (b - a) = a
    for b in p.ids() {
        for a in p.ids() {
            let Some(ba) = q.diff(b, a) else { continue };
            report.check("difference.below_minuend").expect(p.le(ba, b), || {
                (vec![l(b), l(a)], format!("b - a = {} is not below b", l(ba)))
            });
            let back = q.diff(b, ba);
            report.check("difference.involutive").expect(back == Some(a), || {
                (
                    vec![l(b), l(a)],
                    format!(
                        "b - (b - a) = {} but a = {}",
                        back.map(l).unwrap_or_else(|| "undefined".into()),
                        l(a)
                    ),
                )
            });
        }
    }

    // For a <= b <= c: growing the minuend.
    for a in p.ids() {
        for b in p.ids().filter(|&b| p.le(a, b)) {
            for c in p.ids().filter(|&c| p.le(b, c)) {
                let (Some(ba), Some(ca), Some(cb)) = (q.diff(b, a), q.diff(c, a), q.diff(c, b)) else {
                    continue;
                };
                report.check("difference.monotone_in_minuend").expect(p.le(ba, ca), || {
                    (vec![l(a), l(b), l(c)], format!("b - a = {} not below c - a = {}", l(ba), l(ca)))
                });
                let lhs = q.diff(ca, ba);
                report.check("difference.minuend_cancellation").expect(lhs == Some(cb), || {
                    (
                        vec![l(a), l(b), l(c)],
                        format!(
                            "(c - a) - (b - a) = {} but c - b = {}",
                            lhs.map(l).unwrap_or_else(|| "undefined".into()),
                            l(cb)
                        ),
                    )
                });
                report.check("difference.antitone_in_subtrahend").expect(p.le(cb, ca), || {
                    (vec![l(a), l(b), l(c)], format!("c - b = {} not below c - a = {}", l(cb), l(ca)))
                });
                let lhs = q.diff(ca, cb);
                report.check("difference.subtrahend_cancellation").expect(lhs == Some(ba), || {
                    (
                        vec![l(a), l(b), l(c)],
                        format!(
                            "(c - a) - (c - b) = {} but b - a = {}",
                            lhs.map(l).unwrap_or_else(|| "undefined".into()),
                            l(ba)
                        ),
                    )
                });
            }
        }
    }

    report.check("poset.upward_directed").expect(p.is_upward_directed(), || {
        let (a, b) = p
            .ids()
            .flat_map(|a| p.ids().map(move |b| (a, b)))
            .find(|&(a, b)| p.upper_bounds(a, b).is_empty())
            .expect("some pair lacks a majorant");
        (vec![l(a), l(b)], "no common upper bound".to_string())
    });

    let zeros: Vec<ElementId> = p.ids().filter_map(|a| q.diff(a, a)).collect();
    let zero = zeros.first().copied();
    for a in p.ids() {
        let aa = q.diff(a, a);
        report.check("zero.unique").expect(aa == zero, || {
            (
                vec![l(a)],
                format!("a - a = {} differs from another x - x", aa.map(l).unwrap_or_else(|| "undefined".into())),
            )
        });
    }
    if let Some(z) = zero {
        report.check("zero.least").expect(p.bottom() == Some(z), || {
            (vec![l(z)], "a - a is not the least element".to_string())
        });
    }
    report
}

/// For `c >= a, b` with `a ∨ b` and `a ∧ b` defined:
/// `c - (a∨b) = (c-a) ∧ (c-b)` and `c - (a∧b) = (c-a) ∨ (c-b)`, bounds taken in `[0, c]`.
pub fn check_de_morgan(q: &Quasilogic) -> VerificationReport {
    let p = q.poset();
    let mut report = VerificationReport::new("de Morgan");
    let l = |x: ElementId| q.label(x).to_string();
    let show = |x: Option<ElementId>| x.map(l).unwrap_or_else(|| "undefined".into());
    report.check("de_morgan.join");
    report.check("de_morgan.meet");
    for a in p.ids() {
        for b in p.ids() {
            let (Some(j), Some(m)) = (p.join(a, b), p.meet(a, b)) else { continue };
            for c in p.ids().filter(|&c| p.le(a, c) && p.le(b, c)) {
                let (Some(ca), Some(cb)) = (q.diff(c, a), q.diff(c, b)) else { continue };
                let below_c: Vec<ElementId> = p.ids().filter(|&x| p.le(x, c)).collect();
                let seg_meet = p.greatest_of(
                    &below_c.iter().copied().filter(|&x| p.le(x, ca) && p.le(x, cb)).collect::<Vec<_>>(),
                );
                let seg_join = p.least_of(
                    &below_c.iter().copied().filter(|&x| p.le(ca, x) && p.le(cb, x)).collect::<Vec<_>>(),
                );
                let lhs = q.diff(c, j);
                report.check("de_morgan.join").expect(lhs.is_some() && lhs == seg_meet, || {
                    (
                        vec![l(a), l(b), l(c)],
                        format!("c - (a∨b) = {} but (c-a)∧(c-b) = {}", show(lhs), show(seg_meet)),
                    )
                });
                let lhs = q.diff(c, m);
                report.check("de_morgan.meet").expect(lhs.is_some() && lhs == seg_join, || {
                    (
                        vec![l(a), l(b), l(c)],
                        format!("c - (a∧b) = {} but (c-a)∨(c-b) = {}", show(lhs), show(seg_join)),
                    )
                });
            }
        }
    }
    report
}

/// `a + b = (a∨b) + (a∧b)` for summable pairs whose bounds exist.
pub fn check_sum_lattice_identity(q: &Quasilogic) -> VerificationReport {
    let p = q.poset();
    let mut report = VerificationReport::new("sum/lattice identity");
    let l = |x: ElementId| q.label(x).to_string();
    report.check("sum.join_plus_meet");
    for a in p.ids() {
        for b in p.ids() {
            if !q.summable(a, b) {
                continue;
            }
            let (Some(j), Some(m)) = (p.join(a, b), p.meet(a, b)) else { continue };
            let lhs = q.partial_sum(a, b);
            let rhs = q.partial_sum(j, m);
            let ok = matches!((&lhs, &rhs), (Ok(x), Ok(y)) if x == y);
            report.check("sum.join_plus_meet").expect(ok, || {
                let show = |r: &Result<ElementId>| match r {
                    Ok(x) => l(*x),
                    Err(e) => format!("<{e}>"),
                };
                (
                    vec![l(a), l(b)],
                    format!("a + b = {} but (a∨b) + (a∧b) = {}", show(&lhs), show(&rhs)),
                )
            });
        }
    }
    report
}

/// Checks that `+` is commutative, associative, has 0 as neutral element,
/// and cancels: `(a + b) - b = a`.
pub fn check_sum_laws(q: &Quasilogic) -> VerificationReport {
    let p = q.poset();
    let mut report = VerificationReport::new("partial sum laws");
    let l = |x: ElementId| q.label(x).to_string();
    let zero = q.zero();
    for name in ["sum.majorant_independent", "sum.commutative", "sum.cancellation", "sum.associative", "sum.neutral"] {
        report.check(name);
    }
    let n = q.len();
    let mut sums: Vec<Option<ElementId>> = vec![None; n * n];
    for a in p.ids() {
        for b in p.ids() {
            if !q.summable(a, b) {
                continue;
            }
            match q.partial_sum(a, b) {
                Ok(s) => {
                    report.check("sum.majorant_independent").pass();
                    sums[a.0 * n + b.0] = Some(s);
                }
                Err(e) => report.check("sum.majorant_independent").fail(&[l(a), l(b)], e.to_string()),
            }
        }
    }
    let sum = |a: ElementId, b: ElementId| sums[a.0 * n + b.0];
    for a in p.ids() {
        if let Some(z) = zero {
            let s = sum(a, z);
            report.check("sum.neutral").expect(s == Some(a), || (vec![l(a)], "a + 0 != a".to_string()));
        }
        for b in p.ids() {
            let Some(s) = sum(a, b) else { continue };
            report.check("sum.commutative").expect(sum(b, a) == Some(s), || {
                (vec![l(a), l(b)], "b + a differs from a + b or is undefined".to_string())
            });
            let ok = q.diff(s, b) == Some(a) && q.diff(s, a) == Some(b);
            report.check("sum.cancellation").expect(ok, || {
                (vec![l(a), l(b)], "(a + b) - b != a or (a + b) - a != b".to_string())
            });
            // a + (b + c) defined  =>  (a + b) + c defined and equal
            for c in p.ids() {
                let Some(bc) = sum(b, c) else { continue };
                let Some(left) = sum(a, bc) else { continue };
                let right = sum(s, c);
                report.check("sum.associative").expect(right == Some(left), || {
                    (
                        vec![l(a), l(b), l(c)],
                        format!(
                            "a + (b + c) = {} but (a + b) + c = {}",
                            l(left),
                            right.map(l).unwrap_or_else(|| "undefined".into())
                        ),
                    )
                });
            }
        }
    }
    report
}

/// Strongest label first. The hierarchy is read as a chain: each label
/// requires every weaker one, so a ring is in particular a logic.
pub fn classify(q: &Quasilogic) -> Classification {
    let p = q.poset();
    let zero = q.zero();
    let pairs = || p.ids().flat_map(|a| p.ids().map(move |b| (a, b)));
    let only_disjoint_summable = pairs()
        .filter(|&(a, b)| q.summable(a, b))
        .all(|(a, b)| p.meet(a, b).is_some() && p.meet(a, b) == zero);
    let all_quasicommute = pairs().all(|(a, b)| q.quasicommutes(a, b));
    let all_commute = pairs().all(|(a, b)| q.logically_commute(a, b));
    let has_top = p.top().is_some();

    let logic = only_disjoint_summable;
    let quasiring = logic && all_quasicommute;
    let ring = quasiring && all_commute;
    let label = if ring && has_top {
        ClassificationLabel::BooleanAlgebra
    } else if ring {
        ClassificationLabel::Ring
    } else if quasiring {
        ClassificationLabel::Quasiring
    } else if logic {
        ClassificationLabel::Logic
    } else {
        ClassificationLabel::Quasilogic
    };
    Classification {
        label,
        only_disjoint_summable,
        all_quasicommute,
        all_commute,
        has_top,
    }
}
