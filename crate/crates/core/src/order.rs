//! Finite partially ordered sets.
//!
//! The order is stored as a dense boolean table; every structure in the crate
//! (D-posets, semilogics, ortho-logics, boolean semirings) is built on top of
//! a [`FinitePoset`]. Elements are addressed by [`ElementId`], the position in
//! the label table, and all list outputs follow that canonical order.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// Hard cap on element count; exhaustive triple scans stay below 2^24 steps.
pub const MAX_ELEMENTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub usize);

impl ElementId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    le: Vec<bool>,
    // Cached bounds; meets and joins sit inside every triple scan.
    meets: Vec<Option<ElementId>>,
    joins: Vec<Option<ElementId>>,
}

impl FinitePoset {
    /// Builds a poset from a full relation table without checking the axioms.
    ///
    /// Use [`verify_poset`] to validate; [`FinitePoset::from_covers`] is the
    /// checked constructor used by the file loader.
    pub fn from_relation(labels: Vec<String>, le: Vec<Vec<bool>>) -> Result<Self> {
        check_labels(&labels)?;
        let n = labels.len();
        if le.len() != n || le.iter().any(|row| row.len() != n) {
            return Err(Error::Structural(format!(
                "order table must be {n}x{n}"
            )));
        }
        Ok(FinitePoset::build(labels, le.into_iter().flatten().collect()))
    }

    /// Reflexive-transitive closure of a list of `lower <= upper` pairs.
    /// Cycles between distinct elements are rejected.
    pub fn from_covers(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        check_labels(&labels)?;
        let n = labels.len();
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Structural(format!("order pair ({a}, {b}) out of range")));
            }
            le[a * n + b] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if le[i * n + k] {
                    for j in 0..n {
                        if le[k * n + j] {
                            le[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if le[a * n + b] && le[b * n + a] {
                    return Err(Error::Structural(format!(
                        "order relation has a cycle: {} <= {} <= {}",
                        labels[a], labels[b], labels[a]
                    )));
                }
            }
        }
        Ok(FinitePoset::build(labels, le))
    }

    fn build(labels: Vec<String>, le: Vec<bool>) -> Self {
        let n = labels.len();
        let mut p = FinitePoset {
            labels,
            le,
            meets: Vec::new(),
            joins: Vec::new(),
        };
        let mut meets = Vec::with_capacity(n * n);
        let mut joins = Vec::with_capacity(n * n);
        for a in p.ids() {
            for b in p.ids() {
                meets.push(p.scan_meet(a, b));
                joins.push(p.scan_join(a, b));
            }
        }
        p.meets = meets;
        p.joins = joins;
        p
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ElementId> + Clone {
        (0..self.len()).map(ElementId)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: ElementId) -> &str {
        &self.labels[a.0]
    }

    pub fn id(&self, label: &str) -> Option<ElementId> {
        self.labels.iter().position(|l| l == label).map(ElementId)
    }

    #[inline]
    pub fn le(&self, a: ElementId, b: ElementId) -> bool {
        self.le[a.0 * self.len() + b.0]
    }

    #[inline]
    pub fn lt(&self, a: ElementId, b: ElementId) -> bool {
        a != b && self.le(a, b)
    }

    pub fn comparable(&self, a: ElementId, b: ElementId) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    pub fn lower_bounds(&self, a: ElementId, b: ElementId) -> Vec<ElementId> {
        self.ids().filter(|&x| self.le(x, a) && self.le(x, b)).collect()
    }

    pub fn upper_bounds(&self, a: ElementId, b: ElementId) -> Vec<ElementId> {
        self.ids().filter(|&x| self.le(a, x) && self.le(b, x)).collect()
    }

    /// Greatest element of `set`, if it has one.
    pub fn greatest_of(&self, set: &[ElementId]) -> Option<ElementId> {
        set.iter().copied().find(|&g| set.iter().all(|&x| self.le(x, g)))
    }

    /// Least element of `set`, if it has one.
    pub fn least_of(&self, set: &[ElementId]) -> Option<ElementId> {
        set.iter().copied().find(|&l| set.iter().all(|&x| self.le(l, x)))
    }

    /// Greatest lower bound; `None` when it does not exist.
    #[inline]
    pub fn meet(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        self.meets[a.0 * self.len() + b.0]
    }

    /// Least upper bound; `None` when it does not exist.
    #[inline]
    pub fn join(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        self.joins[a.0 * self.len() + b.0]
    }

    fn scan_meet(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        if self.le(a, b) {
            return Some(a);
        }
        if self.le(b, a) {
            return Some(b);
        }
        self.greatest_of(&self.lower_bounds(a, b))
    }

    fn scan_join(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        if self.le(a, b) {
            return Some(b);
        }
        if self.le(b, a) {
            return Some(a);
        }
        self.least_of(&self.upper_bounds(a, b))
    }

    /// Supremum of an arbitrary family; the empty family has the bottom as supremum.
    pub fn join_all(&self, family: &[ElementId]) -> Option<ElementId> {
        let ub: Vec<ElementId> = self
            .ids()
            .filter(|&x| family.iter().all(|&a| self.le(a, x)))
            .collect();
        self.least_of(&ub)
    }

    /// Infimum of an arbitrary family; the empty family has the top as infimum.
    pub fn meet_all(&self, family: &[ElementId]) -> Option<ElementId> {
        let lb: Vec<ElementId> = self
            .ids()
            .filter(|&x| family.iter().all(|&a| self.le(x, a)))
            .collect();
        self.greatest_of(&lb)
    }

    pub fn bottom(&self) -> Option<ElementId> {
        self.ids().find(|&z| self.ids().all(|x| self.le(z, x)))
    }

    pub fn top(&self) -> Option<ElementId> {
        self.ids().find(|&t| self.ids().all(|x| self.le(x, t)))
    }

    /// Elements covering the bottom element, in canonical order.
    pub fn atoms(&self) -> Result<Vec<ElementId>> {
        let zero = self
            .bottom()
            .ok_or_else(|| Error::Domain("poset has no least element".into()))?;
        Ok(self
            .ids()
            .filter(|&a| a != zero)
            .filter(|&a| self.ids().all(|b| !self.lt(b, a) || b == zero))
            .collect())
    }

    /// Every pair has a common upper bound.
    pub fn is_upward_directed(&self) -> bool {
        self.ids()
            .all(|a| self.ids().all(|b| self.ids().any(|c| self.le(a, c) && self.le(b, c))))
    }

    /// The interval `[a, c]` as a poset of its own.
    pub fn segment(&self, a: ElementId, c: ElementId) -> Result<Segment> {
        if !self.le(a, c) {
            return Err(Error::Domain(format!(
                "segment requires {} <= {}",
                self.label(a),
                self.label(c)
            )));
        }
        let parent_ids: Vec<ElementId> = self
            .ids()
            .filter(|&b| self.le(a, b) && self.le(b, c))
            .collect();
        Ok(Segment {
            poset: self.induced(&parent_ids),
            parent_ids,
        })
    }

    /// Subposet on `members` (in the given order).
    pub fn induced(&self, members: &[ElementId]) -> FinitePoset {
        let labels = members.iter().map(|&m| self.label(m).to_string()).collect();
        let mut le = Vec::with_capacity(members.len() * members.len());
        for &x in members {
            for &y in members {
                le.push(self.le(x, y));
            }
        }
        FinitePoset::build(labels, le)
    }

    /// Cover pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(ElementId, ElementId)> {
        let mut out = Vec::new();
        for a in self.ids() {
            for b in self.ids() {
                if self.lt(a, b) && !self.ids().any(|x| self.lt(a, x) && self.lt(x, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// An interval of a parent poset with back-references to the parent's ids.
#[derive(Debug, Clone)]
pub struct Segment {
    pub poset: FinitePoset,
    pub parent_ids: Vec<ElementId>,
}

impl Segment {
    pub fn local_id(&self, parent: ElementId) -> Option<ElementId> {
        self.parent_ids.iter().position(|&p| p == parent).map(ElementId)
    }
}

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.len() > MAX_ELEMENTS {
        return Err(Error::Structural(format!(
            "{} elements exceeds the limit of {MAX_ELEMENTS}",
            labels.len()
        )));
    }
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::Structural(format!("duplicate label {l:?}")));
        }
    }
    Ok(())
}

/// Checks reflexivity, antisymmetry and transitivity with witnesses.
pub fn verify_poset(p: &FinitePoset) -> VerificationReport {
    let mut report = VerificationReport::new("poset");
    let l = |a: ElementId| p.label(a).to_string();
    for a in p.ids() {
        report
            .check("order.reflexive")
            .expect(p.le(a, a), || (vec![l(a)], "a <= a fails".to_string()));
    }
    for a in p.ids() {
        for b in p.ids() {
            if a < b {
                let ok = !(p.le(a, b) && p.le(b, a));
                report.check("order.antisymmetric").expect(ok, || {
                    (vec![l(a), l(b)], "a <= b and b <= a with a != b".to_string())
                });
            }
        }
    }
    for a in p.ids() {
        for b in p.ids() {
            if !p.le(a, b) {
                continue;
            }
            for c in p.ids() {
                if p.le(b, c) {
                    report.check("order.transitive").expect(p.le(a, c), || {
                        (vec![l(a), l(b), l(c)], "a <= b <= c but not a <= c".to_string())
                    });
                }
            }
        }
    }
    report.check("order.transitive");
    report
}
