//! Semilogics: a poset with a partial commutative product on logically
//! commuting pairs and sums of pairwise-orthogonal families.
//!
//! Sums are always finite here, so `Σ aᵢ` is the supremum of a
//! pairwise-orthogonal set of nonzero elements. On top of the structure this
//! module provides ideals, filters, distributions, homomorphisms, closures
//! and the regularity check for distributions.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::{verify_poset, ElementId, FinitePoset};
use crate::report::VerificationReport;

/// Absolute tolerance for comparing distribution values.
pub const DIST_TOL: f64 = 1e-12;

/// Above this many summable families the decomposition-compatibility search
/// is skipped and recorded as such in the report.
const COMPAT_FAMILY_LIMIT: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semilogic {
    poset: FinitePoset,
    prod: Vec<Option<ElementId>>,
    zero: ElementId,
}

/// A pairwise-orthogonal set of nonzero elements together with its sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummableFamily {
    pub members: Vec<ElementId>,
    pub sum: ElementId,
}

impl Semilogic {
    /// `prod[a][b]` is `ab` where `a` and `b` logically commute. The table
    /// must be symmetric; the poset must have a least element.
    pub fn new(poset: FinitePoset, prod: Vec<Vec<Option<ElementId>>>) -> Result<Self> {
        let n = poset.len();
        let zero = poset
            .bottom()
            .ok_or_else(|| Error::Structural("a semilogic needs a least element 0".into()))?;
        if prod.len() != n || prod.iter().any(|r| r.len() != n) {
            return Err(Error::Structural(format!("product table must be {n}x{n}")));
        }
        for a in 0..n {
            for b in 0..n {
                if let Some(c) = prod[a][b] {
                    if c.0 >= n {
                        return Err(Error::Structural(format!("product value {c} out of range")));
                    }
                }
                if prod[a][b] != prod[b][a] {
                    return Err(Error::Structural(format!(
                        "product table is not symmetric at ({}, {})",
                        poset.labels()[a],
                        poset.labels()[b]
                    )));
                }
            }
        }
        Ok(Semilogic {
            poset,
            prod: prod.into_iter().flatten().collect(),
            zero,
        })
    }

    /// Product = meet on every pair satisfying `commute` (and where the meet exists).
    pub fn from_meets(poset: FinitePoset, commute: impl Fn(ElementId, ElementId) -> bool) -> Result<Self> {
        let prod = poset
            .ids()
            .map(|a| {
                poset
                    .ids()
                    .map(|b| if commute(a, b) { poset.meet(a, b) } else { None })
                    .collect()
            })
            .collect();
        Semilogic::new(poset, prod)
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

    pub fn ids(&self) -> impl Iterator<Item = ElementId> + Clone {
        self.poset.ids()
    }

    pub fn label(&self, a: ElementId) -> &str {
        self.poset.label(a)
    }

    pub fn zero(&self) -> ElementId {
        self.zero
    }

    /// `ab`, defined iff `a` and `b` logically commute.
    #[inline]
    pub fn product(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        self.prod[a.0 * self.len() + b.0]
    }

    pub fn commutes(&self, a: ElementId, b: ElementId) -> bool {
        self.product(a, b).is_some()
    }

    pub fn orthogonal(&self, a: ElementId, b: ElementId) -> bool {
        self.product(a, b) == Some(self.zero)
    }

    pub fn le(&self, a: ElementId, b: ElementId) -> bool {
        self.poset.le(a, b)
    }

    /// `Σ family`: the zero elements are dropped, the rest must be distinct,
    /// pairwise orthogonal and have a supremum.
    pub fn sum(&self, family: &[ElementId]) -> Option<ElementId> {
        let members: Vec<ElementId> = family.iter().copied().filter(|&a| a != self.zero).collect();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if !self.orthogonal(a, b) {
                    return None;
                }
            }
        }
        self.poset.join_all(&members)
    }

    /// `b - a`: the unique `c` orthogonal to `a` with `a + c = b`.
    pub fn difference(&self, b: ElementId, a: ElementId) -> Option<ElementId> {
        if !self.le(a, b) {
            return None;
        }
        let mut found = None;
        for c in self.ids() {
            if self.orthogonal(a, c) && self.sum(&[a, c]) == Some(b) {
                if found.is_some() {
                    return None;
                }
                found = Some(c);
            }
        }
        found
    }

    /// All pairwise-orthogonal sets of nonzero elements of size at most
    /// `bound` whose supremum exists. Always contains the empty family.
    pub fn summable_families(&self, bound: usize) -> Vec<SummableFamily> {
        let mut out = Vec::new();
        self.walk_orthogonal_sets(bound, &mut |set| {
            if let Some(sum) = self.poset.join_all(set) {
                out.push(SummableFamily {
                    members: set.to_vec(),
                    sum,
                });
            }
        });
        out
    }

    /// All pairwise-orthogonal sets of nonzero elements, with or without a supremum.
    pub fn disjoint_families(&self) -> Vec<Vec<ElementId>> {
        let mut out = Vec::new();
        self.walk_orthogonal_sets(self.len(), &mut |set| out.push(set.to_vec()));
        out
    }

    fn walk_orthogonal_sets(&self, bound: usize, visit: &mut dyn FnMut(&[ElementId])) {
        let pool: Vec<ElementId> = self.ids().filter(|&a| a != self.zero).collect();
        let mut chosen = Vec::new();
        visit(&chosen);
        self.extend_orthogonal(&pool, 0, bound, &mut chosen, visit);
    }

    fn extend_orthogonal(
        &self,
        pool: &[ElementId],
        start: usize,
        bound: usize,
        chosen: &mut Vec<ElementId>,
        visit: &mut dyn FnMut(&[ElementId]),
    ) {
        if chosen.len() == bound {
            return;
        }
        for i in start..pool.len() {
            let x = pool[i];
            if chosen.iter().all(|&c| self.orthogonal(c, x)) {
                chosen.push(x);
                visit(chosen);
                self.extend_orthogonal(pool, i + 1, bound, chosen, visit);
                chosen.pop();
            }
        }
    }

    /// Has a greatest element and every element has an orthogonal complement summing to it.
    pub fn is_logic(&self) -> bool {
        let Some(one) = self.poset.top() else { return false };
        self.ids().all(|a| self.difference(one, a).is_some())
    }

    fn fmt_set(&self, set: &[ElementId]) -> String {
        let inner: Vec<&str> = set.iter().map(|&a| self.label(a)).collect();
        format!("{{{}}}", inner.join(", "))
    }
}

pub fn verify_semilogic(s: &Semilogic) -> VerificationReport {
    let mut report = verify_poset(s.poset());
    report.subject = "semilogic".into();
    let p = s.poset();
    let l = |x: ElementId| s.label(x).to_string();
    let show = |x: Option<ElementId>| x.map(l).unwrap_or_else(|| "undefined".into());
    let zero = s.zero();

    for a in s.ids() {
        report.check("product.zero").expect(s.product(zero, a) == Some(zero), || {
            (vec![l(a)], format!("0a = {}", show(s.product(zero, a))))
        });
        report.check("product.idempotent").expect(s.product(a, a) == Some(a), || {
            (vec![l(a)], format!("aa = {}", show(s.product(a, a))))
        });
        for b in s.ids() {
            report.check("product.symmetric").expect(s.product(a, b) == s.product(b, a), || {
                (vec![l(a), l(b)], "ab != ba".to_string())
            });
            // ab = a  <=>  a <= b
            let is_a = s.product(a, b) == Some(a);
            report.check("product.order_coherent").expect(is_a == p.le(a, b), || {
                let d = if p.le(a, b) {
                    format!("a <= b but ab = {}", show(s.product(a, b)))
                } else {
                    "ab = a but a is not below b".to_string()
                };
                (vec![l(a), l(b)], d)
            });
            if let Some(ab) = s.product(a, b) {
                report.check("product.meet").expect(p.meet(a, b) == Some(ab), || {
                    (
                        vec![l(a), l(b)],
                        format!("ab = {} but a∧b = {}", l(ab), show(p.meet(a, b))),
                    )
                });
            }
        }
    }

    // a⊽b, c⊽a, b⊽c  =>  ab⊽c and (ab)c = (bc)a
    report.check("product.associative");
    for a in s.ids() {
        for b in s.ids() {
            let Some(ab) = s.product(a, b) else { continue };
            for c in s.ids() {
                let Some(bc) = s.product(b, c) else { continue };
                if !s.commutes(c, a) {
                    continue;
                }
                let left = s.product(ab, c);
                let right = s.product(bc, a);
                report.check("product.associative").expect(left.is_some() && left == right, || {
                    (
                        vec![l(a), l(b), l(c)],
                        format!("(ab)c = {} but (bc)a = {}", show(left), show(right)),
                    )
                });
            }
        }
    }

    let families = s.summable_families(s.len());
    report.note("summable_families", families.len());

    // a Σ aᵢ = Σ a aᵢ
    report.check("sum.distributive");
    for fam in families.iter().filter(|f| !f.members.is_empty()) {
        for a in s.ids() {
            let Some(lhs) = s.product(a, fam.sum) else { continue };
            let prods: Option<Vec<ElementId>> = fam.members.iter().map(|&x| s.product(a, x)).collect();
            let Some(prods) = prods else { continue };
            let mut nonzero: Vec<ElementId> = prods.into_iter().filter(|&x| x != zero).collect();
            let before = nonzero.len();
            nonzero.sort();
            nonzero.dedup();
            let rhs = if nonzero.len() == before { s.sum(&nonzero) } else { None };
            report.check("sum.distributive").expect(rhs == Some(lhs), || {
                (
                    vec![l(a), s.fmt_set(&fam.members)],
                    format!("a·Σ = {} but Σ a·aᵢ = {}", l(lhs), show(rhs)),
                )
            });
        }
    }

    check_compatibility(s, &families, &mut report);
    report
}

/// For every commuting pair, search for decompositions `A` of `a` and `B` of
/// `b` whose union is pairwise orthogonal and with `Σ(A∩B) = ab`.
///
/// The union is not required to have a supremum, so semirings without a
/// unit (where two disjoint elements may lack a common majorant) pass.
fn check_compatibility(s: &Semilogic, families: &[SummableFamily], report: &mut VerificationReport) {
    let name = "product.decomposition_compatible";
    report.check(name);
    if families.len() > COMPAT_FAMILY_LIMIT {
        report.note("decomposition_compatible", "skipped: too many summable families");
        return;
    }
    let mut by_sum: Vec<Vec<&SummableFamily>> = vec![Vec::new(); s.len()];
    for f in families {
        by_sum[f.sum.0].push(f);
    }
    for a in s.ids() {
        for b in s.ids().filter(|&b| b >= a) {
            let Some(ab) = s.product(a, b) else { continue };
            let found = by_sum[a.0].iter().any(|fa| {
                by_sum[b.0].iter().any(|fb| {
                    let union: BTreeSet<ElementId> = fa.members.iter().chain(&fb.members).copied().collect();
                    let union: Vec<ElementId> = union.into_iter().collect();
                    if !pairwise_orthogonal(s, &union) {
                        return false;
                    }
                    let common: Vec<ElementId> =
                        fa.members.iter().copied().filter(|x| fb.members.contains(x)).collect();
                    s.sum(&common) == Some(ab)
                })
            });
            report.check(name).expect(found, || {
                (
                    vec![s.label(a).to_string(), s.label(b).to_string()],
                    "no pair of decompositions inside a common summable family intersects to ab".to_string(),
                )
            });
        }
    }
}

fn pairwise_orthogonal(s: &Semilogic, set: &[ElementId]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &a)| set[i + 1..].iter().all(|&b| s.orthogonal(a, b)))
}

/// A subset of the elements, kept sorted in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementSet {
    pub members: Vec<ElementId>,
}

impl ElementSet {
    pub fn new(mut members: Vec<ElementId>) -> Self {
        members.sort();
        members.dedup();
        ElementSet { members }
    }

    pub fn contains(&self, a: ElementId) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub type Ideal = ElementSet;
pub type Filter = ElementSet;

/// `↑b`.
pub fn principal_filter(s: &Semilogic, b: ElementId) -> Filter {
    ElementSet::new(s.ids().filter(|&a| s.le(b, a)).collect())
}

/// `{a : a ⊥ b}`.
pub fn regular_ideal(s: &Semilogic, b: ElementId) -> Ideal {
    ElementSet::new(s.ids().filter(|&a| s.orthogonal(a, b)).collect())
}

fn check_proper(s: &Semilogic, set: &ElementSet, what: &str) -> Result<()> {
    if set.is_empty() {
        return Err(Error::Domain(format!("{what} must be nonempty")));
    }
    if let Some(&bad) = set.members.iter().find(|a| a.0 >= s.len()) {
        return Err(Error::Structural(format!("{what} member {bad} out of range")));
    }
    Ok(())
}

/// Closure of `seed` under meets with arbitrary elements and under sums.
fn generated_ideal(s: &Semilogic, seed: &[ElementId], families: &[SummableFamily]) -> Vec<bool> {
    let p = s.poset();
    let mut inside = vec![false; s.len()];
    for &a in seed {
        inside[a.0] = true;
    }
    loop {
        let mut changed = false;
        for b in s.ids() {
            if !inside[b.0] {
                continue;
            }
            for a in s.ids() {
                if let Some(m) = p.meet(a, b) {
                    if !inside[m.0] {
                        inside[m.0] = true;
                        changed = true;
                    }
                }
            }
        }
        for f in families {
            if !inside[f.sum.0] && f.members.iter().all(|m| inside[m.0]) {
                inside[f.sum.0] = true;
                changed = true;
            }
        }
        if !changed {
            return inside;
        }
    }
}

/// Ideal axioms a) and b), plus a maximality flag in the report info.
pub fn verify_ideal(s: &Semilogic, d: &Ideal) -> Result<VerificationReport> {
    check_proper(s, d, "ideal")?;
    if d.len() == s.len() {
        return Err(Error::Domain("ideal must be a proper subset".into()));
    }
    let mut report = VerificationReport::new("ideal");
    let p = s.poset();
    let l = |x: ElementId| s.label(x).to_string();
    report.check("ideal.meet_closed");
    for &b in &d.members {
        for a in s.ids() {
            if let Some(m) = p.meet(a, b) {
                report.check("ideal.meet_closed").expect(d.contains(m), || {
                    (vec![l(a), l(b)], format!("a∧b = {} is not in the ideal", l(m)))
                });
            }
        }
    }
    let families = s.summable_families(s.len());
    report.check("ideal.sum_closed");
    for f in families.iter().filter(|f| f.members.iter().all(|&m| d.contains(m))) {
        report.check("ideal.sum_closed").expect(d.contains(f.sum), || {
            (
                vec![s.fmt_set(&f.members)],
                format!("sum {} is not in the ideal", l(f.sum)),
            )
        });
    }
    let maximal = s.ids().filter(|&a| !d.contains(a)).all(|a| {
        let mut seed = d.members.clone();
        seed.push(a);
        generated_ideal(s, &seed, &families).iter().all(|&x| x)
    });
    report.note("maximal", maximal);
    Ok(report)
}

/// Filter conditions and the maximality criterion: for every `a` outside the
/// filter some member `b` has `a ∧ b = 0`.
pub fn verify_filter(s: &Semilogic, f: &Filter) -> Result<VerificationReport> {
    check_proper(s, f, "filter")?;
    let mut report = VerificationReport::new("filter");
    let p = s.poset();
    let l = |x: ElementId| s.label(x).to_string();
    report.check("filter.zero_free").expect(!f.contains(s.zero()), || {
        (vec![l(s.zero())], "0 ∈ ∇".to_string())
    });
    report.check("filter.upward_closed");
    report.check("filter.product_closed");
    for &b in &f.members {
        for a in s.ids().filter(|&a| p.le(b, a)) {
            report.check("filter.upward_closed").expect(f.contains(a), || {
                (vec![l(b), l(a)], format!("{} is above a member but not in ∇", l(a)))
            });
        }
        for &c in &f.members {
            if let Some(bc) = s.product(b, c) {
                report.check("filter.product_closed").expect(f.contains(bc), || {
                    (vec![l(b), l(c)], format!("product {} is not in ∇", l(bc)))
                });
            }
        }
    }
    let maximal = s
        .ids()
        .filter(|&a| !f.contains(a))
        .all(|a| f.members.iter().any(|&b| p.meet(a, b) == Some(s.zero())));
    report.note("maximal", maximal);
    Ok(report)
}

/// A nonnegative valuation indexed by element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionTable {
    pub values: Vec<f64>,
}

impl DistributionTable {
    pub fn new(values: Vec<f64>) -> Self {
        DistributionTable { values }
    }

    pub fn zero(n: usize) -> Self {
        DistributionTable { values: vec![0.0; n] }
    }

    pub fn get(&self, a: ElementId) -> f64 {
        self.values[a.0]
    }
}

fn check_values(s: &Semilogic, m: &DistributionTable) -> Result<()> {
    if m.values.len() != s.len() {
        return Err(Error::Structural(format!(
            "distribution has {} values for {} elements",
            m.values.len(),
            s.len()
        )));
    }
    if let Some(a) = s.ids().find(|&a| !m.get(a).is_finite() || m.get(a) < 0.0) {
        return Err(Error::Domain(format!(
            "distribution value at {} is {} (must be finite and nonnegative)",
            s.label(a),
            m.get(a)
        )));
    }
    Ok(())
}

/// `‖m‖ = sup Σ m(aᵢ)` over pairwise-orthogonal families, whether or not
/// they have a sum.
pub fn mass(s: &Semilogic, m: &DistributionTable) -> f64 {
    s.disjoint_families()
        .iter()
        .map(|f| f.iter().map(|&a| m.get(a)).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Additivity over every summable family, `m(0) = 0` and monotonicity; the
/// info section carries the mass and the probability/state flags.
pub fn verify_distribution(s: &Semilogic, m: &DistributionTable) -> Result<VerificationReport> {
    check_values(s, m)?;
    let mut report = VerificationReport::new("distribution");
    let l = |x: ElementId| s.label(x).to_string();
    let z = s.zero();
    report.check("distribution.zero").expect(m.get(z).abs() <= DIST_TOL, || {
        (vec![l(z)], format!("m(0) = {}", m.get(z)))
    });
    report.check("distribution.additive");
    for f in s.summable_families(s.len()).iter().filter(|f| f.members.len() >= 2) {
        let parts: f64 = f.members.iter().map(|&a| m.get(a)).sum();
        let whole = m.get(f.sum);
        report.check("distribution.additive").expect((whole - parts).abs() <= DIST_TOL, || {
            (
                f.members.iter().map(|&a| l(a)).collect(),
                format!("m({}) = {whole} but the parts add to {parts}", l(f.sum)),
            )
        });
    }
    for a in s.ids() {
        for b in s.ids().filter(|&b| s.le(a, b)) {
            report.check("distribution.monotone").expect(m.get(a) <= m.get(b) + DIST_TOL, || {
                (vec![l(a), l(b)], format!("m(a) = {} > m(b) = {}", m.get(a), m.get(b)))
            });
        }
    }
    let total_mass = mass(s, m);
    let probability = (total_mass - 1.0).abs() <= DIST_TOL;
    let state = probability && s.ids().any(|c| (m.get(c) - 1.0).abs() <= DIST_TOL);
    report.note("mass", total_mass);
    report.note("probability", probability);
    report.note("state", state);
    Ok(report)
}

/// `{a : m(a) = 0}`.
pub fn zero_ideal(s: &Semilogic, m: &DistributionTable) -> Ideal {
    ElementSet::new(s.ids().filter(|&a| m.get(a).abs() <= DIST_TOL).collect())
}

/// `{c : p(c) = 1}` for a state `p`, verified to be a filter.
pub fn support(s: &Semilogic, p: &DistributionTable) -> Result<Filter> {
    check_values(s, p)?;
    let total = mass(s, p);
    let members: Vec<ElementId> = s.ids().filter(|&c| (p.get(c) - 1.0).abs() <= DIST_TOL).collect();
    if (total - 1.0).abs() > DIST_TOL || members.is_empty() {
        return Err(Error::Domain(format!(
            "not a state: mass {total} and {} elements with value 1",
            members.len()
        )));
    }
    let f = ElementSet::new(members);
    let report = verify_filter(s, &f)?;
    if let Some((axiom, v)) = report.first_violation() {
        return Err(Error::axiom(axiom, format!("support is not a filter at ({}): {}", v.witness.join(", "), v.detail)));
    }
    Ok(f)
}

/// An element map between two semilogics.
#[derive(Debug, Clone)]
pub struct HomomorphismMap<'a> {
    pub source: &'a Semilogic,
    pub target: &'a Semilogic,
    pub map: Vec<ElementId>,
}

impl<'a> HomomorphismMap<'a> {
    pub fn new(source: &'a Semilogic, target: &'a Semilogic, map: Vec<ElementId>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::Structural(format!(
                "map has {} entries for {} source elements",
                map.len(),
                source.len()
            )));
        }
        if let Some(bad) = map.iter().find(|x| x.0 >= target.len()) {
            return Err(Error::Structural(format!("map value {bad} outside the target")));
        }
        Ok(HomomorphismMap { source, target, map })
    }

    pub fn identity(s: &'a Semilogic) -> Self {
        HomomorphismMap {
            source: s,
            target: s,
            map: s.ids().collect(),
        }
    }

    pub fn apply(&self, a: ElementId) -> ElementId {
        self.map[a.0]
    }
}

/// Additivity over all summable source families, zero, monotonicity,
/// subtraction where defined, and commutation when the target is a logic.
pub fn verify_homomorphism(h: &HomomorphismMap<'_>) -> VerificationReport {
    let (src, dst) = (h.source, h.target);
    let mut report = VerificationReport::new("homomorphism");
    let ls = |x: ElementId| src.label(x).to_string();
    let lt = |x: ElementId| dst.label(x).to_string();
    let show = |x: Option<ElementId>| x.map(lt).unwrap_or_else(|| "undefined".into());

    report.check("homomorphism.zero").expect(h.apply(src.zero()) == dst.zero(), || {
        (vec![ls(src.zero())], format!("h(0) = {}", lt(h.apply(src.zero()))))
    });
    report.check("homomorphism.additive");
    for f in src.summable_families(src.len()) {
        let images: Vec<ElementId> = f.members.iter().map(|&a| h.apply(a)).collect();
        let mut nonzero: Vec<ElementId> = images.iter().copied().filter(|&x| x != dst.zero()).collect();
        let before = nonzero.len();
        nonzero.sort();
        nonzero.dedup();
        let rhs = if nonzero.len() == before { dst.sum(&nonzero) } else { None };
        let lhs = h.apply(f.sum);
        report.check("homomorphism.additive").expect(rhs == Some(lhs), || {
            (
                f.members.iter().map(|&a| ls(a)).collect(),
                format!("h(Σ) = {} but Σ h(aᵢ) = {}", lt(lhs), show(rhs)),
            )
        });
    }
    for a in src.ids() {
        for b in src.ids().filter(|&b| src.le(a, b)) {
            report.check("homomorphism.monotone").expect(dst.le(h.apply(a), h.apply(b)), || {
                (vec![ls(a), ls(b)], format!("h(a) = {} not below h(b) = {}", lt(h.apply(a)), lt(h.apply(b))))
            });
            if let Some(d) = src.difference(b, a) {
                let rhs = dst.difference(h.apply(b), h.apply(a));
                report.check("homomorphism.subtraction").expect(rhs == Some(h.apply(d)), || {
                    (
                        vec![ls(b), ls(a)],
                        format!("h(b - a) = {} but h(b) - h(a) = {}", lt(h.apply(d)), show(rhs)),
                    )
                });
            }
        }
    }
    if dst.is_logic() {
        report.check("homomorphism.commutation");
        for a in src.ids() {
            for b in src.ids() {
                let Some(ab) = src.product(a, b) else { continue };
                let img = dst.product(h.apply(a), h.apply(b));
                report.check("homomorphism.commutation").expect(img == Some(h.apply(ab)), || {
                    (
                        vec![ls(a), ls(b)],
                        format!("h(ab) = {} but h(a)h(b) = {}", lt(h.apply(ab)), show(img)),
                    )
                });
            }
        }
    }
    report
}

/// A closure operator `k`, given as an element map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosurePair {
    pub k: Vec<ElementId>,
}

/// Closed elements, open elements and the interior map of a closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureParts {
    pub closed: Vec<ElementId>,
    pub open: Vec<ElementId>,
    /// `i(a) = ⋁{i open : i <= a}` where that supremum exists.
    pub interior: Vec<Option<ElementId>>,
}

/// `a` is open if `k - a` is closed for every closed `k >= a`.
pub fn closure_parts(s: &Semilogic, c: &ClosurePair) -> ClosureParts {
    let closed: Vec<ElementId> = s.ids().filter(|&a| c.k[a.0] == a).collect();
    let open: Vec<ElementId> = s
        .ids()
        .filter(|&a| {
            closed
                .iter()
                .filter(|&&k| s.le(a, k))
                .all(|&k| s.difference(k, a).is_some_and(|d| c.k[d.0] == d))
        })
        .collect();
    let interior = s
        .ids()
        .map(|a| {
            let below: Vec<ElementId> = open.iter().copied().filter(|&i| s.le(i, a)).collect();
            s.poset().join_all(&below)
        })
        .collect();
    ClosureParts { closed, open, interior }
}

/// For every `a` some member is above it, and two members above `a` have a
/// member above `a` below both.
pub fn is_upper_family(s: &Semilogic, fam: &[ElementId]) -> bool {
    s.ids().all(|a| {
        let above: Vec<ElementId> = fam.iter().copied().filter(|&i| s.le(a, i)).collect();
        !above.is_empty()
            && above.iter().all(|&i1| {
                above
                    .iter()
                    .all(|&i2| above.iter().any(|&i| s.le(i, i1) && s.le(i, i2)))
            })
    })
}

/// Order dual of [`is_upper_family`].
pub fn is_lower_family(s: &Semilogic, fam: &[ElementId]) -> bool {
    s.ids().all(|a| {
        let below: Vec<ElementId> = fam.iter().copied().filter(|&k| s.le(k, a)).collect();
        !below.is_empty()
            && below.iter().all(|&k1| {
                below
                    .iter()
                    .all(|&k2| below.iter().any(|&k| s.le(k1, k) && s.le(k2, k)))
            })
    })
}

/// Every element lies below some member, and any two members have a member above both.
pub fn is_approximate_unity(s: &Semilogic, fam: &[ElementId]) -> bool {
    s.ids().all(|a| fam.iter().any(|&i| s.le(a, i)))
        && fam
            .iter()
            .all(|&i1| fam.iter().all(|&i2| fam.iter().any(|&i| s.le(i1, i) && s.le(i2, i))))
}

pub fn verify_closure(s: &Semilogic, c: &ClosurePair) -> Result<VerificationReport> {
    if c.k.len() != s.len() || c.k.iter().any(|x| x.0 >= s.len()) {
        return Err(Error::Structural("closure map must send every element into the structure".into()));
    }
    let p = s.poset();
    let k = |a: ElementId| c.k[a.0];
    let l = |x: ElementId| s.label(x).to_string();
    let mut report = VerificationReport::new("closure");
    report.check("closure.zero").expect(k(s.zero()) == s.zero(), || {
        (vec![l(s.zero())], format!("k(0) = {}", l(k(s.zero()))))
    });
    for a in s.ids() {
        report.check("closure.idempotent").expect(k(k(a)) == k(a), || {
            (vec![l(a)], format!("k(k(a)) = {} but k(a) = {}", l(k(k(a))), l(k(a))))
        });
        report.check("closure.extensive").expect(p.le(a, k(a)), || {
            (vec![l(a)], format!("k(a) = {} is not above a", l(k(a))))
        });
    }
    report.check("closure.join_preserving");
    for a in s.ids() {
        for b in s.ids() {
            let Some(j) = p.join(a, b) else { continue };
            let rhs = p.join(k(a), k(b));
            report.check("closure.join_preserving").expect(rhs == Some(k(j)), || {
                (
                    vec![l(a), l(b)],
                    format!(
                        "k(a∨b) = {} but k(a)∨k(b) = {}",
                        l(k(j)),
                        rhs.map(l).unwrap_or_else(|| "undefined".into())
                    ),
                )
            });
        }
    }

    let parts = closure_parts(s, c);
    report.check("closed.lower_family").expect(is_lower_family(s, &parts.closed), || {
        (Vec::<String>::new(), "closed elements do not form a lower family".to_string())
    });
    report.check("open.upper_family").expect(is_upper_family(s, &parts.open), || {
        (Vec::<String>::new(), "open elements do not form an upper family".to_string())
    });
    report.check("open.meet_closed");
    for &i1 in &parts.open {
        for &i2 in &parts.open {
            if let Some(m) = p.meet(i1, i2) {
                report.check("open.meet_closed").expect(parts.open.contains(&m), || {
                    (vec![l(i1), l(i2)], format!("i1∧i2 = {} is not open", l(m)))
                });
            }
        }
    }
    report.note("closed", parts.closed.iter().map(|&a| l(a)).collect::<Vec<_>>());
    report.note("open", parts.open.iter().map(|&a| l(a)).collect::<Vec<_>>());
    report.note("dual", is_approximate_unity(s, &parts.open));
    Ok(report)
}

/// `sup{m(k) : k <= a, k ∈ K} = m(a) = inf{m(i) : i >= a, i ∈ I}` for every `a`.
pub fn check_regularity(
    s: &Semilogic,
    m: &DistributionTable,
    upper: &[ElementId],
    lower: &[ElementId],
) -> Result<VerificationReport> {
    check_values(s, m)?;
    if !is_upper_family(s, upper) {
        return Err(Error::Domain("the upper family fails the upper-family conditions".into()));
    }
    if !is_lower_family(s, lower) {
        return Err(Error::Domain("the lower family fails the lower-family conditions".into()));
    }
    let l = |x: ElementId| s.label(x).to_string();
    let mut report = VerificationReport::new("regularity");
    for a in s.ids() {
        let from_below = lower
            .iter()
            .filter(|&&k| s.le(k, a))
            .map(|&k| m.get(k))
            .fold(f64::NEG_INFINITY, f64::max);
        let from_above = upper
            .iter()
            .filter(|&&i| s.le(a, i))
            .map(|&i| m.get(i))
            .fold(f64::INFINITY, f64::min);
        report.check("regular.inner").expect((from_below - m.get(a)).abs() <= DIST_TOL, || {
            (vec![l(a)], format!("sup over closed below = {from_below}, m(a) = {}", m.get(a)))
        });
        report.check("regular.outer").expect((from_above - m.get(a)).abs() <= DIST_TOL, || {
            (vec![l(a)], format!("inf over open above = {from_above}, m(a) = {}", m.get(a)))
        });
    }
    let opposite = upper.iter().all(|&i| {
        lower
            .iter()
            .filter(|&&k| s.le(k, i))
            .all(|&k| s.difference(i, k).is_some_and(|d| upper.contains(&d)))
    });
    report.note("opposite", opposite);
    Ok(report)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn powerset(n: usize) -> Semilogic {
        let size = 1usize << n;
        let names = (0..size).map(|m| format!("s{m}")).collect();
        let le = (0..size).map(|a| (0..size).map(|b| a & b == a).collect()).collect();
        let poset = FinitePoset::from_relation(names, le).unwrap();
        Semilogic::from_meets(poset, |_, _| true).unwrap()
    }

    /// MO2 with products only on comparable or orthogonal pairs.
    pub(crate) fn mo2() -> Semilogic {
        let names = ["0", "a", "a'", "b", "b'", "1"].iter().map(|s| s.to_string()).collect();
        let pairs: Vec<(usize, usize)> = (1..5).flat_map(|i| [(0, i), (i, 5)]).collect();
        let poset = FinitePoset::from_covers(names, &pairs).unwrap();
        let comp = [5, 2, 1, 4, 3, 0];
        let commute = |a: ElementId, b: ElementId| a.0 == 0 || b.0 == 0 || a.0 == 5 || b.0 == 5 || a == b || comp[a.0] == b.0;
        Semilogic::from_meets(poset, commute).unwrap()
    }

    fn e(i: usize) -> ElementId {
        ElementId(i)
    }

    #[test]
    fn fixtures_are_semilogics() {
        for n in 0..=3 {
            let r = verify_semilogic(&powerset(n));
            assert!(r.is_valid(), "{r}");
        }
        let r = verify_semilogic(&mo2());
        assert!(r.is_valid(), "{r}");
    }

    #[test]
    fn broken_idempotence_witness() {
        let s = powerset(2);
        let mut prod: Vec<Vec<Option<ElementId>>> =
            s.ids().map(|a| s.ids().map(|b| s.product(a, b)).collect()).collect();
        prod[1][1] = Some(e(0));
        let bad = Semilogic::new(s.poset().clone(), prod).unwrap();
        let r = verify_semilogic(&bad);
        let v = &r.axiom("product.idempotent").unwrap().violations;
        assert_eq!(v[0].witness, ["s1"]);
    }

    #[test]
    fn asymmetric_table_is_structural() {
        let s = powerset(1);
        let prod = vec![vec![Some(e(0)), Some(e(0))], vec![None, Some(e(1))]];
        assert!(matches!(Semilogic::new(s.poset().clone(), prod), Err(Error::Structural(_))));
    }

    #[test]
    fn summable_families_examples() {
        let s = powerset(2);
        let fams = s.summable_families(4);
        assert!(fams.contains(&SummableFamily { members: vec![], sum: e(0) }));
        assert!(fams.contains(&SummableFamily { members: vec![e(1), e(2)], sum: e(3) }));
        // {}, three singletons, {x, y}
        assert_eq!(fams.len(), 5);
        let m = mo2();
        let fams = m.summable_families(6);
        assert!(fams.contains(&SummableFamily { members: vec![e(1), e(2)], sum: e(5) }));
        assert!(!fams.iter().any(|f| f.members == [e(1), e(3)]));
    }

    #[test]
    fn difference_in_semilogic() {
        let s = powerset(2);
        assert_eq!(s.difference(e(3), e(1)), Some(e(2)));
        assert_eq!(s.difference(e(1), e(1)), Some(e(0)));
        assert_eq!(s.difference(e(1), e(2)), None);
        let m = mo2();
        assert_eq!(m.difference(e(5), e(3)), Some(e(4)));
        assert!(m.is_logic());
    }

    #[test]
    fn distributions() {
        let s = powerset(2);
        let r = verify_distribution(&s, &DistributionTable::zero(4)).unwrap();
        assert!(r.is_valid());
        assert_eq!(r.info["mass"], 0.0);

        let m = DistributionTable::new(vec![0.0, 0.3, 0.7, 1.0]);
        let r = verify_distribution(&s, &m).unwrap();
        assert!(r.is_valid(), "{r}");
        assert_eq!(r.info["state"], true);
        assert_eq!(support(&s, &m).unwrap().members, vec![e(3)]);

        let bad = DistributionTable::new(vec![0.0, 0.3, 0.7, 0.9]);
        let r = verify_distribution(&s, &bad).unwrap();
        let v = &r.axiom("distribution.additive").unwrap().violations;
        assert_eq!(v[0].witness, ["s1", "s2"]);

        let neg = DistributionTable::new(vec![0.0, -0.1, 0.7, 0.6]);
        assert!(matches!(verify_distribution(&s, &neg), Err(Error::Domain(_))));
        assert!(matches!(support(&s, &DistributionTable::zero(4)), Err(Error::Domain(_))));
    }

    #[test]
    fn mo2_support() {
        let s = mo2();
        // p(a) = 1, p(a') = 0, p(b) = p(b') = 1/2
        let p = DistributionTable::new(vec![0.0, 1.0, 0.0, 0.5, 0.5, 1.0]);
        assert!(verify_distribution(&s, &p).unwrap().is_valid());
        assert_eq!(support(&s, &p).unwrap().members, vec![e(1), e(5)]);
    }

    #[test]
    fn ideals_and_filters() {
        let s = powerset(2);
        let m = DistributionTable::new(vec![0.0, 0.0, 1.0, 1.0]);
        let z = zero_ideal(&s, &m);
        assert_eq!(z.members, vec![e(0), e(1)]);
        let r = verify_ideal(&s, &z).unwrap();
        assert!(r.is_valid(), "{r}");
        assert_eq!(r.info["maximal"], true);

        let f = principal_filter(&s, e(1));
        let r = verify_filter(&s, &f).unwrap();
        assert!(r.is_valid());
        assert_eq!(r.info["maximal"], true);
        let r = verify_filter(&s, &principal_filter(&s, e(3))).unwrap();
        assert_eq!(r.info["maximal"], false);

        let with_zero = ElementSet::new(vec![e(0), e(1), e(3)]);
        let r = verify_filter(&s, &with_zero).unwrap();
        assert!(r.violated("filter.zero_free"));

        assert!(matches!(verify_ideal(&s, &ElementSet::new(vec![])), Err(Error::Domain(_))));
        assert!(matches!(verify_ideal(&s, &ElementSet::new(s.ids().collect())), Err(Error::Domain(_))));
        assert!(verify_ideal(&s, &regular_ideal(&s, e(1))).unwrap().is_valid());
    }

    #[test]
    fn homomorphisms() {
        let s = powerset(2);
        assert!(verify_homomorphism(&HomomorphismMap::identity(&s)).is_valid());
        let chain = powerset(1);
        let h = HomomorphismMap::new(&s, &chain, vec![e(0), e(1), e(1), e(1)]).unwrap();
        let r = verify_homomorphism(&h);
        let v = &r.axiom("homomorphism.additive").unwrap().violations;
        assert_eq!(v[0].witness, ["s1", "s2"]);
        let zero = HomomorphismMap::new(&s, &chain, vec![e(0); 4]).unwrap();
        assert!(verify_homomorphism(&zero).is_valid());
        assert!(matches!(HomomorphismMap::new(&s, &chain, vec![e(5); 4]), Err(Error::Structural(_))));
    }

    #[test]
    fn closures() {
        let s = powerset(2);
        let id = ClosurePair { k: s.ids().collect() };
        let r = verify_closure(&s, &id).unwrap();
        assert!(r.is_valid(), "{r}");
        let parts = closure_parts(&s, &id);
        assert_eq!(parts.closed.len(), 4);
        assert_eq!(parts.open.len(), 4);

        let coarse = ClosurePair { k: vec![e(0), e(3), e(3), e(3)] };
        let r = verify_closure(&s, &coarse).unwrap();
        assert!(r.is_valid(), "{r}");
        assert_eq!(closure_parts(&s, &coarse).closed, vec![e(0), e(3)]);

        let shrinking = ClosurePair { k: vec![e(0), e(0), e(2), e(3)] };
        assert!(verify_closure(&s, &shrinking).unwrap().violated("closure.extensive"));
    }

    #[test]
    fn regularity() {
        let s = powerset(2);
        let all: Vec<ElementId> = s.ids().collect();
        let m = DistributionTable::new(vec![0.0, 0.3, 0.7, 1.0]);
        assert!(check_regularity(&s, &m, &all, &all).unwrap().is_valid());
        let r = check_regularity(&s, &m, &[e(3)], &[e(0)]).unwrap();
        assert!(!r.is_valid());
        assert_eq!(r.first_violation().unwrap().1.witness, ["s1"]);
        assert!(check_regularity(&s, &DistributionTable::zero(4), &[e(3)], &[e(0)]).unwrap().is_valid());
        assert!(matches!(check_regularity(&s, &m, &[e(1)], &[e(0)]), Err(Error::Domain(_))));
    }

    #[test]
    fn compatibility_fails_for_incoherent_product() {
        // A 3-chain declared with a product that makes 0 < a < 1 commute with
        // ab = meet: decompositions of 1 are only {1} since nothing is orthogonal
        // to a except 0, so a·1 = a must come from {a} ⊂ C with {1} ⊂ C.
        let names = ["0", "a", "1"].iter().map(|s| s.to_string()).collect();
        let poset = FinitePoset::from_covers(names, &[(0, 1), (1, 2)]).unwrap();
        let s = Semilogic::from_meets(poset, |_, _| true).unwrap();
        let r = verify_semilogic(&s);
        assert!(r.violated("product.decomposition_compatible"), "{r}");
    }
}
