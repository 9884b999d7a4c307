//! Boolean semirings, their Stone representation by maximal filters,
//! systems of subsets with topologies, and representable distributions.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::order::{ElementId, FinitePoset};
use crate::report::VerificationReport;
use crate::semilogic::{
    mass, verify_distribution, verify_filter, verify_semilogic, DistributionTable, ElementSet, Filter,
    HomomorphismMap, Semilogic, DIST_TOL,
};

/// Subsets of a finite carrier `{0, .., n-1}`.
pub type PointSet = BTreeSet<usize>;

/// Exhaustive subset enumeration is only attempted up to this many elements.
const EXHAUSTIVE_LIMIT: usize = 20;
const PERFECTNESS_SCAN_LIMIT: usize = 8;

/// A distributive semilogic with an everywhere-defined product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanSemiring {
    base: Semilogic,
}

impl BooleanSemiring {
    /// Rejects the one-element structure, partial products, and any failure
    /// of the semilogic axioms or distributivity.
    pub fn new(base: Semilogic) -> Result<Self> {
        if base.len() < 2 {
            return Err(Error::Structural("the trivial semiring {0} has no points".into()));
        }
        let report = verify_boolean_semiring(&base);
        if let Some((axiom, v)) = report.first_violation() {
            return Err(Error::axiom(axiom, format!("at ({}): {}", v.witness.join(", "), v.detail)));
        }
        Ok(BooleanSemiring { base })
    }

    pub fn semilogic(&self) -> &Semilogic {
        &self.base
    }

    pub fn poset(&self) -> &FinitePoset {
        self.base.poset()
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ElementId> + Clone {
        self.base.ids()
    }

    pub fn label(&self, a: ElementId) -> &str {
        self.base.label(a)
    }

    pub fn meet(&self, a: ElementId, b: ElementId) -> ElementId {
        self.base.product(a, b).expect("product is total")
    }
}

/// Semilogic axioms, total product and `a ∧ (⋁ bᵢ) = ⋁ (a ∧ bᵢ)` over
/// summable families.
pub fn verify_boolean_semiring(s: &Semilogic) -> VerificationReport {
    let mut report = verify_semilogic(s);
    report.subject = "boolean semiring".into();
    let l = |x: ElementId| s.label(x).to_string();
    for a in s.ids() {
        for b in s.ids() {
            report.check("product.total").expect(s.commutes(a, b), || {
                (vec![l(a), l(b)], "product undefined".to_string())
            });
        }
    }
    report.check("distributive");
    let p = s.poset();
    for f in s.summable_families(s.len()).iter().filter(|f| f.members.len() >= 2) {
        for a in s.ids() {
            let lhs = p.meet(a, f.sum);
            let parts: Option<Vec<ElementId>> = f.members.iter().map(|&b| p.meet(a, b)).collect();
            let rhs = parts.and_then(|parts| p.join_all(&parts));
            report.check("distributive").expect(lhs.is_some() && lhs == rhs, || {
                let show = |x: Option<ElementId>| x.map(l).unwrap_or_else(|| "undefined".into());
                let mut w = vec![l(a)];
                w.extend(f.members.iter().map(|&b| l(b)));
                (w, format!("a∧(⋁bᵢ) = {} but ⋁(a∧bᵢ) = {}", show(lhs), show(rhs)))
            });
        }
    }
    report
}

fn is_maximal_filter(s: &Semilogic, members: &ElementSet) -> bool {
    match verify_filter(s, members) {
        Ok(r) => r.is_valid() && r.info.get("maximal").and_then(|v| v.as_bool()) == Some(true),
        Err(_) => false,
    }
}

/// All maximal filters in canonical order (by generating element).
///
/// Principal filters of atoms are tried first; if they do not account for
/// every nonzero element the search falls back to scanning all filters.
pub fn enumerate_maximal_filters(b: &BooleanSemiring) -> Vec<Filter> {
    let s = b.semilogic();
    let p = s.poset();
    let atoms = p.atoms().unwrap_or_default();
    let fast: Vec<Filter> = atoms
        .iter()
        .map(|&q| ElementSet::new(s.ids().filter(|&x| p.le(q, x)).collect()))
        .collect();
    let covered = s.ids().filter(|&x| x != s.zero()).all(|x| atoms.iter().any(|&q| p.le(q, x)));
    if covered && fast.iter().all(|f| is_maximal_filter(s, f)) {
        return fast;
    }
    if s.len() <= EXHAUSTIVE_LIMIT {
        maximal_filters_exhaustive(s)
    } else {
        // With a total product every finite filter is principal, generated by its least member.
        principal_maximal_filters(s)
    }
}

/// Maximal filters among the principal ones `↑g`, `g ≠ 0`.
fn principal_maximal_filters(s: &Semilogic) -> Vec<Filter> {
    let p = s.poset();
    s.ids()
        .filter(|&g| g != s.zero())
        .map(|g| ElementSet::new(s.ids().filter(|&x| p.le(g, x)).collect()))
        .filter(|f| is_maximal_filter(s, f))
        .collect()
}

/// Checks every subset against the filter conditions and the maximality
/// criterion. Exponential; refuses structures above 20 elements.
pub fn maximal_filters_exhaustive(s: &Semilogic) -> Vec<Filter> {
    let n = s.len();
    assert!(n <= EXHAUSTIVE_LIMIT, "exhaustive filter search limited to {EXHAUSTIVE_LIMIT} elements");
    let mut out: Vec<Filter> = (1u32..(1u32 << n))
        .map(|mask| ElementSet::new((0..n).filter(|i| mask & (1 << i) != 0).map(ElementId).collect()))
        .filter(|f| is_maximal_filter(s, f))
        .collect();
    out.sort_by_key(|f| generator(s, f));
    out
}

fn generator(s: &Semilogic, f: &Filter) -> Option<ElementId> {
    s.poset().least_of(&f.members)
}

#[derive(Debug, Clone)]
pub struct StoneRepresentation {
    /// The point set X₀.
    pub filters: Vec<Filter>,
    /// `h0[b]` = indices of the filters containing `b`.
    pub h0: Vec<PointSet>,
    pub point_labels: Vec<String>,
    pub report: VerificationReport,
}

impl StoneRepresentation {
    pub fn points(&self) -> usize {
        self.filters.len()
    }

    /// The image semiring `h0(B)` as a system of subsets of X₀.
    pub fn image(&self) -> SetSystem {
        let mut sets: Vec<PointSet> = Vec::new();
        for s in &self.h0 {
            if !sets.contains(s) {
                sets.push(s.clone());
            }
        }
        SetSystem::new(self.point_labels.clone(), sets).expect("image sets lie in X0")
    }
}

/// `h0(b) = {x : b ∈ x}` over the maximal filters, with every representation
/// property verified. A failure means non-boolean input slipped through.
pub fn stone_map(b: &BooleanSemiring) -> Result<StoneRepresentation> {
    let s = b.semilogic();
    let p = s.poset();
    let filters = enumerate_maximal_filters(b);
    let h0: Vec<PointSet> = s
        .ids()
        .map(|a| (0..filters.len()).filter(|&x| filters[x].contains(a)).collect())
        .collect();
    let point_labels: Vec<String> = filters
        .iter()
        .enumerate()
        .map(|(i, f)| match generator(s, f) {
            Some(g) => format!("↑{}", s.label(g)),
            None => format!("x{i}"),
        })
        .collect();
    let l = |x: ElementId| s.label(x).to_string();
    let mut report = VerificationReport::new("stone representation");
    report.check("stone.zero").expect(h0[s.zero().0].is_empty(), || {
        (vec![l(s.zero())], "h0(0) is not empty".to_string())
    });
    for a in s.ids() {
        for c in s.ids() {
            if p.le(a, c) {
                report.check("stone.monotone").expect(h0[a.0].is_subset(&h0[c.0]), || {
                    (vec![l(a), l(c)], "h0(a) not contained in h0(c)".to_string())
                });
            }
            let m = b.meet(a, c);
            let inter: PointSet = h0[a.0].intersection(&h0[c.0]).copied().collect();
            report.check("stone.meet").expect(h0[m.0] == inter, || {
                (vec![l(a), l(c)], "h0(a∧b) differs from h0(a)∩h0(b)".to_string())
            });
            if m == s.zero() {
                report.check("stone.disjointness").expect(inter.is_empty(), || {
                    (vec![l(a), l(c)], "disjoint elements with overlapping images".to_string())
                });
            }
            if a < c {
                report.check("stone.faithful").expect(h0[a.0] != h0[c.0], || {
                    (vec![l(a), l(c)], "distinct elements share an image".to_string())
                });
            }
            if let Some(d) = s.difference(c, a) {
                let diff: PointSet = h0[c.0].difference(&h0[a.0]).copied().collect();
                report.check("stone.subtraction").expect(h0[d.0] == diff, || {
                    (vec![l(c), l(a)], "h0(c - a) differs from h0(c) \\ h0(a)".to_string())
                });
            }
            if let Some(j) = p.join(a, c) {
                let uni: PointSet = h0[a.0].union(&h0[c.0]).copied().collect();
                report.check("stone.join").expect(h0[j.0] == uni, || {
                    (vec![l(a), l(c)], "h0(a∨b) differs from h0(a)∪h0(b)".to_string())
                });
            }
        }
    }
    for f in s.summable_families(s.len()) {
        let uni: PointSet = f.members.iter().flat_map(|m| h0[m.0].iter().copied()).collect();
        report.check("stone.sum").expect(h0[f.sum.0] == uni, || {
            (f.members.iter().map(|&m| l(m)).collect(), "h0(Σ) differs from the union".to_string())
        });
    }
    for x1 in 0..filters.len() {
        for x2 in 0..filters.len() {
            if x1 != x2 {
                let sep = s.ids().any(|a| h0[a.0].contains(&x1) && !h0[a.0].contains(&x2));
                report.check("stone.separating").expect(sep, || {
                    (
                        vec![point_labels[x1].clone(), point_labels[x2].clone()],
                        "no element separates the two points".to_string(),
                    )
                });
            }
        }
    }

    // Perfectness: the maximal filters of the image are exactly the point filters.
    let rep = StoneRepresentation {
        filters,
        h0,
        point_labels,
        report: VerificationReport::new("stone representation"),
    };
    let image = rep.image();
    let image_semilogic = image.to_semilogic()?;
    // Intersection is total on the image, so every filter is principal and
    // the principal ones suffice; the subset scan is only used where it is cheap.
    let mut image_filters: Vec<BTreeSet<usize>> = if image_semilogic.len() <= PERFECTNESS_SCAN_LIMIT {
        maximal_filters_exhaustive(&image_semilogic)
    } else {
        principal_maximal_filters(&image_semilogic)
    }
    .into_iter()
    .map(|f| f.members.iter().map(|m| m.0).collect())
    .collect();
    let mut point_filters: Vec<BTreeSet<usize>> = (0..rep.points())
        .map(|x| (0..image.sets.len()).filter(|&i| image.sets[i].contains(&x)).collect())
        .collect();
    image_filters.sort();
    point_filters.sort();
    report.check("stone.perfect").expect(image_filters == point_filters, || {
        (
            Vec::<String>::new(),
            format!(
                "image has {} maximal filters, {} come from points",
                image_filters.len(),
                image_filters.iter().filter(|f| point_filters.contains(f)).count()
            ),
        )
    });
    report.note("points", rep.points());

    if let Some((axiom, v)) = report.first_violation() {
        return Err(Error::Internal(format!(
            "stone representation fails {axiom} at ({}): {}",
            v.witness.join(", "),
            v.detail
        )));
    }
    Ok(StoneRepresentation { report, ..rep })
}

/// A family of subsets of a labeled finite carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    pub points: Vec<String>,
    pub sets: Vec<PointSet>,
}

impl SetSystem {
    pub fn new(points: Vec<String>, sets: Vec<PointSet>) -> Result<Self> {
        let n = points.len();
        if let Some(s) = sets.iter().find(|s| s.iter().any(|&x| x >= n)) {
            return Err(Error::Structural(format!("subset {s:?} leaves the carrier of {n} points")));
        }
        for (i, s) in sets.iter().enumerate() {
            if sets[..i].contains(s) {
                return Err(Error::Structural(format!("subset {s:?} listed twice")));
            }
        }
        Ok(SetSystem { points, sets })
    }

    /// All subsets of an `n`-point carrier, ordered by bitmask.
    pub fn powerset(points: Vec<String>) -> Self {
        let n = points.len();
        let sets = (0u64..(1u64 << n))
            .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
            .collect();
        SetSystem { points, sets }
    }

    pub fn index_of(&self, set: &PointSet) -> Option<usize> {
        self.sets.iter().position(|s| s == set)
    }

    pub fn set_label(&self, set: &PointSet) -> String {
        let inner: Vec<String> = set
            .iter()
            .map(|&x| self.points.get(x).cloned().unwrap_or_else(|| format!("#{x}")))
            .collect();
        format!("{{{}}}", inner.join(","))
    }

    /// Inclusion order with intersection as product where the intersection is a member.
    pub fn to_semilogic(&self) -> Result<Semilogic> {
        let labels: Vec<String> = self.sets.iter().map(|s| self.set_label(s)).collect();
        let le = self
            .sets
            .iter()
            .map(|a| self.sets.iter().map(|b| a.is_subset(b)).collect())
            .collect();
        let poset = FinitePoset::from_relation(labels, le)?;
        let prod = self
            .sets
            .iter()
            .map(|a| {
                self.sets
                    .iter()
                    .map(|b| {
                        let i: PointSet = a.intersection(b).copied().collect();
                        self.index_of(&i).map(ElementId)
                    })
                    .collect()
            })
            .collect();
        Semilogic::new(poset, prod)
    }
}

/// Open and closed families inside a ring of subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetTopology {
    pub ring: SetSystem,
    pub opens: Vec<PointSet>,
    pub closeds: Vec<PointSet>,
}

fn union_of<'a>(sets: impl Iterator<Item = &'a PointSet>) -> PointSet {
    sets.flat_map(|s| s.iter().copied()).collect()
}

fn intersection_of<'a>(mut sets: impl Iterator<Item = &'a PointSet>) -> Option<PointSet> {
    let first = sets.next()?.clone();
    Some(sets.fold(first, |acc, s| acc.intersection(s).copied().collect()))
}

/// Conditions 1)-3) for both families, the duality conditions and the
/// interior map laws. The info section carries the Hausdorff flag and the clopen ring.
pub fn verify_topology(t: &SubsetTopology) -> Result<VerificationReport> {
    let ring = &t.ring;
    for (what, fam) in [("open", &t.opens), ("closed", &t.closeds)] {
        if let Some(s) = fam.iter().find(|s| ring.index_of(s).is_none()) {
            return Err(Error::Structural(format!(
                "{what} set {} is not in the ring",
                ring.set_label(s)
            )));
        }
    }
    let lab = |s: &PointSet| ring.set_label(s);
    let (opens, closeds) = (&t.opens, &t.closeds);
    let mut report = VerificationReport::new("topology");

    let interior = |b: &PointSet| union_of(opens.iter().filter(|i| i.is_subset(b)));
    let closure = |b: &PointSet| intersection_of(closeds.iter().filter(|k| b.is_subset(k)));

    for b in &ring.sets {
        report.check("open.1_majorant").expect(opens.iter().any(|i| b.is_subset(i)), || {
            (vec![lab(b)], "no open set contains B".to_string())
        });
        let ib = interior(b);
        report.check("open.3_interior").expect(opens.contains(&ib), || {
            (vec![lab(b)], format!("I(B) = {} is not open", lab(&ib)))
        });
        let kb = closure(b);
        report.check("closed.3_closure").expect(kb.as_ref().is_some_and(|k| closeds.contains(k)), || {
            let d = match &kb {
                Some(k) => format!("K(B) = {} is not closed", lab(k)),
                None => "no closed set contains B".to_string(),
            };
            (vec![lab(b)], d)
        });
        report.check("interior.open_iff_fixed").expect((ib == *b) == opens.contains(b), || {
            (vec![lab(b)], "I(B) = B does not match openness".to_string())
        });
        for b2 in &ring.sets {
            let meet: PointSet = b.intersection(b2).copied().collect();
            if ring.index_of(&meet).is_some() {
                let lhs = interior(&meet);
                let rhs: PointSet = ib.intersection(&interior(b2)).copied().collect();
                report.check("interior.meet").expect(lhs == rhs, || {
                    (vec![lab(b), lab(b2)], "I(B1∩B2) differs from I(B1)∩I(B2)".to_string())
                });
            }
        }
    }
    for i1 in opens {
        for i2 in opens {
            let m: PointSet = i1.intersection(i2).copied().collect();
            report.check("open.2_intersection").expect(opens.contains(&m), || {
                (vec![lab(i1), lab(i2)], format!("intersection {} is not open", lab(&m)))
            });
        }
    }
    report.check("closed.1_empty").expect(closeds.iter().any(|k| k.is_empty()), || {
        (Vec::<String>::new(), "∅ is not closed".to_string())
    });
    for k1 in closeds {
        for k2 in closeds {
            let m: PointSet = k1.intersection(k2).copied().collect();
            report.check("closed.2_intersection").expect(closeds.contains(&m), || {
                (vec![lab(k1), lab(k2)], format!("intersection {} is not closed", lab(&m)))
            });
        }
    }
    report.check("duality.open");
    report.check("duality.closed");
    for i in opens {
        for k in closeds {
            if k.is_subset(i) {
                let d: PointSet = i.difference(k).copied().collect();
                report.check("duality.open").expect(opens.contains(&d), || {
                    (vec![lab(i), lab(k)], format!("I \\ K = {} is not open", lab(&d)))
                });
            }
            if i.is_subset(k) {
                let d: PointSet = k.difference(i).copied().collect();
                report.check("duality.closed").expect(closeds.contains(&d), || {
                    (vec![lab(k), lab(i)], format!("K \\ I = {} is not closed", lab(&d)))
                });
            }
        }
    }

    let from_above = ring
        .sets
        .iter()
        .all(|b| intersection_of(opens.iter().filter(|i| b.is_subset(i))).as_ref() == Some(b));
    let from_below = ring
        .sets
        .iter()
        .all(|b| union_of(closeds.iter().filter(|k| k.is_subset(b))) == *b);
    report.note("approximate_from_above", from_above);
    report.note("approximate_from_below", from_below);
    report.note("hausdorff", from_above && from_below);
    let clopen: Vec<String> = opens.iter().filter(|i| closeds.contains(i)).map(lab).collect();
    report.note("clopen", clopen);
    Ok(report)
}

/// A measure on the ring generated by the Stone image, stored by its blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentedMeasure {
    /// Minimal nonempty sets of the generated ring.
    pub blocks: Vec<PointSet>,
    pub masses: Vec<f64>,
}

impl RepresentedMeasure {
    /// `μ0(set)`, defined when `set` is a union of blocks.
    pub fn measure(&self, set: &PointSet) -> Option<f64> {
        let mut covered = PointSet::new();
        let mut total = 0.0;
        for (b, m) in self.blocks.iter().zip(&self.masses) {
            if b.is_subset(set) {
                covered.extend(b.iter().copied());
                total += m;
            } else if !b.is_disjoint(set) {
                return None;
            }
        }
        (covered == *set).then_some(total)
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }
}

/// Transfers `n` to `μ0` on the ring generated by `h0(B)` and checks `n = μ0 ∘ h0`.
pub fn represent_distribution(
    b: &BooleanSemiring,
    n: &DistributionTable,
) -> Result<(StoneRepresentation, RepresentedMeasure)> {
    let s = b.semilogic();
    let report = verify_distribution(s, n)?;
    if let Some((axiom, v)) = report.first_violation() {
        return Err(Error::axiom(axiom, format!("at ({}): {}", v.witness.join(", "), v.detail)));
    }
    let rep = stone_map(b)?;

    // Blocks: points grouped by which images contain them.
    let covered: PointSet = union_of(rep.h0.iter());
    let mut blocks: Vec<PointSet> = Vec::new();
    for &x in &covered {
        let sig: Vec<bool> = rep.h0.iter().map(|h| h.contains(&x)).collect();
        match blocks.iter_mut().find(|blk| {
            let y = *blk.iter().next().expect("blocks are nonempty");
            rep.h0.iter().map(|h| h.contains(&y)).collect::<Vec<_>>() == sig
        }) {
            Some(blk) => {
                blk.insert(x);
            }
            None => blocks.push(PointSet::from([x])),
        }
    }

    // Each image is a disjoint union of blocks; resolve block masses one unknown at a time.
    let members: Vec<Vec<usize>> = rep
        .h0
        .iter()
        .map(|h| (0..blocks.len()).filter(|&k| blocks[k].is_subset(h)).collect())
        .collect();
    let mut masses: Vec<Option<f64>> = vec![None; blocks.len()];
    loop {
        let mut progress = false;
        for a in s.ids() {
            let unknown: Vec<usize> = members[a.0].iter().copied().filter(|&k| masses[k].is_none()).collect();
            if unknown.len() == 1 {
                let known: f64 = members[a.0].iter().filter_map(|&k| masses[k]).sum();
                masses[unknown[0]] = Some(n.get(a) - known);
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    if let Some(k) = masses.iter().position(|m| m.is_none()) {
        return Err(Error::Domain(format!(
            "block {} of the generated ring is not determined by the distribution",
            rep.image().set_label(&blocks[k])
        )));
    }
    let mu = RepresentedMeasure {
        blocks,
        masses: masses.into_iter().map(|m| m.expect("resolved")).collect(),
    };

    for a in s.ids() {
        let img = &rep.h0[a.0];
        let got = mu.measure(img).unwrap_or(f64::NAN);
        if (got - n.get(a)).abs().is_nan() || (got - n.get(a)).abs() > DIST_TOL {
            let parts: Vec<String> = members[a.0]
                .iter()
                .map(|&k| rep.image().set_label(&mu.blocks[k]))
                .collect();
            return Err(Error::axiom(
                "representation.extension",
                format!(
                    "n({}) = {} but μ0 over the decomposition {} gives {got}",
                    s.label(a),
                    n.get(a),
                    parts.join(" + ")
                ),
            ));
        }
    }
    let m_n = mass(s, n);
    if (mu.total() - m_n).abs() > DIST_TOL {
        return Err(Error::axiom(
            "representation.mass",
            format!("‖μ0‖ = {} but ‖n‖ = {m_n}", mu.total()),
        ));
    }
    Ok((rep, mu))
}

/// The preimage map `f*` of a point map `f : X → Y`, from the ring on `Y`
/// into the ring on `X`.
#[derive(Debug, Clone)]
pub struct InducedHomomorphism {
    pub source: Semilogic,
    pub target: Semilogic,
    pub map: Vec<ElementId>,
}

impl InducedHomomorphism {
    pub fn as_map(&self) -> HomomorphismMap<'_> {
        HomomorphismMap {
            source: &self.source,
            target: &self.target,
            map: self.map.clone(),
        }
    }
}

/// `f[x]` is the image of point `x` of `domain_ring`'s carrier in
/// `codomain_ring`'s carrier. Every preimage must be a member of `domain_ring`.
pub fn induced_homomorphism(
    f: &[usize],
    domain_ring: &SetSystem,
    codomain_ring: &SetSystem,
) -> Result<InducedHomomorphism> {
    if f.len() != domain_ring.points.len() {
        return Err(Error::Structural(format!(
            "point map has {} entries for {} points",
            f.len(),
            domain_ring.points.len()
        )));
    }
    if let Some(&y) = f.iter().find(|&&y| y >= codomain_ring.points.len()) {
        return Err(Error::Structural(format!("point map value {y} outside the target carrier")));
    }
    let mut map = Vec::with_capacity(codomain_ring.sets.len());
    for set in &codomain_ring.sets {
        let pre: PointSet = (0..f.len()).filter(|&x| set.contains(&f[x])).collect();
        let idx = domain_ring.index_of(&pre).ok_or_else(|| {
            Error::Domain(format!(
                "map is not measurable: preimage of {} is {}, not in the ring",
                codomain_ring.set_label(set),
                domain_ring.set_label(&pre)
            ))
        })?;
        map.push(ElementId(idx));
    }
    Ok(InducedHomomorphism {
        source: codomain_ring.to_semilogic()?,
        target: domain_ring.to_semilogic()?,
        map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semilogic::{tests as sl, verify_homomorphism};

    fn ring(n: usize) -> BooleanSemiring {
        BooleanSemiring::new(sl::powerset(n)).unwrap()
    }

    fn pts(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i}")).collect()
    }

    #[test]
    fn maximal_filters_match_atoms() {
        for n in 1..=3 {
            let b = ring(n);
            let fs = enumerate_maximal_filters(&b);
            assert_eq!(fs.len(), n);
            assert_eq!(fs, maximal_filters_exhaustive(b.semilogic()));
        }
    }

    #[test]
    fn stone_on_powersets() {
        let b = ring(2);
        let rep = stone_map(&b).unwrap();
        assert_eq!(rep.points(), 2);
        // h0 is a bijection onto all subsets of X0
        let mut images = rep.h0.clone();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 4);
        assert!(rep.report.is_valid());
    }

    #[test]
    fn non_unital_ring() {
        // {∅, {p0}, {p1}} without the union: a semiring without unit.
        let sys = SetSystem::new(pts(2), vec![PointSet::new(), PointSet::from([0]), PointSet::from([1])]).unwrap();
        let b = BooleanSemiring::new(sys.to_semilogic().unwrap()).unwrap();
        let rep = stone_map(&b).unwrap();
        assert_eq!(rep.points(), 2);
        let n = DistributionTable::new(vec![0.0, 0.25, 0.5]);
        let (_, mu) = represent_distribution(&b, &n).unwrap();
        assert!((mu.total() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn represent_state() {
        let b = ring(2);
        let n = DistributionTable::new(vec![0.0, 0.3, 0.7, 1.0]);
        let (rep, mu) = represent_distribution(&b, &n).unwrap();
        let mut point_masses: Vec<f64> = (0..rep.points())
            .map(|x| mu.measure(&PointSet::from([x])).unwrap())
            .collect();
        point_masses.sort_by(f64::total_cmp);
        assert_eq!(point_masses, vec![0.3, 0.7]);
        let zero = represent_distribution(&b, &DistributionTable::zero(4)).unwrap().1;
        assert!(zero.masses.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn non_distributive_input_rejected() {
        let err = BooleanSemiring::new(sl::mo2()).unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { .. }), "{err}");
        assert!(matches!(BooleanSemiring::new(sl::powerset(0)), Err(Error::Structural(_))));
    }

    #[test]
    fn topologies() {
        let r = SetSystem::powerset(pts(2));
        let all = r.sets.clone();
        let discrete = SubsetTopology { ring: r.clone(), opens: all.clone(), closeds: all.clone() };
        let rep = verify_topology(&discrete).unwrap();
        assert!(rep.is_valid(), "{rep}");
        assert_eq!(rep.info["hausdorff"], true);

        let ends = vec![PointSet::new(), PointSet::from([0, 1])];
        let indiscrete = SubsetTopology { ring: r.clone(), opens: ends.clone(), closeds: ends };
        let rep = verify_topology(&indiscrete).unwrap();
        assert!(rep.is_valid(), "{rep}");
        assert_eq!(rep.info["hausdorff"], false);

        let r3 = SetSystem::powerset(pts(3));
        let opens = vec![PointSet::new(), PointSet::from([0, 1]), PointSet::from([1, 2]), PointSet::from([0, 1, 2])];
        let t = SubsetTopology { ring: r3.clone(), opens, closeds: r3.sets.clone() };
        let rep = verify_topology(&t).unwrap();
        assert!(rep.violated("open.2_intersection"));

        let stray = SubsetTopology { ring: r, opens: vec![PointSet::from([7])], closeds: vec![] };
        assert!(matches!(verify_topology(&stray), Err(Error::Structural(_))));
    }

    #[test]
    fn induced_homomorphisms() {
        let x = SetSystem::powerset(pts(3));
        let h = induced_homomorphism(&[0, 1, 2], &x, &x).unwrap();
        assert_eq!(h.map, (0..8).map(ElementId).collect::<Vec<_>>());
        assert!(verify_homomorphism(&h.as_map()).is_valid());

        let pt = SetSystem::powerset(pts(1));
        let h = induced_homomorphism(&[0, 0, 0], &x, &pt).unwrap();
        assert_eq!(x.sets[h.map[1].0], PointSet::from([0, 1, 2]));

        // {1,2,3} -> {1,2} merging 2 and 3
        let y = SetSystem::powerset(pts(2));
        let h = induced_homomorphism(&[0, 1, 1], &x, &y).unwrap();
        let pre: Vec<PointSet> = h.map.iter().map(|e| x.sets[e.0].clone()).collect();
        assert_eq!(pre, vec![PointSet::new(), PointSet::from([0]), PointSet::from([1, 2]), PointSet::from([0, 1, 2])]);
        assert!(verify_homomorphism(&h.as_map()).is_valid());

        let coarse = SetSystem::new(pts(3), vec![PointSet::new(), PointSet::from([0, 1, 2])]).unwrap();
        assert!(matches!(induced_homomorphism(&[0, 1, 1], &coarse, &y), Err(Error::Domain(_))));
    }
}
