//! Clans: finite families of orthoprojections with an absorbing unit, read as
//! operator logics. Vector and operator states, operator distributions and
//! observables over boolean semirings live here too.

use serde::Serialize;

use crate::boolean_rep::BooleanSemiring;
use crate::error::{Error, Result};
use crate::matrix::{
    distance, is_orthoprojection, min_eigenvalue, range_join, range_meet, ComplexMatrix, ToleranceConfig, C64,
};
use crate::order::{ElementId, FinitePoset};
use crate::ortho::OrthoLogic;
use crate::report::VerificationReport;
use crate::semilogic::DistributionTable;

#[derive(Debug, Clone)]
pub struct Clan {
    dim: usize,
    labels: Vec<String>,
    projections: Vec<ComplexMatrix>,
    unit: usize,
}

impl Clan {
    /// Shape checks only; the projection and unit laws are left to [`verify_clan`].
    pub fn new(labels: Vec<String>, projections: Vec<ComplexMatrix>, unit: &str) -> Result<Self> {
        if labels.len() != projections.len() {
            return Err(Error::Structural(format!(
                "{} labels for {} projections",
                labels.len(),
                projections.len()
            )));
        }
        let dim = projections
            .first()
            .map(|p| p.rows())
            .ok_or_else(|| Error::Structural("a clan needs at least one member".into()))?;
        for (l, p) in labels.iter().zip(&projections) {
            if p.rows() != dim || p.cols() != dim {
                return Err(Error::Structural(format!(
                    "member {l} is {}x{}, expected {dim}x{dim}",
                    p.rows(),
                    p.cols()
                )));
            }
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Structural(format!("duplicate clan label {l}")));
            }
        }
        let unit = labels
            .iter()
            .position(|l| l == unit)
            .ok_or_else(|| Error::Structural(format!("unit {unit} is not a member")))?;
        Ok(Clan {
            dim,
            labels,
            projections,
            unit,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn projections(&self) -> &[ComplexMatrix] {
        &self.projections
    }

    pub fn member(&self, i: usize) -> &ComplexMatrix {
        &self.projections[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn unit(&self) -> &ComplexMatrix {
        &self.projections[self.unit]
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    /// Index of the member equal to `m` within `eps`.
    pub fn find(&self, m: &ComplexMatrix, tol: &ToleranceConfig) -> Option<usize> {
        self.projections.iter().position(|p| distance(p, m) <= tol.eps)
    }

    /// `A <= B` iff `AB = A`.
    pub fn le(&self, a: usize, b: usize, tol: &ToleranceConfig) -> bool {
        distance(&(&self.projections[a] * &self.projections[b]), &self.projections[a]) <= tol.eps
    }

    pub fn orthogonal(&self, a: usize, b: usize, tol: &ToleranceConfig) -> bool {
        (&self.projections[a] * &self.projections[b]).op_norm() <= tol.eps
    }

    pub fn commute(&self, a: usize, b: usize, tol: &ToleranceConfig) -> bool {
        let (pa, pb) = (&self.projections[a], &self.projections[b]);
        distance(&(pa * pb), &(pb * pa)) <= tol.eps
    }

    /// The clan as an ortho-logic: the order `AB = A` with negation `P - A`.
    /// Needs the clan to contain the complement of each member.
    pub fn to_logic(&self, tol: &ToleranceConfig) -> Result<OrthoLogic> {
        let n = self.len();
        let le = (0..n).map(|a| (0..n).map(|b| self.le(a, b, tol)).collect()).collect();
        let poset = FinitePoset::from_relation(self.labels.clone(), le)?;
        let neg = (0..n)
            .map(|a| {
                let c = self.unit() - &self.projections[a];
                self.find(&c, tol)
                    .map(ElementId)
                    .ok_or_else(|| Error::Domain(format!("complement P - {} is not a member", self.labels[a])))
            })
            .collect::<Result<Vec<_>>>()?;
        OrthoLogic::from_negation(poset, neg)
    }
}

/// Pairs of labels `[x, y]` for which a relation holds.
fn relation_table(c: &Clan, rel: impl Fn(usize, usize) -> bool, symmetric: bool) -> Vec<[String; 2]> {
    let n = c.len();
    let mut out = Vec::new();
    for a in 0..n {
        let start = if symmetric { a + 1 } else { 0 };
        for b in start..n {
            if a != b && rel(a, b) {
                out.push([c.labels[a].clone(), c.labels[b].clone()]);
            }
        }
    }
    out
}

/// Projection and unit laws with the order, orthogonality and commutation
/// tables. When the laws hold and the clan is meet/join closed, the report
/// also records whether it is distributive.
pub fn verify_clan(c: &Clan, tol: &ToleranceConfig) -> VerificationReport {
    let mut report = member_checks(c, tol);
    report.note("order", relation_table(c, |a, b| c.le(a, b, tol), false));
    report.note("orthogonal", relation_table(c, |a, b| c.orthogonal(a, b, tol), true));
    report.note("commuting", relation_table(c, |a, b| c.commute(a, b, tol), true));
    if report.is_valid() {
        let dist = match theorem_2_4_check(c, tol) {
            Ok(t) => serde_json::Value::Bool(t.distributive),
            Err(_) => serde_json::Value::Null,
        };
        report.note("distributive", dist);
    }
    report
}

fn member_checks(c: &Clan, tol: &ToleranceConfig) -> VerificationReport {
    let mut report = VerificationReport::new("clan");
    let ok_members: Vec<bool> = c
        .projections
        .iter()
        .map(|p| is_orthoprojection(p, tol).unwrap_or(false))
        .collect();
    {
        let chk = report.check("clan.orthoprojection");
        for (i, ok) in ok_members.iter().enumerate() {
            let p = &c.projections[i];
            chk.expect(*ok, || {
                (
                    vec![c.labels[i].clone()],
                    format!(
                        "‖A - A*‖ = {:.3e}, ‖A² - A‖ = {:.3e}",
                        p.hermitian_residual(),
                        distance(&(p * p), p)
                    ),
                )
            });
        }
    }
    let unit = c.unit();
    let unit_norm = unit.op_norm();
    report
        .check("clan.unit_nonzero")
        .expect(unit_norm > tol.eps, || (vec![c.labels[c.unit].clone()], "the unit projection is 0".into()));
    {
        let chk = report.check("clan.unit_absorbs");
        for (i, p) in c.projections.iter().enumerate() {
            let left = distance(&(unit * p), p);
            let right = distance(&(p * unit), p);
            chk.expect(left.max(right) <= tol.eps, || {
                (
                    vec![c.labels[i].clone()],
                    format!("‖PA - A‖ = {left:.3e}, ‖AP - A‖ = {right:.3e}"),
                )
            });
        }
    }
    report
}

fn push_missing(c: &Clan, missing: &mut Vec<(String, ComplexMatrix)>, name: String, m: ComplexMatrix, tol: &ToleranceConfig) {
    if c.find(&m, tol).is_none() && !missing.iter().any(|(_, x)| distance(x, &m) <= tol.eps) {
        missing.push((name, m));
    }
}

/// Range meets and joins of members that the clan does not contain.
pub fn missing_closure(c: &Clan, tol: &ToleranceConfig) -> Result<Vec<(String, ComplexMatrix)>> {
    let mut missing = Vec::new();
    let n = c.len();
    for a in 0..n {
        for b in a + 1..n {
            let (pa, pb) = (&c.projections[a], &c.projections[b]);
            push_missing(c, &mut missing, format!("{} ∧ {}", c.labels[a], c.labels[b]), range_meet(pa, pb, tol)?, tol);
            push_missing(c, &mut missing, format!("{} ∨ {}", c.labels[a], c.labels[b]), range_join(pa, pb, tol)?, tol);
        }
    }
    Ok(missing)
}

/// Complements `P - A` that the clan does not contain.
pub fn missing_complements(c: &Clan, tol: &ToleranceConfig) -> Vec<(String, ComplexMatrix)> {
    let mut missing = Vec::new();
    for a in 0..c.len() {
        push_missing(c, &mut missing, format!("P - {}", c.labels[a]), c.unit() - &c.projections[a], tol);
    }
    missing
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClanWitness {
    pub labels: Vec<String>,
    pub detail: String,
    /// Largest entry modulus of `P₁P₂` for a criterion witness.
    pub product_max_entry: Option<f64>,
    /// Operator norm of `P₁P₂` for a criterion witness.
    pub product_op_norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributivityCheck {
    pub distributive: bool,
    /// `P₁ ∧ P₂ = 0 ⟹ P₁P₂ = 0` for all members.
    pub criterion: bool,
    pub distributivity_witness: Option<ClanWitness>,
    pub criterion_witness: Option<ClanWitness>,
}

/// Lattice distributivity over all triples against the orthogonality
/// criterion over all pairs.
///
/// The clan must be closed under range meets and joins. Complements are not
/// demanded, but the equivalence rests on them: two skew lines with 0 and I
/// form a distributive lattice whose members do not multiply to 0. When the
/// two sides disagree on a clan lacking complements, the missing complements
/// are reported as a domain error; on a complemented clan a disagreement is
/// an internal error.
pub fn theorem_2_4_check(c: &Clan, tol: &ToleranceConfig) -> Result<DistributivityCheck> {
    let report = member_checks(c, tol);
    if let Some((axiom, v)) = report.first_violation() {
        return Err(Error::Domain(format!(
            "not a valid clan: {axiom} fails at {}",
            v.witness.join(", ")
        )));
    }
    let missing = missing_closure(c, tol)?;
    if !missing.is_empty() {
        let names: Vec<&str> = missing.iter().map(|(n, _)| n.as_str()).collect();
        return Err(Error::Domain(format!(
            "clan is not closed under meet and join; missing {}",
            names.join("; ")
        )));
    }
    let n = c.len();
    let mut meet = vec![vec![0usize; n]; n];
    let mut join = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            let (pa, pb) = (&c.projections[a], &c.projections[b]);
            meet[a][b] = c.find(&range_meet(pa, pb, tol)?, tol).expect("closure verified");
            join[a][b] = c.find(&range_join(pa, pb, tol)?, tol).expect("closure verified");
        }
    }
    let zero = c
        .find(&ComplexMatrix::zeros(c.dim, c.dim), tol)
        .ok_or_else(|| Error::Domain("clan does not contain 0".into()))?;

    let mut distributivity_witness = None;
    'outer: for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                let lhs = meet[a][join[b][d]];
                let rhs = join[meet[a][b]][meet[a][d]];
                if lhs != rhs {
                    distributivity_witness = Some(ClanWitness {
                        labels: vec![c.labels[a].clone(), c.labels[b].clone(), c.labels[d].clone()],
                        detail: format!(
                            "a ∧ (b ∨ c) = {} but (a ∧ b) ∨ (a ∧ c) = {}",
                            c.labels[lhs], c.labels[rhs]
                        ),
                        product_max_entry: None,
                        product_op_norm: None,
                    });
                    break 'outer;
                }
            }
        }
    }

    let mut criterion_witness = None;
    'pairs: for a in 0..n {
        for b in a + 1..n {
            if meet[a][b] != zero {
                continue;
            }
            let prod = &c.projections[a] * &c.projections[b];
            let norm = prod.op_norm();
            if norm > tol.eps {
                criterion_witness = Some(ClanWitness {
                    labels: vec![c.labels[a].clone(), c.labels[b].clone()],
                    detail: format!("meet is 0 but ‖P₁P₂‖ = {norm:.6} (largest entry {:.6})", prod.max_abs()),
                    product_max_entry: Some(prod.max_abs()),
                    product_op_norm: Some(norm),
                });
                break 'pairs;
            }
        }
    }

    let out = DistributivityCheck {
        distributive: distributivity_witness.is_none(),
        criterion: criterion_witness.is_none(),
        distributivity_witness,
        criterion_witness,
    };
    if out.distributive != out.criterion {
        let complements = missing_complements(c, tol);
        if !complements.is_empty() {
            let names: Vec<&str> = complements.iter().map(|(n, _)| n.as_str()).collect();
            return Err(Error::Domain(format!(
                "distributive = {} but criterion = {}; the equivalence needs complements, missing {}",
                out.distributive,
                out.criterion,
                names.join("; ")
            )));
        }
        return Err(Error::Internal(format!(
            "distributivity ({}) and the orthogonality criterion ({}) disagree",
            out.distributive, out.criterion
        )));
    }
    Ok(out)
}

fn check_unit_vector(c: &Clan, xi: &[C64], tol: &ToleranceConfig) -> Result<()> {
    if xi.len() != c.dim {
        return Err(Error::Domain(format!("vector has length {}, clan dimension is {}", xi.len(), c.dim)));
    }
    let norm = ComplexMatrix::inner(xi, xi).re.sqrt();
    if (norm - 1.0).abs() > tol.eps {
        return Err(Error::Domain(format!("state vector has norm {norm}, expected 1")));
    }
    let pxi = c.unit().apply(xi);
    let off: f64 = pxi.iter().zip(xi).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    if off > tol.eps {
        return Err(Error::Domain(format!("Pξ ≠ ξ (residual {off:.3e})")));
    }
    Ok(())
}

/// `A ↦ (Aξ, ξ)`, checked as a state on the clan.
pub fn vector_state(c: &Clan, xi: &[C64], tol: &ToleranceConfig) -> Result<DistributionTable> {
    check_unit_vector(c, xi, tol)?;
    let values = c
        .projections
        .iter()
        .map(|a| ComplexMatrix::inner(&a.apply(xi), xi).re)
        .collect();
    let table = DistributionTable::new(values);
    let report = verify_clan_state(c, &table, tol);
    if let Some((axiom, v)) = report.first_violation() {
        return Err(Error::Internal(format!("vector state fails {axiom}: {}", v.detail)));
    }
    Ok(table)
}

/// Positivity, additivity over orthogonal members whose sum is a member, and `ρ(P) = 1`.
pub fn verify_clan_state(c: &Clan, table: &DistributionTable, tol: &ToleranceConfig) -> VerificationReport {
    let mut report = VerificationReport::new("clan state");
    let n = c.len();
    {
        let chk = report.check("state.positive");
        for a in 0..n {
            let v = table.get(ElementId(a));
            chk.expect(v >= -tol.eps, || (vec![c.labels[a].clone()], format!("ρ = {v}")));
        }
    }
    {
        let chk = report.check("state.additive");
        for a in 0..n {
            for b in a + 1..n {
                if !c.orthogonal(a, b, tol) {
                    continue;
                }
                let Some(s) = c.find(&(&c.projections[a] + &c.projections[b]), tol) else {
                    continue;
                };
                let (va, vb, vs) = (table.get(ElementId(a)), table.get(ElementId(b)), table.get(ElementId(s)));
                chk.expect((vs - va - vb).abs() <= tol.eps, || {
                    (
                        vec![c.labels[a].clone(), c.labels[b].clone()],
                        format!("ρ(A + B) = {vs} but ρ(A) + ρ(B) = {}", va + vb),
                    )
                });
            }
        }
    }
    let vp = table.get(ElementId(c.unit));
    report
        .check("state.normalized")
        .expect((vp - 1.0).abs() <= tol.eps, || (vec![c.labels[c.unit].clone()], format!("ρ(P) = {vp}")));
    report
}

/// `F : H → E`, a `dim_E × dim_H` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorDistribution {
    pub f: ComplexMatrix,
}

impl OperatorDistribution {
    pub fn new(f: ComplexMatrix) -> Self {
        OperatorDistribution { f }
    }

    /// The vector case `F = ξ` with a one-dimensional `H`.
    pub fn from_vector(xi: &[C64]) -> Self {
        OperatorDistribution {
            f: ComplexMatrix::column_vector(xi),
        }
    }

    pub fn dim_h(&self) -> usize {
        self.f.cols()
    }

    pub fn isometry_residual(&self) -> f64 {
        distance(&(&self.f.adjoint() * &self.f), &ComplexMatrix::identity(self.f.cols()))
    }
}

/// `F*F = I` and `FF* <= P`.
pub fn is_operator_state(c: &Clan, f: &OperatorDistribution, tol: &ToleranceConfig) -> Result<bool> {
    if f.f.rows() != c.dim {
        return Err(Error::Domain(format!("F has {} rows, clan dimension is {}", f.f.rows(), c.dim)));
    }
    if f.isometry_residual() > tol.eps {
        return Ok(false);
    }
    let ffstar = &f.f * &f.f.adjoint();
    Ok(min_eigenvalue(&(c.unit() - &ffstar))? >= -tol.eps)
}

/// `A ↦ F*AF`. For operator states also checks `ρ^F(P) = I`.
pub fn operator_distribution(
    c: &Clan,
    f: &OperatorDistribution,
    tol: &ToleranceConfig,
) -> Result<Vec<(String, ComplexMatrix)>> {
    let state = is_operator_state(c, f, tol)?;
    let fstar = f.f.adjoint();
    let table: Vec<(String, ComplexMatrix)> = c
        .labels
        .iter()
        .zip(&c.projections)
        .map(|(l, a)| (l.clone(), &(&fstar * a) * &f.f))
        .collect();
    if state {
        let r = distance(&table[c.unit].1, &ComplexMatrix::identity(f.dim_h()));
        if r > tol.eps {
            return Err(Error::Internal(format!("operator state with ‖ρ(P) - I‖ = {r:.3e}")));
        }
    }
    Ok(table)
}

/// A map from the events of a boolean semiring to clan members.
#[derive(Debug, Clone)]
pub struct ClanObservable<'a> {
    pub source: &'a BooleanSemiring,
    pub clan: &'a Clan,
    /// Clan member index for each event.
    pub map: Vec<usize>,
}

impl<'a> ClanObservable<'a> {
    pub fn new(source: &'a BooleanSemiring, clan: &'a Clan, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() || map.iter().any(|&i| i >= clan.len()) {
            return Err(Error::Structural("observable must send every event to a clan member".into()));
        }
        Ok(ClanObservable { source, clan, map })
    }

    pub fn image(&self, b: ElementId) -> &ComplexMatrix {
        self.clan.member(self.map[b.0])
    }
}

/// `m^F(B) = F* h(B) F` over all events.
pub fn observable_opd(h: &ClanObservable<'_>, f: &OperatorDistribution) -> Vec<ComplexMatrix> {
    let fstar = f.f.adjoint();
    h.source.ids().map(|b| &(&fstar * h.image(b)) * &f.f).collect()
}

/// Homomorphism laws at operator level, `h(E)F = F`, and the induced
/// operator distribution `m^F` with `0 <= m^F(B) <= I`, `m^F(E) = I` and
/// atoms summing to `I`. Test vectors `η` yield the scalar measures
/// `m^η(B) = (h(B)Fη, Fη)`, recorded in the report.
pub fn verify_observable(
    h: &ClanObservable<'_>,
    f: &OperatorDistribution,
    test_vectors: &[Vec<C64>],
    tol: &ToleranceConfig,
) -> Result<VerificationReport> {
    if f.f.rows() != h.clan.dim() {
        return Err(Error::Domain(format!("F has {} rows, clan dimension is {}", f.f.rows(), h.clan.dim())));
    }
    if let Some(eta) = test_vectors.iter().find(|v| v.len() != f.dim_h()) {
        return Err(Error::Domain(format!("test vector of length {}, expected {}", eta.len(), f.dim_h())));
    }
    let b = h.source;
    let s = b.semilogic();
    let top = b
        .poset()
        .top()
        .ok_or_else(|| Error::Domain("the event semiring has no unit E".into()))?;
    let mut report = VerificationReport::new("observable");
    let label = |x: ElementId| b.label(x).to_string();

    let z = h.image(s.zero()).op_norm();
    report
        .check("observable.zero")
        .expect(z <= tol.eps, || (vec![label(s.zero())], format!("‖h(0)‖ = {z:.3e}")));
    let mut worst_add = 0.0f64;
    let mut worst_mul = 0.0f64;
    for x in b.ids() {
        for y in b.ids() {
            if y.0 <= x.0 {
                continue;
            }
            let meet = b.meet(x, y);
            let r = distance(h.image(meet), &(h.image(x) * h.image(y)));
            worst_mul = worst_mul.max(r);
            report.check("observable.multiplicative").expect(r <= tol.eps, || {
                (vec![label(x), label(y)], format!("‖h(A ∧ B) - h(A)h(B)‖ = {r:.3e}"))
            });
            if meet != s.zero() {
                continue;
            }
            if let Some(sum) = s.sum(&[x, y]) {
                let r = distance(h.image(sum), &(h.image(x) + h.image(y)));
                worst_add = worst_add.max(r);
                report.check("observable.additive").expect(r <= tol.eps, || {
                    (vec![label(x), label(y)], format!("‖h(A + B) - h(A) - h(B)‖ = {r:.3e}"))
                });
            }
        }
    }
    report.check("observable.additive");
    report.check("observable.multiplicative");
    let norm_res = distance(&(h.image(top) * &f.f), &f.f);
    report
        .check("observable.normalization")
        .expect(norm_res <= tol.eps, || (vec![label(top)], format!("‖h(E)F - F‖ = {norm_res:.3e}")));

    let opd = observable_opd(h, f);
    let dh = f.dim_h();
    let id = ComplexMatrix::identity(dh);
    {
        let chk = report.check("opd.bounded");
        for x in b.ids() {
            let m = &opd[x.0];
            let lo = min_eigenvalue(&m.hermitian_part())?;
            let hi = min_eigenvalue(&(&id - m).hermitian_part())?;
            chk.expect(lo >= -tol.eps && hi >= -tol.eps, || {
                (vec![label(x)], format!("spectrum of m^F(B) leaves [0, 1] (λmin = {lo:.3e}, 1 - λmax = {hi:.3e})"))
            });
        }
    }
    let r = distance(&opd[top.0], &id);
    report
        .check("opd.normalized")
        .expect(r <= tol.eps, || (vec![label(top)], format!("‖m^F(E) - I‖ = {r:.3e}")));
    let atoms = b.poset().atoms().unwrap_or_default();
    let mut total = ComplexMatrix::zeros(dh, dh);
    for a in &atoms {
        total = &total + &opd[a.0];
    }
    let r = distance(&total, &id);
    report.check("opd.atoms_sum").expect(r <= tol.eps, || {
        (atoms.iter().map(|&a| label(a)).collect(), format!("‖Σ m^F(atom) - I‖ = {r:.3e}"))
    });

    let measures: Vec<Vec<(String, f64)>> = test_vectors
        .iter()
        .map(|eta| {
            let feta = f.f.apply(eta);
            b.ids()
                .map(|x| (label(x), ComplexMatrix::inner(&h.image(x).apply(&feta), &feta).re))
                .collect()
        })
        .collect();
    report.note("residual.additive", worst_add);
    report.note("residual.multiplicative", worst_mul);
    report.note("residual.normalization", norm_res);
    report.note("induced_measures", measures);
    report.note("opd", b.ids().map(|x| (label(x), opd[x.0].to_pairs())).collect::<Vec<_>>());
    Ok(report)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::boolean_rep::SetSystem;
    use crate::ortho::{boolean_criterion, is_distributive};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn m(vals: &[f64]) -> ComplexMatrix {
        let n = (vals.len() as f64).sqrt() as usize;
        ComplexMatrix::from_real(n, n, vals)
    }

    pub(crate) fn mo2_clan() -> Clan {
        Clan::new(
            ["0", "p1", "p2", "q1", "q2", "I"].map(String::from).to_vec(),
            vec![
                m(&[0.0, 0.0, 0.0, 0.0]),
                m(&[1.0, 0.0, 0.0, 0.0]),
                m(&[0.0, 0.0, 0.0, 1.0]),
                m(&[0.5, 0.5, 0.5, 0.5]),
                m(&[0.5, -0.5, -0.5, 0.5]),
                m(&[1.0, 0.0, 0.0, 1.0]),
            ],
            "I",
        )
        .unwrap()
    }

    pub(crate) fn diagonal_clan(n: usize) -> Clan {
        let mut labels = Vec::new();
        let mut mats = Vec::new();
        for mask in 0..(1usize << n) {
            labels.push(format!("d{mask}"));
            let diag: Vec<f64> = (0..n).map(|i| ((mask >> i) & 1) as f64).collect();
            mats.push(ComplexMatrix::diag(&diag));
        }
        let unit = format!("d{}", (1 << n) - 1);
        Clan::new(labels, mats, &unit).unwrap()
    }

    #[test]
    fn mo2_clan_is_valid_and_not_distributive() {
        let c = mo2_clan();
        let r = verify_clan(&c, &tol());
        assert!(r.is_valid(), "{r}");
        assert_eq!(r.info["distributive"], serde_json::Value::Bool(false));
        let t = theorem_2_4_check(&c, &tol()).unwrap();
        assert!(!t.distributive && !t.criterion);
        let w = t.criterion_witness.unwrap();
        assert_eq!(w.labels, vec!["p1", "q1"]);
        assert!((w.product_max_entry.unwrap() - 0.5).abs() < 1e-12);
        assert!((w.product_op_norm.unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn diagonal_clans_are_distributive() {
        for n in 1..=2 {
            let t = theorem_2_4_check(&diagonal_clan(n), &tol()).unwrap();
            assert!(t.distributive && t.criterion);
        }
        let three = Clan::new(
            ["0", "P", "I"].map(String::from).to_vec(),
            vec![ComplexMatrix::zeros(2, 2), ComplexMatrix::diag(&[1.0, 0.0]), ComplexMatrix::identity(2)],
            "I",
        )
        .unwrap();
        assert!(verify_clan(&three, &tol()).is_valid());
        let t = theorem_2_4_check(&three, &tol()).unwrap();
        assert!(t.distributive && t.criterion);
        let sub = Clan::new(
            ["0", "P"].map(String::from).to_vec(),
            vec![ComplexMatrix::zeros(2, 2), ComplexMatrix::diag(&[1.0, 0.0])],
            "P",
        )
        .unwrap();
        let t = theorem_2_4_check(&sub, &tol()).unwrap();
        assert!(t.distributive && t.criterion);
    }

    #[test]
    fn missing_closure_is_listed() {
        let c = Clan::new(
            ["0", "p1", "q1"].map(String::from).to_vec(),
            vec![m(&[0.0, 0.0, 0.0, 0.0]), m(&[1.0, 0.0, 0.0, 0.0]), m(&[0.5, 0.5, 0.5, 0.5])],
            "p1",
        )
        .unwrap();
        // q1 is not absorbed by the unit p1, so the clan is rejected first.
        assert!(matches!(theorem_2_4_check(&c, &tol()), Err(Error::Domain(_))));
        let c = Clan::new(
            ["0", "p1", "q1", "I"].map(String::from).to_vec(),
            vec![m(&[0.0, 0.0, 0.0, 0.0]), m(&[1.0, 0.0, 0.0, 0.0]), m(&[0.5, 0.5, 0.5, 0.5]), m(&[1.0, 0.0, 0.0, 1.0])],
            "I",
        )
        .unwrap();
        assert!(missing_closure(&c, &tol()).unwrap().is_empty());
        // Skew lines with 0 and I: a distributive lattice that fails the criterion.
        let err = theorem_2_4_check(&c, &tol()).unwrap_err().to_string();
        assert!(err.contains("P - p1") && err.contains("P - q1"), "{err}");

        let c = Clan::new(
            ["0", "p1", "p2", "q1", "I"].map(String::from).to_vec(),
            vec![
                m(&[0.0, 0.0, 0.0, 0.0]),
                m(&[1.0, 0.0, 0.0, 0.0]),
                m(&[0.0, 0.0, 0.0, 1.0]),
                m(&[0.5, 0.5, 0.5, 0.5]),
                m(&[1.0, 0.0, 0.0, 1.0]),
            ],
            "I",
        )
        .unwrap();
        // Not complemented either, but here both sides fail together.
        let t = theorem_2_4_check(&c, &tol()).unwrap();
        assert!(!t.distributive && !t.criterion);
    }

    #[test]
    fn non_idempotent_member_is_witnessed() {
        let c = Clan::new(
            ["0", "X", "I"].map(String::from).to_vec(),
            vec![ComplexMatrix::zeros(2, 2), ComplexMatrix::diag(&[2.0, 0.0]), ComplexMatrix::identity(2)],
            "I",
        )
        .unwrap();
        let r = verify_clan(&c, &tol());
        let (axiom, v) = r.first_violation().unwrap();
        assert_eq!(axiom, "clan.orthoprojection");
        assert_eq!(v.witness, vec!["X"]);
    }

    #[test]
    fn dimension_mismatch_is_structural() {
        let e = Clan::new(
            ["a", "b"].map(String::from).to_vec(),
            vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)],
            "a",
        );
        assert!(matches!(e, Err(Error::Structural(_))));
    }

    #[test]
    fn clan_logic_matches_operator_criterion() {
        let t = tol();
        let lg = mo2_clan().to_logic(&t).unwrap();
        assert!(!is_distributive(&lg).holds);
        assert!(!boolean_criterion(&lg).holds);
        let lg = diagonal_clan(2).to_logic(&t).unwrap();
        assert!(is_distributive(&lg).holds);
    }

    #[test]
    fn vector_states() {
        let c = mo2_clan();
        let e1 = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let table = vector_state(&c, &e1, &tol()).unwrap();
        assert_eq!(table.get(ElementId(1)), 1.0);
        assert!((table.get(ElementId(3)) - 0.5).abs() < 1e-15);
        assert_eq!(table.get(ElementId(0)), 0.0);
        let long = vec![C64::new(2.0, 0.0), C64::new(0.0, 0.0)];
        assert!(matches!(vector_state(&c, &long, &tol()), Err(Error::Domain(_))));
    }

    #[test]
    fn operator_distributions() {
        let c = mo2_clan();
        let t = tol();
        let id = OperatorDistribution::new(ComplexMatrix::identity(2));
        for (i, (_, m)) in operator_distribution(&c, &id, &t).unwrap().iter().enumerate() {
            assert!(distance(m, c.member(i)) < 1e-15);
        }
        let xi = vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let vec_table = vector_state(&c, &xi, &t).unwrap();
        let op = operator_distribution(&c, &OperatorDistribution::from_vector(&xi), &t).unwrap();
        for (i, (_, m)) in op.iter().enumerate() {
            assert!((m[(0, 0)].re - vec_table.get(ElementId(i))).abs() < 1e-14);
        }
        let bad = OperatorDistribution::new(ComplexMatrix::identity(3));
        assert!(matches!(operator_distribution(&c, &bad, &t), Err(Error::Domain(_))));
    }

    fn two_point_observable() -> (BooleanSemiring, Clan) {
        let ring = SetSystem::powerset(vec!["1".into(), "2".into()]).to_semilogic().unwrap();
        (BooleanSemiring::new(ring).unwrap(), diagonal_clan(2))
    }

    #[test]
    fn observables() {
        let t = tol();
        let (b, c) = two_point_observable();
        // powerset element k is the bitmask k, matching diagonal_clan's order.
        let h = ClanObservable::new(&b, &c, vec![0, 1, 2, 3]).unwrap();
        let f = OperatorDistribution::new(ComplexMatrix::identity(2));
        let r = verify_observable(&h, &f, &[vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]], &t).unwrap();
        assert!(r.is_valid(), "{r}");
        let opd = observable_opd(&h, &f);
        assert!(distance(&opd[1], c.member(1)) < 1e-15);

        let embed = OperatorDistribution::new(ComplexMatrix::from_real(2, 1, &[1.0, 0.0]));
        let r = verify_observable(&h, &embed, &[], &t).unwrap();
        assert!(r.is_valid(), "{r}");
        let opd = observable_opd(&h, &embed);
        assert_eq!(opd[1][(0, 0)].re, 1.0);
        assert_eq!(opd[2][(0, 0)].re, 0.0);

        // h(E) = diag(1,0) does not fix F = I.
        let h = ClanObservable::new(&b, &c, vec![0, 1, 0, 1]).unwrap();
        let r = verify_observable(&h, &f, &[], &t).unwrap();
        assert!(r.violated("observable.normalization"));
    }
}
