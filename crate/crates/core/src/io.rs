//! JSON file formats.
//!
//! Structure files describe finite ordered structures by labels and tables.
//! Operator files carry labeled matrices (row-major `[re, im]` pairs) with
//! roles that turn them into a clan, a POVM or a *-algebra with states.
//! Dilation files hold the output of the Naimark construction.

use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::boolean_rep::{BooleanSemiring, SetSystem};
use crate::clan::Clan;
use crate::error::{Error, Result};
use crate::gns::{AlgebraState, ConcreteStarAlgebra};
use crate::matrix::{ComplexMatrix, ToleranceConfig, C64};
use crate::naimark::{Dilation, FinitePovm};
use crate::order::{ElementId, FinitePoset};
use crate::ortho::OrthoLogic;
use crate::quasilogic::Quasilogic;
use crate::semilogic::Semilogic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum StructureKind {
    Poset,
    Quasilogic,
    Semilogic,
    OrthoLogic,
    BooleanSemiring,
}

impl std::fmt::Display for StructureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StructureKind::Poset => "poset",
            StructureKind::Quasilogic => "quasilogic",
            StructureKind::Semilogic => "semilogic",
            StructureKind::OrthoLogic => "ortho_logic",
            StructureKind::BooleanSemiring => "boolean_semiring",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<StructureKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub elements: Vec<String>,
    /// Pairs `[x, y]` meaning `x <= y`; covers suffice, the closure is taken.
    #[serde(default)]
    pub le: Vec<[String; 2]>,
    /// Triples `[a, b, c]` meaning `a · b = c`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prod: Option<Vec<[String; 3]>>,
    /// Triples `[b, a, c]` meaning `b - a = c`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diff: Option<Vec<[String; 3]>>,
    /// Pairs `[a, ā]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neg: Option<Vec<[String; 2]>>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Parses and validates a structure file: labels resolve, the order closes
/// without cycles, and each table respects its domain.
pub fn parse_structure(bytes: &[u8]) -> Result<StructureFile> {
    let file: StructureFile = serde_json::from_slice(bytes).map_err(json_error)?;
    file.validate()?;
    Ok(file)
}

pub fn read_structure(path: &Path) -> Result<StructureFile> {
    parse_structure(&std::fs::read(path)?).map_err(|e| with_path(e, path))
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    }
}

impl StructureFile {
    fn index(&self, label: &str, table: &str) -> Result<ElementId> {
        self.elements
            .iter()
            .position(|l| l == label)
            .map(ElementId)
            .ok_or_else(|| Error::Parse(format!("dangling label \"{label}\" in {table}: not among the elements")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.elements.is_empty() {
            return Err(Error::Parse("elements must be nonempty".into()));
        }
        for (i, l) in self.elements.iter().enumerate() {
            if self.elements[..i].contains(l) {
                return Err(Error::Parse(format!("duplicate element label \"{l}\"")));
            }
        }
        let poset = self.poset()?;
        if let Some(diff) = &self.diff {
            for [b, a, c] in diff {
                let (bi, ai) = (self.index(b, "diff")?, self.index(a, "diff")?);
                self.index(c, "diff")?;
                if !poset.le(ai, bi) {
                    return Err(Error::Parse(format!("diff entry {b} - {a}: {a} <= {b} does not hold")));
                }
            }
        }
        if let Some(prod) = &self.prod {
            for [a, b, c] in prod {
                for x in [a, b, c] {
                    self.index(x, "prod")?;
                }
            }
        }
        if let Some(neg) = &self.neg {
            for [a, b] in neg {
                self.index(a, "neg")?;
                self.index(b, "neg")?;
            }
        }
        Ok(())
    }

    /// Reflexive-transitive closure of the listed pairs.
    pub fn poset(&self) -> Result<FinitePoset> {
        let pairs = self
            .le
            .iter()
            .map(|[a, b]| Ok((self.index(a, "le")?.0, self.index(b, "le")?.0)))
            .collect::<Result<Vec<_>>>()?;
        FinitePoset::from_covers(self.elements.clone(), &pairs).map_err(|e| match e {
            Error::Structural(m) if m.contains("cycle") => {
                Error::Parse(format!("order relation violates antisymmetry: {m}"))
            }
            Error::Structural(m) => Error::Parse(format!("order relation: {m}")),
            other => other,
        })
    }

    /// Declared kind, or a guess from the tables present.
    pub fn detect_kind(&self) -> StructureKind {
        if let Some(k) = self.kind {
            return k;
        }
        match (&self.neg, &self.diff, &self.prod) {
            (Some(_), _, _) => StructureKind::OrthoLogic,
            (None, Some(_), _) => StructureKind::Quasilogic,
            (None, None, Some(_)) => StructureKind::Semilogic,
            _ => StructureKind::Poset,
        }
    }

    fn diff_table(&self, n: usize) -> Result<Option<Vec<Vec<Option<ElementId>>>>> {
        let Some(diff) = &self.diff else { return Ok(None) };
        let mut t = vec![vec![None; n]; n];
        for [b, a, c] in diff {
            let (bi, ai, ci) = (self.index(b, "diff")?, self.index(a, "diff")?, self.index(c, "diff")?);
            if let Some(prev) = t[bi.0][ai.0] {
                if prev != ci {
                    return Err(Error::Parse(format!("diff lists {b} - {a} twice with different values")));
                }
            }
            t[bi.0][ai.0] = Some(ci);
        }
        Ok(Some(t))
    }

    pub fn to_quasilogic(&self) -> Result<Quasilogic> {
        let poset = self.poset()?;
        let t = self
            .diff_table(poset.len())?
            .ok_or_else(|| Error::Parse("a quasilogic needs a diff table".into()))?;
        Quasilogic::new(poset, t)
    }

    /// The product table, with each listed pair mirrored. Unlisted pairs do
    /// not commute.
    fn prod_table(&self, n: usize) -> Result<Option<Vec<Vec<Option<ElementId>>>>> {
        let Some(prod) = &self.prod else { return Ok(None) };
        let mut t: Vec<Vec<Option<ElementId>>> = vec![vec![None; n]; n];
        for [a, b, c] in prod {
            let (ai, bi, ci) = (self.index(a, "prod")?, self.index(b, "prod")?, self.index(c, "prod")?);
            for (x, y) in [(ai, bi), (bi, ai)] {
                match t[x.0][y.0] {
                    Some(prev) if prev != ci => {
                        return Err(Error::Parse(format!(
                            "prod gives {a}·{b} two values ({} and {c})",
                            self.elements[prev.0]
                        )))
                    }
                    _ => t[x.0][y.0] = Some(ci),
                }
            }
        }
        Ok(Some(t))
    }

    pub fn to_semilogic(&self) -> Result<Semilogic> {
        let poset = self.poset()?;
        let t = self
            .prod_table(poset.len())?
            .ok_or_else(|| Error::Parse("a semilogic needs a prod table".into()))?;
        Semilogic::new(poset, t)
    }

    /// Product from the file, or the lattice meet when no table is given.
    pub fn to_semiring_base(&self) -> Result<Semilogic> {
        let poset = self.poset()?;
        match self.prod_table(poset.len())? {
            Some(t) => Semilogic::new(poset, t),
            None => Semilogic::from_meets(poset, |_, _| true),
        }
    }

    pub fn to_boolean_semiring(&self) -> Result<BooleanSemiring> {
        BooleanSemiring::new(self.to_semiring_base()?)
    }

    /// From `neg` (difference `b ∧ ā`) or from `diff` (negation `1 - a`).
    pub fn to_ortho_logic(&self) -> Result<OrthoLogic> {
        let poset = self.poset()?;
        let n = poset.len();
        if let Some(neg) = &self.neg {
            let mut table = vec![None; n];
            for [a, b] in neg {
                let (ai, bi) = (self.index(a, "neg")?, self.index(b, "neg")?);
                if table[ai.0].is_some_and(|x| x != bi) {
                    return Err(Error::Parse(format!("neg lists {a} twice")));
                }
                table[ai.0] = Some(bi);
            }
            let table = table
                .into_iter()
                .enumerate()
                .map(|(i, x)| x.ok_or_else(|| Error::Parse(format!("neg has no entry for {}", self.elements[i]))))
                .collect::<Result<Vec<_>>>()?;
            if let Some(d) = self.diff_table(n)? {
                return OrthoLogic::new(Quasilogic::new(poset, d)?, table);
            }
            return OrthoLogic::from_negation(poset, table);
        }
        OrthoLogic::from_quasilogic(self.to_quasilogic()?)
    }

    pub fn from_semilogic(s: &Semilogic, kind: StructureKind) -> Self {
        let p = s.poset();
        let mut prod = Vec::new();
        for a in p.ids() {
            for b in p.ids() {
                if b.0 < a.0 {
                    continue;
                }
                if let Some(c) = s.product(a, b) {
                    prod.push([p.label(a).to_string(), p.label(b).to_string(), p.label(c).to_string()]);
                }
            }
        }
        StructureFile {
            kind: Some(kind),
            name: None,
            elements: p.labels().to_vec(),
            le: cover_pairs(p),
            prod: Some(prod),
            diff: None,
            neg: None,
        }
    }

    pub fn from_quasilogic(q: &Quasilogic) -> Self {
        let p = q.poset();
        let mut diff = Vec::new();
        for b in p.ids() {
            for a in p.ids() {
                if let Some(c) = q.diff(b, a) {
                    diff.push([p.label(b).to_string(), p.label(a).to_string(), p.label(c).to_string()]);
                }
            }
        }
        StructureFile {
            kind: Some(StructureKind::Quasilogic),
            name: None,
            elements: p.labels().to_vec(),
            le: cover_pairs(p),
            prod: None,
            diff: Some(diff),
            neg: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("structure files serialize")
    }
}

fn cover_pairs(p: &FinitePoset) -> Vec<[String; 2]> {
    let mut out = Vec::new();
    for a in p.ids() {
        for b in p.ids() {
            if p.lt(a, b) && !p.ids().any(|c| p.lt(a, c) && p.lt(c, b)) {
                out.push([p.label(a).to_string(), p.label(b).to_string()]);
            }
        }
    }
    out
}

/// Serialized set system as a boolean semiring structure file.
pub fn set_system_structure(sys: &SetSystem) -> Result<StructureFile> {
    Ok(StructureFile::from_semilogic(&sys.to_semilogic()?, StructureKind::BooleanSemiring))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Clan,
    Povm,
    Algebra,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSpec {
    /// Label of a density matrix in the file.
    Density(String),
    /// Values on the basis, in basis order.
    Functional(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Roles {
    /// Clan unit or algebra unit idempotent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    /// Clan members in order; defaults to every matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<String>>,
    /// POVM outcome names (atoms of the event semiring).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<Vec<String>>,
    /// POVM atom effects, parallel to `outcomes`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effects: Option<Vec<String>>,
    /// Structure file of a boolean semiring whose atoms are the outcomes,
    /// relative to this file. Defaults to the powerset of the outcomes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semiring: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotents: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<IndexMap<String, StateSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_state: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub kind: OperatorKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub matrices: IndexMap<String, Vec<[f64; 2]>>,
    #[serde(default)]
    pub roles: Roles,
}

pub fn parse_operator(bytes: &[u8]) -> Result<OperatorFile> {
    let file: OperatorFile = serde_json::from_slice(bytes).map_err(json_error)?;
    file.validate()?;
    Ok(file)
}

pub fn read_operator(path: &Path) -> Result<OperatorFile> {
    parse_operator(&std::fs::read(path)?).map_err(|e| with_path(e, path))
}

impl OperatorFile {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        for (l, entries) in &self.matrices {
            if entries.len() != self.dim * self.dim {
                return Err(Error::Parse(format!(
                    "matrix {l} has {} entries, expected {}",
                    entries.len(),
                    self.dim * self.dim
                )));
            }
            if entries.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::Parse(format!("matrix {l} has a non-finite entry")));
            }
        }
        let r = &self.roles;
        let lists = [
            ("unit", r.unit.iter().cloned().collect::<Vec<_>>()),
            ("members", r.members.clone().unwrap_or_default()),
            ("effects", r.effects.clone().unwrap_or_default()),
            ("basis", r.basis.clone().unwrap_or_default()),
            ("idempotents", r.idempotents.clone().unwrap_or_default()),
        ];
        for (role, labels) in lists {
            for l in labels {
                self.matrix(&l).map_err(|_| Error::Parse(format!("dangling label \"{l}\" in roles.{role}")))?;
            }
        }
        if let Some(states) = &r.states {
            for (name, s) in states {
                if let StateSpec::Density(l) = s {
                    self.matrix(l)
                        .map_err(|_| Error::Parse(format!("dangling label \"{l}\" in state {name}")))?;
                }
            }
        }
        match self.kind {
            OperatorKind::Clan if r.unit.is_none() => Err(Error::Parse("a clan file needs roles.unit".into())),
            OperatorKind::Algebra if r.unit.is_none() || r.basis.is_none() => {
                Err(Error::Parse("an algebra file needs roles.unit and roles.basis".into()))
            }
            OperatorKind::Povm => match (&r.outcomes, &r.effects) {
                (Some(o), Some(e)) if o.len() == e.len() => Ok(()),
                (Some(_), Some(_)) => Err(Error::Parse("roles.outcomes and roles.effects differ in length".into())),
                _ => Err(Error::Parse("a POVM file needs roles.outcomes and roles.effects".into())),
            },
            _ => Ok(()),
        }
    }

    pub fn matrix(&self, label: &str) -> Result<ComplexMatrix> {
        let entries = self
            .matrices
            .get(label)
            .ok_or_else(|| Error::Parse(format!("no matrix labeled \"{label}\"")))?;
        ComplexMatrix::from_pairs(self.dim, self.dim, entries)
    }

    fn labeled(&self, labels: &[String]) -> Result<Vec<(String, ComplexMatrix)>> {
        labels.iter().map(|l| Ok((l.clone(), self.matrix(l)?))).collect()
    }

    pub fn to_clan(&self) -> Result<Clan> {
        let members = self
            .roles
            .members
            .clone()
            .unwrap_or_else(|| self.matrices.keys().cloned().collect());
        let (labels, mats): (Vec<_>, Vec<_>) = self.labeled(&members)?.into_iter().unzip();
        Clan::new(labels, mats, self.roles.unit.as_deref().unwrap_or_default())
    }

    /// `base` resolves a relative semiring reference.
    pub fn to_povm(&self, base: Option<&Path>, tol: &ToleranceConfig) -> Result<FinitePovm> {
        let outcomes = self.roles.outcomes.clone().unwrap_or_default();
        let effects: Vec<ComplexMatrix> = self
            .roles
            .effects
            .clone()
            .unwrap_or_default()
            .iter()
            .map(|l| self.matrix(l))
            .collect::<Result<_>>()?;
        let Some(reference) = &self.roles.semiring else {
            return FinitePovm::from_atoms(outcomes, effects, tol);
        };
        let path = base.map_or_else(|| PathBuf::from(reference), |b| b.join(reference));
        let semiring = read_structure(&path)?.to_boolean_semiring()?;
        let atoms = semiring.poset().atoms()?;
        let mut atom_effect = vec![None; semiring.len()];
        for (o, m) in outcomes.iter().zip(&effects) {
            let id = semiring
                .poset()
                .id(o)
                .ok_or_else(|| Error::Parse(format!("outcome {o} is not an element of the semiring")))?;
            if !atoms.contains(&id) {
                return Err(Error::Parse(format!("outcome {o} is not an atom of the semiring")));
            }
            atom_effect[id.0] = Some(m.clone());
        }
        if let Some(a) = atoms.iter().find(|a| atom_effect[a.0].is_none()) {
            return Err(Error::Parse(format!("atom {} has no effect", semiring.label(*a))));
        }
        let d = self.dim;
        let full = semiring
            .ids()
            .map(|b| {
                let mut m = ComplexMatrix::zeros(d, d);
                for a in &atoms {
                    if semiring.poset().le(*a, b) {
                        m = &m + atom_effect[a.0].as_ref().expect("checked");
                    }
                }
                m
            })
            .collect();
        FinitePovm::new(semiring, full, tol)
    }

    pub fn to_algebra(&self, tol: &ToleranceConfig) -> Result<ConcreteStarAlgebra> {
        let basis = self.labeled(self.roles.basis.as_deref().unwrap_or_default())?;
        let unit_label = self.roles.unit.clone().unwrap_or_default();
        let unit = (unit_label.clone(), self.matrix(&unit_label)?);
        let idem = self.labeled(self.roles.idempotents.as_deref().unwrap_or_default())?;
        ConcreteStarAlgebra::new(basis, unit, idem, tol)
    }

    /// Named state, or the default one, or the only one.
    pub fn state(&self, name: Option<&str>) -> Result<(String, AlgebraState)> {
        let states = self.roles.states.clone().unwrap_or_default();
        let key = match name.or(self.roles.default_state.as_deref()) {
            Some(k) => k.to_string(),
            None if states.len() == 1 => states.keys().next().expect("one state").clone(),
            None => return Err(Error::Parse("no state selected and no default_state".into())),
        };
        let spec = states
            .get(&key)
            .ok_or_else(|| Error::Parse(format!("no state named \"{key}\"")))?;
        let state = match spec {
            StateSpec::Density(l) => AlgebraState::Density(self.matrix(l)?),
            StateSpec::Functional(v) => AlgebraState::Functional(v.iter().map(|p| C64::new(p[0], p[1])).collect()),
        };
        Ok((key, state))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("operator files serialize")
    }
}

/// Reads a standalone state file: `{"density": [[re, im], ...]}` or `{"functional": [...]}`.
pub fn parse_state(bytes: &[u8], dim: usize) -> Result<AlgebraState> {
    #[derive(Deserialize)]
    #[serde(rename_all = "snake_case", deny_unknown_fields)]
    enum StateFile {
        Density(Vec<[f64; 2]>),
        Functional(Vec<[f64; 2]>),
    }
    let f: StateFile = serde_json::from_slice(bytes).map_err(json_error)?;
    Ok(match f {
        StateFile::Density(v) => AlgebraState::Density(
            ComplexMatrix::from_pairs(dim, dim, &v).map_err(|e| Error::Parse(e.to_string()))?,
        ),
        StateFile::Functional(v) => AlgebraState::Functional(v.iter().map(|p| C64::new(p[0], p[1])).collect()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_pairs(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        ComplexMatrix::from_pairs(self.rows, self.cols, &self.entries).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DilationFile {
    pub dim_h: usize,
    pub dim_e: usize,
    /// Event label → `h(B)`, in the semiring's element order.
    pub h: IndexMap<String, MatrixJson>,
    #[serde(rename = "F")]
    pub f: MatrixJson,
}

impl DilationFile {
    pub fn from_dilation(p: &FinitePovm, d: &Dilation) -> Self {
        DilationFile {
            dim_h: d.dim_h(),
            dim_e: d.dim_e,
            h: p
                .semiring()
                .ids()
                .map(|b| (p.label(b).to_string(), MatrixJson::from_matrix(&d.h[b.0])))
                .collect(),
            f: MatrixJson::from_matrix(&d.f),
        }
    }

    /// Events are matched to `p` by label.
    pub fn to_dilation(&self, p: &FinitePovm) -> Result<Dilation> {
        let h = p
            .semiring()
            .ids()
            .map(|b| {
                self.h
                    .get(p.label(b))
                    .ok_or_else(|| Error::Parse(format!("dilation has no h({})", p.label(b))))?
                    .to_matrix()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Dilation {
            dim_e: self.dim_e,
            h,
            f: self.f.to_matrix()?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dilation files serialize")
    }
}

pub fn parse_dilation(bytes: &[u8]) -> Result<DilationFile> {
    serde_json::from_slice(bytes).map_err(json_error)
}

/// Either kind of input file, told apart by the presence of `matrices`.
#[derive(Debug, Clone)]
pub enum InputFile {
    Structure(StructureFile),
    Operator(OperatorFile),
}

pub fn read_input(path: &Path) -> Result<InputFile> {
    let bytes = std::fs::read(path)?;
    let value: serde_json::Value = serde_json::from_slice(&bytes).map_err(|e| with_path(json_error(e), path))?;
    let is_operator = value.get("matrices").is_some();
    let parsed = if is_operator {
        parse_operator(&bytes).map(InputFile::Operator)
    } else {
        parse_structure(&bytes).map(InputFile::Structure)
    };
    parsed.map_err(|e| with_path(e, path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasilogic::{classify, ClassificationLabel};

    #[test]
    fn minimal_poset() {
        let f = parse_structure(br#"{"kind": "poset", "elements": ["0", "1"], "le": [["0", "1"]]}"#).unwrap();
        let p = f.poset().unwrap();
        assert!(p.le(ElementId(0), ElementId(1)));
        assert_eq!(p.top(), Some(ElementId(1)));
    }

    #[test]
    fn parse_errors() {
        let dangling = br#"{"kind": "semilogic", "elements": ["0", "1"], "le": [["0", "1"]], "prod": [["x", "1", "0"]]}"#;
        let e = parse_structure(dangling).unwrap_err();
        assert!(matches!(&e, Error::Parse(m) if m.contains("dangling label \"x\"")), "{e}");
        let cycle = br#"{"kind": "poset", "elements": ["a", "b"], "le": [["a", "b"], ["b", "a"]]}"#;
        let e = parse_structure(cycle).unwrap_err();
        assert!(matches!(&e, Error::Parse(m) if m.contains("antisymmetr")), "{e}");
        let e = parse_structure(br#"{"kind": "lattice", "elements": ["0"]}"#).unwrap_err();
        assert!(matches!(e, Error::Parse(_)));
        let e = parse_structure(b"{not json").unwrap_err();
        assert!(matches!(&e, Error::Parse(m) if m.contains("line 1")), "{e}");
        let off = br#"{"elements": ["0", "a", "b"], "le": [["0", "a"], ["0", "b"]], "diff": [["a", "b", "0"]]}"#;
        assert!(matches!(parse_structure(off), Err(Error::Parse(_))));
    }

    #[test]
    fn round_trip_and_kinds() {
        let q = crate::random::powerset_quasilogic(&[0, 1, 2, 3]);
        let f = StructureFile::from_quasilogic(&q);
        let again = parse_structure(f.to_json().as_bytes()).unwrap();
        assert_eq!(f, again);
        assert_eq!(classify(&again.to_quasilogic().unwrap()).label, ClassificationLabel::BooleanAlgebra);
        assert!(again.to_ortho_logic().is_ok());

        let b = again.to_boolean_semiring().unwrap();
        let sf = StructureFile::from_semilogic(b.semilogic(), StructureKind::BooleanSemiring);
        assert_eq!(parse_structure(sf.to_json().as_bytes()).unwrap(), sf);
        assert_eq!(sf.to_boolean_semiring().unwrap().len(), 4);
    }

    #[test]
    fn prod_is_mirrored() {
        let f = parse_structure(
            br#"{"kind": "semilogic", "elements": ["0", "a"], "le": [["0", "a"]],
                "prod": [["0", "0", "0"], ["0", "a", "0"], ["a", "a", "a"]]}"#,
        )
        .unwrap();
        let s = f.to_semilogic().unwrap();
        assert_eq!(s.product(ElementId(1), ElementId(0)), Some(ElementId(0)));
    }

    fn mo2_clan_file() -> OperatorFile {
        let m = |v: [f64; 4]| v.iter().map(|&x| [x, 0.0]).collect::<Vec<_>>();
        OperatorFile {
            kind: OperatorKind::Clan,
            name: None,
            dim: 2,
            matrices: [
                ("0", m([0.0, 0.0, 0.0, 0.0])),
                ("p1", m([1.0, 0.0, 0.0, 0.0])),
                ("p2", m([0.0, 0.0, 0.0, 1.0])),
                ("q1", m([0.5, 0.5, 0.5, 0.5])),
                ("q2", m([0.5, -0.5, -0.5, 0.5])),
                ("I", m([1.0, 0.0, 0.0, 1.0])),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
            roles: Roles {
                unit: Some("I".into()),
                ..Roles::default()
            },
        }
    }

    #[test]
    fn operator_round_trip() {
        let f = mo2_clan_file();
        let again = parse_operator(f.to_json().as_bytes()).unwrap();
        assert_eq!(f, again);
        let clan = again.to_clan().unwrap();
        assert_eq!(clan.len(), 6);
        let mut bad = f.clone();
        bad.matrices.insert("x".into(), vec![[1.0, 0.0]]);
        assert!(matches!(parse_operator(bad.to_json().as_bytes()), Err(Error::Parse(_))));
        let mut bad = f;
        bad.roles.unit = Some("nope".into());
        assert!(matches!(parse_operator(bad.to_json().as_bytes()), Err(Error::Parse(_))));
    }

    #[test]
    fn dilation_round_trip() {
        let t = ToleranceConfig::default();
        let p = FinitePovm::from_atoms(
            vec!["a".into(), "b".into(), "c".into()],
            crate::naimark::trine_effects(),
            &t,
        )
        .unwrap();
        let d = crate::naimark::dilate(&p, &t).unwrap();
        let file = DilationFile::from_dilation(&p, &d);
        let again = parse_dilation(file.to_json().as_bytes()).unwrap();
        assert_eq!(file, again);
        assert_eq!(again.to_dilation(&p).unwrap(), d);
    }
}
