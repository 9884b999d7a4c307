//! Verification reports shared by every axiom suite.
//!
//! A report is a list of named axioms, each with the number of instances
//! checked and the violations found. Violations carry a witness (element
//! labels) so a failing fixture can be fixed by hand.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Violations kept per axiom; further ones are only counted.
pub const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Violation {
    pub witness: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxiomCheck {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    pub violations: Vec<Violation>,
}

impl AxiomCheck {
    fn new(name: &str) -> Self {
        AxiomCheck {
            name: name.to_string(),
            checked: 0,
            failed: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn pass(&mut self) {
        self.checked += 1;
    }

    pub fn fail<S: ToString>(&mut self, witness: &[S], detail: impl Into<String>) {
        self.checked += 1;
        self.failed += 1;
        if self.violations.len() < MAX_WITNESSES {
            self.violations.push(Violation {
                witness: witness.iter().map(|s| s.to_string()).collect(),
                detail: detail.into(),
            });
        }
    }

    /// Records one instance, building the violation lazily.
    pub fn expect<S: ToString>(&mut self, ok: bool, witness: impl FnOnce() -> (Vec<S>, String)) {
        if ok {
            self.pass();
        } else {
            let (w, d) = witness();
            self.fail(&w, d);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub subject: String,
    pub axioms: Vec<AxiomCheck>,
    pub info: BTreeMap<String, serde_json::Value>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        VerificationReport {
            subject: subject.into(),
            axioms: Vec::new(),
            info: BTreeMap::new(),
        }
    }

    /// Returns the named axiom entry, creating it on first use.
    pub fn check(&mut self, name: &str) -> &mut AxiomCheck {
        let pos = match self.axioms.iter().position(|a| a.name == name) {
            Some(p) => p,
            None => {
                self.axioms.push(AxiomCheck::new(name));
                self.axioms.len() - 1
            }
        };
        &mut self.axioms[pos]
    }

    pub fn is_valid(&self) -> bool {
        self.axioms.iter().all(AxiomCheck::passed)
    }

    pub fn axiom(&self, name: &str) -> Option<&AxiomCheck> {
        self.axioms.iter().find(|a| a.name == name)
    }

    /// True if the named axiom was recorded and has at least one violation.
    pub fn violated(&self, name: &str) -> bool {
        self.axiom(name).is_some_and(|a| !a.passed())
    }

    pub fn failed_axioms(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.axioms.iter().filter(|a| !a.passed())
    }

    pub fn first_violation(&self) -> Option<(&str, &Violation)> {
        self.axioms
            .iter()
            .find_map(|a| a.violations.first().map(|v| (a.name.as_str(), v)))
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.info.insert(key.to_string(), v);
    }

    /// Appends all axioms and notes of `other`, keeping names unique.
    pub fn absorb(&mut self, other: VerificationReport) {
        for a in other.axioms {
            match self.axioms.iter_mut().find(|x| x.name == a.name) {
                Some(existing) => {
                    existing.checked += a.checked;
                    existing.failed += a.failed;
                    for v in a.violations {
                        if existing.violations.len() < MAX_WITNESSES {
                            existing.violations.push(v);
                        }
                    }
                }
                None => self.axioms.push(a),
            }
        }
        self.info.extend(other.info);
    }
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for a in &self.axioms {
            let status = if a.passed() { "pass" } else { "FAIL" };
            writeln!(f, "  [{status}] {} ({} checked, {} failed)", a.name, a.checked, a.failed)?;
            for v in &a.violations {
                writeln!(f, "         witness ({}): {}", v.witness.join(", "), v.detail)?;
            }
        }
        for (k, v) in &self.info {
            writeln!(f, "  {k}: {v}")?;
        }
        Ok(())
    }
}
