//! Validation reports shared by every model kind.

use std::fmt;

use serde::Serialize;

use crate::worldset::WorldSet;

/// A piece of evidence attached to a violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    World(usize),
    Set(WorldSet),
    Family(Vec<WorldSet>),
    Note(String),
}

impl Witness {
    pub fn render(&self, names: &[String]) -> String {
        match self {
            Witness::World(w) => names.get(*w).cloned().unwrap_or_else(|| format!("w{w}")),
            Witness::Set(s) => s.display_with(names).to_string(),
            Witness::Family(f) => {
                let parts: Vec<String> = f
                    .iter()
                    .map(|s| s.display_with(names).to_string())
                    .collect();
                format!("{{{}}}", parts.join(", "))
            }
            Witness::Note(n) => n.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub witnesses: Vec<Witness>,
}

impl Violation {
    pub fn new(rule: &'static str, witnesses: Vec<Witness>) -> Self {
        Violation { rule, witnesses }
    }

    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self.witnesses.iter().map(|w| w.render(names)).collect();
        format!("{}: {}", self.rule, parts.join(" "))
    }
}

/// Outcome of a structural check. The model is valid iff no violations were
/// recorded.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, rule: &'static str, witnesses: Vec<Witness>) {
        self.violations.push(Violation::new(rule, witnesses));
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    pub fn rendered(&self, names: &[String]) -> RenderedReport {
        RenderedReport {
            valid: self.valid(),
            violations: self
                .violations
                .iter()
                .map(|v| RenderedViolation {
                    rule: v.rule.to_string(),
                    witness: v
                        .witnesses
                        .iter()
                        .map(|w| w.render(names))
                        .collect::<Vec<_>>()
                        .join(" "),
                })
                .collect(),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid() {
            return f.write_str("valid");
        }
        writeln!(f, "invalid ({} violations)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {}", v.render(&[]))?;
        }
        Ok(())
    }
}

/// A report with world names substituted, ready for output.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RenderedReport {
    pub valid: bool,
    pub violations: Vec<RenderedViolation>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RenderedViolation {
    pub rule: String,
    pub witness: String,
}
