//! Axiom schemas and uniform instantiation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{Formula, Modality};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetaVar {
    Phi,
    Psi,
}

impl MetaVar {
    /// Placeholder variable name; not producible by the parser.
    pub fn placeholder(self) -> &'static str {
        match self {
            MetaVar::Phi => "φ",
            MetaVar::Psi => "ψ",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemaKind {
    /// `M(φ∧ψ) → Mφ ∧ Mψ`
    M,
    /// `Mφ ∧ Mψ → M(φ∧ψ)`
    C,
    /// `Mφ → φ`
    T,
    /// `Mφ → ¬M¬φ`
    D,
    /// `M(φ→ψ) → (Mφ → Mψ)`
    K,
    /// `Mφ → MMφ`
    Four,
    /// `M⊤`
    N,
    /// `□φ → ■φ`; ignores the modality.
    GJ,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemaError {
    #[error("metavariable {} is not bound", .0.placeholder())]
    Unbound(MetaVar),
    #[error("unknown schema id `{0}`")]
    UnknownId(String),
}

/// A schema kind read with a particular necessity operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AxiomSchema {
    pub kind: SchemaKind,
    pub modality: Modality,
}

impl AxiomSchema {
    /// `•φ → φ`
    pub const BULLET_T: AxiomSchema = AxiomSchema {
        kind: SchemaKind::T,
        modality: Modality::Bullet,
    };
    pub const GJ: AxiomSchema = AxiomSchema {
        kind: SchemaKind::GJ,
        modality: Modality::Box,
    };

    pub fn new(kind: SchemaKind, modality: Modality) -> Self {
        let modality = if kind == SchemaKind::GJ {
            Modality::Box
        } else {
            modality
        };
        AxiomSchema { kind, modality }
    }

    pub fn boxed(kind: SchemaKind) -> Self {
        Self::new(kind, Modality::Box)
    }

    pub fn metavars(&self) -> &'static [MetaVar] {
        match self.kind {
            SchemaKind::M | SchemaKind::C | SchemaKind::K => &[MetaVar::Phi, MetaVar::Psi],
            SchemaKind::N => &[],
            _ => &[MetaVar::Phi],
        }
    }

    /// Modalities the instances mention.
    pub fn modalities(&self) -> Vec<Modality> {
        match self.kind {
            SchemaKind::GJ => vec![Modality::Box, Modality::BlackBox],
            _ => vec![self.modality],
        }
    }

    /// The template over placeholder variables `φ`, `ψ`.
    pub fn template(&self) -> Formula {
        let phi = Formula::var(MetaVar::Phi.placeholder());
        let psi = Formula::var(MetaVar::Psi.placeholder());
        let m = |f: Formula| Formula::nec(self.modality, f);
        match self.kind {
            SchemaKind::M => Formula::implies(
                m(Formula::and(phi.clone(), psi.clone())),
                Formula::and(m(phi), m(psi)),
            ),
            SchemaKind::C => Formula::implies(
                Formula::and(m(phi.clone()), m(psi.clone())),
                m(Formula::and(phi, psi)),
            ),
            SchemaKind::T => Formula::implies(m(phi.clone()), phi),
            SchemaKind::D => Formula::implies(m(phi.clone()), Formula::not(m(Formula::not(phi)))),
            SchemaKind::K => Formula::implies(
                m(Formula::implies(phi.clone(), psi.clone())),
                Formula::implies(m(phi), m(psi)),
            ),
            SchemaKind::Four => Formula::implies(m(phi.clone()), m(m(phi))),
            SchemaKind::N => m(Formula::Top),
            SchemaKind::GJ => Formula::implies(
                Formula::nec(Modality::Box, phi.clone()),
                Formula::nec(Modality::BlackBox, phi),
            ),
        }
    }

    pub fn instantiate(&self, subst: &BTreeMap<MetaVar, Formula>) -> Result<Formula, SchemaError> {
        for mv in self.metavars() {
            if !subst.contains_key(mv) {
                return Err(SchemaError::Unbound(*mv));
            }
        }
        Ok(self.template().substitute(&|name| {
            subst
                .iter()
                .find(|(mv, _)| mv.placeholder() == name)
                .map(|(_, f)| f.clone())
        }))
    }

    /// The instance with `φ := p`, `ψ := q`.
    pub fn atomic_instance(&self) -> Formula {
        let subst = BTreeMap::from([
            (MetaVar::Phi, Formula::var("p")),
            (MetaVar::Psi, Formula::var("q")),
        ]);
        self.instantiate(&subst).expect("both metavariables bound")
    }
}

impl fmt::Display for AxiomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.kind {
            SchemaKind::M => "M",
            SchemaKind::C => "C",
            SchemaKind::T => "T",
            SchemaKind::D => "D",
            SchemaKind::K => "K",
            SchemaKind::Four => "4",
            SchemaKind::N => "N",
            SchemaKind::GJ => return f.write_str("GJ"),
        };
        match self.modality {
            Modality::Box => f.write_str(base),
            Modality::Bullet => write!(f, "*{base}"),
            Modality::BlackBox => write!(f, "{base}_b"),
        }
    }
}

impl FromStr for AxiomSchema {
    type Err = SchemaError;

    /// `M`, `4`, `Four` read with `□`; a `*` prefix (or `Bullet`) selects `•`;
    /// a `_b` suffix selects `■`; `GJ` stands alone.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || SchemaError::UnknownId(s.to_string());
        if s.eq_ignore_ascii_case("gj") {
            return Ok(AxiomSchema::GJ);
        }
        let (modality, base) = if let Some(rest) = s.strip_prefix('*') {
            (Modality::Bullet, rest)
        } else if let Some(rest) = s.strip_prefix("Bullet") {
            (Modality::Bullet, rest)
        } else if let Some(rest) = s.strip_suffix("_b") {
            (Modality::BlackBox, rest)
        } else {
            (Modality::Box, s)
        };
        let kind = match base {
            "M" => SchemaKind::M,
            "C" => SchemaKind::C,
            "T" => SchemaKind::T,
            "D" => SchemaKind::D,
            "K" => SchemaKind::K,
            "4" | "Four" => SchemaKind::Four,
            "N" => SchemaKind::N,
            _ => return Err(unknown()),
        };
        Ok(AxiomSchema::new(kind, modality))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn subst(phi: Formula) -> BTreeMap<MetaVar, Formula> {
        BTreeMap::from([(MetaVar::Phi, phi), (MetaVar::Psi, Formula::var("q"))])
    }

    #[test]
    fn instantiate_examples() {
        let m = AxiomSchema::boxed(SchemaKind::M)
            .instantiate(&subst(Formula::var("p")))
            .unwrap();
        assert_eq!(m, parse("[](p & q) -> []p & []q").unwrap());
        let t = AxiomSchema::boxed(SchemaKind::T)
            .instantiate(&subst(parse("[]p").unwrap()))
            .unwrap();
        assert_eq!(t, parse("[][]p -> []p").unwrap());
        let d = AxiomSchema::boxed(SchemaKind::D)
            .instantiate(&subst(Formula::var("p")))
            .unwrap();
        assert_eq!(d, parse("[]p -> ~[]~p").unwrap());
    }

    #[test]
    fn unbound_metavariable() {
        let only_phi = BTreeMap::from([(MetaVar::Phi, Formula::var("p"))]);
        assert_eq!(
            AxiomSchema::boxed(SchemaKind::K).instantiate(&only_phi),
            Err(SchemaError::Unbound(MetaVar::Psi))
        );
        assert!(AxiomSchema::boxed(SchemaKind::N)
            .instantiate(&BTreeMap::new())
            .is_ok());
    }

    #[test]
    fn ids_round_trip() {
        for id in ["M", "C", "T", "D", "K", "4", "N", "*T", "M_b", "GJ", "4_b"] {
            let s: AxiomSchema = id.parse().unwrap();
            assert_eq!(s.to_string(), id);
        }
        assert_eq!(
            "BulletT".parse::<AxiomSchema>().unwrap(),
            AxiomSchema::BULLET_T
        );
        assert_eq!("Four".parse::<AxiomSchema>().unwrap().to_string(), "4");
        assert!("X".parse::<AxiomSchema>().is_err());
    }

    #[test]
    fn gj_template() {
        assert_eq!(
            AxiomSchema::GJ.atomic_instance(),
            parse("[]p -> [b]p").unwrap()
        );
    }
}
