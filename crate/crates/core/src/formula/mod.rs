//! Modal formulas over `□`, `•`, `■` and their duals.

mod enumerate;
mod parse;
mod schema;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

pub use enumerate::{
    enumerate_formulas, enumerate_formulas_with, EnumNode, Enumeration, FormulaBound,
};
pub use parse::{parse, ParseError};
pub use schema::{AxiomSchema, MetaVar, SchemaError, SchemaKind};

/// The primitive necessity-like operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Modality {
    /// `[]`: witnessed by an open neighbourhood (or an `F`-family member).
    Box,
    /// `*`: witnessed through the inverse `O⁻¹` of an `F`-family member.
    Bullet,
    /// `[b]`: the second necessity of two-modality models.
    BlackBox,
}

impl Modality {
    pub const ALL: [Modality; 3] = [Modality::Box, Modality::Bullet, Modality::BlackBox];

    pub fn symbol(self) -> &'static str {
        match self {
            Modality::Box => "[]",
            Modality::Bullet => "*",
            Modality::BlackBox => "[b]",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Modality::Box => "box",
            Modality::Bullet => "bullet",
            Modality::BlackBox => "blackbox",
        }
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Formula syntax tree. `Top`, `Iff`, `Diamond` and `BlackDiamond` are
/// abbreviations; [`Formula::expand`] rewrites them into the primitive
/// connectives and every evaluator agrees on both forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Bottom,
    Top,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Diamond(Box<Formula>),
    Bullet(Box<Formula>),
    BlackBox(Box<Formula>),
    BlackDiamond(Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Applies a necessity operator.
    pub fn nec(m: Modality, f: Formula) -> Formula {
        let f = Box::new(f);
        match m {
            Modality::Box => Formula::Box(f),
            Modality::Bullet => Formula::Bullet(f),
            Modality::BlackBox => Formula::BlackBox(f),
        }
    }

    /// Dual possibility `¬M¬φ`, kept as a single node where one exists.
    pub fn poss(m: Modality, f: Formula) -> Formula {
        let f = Box::new(f);
        match m {
            Modality::Box => Formula::Diamond(f),
            Modality::BlackBox => Formula::BlackDiamond(f),
            Modality::Bullet => Formula::not(Formula::Bullet(Box::new(Formula::Not(f)))),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            Var(_) | Bottom | Top => vec![],
            Not(a) | Box(a) | Diamond(a) | Bullet(a) | BlackBox(a) | BlackDiamond(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => vec![a, b],
        }
    }

    /// Number of syntax-tree nodes.
    pub fn node_count(&self) -> usize {
        1 + self
            .children()
            .iter()
            .map(|c| c.node_count())
            .sum::<usize>()
    }

    pub fn modal_depth(&self) -> usize {
        use Formula::*;
        match self {
            Box(a) | Diamond(a) | Bullet(a) | BlackBox(a) | BlackDiamond(a) => 1 + a.modal_depth(),
            _ => self
                .children()
                .iter()
                .map(|c| c.modal_depth())
                .max()
                .unwrap_or(0),
        }
    }

    /// Modalities occurring in the formula, counting duals as their box.
    pub fn modalities(&self) -> BTreeSet<Modality> {
        let mut out = BTreeSet::new();
        self.collect_modalities(&mut out);
        out
    }

    fn collect_modalities(&self, out: &mut BTreeSet<Modality>) {
        match self {
            Formula::Box(_) | Formula::Diamond(_) => {
                out.insert(Modality::Box);
            }
            Formula::Bullet(_) => {
                out.insert(Modality::Bullet);
            }
            Formula::BlackBox(_) | Formula::BlackDiamond(_) => {
                out.insert(Modality::BlackBox);
            }
            _ => {}
        }
        for c in self.children() {
            c.collect_modalities(out);
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        if let Formula::Var(v) = self {
            out.insert(v.clone());
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }

    fn map_children(&self, f: &mut impl FnMut(&Formula) -> Formula) -> Formula {
        use Formula::*;
        let b = |x: Formula| std::boxed::Box::new(x);
        match self {
            Var(_) | Bottom | Top => self.clone(),
            Not(a) => Not(b(f(a))),
            Box(a) => Box(b(f(a))),
            Diamond(a) => Diamond(b(f(a))),
            Bullet(a) => Bullet(b(f(a))),
            BlackBox(a) => BlackBox(b(f(a))),
            BlackDiamond(a) => BlackDiamond(b(f(a))),
            And(x, y) => And(b(f(x)), b(f(y))),
            Or(x, y) => Or(b(f(x)), b(f(y))),
            Implies(x, y) => Implies(b(f(x)), b(f(y))),
            Iff(x, y) => Iff(b(f(x)), b(f(y))),
        }
    }

    /// Uniform substitution of formulas for variables.
    pub fn substitute(&self, subst: &impl Fn(&str) -> Option<Formula>) -> Formula {
        match self {
            Formula::Var(v) => subst(v).unwrap_or_else(|| self.clone()),
            _ => self.map_children(&mut |c| c.substitute(subst)),
        }
    }

    /// Rewrites every abbreviation into `⊥, ¬, ∧, ∨, →` and the primitive
    /// modalities.
    pub fn expand(&self) -> Formula {
        match self {
            Formula::Top => Formula::not(Formula::Bottom),
            Formula::Iff(a, b) => {
                let (a, b) = (a.expand(), b.expand());
                Formula::and(
                    Formula::implies(a.clone(), b.clone()),
                    Formula::implies(b, a),
                )
            }
            Formula::Diamond(a) => Formula::not(Formula::Box(Box::new(Formula::not(a.expand())))),
            Formula::BlackDiamond(a) => {
                Formula::not(Formula::BlackBox(Box::new(Formula::not(a.expand()))))
            }
            _ => self.map_children(&mut |c| c.expand()),
        }
    }

    /// The form produced by the parser: only the modal duals are expanded.
    pub fn normalize(&self) -> Formula {
        match self {
            Formula::Diamond(a) => {
                Formula::not(Formula::Box(Box::new(Formula::not(a.normalize()))))
            }
            Formula::BlackDiamond(a) => {
                Formula::not(Formula::BlackBox(Box::new(Formula::not(a.normalize()))))
            }
            _ => self.map_children(&mut |c| c.normalize()),
        }
    }

    /// Replaces one modality (and its dual) by another.
    pub fn rename_modality(&self, from: Modality, to: Modality) -> Formula {
        let inner = |a: &Formula| a.rename_modality(from, to);
        match self {
            Formula::Box(a) if from == Modality::Box => Formula::nec(to, inner(a)),
            Formula::Bullet(a) if from == Modality::Bullet => Formula::nec(to, inner(a)),
            Formula::BlackBox(a) if from == Modality::BlackBox => Formula::nec(to, inner(a)),
            Formula::Diamond(a) if from == Modality::Box => Formula::poss(to, inner(a)),
            Formula::BlackDiamond(a) if from == Modality::BlackBox => Formula::poss(to, inner(a)),
            _ => self.map_children(&mut |c| c.rename_modality(from, to)),
        }
    }

    /// Members of the fragment built from `□γ` by `∧`, `∨` and `→`.
    pub fn is_box_combination(&self) -> bool {
        match self {
            Formula::Box(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_box_combination() && b.is_box_combination()
            }
            _ => false,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Var(_) | Formula::Bottom | Formula::Top => 6,
            _ => 5,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, child: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

fn write_unary(f: &mut fmt::Formatter<'_>, op: &str, child: &Formula) -> fmt::Result {
    f.write_str(op)?;
    write_operand(f, child, child.precedence() < 5)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        let binary =
            |f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula, right_assoc: bool| {
                let p = self.precedence();
                let (lp, rp) = if right_assoc {
                    (a.precedence() <= p, b.precedence() < p)
                } else {
                    (a.precedence() < p, b.precedence() <= p)
                };
                write_operand(f, a, lp)?;
                write!(f, " {op} ")?;
                write_operand(f, b, rp)
            };
        match self {
            Var(v) => f.write_str(v),
            Bottom => f.write_str("false"),
            Top => f.write_str("true"),
            // ¬□¬φ and ¬■¬φ print as their duals
            Not(a) => match a.as_ref() {
                Box(inner) if matches!(inner.as_ref(), Not(_)) => {
                    let Not(x) = inner.as_ref() else {
                        unreachable!()
                    };
                    write_unary(f, "<>", x)
                }
                BlackBox(inner) if matches!(inner.as_ref(), Not(_)) => {
                    let Not(x) = inner.as_ref() else {
                        unreachable!()
                    };
                    write_unary(f, "<b>", x)
                }
                _ => write_unary(f, "~", a),
            },
            Box(a) => write_unary(f, "[]", a),
            Diamond(a) => write_unary(f, "<>", a),
            Bullet(a) => write_unary(f, "*", a),
            BlackBox(a) => write_unary(f, "[b]", a),
            BlackDiamond(a) => write_unary(f, "<b>", a),
            And(a, b) => binary(f, a, "&", b, false),
            Or(a, b) => binary(f, a, "|", b, false),
            Implies(a, b) => binary(f, a, "->", b, true),
            Iff(a, b) => binary(f, a, "<->", b, true),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::var("p")
    }

    fn q() -> Formula {
        Formula::var("q")
    }

    #[test]
    fn printing_minimizes_parentheses() {
        let f = Formula::implies(
            Formula::Box(Box::new(Formula::and(p(), q()))),
            Formula::and(Formula::Box(Box::new(p())), Formula::Box(Box::new(q()))),
        );
        assert_eq!(f.to_string(), "[](p & q) -> []p & []q");
        let g = Formula::implies(Formula::implies(p(), q()), p());
        assert_eq!(g.to_string(), "(p -> q) -> p");
        let h = Formula::and(p(), Formula::and(q(), p()));
        assert_eq!(h.to_string(), "p & (q & p)");
    }

    #[test]
    fn negated_boxes_print_as_duals() {
        let f = Formula::not(Formula::Box(Box::new(Formula::not(p()))));
        assert_eq!(f.to_string(), "<>p");
        let g = Formula::not(Formula::BlackBox(Box::new(Formula::not(p()))));
        assert_eq!(g.to_string(), "<b>p");
    }

    #[test]
    fn modal_depth_ignores_abbreviation() {
        let f = Formula::Diamond(Box::new(Formula::Box(Box::new(p()))));
        assert_eq!(f.modal_depth(), 2);
        assert_eq!(f.expand().modal_depth(), 2);
        assert_eq!(f.node_count(), 3);
        assert_eq!(f.expand().node_count(), 5);
    }

    #[test]
    fn rename_modality_handles_duals() {
        let f = Formula::Diamond(Box::new(Formula::Box(Box::new(p()))));
        let g = f.rename_modality(Modality::Box, Modality::Bullet);
        assert_eq!(g.modalities(), BTreeSet::from([Modality::Bullet]));
        assert_eq!(g.to_string(), "~*~*p");
    }

    #[test]
    fn box_combination_fragment() {
        let bp = Formula::Box(Box::new(p()));
        assert!(
            Formula::implies(bp.clone(), Formula::and(bp.clone(), bp.clone())).is_box_combination()
        );
        assert!(!Formula::not(bp.clone()).is_box_combination());
        assert!(!Formula::and(bp, p()).is_box_combination());
    }
}
