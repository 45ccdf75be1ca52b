//! Generic forcing machinery shared by every model kind.
//!
//! A model only has to say how each supported necessity operator transforms a
//! truth set; boolean structure, abbreviations, memoization and bounded
//! enumeration checks are handled here once.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::formula::{
    AxiomSchema, EnumNode, Enumeration, Formula, FormulaBound, MetaVar, Modality,
};
use crate::worldset::WorldSet;

/// Variable assignment. Variables not listed are false everywhere.
pub type Valuation = BTreeMap<String, WorldSet>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("operator {modality} is not interpreted in {model} models")]
    Unsupported {
        modality: Modality,
        model: &'static str,
    },
    #[error("world {world} is outside a universe of {universe} worlds")]
    WorldOutOfRange { world: usize, universe: usize },
}

pub trait Semantics {
    fn universe(&self) -> usize;

    fn valuation(&self) -> &Valuation;

    fn supports(&self, modality: Modality) -> bool;

    /// Truth set of `Mφ` given the truth set of `φ`. Only called for
    /// supported modalities.
    fn necessity(&self, modality: Modality, truth: WorldSet) -> WorldSet;

    fn kind_name(&self) -> &'static str;

    fn var_truth(&self, var: &str) -> WorldSet {
        self.valuation()
            .get(var)
            .copied()
            .unwrap_or_else(|| WorldSet::empty(self.universe()))
    }

    fn check_language(&self, formula: &Formula) -> Result<(), EvalError> {
        match formula
            .modalities()
            .into_iter()
            .find(|m| !self.supports(*m))
        {
            Some(modality) => Err(EvalError::Unsupported {
                modality,
                model: self.kind_name(),
            }),
            None => Ok(()),
        }
    }
}

/// Bottom-up evaluator with a per-subformula memo.
pub struct Evaluator<'m, S: Semantics + ?Sized> {
    model: &'m S,
    memo: HashMap<Formula, WorldSet>,
    overrides: BTreeMap<String, WorldSet>,
}

impl<'m, S: Semantics + ?Sized> Evaluator<'m, S> {
    pub fn new(model: &'m S) -> Self {
        Evaluator {
            model,
            memo: HashMap::new(),
            overrides: BTreeMap::new(),
        }
    }

    /// Evaluates variables in `overrides` with the given truth sets instead of
    /// the model's valuation.
    pub fn with_overrides(model: &'m S, overrides: BTreeMap<String, WorldSet>) -> Self {
        Evaluator {
            model,
            memo: HashMap::new(),
            overrides,
        }
    }

    pub fn truth_set(&mut self, formula: &Formula) -> Result<WorldSet, EvalError> {
        self.model.check_language(formula)?;
        Ok(self.eval(formula))
    }

    fn eval(&mut self, formula: &Formula) -> WorldSet {
        if let Some(t) = self.memo.get(formula) {
            return *t;
        }
        let n = self.model.universe();
        let full = WorldSet::full(n);
        let t = match formula {
            Formula::Var(v) => match self.overrides.get(v) {
                Some(t) => *t,
                None => self.model.var_truth(v),
            },
            Formula::Bottom => WorldSet::empty(n),
            Formula::Top => full,
            Formula::Not(a) => self.eval(a).complement(),
            Formula::And(a, b) => self.eval(a).intersection(self.eval(b)),
            Formula::Or(a, b) => self.eval(a).union(self.eval(b)),
            Formula::Implies(a, b) => self.eval(a).complement().union(self.eval(b)),
            Formula::Iff(a, b) => {
                let (x, y) = (self.eval(a), self.eval(b));
                x.intersection(y).union(x.union(y).complement())
            }
            Formula::Box(a) => {
                let t = self.eval(a);
                self.model.necessity(Modality::Box, t)
            }
            Formula::Bullet(a) => {
                let t = self.eval(a);
                self.model.necessity(Modality::Bullet, t)
            }
            Formula::BlackBox(a) => {
                let t = self.eval(a);
                self.model.necessity(Modality::BlackBox, t)
            }
            Formula::Diamond(a) => {
                let t = self.eval(a).complement();
                self.model.necessity(Modality::Box, t).complement()
            }
            Formula::BlackDiamond(a) => {
                let t = self.eval(a).complement();
                self.model.necessity(Modality::BlackBox, t).complement()
            }
        };
        self.memo.insert(formula.clone(), t);
        t
    }
}

pub fn truth_set<S: Semantics + ?Sized>(
    model: &S,
    formula: &Formula,
) -> Result<WorldSet, EvalError> {
    Evaluator::new(model).truth_set(formula)
}

pub fn forces<S: Semantics + ?Sized>(
    model: &S,
    world: usize,
    formula: &Formula,
) -> Result<bool, EvalError> {
    if world >= model.universe() {
        return Err(EvalError::WorldOutOfRange {
            world,
            universe: model.universe(),
        });
    }
    Ok(truth_set(model, formula)?.contains(world))
}

/// Truth sets of every enumerated formula, index-aligned with the table.
pub fn truth_table<S: Semantics + ?Sized>(
    model: &S,
    table: &Enumeration,
) -> Result<Vec<WorldSet>, EvalError> {
    let n = model.universe();
    let mut out: Vec<WorldSet> = Vec::with_capacity(table.len());
    for node in table.nodes() {
        let t = match *node {
            EnumNode::Var(v) => model.var_truth(&table.vars()[v]),
            EnumNode::Bottom => WorldSet::empty(n),
            EnumNode::Not(c) => out[c].complement(),
            EnumNode::And(l, r) => out[l].intersection(out[r]),
            EnumNode::Modal(m, c) => {
                if !model.supports(m) {
                    return Err(EvalError::Unsupported {
                        modality: m,
                        model: model.kind_name(),
                    });
                }
                model.necessity(m, out[c])
            }
        };
        out.push(t);
    }
    Ok(out)
}

/// Distinct truth sets among enumerated formulas, each with the first formula
/// that realizes it.
pub fn definable_sets(truths: &[WorldSet]) -> Vec<(WorldSet, usize)> {
    let mut seen: HashMap<WorldSet, usize> = HashMap::new();
    let mut out = Vec::new();
    for (i, t) in truths.iter().enumerate() {
        if !seen.contains_key(t) {
            seen.insert(*t, i);
            out.push((*t, i));
        }
    }
    out
}

/// A failing schema instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaCounterexample {
    pub world: usize,
    pub instance: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaVerdict {
    pub schema: AxiomSchema,
    pub counterexample: Option<SchemaCounterexample>,
}

impl SchemaVerdict {
    pub fn valid(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks a schema at every world against all instances whose metavariables
/// range over formulas within `bound`.
///
/// Instances are evaluated once per combination of truth sets, since
/// forcing depends on subformulas only through their truth sets.
pub fn check_schema<S: Semantics + ?Sized>(
    model: &S,
    schema: AxiomSchema,
    bound: &FormulaBound,
) -> Result<SchemaVerdict, EvalError> {
    let template = schema.template();
    model.check_language(&template)?;
    let modalities: Vec<Modality> = Modality::ALL
        .into_iter()
        .filter(|m| model.supports(*m))
        .collect();
    let table = Enumeration::from_bound(bound, &modalities);
    let truths = truth_table(model, &table)?;
    let reps = definable_sets(&truths);
    let metavars = schema.metavars();
    let full = WorldSet::full(model.universe());

    let mut choice = vec![0usize; metavars.len()];
    loop {
        let overrides: BTreeMap<String, WorldSet> = metavars
            .iter()
            .zip(&choice)
            .map(|(mv, &i)| (mv.placeholder().to_string(), reps[i].0))
            .collect();
        let t = Evaluator::with_overrides(model, overrides).truth_set(&template)?;
        if t != full {
            let world = t.complement().first().expect("truth set is not full");
            let subst: BTreeMap<MetaVar, Formula> = metavars
                .iter()
                .zip(&choice)
                .map(|(mv, &i)| (*mv, table.formula(reps[i].1)))
                .collect();
            let instance = schema.instantiate(&subst).expect("all metavariables bound");
            return Ok(SchemaVerdict {
                schema,
                counterexample: Some(SchemaCounterexample { world, instance }),
            });
        }
        // odometer over representative indices
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(SchemaVerdict {
                    schema,
                    counterexample: None,
                });
            }
            choice[k] += 1;
            if choice[k] < reps.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// A pair of formulas with equal truth sets whose modalizations differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleFailure {
    pub left: Formula,
    pub right: Formula,
}

/// Rule of extensionality for `modality`: whenever two enumerated formulas
/// have the same truth set, so do their modalizations. The modalized formulas
/// are evaluated from scratch rather than from cached truth sets.
pub fn check_extensionality<S: Semantics + ?Sized>(
    model: &S,
    modality: Modality,
    bound: &FormulaBound,
) -> Result<Option<RuleFailure>, EvalError> {
    if !model.supports(modality) {
        return Err(EvalError::Unsupported {
            modality,
            model: model.kind_name(),
        });
    }
    let modalities: Vec<Modality> = Modality::ALL
        .into_iter()
        .filter(|m| model.supports(*m))
        .collect();
    let table = Enumeration::from_bound(bound, &modalities);
    let truths = truth_table(model, &table)?;
    let mut classes: HashMap<WorldSet, (Formula, WorldSet)> = HashMap::new();
    for (i, t) in truths.iter().enumerate() {
        let f = table.formula(i);
        let modal = truth_set(model, &Formula::nec(modality, f.clone()))?;
        match classes.get(t) {
            Some((first, first_modal)) => {
                if *first_modal != modal {
                    return Ok(Some(RuleFailure {
                        left: first.clone(),
                        right: f,
                    }));
                }
            }
            None => {
                classes.insert(*t, (f, modal));
            }
        }
    }
    Ok(None)
}

/// Index of the first enumerated formula on which the two worlds disagree.
pub fn first_disagreement(
    left_truths: &[WorldSet],
    left_world: usize,
    right_truths: &[WorldSet],
    right_world: usize,
) -> Option<usize> {
    left_truths
        .iter()
        .zip(right_truths)
        .position(|(l, r)| l.contains(left_world) != r.contains(right_world))
}

/// Per-world result of a pointwise-equivalence check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorldCertificate {
    pub world: usize,
    pub pass: bool,
    /// First distinguishing formula, in the left model's language.
    pub counterexample: Option<String>,
}

/// Bounded evidence that two models over the same worlds force the same
/// formulas, reading `left_modality` on the left as `right_modality` on the
/// right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceCertificate {
    pub left_modality: Modality,
    pub right_modality: Modality,
    pub vars: Vec<String>,
    pub max_nodes: usize,
    pub formulas_checked: usize,
    pub worlds: Vec<WorldCertificate>,
}

impl EquivalenceCertificate {
    pub fn all_pass(&self) -> bool {
        self.worlds.iter().all(|w| w.pass)
    }
}

pub fn pointwise_certificate<L, R>(
    left: &L,
    left_modality: Modality,
    right: &R,
    right_modality: Modality,
    bound: &FormulaBound,
) -> Result<EquivalenceCertificate, EvalError>
where
    L: Semantics + ?Sized,
    R: Semantics + ?Sized,
{
    let left_table = Enumeration::from_bound(bound, &[left_modality]);
    let right_table = left_table.rename_modality(left_modality, right_modality);
    let lt = truth_table(left, &left_table)?;
    let rt = truth_table(right, &right_table)?;
    let n = left.universe().min(right.universe());
    let worlds = (0..n)
        .map(|w| {
            let bad = first_disagreement(&lt, w, &rt, w);
            WorldCertificate {
                world: w,
                pass: bad.is_none(),
                counterexample: bad.map(|i| left_table.formula(i).to_string()),
            }
        })
        .collect();
    Ok(EquivalenceCertificate {
        left_modality,
        right_modality,
        vars: bound.vars.clone(),
        max_nodes: bound.max_nodes,
        formulas_checked: left_table.len(),
        worlds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    /// Kripke-style toy: □ is "true at the successor", world i → i+1 mod n.
    struct Cycle {
        n: usize,
        val: Valuation,
    }

    impl Semantics for Cycle {
        fn universe(&self) -> usize {
            self.n
        }
        fn valuation(&self) -> &Valuation {
            &self.val
        }
        fn supports(&self, m: Modality) -> bool {
            m == Modality::Box
        }
        fn necessity(&self, _: Modality, truth: WorldSet) -> WorldSet {
            WorldSet::from_worlds(
                self.n,
                (0..self.n).filter(|w| truth.contains((w + 1) % self.n)),
            )
        }
        fn kind_name(&self) -> &'static str {
            "cycle"
        }
    }

    fn cycle() -> Cycle {
        Cycle {
            n: 3,
            val: Valuation::from([("p".into(), WorldSet::from_worlds(3, [1]))]),
        }
    }

    #[test]
    fn abbreviations_agree_with_expansions() {
        let m = cycle();
        for text in ["<>p", "p <-> []p", "true", "[]p | ~p", "<>(p -> []p)"] {
            let f = parse(text).unwrap();
            let direct = truth_set(&m, &f).unwrap();
            assert_eq!(direct, truth_set(&m, &f.expand()).unwrap(), "{text}");
        }
        let diamond = Formula::Diamond(Box::new(Formula::var("p")));
        assert_eq!(
            truth_set(&m, &diamond).unwrap(),
            truth_set(&m, &diamond.expand()).unwrap()
        );
    }

    #[test]
    fn unsupported_operator_is_an_error() {
        let m = cycle();
        let err = truth_set(&m, &parse("*p").unwrap()).unwrap_err();
        assert!(matches!(
            err,
            EvalError::Unsupported {
                modality: Modality::Bullet,
                ..
            }
        ));
        assert!(forces(&m, 7, &parse("p").unwrap()).is_err());
    }

    #[test]
    fn truth_table_matches_direct_evaluation() {
        let m = cycle();
        let table = Enumeration::new(&["p".into()], 4, &[Modality::Box]);
        let tt = truth_table(&m, &table).unwrap();
        for (i, t) in tt.iter().enumerate() {
            assert_eq!(*t, truth_set(&m, &table.formula(i)).unwrap());
        }
    }

    #[test]
    fn schema_check_finds_t_failure() {
        let m = cycle();
        let v = check_schema(
            &m,
            AxiomSchema::boxed(crate::formula::SchemaKind::T),
            &FormulaBound::new(&["p"], 1),
        )
        .unwrap();
        let cx = v.counterexample.unwrap();
        assert!(!forces(&m, cx.world, &cx.instance).unwrap());
        let k = check_schema(
            &m,
            AxiomSchema::boxed(crate::formula::SchemaKind::K),
            &FormulaBound::new(&["p"], 2),
        )
        .unwrap();
        assert!(k.valid());
    }

    #[test]
    fn certificate_on_identical_models_passes() {
        let m = cycle();
        let cert = pointwise_certificate(
            &m,
            Modality::Box,
            &m,
            Modality::Box,
            &FormulaBound::new(&["p"], 4),
        )
        .unwrap();
        assert!(cert.all_pass());
        assert_eq!(cert.worlds.len(), 3);
    }
}
