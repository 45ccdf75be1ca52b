//! Two-modality models. `□` is read topologically; `■` is read through a
//! pointer `f` into `⋃μ` on `Y1` and through an arbitrary neighbourhood
//! family `N` on `Y2`. GTFI-models additionally put `⋃μ` inside `Y1` with
//! `f` the identity there.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{AxiomSchema, Enumeration, Formula, FormulaBound, Modality, SchemaKind};
use crate::report::{ValidationReport, Witness};
use crate::semantics::{
    check_extensionality, check_schema, definable_sets, truth_table, EvalError, RuleFailure,
    SchemaVerdict, Semantics, Valuation,
};
use crate::topology::GenTopology;
use crate::worldset::{canonical_family, WorldSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GtffError {
    #[error("set {0} does not fit the model's universe")]
    UniverseMismatch(WorldSet),
    #[error("world {0} is outside the universe")]
    WorldOutOfRange(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GtffModel {
    topology: GenTopology,
    y1: WorldSet,
    y2: WorldSet,
    pointer: BTreeMap<usize, usize>,
    neighbourhoods: BTreeMap<usize, Vec<WorldSet>>,
    pub valuation: Valuation,
}

impl GtffModel {
    /// Only sizes and indices are checked here; the structural conditions are
    /// reported by [`validate_gtff`] and [`validate_gtfi`]. Worlds of `Y2`
    /// without an `N` entry get the empty family.
    pub fn new(
        topology: GenTopology,
        y1: WorldSet,
        y2: WorldSet,
        pointer: BTreeMap<usize, usize>,
        neighbourhoods: BTreeMap<usize, Vec<WorldSet>>,
        valuation: Valuation,
    ) -> Result<Self, GtffError> {
        let n = topology.universe();
        let sets = [y1, y2]
            .into_iter()
            .chain(neighbourhoods.values().flatten().copied())
            .chain(valuation.values().copied());
        for s in sets {
            if s.universe() != n {
                return Err(GtffError::UniverseMismatch(s));
            }
        }
        let indices = pointer
            .iter()
            .flat_map(|(a, b)| [*a, *b])
            .chain(neighbourhoods.keys().copied());
        for w in indices {
            if w >= n {
                return Err(GtffError::WorldOutOfRange(w));
            }
        }
        let mut neighbourhoods: BTreeMap<usize, Vec<WorldSet>> = neighbourhoods
            .into_iter()
            .map(|(w, f)| (w, canonical_family(f)))
            .collect();
        for w in y2.iter() {
            neighbourhoods.entry(w).or_default();
        }
        Ok(GtffModel {
            topology,
            y1,
            y2,
            pointer,
            neighbourhoods,
            valuation,
        })
    }

    pub fn topology(&self) -> &GenTopology {
        &self.topology
    }

    pub fn y1(&self) -> WorldSet {
        self.y1
    }

    pub fn y2(&self) -> WorldSet {
        self.y2
    }

    pub fn pointer(&self) -> &BTreeMap<usize, usize> {
        &self.pointer
    }

    pub fn neighbourhoods(&self) -> &BTreeMap<usize, Vec<WorldSet>> {
        &self.neighbourhoods
    }

    pub fn neighbourhood(&self, world: usize) -> &[WorldSet] {
        self.neighbourhoods
            .get(&world)
            .map_or(&[], |f| f.as_slice())
    }

    fn blackbox_set(&self, truth: WorldSet) -> WorldSet {
        let interior = self.topology.interior(truth);
        let n = self.topology.universe();
        WorldSet::from_worlds(
            n,
            (0..n).filter(|w| {
                if self.y1.contains(*w) {
                    self.pointer.get(w).is_some_and(|v| interior.contains(*v))
                } else {
                    self.y2.contains(*w) && self.neighbourhood(*w).contains(&truth)
                }
            }),
        )
    }
}

pub fn validate_gtff(m: &GtffModel) -> ValidationReport {
    let mut report = ValidationReport::new();
    let inside = m.topology.union_of_opens();
    let overlap = m.y1.intersection(m.y2);
    if !overlap.is_empty() {
        report.push("partition-overlap", vec![Witness::Set(overlap)]);
    }
    let uncovered = m.y1.union(m.y2).complement();
    if !uncovered.is_empty() {
        report.push("partition-cover", vec![Witness::Set(uncovered)]);
    }
    for w in m.y1.iter().filter(|w| !m.pointer.contains_key(w)) {
        report.push(
            "f-domain",
            vec![
                Witness::World(w),
                Witness::Note("is in Y1 but f is undefined there".into()),
            ],
        );
    }
    for (&w, &v) in &m.pointer {
        if !m.y1.contains(w) {
            report.push(
                "f-domain",
                vec![
                    Witness::World(w),
                    Witness::Note("is outside Y1 but f is defined there".into()),
                ],
            );
        }
        if !inside.contains(v) {
            report.push(
                "f-range",
                vec![
                    Witness::World(w),
                    Witness::Note("points to".into()),
                    Witness::World(v),
                    Witness::Note("which is outside ⋃μ".into()),
                ],
            );
        }
    }
    for (&w, family) in &m.neighbourhoods {
        if !m.y2.contains(w) && !family.is_empty() {
            report.push(
                "n-domain",
                vec![
                    Witness::World(w),
                    Witness::Note("is outside Y2 but N is defined there".into()),
                ],
            );
        }
    }
    report
}

pub fn validate_gtfi(m: &GtffModel) -> ValidationReport {
    let mut report = validate_gtff(m);
    let inside = m.topology.union_of_opens();
    let outside = inside.difference(m.y1);
    if !outside.is_empty() {
        report.push(
            "gtfi-cover",
            vec![
                Witness::Set(outside),
                Witness::Note("lies in ⋃μ but not in Y1".into()),
            ],
        );
    }
    for w in inside.iter() {
        if m.pointer.get(&w) != Some(&w) {
            report.push(
                "gtfi-identity",
                vec![
                    Witness::World(w),
                    Witness::Note("is in ⋃μ but f does not fix it".into()),
                ],
            );
        }
    }
    report
}

impl Semantics for GtffModel {
    fn universe(&self) -> usize {
        self.topology.universe()
    }

    fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    fn supports(&self, modality: Modality) -> bool {
        matches!(modality, Modality::Box | Modality::BlackBox)
    }

    fn necessity(&self, modality: Modality, truth: WorldSet) -> WorldSet {
        match modality {
            Modality::Box => self.topology.interior(truth),
            Modality::BlackBox => self.blackbox_set(truth),
            Modality::Bullet => unreachable!("• is rejected before evaluation"),
        }
    }

    fn kind_name(&self) -> &'static str {
        "GTFF"
    }
}

/// Schemas reported by default: `M, T, 4, C, K, N, D` for `□`, `M` for `■`,
/// and `GJ`.
pub fn default_schemas() -> Vec<AxiomSchema> {
    let mut out: Vec<AxiomSchema> = [
        SchemaKind::M,
        SchemaKind::T,
        SchemaKind::Four,
        SchemaKind::C,
        SchemaKind::K,
        SchemaKind::N,
        SchemaKind::D,
    ]
    .into_iter()
    .map(AxiomSchema::boxed)
    .collect();
    out.push(AxiomSchema::GJ);
    out.push(AxiomSchema::new(SchemaKind::M, Modality::BlackBox));
    out
}

pub fn axiom_report(
    m: &GtffModel,
    schemas: &[AxiomSchema],
    bound: &FormulaBound,
) -> Result<Vec<SchemaVerdict>, EvalError> {
    schemas.iter().map(|s| check_schema(m, *s, bound)).collect()
}

/// Extensionality of `modality` over every enumerated pair with equal truth
/// sets; `None` means the rule is admissible up to the bound.
pub fn rule_admissibility(
    m: &GtffModel,
    modality: Modality,
    bound: &FormulaBound,
) -> Result<Option<RuleFailure>, EvalError> {
    check_extensionality(m, modality, bound)
}

/// A world and a formula instantiating one of the world-level properties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedFormula {
    pub world: usize,
    pub formula: Formula,
}

/// Outcome of the world-level checks on a GTFI-model.
///
/// `box_agreement` and `y1_seriality` are universal claims, so `None` means
/// no failure was found. `orphan_gap` and `y2_gap` are existence claims, so
/// `Some` carries a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticProperties {
    /// A world of `⋃μ` refuting `■φ → □φ`.
    pub box_agreement: Option<PointedFormula>,
    /// A world of `Y1` refuting `■φ → ◆φ`.
    pub y1_seriality: Option<PointedFormula>,
    /// A world of `Y1 \ ⋃μ` refuting `■ψ → ◇ψ`.
    pub orphan_gap: Option<PointedFormula>,
    /// A world of `Y2` refuting `■φ → ◆φ`.
    pub y2_gap: Option<PointedFormula>,
    pub formulas_checked: usize,
}

impl SemanticProperties {
    pub fn universal_claims_hold(&self) -> bool {
        self.box_agreement.is_none() && self.y1_seriality.is_none()
    }
}

fn black_diamond(f: Formula) -> Formula {
    Formula::BlackDiamond(Box::new(f))
}

pub fn semantic_properties(
    m: &GtffModel,
    bound: &FormulaBound,
) -> Result<SemanticProperties, EvalError> {
    let table = Enumeration::from_bound(bound, &[Modality::Box, Modality::BlackBox]);
    let truths = truth_table(m, &table)?;
    let inside = m.topology.union_of_opens();
    let y1_orphans = m.y1.difference(inside);
    let mut report = SemanticProperties {
        box_agreement: None,
        y1_seriality: None,
        orphan_gap: None,
        y2_gap: None,
        formulas_checked: table.len(),
    };
    let first =
        |slot: &mut Option<PointedFormula>, region: WorldSet, formula: &dyn Fn() -> Formula| {
            if slot.is_none() {
                if let Some(world) = region.first() {
                    *slot = Some(PointedFormula {
                        world,
                        formula: formula(),
                    });
                }
            }
        };
    for (t, i) in definable_sets(&truths) {
        let phi = table.formula(i);
        let boxed = m.necessity(Modality::Box, t);
        let black = m.necessity(Modality::BlackBox, t);
        let diamond = m.necessity(Modality::Box, t.complement()).complement();
        let black_dia = m.necessity(Modality::BlackBox, t.complement()).complement();
        let fails = |consequent: WorldSet| black.difference(consequent);

        first(
            &mut report.box_agreement,
            fails(boxed).intersection(inside),
            &|| {
                Formula::implies(
                    Formula::nec(Modality::BlackBox, phi.clone()),
                    Formula::nec(Modality::Box, phi.clone()),
                )
            },
        );
        let serial = || {
            Formula::implies(
                Formula::nec(Modality::BlackBox, phi.clone()),
                black_diamond(phi.clone()),
            )
        };
        first(
            &mut report.y1_seriality,
            fails(black_dia).intersection(m.y1),
            &serial,
        );
        first(
            &mut report.y2_gap,
            fails(black_dia).intersection(m.y2),
            &serial,
        );
        first(
            &mut report.orphan_gap,
            fails(diamond).intersection(y1_orphans),
            &|| {
                Formula::implies(
                    Formula::nec(Modality::BlackBox, phi.clone()),
                    Formula::Diamond(Box::new(phi.clone())),
                )
            },
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::semantics::{forces, truth_set};

    fn s(ws: &[usize]) -> WorldSet {
        WorldSet::from_worlds(3, ws.iter().copied())
    }

    fn gtfi(pointer: &[(usize, usize)], n_c: Vec<WorldSet>, val: &[(&str, &[usize])]) -> GtffModel {
        let t = GenTopology::new(3, vec![s(&[]), s(&[0])]).unwrap();
        GtffModel::new(
            t,
            s(&[0, 1]),
            s(&[2]),
            pointer.iter().copied().collect(),
            BTreeMap::from([(2, n_c)]),
            val.iter().map(|(k, v)| (k.to_string(), s(v))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn validation_examples() {
        let m = gtfi(&[(0, 0), (1, 0)], vec![s(&[0, 1])], &[]);
        assert!(validate_gtfi(&m).valid());
        let m = gtfi(&[(1, 0)], vec![s(&[0, 1])], &[]);
        let r = validate_gtfi(&m);
        assert!(r.has_rule("gtfi-identity"));
        assert!(r.has_rule("f-domain"));

        let t = GenTopology::new(1, vec![WorldSet::empty(1), WorldSet::full(1)]).unwrap();
        let one = WorldSet::full(1);
        let m = GtffModel::new(
            t,
            one,
            one,
            BTreeMap::from([(0, 0)]),
            BTreeMap::new(),
            Valuation::new(),
        )
        .unwrap();
        assert!(validate_gtff(&m).has_rule("partition-overlap"));
    }

    #[test]
    fn forcing_examples() {
        let m = gtfi(
            &[(0, 0), (1, 0)],
            vec![s(&[0, 1])],
            &[("p", &[0]), ("q", &[0, 1])],
        );
        let holds = |w: usize, text: &str| forces(&m, w, &parse(text).unwrap()).unwrap();
        assert!(holds(0, "[]p"));
        assert!(!holds(1, "[]p"));
        assert!(holds(1, "[b]p"));
        assert!(!holds(2, "[b]p"));
        assert!(holds(2, "[b]q"));
        assert!(holds(0, "[b]p -> []p"));
        assert!(truth_set(&m, &parse("*p").unwrap()).is_err());
    }

    #[test]
    fn extensional_reading_of_n() {
        let m = gtfi(
            &[(0, 0), (1, 0)],
            vec![s(&[0, 1])],
            &[("p", &[0, 1]), ("q", &[0, 1])],
        );
        for text in ["[b](p & q)", "[b](q & p)", "[b]~~p", "[b]p"] {
            assert!(forces(&m, 2, &parse(text).unwrap()).unwrap(), "{text}");
        }
        let bound = FormulaBound::new(&["p", "q"], 4);
        assert_eq!(
            rule_admissibility(&m, Modality::BlackBox, &bound).unwrap(),
            None
        );
        assert_eq!(rule_admissibility(&m, Modality::Box, &bound).unwrap(), None);
    }

    #[test]
    fn axioms_on_gtfi() {
        let m = gtfi(
            &[(0, 0), (1, 0)],
            vec![s(&[0, 1])],
            &[("p", &[0]), ("q", &[1, 2])],
        );
        let bound = FormulaBound::new(&["p", "q"], 3);
        let verdicts = axiom_report(&m, &default_schemas(), &bound).unwrap();
        let verdict = |id: &str| {
            let schema: AxiomSchema = id.parse().unwrap();
            verdicts
                .iter()
                .find(|v| v.schema == schema)
                .unwrap()
                .clone()
        };
        for id in ["M", "T", "4", "GJ"] {
            assert!(
                verdict(id).valid(),
                "{id} failed: {:?}",
                verdict(id).counterexample
            );
        }
        // b and c lie outside every open, so □⊤ fails there
        assert!(!verdict("N").valid());
        // N_c is not closed upwards
        assert_eq!(verdict("M_b").counterexample.unwrap().world, 2);
    }

    #[test]
    fn semantic_property_examples() {
        let bound = FormulaBound::new(&["p"], 4);
        let m = gtfi(&[(0, 0), (1, 0)], vec![s(&[0]), s(&[1, 2])], &[("p", &[0])]);
        assert!(forces(&m, 2, &parse("[b]p & [b]~p").unwrap()).unwrap());
        let r = semantic_properties(&m, &bound).unwrap();
        assert!(r.universal_claims_hold());
        let gap = r.y2_gap.unwrap();
        assert_eq!(gap.world, 2);
        assert!(!forces(&m, 2, &gap.formula).unwrap());
        // ◇ holds at every world outside ⋃μ, so no orphan gap exists
        assert_eq!(r.orphan_gap, None);
        assert!(forces(&m, 1, &parse("[b]p").unwrap()).unwrap());
        assert!(forces(&m, 1, &parse("<>p").unwrap()).unwrap());
    }
}
