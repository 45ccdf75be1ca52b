//! Generalized topological models with an `F` map.
//!
//! Each world carries a family `F_w` of opens. Inside `⋃μ` the family is fixed
//! by the topology (all opens containing `w`); orphaned worlds outside `⋃μ`
//! may carry any family of opens, including none or `{∅}`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{Enumeration, FormulaBound, Modality};
use crate::report::{ValidationReport, Witness};
use crate::semantics::{truth_table, EvalError, Semantics, Valuation};
use crate::topology::GenTopology;
use crate::worldset::{canonical_family, UpSet, WorldSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GtfError {
    #[error("expected {expected} world families, found {found}")]
    FamilyCount { expected: usize, found: usize },
    #[error("set {0} does not fit the model's universe")]
    UniverseMismatch(WorldSet),
    #[error("{0} is not an open set")]
    NotOpen(WorldSet),
    #[error("world {0} is outside the universe")]
    WorldOutOfRange(usize),
}

/// A topology together with one family of sets per world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GtfFrame {
    topology: GenTopology,
    families: Vec<Vec<WorldSet>>,
    // (X, X⁻¹) for every X occurring in some F_w
    inverses: Vec<(WorldSet, WorldSet)>,
}

impl GtfFrame {
    /// Builds a frame from explicit families. Structural constraints are
    /// checked separately by [`validate_gtf`].
    pub fn new(topology: GenTopology, families: Vec<Vec<WorldSet>>) -> Result<Self, GtfError> {
        let n = topology.universe();
        if families.len() != n {
            return Err(GtfError::FamilyCount {
                expected: n,
                found: families.len(),
            });
        }
        if let Some(bad) = families.iter().flatten().find(|s| s.universe() != n) {
            return Err(GtfError::UniverseMismatch(*bad));
        }
        let families: Vec<Vec<WorldSet>> = families.into_iter().map(canonical_family).collect();
        let members = canonical_family(families.iter().flatten().copied().collect());
        let inverses = members
            .into_iter()
            .map(|x| {
                let inv = WorldSet::from_worlds(
                    n,
                    (0..n).filter(|z| families[*z].binary_search(&x).is_ok()),
                );
                (x, inv)
            })
            .collect();
        Ok(GtfFrame {
            topology,
            families,
            inverses,
        })
    }

    /// Materializes `F` on `⋃μ` and takes orphan families from `orphans`
    /// (missing orphans get the empty family). Entries for worlds in `⋃μ` are
    /// ignored.
    pub fn determined(
        topology: GenTopology,
        orphans: &BTreeMap<usize, Vec<WorldSet>>,
    ) -> Result<Self, GtfError> {
        let n = topology.universe();
        let inside = topology.union_of_opens();
        let families = (0..n)
            .map(|w| {
                if inside.contains(w) {
                    determined_family(&topology, w)
                } else {
                    orphans.get(&w).cloned().unwrap_or_default()
                }
            })
            .collect();
        Self::new(topology, families)
    }

    pub fn topology(&self) -> &GenTopology {
        &self.topology
    }

    pub fn universe(&self) -> usize {
        self.topology.universe()
    }

    pub fn family(&self, world: usize) -> &[WorldSet] {
        &self.families[world]
    }

    pub fn families(&self) -> &[Vec<WorldSet>] {
        &self.families
    }

    /// `A⁻¹ = {z : A ∈ F_z}` for an open `A`.
    pub fn inverse(&self, a: WorldSet) -> Result<WorldSet, GtfError> {
        if a.universe() != self.universe() {
            return Err(GtfError::UniverseMismatch(a));
        }
        if !self.topology.is_open(a) {
            return Err(GtfError::NotOpen(a));
        }
        Ok(self.inverse_of_member(a))
    }

    fn inverse_of_member(&self, a: WorldSet) -> WorldSet {
        self.inverses
            .iter()
            .find(|(x, _)| *x == a)
            .map(|(_, inv)| *inv)
            .unwrap_or_else(|| WorldSet::empty(self.universe()))
    }

    /// Pairs `(X, X⁻¹)` for every set occurring in some family.
    pub fn inverse_table(&self) -> &[(WorldSet, WorldSet)] {
        &self.inverses
    }

    /// Generalized topological neighbourhoods: subsets of `⋃μ` containing
    /// some member of `F_w`.
    pub fn neighbourhoods(&self, world: usize) -> UpSet {
        UpSet::new(self.topology.union_of_opens(), &self.families[world])
    }

    /// No world's family contains `∅`.
    pub fn is_consistent(&self) -> bool {
        self.families
            .iter()
            .all(|f| f.first().is_none_or(|s| !s.is_empty()))
    }

    pub fn box_set(&self, truth: WorldSet) -> WorldSet {
        self.inverses
            .iter()
            .filter(|(x, _)| x.is_subset(truth))
            .fold(WorldSet::empty(self.universe()), |acc, (_, inv)| {
                acc.union(*inv)
            })
    }

    pub fn bullet_set(&self, truth: WorldSet) -> WorldSet {
        self.inverses
            .iter()
            .filter(|(_, inv)| inv.is_subset(truth))
            .fold(WorldSet::empty(self.universe()), |acc, (_, inv)| {
                acc.union(*inv)
            })
    }
}

/// `{X ∈ μ : w ∈ X}`.
pub fn determined_family(topology: &GenTopology, world: usize) -> Vec<WorldSet> {
    topology.opens_containing(world).collect()
}

/// Checks the two constraints on `F`: fixed by `μ` inside `⋃μ`, a family of
/// opens elsewhere.
pub fn validate_gtf(frame: &GtfFrame) -> ValidationReport {
    let mut report = ValidationReport::new();
    let t = frame.topology();
    let inside = t.union_of_opens();
    for w in 0..frame.universe() {
        let family = frame.family(w);
        if inside.contains(w) {
            let expected = determined_family(t, w);
            for missing in expected.iter().filter(|x| !family.contains(x)) {
                report.push(
                    "determined-family",
                    vec![
                        Witness::Note("F of".into()),
                        Witness::World(w),
                        Witness::Note("is missing the open".into()),
                        Witness::Set(*missing),
                    ],
                );
            }
            for extra in family.iter().filter(|x| !expected.contains(x)) {
                report.push(
                    "determined-family",
                    vec![
                        Witness::Note("F of".into()),
                        Witness::World(w),
                        Witness::Note("contains".into()),
                        Witness::Set(*extra),
                        Witness::Note("which is not an open containing it".into()),
                    ],
                );
            }
        } else {
            for bad in family.iter().filter(|x| !t.is_open(**x)) {
                report.push(
                    "family-not-open",
                    vec![
                        Witness::Note("F of".into()),
                        Witness::World(w),
                        Witness::Note("contains the non-open set".into()),
                        Witness::Set(*bad),
                    ],
                );
            }
        }
    }
    report
}

/// A frame with a valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GtfModel {
    pub frame: GtfFrame,
    pub valuation: Valuation,
}

impl GtfModel {
    pub fn new(frame: GtfFrame, valuation: Valuation) -> Result<Self, GtfError> {
        if let Some(bad) = valuation
            .values()
            .find(|s| s.universe() != frame.universe())
        {
            return Err(GtfError::UniverseMismatch(*bad));
        }
        Ok(GtfModel { frame, valuation })
    }

    pub fn topology(&self) -> &GenTopology {
        self.frame.topology()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_gtf(&self.frame)
    }
}

impl Semantics for GtfModel {
    fn universe(&self) -> usize {
        self.frame.universe()
    }

    fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    fn supports(&self, modality: Modality) -> bool {
        matches!(modality, Modality::Box | Modality::Bullet)
    }

    fn necessity(&self, modality: Modality, truth: WorldSet) -> WorldSet {
        match modality {
            Modality::Box => self.frame.box_set(truth),
            Modality::Bullet => self.frame.bullet_set(truth),
            Modality::BlackBox => unreachable!("■ is rejected before evaluation"),
        }
    }

    fn kind_name(&self) -> &'static str {
        "GTF"
    }
}

/// Brute-force check of the four regularities of GTF-models over all
/// formulas within `bound`:
///
/// 1. if `φ` holds on `⋃μ` and `∅ ∉ F_v` for an orphan `v`, then `v ⊩ ◇φ`;
/// 2. if `φ` holds on `⋃μ` and `F_v ≠ ∅`, then `v ⊩ □φ`;
/// 3. if every family is nonempty and `φ` holds on `⋃μ`, `□φ` holds everywhere;
/// 4. an orphan and a world of `⋃μ` with equal families agree on every
///    combination of `□`-formulas.
pub fn check_regularities(
    m: &GtfModel,
    bound: &FormulaBound,
) -> Result<ValidationReport, EvalError> {
    let mut report = ValidationReport::new();
    let table = Enumeration::from_bound(bound, &[Modality::Box]);
    let truths = truth_table(m, &table)?;
    let frame = &m.frame;
    let inside = m.topology().union_of_opens();
    let orphans = m.topology().orphans();
    let all_nonempty = frame.families().iter().all(|f| !f.is_empty());

    for t in truths.iter().copied() {
        if !inside.is_subset(t) {
            continue;
        }
        let box_t = frame.box_set(t);
        let diamond_t = frame.box_set(t.complement()).complement();
        for v in orphans.iter() {
            let family = frame.family(v);
            if !family.contains(&WorldSet::empty(m.universe())) && !diamond_t.contains(v) {
                report.push("regularity-1", vec![Witness::World(v), Witness::Set(t)]);
            }
            if !family.is_empty() && !box_t.contains(v) {
                report.push("regularity-2", vec![Witness::World(v), Witness::Set(t)]);
            }
        }
        if all_nonempty && !box_t.is_full() {
            report.push("regularity-3", vec![Witness::Set(t)]);
        }
    }

    for v in orphans.iter() {
        for w in inside
            .iter()
            .filter(|w| frame.family(*w) == frame.family(v))
        {
            let agree = |i: usize| truths[i].contains(v) == truths[i].contains(w);
            let fragment: Vec<usize> = (0..table.len())
                .filter(|i| table.formula(*i).is_box_combination())
                .collect();
            if let Some(bad) = fragment.into_iter().find(|i| !agree(*i)) {
                report.push(
                    "regularity-4",
                    vec![
                        Witness::World(v),
                        Witness::World(w),
                        Witness::Note(table.formula(bad).to_string()),
                    ],
                );
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, Formula};
    use crate::semantics::{forces, truth_set};
    use crate::topology::ExampleSpace;

    fn s(ws: &[usize]) -> WorldSet {
        WorldSet::from_worlds(3, ws.iter().copied())
    }

    fn ex1_frame(f_c: Vec<WorldSet>) -> GtfFrame {
        let t = ExampleSpace::Ex1.topology().unwrap();
        GtfFrame::determined(t, &BTreeMap::from([(2, f_c)])).unwrap()
    }

    fn model(frame: GtfFrame, val: &[(&str, &[usize])]) -> GtfModel {
        let val = val.iter().map(|(k, ws)| (k.to_string(), s(ws))).collect();
        GtfModel::new(frame, val).unwrap()
    }

    #[test]
    fn validate_examples() {
        let frame = ex1_frame(vec![]);
        assert_eq!(frame.family(0), &[s(&[0]), s(&[0, 1])]);
        assert!(validate_gtf(&frame).valid());

        let t = ExampleSpace::Ex1.topology().unwrap();
        let broken = GtfFrame::new(
            t.clone(),
            vec![vec![s(&[0])], vec![s(&[1]), s(&[0, 1])], vec![]],
        )
        .unwrap();
        let r = validate_gtf(&broken);
        assert!(r.has_rule("determined-family"));
        assert_eq!(r.violations[0].witnesses[3], Witness::Set(s(&[0, 1])));

        let r = validate_gtf(&ex1_frame(vec![s(&[2])]));
        assert!(r.has_rule("family-not-open"));
    }

    #[test]
    fn inverse_examples() {
        let frame = ex1_frame(vec![]);
        assert_eq!(frame.inverse(s(&[0])).unwrap(), s(&[0]));
        assert_eq!(frame.inverse(s(&[])).unwrap(), s(&[]));
        let frame = ex1_frame(vec![s(&[0])]);
        assert_eq!(frame.inverse(s(&[0])).unwrap(), s(&[0, 2]));
        assert_eq!(frame.inverse(s(&[2])), Err(GtfError::NotOpen(s(&[2]))));
        let frame = ex1_frame(vec![s(&[])]);
        assert_eq!(frame.inverse(s(&[])).unwrap(), s(&[2]));
    }

    #[test]
    fn impossible_world_forces_no_box() {
        let m = model(ex1_frame(vec![]), &[("p", &[0, 1])]);
        assert!(forces(&m, 0, &parse("[]p").unwrap()).unwrap());
        for text in ["p", "q", "true", "false", "[]p", "p & ~p"] {
            let phi = parse(text).unwrap();
            assert!(!forces(&m, 2, &Formula::Box(Box::new(phi.clone()))).unwrap());
            assert!(forces(&m, 2, &Formula::Diamond(Box::new(phi))).unwrap());
        }
    }

    #[test]
    fn t_fails_outside_union() {
        let m = model(ex1_frame(vec![s(&[0])]), &[("p", &[0])]);
        assert!(forces(&m, 2, &parse("[]p").unwrap()).unwrap());
        assert!(!forces(&m, 2, &parse("p").unwrap()).unwrap());
        assert!(!forces(&m, 2, &parse("[]p -> p").unwrap()).unwrap());
    }

    #[test]
    fn c_fails_in_overlapping_topology() {
        let t = crate::topology::close_under_unions(3, &[s(&[0, 1]), s(&[1, 2])]).unwrap();
        let frame = GtfFrame::determined(t, &BTreeMap::new()).unwrap();
        assert_eq!(frame.family(1), &[s(&[0, 1]), s(&[1, 2]), s(&[0, 1, 2])]);
        let m = model(frame, &[("p", &[0, 1]), ("q", &[1, 2])]);
        assert!(forces(&m, 1, &parse("[]p & []q").unwrap()).unwrap());
        assert!(!forces(&m, 1, &parse("[](p & q)").unwrap()).unwrap());
    }

    #[test]
    fn box_rejects_blackbox() {
        let m = model(ex1_frame(vec![]), &[]);
        assert!(truth_set(&m, &parse("[b]p").unwrap()).is_err());
    }

    #[test]
    fn neighbourhood_examples() {
        let frame = ex1_frame(vec![]);
        assert_eq!(frame.neighbourhoods(0).members(), vec![s(&[0]), s(&[0, 1])]);
        assert!(frame.neighbourhoods(2).members().is_empty());
        let frame = ex1_frame(vec![s(&[])]);
        assert_eq!(frame.neighbourhoods(2).members().len(), 4);
    }

    #[test]
    fn consistency_examples() {
        assert!(ex1_frame(vec![]).is_consistent());
        assert!(!ex1_frame(vec![s(&[])]).is_consistent());
        let strong = ExampleSpace::Ex2.topology().unwrap();
        assert!(GtfFrame::determined(strong, &BTreeMap::new())
            .unwrap()
            .is_consistent());
    }

    #[test]
    fn regularity_examples() {
        let bound = FormulaBound::new(&["p", "q"], 4);
        // all families nonempty, p holds on ⋃μ
        let m = model(ex1_frame(vec![s(&[0])]), &[("p", &[0, 1])]);
        assert!(check_regularities(&m, &bound).unwrap().valid());
        assert_eq!(
            truth_set(&m, &parse("[]p").unwrap()).unwrap(),
            s(&[0, 1, 2])
        );
        // orphan sharing F with a
        let m = model(
            ex1_frame(vec![s(&[0]), s(&[0, 1])]),
            &[("p", &[0]), ("q", &[2])],
        );
        assert!(check_regularities(&m, &bound).unwrap().valid());
        // impossible world: ◇ of anything true on ⋃μ
        let m = model(ex1_frame(vec![]), &[("p", &[0, 1])]);
        assert!(forces(&m, 2, &parse("<>p").unwrap()).unwrap());
        assert!(check_regularities(&m, &bound).unwrap().valid());
    }
}
