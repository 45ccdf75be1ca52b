//! Topo-bisimulations between GTF-models, structure-preserving maps, and a
//! bounded modal-equivalence oracle.
//!
//! All three kinds share atomic harmony and differ in the forth/back clauses.
//! Write `R[A]` for the image of `A` under the relation and `R⁻¹[B]` for the
//! preimage. For a related pair `(w, w')`:
//!
//! * kind 0: each open `O ∋ w` has an open `O' ∋ w'` with `O' ⊆ R[O]`, and
//!   back;
//! * kind 1: each nonempty `O ∈ F_w` has some `O' ∈ F_w'` with `O' ⊆ R[O]`,
//!   and back;
//! * kind 2: as kind 1 but comparing `O'⁻¹ ⊆ R[O⁻¹]`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Enumeration, Formula, FormulaBound, Modality};
use crate::gtf::{GtfError, GtfFrame, GtfModel};
use crate::semantics::{first_disagreement, truth_table, EvalError, Semantics, Valuation};
use crate::worldset::WorldSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BisimError {
    #[error("world {world} is outside the {side} model")]
    WorldOutOfRange { side: Side, world: usize },
    #[error("bisimulation kind {0} is not defined (expected 0, 1 or 2)")]
    UnknownKind(u8),
    #[error("map has {found} entries but the source has {expected} worlds")]
    MapSize { expected: usize, found: usize },
    #[error("the map is not {}", .0.join(" and "))]
    Precondition(Vec<&'static str>),
    #[error(transparent)]
    Gtf(#[from] GtfError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BisimKind {
    Zero,
    One,
    Two,
}

impl BisimKind {
    pub const ALL: [BisimKind; 3] = [BisimKind::Zero, BisimKind::One, BisimKind::Two];

    pub fn from_index(k: u8) -> Result<Self, BisimError> {
        match k {
            0 => Ok(BisimKind::Zero),
            1 => Ok(BisimKind::One),
            2 => Ok(BisimKind::Two),
            other => Err(BisimError::UnknownKind(other)),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            BisimKind::Zero => 0,
            BisimKind::One => 1,
            BisimKind::Two => 2,
        }
    }
}

/// A set of pairs `(left world, right world)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WorldRelation {
    left: usize,
    right: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl WorldRelation {
    pub fn new(
        left: usize,
        right: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, BisimError> {
        let pairs: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        for &(w, v) in &pairs {
            if w >= left {
                return Err(BisimError::WorldOutOfRange {
                    side: Side::Left,
                    world: w,
                });
            }
            if v >= right {
                return Err(BisimError::WorldOutOfRange {
                    side: Side::Right,
                    world: v,
                });
            }
        }
        Ok(WorldRelation { left, right, pairs })
    }

    pub fn identity(n: usize) -> Self {
        WorldRelation {
            left: n,
            right: n,
            pairs: (0..n).map(|w| (w, w)).collect(),
        }
    }

    pub fn graph(map: &ModelMap) -> Self {
        WorldRelation {
            left: map.source(),
            right: map.target(),
            pairs: map
                .images()
                .iter()
                .enumerate()
                .map(|(w, v)| (w, *v))
                .collect(),
        }
    }

    pub fn left_size(&self) -> usize {
        self.left
    }

    pub fn right_size(&self) -> usize {
        self.right
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, w: usize, v: usize) -> bool {
        self.pairs.contains(&(w, v))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_subset(&self, other: &WorldRelation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn union(&self, other: &WorldRelation) -> WorldRelation {
        WorldRelation {
            left: self.left,
            right: self.right,
            pairs: self.pairs.union(&other.pairs).copied().collect(),
        }
    }

    fn adjacency(&self) -> Adjacency {
        let mut forward = vec![WorldSet::empty(self.right); self.left];
        let mut backward = vec![WorldSet::empty(self.left); self.right];
        for &(w, v) in &self.pairs {
            forward[w].insert(v);
            backward[v].insert(w);
        }
        Adjacency { forward, backward }
    }
}

struct Adjacency {
    forward: Vec<WorldSet>,
    backward: Vec<WorldSet>,
}

impl Adjacency {
    fn image(&self, a: WorldSet, right: usize) -> WorldSet {
        a.iter()
            .fold(WorldSet::empty(right), |acc, w| acc.union(self.forward[w]))
    }

    fn preimage(&self, b: WorldSet, left: usize) -> WorldSet {
        b.iter()
            .fold(WorldSet::empty(left), |acc, v| acc.union(self.backward[v]))
    }
}

/// Which clause a pair violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BisimClause {
    EmptyRelation,
    AtomicHarmony {
        var: String,
    },
    /// No right-hand witness for this left trigger set.
    Forth {
        trigger: WorldSet,
    },
    /// No left-hand witness for this right trigger set.
    Back {
        trigger: WorldSet,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisimFailure {
    pub pair: Option<(usize, usize)>,
    pub clause: BisimClause,
}

impl BisimFailure {
    pub fn render(&self, left_names: &[String], right_names: &[String]) -> String {
        let name =
            |names: &[String], w: usize| names.get(w).cloned().unwrap_or_else(|| format!("w{w}"));
        let pair = self
            .pair
            .map(|(w, v)| format!(" at ({}, {})", name(left_names, w), name(right_names, v)))
            .unwrap_or_default();
        match &self.clause {
            BisimClause::EmptyRelation => "the relation is empty".into(),
            BisimClause::AtomicHarmony { var } => format!("atomic harmony fails for {var}{pair}"),
            BisimClause::Forth { trigger } => {
                format!("forth fails{pair} for {}", trigger.display_with(left_names))
            }
            BisimClause::Back { trigger } => {
                format!("back fails{pair} for {}", trigger.display_with(right_names))
            }
        }
    }
}

fn harmony_failure(m1: &GtfModel, w: usize, m2: &GtfModel, v: usize) -> Option<String> {
    let vars: BTreeSet<&String> = m1.valuation.keys().chain(m2.valuation.keys()).collect();
    vars.into_iter()
        .find(|q| m1.var_truth(q).contains(w) != m2.var_truth(q).contains(v))
        .cloned()
}

fn check_pair(
    kind: BisimKind,
    m1: &GtfModel,
    m2: &GtfModel,
    adj: &Adjacency,
    w: usize,
    v: usize,
) -> Option<BisimClause> {
    if let Some(var) = harmony_failure(m1, w, m2, v) {
        return Some(BisimClause::AtomicHarmony { var });
    }
    let (n1, n2) = (m1.frame.universe(), m2.frame.universe());
    let (f1, f2) = (&m1.frame, &m2.frame);
    match kind {
        BisimKind::Zero => {
            let (t1, t2) = (f1.topology(), f2.topology());
            for o in t1.opens_containing(w) {
                let img = adj.image(o, n2);
                if !t2.opens_containing(v).any(|o2| o2.is_subset(img)) {
                    return Some(BisimClause::Forth { trigger: o });
                }
            }
            for o2 in t2.opens_containing(v) {
                let pre = adj.preimage(o2, n1);
                if !t1.opens_containing(w).any(|o| o.is_subset(pre)) {
                    return Some(BisimClause::Back { trigger: o2 });
                }
            }
        }
        BisimKind::One => {
            for o in f1.family(w).iter().filter(|o| !o.is_empty()) {
                let img = adj.image(*o, n2);
                if !f2.family(v).iter().any(|o2| o2.is_subset(img)) {
                    return Some(BisimClause::Forth { trigger: *o });
                }
            }
            for o2 in f2.family(v).iter().filter(|o| !o.is_empty()) {
                let pre = adj.preimage(*o2, n1);
                if !f1.family(w).iter().any(|o| o.is_subset(pre)) {
                    return Some(BisimClause::Back { trigger: *o2 });
                }
            }
        }
        BisimKind::Two => {
            let inv1 = |o: WorldSet| f1.inverse(o).unwrap_or(WorldSet::empty(n1));
            let inv2 = |o: WorldSet| f2.inverse(o).unwrap_or(WorldSet::empty(n2));
            for o in f1.family(w).iter().filter(|o| !o.is_empty()) {
                let img = adj.image(inv1(*o), n2);
                if !f2.family(v).iter().any(|o2| inv2(*o2).is_subset(img)) {
                    return Some(BisimClause::Forth { trigger: *o });
                }
            }
            for o2 in f2.family(v).iter().filter(|o| !o.is_empty()) {
                let pre = adj.preimage(inv2(*o2), n1);
                if !f1.family(w).iter().any(|o| inv1(*o).is_subset(pre)) {
                    return Some(BisimClause::Back { trigger: *o2 });
                }
            }
        }
    }
    None
}

fn check_sizes(m1: &GtfModel, m2: &GtfModel, rel: &WorldRelation) -> Result<(), BisimError> {
    if let Some(&(w, _)) = rel.pairs.iter().find(|(w, _)| *w >= m1.frame.universe()) {
        return Err(BisimError::WorldOutOfRange {
            side: Side::Left,
            world: w,
        });
    }
    if let Some(&(_, v)) = rel.pairs.iter().find(|(_, v)| *v >= m2.frame.universe()) {
        return Err(BisimError::WorldOutOfRange {
            side: Side::Right,
            world: v,
        });
    }
    Ok(())
}

/// Checks every clause for every pair and returns the first violation, or
/// `None` if `rel` is a bisimulation of the given kind.
pub fn is_bisimulation(
    kind: BisimKind,
    m1: &GtfModel,
    m2: &GtfModel,
    rel: &WorldRelation,
) -> Result<Option<BisimFailure>, BisimError> {
    check_sizes(m1, m2, rel)?;
    if rel.is_empty() {
        return Ok(Some(BisimFailure {
            pair: None,
            clause: BisimClause::EmptyRelation,
        }));
    }
    let rel = WorldRelation {
        left: m1.frame.universe(),
        right: m2.frame.universe(),
        pairs: rel.pairs.clone(),
    };
    let adj = rel.adjacency();
    Ok(rel.pairs.iter().find_map(|&(w, v)| {
        check_pair(kind, m1, m2, &adj, w, v).map(|clause| BisimFailure {
            pair: Some((w, v)),
            clause,
        })
    }))
}

/// Greatest fixpoint: start from all atomically harmonious pairs and drop
/// violating pairs until none remain. The result may be empty.
pub fn largest_bisimulation(kind: BisimKind, m1: &GtfModel, m2: &GtfModel) -> WorldRelation {
    let (n1, n2) = (m1.frame.universe(), m2.frame.universe());
    let mut rel = WorldRelation {
        left: n1,
        right: n2,
        pairs: (0..n1)
            .flat_map(|w| (0..n2).map(move |v| (w, v)))
            .filter(|&(w, v)| harmony_failure(m1, w, m2, v).is_none())
            .collect(),
    };
    loop {
        let adj = rel.adjacency();
        let doomed: Vec<(usize, usize)> = rel
            .pairs
            .iter()
            .copied()
            .filter(|&(w, v)| check_pair(kind, m1, m2, &adj, w, v).is_some())
            .collect();
        if doomed.is_empty() {
            return rel;
        }
        for p in doomed {
            rel.pairs.remove(&p);
        }
    }
}

/// A total function between universes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelMap {
    target: usize,
    images: Vec<usize>,
}

impl ModelMap {
    pub fn new(target: usize, images: Vec<usize>) -> Result<Self, BisimError> {
        if let Some(&bad) = images.iter().find(|v| **v >= target) {
            return Err(BisimError::WorldOutOfRange {
                side: Side::Right,
                world: bad,
            });
        }
        Ok(ModelMap { target, images })
    }

    pub fn identity(n: usize) -> Self {
        ModelMap {
            target: n,
            images: (0..n).collect(),
        }
    }

    pub fn source(&self) -> usize {
        self.images.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, w: usize) -> usize {
        self.images[w]
    }

    pub fn image(&self, a: WorldSet) -> WorldSet {
        WorldSet::from_worlds(self.target, a.iter().map(|w| self.images[w]))
    }

    pub fn preimage(&self, b: WorldSet) -> WorldSet {
        WorldSet::from_worlds(
            self.images.len(),
            (0..self.images.len()).filter(|w| b.contains(self.images[*w])),
        )
    }

    pub fn is_surjective(&self) -> bool {
        self.image(WorldSet::full(self.images.len())).is_full()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MapProperties {
    pub continuous: bool,
    pub open: bool,
    pub f_continuous: bool,
    pub f_open: bool,
}

pub fn map_properties(
    f: &ModelMap,
    frame1: &GtfFrame,
    frame2: &GtfFrame,
) -> Result<MapProperties, BisimError> {
    check_map(f, frame1, frame2)?;
    let (t1, t2) = (frame1.topology(), frame2.topology());
    let n = frame1.universe();
    Ok(MapProperties {
        continuous: t2.opens().iter().all(|g| t1.is_open(f.preimage(*g))),
        open: t1.opens().iter().all(|g| t2.is_open(f.image(*g))),
        f_continuous: (0..n).all(|w| {
            frame2
                .family(f.apply(w))
                .iter()
                .all(|g| frame1.family(w).contains(&f.preimage(*g)))
        }),
        f_open: (0..n).all(|w| {
            frame1
                .family(w)
                .iter()
                .all(|g| frame2.family(f.apply(w)).contains(&f.image(*g)))
        }),
    })
}

fn check_map(f: &ModelMap, frame1: &GtfFrame, frame2: &GtfFrame) -> Result<(), BisimError> {
    if f.source() != frame1.universe() {
        return Err(BisimError::MapSize {
            expected: frame1.universe(),
            found: f.source(),
        });
    }
    if f.target() != frame2.universe() {
        return Err(BisimError::WorldOutOfRange {
            side: Side::Right,
            world: f.target(),
        });
    }
    Ok(())
}

/// Pulls the right valuation back along `f` and returns the resulting left
/// model together with the graph of `f`. Kind 0 needs a continuous open map;
/// kind 1 needs an F-continuous F-open map.
pub fn bisim_from_map(
    kind: BisimKind,
    f: &ModelMap,
    frame1: &GtfFrame,
    m2: &GtfModel,
) -> Result<(GtfModel, WorldRelation), BisimError> {
    let props = map_properties(f, frame1, &m2.frame)?;
    let missing: Vec<&'static str> = match kind {
        BisimKind::Zero => [(props.continuous, "continuous"), (props.open, "open")].to_vec(),
        BisimKind::One => [
            (props.f_continuous, "F-continuous"),
            (props.f_open, "F-open"),
        ]
        .to_vec(),
        BisimKind::Two => return Err(BisimError::UnknownKind(2)),
    }
    .into_iter()
    .filter(|(ok, _)| !ok)
    .map(|(_, name)| name)
    .collect();
    if !missing.is_empty() {
        return Err(BisimError::Precondition(missing));
    }
    let valuation: Valuation = m2
        .valuation
        .iter()
        .map(|(q, s)| (q.clone(), f.preimage(*s)))
        .collect();
    let m1 = GtfModel::new(frame1.clone(), valuation)?;
    Ok((m1, WorldRelation::graph(f)))
}

/// Outcome of a bounded comparison of two pointed models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub formulas_checked: usize,
    pub distinguishing: Option<Formula>,
}

impl EquivalenceReport {
    pub fn equivalent(&self) -> bool {
        self.distinguishing.is_none()
    }
}

/// Compares `(m1, w)` and `(m2, v)` on every formula within `bound` whose only
/// modality is `language`.
pub fn modal_equivalence<L, R>(
    m1: &L,
    w: usize,
    m2: &R,
    v: usize,
    bound: &FormulaBound,
    language: Modality,
) -> Result<EquivalenceReport, EvalError>
where
    L: Semantics + ?Sized,
    R: Semantics + ?Sized,
{
    for (model_size, world) in [(m1.universe(), w), (m2.universe(), v)] {
        if world >= model_size {
            return Err(EvalError::WorldOutOfRange {
                world,
                universe: model_size,
            });
        }
    }
    let table = Enumeration::from_bound(bound, &[language]);
    let (t1, t2) = (truth_table(m1, &table)?, truth_table(m2, &table)?);
    Ok(EquivalenceReport {
        formulas_checked: table.len(),
        distinguishing: first_disagreement(&t1, w, &t2, v).map(|i| table.formula(i)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{ExampleSpace, GenTopology};
    use std::collections::BTreeMap;

    fn ex1_model(p: &[usize]) -> GtfModel {
        let t = ExampleSpace::Ex1.topology().unwrap();
        let frame = GtfFrame::determined(t, &BTreeMap::new()).unwrap();
        let val = BTreeMap::from([("p".to_string(), WorldSet::from_worlds(3, p.iter().copied()))]);
        GtfModel::new(frame, val).unwrap()
    }

    fn point(p: bool) -> GtfModel {
        let t = GenTopology::new(1, vec![WorldSet::empty(1), WorldSet::full(1)]).unwrap();
        let frame = GtfFrame::determined(t, &BTreeMap::new()).unwrap();
        let truth = if p {
            WorldSet::full(1)
        } else {
            WorldSet::empty(1)
        };
        GtfModel::new(frame, BTreeMap::from([("p".to_string(), truth)])).unwrap()
    }

    #[test]
    fn identity_is_every_kind() {
        let m = ex1_model(&[0, 2]);
        for kind in BisimKind::ALL {
            assert_eq!(
                is_bisimulation(kind, &m, &m, &WorldRelation::identity(3)).unwrap(),
                None
            );
        }
    }

    #[test]
    fn collapse_onto_a_point() {
        let (m1, m2) = (ex1_model(&[0, 1]), point(true));
        let rel = WorldRelation::new(3, 1, [(0, 0), (1, 0)]).unwrap();
        assert_eq!(
            is_bisimulation(BisimKind::Zero, &m1, &m2, &rel).unwrap(),
            None
        );

        let with_c = WorldRelation::new(3, 1, [(0, 0), (1, 0), (2, 0)]).unwrap();
        let failure = is_bisimulation(BisimKind::Zero, &m1, &m2, &with_c)
            .unwrap()
            .unwrap();
        assert_eq!(failure.pair, Some((2, 0)));
        assert_eq!(
            failure.clause,
            BisimClause::AtomicHarmony { var: "p".into() }
        );

        assert_eq!(largest_bisimulation(BisimKind::Zero, &m1, &m2), rel);
    }

    #[test]
    fn empty_relation_is_rejected() {
        let m = ex1_model(&[]);
        let empty = WorldRelation::new(3, 3, []).unwrap();
        let failure = is_bisimulation(BisimKind::One, &m, &m, &empty)
            .unwrap()
            .unwrap();
        assert_eq!(failure.clause, BisimClause::EmptyRelation);
        assert!(WorldRelation::new(3, 1, [(0, 1)]).is_err());
    }

    #[test]
    fn disagreeing_models_have_no_bisimulation() {
        let (m1, m2) = (ex1_model(&[0, 1, 2]), point(false));
        for kind in BisimKind::ALL {
            assert!(largest_bisimulation(kind, &m1, &m2).is_empty());
        }
    }

    #[test]
    fn largest_contains_identity() {
        let m = ex1_model(&[1]);
        for kind in BisimKind::ALL {
            let big = largest_bisimulation(kind, &m, &m);
            assert!(WorldRelation::identity(3).is_subset(&big));
            assert_eq!(is_bisimulation(kind, &m, &m, &big).unwrap(), None);
        }
    }

    #[test]
    fn map_property_examples() {
        let m = ex1_model(&[]);
        let props = map_properties(&ModelMap::identity(3), &m.frame, &m.frame).unwrap();
        assert!(props.continuous && props.open && props.f_continuous && props.f_open);

        let constant = ModelMap::new(1, vec![0, 0, 0]).unwrap();
        let props = map_properties(&constant, &m.frame, &point(true).frame).unwrap();
        assert!(!props.continuous);
        assert!(props.open);

        let sub = GenTopology::new(2, WorldSet::full(2).subsets().collect()).unwrap();
        let sub = GtfFrame::determined(sub, &BTreeMap::new()).unwrap();
        let collapse = ModelMap::new(1, vec![0, 0]).unwrap();
        let props = map_properties(&collapse, &sub, &point(true).frame).unwrap();
        assert!(props.continuous && props.open);

        let (left, graph) = bisim_from_map(BisimKind::Zero, &collapse, &sub, &point(true)).unwrap();
        assert_eq!(left.var_truth("p"), WorldSet::full(2));
        assert_eq!(graph, WorldRelation::new(2, 1, [(0, 0), (1, 0)]).unwrap());
        assert_eq!(
            is_bisimulation(BisimKind::Zero, &left, &point(true), &graph).unwrap(),
            None
        );

        let err = bisim_from_map(BisimKind::Zero, &constant, &m.frame, &point(true)).unwrap_err();
        assert_eq!(err, BisimError::Precondition(vec!["continuous"]));
    }

    #[test]
    fn equivalence_oracle() {
        let bound = FormulaBound::new(&["p"], 5);
        let m1 = ex1_model(&[0, 1]);
        let m2 = point(true);
        let r = modal_equivalence(&m1, 0, &m2, 0, &bound, Modality::Box).unwrap();
        assert!(r.equivalent());
        assert!(r.formulas_checked > 10);
        let r = modal_equivalence(&m1, 2, &m2, 0, &bound, Modality::Box).unwrap();
        assert_eq!(r.distinguishing, Some(Formula::var("p")));
    }
}
