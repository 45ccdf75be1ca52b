//! Neighbourhood models whose neighbourhood families are closed upwards
//! within `⋃N`, and the translations to and from GTF-models.
//!
//! A family `N_w` is stored as its antichain of minimal sets. Every world
//! belongs to exactly one of two kinds:
//!
//! * `W1`: `N_w` is nonempty and `w` lies in each of its members;
//! * `W2`: `w` lies outside `⋃N`.

use thiserror::Error;

use crate::formula::Modality;
use crate::gtf::{GtfError, GtfFrame, GtfModel};
use crate::report::{ValidationReport, Witness};
use crate::semantics::{Semantics, Valuation};
use crate::topology::{GenTopology, TopologyError};
use crate::worldset::{family_union, UpSet, WorldSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GtnError {
    #[error("expected {expected} neighbourhood families, found {found}")]
    FamilyCount { expected: usize, found: usize },
    #[error("set {0} does not fit the model's universe")]
    UniverseMismatch(WorldSet),
    #[error("invalid GTN-model:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Gtf(#[from] GtfError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GtnModel {
    universe: usize,
    union: WorldSet,
    neighbourhoods: Vec<UpSet>,
    pub valuation: Valuation,
    closure_added: bool,
}

impl GtnModel {
    /// Builds a model from listed neighbourhoods; each family is closed
    /// upwards within the union of everything listed.
    pub fn new(
        universe: usize,
        families: Vec<Vec<WorldSet>>,
        valuation: Valuation,
    ) -> Result<Self, GtnError> {
        if families.len() != universe {
            return Err(GtnError::FamilyCount {
                expected: universe,
                found: families.len(),
            });
        }
        let fits = |s: &WorldSet| s.universe() == universe;
        if let Some(bad) = families
            .iter()
            .flatten()
            .chain(valuation.values())
            .find(|s| !fits(s))
        {
            return Err(GtnError::UniverseMismatch(*bad));
        }
        let all: Vec<WorldSet> = families.iter().flatten().copied().collect();
        let union = family_union(universe, &all);
        let closure_added = families.iter().any(|f| !is_upward_closed(f, union));
        let neighbourhoods = families.iter().map(|f| UpSet::new(union, f)).collect();
        Ok(GtnModel {
            universe,
            union,
            neighbourhoods,
            valuation,
            closure_added,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// `⋃N`.
    pub fn union(&self) -> WorldSet {
        self.union
    }

    pub fn neighbourhoods(&self, world: usize) -> &UpSet {
        &self.neighbourhoods[world]
    }

    /// True iff some listed family was not already closed upwards.
    pub fn closure_added(&self) -> bool {
        self.closure_added
    }

    pub fn w1(&self) -> WorldSet {
        WorldSet::from_worlds(
            self.universe,
            (0..self.universe).filter(|z| {
                let n = &self.neighbourhoods[*z];
                !n.is_empty() && n.minimal().iter().all(|x| x.contains(*z))
            }),
        )
    }

    pub fn w2(&self) -> WorldSet {
        self.union.complement()
    }

    /// `{z ∈ W1 : X ∈ N_z}`.
    pub fn core(&self, x: WorldSet) -> WorldSet {
        let w1 = self.w1();
        WorldSet::from_worlds(
            self.universe,
            w1.iter().filter(|z| self.neighbourhoods[*z].contains(x)),
        )
    }
}

// Upward closure within a bound follows from closure under adding one world.
fn is_upward_closed(family: &[WorldSet], bound: WorldSet) -> bool {
    family.iter().all(|x| {
        bound.difference(*x).iter().all(|y| {
            let mut bigger = *x;
            bigger.insert(y);
            family.contains(&bigger)
        })
    })
}

/// Checks the world-kind and core conditions. Union and superset closure
/// hold by construction.
pub fn validate_gtn(m: &GtnModel) -> ValidationReport {
    let mut report = ValidationReport::new();
    let kinds = m.w1().union(m.w2());
    for w in kinds.complement().iter() {
        report.push(
            "world-kind",
            vec![
                Witness::World(w),
                Witness::Note("is in ⋃N but not in every one of its own neighbourhoods".into()),
            ],
        );
    }
    for w in 0..m.universe() {
        for x in m.neighbourhoods(w).minimal() {
            let core = m.core(*x);
            if !m.neighbourhoods(w).contains(core) {
                report.push(
                    "core-condition",
                    vec![
                        Witness::World(w),
                        Witness::Set(*x),
                        Witness::Note("has core".into()),
                        Witness::Set(core),
                        Witness::Note("which is not a neighbourhood".into()),
                    ],
                );
            }
        }
    }
    report
}

impl Semantics for GtnModel {
    fn universe(&self) -> usize {
        self.universe
    }

    fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    fn supports(&self, modality: Modality) -> bool {
        modality == Modality::Box
    }

    fn necessity(&self, _modality: Modality, truth: WorldSet) -> WorldSet {
        WorldSet::from_worlds(
            self.universe,
            (0..self.universe).filter(|w| self.neighbourhoods[*w].has_member_within(truth)),
        )
    }

    fn kind_name(&self) -> &'static str {
        "GTN"
    }
}

/// `{X ⊆ ⋃N : X ∈ N_w for every w ∈ X}`. Exponential in `|⋃N|`.
pub fn induced_topology(m: &GtnModel) -> Result<GenTopology, TopologyError> {
    let opens = m
        .union()
        .subsets()
        .filter(|x| x.iter().all(|w| m.neighbourhoods(w).contains(*x)))
        .collect();
    GenTopology::new(m.universe(), opens)
}

/// Keeps the universe and valuation, takes the induced topology and sets
/// `F_w` to the open members of `N_w`.
pub fn gtn_to_gtf(m: &GtnModel) -> Result<GtfModel, GtnError> {
    let report = validate_gtn(m);
    if !report.valid() {
        return Err(GtnError::Invalid(report));
    }
    let topology = induced_topology(m)?;
    let families = (0..m.universe())
        .map(|w| {
            topology
                .opens()
                .iter()
                .copied()
                .filter(|o| m.neighbourhoods(w).contains(*o))
                .collect()
        })
        .collect();
    let frame = GtfFrame::new(topology, families)?;
    Ok(GtfModel::new(frame, m.valuation.clone())?)
}

/// `N_w` becomes the family of generalized neighbourhoods of `w`.
pub fn gtf_to_gtn(m: &GtfModel) -> GtnModel {
    let union = m.topology().union_of_opens();
    let neighbourhoods: Vec<UpSet> = (0..m.frame.universe())
        .map(|w| m.frame.neighbourhoods(w))
        .collect();
    GtnModel {
        universe: m.frame.universe(),
        union,
        neighbourhoods,
        valuation: m.valuation.clone(),
        closure_added: false,
    }
}
