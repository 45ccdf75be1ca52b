//! In-fact-strong GTF-models read with `•`, and their translation to and from
//! strong generalized topological models read with `□`.

use thiserror::Error;

use crate::formula::Modality;
use crate::gtf::{GtfError, GtfFrame, GtfModel};
use crate::semantics::{Semantics, Valuation};
use crate::topology::{GenTopology, TopologyError};
use crate::worldset::WorldSet;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IfsError {
    #[error("the topology is not strong: {0} lies outside every open set")]
    NotStrong(WorldSet),
    #[error("the model is not in-fact-strong")]
    NotIfs(IfsCertificate),
    #[error("set {0} does not fit the model's universe")]
    UniverseMismatch(WorldSet),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Gtf(#[from] GtfError),
}

/// A topology in which the whole universe is open, with `□` read as
/// interior.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongModel {
    topology: GenTopology,
    pub valuation: Valuation,
}

impl StrongModel {
    pub fn new(topology: GenTopology, valuation: Valuation) -> Result<Self, IfsError> {
        if !topology.is_strong() {
            return Err(IfsError::NotStrong(topology.orphans()));
        }
        if let Some(bad) = valuation
            .values()
            .find(|s| s.universe() != topology.universe())
        {
            return Err(IfsError::UniverseMismatch(*bad));
        }
        Ok(StrongModel {
            topology,
            valuation,
        })
    }

    pub fn topology(&self) -> &GenTopology {
        &self.topology
    }
}

impl Semantics for StrongModel {
    fn universe(&self) -> usize {
        self.topology.universe()
    }

    fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    fn supports(&self, modality: Modality) -> bool {
        modality == Modality::Box
    }

    fn necessity(&self, _modality: Modality, truth: WorldSet) -> WorldSet {
        self.topology.interior(truth)
    }

    fn kind_name(&self) -> &'static str {
        "strong GT"
    }
}

/// Result of the three in-fact-strong conditions at one orphaned world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrphanCheck {
    pub world: usize,
    /// A member `X` of `F_w` and an open superset `Y` missing from `F_w`.
    pub superset_failure: Option<(WorldSet, WorldSet)>,
    /// A member of `F_w` and a decomposition of it into opens none of which
    /// is in `F_w`.
    pub partition_failure: Option<(WorldSet, Vec<WorldSet>)>,
    pub nonempty: bool,
}

impl OrphanCheck {
    pub fn passes(&self) -> bool {
        self.superset_failure.is_none() && self.partition_failure.is_none() && self.nonempty
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IfsCertificate {
    pub orphans: Vec<OrphanCheck>,
}

impl IfsCertificate {
    pub fn is_ifs(&self) -> bool {
        self.orphans.iter().all(OrphanCheck::passes)
    }
}

/// A member `Y ∈ F_w` admits a decomposition avoiding `F_w` exactly when the
/// opens inside `Y` that are not in `F_w` already cover `Y`. This includes
/// `Y = ∅`, which is the union of the empty decomposition.
fn partition_failure(t: &GenTopology, family: &[WorldSet]) -> Option<(WorldSet, Vec<WorldSet>)> {
    family.iter().find_map(|y| {
        let parts: Vec<WorldSet> = t
            .opens()
            .iter()
            .copied()
            .filter(|x| x.is_subset(*y) && !x.is_empty() && !family.contains(x))
            .collect();
        let cover = parts
            .iter()
            .fold(WorldSet::empty(t.universe()), |acc, x| acc.union(*x));
        (cover == *y).then_some((*y, parts))
    })
}

pub fn validate_ifs(frame: &GtfFrame) -> IfsCertificate {
    let t = frame.topology();
    let orphans = t
        .orphans()
        .iter()
        .map(|w| {
            let family = frame.family(w);
            let superset_failure = family.iter().find_map(|x| {
                t.opens()
                    .iter()
                    .find(|y| x.is_subset(**y) && !family.contains(y))
                    .map(|y| (*x, *y))
            });
            OrphanCheck {
                world: w,
                superset_failure,
                partition_failure: partition_failure(t, family),
                nonempty: !family.is_empty(),
            }
        })
        .collect();
    IfsCertificate { orphans }
}

/// `τ = {∅} ∪ {X⁻¹ : X ∈ μ}` with the same worlds and valuation.
pub fn ifs_to_strong(m: &GtfModel) -> Result<StrongModel, IfsError> {
    let cert = validate_ifs(&m.frame);
    if !cert.is_ifs() {
        return Err(IfsError::NotIfs(cert));
    }
    let n = m.frame.universe();
    let mut opens = vec![WorldSet::empty(n)];
    for x in m.topology().opens() {
        opens.push(m.frame.inverse(*x)?);
    }
    StrongModel::new(GenTopology::new(n, opens)?, m.valuation.clone())
}

/// `F_w` becomes the family of opens containing `w`.
pub fn strong_to_ifs(m: &StrongModel) -> GtfModel {
    let frame = GtfFrame::determined(m.topology.clone(), &Default::default())
        .expect("a determined frame fits its own topology");
    GtfModel::new(frame, m.valuation.clone()).expect("valuation already fits the universe")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, FormulaBound};
    use crate::semantics::{forces, pointwise_certificate};
    use crate::topology::ExampleSpace;
    use std::collections::BTreeMap;

    fn s(n: usize, ws: &[usize]) -> WorldSet {
        WorldSet::from_worlds(n, ws.iter().copied())
    }

    /// Oracle: tries every subfamily of the opens.
    fn partition_holds_by_enumeration(t: &GenTopology, family: &[WorldSet]) -> bool {
        let opens = t.opens();
        (0u64..1 << opens.len()).all(|mask| {
            let chosen: Vec<WorldSet> = (0..opens.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| opens[i])
                .collect();
            let union = chosen
                .iter()
                .fold(WorldSet::empty(t.universe()), |a, x| a.union(*x));
            !family.contains(&union) || chosen.iter().any(|x| family.contains(x))
        })
    }

    fn two_world(f_b: Vec<WorldSet>, p: &[usize]) -> GtfModel {
        let t = GenTopology::new(2, vec![s(2, &[]), s(2, &[0])]).unwrap();
        let frame = GtfFrame::determined(t, &BTreeMap::from([(1, f_b)])).unwrap();
        GtfModel::new(frame, BTreeMap::from([("p".to_string(), s(2, p))])).unwrap()
    }

    #[test]
    fn validate_examples() {
        let m = two_world(vec![s(2, &[0])], &[]);
        assert!(validate_ifs(&m.frame).is_ifs());
        let m = two_world(vec![], &[]);
        let cert = validate_ifs(&m.frame);
        assert!(!cert.is_ifs());
        assert!(!cert.orphans[0].nonempty);

        let t =
            GenTopology::new(3, vec![s(3, &[]), s(3, &[0]), s(3, &[1]), s(3, &[0, 1])]).unwrap();
        let frame = GtfFrame::determined(t, &BTreeMap::from([(2, vec![s(3, &[0, 1])])])).unwrap();
        let cert = validate_ifs(&frame);
        assert_eq!(cert.orphans[0].superset_failure, None);
        assert_eq!(
            cert.orphans[0].partition_failure,
            Some((s(3, &[0, 1]), vec![s(3, &[0]), s(3, &[1])]))
        );
    }

    #[test]
    fn exact_partition_test_matches_enumeration() {
        for t in crate::topology::all_topologies(3).unwrap() {
            for bits in 0u64..1 << t.opens().len() {
                let family: Vec<WorldSet> = t
                    .opens()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| bits >> i & 1 == 1)
                    .map(|(_, x)| *x)
                    .collect();
                assert_eq!(
                    partition_failure(&t, &family).is_none(),
                    partition_holds_by_enumeration(&t, &family),
                    "{t} with {family:?}"
                );
            }
        }
    }

    #[test]
    fn translation_examples() {
        let m = two_world(vec![s(2, &[0])], &[0, 1]);
        let strong = ifs_to_strong(&m).unwrap();
        assert_eq!(strong.topology().opens(), &[s(2, &[]), s(2, &[0, 1])]);
        assert!(forces(&m, 1, &parse("*p").unwrap()).unwrap());
        assert!(forces(&strong, 1, &parse("[]p").unwrap()).unwrap());

        let m = two_world(vec![s(2, &[0])], &[0]);
        let strong = ifs_to_strong(&m).unwrap();
        assert!(!forces(&m, 1, &parse("*p").unwrap()).unwrap());
        assert!(!forces(&strong, 1, &parse("[]p").unwrap()).unwrap());

        assert!(matches!(
            ifs_to_strong(&two_world(vec![], &[])),
            Err(IfsError::NotIfs(_))
        ));
    }

    #[test]
    fn strong_round_trip() {
        let t = ExampleSpace::Ex2.topology().unwrap();
        let n = t.universe();
        let sm = StrongModel::new(
            t.clone(),
            BTreeMap::from([("p".to_string(), s(n, &[0, 1]))]),
        )
        .unwrap();
        let ifs = strong_to_ifs(&sm);
        assert!(validate_ifs(&ifs.frame).is_ifs());
        let back = ifs_to_strong(&ifs).unwrap();
        assert_eq!(back.topology(), &t);
        let bound = FormulaBound::new(&["p"], 5);
        assert!(
            pointwise_certificate(&ifs, Modality::Bullet, &sm, Modality::Box, &bound)
                .unwrap()
                .all_pass()
        );

        let one = GenTopology::new(1, vec![s(1, &[]), s(1, &[0])]).unwrap();
        let ifs = strong_to_ifs(&StrongModel::new(one, Valuation::new()).unwrap());
        assert_eq!(ifs.frame.family(0), &[s(1, &[0])]);

        let ex1 = ExampleSpace::Ex1.topology().unwrap();
        assert!(matches!(
            StrongModel::new(ex1, Valuation::new()),
            Err(IfsError::NotStrong(_))
        ));
    }
}
