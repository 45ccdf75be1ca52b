//! Countermodel search for axiom schemas over a frame class.
//!
//! The search first sweeps every small model in order of increasing size,
//! then samples seeded random models. Both phases share one iteration budget.
//! Candidates are checked in parallel, but the reported hit is always the one
//! with the lowest iteration index, so a seed and a configuration determine
//! the result.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::formula::{AxiomSchema, FormulaBound, Modality};
use crate::generate::{
    all_gtf_frames, all_gtff_frames, all_valuations, iteration_rng, random_gtf, random_gtff,
    random_topology, random_valuation, Shape,
};
use crate::gtf::{GtfFrame, GtfModel};
use crate::gtff::GtffModel;
use crate::semantics::{check_schema, EvalError, SchemaCounterexample, Semantics};
use crate::topology::all_topologies;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("schema {schema} uses {modality}, which {class} models do not interpret")]
    Unsupported {
        schema: AxiomSchema,
        modality: Modality,
        class: FrameClass,
    },
    #[error("unknown frame class `{0}` (expected gtf, gtf-consistent, strong, gtff or gtfi)")]
    UnknownClass(String),
    #[error("search bounds must be positive")]
    EmptyBounds,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrameClass {
    Gtf,
    GtfConsistent,
    Strong,
    Gtff,
    Gtfi,
}

impl FrameClass {
    pub const ALL: [FrameClass; 5] = [
        FrameClass::Gtf,
        FrameClass::GtfConsistent,
        FrameClass::Strong,
        FrameClass::Gtff,
        FrameClass::Gtfi,
    ];

    pub fn id(self) -> &'static str {
        match self {
            FrameClass::Gtf => "gtf",
            FrameClass::GtfConsistent => "gtf-consistent",
            FrameClass::Strong => "strong",
            FrameClass::Gtff => "gtff",
            FrameClass::Gtfi => "gtfi",
        }
    }

    fn two_modal(self) -> bool {
        matches!(self, FrameClass::Gtff | FrameClass::Gtfi)
    }

    pub fn supports(self, modality: Modality) -> bool {
        match modality {
            Modality::Box => true,
            Modality::Bullet => !self.two_modal(),
            Modality::BlackBox => self.two_modal(),
        }
    }
}

impl fmt::Display for FrameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FrameClass {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FrameClass::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| SearchError::UnknownClass(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    pub max_worlds: usize,
    pub max_opens: usize,
    pub var_count: usize,
    /// Node bound for the formulas substituted into the schema.
    pub max_nodes: usize,
    pub budget: u64,
    /// Largest universe swept exhaustively before random sampling.
    pub exhaustive_worlds: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            max_worlds: 4,
            max_opens: 8,
            var_count: 2,
            max_nodes: 3,
            budget: 10_000,
            exhaustive_worlds: 3,
        }
    }
}

impl SearchConfig {
    pub fn vars(&self) -> Vec<String> {
        variable_names(self.var_count)
    }

    fn bound(&self) -> FormulaBound {
        FormulaBound {
            vars: self.vars(),
            max_nodes: self.max_nodes,
        }
    }

    fn shape(&self, class: FrameClass) -> Shape {
        Shape {
            min_worlds: 1,
            max_worlds: self.max_worlds,
            max_base: 3,
            max_opens: self.max_opens,
            max_family: 3,
            allow_empty_member: class != FrameClass::GtfConsistent,
            vars: self.vars(),
        }
    }
}

/// `p, q, r, s, t, u`, then `p6, p7, ...`.
pub fn variable_names(count: usize) -> Vec<String> {
    const NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];
    (0..count)
        .map(|i| {
            NAMES
                .get(i)
                .map_or_else(|| format!("p{i}"), |s| s.to_string())
        })
        .collect()
}

/// A model from either family of frame classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchModel {
    Gtf(GtfModel),
    Gtff(GtffModel),
}

impl SearchModel {
    pub fn universe(&self) -> usize {
        match self {
            SearchModel::Gtf(m) => m.universe(),
            SearchModel::Gtff(m) => m.universe(),
        }
    }

    pub fn check(
        &self,
        schema: AxiomSchema,
        bound: &FormulaBound,
    ) -> Result<Option<SchemaCounterexample>, EvalError> {
        Ok(match self {
            SearchModel::Gtf(m) => check_schema(m, schema, bound)?,
            SearchModel::Gtff(m) => check_schema(m, schema, bound)?,
        }
        .counterexample)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Exhaustive,
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchHit {
    /// Zero-based index of the iteration that produced the model.
    pub iteration: u64,
    pub phase: Phase,
    pub model: SearchModel,
    pub counterexample: SchemaCounterexample,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub hit: Option<SearchHit>,
    /// Iterations spent, including the successful one.
    pub iterations: u64,
}

const CHUNK: usize = 512;

fn exhaustive_candidates(
    class: FrameClass,
    config: &SearchConfig,
) -> impl Iterator<Item = SearchModel> + '_ {
    let vars = config.vars();
    let top = config.exhaustive_worlds.min(config.max_worlds).min(4);
    (1..=top).flat_map(move |n| {
        let vars = vars.clone();
        all_topologies(n)
            .expect("small universes are supported")
            .into_iter()
            .filter(move |t| t.opens().len() <= config.max_opens.max(2))
            .filter(move |t| class != FrameClass::Strong || t.is_strong())
            .flat_map(move |t| -> Vec<SearchModel> {
                let valuations = all_valuations(n, &vars);
                let frames: Vec<SearchModel> = match class {
                    FrameClass::Gtf | FrameClass::GtfConsistent => all_gtf_frames(&t, 2)
                        .into_iter()
                        .filter(|f| class == FrameClass::Gtf || f.is_consistent())
                        .map(|f| {
                            SearchModel::Gtf(GtfModel::new(f, Default::default()).expect("fits"))
                        })
                        .collect(),
                    FrameClass::Strong => {
                        let f = GtfFrame::determined(t.clone(), &Default::default()).expect("fits");
                        vec![SearchModel::Gtf(
                            GtfModel::new(f, Default::default()).expect("fits"),
                        )]
                    }
                    FrameClass::Gtff | FrameClass::Gtfi => {
                        all_gtff_frames(&t, 1, class == FrameClass::Gtfi)
                            .into_iter()
                            .map(SearchModel::Gtff)
                            .collect()
                    }
                };
                frames
                    .into_iter()
                    .flat_map(|frame| {
                        valuations.iter().map(move |v| match &frame {
                            SearchModel::Gtf(m) => SearchModel::Gtf(GtfModel {
                                frame: m.frame.clone(),
                                valuation: v.clone(),
                            }),
                            SearchModel::Gtff(m) => {
                                let mut m = m.clone();
                                m.valuation = v.clone();
                                SearchModel::Gtff(m)
                            }
                        })
                    })
                    .collect()
            })
    })
}

/// The random candidate for iteration `index`.
pub fn random_candidate(class: FrameClass, config: &SearchConfig, index: u64) -> SearchModel {
    let mut rng = iteration_rng(config.seed, index);
    let shape = config.shape(class);
    match class {
        FrameClass::Gtf | FrameClass::GtfConsistent => {
            SearchModel::Gtf(random_gtf(&mut rng, &shape))
        }
        FrameClass::Strong => {
            let n = rand::Rng::gen_range(&mut rng, 1..=shape.max_worlds.max(1));
            let t = random_topology(&mut rng, n, &shape, true);
            let frame = GtfFrame::determined(t, &Default::default()).expect("fits");
            let valuation = random_valuation(&mut rng, n, &shape.vars);
            SearchModel::Gtf(GtfModel::new(frame, valuation).expect("fits"))
        }
        FrameClass::Gtff => SearchModel::Gtff(random_gtff(&mut rng, &shape, false)),
        FrameClass::Gtfi => SearchModel::Gtff(random_gtff(&mut rng, &shape, true)),
    }
}

pub fn search(
    schema: AxiomSchema,
    class: FrameClass,
    config: &SearchConfig,
) -> Result<SearchOutcome, SearchError> {
    if let Some(modality) = schema
        .modalities()
        .into_iter()
        .find(|m| !class.supports(*m))
    {
        return Err(SearchError::Unsupported {
            schema,
            modality,
            class,
        });
    }
    if config.max_worlds == 0 || config.var_count == 0 || config.max_nodes == 0 {
        return Err(SearchError::EmptyBounds);
    }
    let bound = config.bound();
    let mut used: u64 = 0;

    let mut sweep = exhaustive_candidates(class, config);
    while used < config.budget {
        let room = (config.budget - used).min(CHUNK as u64) as usize;
        let chunk: Vec<SearchModel> = sweep.by_ref().take(room).collect();
        if chunk.is_empty() {
            break;
        }
        let found = chunk
            .par_iter()
            .enumerate()
            .map(|(i, m)| m.check(schema, &bound).map(|c| c.map(|c| (i, c))))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .next();
        if let Some((i, counterexample)) = found {
            return Ok(SearchOutcome {
                iterations: used + i as u64 + 1,
                hit: Some(SearchHit {
                    iteration: used + i as u64,
                    phase: Phase::Exhaustive,
                    model: chunk[i].clone(),
                    counterexample,
                }),
            });
        }
        used += chunk.len() as u64;
    }

    let start = used;
    let found = (0..config.budget - start)
        .into_par_iter()
        .map(|k| {
            let m = random_candidate(class, config, k);
            m.check(schema, &bound).map(|c| c.map(|c| (k, m, c)))
        })
        .find_map_first(|r| match r {
            Ok(Some(hit)) => Some(Ok(hit)),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        })
        .transpose()?;
    Ok(match found {
        Some((k, model, counterexample)) => SearchOutcome {
            iterations: start + k + 1,
            hit: Some(SearchHit {
                iteration: start + k,
                phase: Phase::Random,
                model,
                counterexample,
            }),
        },
        None => SearchOutcome {
            hit: None,
            iterations: config.budget,
        },
    })
}
