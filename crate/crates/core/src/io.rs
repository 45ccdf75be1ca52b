//! JSON model files. Worlds are referred to by name and sets are arrays of
//! names. Emitted files list worlds and set members in index order so that
//! equal models produce byte-identical output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bisim::{ModelMap, WorldRelation};
use crate::gtf::{determined_family, GtfError, GtfFrame, GtfModel};
use crate::gtff::GtffModel;
use crate::gtn::GtnModel;
use crate::ifs::StrongModel;
use crate::report::ValidationReport;
use crate::semantics::Valuation;
use crate::topology::{GenTopology, TopologyError};
use crate::worldset::{WorldSet, MAX_WORLDS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LoadError {
    #[error("malformed input: {0}")]
    Syntax(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("world `{0}` is declared twice")]
    DuplicateWorld(String),
    #[error("a model needs between 1 and {MAX_WORLDS} worlds, found {0}")]
    WorldCount(usize),
    #[error("the listed opens do not form a generalized topology:\n{0}")]
    NotTopology(ValidationReport),
    #[error("{0}")]
    Invalid(String),
}

impl LoadError {
    /// `2` for unreadable input, `1` for well-formed input describing an
    /// impossible model.
    pub fn exit_code(&self) -> i32 {
        match self {
            LoadError::NotTopology(_) | LoadError::Invalid(_) => 1,
            _ => 2,
        }
    }
}

impl From<serde_json::Error> for LoadError {
    fn from(e: serde_json::Error) -> Self {
        LoadError::Syntax(e.to_string())
    }
}

impl From<TopologyError> for LoadError {
    fn from(e: TopologyError) -> Self {
        match e {
            TopologyError::Invalid(report) => LoadError::NotTopology(report),
            TopologyError::EmptyUniverse => LoadError::WorldCount(0),
            TopologyError::TooManyWorlds(n) => LoadError::WorldCount(n),
            other => LoadError::Invalid(other.to_string()),
        }
    }
}

type NamedSet = Vec<String>;
type NamedValuation = BTreeMap<String, NamedSet>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyJson {
    pub worlds: Vec<String>,
    pub opens: Vec<NamedSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GtfJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub topology: TopologyJson,
    #[serde(rename = "F", default)]
    pub families: BTreeMap<String, Vec<NamedSet>>,
    #[serde(default)]
    pub valuation: NamedValuation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GtnJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub worlds: Vec<String>,
    #[serde(rename = "N", default)]
    pub neighbourhoods: BTreeMap<String, Vec<NamedSet>>,
    #[serde(default)]
    pub valuation: NamedValuation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GtffJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub topology: TopologyJson,
    #[serde(rename = "Y1")]
    pub y1: NamedSet,
    /// Defaults to the complement of `Y1`.
    #[serde(rename = "Y2", default, skip_serializing_if = "Option::is_none")]
    pub y2: Option<NamedSet>,
    #[serde(rename = "f", default)]
    pub pointer: BTreeMap<String, String>,
    #[serde(rename = "N", default)]
    pub neighbourhoods: BTreeMap<String, Vec<NamedSet>>,
    #[serde(default)]
    pub valuation: NamedValuation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SgtJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub topology: TopologyJson,
    #[serde(default)]
    pub valuation: NamedValuation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelFile {
    Gtf(GtfJson),
    Gtn(GtnJson),
    Gtff(GtffJson),
    Gtfi(GtffJson),
    Sgt(SgtJson),
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self, LoadError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model files always serialize");
        s.push('\n');
        s
    }
}

/// The in-memory form of a model file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    Gtf(GtfModel),
    Gtn(GtnModel),
    Gtff { model: GtffModel, gtfi: bool },
    Sgt(StrongModel),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::Gtf(_) => "gtf",
            Model::Gtn(_) => "gtn",
            Model::Gtff { gtfi: false, .. } => "gtff",
            Model::Gtff { gtfi: true, .. } => "gtfi",
            Model::Sgt(_) => "sgt",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedModel {
    pub name: Option<String>,
    pub worlds: Vec<String>,
    pub model: Model,
}

/// Bidirectional lookup between world names and indices.
#[derive(Clone, Debug)]
pub struct WorldNames {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl WorldNames {
    pub fn new(names: &[String]) -> Result<Self, LoadError> {
        if names.is_empty() || names.len() > MAX_WORLDS {
            return Err(LoadError::WorldCount(names.len()));
        }
        let mut index = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(LoadError::DuplicateWorld(name.clone()));
            }
        }
        Ok(WorldNames {
            names: names.to_vec(),
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn world(&self, name: &str) -> Result<usize, LoadError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| LoadError::UnknownWorld(name.to_string()))
    }

    pub fn set(&self, names: &[String]) -> Result<WorldSet, LoadError> {
        let worlds = names
            .iter()
            .map(|n| self.world(n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WorldSet::from_worlds(self.len(), worlds))
    }

    fn family(&self, sets: &[NamedSet]) -> Result<Vec<WorldSet>, LoadError> {
        sets.iter().map(|s| self.set(s)).collect()
    }

    fn valuation(&self, v: &NamedValuation) -> Result<Valuation, LoadError> {
        v.iter()
            .map(|(k, s)| Ok((k.clone(), self.set(s)?)))
            .collect()
    }

    fn per_world(
        &self,
        map: &BTreeMap<String, Vec<NamedSet>>,
    ) -> Result<BTreeMap<usize, Vec<WorldSet>>, LoadError> {
        map.iter()
            .map(|(w, f)| Ok((self.world(w)?, self.family(f)?)))
            .collect()
    }

    pub fn name_set(&self, s: WorldSet) -> NamedSet {
        s.iter().map(|w| self.names[w].clone()).collect()
    }

    fn name_family(&self, f: &[WorldSet]) -> Vec<NamedSet> {
        f.iter().map(|s| self.name_set(*s)).collect()
    }

    fn name_valuation(&self, v: &Valuation) -> NamedValuation {
        v.iter()
            .map(|(k, s)| (k.clone(), self.name_set(*s)))
            .collect()
    }

    fn topology(&self, t: &TopologyJson) -> Result<GenTopology, LoadError> {
        let mut opens = self.family(&t.opens)?;
        opens.push(WorldSet::empty(self.len()));
        Ok(GenTopology::new(self.len(), opens)?)
    }

    fn topology_json(&self, t: &GenTopology) -> TopologyJson {
        TopologyJson {
            worlds: self.names.clone(),
            opens: self.name_family(t.opens()),
        }
    }
}

fn gtf_error(e: GtfError, names: &WorldNames, world: Option<usize>) -> LoadError {
    match (e, world) {
        (GtfError::NotOpen(x), Some(w)) => LoadError::Invalid(format!(
            "F_{} contains {}, which is not open",
            names.names()[w],
            x.display_with(names.names())
        )),
        (e, _) => LoadError::Invalid(e.to_string()),
    }
}

fn load_gtf_parts(
    names: &WorldNames,
    topology: &TopologyJson,
    families: &BTreeMap<String, Vec<NamedSet>>,
    valuation: &NamedValuation,
) -> Result<GtfModel, LoadError> {
    let t = names.topology(topology)?;
    let given = names.per_world(families)?;
    for (w, f) in &given {
        if let Some(x) = f.iter().find(|x| !t.is_open(**x)) {
            return Err(gtf_error(GtfError::NotOpen(*x), names, Some(*w)));
        }
    }
    let inside = t.union_of_opens();
    let families = (0..names.len())
        .map(|w| match given.get(&w) {
            Some(f) => f.clone(),
            None if inside.contains(w) => determined_family(&t, w),
            None => Vec::new(),
        })
        .collect();
    let frame = GtfFrame::new(t, families).map_err(|e| gtf_error(e, names, None))?;
    GtfModel::new(frame, names.valuation(valuation)?).map_err(|e| gtf_error(e, names, None))
}

impl NamedModel {
    pub fn from_file(file: &ModelFile) -> Result<Self, LoadError> {
        match file {
            ModelFile::Gtf(g) => {
                let names = WorldNames::new(&g.topology.worlds)?;
                let m = load_gtf_parts(&names, &g.topology, &g.families, &g.valuation)?;
                Ok(NamedModel {
                    name: g.name.clone(),
                    worlds: names.names,
                    model: Model::Gtf(m),
                })
            }
            ModelFile::Gtn(g) => {
                let names = WorldNames::new(&g.worlds)?;
                let given = names.per_world(&g.neighbourhoods)?;
                let families = (0..names.len())
                    .map(|w| given.get(&w).cloned().unwrap_or_default())
                    .collect();
                let m = GtnModel::new(names.len(), families, names.valuation(&g.valuation)?)
                    .map_err(|e| LoadError::Invalid(e.to_string()))?;
                Ok(NamedModel {
                    name: g.name.clone(),
                    worlds: names.names,
                    model: Model::Gtn(m),
                })
            }
            ModelFile::Gtff(g) | ModelFile::Gtfi(g) => {
                let names = WorldNames::new(&g.topology.worlds)?;
                let t = names.topology(&g.topology)?;
                let y1 = names.set(&g.y1)?;
                let y2 = match &g.y2 {
                    Some(y2) => names.set(y2)?,
                    None => y1.complement(),
                };
                let pointer = g
                    .pointer
                    .iter()
                    .map(|(a, b)| Ok((names.world(a)?, names.world(b)?)))
                    .collect::<Result<_, LoadError>>()?;
                let m = GtffModel::new(
                    t,
                    y1,
                    y2,
                    pointer,
                    names.per_world(&g.neighbourhoods)?,
                    names.valuation(&g.valuation)?,
                )
                .map_err(|e| LoadError::Invalid(e.to_string()))?;
                Ok(NamedModel {
                    name: g.name.clone(),
                    worlds: names.names,
                    model: Model::Gtff {
                        model: m,
                        gtfi: matches!(file, ModelFile::Gtfi(_)),
                    },
                })
            }
            ModelFile::Sgt(g) => {
                let names = WorldNames::new(&g.topology.worlds)?;
                let t = names.topology(&g.topology)?;
                let m = StrongModel::new(t, names.valuation(&g.valuation)?)
                    .map_err(|e| LoadError::Invalid(e.to_string()))?;
                Ok(NamedModel {
                    name: g.name.clone(),
                    worlds: names.names,
                    model: Model::Sgt(m),
                })
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self, LoadError> {
        Self::from_file(&ModelFile::parse(text)?)
    }

    /// Panics if `worlds` does not match the model's universe or repeats a
    /// name.
    pub fn to_file(&self) -> ModelFile {
        let names = WorldNames::new(&self.worlds).expect("model world names are distinct");
        let name = self.name.clone();
        match &self.model {
            Model::Gtf(m) => {
                let t = m.topology();
                let families = (0..names.len())
                    .filter(|w| m.frame.family(*w) != determined_family(t, *w).as_slice())
                    .map(|w| (names.names[w].clone(), names.name_family(m.frame.family(w))))
                    .collect();
                ModelFile::Gtf(GtfJson {
                    name,
                    topology: names.topology_json(t),
                    families,
                    valuation: names.name_valuation(&m.valuation),
                })
            }
            Model::Gtn(m) => ModelFile::Gtn(GtnJson {
                name,
                worlds: names.names.clone(),
                neighbourhoods: (0..names.len())
                    .filter(|w| !m.neighbourhoods(*w).is_empty())
                    .map(|w| {
                        (
                            names.names[w].clone(),
                            names.name_family(&m.neighbourhoods(w).members()),
                        )
                    })
                    .collect(),
                valuation: names.name_valuation(&m.valuation),
            }),
            Model::Gtff { model, gtfi } => {
                let y2 =
                    (model.y2() != model.y1().complement()).then(|| names.name_set(model.y2()));
                let body = GtffJson {
                    name,
                    topology: names.topology_json(model.topology()),
                    y1: names.name_set(model.y1()),
                    y2,
                    pointer: model
                        .pointer()
                        .iter()
                        .map(|(a, b)| (names.names[*a].clone(), names.names[*b].clone()))
                        .collect(),
                    neighbourhoods: model
                        .neighbourhoods()
                        .iter()
                        .map(|(w, f)| (names.names[*w].clone(), names.name_family(f)))
                        .collect(),
                    valuation: names.name_valuation(&model.valuation),
                };
                if *gtfi {
                    ModelFile::Gtfi(body)
                } else {
                    ModelFile::Gtff(body)
                }
            }
            Model::Sgt(m) => ModelFile::Sgt(SgtJson {
                name,
                topology: names.topology_json(m.topology()),
                valuation: names.name_valuation(&m.valuation),
            }),
        }
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }
}

/// Parses `[["a","x"],["b","x"]]`.
pub fn parse_relation(
    text: &str,
    left: &[String],
    right: &[String],
) -> Result<WorldRelation, LoadError> {
    let pairs: Vec<(String, String)> = serde_json::from_str(text)?;
    let (l, r) = (WorldNames::new(left)?, WorldNames::new(right)?);
    let pairs = pairs
        .iter()
        .map(|(a, b)| Ok((l.world(a)?, r.world(b)?)))
        .collect::<Result<Vec<_>, LoadError>>()?;
    WorldRelation::new(l.len(), r.len(), pairs).map_err(|e| LoadError::Invalid(e.to_string()))
}

pub fn relation_json(
    rel: &WorldRelation,
    left: &[String],
    right: &[String],
) -> Vec<(String, String)> {
    rel.pairs()
        .iter()
        .map(|(a, b)| (left[*a].clone(), right[*b].clone()))
        .collect()
}

/// Parses `{"a":"x","b":"x"}`; every source world must be mapped.
pub fn parse_map(text: &str, source: &[String], target: &[String]) -> Result<ModelMap, LoadError> {
    let map: BTreeMap<String, String> = serde_json::from_str(text)?;
    let (s, t) = (WorldNames::new(source)?, WorldNames::new(target)?);
    let mut images = vec![None; s.len()];
    for (a, b) in &map {
        images[s.world(a)?] = Some(t.world(b)?);
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            x.ok_or_else(|| LoadError::Invalid(format!("world `{}` has no image", source[i])))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ModelMap::new(t.len(), images).map_err(|e| LoadError::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gtf::validate_gtf;

    const EX1: &str = r#"{"kind":"gtf","topology":{"worlds":["a","b","c"],"opens":[["a"],["b"],["a","b"]]},
        "F":{"c":[["a"]]},"valuation":{"p":["a","b"]}}"#;

    #[test]
    fn loads_and_materializes_determined_families() {
        let m = NamedModel::parse(EX1).unwrap();
        let Model::Gtf(g) = &m.model else { panic!() };
        assert_eq!(g.topology().opens().len(), 4);
        assert_eq!(g.frame.family(0).len(), 2);
        assert_eq!(g.frame.family(2).len(), 1);
        assert!(validate_gtf(&g.frame).valid());
    }

    #[test]
    fn round_trip_is_stable() {
        let m = NamedModel::parse(EX1).unwrap();
        let text = m.to_json();
        let again = NamedModel::parse(&text).unwrap();
        assert_eq!(again, m);
        assert_eq!(again.to_json(), text);
        assert!(
            !text.contains("\"a\": [["),
            "determined families are omitted"
        );
    }

    #[test]
    fn inconsistent_given_family_is_kept_for_validation() {
        let text = EX1.replace(r#""F":{"c":[["a"]]}"#, r#""F":{"c":[["a"]],"a":[["a"]]}"#);
        let m = NamedModel::parse(&text).unwrap();
        let Model::Gtf(g) = &m.model else { panic!() };
        assert!(validate_gtf(&g.frame).has_rule("determined-family"));
        assert_eq!(NamedModel::parse(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn error_classes() {
        assert_eq!(NamedModel::parse("{").unwrap_err().exit_code(), 2);
        let unknown = EX1.replace(r#""p":["a","b"]"#, r#""p":["z"]"#);
        assert_eq!(
            NamedModel::parse(&unknown).unwrap_err(),
            LoadError::UnknownWorld("z".into())
        );
        let not_open = EX1.replace(r#""c":[["a"]]"#, r#""c":[["c"]]"#);
        assert_eq!(NamedModel::parse(&not_open).unwrap_err().exit_code(), 1);
        let dup = EX1.replace(r#"["a","b","c"]"#, r#"["a","a","c"]"#);
        assert_eq!(NamedModel::parse(&dup).unwrap_err().exit_code(), 2);
        let not_top = r#"{"kind":"sgt","topology":{"worlds":["a","b"],"opens":[["a"],["b"]]}}"#;
        assert!(matches!(
            NamedModel::parse(not_top),
            Err(LoadError::NotTopology(_))
        ));
    }

    #[test]
    fn other_kinds_round_trip() {
        let files = [
            r#"{"kind":"gtn","worlds":["a","b"],"N":{"a":[["a"],["a","b"]],"b":[["a","b"]]},"valuation":{"p":["a"]}}"#,
            r#"{"kind":"gtff","topology":{"worlds":["a","b","c"],"opens":[["a"]]},"Y1":["a","b"],"f":{"a":"a","b":"a"},"N":{"c":[["a","b"]]}}"#,
            r#"{"kind":"gtfi","name":"x","topology":{"worlds":["a","b"],"opens":[["a"]]},"Y1":["a"],"f":{"a":"a"}}"#,
            r#"{"kind":"sgt","topology":{"worlds":["a","b"],"opens":[["a","b"]]}}"#,
        ];
        for f in files {
            let m = NamedModel::parse(f).unwrap();
            assert_eq!(NamedModel::parse(&m.to_json()).unwrap(), m, "{f}");
        }
        let gtn = NamedModel::parse(files[0]).unwrap();
        let Model::Gtn(g) = &gtn.model else { panic!() };
        assert!(!g.closure_added());
    }

    #[test]
    fn relation_and_map_formats() {
        let l = vec!["a".to_string(), "b".to_string()];
        let r = vec!["x".to_string()];
        let rel = parse_relation(r#"[["a","x"],["b","x"]]"#, &l, &r).unwrap();
        assert_eq!(rel.len(), 2);
        assert_eq!(relation_json(&rel, &l, &r)[1], ("b".into(), "x".into()));
        let f = parse_map(r#"{"a":"x","b":"x"}"#, &l, &r).unwrap();
        assert_eq!(f.images(), &[0, 0]);
        assert!(parse_map(r#"{"a":"x"}"#, &l, &r).is_err());
        assert!(parse_relation(r#"[["q","x"]]"#, &l, &r).is_err());
    }
}
