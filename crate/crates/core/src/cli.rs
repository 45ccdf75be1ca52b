//! Command-line front end. [`run`] never prints or exits; it returns the
//! text for both streams and the exit code so that it can be driven in-process.
//!
//! Exit codes: `0` success, `1` semantic failure (invalid model, failed
//! check, countermodel found under `--expect-valid`), `2` unreadable input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bisim::{is_bisimulation, largest_bisimulation, modal_equivalence, BisimKind};
use crate::formula::{parse, AxiomSchema, FormulaBound, Modality};
use crate::generate::{
    iteration_rng, random_gtf, random_gtff, random_gtn, random_ifs, random_topology,
    random_valuation, Shape,
};
use crate::gtf::{validate_gtf, GtfFrame, GtfModel};
use crate::gtff::{validate_gtff, validate_gtfi};
use crate::gtn::{gtf_to_gtn, gtn_to_gtf, validate_gtn, GtnError};
use crate::ifs::{ifs_to_strong, strong_to_ifs, IfsCertificate, IfsError, StrongModel};
use crate::io::{parse_relation, relation_json, LoadError, Model, ModelFile, NamedModel};
use crate::report::ValidationReport;
use crate::search::{search, FrameClass, Phase, SearchConfig, SearchModel};
use crate::semantics::{
    pointwise_certificate, truth_set, EquivalenceCertificate, Semantics, Valuation,
};
use crate::topology::{default_world_names, ExampleSpace};
use crate::worldset::WorldSet;

const CERTIFICATE_NODES: usize = 5;
const SEARCH_NODES: usize = 3;

#[derive(Parser, Debug)]
#[command(
    name = "gtmodal",
    version,
    about = "Model checker for non-normal modal logics over generalized topologies"
)]
pub struct Cli {
    /// Seed for random generation and search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Formula size bound [default: 5 for certificates and equivalence, 3 for search].
    #[arg(long, global = true)]
    max_nodes: Option<usize>,
    /// Propositional variables used when enumerating formulas.
    #[arg(long, global = true, value_delimiter = ',', default_value = "p,q")]
    vars: Vec<String>,
    /// Iteration budget for search.
    #[arg(long, global = true, default_value_t = 10_000)]
    budget: u64,
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the structural conditions of a model file.
    Validate { file: PathBuf },
    /// Print the truth set of a formula, or its value at one world.
    Eval {
        file: PathBuf,
        formula: String,
        #[arg(long)]
        world: Option<String>,
    },
    /// Translate a model and certify pointwise equivalence.
    Transform {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        /// Write the translated model here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a relation between two models, or compute the largest one.
    Bisim {
        left: PathBuf,
        right: PathBuf,
        /// Bisimulation kind: 0, 1 or 2.
        #[arg(long, default_value_t = 0)]
        kind: u8,
        /// Relation as JSON pairs of world names, or a file containing them.
        #[arg(long, required_unless_present = "largest", conflicts_with = "largest")]
        relation: Option<String>,
        #[arg(long)]
        largest: bool,
        /// Also compare every related pair on formulas up to the size bound.
        #[arg(long)]
        equiv: bool,
    },
    /// Look for a countermodel to an axiom schema.
    Search {
        /// Schema id: M, C, T, D, K, 4, N, *T (bullet), M_b (black box), GJ.
        schema: String,
        /// gtf, gtf-consistent, strong, gtff or gtfi.
        #[arg(long, default_value = "gtf")]
        class: String,
        #[arg(long, default_value_t = 4)]
        max_worlds: usize,
        #[arg(long, default_value_t = 8)]
        max_opens: usize,
        /// Universe size up to which every model is tried before sampling.
        #[arg(long, default_value_t = 3)]
        exhaustive_worlds: usize,
        /// Treat a countermodel as a failure (exit 1).
        #[arg(long)]
        expect_valid: bool,
        /// Write the countermodel here, if one is found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit an example space or a seeded random model.
    Generate {
        /// ex1, ex2, ex4-forbidden, ex5-chain or random.
        id: String,
        /// ex4-forbidden: universe size and forbidden worlds; ex5-chain: length.
        params: Vec<String>,
        /// Kind of random model.
        #[arg(long, value_enum, default_value_t = RandomKind::Gtf)]
        kind: RandomKind,
        /// Largest universe of a random model.
        #[arg(long, default_value_t = 4)]
        worlds: usize,
        /// Write the model here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Gtf,
    Gtn,
    Strong,
    Ifs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RandomKind {
    Gtf,
    Gtn,
    Gtff,
    Gtfi,
    Ifs,
    Sgt,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn ok(stdout: String) -> Self {
        CliOutput {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        CliOutput {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

type Step<T> = Result<T, CliOutput>;

pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutput::ok(text)
            } else {
                CliOutput::fail(code, text)
            };
        }
    };
    Context::new(&cli)
        .dispatch(&cli.command)
        .unwrap_or_else(|e| e)
}

struct Context {
    seed: u64,
    max_nodes: Option<usize>,
    vars: Vec<String>,
    budget: u64,
    json: bool,
}

fn json_line(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

fn names_of(set: WorldSet, names: &[String]) -> Vec<String> {
    set.iter().map(|w| names[w].clone()).collect()
}

fn load_error(e: LoadError, names: Option<&[String]>) -> CliOutput {
    let message = match (&e, names) {
        (LoadError::NotTopology(report), Some(names)) => {
            format!(
                "the listed opens do not form a generalized topology\n{}",
                render_report(report, names)
            )
        }
        _ => e.to_string(),
    };
    CliOutput::fail(e.exit_code(), format!("error: {message}"))
}

fn render_report(report: &ValidationReport, names: &[String]) -> String {
    let mut s = String::new();
    for v in &report.rendered(names).violations {
        let _ = writeln!(s, "  {}: {}", v.rule, v.witness);
    }
    s
}

fn read(path: &Path) -> Step<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliOutput::fail(2, format!("error: cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Step<()> {
    std::fs::write(path, text)
        .map_err(|e| CliOutput::fail(2, format!("error: cannot write {}: {e}", path.display())))
}

fn load(path: &Path) -> Step<NamedModel> {
    let file = ModelFile::parse(&read(path)?).map_err(|e| load_error(e, None))?;
    let names = file_world_names(&file).to_vec();
    NamedModel::from_file(&file).map_err(|e| load_error(e, Some(&names)))
}

fn file_world_names(file: &ModelFile) -> &[String] {
    match file {
        ModelFile::Gtf(g) => &g.topology.worlds,
        ModelFile::Gtn(g) => &g.worlds,
        ModelFile::Gtff(g) | ModelFile::Gtfi(g) => &g.topology.worlds,
        ModelFile::Sgt(g) => &g.topology.worlds,
    }
}

fn validation(model: &Model) -> ValidationReport {
    match model {
        Model::Gtf(m) => validate_gtf(&m.frame),
        Model::Gtn(m) => validate_gtn(m),
        Model::Gtff { model, gtfi: false } => validate_gtff(model),
        Model::Gtff { model, gtfi: true } => validate_gtfi(model),
        Model::Sgt(_) => ValidationReport::new(),
    }
}

fn semantics(model: &Model) -> &dyn Semantics {
    match model {
        Model::Gtf(m) => m,
        Model::Gtn(m) => m,
        Model::Gtff { model, .. } => model,
        Model::Sgt(m) => m,
    }
}

fn invalid_model(kind: &str, report: &ValidationReport, names: &[String]) -> CliOutput {
    CliOutput::fail(
        1,
        format!(
            "error: the {kind} model is invalid\n{}",
            render_report(report, names)
        ),
    )
}

fn require_valid(m: &NamedModel) -> Step<()> {
    let report = validation(&m.model);
    if report.valid() {
        Ok(())
    } else {
        Err(invalid_model(m.model.kind(), &report, &m.worlds))
    }
}

fn ifs_failures(cert: &IfsCertificate, names: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for o in cert.orphans.iter().filter(|o| !o.passes()) {
        let w = &names[o.world];
        if !o.nonempty {
            out.push(format!("nonempty: F_{w} is empty"));
        }
        if let Some((x, y)) = o.superset_failure {
            out.push(format!(
                "superset: {} ∈ F_{w} but its open superset {} is not",
                x.display_with(names),
                y.display_with(names)
            ));
        }
        if let Some((y, parts)) = &o.partition_failure {
            let parts: Vec<String> = parts
                .iter()
                .map(|p| p.display_with(names).to_string())
                .collect();
            out.push(format!(
                "union-partition: {} ∈ F_{w} is the union of opens outside F_{w}: [{}]",
                y.display_with(names),
                parts.join(", ")
            ));
        }
    }
    out
}

impl Context {
    fn new(cli: &Cli) -> Self {
        Context {
            seed: cli.seed,
            max_nodes: cli.max_nodes,
            vars: cli.vars.clone(),
            budget: cli.budget,
            json: cli.json,
        }
    }

    fn bound(&self, default_nodes: usize) -> Step<FormulaBound> {
        let max_nodes = self.max_nodes.unwrap_or(default_nodes);
        if max_nodes == 0 || self.vars.is_empty() || self.vars.iter().any(|v| v.is_empty()) {
            return Err(CliOutput::fail(
                2,
                "error: --max-nodes and --vars must be nonempty",
            ));
        }
        Ok(FormulaBound {
            vars: self.vars.clone(),
            max_nodes,
        })
    }

    fn dispatch(&self, command: &Command) -> Step<CliOutput> {
        match command {
            Command::Validate { file } => self.validate(file),
            Command::Eval {
                file,
                formula,
                world,
            } => self.eval(file, formula, world.as_deref()),
            Command::Transform { file, to, out } => self.transform(file, *to, out.as_deref()),
            Command::Bisim {
                left,
                right,
                kind,
                relation,
                largest: _,
                equiv,
            } => self.bisim(left, right, *kind, relation.as_deref(), *equiv),
            Command::Search {
                schema,
                class,
                max_worlds,
                max_opens,
                exhaustive_worlds,
                expect_valid,
                out,
            } => {
                let config = SearchConfig {
                    seed: self.seed,
                    max_worlds: *max_worlds,
                    max_opens: *max_opens,
                    var_count: self.vars.len(),
                    max_nodes: self.max_nodes.unwrap_or(SEARCH_NODES),
                    budget: self.budget,
                    exhaustive_worlds: *exhaustive_worlds,
                };
                self.search(schema, class, &config, *expect_valid, out.as_deref())
            }
            Command::Generate {
                id,
                params,
                kind,
                worlds,
                out,
            } => self.generate(id, params, *kind, *worlds, out.as_deref()),
        }
    }

    fn validate(&self, file: &Path) -> Step<CliOutput> {
        let m = load(file)?;
        let report = validation(&m.model);
        let mut notes = serde_json::Map::new();
        match &m.model {
            Model::Gtf(g) => {
                notes.insert("consistent".into(), json!(g.frame.is_consistent()));
            }
            Model::Gtn(g) => {
                notes.insert("closure_added".into(), json!(g.closure_added()));
            }
            _ => {}
        }
        let code = if report.valid() { 0 } else { 1 };
        let stdout = if self.json {
            let rendered = report.rendered(&m.worlds);
            json_line(&json!({
                "kind": m.model.kind(),
                "valid": rendered.valid,
                "violations": rendered.violations,
                "notes": notes,
            }))
        } else {
            let mut s = format!(
                "{} model: {}\n",
                m.model.kind(),
                if report.valid() { "valid" } else { "invalid" }
            );
            s.push_str(&render_report(&report, &m.worlds));
            for (k, v) in &notes {
                let _ = writeln!(
                    s,
                    "{}: {}",
                    k.replace('_', " "),
                    if v == &json!(true) { "yes" } else { "no" }
                );
            }
            s
        };
        Ok(CliOutput {
            code,
            stdout,
            stderr: String::new(),
        })
    }

    fn eval(&self, file: &Path, text: &str, world: Option<&str>) -> Step<CliOutput> {
        let m = load(file)?;
        require_valid(&m)?;
        let formula = parse(text).map_err(|e| CliOutput::fail(2, format!("error: {e}")))?;
        let model = semantics(&m.model);
        let truth =
            truth_set(model, &formula).map_err(|e| CliOutput::fail(2, format!("error: {e}")))?;
        let stdout = match world {
            Some(name) => {
                let w =
                    m.worlds.iter().position(|n| n == name).ok_or_else(|| {
                        CliOutput::fail(2, format!("error: unknown world `{name}`"))
                    })?;
                let holds = truth.contains(w);
                if self.json {
                    json_line(
                        &json!({"formula": formula.to_string(), "world": name, "holds": holds}),
                    )
                } else {
                    format!("{holds}\n")
                }
            }
            None => {
                if self.json {
                    json_line(
                        &json!({"formula": formula.to_string(), "truth_set": names_of(truth, &m.worlds)}),
                    )
                } else {
                    format!("{}\n", truth.display_with(&m.worlds))
                }
            }
        };
        Ok(CliOutput::ok(stdout))
    }

    fn transform(&self, file: &Path, to: Target, out: Option<&Path>) -> Step<CliOutput> {
        let m = load(file)?;
        let bound = self.bound(CERTIFICATE_NODES)?;
        let eval_err = |e: crate::semantics::EvalError| CliOutput::fail(2, format!("error: {e}"));
        let (target, cert, bijection) = match (&m.model, to) {
            (Model::Gtn(g), Target::Gtf) => {
                let t = gtn_to_gtf(g).map_err(|e| match e {
                    GtnError::Invalid(report) => invalid_model("gtn", &report, &m.worlds),
                    other => CliOutput::fail(1, format!("error: {other}")),
                })?;
                let cert = pointwise_certificate(g, Modality::Box, &t, Modality::Box, &bound).map_err(eval_err)?;
                (Model::Gtf(t), cert, false)
            }
            (Model::Gtf(g), Target::Gtn) => {
                require_valid(&m)?;
                let t = gtf_to_gtn(g);
                let cert = pointwise_certificate(g, Modality::Box, &t, Modality::Box, &bound).map_err(eval_err)?;
                (Model::Gtn(t), cert, false)
            }
            (Model::Gtf(g), Target::Strong) => {
                require_valid(&m)?;
                let t = ifs_to_strong(g).map_err(|e| match e {
                    IfsError::NotIfs(cert) => CliOutput::fail(
                        1,
                        format!(
                            "error: the model is not in-fact-strong\n  {}",
                            ifs_failures(&cert, &m.worlds).join("\n  ")
                        ),
                    ),
                    other => CliOutput::fail(1, format!("error: {other}")),
                })?;
                let cert = pointwise_certificate(g, Modality::Bullet, &t, Modality::Box, &bound).map_err(eval_err)?;
                (Model::Sgt(t), cert, true)
            }
            (Model::Sgt(s), Target::Ifs) => {
                let t = strong_to_ifs(s);
                let cert = pointwise_certificate(s, Modality::Box, &t, Modality::Bullet, &bound).map_err(eval_err)?;
                (Model::Gtf(t), cert, true)
            }
            (source, to) => {
                return Err(CliOutput::fail(
                    2,
                    format!(
                        "error: no translation from a {} model to {:?} (supported: gtn→gtf, gtf→gtn, gtf→strong, sgt→ifs)",
                        source.kind(),
                        to
                    )
                    .to_lowercase(),
                ))
            }
        };
        let emitted = NamedModel {
            name: m.name.clone(),
            worlds: m.worlds.clone(),
            model: target,
        };
        let model_json = emitted.to_json();
        if let Some(path) = out {
            write(path, &model_json)?;
        }
        let code = if cert.all_pass() { 0 } else { 1 };
        let bijection: Option<Vec<(String, String)>> =
            bijection.then(|| m.worlds.iter().map(|w| (w.clone(), w.clone())).collect());
        if self.json {
            let mut doc = json!({
                "model": serde_json::to_value(emitted.to_file()).expect("model files serialize"),
                "certificate": certificate_json(&cert, &m.worlds),
            });
            if let Some(b) = bijection {
                doc["bijection"] = json!(b);
            }
            return Ok(CliOutput {
                code,
                stdout: json_line(&doc),
                stderr: String::new(),
            });
        }
        let mut summary = certificate_text(&cert, &m.worlds);
        if let Some(b) = bijection {
            let pairs: Vec<String> = b.iter().map(|(a, c)| format!("{a}↦{c}")).collect();
            let _ = writeln!(summary, "world bijection: {}", pairs.join(", "));
        }
        Ok(match out {
            Some(_) => CliOutput {
                code,
                stdout: summary,
                stderr: String::new(),
            },
            None => CliOutput {
                code,
                stdout: model_json,
                stderr: summary,
            },
        })
    }

    fn bisim(
        &self,
        left: &Path,
        right: &Path,
        kind: u8,
        relation: Option<&str>,
        equiv: bool,
    ) -> Step<CliOutput> {
        let kind =
            BisimKind::from_index(kind).map_err(|e| CliOutput::fail(2, format!("error: {e}")))?;
        let (l, r) = (load(left)?, load(right)?);
        let (m1, m2) = (as_gtf(&l)?, as_gtf(&r)?);
        let k = kind.index();
        let mut lines = String::new();
        let mut doc = json!({"kind": k});
        let mut code = 0;

        let rel = match relation {
            Some(text) => {
                let text = if text.trim_start().starts_with('[') {
                    text.to_string()
                } else {
                    read(Path::new(text))?
                };
                let rel =
                    parse_relation(&text, &l.worlds, &r.worlds).map_err(|e| load_error(e, None))?;
                let failure = is_bisimulation(kind, &m1, &m2, &rel)
                    .map_err(|e| CliOutput::fail(2, format!("error: {e}")))?;
                doc["relation"] = json!(relation_json(&rel, &l.worlds, &r.worlds));
                doc["is_bisimulation"] = json!(failure.is_none());
                match &failure {
                    None => {
                        let _ = writeln!(lines, "the relation is a {k}-bisimulation");
                    }
                    Some(f) => {
                        let why = f.render(&l.worlds, &r.worlds);
                        let _ = writeln!(lines, "not a {k}-bisimulation: {why}");
                        doc["failure"] = json!(why);
                        code = 1;
                    }
                }
                failure.is_none().then_some(rel)
            }
            None => {
                let rel = largest_bisimulation(kind, &m1, &m2);
                let pairs = relation_json(&rel, &l.worlds, &r.worlds);
                doc["largest"] = json!(pairs);
                if rel.is_empty() {
                    let _ = writeln!(lines, "largest {k}-bisimulation: none");
                    code = 1;
                    None
                } else {
                    let shown: Vec<String> =
                        pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
                    let _ = writeln!(lines, "largest {k}-bisimulation: {{{}}}", shown.join(", "));
                    Some(rel)
                }
            }
        };

        let mut warnings = Vec::new();
        if let (true, Some(rel)) = (equiv, rel) {
            let bound = self.bound(CERTIFICATE_NODES)?;
            let language = if kind == BisimKind::Two {
                Modality::Bullet
            } else {
                Modality::Box
            };
            if kind != BisimKind::Zero && !(m1.frame.is_consistent() && m2.frame.is_consistent()) {
                warnings.push(format!(
                    "warning: the equivalence guarantee for {k}-bisimulations assumes every world is consistent (no F_w contains ∅), which these models do not satisfy"
                ));
            }
            if kind == BisimKind::Zero {
                let (u1, u2) = (
                    m1.topology().union_of_opens(),
                    m2.topology().union_of_opens(),
                );
                for (w, v) in rel.pairs() {
                    if !u1.contains(*w) || !u2.contains(*v) {
                        warnings.push(format!(
                            "warning: ({},{}) involves a world outside the union of opens, where 0-bisimilarity does not guarantee equivalence",
                            l.worlds[*w], r.worlds[*v]
                        ));
                    }
                }
            }
            let mut results = Vec::new();
            for (w, v) in rel.pairs() {
                let rep = modal_equivalence(&m1, *w, &m2, *v, &bound, language)
                    .map_err(|e| CliOutput::fail(2, format!("error: {e}")))?;
                let (a, b) = (&l.worlds[*w], &r.worlds[*v]);
                match &rep.distinguishing {
                    None => {
                        let _ = writeln!(
                            lines,
                            "({a},{b}) equivalent on {} formulas",
                            rep.formulas_checked
                        );
                    }
                    Some(f) => {
                        let _ = writeln!(lines, "({a},{b}) distinguished by {f}");
                        code = 1;
                    }
                }
                results.push(json!({
                    "pair": [a, b],
                    "formulas_checked": rep.formulas_checked,
                    "distinguishing": rep.distinguishing.as_ref().map(|f| f.to_string()),
                }));
            }
            doc["equivalence"] = json!(results);
        }
        doc["warnings"] = json!(warnings);
        let mut stderr = warnings.join("\n");
        if !stderr.is_empty() {
            stderr.push('\n');
        }
        Ok(CliOutput {
            code,
            stdout: if self.json { json_line(&doc) } else { lines },
            stderr: if self.json { String::new() } else { stderr },
        })
    }

    fn search(
        &self,
        schema: &str,
        class: &str,
        config: &SearchConfig,
        expect_valid: bool,
        out: Option<&Path>,
    ) -> Step<CliOutput> {
        let schema: AxiomSchema = schema
            .parse()
            .map_err(|e| CliOutput::fail(2, format!("error: {e}")))?;
        let class: FrameClass = class
            .parse()
            .map_err(|e| CliOutput::fail(2, format!("error: {e}")))?;
        let outcome =
            search(schema, class, config).map_err(|e| CliOutput::fail(2, format!("error: {e}")))?;
        let Some(hit) = outcome.hit else {
            let stdout = if self.json {
                json_line(&json!({
                    "schema": schema.to_string(),
                    "class": class.id(),
                    "iterations": outcome.iterations,
                    "found": false,
                }))
            } else {
                format!(
                    "no counterexample found in {} iterations\n",
                    outcome.iterations
                )
            };
            return Ok(CliOutput::ok(stdout));
        };
        let names = default_world_names(hit.model.universe());
        let model = match hit.model {
            SearchModel::Gtf(m) => Model::Gtf(m),
            SearchModel::Gtff(m) => Model::Gtff {
                model: m,
                gtfi: class == FrameClass::Gtfi,
            },
        };
        let emitted = NamedModel {
            name: Some(format!(
                "countermodel-{}",
                schema.to_string().replace(' ', "")
            )),
            worlds: names.clone(),
            model,
        };
        let model_json = emitted.to_json();
        if let Some(path) = out {
            write(path, &model_json)?;
        }
        let phase = match hit.phase {
            Phase::Exhaustive => "exhaustive",
            Phase::Random => "random",
        };
        let world = &names[hit.counterexample.world];
        let instance = hit.counterexample.instance.to_string();
        let code = if expect_valid { 1 } else { 0 };
        if self.json {
            return Ok(CliOutput {
                code,
                stdout: json_line(&json!({
                    "schema": schema.to_string(),
                    "class": class.id(),
                    "iterations": outcome.iterations,
                    "found": true,
                    "phase": phase,
                    "world": world,
                    "instance": instance,
                    "model": serde_json::to_value(emitted.to_file()).expect("model files serialize"),
                })),
                stderr: String::new(),
            });
        }
        let summary = format!(
            "countermodel found at iteration {} ({phase} phase)\nworld {world} falsifies {instance}\n",
            hit.iteration
        );
        Ok(match out {
            Some(_) => CliOutput {
                code,
                stdout: summary,
                stderr: String::new(),
            },
            None => CliOutput {
                code,
                stdout: model_json,
                stderr: summary,
            },
        })
    }

    fn generate(
        &self,
        id: &str,
        params: &[String],
        kind: RandomKind,
        worlds: usize,
        out: Option<&Path>,
    ) -> Step<CliOutput> {
        let bad = |msg: String| CliOutput::fail(2, format!("error: {msg}"));
        let expect_params = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(bad(format!(
                    "{id} takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        let model = match id {
            "random" => {
                expect_params(0)?;
                self.random_model(kind, worlds)?
            }
            _ => {
                let space = match id {
                    "ex1" => {
                        expect_params(0)?;
                        ExampleSpace::Ex1
                    }
                    "ex2" => {
                        expect_params(0)?;
                        ExampleSpace::Ex2
                    }
                    "ex4-forbidden" => {
                        expect_params(2)?;
                        let n: usize = params[0].parse().map_err(|_| bad(format!("`{}` is not a size", params[0])))?;
                        let names = default_world_names(n);
                        let forbidden = params[1]
                            .split(',')
                            .filter(|s| !s.is_empty())
                            .map(|s| names.iter().position(|x| x == s).ok_or_else(|| bad(format!("unknown world `{s}`"))))
                            .collect::<Result<Vec<_>, _>>()?;
                        ExampleSpace::Forbidden {
                            universe: n,
                            forbidden: WorldSet::from_worlds(n, forbidden),
                        }
                    }
                    "ex5-chain" => {
                        expect_params(1)?;
                        ExampleSpace::Chain(params[0].parse().map_err(|_| bad(format!("`{}` is not a length", params[0])))?)
                    }
                    other => {
                        return Err(bad(format!(
                            "unknown example `{other}` (expected ex1, ex2, ex4-forbidden, ex5-chain or random)"
                        )))
                    }
                };
                example_model(id, &space).map_err(bad)?
            }
        };
        let text = model.to_json();
        match out {
            Some(path) => {
                write(path, &text)?;
                Ok(CliOutput::ok(if self.json {
                    json_line(
                        &json!({"written": path.display().to_string(), "kind": model.model.kind()}),
                    )
                } else {
                    format!("wrote {} model to {}\n", model.model.kind(), path.display())
                }))
            }
            None => Ok(CliOutput::ok(text)),
        }
    }

    fn random_model(&self, kind: RandomKind, worlds: usize) -> Step<NamedModel> {
        if worlds == 0 {
            return Err(CliOutput::fail(2, "error: --worlds must be positive"));
        }
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let shape = Shape::default().with_worlds(1, worlds).with_vars(&vars);
        let mut rng = iteration_rng(self.seed, 0);
        let model = match kind {
            RandomKind::Gtf => Model::Gtf(random_gtf(&mut rng, &shape)),
            RandomKind::Ifs => Model::Gtf(random_ifs(&mut rng, &shape)),
            RandomKind::Gtn => Model::Gtn(random_gtn(&mut rng, &shape)),
            RandomKind::Gtff => Model::Gtff {
                model: random_gtff(&mut rng, &shape, false),
                gtfi: false,
            },
            RandomKind::Gtfi => Model::Gtff {
                model: random_gtff(&mut rng, &shape, true),
                gtfi: true,
            },
            RandomKind::Sgt => {
                let n = rand::Rng::gen_range(&mut rng, 1..=worlds);
                let t = random_topology(&mut rng, n, &shape, true);
                let valuation = random_valuation(&mut rng, n, &shape.vars);
                Model::Sgt(StrongModel::new(t, valuation).expect("generated topology is strong"))
            }
        };
        let n = semantics(&model).universe();
        Ok(NamedModel {
            name: Some(format!(
                "random-{}-seed{}",
                format!("{kind:?}").to_lowercase(),
                self.seed
            )),
            worlds: default_world_names(n),
            model,
        })
    }
}

/// The GTF-model over an example space with empty orphan families and
/// `p` true exactly on the union of opens.
fn example_model(id: &str, space: &ExampleSpace) -> Result<NamedModel, String> {
    let t = space.topology().map_err(|e| e.to_string())?;
    let valuation: Valuation = [("p".to_string(), t.union_of_opens())].into();
    let frame = GtfFrame::determined(t, &Default::default()).map_err(|e| e.to_string())?;
    let model = GtfModel::new(frame, valuation).map_err(|e| e.to_string())?;
    Ok(NamedModel {
        name: Some(id.to_string()),
        worlds: space.world_names(),
        model: Model::Gtf(model),
    })
}

fn as_gtf(m: &NamedModel) -> Step<GtfModel> {
    require_valid(m)?;
    match &m.model {
        Model::Gtf(g) => Ok(g.clone()),
        Model::Sgt(s) => Ok(strong_to_ifs(s)),
        other => Err(CliOutput::fail(
            2,
            format!(
                "error: bisimulations compare gtf or sgt models, not {}",
                other.kind()
            ),
        )),
    }
}

fn certificate_json(cert: &EquivalenceCertificate, names: &[String]) -> Value {
    json!({
        "left_modality": cert.left_modality,
        "right_modality": cert.right_modality,
        "vars": cert.vars,
        "max_nodes": cert.max_nodes,
        "formulas_checked": cert.formulas_checked,
        "all_pass": cert.all_pass(),
        "worlds": cert.worlds.iter().map(|w| json!({
            "world": names[w.world],
            "pass": w.pass,
            "counterexample": w.counterexample,
        })).collect::<Vec<_>>(),
    })
}

fn certificate_text(cert: &EquivalenceCertificate, names: &[String]) -> String {
    let mut s = format!(
        "certificate: {} formulas up to {} nodes over {}\n",
        cert.formulas_checked,
        cert.max_nodes,
        cert.vars.join(",")
    );
    for w in &cert.worlds {
        match &w.counterexample {
            None => {
                let _ = writeln!(s, "  {}: pass", names[w.world]);
            }
            Some(f) => {
                let _ = writeln!(s, "  {}: FAIL, disagree on {f}", names[w.world]);
            }
        }
    }
    s
}
