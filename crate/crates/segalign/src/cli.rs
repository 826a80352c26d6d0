//! Command-line front end.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use segalign_core::alignment_functor::{build_from_pairwise, extend_colors, AlignmentFunctor};
use segalign_core::chromology::{
    canonical_arrow, check_cone, verify_pedigrad, Chromology, EnvironmentFunctor, PedigradMode, SegCone,
};
use segalign_core::dp_align::{align_all_pairs, PairwiseAlignment};
use segalign_core::finset::{Classification, LimitOptions};
use segalign_core::kan::{ran_eval, CommaObject, RanElement, RanValue};
use segalign_core::preorder::Preorder;
use segalign_core::segments::Segment;
use segalign_core::slices::{detect_mechanisms, pareto_subsets, slice_of, MechanismTemplate};

use crate::config::{Config, ModeJson};
use crate::error::{CliError, Result};
use crate::formats::{parse_segment, read_sequences, segment_name, tuple_rows, FunctorFile, OrderSpec};

/// Sequence alignment by gluing pairwise alignments along segments.
#[derive(Debug, Parser)]
#[command(name = "segalign", version, about)]
pub struct Cli {
    /// Configuration file (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Largest number of materialized tuples or elements.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// The command to run.
    #[command(subcommand)]
    pub command: Command,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Align every pair of input sequences.
    Align {
        /// FASTA or JSON sequences.
        input: PathBuf,
        /// Border handling.
        #[arg(long, value_enum)]
        mode: Option<ModeJson>,
    },
    /// Build an alignment functor from pairwise alignments.
    Build {
        /// FASTA or JSON sequences.
        input: PathBuf,
        /// Border handling.
        #[arg(long, value_enum)]
        mode: Option<ModeJson>,
        /// Truncation level label.
        #[arg(long)]
        level: Option<String>,
    },
    /// Check a stored functor.
    Validate {
        /// Functor file.
        functor: PathBuf,
    },
    /// Evaluate the Kan extension of a functor at segments.
    Ran {
        /// Functor file.
        functor: PathBuf,
        /// Query segments.
        #[arg(long, required = true)]
        tau: Vec<String>,
        /// List every element with its tuples.
        #[arg(long)]
        materialize: bool,
    },
    /// Lift Kan elements to words of individuals.
    Slice {
        /// Functor file.
        functor: PathBuf,
        /// Query segment.
        #[arg(long)]
        tau: String,
        /// Individuals, by label or zero-based position.
        #[arg(long, required = true)]
        index: Vec<String>,
        /// Also report the undominated subsets of individuals.
        #[arg(long)]
        pareto: bool,
    },
    /// Search lifts for duplication and inversion patterns.
    Mechanisms {
        /// Functor file.
        functor: PathBuf,
        /// Query segment.
        #[arg(long)]
        tau: String,
        /// Individual, by label or zero-based position.
        #[arg(long)]
        index: String,
        /// Built-in templates to use; defaults to all of them.
        #[arg(long = "template", value_enum)]
        templates: Vec<TemplateKind>,
        /// Extra templates (JSON list of `{name, block_len, legs}`).
        #[arg(long)]
        templates_file: Option<PathBuf>,
    },
    /// Classify cones of segments.
    CheckCone {
        /// Cone file.
        cones: PathBuf,
        /// Level label; defaults to every level.
        #[arg(long)]
        level: Option<String>,
    },
    /// Check the environment functor against the cones as a pedigrad.
    CheckPedigrad {
        /// Cone file.
        cones: PathBuf,
        /// Level label.
        #[arg(long)]
        level: String,
        /// Required class of limit adjoints.
        #[arg(long = "class", value_enum, default_value = "bijective")]
        class: AdjointClass,
    },
}

/// Built-in mechanism templates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TemplateKind {
    /// One letter copied.
    Duplication,
    /// A block of three reversed.
    Inversion,
}

/// Required class of limit adjoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AdjointClass {
    /// Bijective.
    Bijective,
    /// Surjective.
    Surjective,
}

impl From<AdjointClass> for PedigradMode {
    fn from(c: AdjointClass) -> Self {
        match c {
            AdjointClass::Bijective => PedigradMode::Bijective,
            AdjointClass::Surjective => PedigradMode::Surjective,
        }
    }
}

/// A finished command: the report and whether it passed its checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// The JSON report.
    pub report: Value,
    /// `false` for a failed check; the process then exits with code 1.
    pub passed: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self { report, passed: true }
    }
}

/// Cones with their display names.
pub type NamedCones = Vec<(String, SegCone)>;

/// A stored cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeJson {
    /// Display name.
    #[serde(default)]
    pub name: Option<String>,
    /// Apex segment literal.
    pub apex: String,
    /// Node segment literals.
    pub nodes: Vec<String>,
    /// Node pairs joined by identity node maps.
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
}

/// A file of cones over one order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeFile {
    /// The order of colors.
    pub omega: OrderSpec,
    /// The cones.
    pub cones: Vec<ConeJson>,
}

impl ConeFile {
    /// The order and the cones.
    ///
    /// # Errors
    ///
    /// Returns parse errors for malformed literals and validation errors
    /// for missing morphisms.
    pub fn build(&self) -> Result<(Arc<Preorder>, NamedCones)> {
        let omega = Arc::new(self.omega.build()?);
        let cones = self
            .cones
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let apex = parse_segment(&omega, &c.apex)?;
                let nodes = c
                    .nodes
                    .iter()
                    .map(|n| parse_segment(&omega, n))
                    .collect::<Result<Vec<_>>>()?;
                let edges: Vec<(usize, usize)> = c.edges.iter().map(|&[a, b]| (a, b)).collect();
                let cone = SegCone::quasi_homologous(apex, nodes, &edges)?;
                Ok((c.name.clone().unwrap_or_else(|| format!("cone {}", k + 1)), cone))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((omega, cones))
    }
}

/// Runs a parsed command line.
///
/// # Errors
///
/// Returns the failure of the command; see [`CliError::exit_code`].
pub fn run(cli: &Cli) -> Result<Outcome> {
    let mut config = match &cli.config {
        Some(p) => Config::from_json(&read(p)?)?,
        None => Config::default(),
    };
    if let Some(cap) = cli.cap {
        if cap == 0 {
            return Err(CliError::Validation("--cap must be positive".to_string()));
        }
        config.caps.result = cap;
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Validation("--jobs must be positive".to_string()));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(&cli.command, &config))
}

/// Serializes a report with a trailing newline.
///
/// # Errors
///
/// Returns [`CliError::Parse`] when serialization fails.
pub fn render(report: &Value) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}

/// The report of a failed command.
pub fn error_report(e: &CliError) -> Value {
    json!({
        "schema": "segalign.error/1",
        "kind": e.kind(),
        "exit_code": e.exit_code(),
        "message": e.to_string(),
    })
}

fn read(p: &Path) -> Result<String> {
    Ok(fs::read_to_string(p)?)
}

fn dispatch(command: &Command, config: &Config) -> Result<Outcome> {
    match command {
        Command::Align { input, mode } => cmd_align(input, mode.unwrap_or(config.mode), config),
        Command::Build { input, mode, level } => {
            let mut config = config.clone();
            if let Some(m) = mode {
                config.mode = *m;
            }
            if let Some(l) = level {
                config.level = Some(l.clone());
            }
            cmd_build(input, &config)
        }
        Command::Validate { functor } => {
            let (f, _) = load_functor(functor)?;
            Ok(validation_outcome(&f))
        }
        Command::Ran {
            functor,
            tau,
            materialize,
        } => cmd_ran(functor, tau, *materialize, config),
        Command::Slice {
            functor,
            tau,
            index,
            pareto,
        } => cmd_slice(functor, tau, index, *pareto, config),
        Command::Mechanisms {
            functor,
            tau,
            index,
            templates,
            templates_file,
        } => cmd_mechanisms(functor, tau, index, templates, templates_file.as_deref(), config),
        Command::CheckCone { cones, level } => cmd_check_cone(cones, level.as_deref(), config),
        Command::CheckPedigrad { cones, level, class } => cmd_check_pedigrad(cones, level, *class, config),
    }
}

fn render_alignment(a: &PairwiseAlignment, gap: &str) -> Value {
    let (top, bottom) = a.render(gap);
    json!({ "length": a.len(), "top": top, "bottom": bottom })
}

fn gap(config: &Config) -> &'static str {
    if config.unicode_gap {
        "ε"
    } else {
        "e"
    }
}

fn cmd_align(input: &Path, mode: ModeJson, config: &Config) -> Result<Outcome> {
    let seqs = read_sequences(&read(input)?)?;
    let alphabet = config.alphabet.build()?;
    for s in &seqs {
        alphabet.encode(&s.sequence)?;
    }
    let raw: Vec<&[u8]> = seqs.iter().map(|s| s.sequence.as_bytes()).collect();
    let pairs = align_all_pairs(&raw, mode.into());
    let pairs: Vec<Value> = pairs
        .iter()
        .map(|p| {
            json!({
                "first": seqs[p.first].name,
                "second": seqs[p.second].name,
                "score": p.score,
                "count": p.alignments.len(),
                "by_length": p.by_length().iter().map(|(n, v)| json!({"length": n, "count": v.len()})).collect::<Vec<_>>(),
                "alignments": p.alignments.iter().map(|a| render_alignment(a, gap(config))).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Outcome::ok(json!({
        "schema": "segalign.alignments/1",
        "mode": mode,
        "sequences": seqs,
        "pairs": pairs,
    })))
}

fn cmd_build(input: &Path, config: &Config) -> Result<Outcome> {
    let seqs = read_sequences(&read(input)?)?;
    let names: Vec<String> = seqs.iter().map(|s| s.name.clone()).collect();
    let labels = config.labels(&names)?;
    let spec = config.omega.spec(&labels)?;
    let alphabet = config.alphabet.build()?;
    let level = config.level_in(&spec)?;
    let encoded = seqs
        .iter()
        .map(|s| alphabet.encode(&s.sequence))
        .collect::<segalign_core::Result<Vec<_>>>()?;
    let raw: Vec<Vec<u8>> = seqs.iter().map(|s| s.sequence.as_bytes().to_vec()).collect();
    let pairs = align_all_pairs(&raw, config.mode.into());
    let policy = config.build_policy(&spec)?;
    let mut f = build_from_pairwise(&spec, &alphabet, level, &raw, &pairs, &policy)?;
    let mut factor = config.omega.clone();
    if let Some(r) = &config.recolor {
        f = extend_colors(&f, &r.plan(spec.omega(), &labels)?)?;
        factor = r.factor.clone();
    }
    f.set_sequences(encoded);
    let v = validation_outcome(&f);
    if !v.passed {
        return Ok(v);
    }
    let file = FunctorFile::from_functor(&f, &factor, &names, config.unicode_gap);
    Ok(Outcome::ok(serde_json::to_value(file)?))
}

fn load_functor(p: &Path) -> Result<(AlignmentFunctor, FunctorFile)> {
    let file: FunctorFile = serde_json::from_str(&read(p)?)?;
    Ok((file.build()?, file))
}

fn validation_outcome(f: &AlignmentFunctor) -> Outcome {
    let violations = f.validate();
    let list: Vec<Value> = violations
        .iter()
        .map(|v| json!({"morphism": v.morphism, "element": v.element, "message": v.message}))
        .collect();
    Outcome {
        report: json!({
            "schema": "segalign.validation/1",
            "passed": violations.is_empty(),
            "objects": f.base().objects().len(),
            "morphisms": f.base().morphisms().len(),
            "violations": list,
        }),
        passed: violations.is_empty(),
    }
}

fn comma_node(f: &AlignmentFunctor, o: &CommaObject) -> Value {
    json!({
        "object": segment_name(&f.base().objects()[o.target]),
        "leg": o.leg.f1(),
    })
}

fn family(f: &AlignmentFunctor, file: &FunctorFile, value: &RanValue, x: &[usize]) -> Vec<Value> {
    value
        .family(x)
        .iter()
        .zip(value.comma().objects())
        .filter_map(|(t, o)| {
            t.as_ref().map(|t| {
                json!({
                    "node": comma_node(f, o),
                    "rows": tuple_rows(f.spec(), f.alphabet(), t, file.unicode_gap),
                })
            })
        })
        .collect()
}

fn ran_report(
    f: &AlignmentFunctor,
    file: &FunctorFile,
    tau: &Segment,
    materialize: bool,
    opts: &LimitOptions,
) -> Result<Value> {
    let value = ran_eval(f, tau, opts)?;
    let comma = value.comma();
    let factors: Vec<Value> = value
        .factors()
        .iter()
        .map(|fa| {
            json!({
                "size": fa.len(),
                "terminal": fa.is_terminal(),
                "nodes": fa.nodes().iter().map(|&k| comma_node(f, &comma.objects()[k])).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut report = json!({
        "tau": segment_name(tau),
        "comma_objects": comma.len(),
        "comma_arrows": comma.arrows().len(),
        "cardinality": value.cardinality().to_string(),
        "reduced_cardinality": value.reduced_cardinality().to_string(),
        "summary": value.summary(f.base()),
        "factors": factors,
        "dropped": value.dropped().iter().map(|&k| comma_node(f, &comma.objects()[k])).collect::<Vec<_>>(),
        "warnings": value.warnings(),
    });
    if materialize {
        let elements: Vec<Value> = value
            .elements(opts.result_cap)?
            .iter()
            .map(|x| json!({"x": x, "family": family(f, file, &value, x)}))
            .collect();
        report["elements"] = Value::Array(elements);
    }
    Ok(report)
}

fn cmd_ran(functor: &Path, taus: &[String], materialize: bool, config: &Config) -> Result<Outcome> {
    let (f, file) = load_functor(functor)?;
    let opts = config.caps.limit_options();
    let segments = taus
        .iter()
        .map(|t| parse_segment(f.spec().omega(), t))
        .collect::<Result<Vec<_>>>()?;
    let values = segments
        .par_iter()
        .map(|tau| ran_report(&f, &file, tau, materialize, &opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::ok(json!({"schema": "segalign.ran/1", "values": values})))
}

fn individual(f: &AlignmentFunctor, token: &str) -> Result<usize> {
    let labels = f.spec().labels();
    if let Some(i) = labels.iter().position(|l| l == token) {
        return Ok(i);
    }
    match token.parse::<usize>() {
        Ok(i) if i < labels.len() => Ok(i),
        _ => Err(CliError::Parse(format!("unknown individual `{token}`"))),
    }
}

fn cmd_slice(functor: &Path, tau: &str, index: &[String], pareto: bool, config: &Config) -> Result<Outcome> {
    let (f, file) = load_functor(functor)?;
    let opts = config.caps.limit_options();
    let tau = parse_segment(f.spec().omega(), tau)?;
    let mut indices = index.iter().map(|t| individual(&f, t)).collect::<Result<Vec<_>>>()?;
    indices.sort_unstable();
    indices.dedup();
    let value = ran_eval(&f, &tau, &opts)?;
    let slices = indices
        .par_iter()
        .map(|&i| slice_of(&f, &value, i, &opts))
        .collect::<segalign_core::Result<Vec<_>>>()?;
    let verified = slices
        .iter()
        .map(|s| s.verify(&f))
        .collect::<segalign_core::Result<Vec<_>>>()?
        .into_iter()
        .all(|ok| ok);
    let labels = f.spec().labels();
    let mut support: BTreeSet<RanElement> = match slices.first() {
        Some(s) => s.support().into_iter().collect(),
        None => BTreeSet::new(),
    };
    for s in slices.iter().skip(1) {
        let other: BTreeSet<RanElement> = s.support().into_iter().collect();
        support = support.intersection(&other).cloned().collect();
    }
    let lifted: Vec<Value> = support
        .iter()
        .map(|x| {
            let words: serde_json::Map<String, Value> = indices
                .iter()
                .zip(&slices)
                .map(|(&i, s)| {
                    let ws: Vec<String> = s
                        .lifts(x)
                        .iter()
                        .map(|w| w.render_plain(f.alphabet(), file.unicode_gap))
                        .collect();
                    (labels[i].clone(), json!(ws))
                })
                .collect();
            json!({"x": x, "words": words})
        })
        .collect();
    let unmatched_count = value.cardinality() - support.len() as u128;
    let mut unmatched = Vec::new();
    if unmatched_count > 0 {
        value.for_each_element(|x| {
            if !support.contains(x) {
                unmatched.push(json!({"x": x, "family": family(&f, &file, &value, x)}));
            }
            unmatched.len() < config.caps.listed
        });
    }
    let mut report = json!({
        "schema": "segalign.slice/1",
        "tau": segment_name(&tau),
        "indices": indices.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>(),
        "ran_cardinality": value.cardinality().to_string(),
        "summary": value.summary(f.base()),
        "verified": verified,
        "lifted_count": lifted.len(),
        "lifted": lifted,
        "unmatched_count": unmatched_count.to_string(),
        "unmatched_listed": unmatched.len(),
        "unmatched": unmatched,
    });
    if pareto {
        let points: Vec<Value> = pareto_subsets(&f, &tau, &opts)?
            .iter()
            .map(|p| {
                json!({
                    "indices": p.indices.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>(),
                    "support": p.support,
                })
            })
            .collect();
        report["pareto"] = Value::Array(points);
    }
    Ok(Outcome {
        report,
        passed: verified,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TemplateJson {
    name: String,
    block_len: usize,
    legs: Vec<Vec<usize>>,
}

fn cmd_mechanisms(
    functor: &Path,
    tau: &str,
    index: &str,
    kinds: &[TemplateKind],
    extra: Option<&Path>,
    config: &Config,
) -> Result<Outcome> {
    let (f, file) = load_functor(functor)?;
    let opts = config.caps.limit_options();
    let tau = parse_segment(f.spec().omega(), tau)?;
    let i = individual(&f, index)?;
    let mut templates = Vec::new();
    let builtin = if kinds.is_empty() && extra.is_none() {
        &[TemplateKind::Duplication, TemplateKind::Inversion][..]
    } else {
        kinds
    };
    for k in builtin {
        templates.push(match k {
            TemplateKind::Duplication => MechanismTemplate::duplication(),
            TemplateKind::Inversion => MechanismTemplate::inversion(),
        });
    }
    if let Some(p) = extra {
        let list: Vec<TemplateJson> = serde_json::from_str(&read(p)?)?;
        for t in list {
            templates.push(
                MechanismTemplate::custom(&t.name, t.block_len, t.legs).map_err(|e| CliError::Parse(e.to_string()))?,
            );
        }
    }
    let hits = detect_mechanisms(&f, i, &tau, &templates, &opts)?;
    let comma = segalign_core::kan::CommaCategory::new(&tau, f.base())?;
    let labels = f.spec().labels();
    let hits: Vec<Value> = hits
        .iter()
        .map(|h| {
            json!({
                "kind": h.kind.as_str(),
                "name": h.name,
                "block_start": h.block_start,
                "block_len": h.block_len,
                "nodes": h.nodes.iter().map(|&k| comma_node(&f, &comma.objects()[k])).collect::<Vec<_>>(),
                "witness": h.witness.iter().map(|t| tuple_rows(f.spec(), f.alphabet(), t, file.unicode_gap)).collect::<Vec<_>>(),
                "z": h.z.render_plain(f.alphabet(), file.unicode_gap),
                "individuals": h.individuals.iter().map(|&k| labels[k].clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Outcome::ok(json!({
        "schema": "segalign.mechanisms/1",
        "tau": segment_name(&tau),
        "index": labels[i],
        "templates": templates.iter().map(|t| t.name.clone()).collect::<Vec<_>>(),
        "detected": !hits.is_empty(),
        "hits": hits,
    })))
}

/// Name of the cone class implied by a canonical arrow.
pub fn cone_class(c: Classification) -> &'static str {
    match c {
        Classification::Bijective => "exactly-distributive",
        Classification::InjectiveOnly => "injective",
        Classification::SurjectiveOnly | Classification::Neither => "neither",
    }
}

fn load_cones(p: &Path) -> Result<(Arc<Preorder>, NamedCones)> {
    let file: ConeFile = serde_json::from_str(&read(p)?)?;
    file.build()
}

fn cmd_check_cone(cones: &Path, level: Option<&str>, config: &Config) -> Result<Outcome> {
    let (omega, cones) = load_cones(cones)?;
    let levels: Vec<usize> = match level {
        Some(l) => vec![omega.element(l)?],
        None => (0..omega.len()).collect(),
    };
    let alphabet = config.alphabet.build()?;
    let opts = config.caps.limit_options();
    let reports = cones
        .par_iter()
        .map(|(name, cone)| {
            let rows = levels
                .iter()
                .map(|&b| {
                    let arrow = canonical_arrow(cone, b)?.classify();
                    let mode = if arrow == Classification::Bijective {
                        PedigradMode::Bijective
                    } else {
                        PedigradMode::Surjective
                    };
                    let env = EnvironmentFunctor::new(alphabet.clone(), b, u128::from(config.caps.words));
                    let r = check_cone(&env, cone, mode, &opts)?;
                    let predicted = arrow.is_injective();
                    Ok((
                        json!({
                            "level": omega.label(b),
                            "class": cone_class(arrow),
                            "canonical_arrow": arrow.as_str(),
                            "limit_adjoint": r.classification.as_str(),
                            "structural": r.structural,
                            "consistent": !predicted || r.passed,
                        }),
                        !predicted || r.passed,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            let ok = rows.iter().all(|(_, ok)| *ok);
            Ok((
                json!({
                    "name": name,
                    "apex": cone.apex().to_string(),
                    "levels": rows.into_iter().map(|(v, _)| v).collect::<Vec<_>>(),
                }),
                ok,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = reports.iter().all(|(_, ok)| *ok);
    Ok(Outcome {
        report: json!({
            "schema": "segalign.cones/1",
            "passed": passed,
            "cones": reports.into_iter().map(|(v, _)| v).collect::<Vec<_>>(),
        }),
        passed,
    })
}

fn cmd_check_pedigrad(cones: &Path, level: &str, class: AdjointClass, config: &Config) -> Result<Outcome> {
    let (omega, cones) = load_cones(cones)?;
    let b = omega.element(level)?;
    let mut chrom = Chromology::new(omega.clone());
    for (_, c) in &cones {
        chrom.add(c.clone())?;
    }
    let env = EnvironmentFunctor::new(config.alphabet.build()?, b, u128::from(config.caps.words));
    let report = verify_pedigrad(&env, &chrom, class.into(), &config.caps.limit_options())?;
    let mut by_size: Vec<&(String, SegCone)> = cones.iter().collect();
    by_size.sort_by_key(|(_, c)| c.apex().n1());
    let rows: Vec<Value> = by_size
        .iter()
        .zip(&report.cones)
        .map(|((name, _), r)| {
            json!({
                "name": name,
                "limit_adjoint": r.classification.as_str(),
                "structural": r.structural,
                "passed": r.passed,
            })
        })
        .collect();
    Ok(Outcome {
        report: json!({
            "schema": "segalign.pedigrad/1",
            "level": omega.label(b),
            "class": match class {
                AdjointClass::Bijective => "bijective",
                AdjointClass::Surjective => "surjective",
            },
            "passed": report.passed(),
            "cones": rows,
        }),
        passed: report.passed(),
    })
}
