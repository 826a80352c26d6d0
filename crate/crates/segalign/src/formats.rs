//! File formats: sequences, orders, segments, alphabets and functors.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Map;

use segalign_core::alignment_functor::{AlignmentFunctor, BaseCategory, HubMode, ObjectImage};
use segalign_core::environment::{AlignedTuple, AlignmentSpec, PointedAlphabet};
use segalign_core::preorder::{boolean_preorder, chain_preorder, product, Preorder};
use segalign_core::segments::Segment;

use crate::error::{CliError, Result};

/// Schema tag of functor files.
pub const FUNCTOR_SCHEMA: &str = "segalign.functor/1";

/// A named input sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedSequence {
    /// Record name.
    pub name: String,
    /// Letters, without gaps.
    pub sequence: String,
}

/// Reads FASTA text, or a JSON object mapping names to sequences.
///
/// # Errors
///
/// Returns [`CliError::Parse`] for malformed input, empty or duplicated
/// names, and gap symbols inside sequences.
pub fn read_sequences(text: &str) -> Result<Vec<NamedSequence>> {
    let out = if text.trim_start().starts_with('{') {
        let map: Map<String, serde_json::Value> = serde_json::from_str(text)?;
        map.into_iter()
            .map(|(name, v)| match v {
                serde_json::Value::String(sequence) => Ok(NamedSequence { name, sequence }),
                _ => Err(CliError::Parse(format!("sequence `{name}` is not a string"))),
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        read_fasta(text)?
    };
    for (i, s) in out.iter().enumerate() {
        if s.name.is_empty() {
            return Err(CliError::Parse("sequence with an empty name".to_string()));
        }
        if out[..i].iter().any(|t| t.name == s.name) {
            return Err(CliError::Parse(format!("duplicate sequence name `{}`", s.name)));
        }
        if s.sequence.chars().any(|c| matches!(c, 'ε' | '-')) {
            return Err(CliError::Parse(format!("gap symbol inside sequence `{}`", s.name)));
        }
    }
    Ok(out)
}

fn read_fasta(text: &str) -> Result<Vec<NamedSequence>> {
    let mut out: Vec<NamedSequence> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            let name = header.split_whitespace().next().unwrap_or("").to_string();
            out.push(NamedSequence {
                name,
                sequence: String::new(),
            });
        } else {
            let record = out
                .last_mut()
                .ok_or_else(|| CliError::Parse(format!("line {}: sequence data before any header", n + 1)))?;
            record.sequence.extend(
                line.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| c.to_ascii_uppercase()),
            );
        }
    }
    Ok(out)
}

/// An ordered set given by kind.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OrderSpec {
    /// `{0 <= 1}`.
    #[default]
    Boolean,
    /// `{0 <= .. <= levels-1}`.
    Chain {
        /// Number of elements.
        levels: usize,
    },
    /// An explicit relation.
    Custom(PreorderJson),
}

impl OrderSpec {
    /// The pre-order described.
    ///
    /// # Errors
    ///
    /// Returns [`CliError::Parse`] for an empty chain or an invalid relation.
    pub fn build(&self) -> Result<Preorder> {
        match self {
            Self::Boolean => Ok(boolean_preorder()),
            Self::Chain { levels: 0 } => Err(CliError::Parse("a chain needs at least one level".to_string())),
            Self::Chain { levels } => Ok(chain_preorder(*levels)),
            Self::Custom(p) => p.build(),
        }
    }

    /// The alignment specification with one copy of this order per label.
    ///
    /// # Errors
    ///
    /// As [`OrderSpec::build`], plus invalid label lists.
    pub fn spec(&self, labels: &[String]) -> Result<AlignmentSpec> {
        let factor = Arc::new(self.build()?);
        let (omega, maps) = product(&vec![factor; labels.len()])?;
        Ok(AlignmentSpec::new(omega, labels.to_vec(), maps)?)
    }
}

/// A pre-order as element labels and a relation matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreorderJson {
    /// Labels in order.
    pub elements: Vec<String>,
    /// `relation[i][j]` holds when element `i` is below element `j`.
    pub relation: Vec<Vec<bool>>,
}

impl PreorderJson {
    /// The serialized form of `p`.
    pub fn from_preorder(p: &Preorder) -> Self {
        Self {
            elements: p.elements().to_vec(),
            relation: p.relation(),
        }
    }

    /// The pre-order described.
    ///
    /// # Errors
    ///
    /// Returns [`CliError::Parse`] for an invalid relation.
    pub fn build(&self) -> Result<Preorder> {
        Ok(Preorder::new(self.elements.clone(), self.relation.clone())?)
    }
}

/// A segment as node topology and patch color labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentJson {
    /// Number of nodes.
    pub n1: usize,
    /// Patch index of every node.
    pub topology: Vec<usize>,
    /// Color label of every patch.
    pub colors: Vec<String>,
}

impl SegmentJson {
    /// The serialized form of `s`.
    pub fn from_segment(s: &Segment) -> Self {
        Self {
            n1: s.n1(),
            topology: s.topology().to_vec(),
            colors: s.colors().iter().map(|&c| s.omega().label(c).to_string()).collect(),
        }
    }

    /// The segment described, over `omega`.
    ///
    /// # Errors
    ///
    /// Returns [`CliError::Parse`] for unknown colors or a bad topology.
    pub fn build(&self, omega: &Arc<Preorder>) -> Result<Segment> {
        if self.topology.len() != self.n1 {
            return Err(CliError::Parse(format!(
                "segment declares {} nodes but has {} patch indices",
                self.n1,
                self.topology.len()
            )));
        }
        let colors = self
            .colors
            .iter()
            .map(|c| omega.element(c))
            .collect::<segalign_core::Result<Vec<_>>>()?;
        Ok(Segment::new(omega.clone(), self.topology.clone(), colors)?)
    }
}

/// Parses a segment literal: compact `(!8,[1100])` or patch brackets.
///
/// # Errors
///
/// Returns [`CliError::Parse`] for malformed text.
pub fn parse_segment(omega: &Arc<Preorder>, text: &str) -> Result<Segment> {
    Segment::parse(omega, text).map_err(|e| CliError::Parse(format!("segment `{text}`: {e}")))
}

/// Display name of a segment: compact when it has one patch.
pub fn segment_name(s: &Segment) -> String {
    s.compact().unwrap_or_else(|| s.to_string())
}

/// An alphabet with its gap symbol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphabetJson {
    /// Symbols, the gap included.
    pub symbols: Vec<String>,
    /// The gap symbol.
    pub basepoint: String,
}

impl Default for AlphabetJson {
    fn default() -> Self {
        Self::from_alphabet(&PointedAlphabet::dna())
    }
}

impl AlphabetJson {
    /// The serialized form of `a`.
    pub fn from_alphabet(a: &PointedAlphabet) -> Self {
        Self {
            symbols: a.symbols().to_vec(),
            basepoint: a.symbols()[a.basepoint() as usize].clone(),
        }
    }

    /// The alphabet described.
    ///
    /// # Errors
    ///
    /// Returns [`CliError::Parse`] for duplicates or a missing basepoint.
    pub fn build(&self) -> Result<PointedAlphabet> {
        PointedAlphabet::new(self.symbols.clone(), &self.basepoint).map_err(|e| CliError::Parse(e.to_string()))
    }
}

/// Serialized hub handling.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HubModeJson {
    /// Hubs stand for every tuple.
    #[default]
    Full,
    /// Hubs hold the tuples pushed into them.
    ReachableClosure,
}

impl From<HubModeJson> for HubMode {
    fn from(m: HubModeJson) -> Self {
        match m {
            HubModeJson::Full => HubMode::Full,
            HubModeJson::ReachableClosure => HubMode::ReachableClosure,
        }
    }
}

impl From<HubMode> for HubModeJson {
    fn from(m: HubMode) -> Self {
        match m {
            HubMode::Full => HubModeJson::Full,
            HubMode::ReachableClosure => HubModeJson::ReachableClosure,
        }
    }
}

/// Rows of an aligned tuple keyed by index label.
pub type Rows = Map<String, serde_json::Value>;

/// Rows of `x`, keyed by the labels of `spec`.
pub fn tuple_rows(spec: &AlignmentSpec, alphabet: &PointedAlphabet, x: &AlignedTuple, unicode_gap: bool) -> Rows {
    spec.labels()
        .iter()
        .zip(x.components())
        .map(|(l, w)| {
            (
                l.clone(),
                serde_json::Value::String(w.render_plain(alphabet, unicode_gap)),
            )
        })
        .collect()
}

fn rows_tuple(
    spec: &AlignmentSpec,
    alphabet: &PointedAlphabet,
    segment: &Segment,
    level: usize,
    rows: &Rows,
) -> Result<AlignedTuple> {
    if let Some(extra) = rows.keys().find(|k| !spec.labels().contains(k)) {
        return Err(CliError::Parse(format!("row for unknown index `{extra}`")));
    }
    let texts = spec
        .labels()
        .iter()
        .map(|l| match rows.get(l) {
            None => Ok(String::new()),
            Some(serde_json::Value::String(s)) => Ok(s.clone()),
            Some(_) => Err(CliError::Parse(format!("row `{l}` is not a string"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AlignedTuple::from_rows(spec, alphabet, segment, level, &texts)?)
}

/// The image of one base object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ImageJson {
    /// Listed tuples.
    Finite {
        /// One row map per tuple.
        tuples: Vec<Rows>,
    },
    /// Every tuple of the environment.
    FullEnvironment,
}

/// A base object with its image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectJson {
    /// Display name.
    pub name: String,
    /// The segment.
    pub segment: SegmentJson,
    /// Its tuples.
    pub image: ImageJson,
}

/// A stored alignment functor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctorFile {
    /// Always [`FUNCTOR_SCHEMA`].
    pub schema: String,
    /// Index labels in order.
    pub individuals: Vec<String>,
    /// Order of every factor.
    pub factor: OrderSpec,
    /// The alphabet.
    pub alphabet: AlphabetJson,
    /// Truncation level label.
    pub level: String,
    /// How hubs were filled.
    pub hub_mode: HubModeJson,
    /// Gap rendering in rows.
    pub unicode_gap: bool,
    /// The raw sequences, in index order.
    pub sequences: Vec<NamedSequence>,
    /// Base objects.
    pub objects: Vec<ObjectJson>,
    /// Object pairs joined by every segment morphism.
    pub links: Vec<[usize; 2]>,
}

impl FunctorFile {
    /// The serialized form of `f`.
    pub fn from_functor(f: &AlignmentFunctor, factor: &OrderSpec, names: &[String], unicode_gap: bool) -> Self {
        let spec = f.spec();
        let alphabet = f.alphabet();
        let objects = f
            .base()
            .objects()
            .iter()
            .zip(f.images())
            .map(|(s, img)| ObjectJson {
                name: segment_name(s),
                segment: SegmentJson::from_segment(s),
                image: match img {
                    ObjectImage::Full => ImageJson::FullEnvironment,
                    ObjectImage::Finite(v) => ImageJson::Finite {
                        tuples: v.iter().map(|x| tuple_rows(spec, alphabet, x, unicode_gap)).collect(),
                    },
                },
            })
            .collect();
        let sequences = f
            .sequences()
            .iter()
            .zip(names)
            .map(|(s, n)| NamedSequence {
                name: n.clone(),
                sequence: s.iter().map(|&l| alphabet.render(l, unicode_gap)).collect(),
            })
            .collect();
        Self {
            schema: FUNCTOR_SCHEMA.to_string(),
            individuals: spec.labels().to_vec(),
            factor: factor.clone(),
            alphabet: AlphabetJson::from_alphabet(alphabet),
            level: spec.omega().label(f.level()).to_string(),
            hub_mode: f.hub_mode().into(),
            unicode_gap,
            sequences,
            objects,
            links: f.base().links().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    /// The stored functor.
    ///
    /// # Errors
    ///
    /// Returns [`CliError::Parse`] for a wrong schema or malformed content,
    /// and validation errors for inconsistent objects.
    pub fn build(&self) -> Result<AlignmentFunctor> {
        if self.schema != FUNCTOR_SCHEMA {
            return Err(CliError::Parse(format!(
                "expected schema {FUNCTOR_SCHEMA}, found {}",
                self.schema
            )));
        }
        let spec = self.factor.spec(&self.individuals)?;
        let alphabet = self.alphabet.build()?;
        let omega = spec.omega().clone();
        let level = omega.element(&self.level)?;
        let segments = self
            .objects
            .iter()
            .map(|o| o.segment.build(&omega))
            .collect::<Result<Vec<_>>>()?;
        let mut base = BaseCategory::full_quasi_homologous(segments.clone())?;
        for &[a, b] in &self.links {
            base.add_links(a, b)?;
        }
        let images = self
            .objects
            .iter()
            .zip(&segments)
            .map(|(o, s)| match &o.image {
                ImageJson::FullEnvironment => Ok(ObjectImage::Full),
                ImageJson::Finite { tuples } => Ok(ObjectImage::Finite(
                    tuples
                        .iter()
                        .map(|r| rows_tuple(&spec, &alphabet, s, level, r))
                        .collect::<Result<Vec<_>>>()?,
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        let sequences = self
            .sequences
            .iter()
            .map(|s| alphabet.encode(&s.sequence))
            .collect::<segalign_core::Result<Vec<_>>>()?;
        let mut f = AlignmentFunctor::new(base, spec, alphabet, level, images)?;
        f.set_sequences(sequences);
        f.set_hub_mode(self.hub_mode.into());
        Ok(f)
    }
}
