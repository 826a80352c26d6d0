//! Run configuration.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use segalign_core::alignment_functor::{BuildPolicy, RecolorPlan};
use segalign_core::dp_align::Mode;
use segalign_core::environment::AlignmentSpec;
use segalign_core::finset::LimitOptions;
use segalign_core::preorder::Preorder;

use crate::error::{CliError, Result};
use crate::formats::{parse_segment, AlphabetJson, HubModeJson, OrderSpec};

/// Serialized alignment mode.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModeJson {
    /// Penalized borders on both sides.
    #[default]
    Global,
    /// Free borders on both sides.
    Local,
    /// Free leading gaps in the bottom sequence.
    Semiglobal,
}

impl From<ModeJson> for Mode {
    fn from(m: ModeJson) -> Self {
        match m {
            ModeJson::Global => Mode::Global,
            ModeJson::Local => Mode::Local,
            ModeJson::Semiglobal => Mode::SemiGlobal,
        }
    }
}

/// Which objects the build creates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicyConfig {
    /// Explicit segment literals, or every pair object plus shared hubs.
    pub objects: Option<Vec<String>>,
    /// How hubs are filled.
    pub hub_mode: HubModeJson,
}

/// A move to a finer order after building.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecolorConfig {
    /// The finer factor order.
    pub factor: OrderSpec,
    /// `[existing, new]` segment literals.
    #[serde(default)]
    pub copies: Vec<[String; 2]>,
    /// New hub segment literals.
    #[serde(default)]
    pub hubs: Vec<String>,
    /// `[source, target]` segment literals joined by every morphism.
    #[serde(default)]
    pub links: Vec<[String; 2]>,
}

/// Resource caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    /// Largest candidate product filtered exhaustively.
    pub product: u64,
    /// Largest number of materialized limit tuples or elements.
    pub result: usize,
    /// Largest environment image materialized.
    pub words: u64,
    /// Most elements listed as examples in a report.
    pub listed: usize,
}

impl Default for Caps {
    fn default() -> Self {
        let opts = LimitOptions::default();
        Self {
            product: opts.product_cap as u64,
            result: opts.result_cap,
            words: 1 << 16,
            listed: 32,
        }
    }
}

impl Caps {
    /// The limit options carrying these caps.
    pub fn limit_options(&self) -> LimitOptions {
        LimitOptions {
            product_cap: u128::from(self.product),
            result_cap: self.result,
        }
    }
}

/// A full run configuration; every field has a default.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Index labels, defaulting to the sequence names.
    pub individuals: Option<Vec<String>>,
    /// Order of every factor.
    pub omega: OrderSpec,
    /// The alphabet.
    pub alphabet: AlphabetJson,
    /// Truncation level label, defaulting to the top element.
    pub level: Option<String>,
    /// Alignment mode.
    pub mode: ModeJson,
    /// Object policy of the build.
    pub policy: PolicyConfig,
    /// Optional recoloring after the build.
    pub recolor: Option<RecolorConfig>,
    /// Resource caps.
    pub caps: Caps,
    /// Whether gaps render as `ε` rather than `e`.
    pub unicode_gap: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            individuals: None,
            omega: OrderSpec::default(),
            alphabet: AlphabetJson::default(),
            level: None,
            mode: ModeJson::default(),
            policy: PolicyConfig::default(),
            recolor: None,
            caps: Caps::default(),
            unicode_gap: true,
        }
    }
}

impl Config {
    /// Parses and checks a configuration file.
    ///
    /// # Errors
    ///
    /// Returns [`CliError::Parse`] for malformed JSON and
    /// [`CliError::Validation`] for failed checks.
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text)?;
        c.check()?;
        Ok(c)
    }

    /// Checks the invariants that do not depend on the input sequences.
    ///
    /// # Errors
    ///
    /// Returns [`CliError::Validation`] for duplicate names or zero caps.
    pub fn check(&self) -> Result<()> {
        if let Some(names) = &self.individuals {
            unique(names)?;
        }
        if self.caps.product == 0 || self.caps.result == 0 || self.caps.words == 0 || self.caps.listed == 0 {
            return Err(CliError::Validation("caps must be positive".to_string()));
        }
        self.omega.build()?;
        self.alphabet.build()?;
        Ok(())
    }

    /// The index labels for `names`, checked against the configured ones.
    ///
    /// # Errors
    ///
    /// Returns [`CliError::Validation`] when the counts differ or labels
    /// repeat.
    pub fn labels(&self, names: &[String]) -> Result<Vec<String>> {
        let labels = match &self.individuals {
            Some(l) if l.len() != names.len() => {
                return Err(CliError::Validation(format!(
                    "{} individuals configured for {} sequences",
                    l.len(),
                    names.len()
                )))
            }
            Some(l) => l.clone(),
            None => names.to_vec(),
        };
        unique(&labels)?;
        Ok(labels)
    }

    /// The truncation level inside `spec`.
    ///
    /// # Errors
    ///
    /// Returns [`CliError::Parse`] for an unknown label.
    pub fn level_in(&self, spec: &AlignmentSpec) -> Result<usize> {
        let omega = spec.omega();
        match &self.level {
            Some(l) => Ok(omega.element(l)?),
            None => top(omega).ok_or_else(|| CliError::Validation("the order has no top element".to_string())),
        }
    }

    /// The build policy over `spec`.
    ///
    /// # Errors
    ///
    /// Returns [`CliError::Parse`] for malformed segment literals.
    pub fn build_policy(&self, spec: &AlignmentSpec) -> Result<BuildPolicy> {
        let objects = match &self.policy.objects {
            Some(list) => Some(
                list.iter()
                    .map(|s| parse_segment(spec.omega(), s))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        Ok(BuildPolicy {
            objects,
            hub_mode: self.policy.hub_mode.into(),
        })
    }
}

impl RecolorConfig {
    /// The recolor plan from a specification over `source` with `labels`.
    ///
    /// # Errors
    ///
    /// Returns [`CliError::Parse`] for malformed orders or literals.
    pub fn plan(&self, source: &Arc<Preorder>, labels: &[String]) -> Result<RecolorPlan> {
        let target = self.factor.spec(labels)?;
        let omega = target.omega().clone();
        let seg = |s: &String| parse_segment(&omega, s);
        let pair = |p: &[String; 2]| Ok((seg(&p[0])?, seg(&p[1])?));
        let copy = |p: &[String; 2]| Ok((parse_segment(source, &p[0])?, seg(&p[1])?));
        Ok(RecolorPlan {
            copies: self.copies.iter().map(copy).collect::<Result<Vec<_>>>()?,
            hubs: self.hubs.iter().map(seg).collect::<Result<Vec<_>>>()?,
            links: self.links.iter().map(pair).collect::<Result<Vec<_>>>()?,
            target,
        })
    }
}

fn unique(names: &[String]) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(CliError::Validation(format!("duplicate individual `{n}`")));
        }
    }
    Ok(())
}

fn top(omega: &Preorder) -> Option<usize> {
    (0..omega.len()).find(|&x| (0..omega.len()).all(|y| omega.leq(y, x)))
}
