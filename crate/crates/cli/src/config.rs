//! Experiment configuration files.

use std::path::Path;

use charsum_core::sheaf::SheafSpecJson;
use serde::{Deserialize, Serialize};

use crate::presets;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Bound report for each spec.
    Bound,
    /// Incomplete and complete sums for each spec.
    Sum,
    /// Every exact check (transfer identity, pullback forms, Swan, bound,
    /// hypothesis sufficiency) on each spec or sweep case.
    Verify,
    /// Hypothesis → bound → incomplete sum comparison over a sweep.
    Sweep,
    /// L-polynomial fit and purity for each spec.
    Lpoly,
    /// Transfer laws for finite groups.
    Group,
}

/// Character set for a Kummer slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CharSet {
    All,
    Nontrivial,
}

/// Additive twists `b` for the AS slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistSet {
    /// `b = 1`.
    One,
    /// `b ∈ F_p^*`.
    PrimeField,
    /// `b ∈ F_{q^d}^*`.
    All,
}

/// `num/den` with placeholders `a`, `b` ranging over `F_{q^d}` and `c`
/// over `F_{q^d}^*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub num: String,
    #[serde(default = "one_text")]
    pub den: String,
}

fn one_text() -> String {
    "1".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsSlot {
    #[serde(default)]
    pub templates: Vec<Template>,
    /// Also every polynomial of degree ≤ this (all coefficients).
    #[serde(default)]
    pub poly_max_degree: Option<u32>,
    pub twists: TwistSet,
}

/// `(p, q_exp, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldTriple(pub u64, pub u32, pub u32);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepGroup {
    pub fields: Vec<FieldTriple>,
    /// Numbers of Kummer factors.
    #[serde(default = "zero_k")]
    pub k: Vec<usize>,
    /// Kummer polynomials: monic of degree `1..=max_degree`.
    #[serde(default = "three")]
    pub max_degree: u32,
    #[serde(default = "nontrivial")]
    pub characters: CharSet,
    /// Keep only cases whose Kummer polynomials are pairwise coprime.
    #[serde(default)]
    pub coprime_only: bool,
    #[serde(default, rename = "as")]
    pub as_slot: Option<AsSlot>,
    /// Seeded sample size per `(field, k)` when the full product is larger.
    #[serde(default)]
    pub sample: Option<u64>,
}

fn zero_k() -> Vec<usize> {
    vec![1]
}

fn three() -> u32 {
    3
}

fn nontrivial() -> CharSet {
    CharSet::Nontrivial
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub groups: Vec<SweepGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupConfig {
    /// `cyclic:n`, `dihedral:n`, `symmetric:n` or table JSON.
    pub descriptors: Vec<String>,
    #[serde(default = "six")]
    pub max_index: usize,
}

fn six() -> usize {
    6
}

fn two() -> u32 {
    2
}

fn one_m() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default)]
    pub spec: Option<SheafSpecJson>,
    #[serde(default)]
    pub specs: Vec<SheafSpecJson>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub groups: Option<GroupConfig>,
    /// Degree `m` of the complete sum reported by `sum`.
    #[serde(default = "one_m")]
    pub m: u32,
    /// Largest `m` tried by the triviality oracle.
    #[serde(default = "two")]
    pub oracle_m_max: u32,
    /// Character-evaluation budget; the CLI flag overrides it.
    #[serde(default)]
    pub max_evals: Option<u64>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("malformed config: {e}")))
    }

    pub fn load(path: Option<&Path>, preset: Option<&str>) -> Result<Self, CliError> {
        match (path, preset) {
            (Some(_), Some(_)) => Err(CliError::Invalid(
                "--config and --preset are mutually exclusive".into(),
            )),
            (None, None) => Err(CliError::Invalid("one of --config or --preset is required".into())),
            (Some(p), None) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", p.display())))?;
                Self::from_json(&text)
            }
            (None, Some(name)) => {
                let text = presets::get(name).ok_or_else(|| {
                    CliError::Invalid(format!(
                        "unknown preset `{name}` (available: {})",
                        presets::names().join(", ")
                    ))
                })?;
                Self::from_json(text)
            }
        }
    }

    /// Every explicitly listed spec (`spec` first).
    pub fn listed_specs(&self) -> Vec<SheafSpecJson> {
        self.spec.iter().chain(&self.specs).cloned().collect()
    }
}
