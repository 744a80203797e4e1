//! The selection manifest: the canonical, versioned JSON record every
//! pipeline emits. Keys serialize sorted, so identical inputs, config, and
//! seeds produce byte-identical documents outside the timing section.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground::Family;
use crate::optimize::Constraint;

#[derive(Debug, Clone, Serialize)]
pub struct ModelSection {
    pub name: String,
    pub family: Family,
    pub monotone: bool,
    pub submodular: bool,
    pub params: ParamsSection,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ParamsSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub knn: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgorithmSection {
    pub requested: String,
    pub executed: String,
    pub constraint: Constraint,
    pub lazy: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lazy_resorts: Option<usize>,
    pub lazy_fallback: bool,
    pub stop_at_zero: bool,
    pub tie_break: String,
    pub parallel: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroundSetSection {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pre_filter_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub query: Option<String>,
    /// Original snippet positions for a query-filtered ground set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance_map: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelectedSection {
    pub indices: Vec<usize>,
    pub ids: Vec<String>,
    pub objective: f64,
    pub total_cost: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct TimingsSection {
    pub construction_s: f64,
    pub kernel_s: f64,
    pub solve_s: f64,
}

/// Output record of one pipeline run.
#[derive(Debug, Clone, Serialize)]
pub struct SelectionManifest {
    pub version: String,
    pub kind: String,
    pub model: ModelSection,
    pub algorithm: AlgorithmSection,
    pub ground_set: GroundSetSection,
    pub selected: SelectedSection,
    pub objective_trace: Vec<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub class_counts: BTreeMap<String, usize>,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
    pub provenance: BTreeMap<String, String>,
    pub timings: TimingsSection,
}

impl SelectionManifest {
    /// Canonical JSON: sorted keys, pretty-printed, trailing newline.
    pub fn to_canonical_json(&self) -> Result<String> {
        canonical_json(self)
    }
}

/// Serializes any value to canonical JSON with sorted keys.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    // round-tripping through Value sorts object keys (serde_json maps are
    // BTreeMaps) regardless of struct field order
    let value = serde_json::to_value(value)
        .map_err(|e| Error::FormatError(format!("manifest serialization: {e}")))?;
    let mut text = serde_json::to_string_pretty(&value)
        .map_err(|e| Error::FormatError(format!("manifest serialization: {e}")))?;
    text.push('\n');
    Ok(text)
}
