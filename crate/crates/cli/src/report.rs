use bucketsched::analysis::ComplexityReport;
use bucketsched::io::instance_to_json;
use bucketsched::{Budget, GaConfig, GenSpec, Instance, Metrics, VariableCounts};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// SHA-256 of the canonical instance JSON.
pub fn instance_digest(inst: &Instance) -> String {
    hex::encode(Sha256::digest(instance_to_json(inst).as_bytes()))
}

pub fn text_digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceInfo {
    pub digest: String,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "T")]
    pub horizon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gen: Option<GenSpec>,
}

impl InstanceInfo {
    pub fn new(inst: &Instance, gen: Option<GenSpec>) -> Self {
        Self { digest: instance_digest(inst), n: inst.n(), m: inst.machines(), horizon: inst.horizon(), gen }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridParams {
    pub delta: f64,
    pub kappa: usize,
    pub buckets: usize,
    pub phi: bool,
    pub allow_coarse: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<Budget>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ga: Option<GaConfig>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapInfo {
    pub lower_bound: f64,
    /// Percent above the lower bound; never negative.
    pub vs_lower_bound_pct: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_cmax: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vs_exact_pct: Option<f64>,
    /// Ratio ceiling for the bucket method when the optimum is known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_bound: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub version: &'static str,
    pub instance: InstanceInfo,
    pub method: String,
    pub parameters: Parameters,
    pub feasible: bool,
    pub metrics: Metrics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proved_optimal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes_explored: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complexity: Option<ComplexityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variables: Option<VariableCounts>,
    pub gap: GapInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_s: Option<f64>,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
