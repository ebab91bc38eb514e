//! Wire shapes for every report. Field order is the JSON key order, and all
//! serialization goes through serde_json's shortest-round-trip float
//! rendering, so identical invocations stay byte-identical.

use kempner_core::{CensusRow, DivergenceCertificate};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct TermReport {
    /// Exact rational weight, e.g. `1` or `1/2`.
    pub alpha: String,
    /// The log argument `g - k`.
    pub base: u32,
}

#[derive(Debug, Serialize)]
pub struct SigmaCReport {
    pub sigma_c: f64,
    pub diverges_at_sigma_c: bool,
    pub m_set_infinite: bool,
    pub terms: Vec<TermReport>,
    pub schedule_sha256: String,
}

#[derive(Debug, Serialize)]
pub struct CensusReport {
    pub rows: Vec<CensusRow>,
    pub schedule_sha256: String,
}

#[derive(Debug, Serialize)]
pub struct MemberRow {
    pub m: u64,
    pub value: u64,
}

#[derive(Debug, Serialize)]
pub struct EnumerateReport {
    pub rows: Vec<MemberRow>,
    pub schedule_sha256: String,
}

#[derive(Debug, Serialize)]
pub struct SumReport {
    pub sigma: f64,
    pub sigma_c: f64,
    pub verdict: &'static str,
    pub partial_sum: f64,
    pub lower_bound: f64,
    /// `null` means the series has no finite upper bound at this exponent.
    pub upper_bound: Option<f64>,
    pub m_enumerated: u64,
    pub m_counted: u64,
    pub certificate: Option<DivergenceCertificate>,
    pub schedule_sha256: String,
}

#[derive(Debug, Serialize)]
pub struct EstimateRow {
    pub m: u64,
    pub empirical_abscissa: f64,
    pub sigma_c: f64,
    pub error: f64,
}

#[derive(Debug, Serialize)]
pub struct EstimateReport {
    pub rows: Vec<EstimateRow>,
    pub schedule_sha256: String,
}

#[derive(Debug, Serialize)]
pub struct CertifyReport {
    pub sigma: f64,
    pub sigma_c: f64,
    pub template_constant: f64,
    pub template_ratio: f64,
    pub m_range: Vec<u64>,
    pub certified_sum_lower: f64,
    pub schedule_sha256: String,
}

#[derive(Debug, Serialize)]
pub struct ClassifyReport {
    pub sigma: f64,
    pub sigma_c: f64,
    pub verdict: &'static str,
    pub critical: bool,
    pub diverges: bool,
    pub schedule_sha256: String,
}
