//! Machine-readable certificate and oracle records.
//!
//! Exact numbers serialize as decimal / `num/den` strings so the JSON is
//! stable, diffable, and round-trips losslessly. `reverify` re-checks a
//! parsed certificate against the system it claims to solve, independently
//! of the pipeline that produced it.

use crate::discrepancy::RoundingMethod;
use crate::frobenius::{FeasibilityCertificate, OracleReport, StandardCertificate};
use crate::system::{CanonicalSystem, StandardSystem};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

fn int_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn parse_ints(v: &[String]) -> Option<Vec<BigInt>> {
    v.iter().map(|s| BigInt::from_str(s).ok()).collect()
}

/// Serializable image of a feasibility certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateRecord {
    /// `canonical` or `standard`.
    pub kind: String,
    pub mode: String,
    pub verified: bool,
    pub precondition_ok: bool,
    /// `Delta(A)` of the system the base lives in.
    pub delta: String,
    pub base_indices: Vec<usize>,
    /// `|det A_B|`.
    pub det_b: String,
    /// Required slack level `Delta - 1 + achieved`.
    pub threshold_t: String,
    /// Best uniform slack of the relaxation.
    pub available_slack: String,
    /// The certified point (canonical variables, or the standard point for
    /// `kind = standard`).
    pub z: Vec<String>,
    /// Rounded base-slack vector.
    pub rounding_z: Vec<String>,
    pub rounding_achieved: String,
    pub rounding_method: String,
    pub rounding_certified: bool,
    /// Exact per-row slacks of `z` (canonical) or the point itself, whose
    /// nonnegativity is the constraint (standard).
    pub slacks: Vec<String>,
}

pub fn canonical_record(cert: &FeasibilityCertificate, sys: &CanonicalSystem) -> CertificateRecord {
    CertificateRecord {
        kind: "canonical".into(),
        mode: cert.mode.as_str().into(),
        verified: cert.verified,
        precondition_ok: cert.precondition_ok,
        delta: cert.delta.to_string(),
        base_indices: cert.base.indices.clone(),
        det_b: cert.base.det_abs.to_string(),
        threshold_t: cert.threshold_t.to_string(),
        available_slack: cert.slack_input.min_slack.to_string(),
        z: int_strings(&cert.z),
        rounding_z: int_strings(&cert.rounding.z),
        rounding_achieved: cert.rounding.achieved.to_string(),
        rounding_method: match cert.rounding.method {
            RoundingMethod::Exhaustive => "exhaustive".into(),
            RoundingMethod::Heuristic => "heuristic".into(),
        },
        rounding_certified: cert.rounding.certified,
        slacks: int_strings(&sys.slacks_at(&cert.z)),
    }
}

pub fn standard_record(cert: &StandardCertificate, sys: &StandardSystem) -> CertificateRecord {
    let base = match &cert.canonical {
        Some(c) => c,
        None => {
            return CertificateRecord {
                kind: "standard".into(),
                mode: "degenerate".into(),
                verified: cert.verified,
                precondition_ok: true,
                delta: sys.delta().to_string(),
                base_indices: Vec::new(),
                det_b: "1".into(),
                threshold_t: "0".into(),
                available_slack: "0".into(),
                z: int_strings(&cert.z),
                rounding_z: Vec::new(),
                rounding_achieved: "0".into(),
                rounding_method: "exhaustive".into(),
                rounding_certified: true,
                slacks: int_strings(&cert.z),
            }
        }
    };
    CertificateRecord {
        kind: "standard".into(),
        mode: base.mode.as_str().into(),
        verified: cert.verified,
        precondition_ok: base.precondition_ok,
        delta: base.delta.to_string(),
        base_indices: base.base.indices.clone(),
        det_b: base.base.det_abs.to_string(),
        threshold_t: base.threshold_t.to_string(),
        available_slack: base.slack_input.min_slack.to_string(),
        z: int_strings(&cert.z),
        rounding_z: int_strings(&base.rounding.z),
        rounding_achieved: base.rounding.achieved.to_string(),
        rounding_method: match base.rounding.method {
            RoundingMethod::Exhaustive => "exhaustive".into(),
            RoundingMethod::Heuristic => "heuristic".into(),
        },
        rounding_certified: base.rounding.certified,
        slacks: int_strings(&cert.z),
    }
}

/// Parses the certified point and re-checks it against the system,
/// returning whether the recomputed verdict matches the recorded one.
pub fn reverify_canonical(record: &CertificateRecord, sys: &CanonicalSystem) -> Option<bool> {
    let z = parse_ints(&record.z)?;
    if z.len() != sys.dim() {
        return None;
    }
    Some(sys.is_feasible(&z) == record.verified)
}

pub fn reverify_standard(record: &CertificateRecord, sys: &StandardSystem) -> Option<bool> {
    let z = parse_ints(&record.z)?;
    if z.len() != sys.dim() {
        return None;
    }
    Some(sys.is_feasible(&z) == record.verified)
}

pub fn to_json(record: &CertificateRecord) -> String {
    serde_json::to_string_pretty(record).expect("record serializes")
}

pub fn from_json(text: &str) -> Result<CertificateRecord, serde_json::Error> {
    serde_json::from_str(text)
}

/// CSV rows `b;max_slack;feasible;witness` (fields space-separated inside),
/// then `#`-prefixed summary lines with the threshold and witnesses.
pub fn oracle_csv(report: &OracleReport) -> String {
    let mut out = String::from("b,max_slack,feasible,witness\n");
    for row in &report.rows {
        let b = row
            .b
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let witness = row
            .witness
            .as_ref()
            .map(|w| {
                w.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{}\n",
            b, row.max_slack, row.feasible, witness
        ));
    }
    let box_str = report
        .b_box
        .iter()
        .map(|(lo, hi)| format!("[{lo},{hi}]"))
        .collect::<Vec<_>>()
        .join(" x ");
    out.push_str(&format!(
        "# box = {}\n# empirical_threshold = {}\n# box-restricted lower-bound estimate, not an exact value\n",
        box_str, report.empirical_threshold
    ));
    for w in &report.witnesses {
        let b = w
            .b
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let x = w
            .slack_point
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!(
            "# witness b = [{}], slack = {}, slack_point = [{}], candidates_checked = {}\n",
            b, w.max_slack, x, w.points_checked
        ));
    }
    out
}

/// Parses a rational recorded by `to_json` (either `a` or `a/b`).
pub fn parse_rational(s: &str) -> Option<BigRational> {
    BigRational::from_str(s).ok().or_else(|| {
        BigInt::from_str(s)
            .ok()
            .map(BigRational::from_integer)
    })
}
