//! Machine-readable report envelopes.
//!
//! Exact values are written as rational strings with a 12-significant-digit decimal
//! rendering beside them; `"inf"` stands for `+∞`. Index sets are arrays of
//! 1-based constraint labels. Object keys are emitted in a fixed order, so the
//! same input and command always give the same bytes apart from `timing`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::argmin::{IndexSet, ProblemInstance};
use crate::exact::{format_vector, to_decimal, ExtRational, Rational};
use crate::instance_file::InstanceFile;
use crate::kkt::MinimalKktFamily;
use crate::moduli::{CanonicalHoffman, Certificate, ModulusReport};
use crate::segment::SegmentAnalysis;
use crate::validator::{CheckRecord, EmpiricalBound, PointwiseEstimate, RatioSample, ValidationReport};

pub const DECIMAL_DIGITS: usize = 12;
pub const TOOL_NAME: &str = "hoffman";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactValue {
    pub exact: String,
    pub decimal: String,
}

impl From<&Rational> for ExactValue {
    fn from(v: &Rational) -> Self {
        ExactValue { exact: v.to_string(), decimal: to_decimal(v, DECIMAL_DIGITS) }
    }
}

impl From<&ExtRational> for ExactValue {
    fn from(v: &ExtRational) -> Self {
        ExactValue { exact: v.to_string(), decimal: v.decimal(DECIMAL_DIGITS) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceHeader {
    /// SHA-256 of [`InstanceFile::canonical_json`], hex encoded.
    pub digest: String,
    pub n: usize,
    pub m: usize,
    pub norm: String,
    pub dual_feasible: bool,
}

impl InstanceHeader {
    pub fn of(inst: &ProblemInstance) -> Self {
        InstanceHeader {
            digest: instance_digest(inst),
            n: inst.n(),
            m: inst.m(),
            norm: inst.norm().name().into(),
            dual_feasible: inst.dual_feasible(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_micros: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Absent for commands that take no instance (`endset`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceHeader>,
    pub result: Value,
    pub timing: Timing,
}

impl ReportEnvelope {
    pub fn new(command: &str, inst: Option<&ProblemInstance>, result: Value, elapsed: std::time::Duration) -> Self {
        ReportEnvelope {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            command: command.into(),
            instance: inst.map(InstanceHeader::of),
            result,
            timing: Timing { elapsed_micros: elapsed.as_micros().try_into().unwrap_or(u64::MAX) },
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

pub fn instance_digest(inst: &ProblemInstance) -> String {
    hex::encode(Sha256::digest(InstanceFile::canonical_json(inst).as_bytes()))
}

fn value(v: &Rational) -> Value {
    json!(ExactValue::from(v))
}

fn ext_value(v: &ExtRational) -> Value {
    json!(ExactValue::from(v))
}

fn labels(s: &IndexSet) -> Value {
    json!(s.labels())
}

fn vector(v: &[Rational]) -> Value {
    json!(format_vector(v))
}

pub fn family_result(family: &MinimalKktFamily) -> Value {
    json!({ "family": family.iter().map(labels).collect::<Vec<_>>() })
}

pub fn certificate_value(c: &Certificate) -> Value {
    match c {
        Certificate::Calmness { active, minimizer } => json!({
            "active": labels(active),
            "minimizer": minimizer.as_ref().map(labels),
        }),
        Certificate::LipschitzUsc { point, active, minimizer } => json!({
            "point": vector(point),
            "active": labels(active),
            "minimizer": minimizer.as_ref().map(labels),
        }),
        Certificate::Hoffman { d, s, parameter, point } => json!({
            "D": labels(d),
            "S": labels(s),
            "b": vector(parameter),
            "x": vector(point),
        }),
    }
}

pub fn modulus_result(report: &ModulusReport) -> Value {
    json!({
        "modulus": report.kind.name(),
        "value": ext_value(&report.value),
        "certificate": certificate_value(&report.certificate),
    })
}

pub fn canonical_result(c: CanonicalHoffman) -> Value {
    json!({ "canonical_hoffman": match c {
        CanonicalHoffman::Zero => "Zero",
        CanonicalHoffman::Infinite => "Infinite",
    }})
}

pub fn segment_result(s: &SegmentAnalysis) -> Value {
    json!({
        "from": vector(&s.from),
        "to": vector(&s.to),
        "break_steps": format_vector(&s.break_steps),
        "intervals": s.intervals.iter().map(|(d, iv)| json!({
            "D": labels(d),
            "interval": iv.as_ref().map(|iv| json!([iv.lower.to_string(), iv.upper.to_string()])),
        })).collect::<Vec<_>>(),
        "pieces": s.pieces.iter().map(|p| json!({
            "start": p.start.to_string(),
            "end": p.end.to_string(),
            "family": p.family.iter().map(labels).collect::<Vec<_>>(),
            "D": labels(&p.chosen),
        })).collect::<Vec<_>>(),
    })
}

fn sample_value(s: &RatioSample) -> Value {
    json!({ "b": vector(&s.b), "b_tilde": vector(&s.b_tilde), "x": vector(&s.x), "ratio": value(&s.ratio) })
}

fn check_value(c: &CheckRecord) -> Value {
    json!({
        "name": c.name,
        "passed": c.passed,
        "observed": value(&c.observed),
        "bound": value(&c.bound),
        "evaluations": c.evaluations,
        "extremal": c.extremal.as_ref().map(sample_value),
        "detail": c.detail,
    })
}

pub fn validation_result(report: &ValidationReport, seed: u64, samples: usize) -> Value {
    json!({
        "seed": seed,
        "samples": samples,
        "hoffman": value(&report.hoffman),
        "passed": report.passed(),
        "checks": report.checks.iter().map(check_value).collect::<Vec<_>>(),
    })
}

pub fn lower_bound_result(b: &EmpiricalBound) -> Value {
    json!({
        "lower_bound": value(&b.lower_bound),
        "random_best": value(&b.random_best),
        "probe_best": value(&b.probe_best),
        "pairs_evaluated": b.pairs_evaluated,
        "extremal": b.best.as_ref().map(sample_value),
    })
}

pub fn estimate_result(e: &PointwiseEstimate, nominal: &[Rational]) -> Value {
    json!({
        "label": "ESTIMATE",
        "nominal_b": vector(nominal),
        "estimate": value(&e.estimate),
        "pairs_evaluated": e.pairs_evaluated,
        "extremal": e.best.as_ref().map(sample_value),
    })
}

pub fn endset_result(points: &[crate::exact::Vector], dual_norm: crate::geometry::Norm, distance: &ExtRational) -> Value {
    json!({
        "points": points.iter().map(|p| vector(p)).collect::<Vec<_>>(),
        "dual_norm": dual_norm.name(),
        "distance": ext_value(distance),
    })
}
