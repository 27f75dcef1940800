//! JSON documents for scenarios and intervention patches.
//!
//! A range is written either numerically, `{"lo": 0.2, "hi": 0.7}`, or as a
//! rating label, `{"rating": "Moderate to Considerable"}`. Serialization
//! always emits numeric endpoints with keys in sorted order, plus a
//! `label` when the range spans whole rating levels exactly; the label is
//! informational and ignored on input.
//!
//! Strict parsing (the default) rejects unknown keys; lenient parsing
//! skips them.

use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::intervention::{InterventionPatch, PatchOp};
use crate::model::{
    validate_scenario, BoundedRange, Dimension, Scenario, ThreatSpec, ValidationIssue, VulnerabilitySpec,
};
use crate::rating::{label_for_range, parse_rating_label};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    pub lenient: bool,
}

impl ParseOptions {
    pub const STRICT: ParseOptions = ParseOptions { lenient: false };
    pub const LENIENT: ParseOptions = ParseOptions { lenient: true };
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocumentError {
    #[error("document is not valid UTF-8 (byte {offset})")]
    NotUtf8 { offset: usize },
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: unknown op kind `{kind}`")]
    UnknownOp { path: String, kind: String },
    #[error("scenario failed validation: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<ValidationIssue>),
}

impl DocumentError {
    fn schema(path: &str, message: impl Into<String>) -> Self {
        DocumentError::Schema {
            path: path.to_string(),
            message: message.into(),
        }
    }

    /// JSON path of the offending element, when one is known.
    pub fn path(&self) -> Option<&str> {
        match self {
            DocumentError::Schema { path, .. } | DocumentError::UnknownOp { path, .. } => Some(path),
            _ => None,
        }
    }
}

fn read_json(bytes: &[u8]) -> Result<Value, DocumentError> {
    if let Err(e) = std::str::from_utf8(bytes) {
        return Err(DocumentError::NotUtf8 {
            offset: e.valid_up_to(),
        });
    }
    serde_json::from_slice(bytes).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Typed access to one JSON object, tracking which keys were consumed.
struct Fields<'a> {
    path: String,
    map: &'a Map<String, Value>,
    seen: Vec<&'static str>,
}

impl<'a> Fields<'a> {
    fn new(value: &'a Value, path: &str) -> Result<Self, DocumentError> {
        match value {
            Value::Object(map) => Ok(Fields {
                path: path.to_string(),
                map,
                seen: Vec::new(),
            }),
            other => Err(DocumentError::schema(
                path,
                format!("expected an object, found {}", kind_of(other)),
            )),
        }
    }

    fn child(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn optional(&mut self, key: &'static str) -> Option<&'a Value> {
        self.seen.push(key);
        self.map.get(key)
    }

    fn required(&mut self, key: &'static str) -> Result<&'a Value, DocumentError> {
        let path = self.child(key);
        self.optional(key)
            .ok_or_else(|| DocumentError::schema(&path, "missing required field"))
    }

    fn string(&mut self, key: &'static str) -> Result<String, DocumentError> {
        let path = self.child(key);
        as_str(self.required(key)?, &path).map(str::to_string)
    }

    fn number(&mut self, key: &'static str) -> Result<f64, DocumentError> {
        let path = self.child(key);
        as_f64(self.required(key)?, &path)
    }

    fn array(&mut self, key: &'static str) -> Result<&'a Vec<Value>, DocumentError> {
        let path = self.child(key);
        match self.required(key)? {
            Value::Array(items) => Ok(items),
            other => Err(DocumentError::schema(
                &path,
                format!("expected an array, found {}", kind_of(other)),
            )),
        }
    }

    fn finish(self, opts: ParseOptions) -> Result<(), DocumentError> {
        if opts.lenient {
            return Ok(());
        }
        match self.map.keys().find(|k| !self.seen.contains(&k.as_str())) {
            Some(unknown) => Err(DocumentError::schema(&self.child(unknown), "unknown field")),
            None => Ok(()),
        }
    }
}

fn kind_of(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn as_str<'v>(v: &'v Value, path: &str) -> Result<&'v str, DocumentError> {
    v.as_str()
        .ok_or_else(|| DocumentError::schema(path, format!("expected a string, found {}", kind_of(v))))
}

fn as_f64(v: &Value, path: &str) -> Result<f64, DocumentError> {
    v.as_f64()
        .ok_or_else(|| DocumentError::schema(path, format!("expected a number, found {}", kind_of(v))))
}

fn range_from(value: &Value, path: &str, opts: ParseOptions) -> Result<BoundedRange, DocumentError> {
    let mut f = Fields::new(value, path)?;
    let rating = f.optional("rating");
    let lo = f.optional("lo");
    let hi = f.optional("hi");
    if let Some(label) = f.optional("label") {
        as_str(label, &f.child("label"))?;
    }
    let range = match (rating, lo, hi) {
        (Some(rating), None, None) => {
            let label_path = f.child("rating");
            parse_rating_label(as_str(rating, &label_path)?)
                .map_err(|e| DocumentError::schema(&label_path, e.to_string()))?
        }
        (None, Some(lo), Some(hi)) => BoundedRange {
            lo: as_f64(lo, &f.child("lo"))?,
            hi: as_f64(hi, &f.child("hi"))?,
        },
        (Some(_), _, _) => {
            return Err(DocumentError::schema(
                path,
                "give either `rating` or `lo`/`hi`, not both",
            ))
        }
        (None, _, _) => return Err(DocumentError::schema(path, "range needs `lo` and `hi`, or `rating`")),
    };
    f.finish(opts)?;
    Ok(range)
}

fn vulnerability_from(value: &Value, path: &str, opts: ParseOptions) -> Result<VulnerabilitySpec, DocumentError> {
    let mut f = Fields::new(value, path)?;
    let name = f.string("name")?;
    let probability = range_from(f.required("probability")?, &f.child("probability"), opts)?;
    let operational_impact = range_from(f.required("operational_impact")?, &f.child("operational_impact"), opts)?;
    let infrastructural_impact = range_from(
        f.required("infrastructural_impact")?,
        &f.child("infrastructural_impact"),
        opts,
    )?;
    f.finish(opts)?;
    Ok(VulnerabilitySpec {
        name,
        probability,
        operational_impact,
        infrastructural_impact,
    })
}

fn threat_from(value: &Value, path: &str, opts: ParseOptions) -> Result<ThreatSpec, DocumentError> {
    let mut f = Fields::new(value, path)?;
    let name = f.string("name")?;
    let probability = range_from(f.required("probability")?, &f.child("probability"), opts)?;
    let importance = f.number("importance")?;
    let vpath = f.child("vulnerabilities");
    let vulnerabilities = f
        .array("vulnerabilities")?
        .iter()
        .enumerate()
        .map(|(i, v)| vulnerability_from(v, &format!("{vpath}[{i}]"), opts))
        .collect::<Result<_, _>>()?;
    f.finish(opts)?;
    Ok(ThreatSpec {
        name,
        probability,
        importance,
        vulnerabilities,
    })
}

/// Builds a scenario from an already-parsed JSON value and validates it.
pub fn scenario_from_value(value: &Value, opts: ParseOptions) -> Result<Scenario, DocumentError> {
    let mut f = Fields::new(value, "")?;
    let name = f.string("name")?;
    let description = f.string("description")?;
    let threats = f
        .array("threats")?
        .iter()
        .enumerate()
        .map(|(i, t)| threat_from(t, &format!("threats[{i}]"), opts))
        .collect::<Result<_, _>>()?;
    f.finish(opts)?;

    let scenario = Scenario {
        name,
        description,
        threats,
    };
    let issues = validate_scenario(&scenario);
    if issues.is_empty() {
        Ok(scenario)
    } else {
        Err(DocumentError::Invalid(issues))
    }
}

pub fn parse_scenario_with(bytes: &[u8], opts: ParseOptions) -> Result<Scenario, DocumentError> {
    scenario_from_value(&read_json(bytes)?, opts)
}

/// Strict parse of a scenario document.
pub fn parse_scenario(bytes: &[u8]) -> Result<Scenario, DocumentError> {
    parse_scenario_with(bytes, ParseOptions::STRICT)
}

// Output structs declare fields in alphabetical order; serde emits them in
// declaration order, which makes the output key-sorted.

#[derive(Serialize)]
struct RangeOut {
    hi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    lo: f64,
}

impl From<&BoundedRange> for RangeOut {
    fn from(r: &BoundedRange) -> Self {
        RangeOut {
            hi: r.hi,
            label: label_for_range(r),
            lo: r.lo,
        }
    }
}

#[derive(Serialize)]
struct VulnerabilityOut {
    infrastructural_impact: RangeOut,
    name: String,
    operational_impact: RangeOut,
    probability: RangeOut,
}

impl From<&VulnerabilitySpec> for VulnerabilityOut {
    fn from(v: &VulnerabilitySpec) -> Self {
        VulnerabilityOut {
            infrastructural_impact: (&v.infrastructural_impact).into(),
            name: v.name.clone(),
            operational_impact: (&v.operational_impact).into(),
            probability: (&v.probability).into(),
        }
    }
}

#[derive(Serialize)]
struct ThreatOut {
    importance: f64,
    name: String,
    probability: RangeOut,
    vulnerabilities: Vec<VulnerabilityOut>,
}

#[derive(Serialize)]
struct ScenarioOut {
    description: String,
    name: String,
    threats: Vec<ThreatOut>,
}

fn to_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("document structs always serialize");
    out.push(b'\n');
    out
}

/// Canonical pretty-printed JSON; equal scenarios give identical bytes.
pub fn serialize_scenario(s: &Scenario) -> Vec<u8> {
    let doc = ScenarioOut {
        description: s.description.clone(),
        name: s.name.clone(),
        threats: s
            .threats
            .iter()
            .map(|t| ThreatOut {
                importance: t.importance,
                name: t.name.clone(),
                probability: (&t.probability).into(),
                vulnerabilities: t.vulnerabilities.iter().map(Into::into).collect(),
            })
            .collect(),
    };
    to_bytes(&doc)
}

fn dimension_from(f: &mut Fields<'_>) -> Result<Dimension, DocumentError> {
    let path = f.child("dimension");
    let text = f.string("dimension")?;
    Dimension::parse(&text).ok_or_else(|| DocumentError::schema(&path, format!("unknown dimension `{text}`")))
}

fn op_from(value: &Value, path: &str, opts: ParseOptions) -> Result<PatchOp, DocumentError> {
    let mut f = Fields::new(value, path)?;
    let kind = f.string("op")?;
    let threat = f.string("threat")?;
    let op = match kind.as_str() {
        "set_vulnerability_probability" => PatchOp::SetVulnerabilityProbability {
            threat,
            vulnerability: f.string("vulnerability")?,
            range: range_from(f.required("range")?, &f.child("range"), opts)?,
        },
        "set_impact" => PatchOp::SetImpact {
            threat,
            vulnerability: f.string("vulnerability")?,
            dimension: dimension_from(&mut f)?,
            range: range_from(f.required("range")?, &f.child("range"), opts)?,
        },
        "cap_vulnerability_probability" => PatchOp::CapVulnerabilityProbability {
            threat,
            vulnerability: f.string("vulnerability")?,
            max_hi: f.number("max_hi")?,
        },
        "cap_impact" => PatchOp::CapImpact {
            threat,
            vulnerability: f.string("vulnerability")?,
            dimension: dimension_from(&mut f)?,
            max_hi: f.number("max_hi")?,
        },
        "add_vulnerability" => PatchOp::AddVulnerability {
            threat,
            vulnerability: vulnerability_from(f.required("vulnerability")?, &f.child("vulnerability"), opts)?,
        },
        "remove_vulnerability" => PatchOp::RemoveVulnerability {
            threat,
            vulnerability: f.string("vulnerability")?,
        },
        "set_importance" => PatchOp::SetImportance {
            threat,
            importance: f.number("importance")?,
        },
        _ => {
            return Err(DocumentError::UnknownOp {
                path: f.child("op"),
                kind,
            })
        }
    };
    f.finish(opts)?;
    Ok(op)
}

fn check_op(op: &PatchOp, path: &str) -> Result<(), DocumentError> {
    let bad_range = |r: &BoundedRange, field: &str| {
        (!r.is_valid()).then(|| {
            DocumentError::schema(
                &format!("{path}.{field}"),
                format!("range {r} must satisfy 0 <= lo <= hi <= 1"),
            )
        })
    };
    let bad_unit = |x: f64, field: &str| {
        (!(0.0..=1.0).contains(&x))
            .then(|| DocumentError::schema(&format!("{path}.{field}"), format!("{x} must lie in [0, 1]")))
    };
    let problem = match op {
        PatchOp::SetVulnerabilityProbability { range, .. } | PatchOp::SetImpact { range, .. } => {
            bad_range(range, "range")
        }
        PatchOp::CapVulnerabilityProbability { max_hi, .. } | PatchOp::CapImpact { max_hi, .. } => {
            bad_unit(*max_hi, "max_hi")
        }
        PatchOp::SetImportance { importance, .. } => bad_unit(*importance, "importance"),
        PatchOp::AddVulnerability { vulnerability: v, .. } => bad_range(&v.probability, "vulnerability.probability")
            .or_else(|| bad_range(&v.operational_impact, "vulnerability.operational_impact"))
            .or_else(|| bad_range(&v.infrastructural_impact, "vulnerability.infrastructural_impact")),
        PatchOp::RemoveVulnerability { .. } => None,
    };
    problem.map_or(Ok(()), Err)
}

/// Builds a patch from an already-parsed JSON value. References to threats
/// and vulnerabilities are checked later, against a concrete scenario.
pub fn patch_from_value(value: &Value, opts: ParseOptions) -> Result<InterventionPatch, DocumentError> {
    let mut f = Fields::new(value, "")?;
    let name = f.string("name")?;
    if name.trim().is_empty() {
        return Err(DocumentError::schema("name", "patch name is empty"));
    }
    let description = f.string("description")?;
    let ops = f
        .array("ops")?
        .iter()
        .enumerate()
        .map(|(i, op)| {
            let path = format!("ops[{i}]");
            let op = op_from(op, &path, opts)?;
            check_op(&op, &path)?;
            Ok(op)
        })
        .collect::<Result<_, DocumentError>>()?;
    f.finish(opts)?;
    Ok(InterventionPatch { name, description, ops })
}

pub fn parse_patch_with(bytes: &[u8], opts: ParseOptions) -> Result<InterventionPatch, DocumentError> {
    patch_from_value(&read_json(bytes)?, opts)
}

/// Strict parse of a patch document.
pub fn parse_patch(bytes: &[u8]) -> Result<InterventionPatch, DocumentError> {
    parse_patch_with(bytes, ParseOptions::STRICT)
}

#[derive(Serialize)]
struct OpOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    dimension: Option<Dimension>,
    #[serde(skip_serializing_if = "Option::is_none")]
    importance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_hi: Option<f64>,
    op: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    range: Option<RangeOut>,
    threat: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    vulnerability: Option<VulnerabilityRef>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum VulnerabilityRef {
    Name(String),
    Spec(VulnerabilityOut),
}

#[derive(Serialize)]
struct PatchOut {
    description: String,
    name: String,
    ops: Vec<OpOut>,
}

impl From<&PatchOp> for OpOut {
    fn from(op: &PatchOp) -> Self {
        let mut out = OpOut {
            dimension: None,
            importance: None,
            max_hi: None,
            op: op.kind(),
            range: None,
            threat: op.threat().to_string(),
            vulnerability: None,
        };
        let name = |v: &String| Some(VulnerabilityRef::Name(v.clone()));
        match op {
            PatchOp::SetVulnerabilityProbability {
                vulnerability, range, ..
            } => {
                out.vulnerability = name(vulnerability);
                out.range = Some(range.into());
            }
            PatchOp::SetImpact {
                vulnerability,
                dimension,
                range,
                ..
            } => {
                out.vulnerability = name(vulnerability);
                out.dimension = Some(*dimension);
                out.range = Some(range.into());
            }
            PatchOp::CapVulnerabilityProbability {
                vulnerability, max_hi, ..
            } => {
                out.vulnerability = name(vulnerability);
                out.max_hi = Some(*max_hi);
            }
            PatchOp::CapImpact {
                vulnerability,
                dimension,
                max_hi,
                ..
            } => {
                out.vulnerability = name(vulnerability);
                out.dimension = Some(*dimension);
                out.max_hi = Some(*max_hi);
            }
            PatchOp::AddVulnerability { vulnerability, .. } => {
                out.vulnerability = Some(VulnerabilityRef::Spec(vulnerability.into()));
            }
            PatchOp::RemoveVulnerability { vulnerability, .. } => out.vulnerability = name(vulnerability),
            PatchOp::SetImportance { importance, .. } => out.importance = Some(*importance),
        }
        out
    }
}

pub fn serialize_patch(p: &InterventionPatch) -> Vec<u8> {
    to_bytes(&PatchOut {
        description: p.description.clone(),
        name: p.name.clone(),
        ops: p.ops.iter().map(Into::into).collect(),
    })
}
