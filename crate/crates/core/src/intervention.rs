//! Scenario overlays ("patches") and baseline-vs-intervention comparison.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::builtin::{
    EARTHQUAKE, FLOODING, HIGH_WIND, HURRICANE, SEVERE_THUNDERSTORM, SEVERE_WINTER_STORM, TERRORISM, TORNADO,
};
use crate::model::{validate_scenario, BoundedRange, Dimension, Scenario, ValidationIssue, VulnerabilitySpec};
use crate::rating::{rating_to_range, RatingLevel};
use crate::sim::{run_scenario, RunReport, SimConfig, SimError};

#[derive(Debug, Clone, PartialEq)]
pub enum PatchOp {
    SetVulnerabilityProbability {
        threat: String,
        vulnerability: String,
        range: BoundedRange,
    },
    SetImpact {
        threat: String,
        vulnerability: String,
        dimension: Dimension,
        range: BoundedRange,
    },
    /// `hi := min(hi, max_hi)`, then `lo := min(lo, hi)`.
    CapVulnerabilityProbability {
        threat: String,
        vulnerability: String,
        max_hi: f64,
    },
    CapImpact {
        threat: String,
        vulnerability: String,
        dimension: Dimension,
        max_hi: f64,
    },
    AddVulnerability {
        threat: String,
        vulnerability: VulnerabilitySpec,
    },
    RemoveVulnerability {
        threat: String,
        vulnerability: String,
    },
    SetImportance {
        threat: String,
        importance: f64,
    },
}

impl PatchOp {
    pub fn kind(&self) -> &'static str {
        match self {
            PatchOp::SetVulnerabilityProbability { .. } => "set_vulnerability_probability",
            PatchOp::SetImpact { .. } => "set_impact",
            PatchOp::CapVulnerabilityProbability { .. } => "cap_vulnerability_probability",
            PatchOp::CapImpact { .. } => "cap_impact",
            PatchOp::AddVulnerability { .. } => "add_vulnerability",
            PatchOp::RemoveVulnerability { .. } => "remove_vulnerability",
            PatchOp::SetImportance { .. } => "set_importance",
        }
    }

    pub fn threat(&self) -> &str {
        match self {
            PatchOp::SetVulnerabilityProbability { threat, .. }
            | PatchOp::SetImpact { threat, .. }
            | PatchOp::CapVulnerabilityProbability { threat, .. }
            | PatchOp::CapImpact { threat, .. }
            | PatchOp::AddVulnerability { threat, .. }
            | PatchOp::RemoveVulnerability { threat, .. }
            | PatchOp::SetImportance { threat, .. } => threat,
        }
    }
}

impl fmt::Display for PatchOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on `{}`", self.kind(), self.threat())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterventionPatch {
    pub name: String,
    pub description: String,
    pub ops: Vec<PatchOp>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PatchError {
    #[error("patch name is empty")]
    EmptyName,
    #[error("op {index} ({kind}): no threat named `{threat}`")]
    UnknownThreat {
        index: usize,
        kind: &'static str,
        threat: String,
    },
    #[error("op {index} ({kind}): threat `{threat}` has no vulnerability named `{vulnerability}`")]
    UnknownVulnerability {
        index: usize,
        kind: &'static str,
        threat: String,
        vulnerability: String,
    },
    #[error("op {index} ({kind}): {message}")]
    InvalidArgument {
        index: usize,
        kind: &'static str,
        message: String,
    },
    #[error("patch `{patch}` leaves an invalid scenario: {}", .issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidResult {
        patch: String,
        issues: Vec<ValidationIssue>,
    },
}

fn cap(range: &mut BoundedRange, max_hi: f64) {
    range.hi = range.hi.min(max_hi);
    range.lo = range.lo.min(range.hi);
}

fn apply_op(s: &mut Scenario, index: usize, op: &PatchOp) -> Result<(), PatchError> {
    let kind = op.kind();
    let bad = |message: String| PatchError::InvalidArgument { index, kind, message };
    match op {
        PatchOp::SetVulnerabilityProbability { range, .. } | PatchOp::SetImpact { range, .. } if !range.is_valid() => {
            return Err(bad(format!("range {range} must satisfy 0 <= lo <= hi <= 1")));
        }
        PatchOp::CapVulnerabilityProbability { max_hi, .. } | PatchOp::CapImpact { max_hi, .. }
            if !(0.0..=1.0).contains(max_hi) =>
        {
            return Err(bad(format!("max_hi {max_hi} must lie in [0, 1]")));
        }
        PatchOp::SetImportance { importance, .. } if !(0.0..=1.0).contains(importance) => {
            return Err(bad(format!("importance {importance} must lie in [0, 1]")));
        }
        _ => {}
    }

    let threat = s.threat_mut(op.threat()).ok_or_else(|| PatchError::UnknownThreat {
        index,
        kind,
        threat: op.threat().to_string(),
    })?;
    let missing = |vulnerability: &str| PatchError::UnknownVulnerability {
        index,
        kind,
        threat: op.threat().to_string(),
        vulnerability: vulnerability.to_string(),
    };

    match op {
        PatchOp::SetVulnerabilityProbability {
            vulnerability, range, ..
        } => {
            threat
                .vulnerability_mut(vulnerability)
                .ok_or_else(|| missing(vulnerability))?
                .probability = *range;
        }
        PatchOp::SetImpact {
            vulnerability,
            dimension,
            range,
            ..
        } => {
            *threat
                .vulnerability_mut(vulnerability)
                .ok_or_else(|| missing(vulnerability))?
                .impact_mut(*dimension) = *range;
        }
        PatchOp::CapVulnerabilityProbability {
            vulnerability, max_hi, ..
        } => {
            let v = threat
                .vulnerability_mut(vulnerability)
                .ok_or_else(|| missing(vulnerability))?;
            cap(&mut v.probability, *max_hi);
        }
        PatchOp::CapImpact {
            vulnerability,
            dimension,
            max_hi,
            ..
        } => {
            let v = threat
                .vulnerability_mut(vulnerability)
                .ok_or_else(|| missing(vulnerability))?;
            cap(v.impact_mut(*dimension), *max_hi);
        }
        PatchOp::AddVulnerability { vulnerability, .. } => {
            if threat.vulnerability(&vulnerability.name).is_some() {
                return Err(bad(format!(
                    "threat `{}` already has a vulnerability named `{}`",
                    threat.name, vulnerability.name
                )));
            }
            threat.vulnerabilities.push(vulnerability.clone());
        }
        PatchOp::RemoveVulnerability { vulnerability, .. } => {
            let at = threat
                .vulnerabilities
                .iter()
                .position(|v| &v.name == vulnerability)
                .ok_or_else(|| missing(vulnerability))?;
            threat.vulnerabilities.remove(at);
        }
        PatchOp::SetImportance { importance, .. } => threat.importance = *importance,
    }
    Ok(())
}

/// Applies `p` to a copy of `s`, op by op in listed order.
pub fn apply_patch(s: &Scenario, p: &InterventionPatch) -> Result<Scenario, PatchError> {
    if p.name.trim().is_empty() {
        return Err(PatchError::EmptyName);
    }
    let mut out = s.clone();
    for (index, op) in p.ops.iter().enumerate() {
        apply_op(&mut out, index, op)?;
    }
    let issues = validate_scenario(&out);
    if !issues.is_empty() {
        return Err(PatchError::InvalidResult {
            patch: p.name.clone(),
            issues,
        });
    }
    Ok(out)
}

pub const UNDERGROUND_DISTRIBUTION: &str = "underground-distribution";
pub const HARDEN_GENERATION: &str = "harden-generation";

fn negligible() -> BoundedRange {
    rating_to_range(RatingLevel::Negligible)
}

/// Moves distribution lines underground.
pub fn builtin_underground_distribution() -> InterventionPatch {
    let exposed = [
        (HURRICANE, "High Winds Damage Distribution"),
        (SEVERE_WINTER_STORM, "Snow, Ice, and Wind Damages Distribution"),
        (SEVERE_THUNDERSTORM, "High Winds and Rain Damage Distribution"),
        (HIGH_WIND, "Infrastructure Damage to Distribution"),
    ];
    let mut ops: Vec<PatchOp> = exposed
        .iter()
        .map(|(threat, vulnerability)| PatchOp::SetVulnerabilityProbability {
            threat: threat.to_string(),
            vulnerability: vulnerability.to_string(),
            range: negligible(),
        })
        .collect();
    ops.push(PatchOp::CapVulnerabilityProbability {
        threat: TERRORISM.to_string(),
        vulnerability: "Distribution Damage".to_string(),
        max_hi: rating_to_range(RatingLevel::Low).hi,
    });
    ops.push(PatchOp::AddVulnerability {
        threat: FLOODING.to_string(),
        vulnerability: VulnerabilitySpec {
            name: "Infrastructure Damage to Distribution".to_string(),
            probability: BoundedRange { lo: 0.01, hi: 0.5 },
            operational_impact: BoundedRange { lo: 0.0, hi: 0.7 },
            infrastructural_impact: BoundedRange { lo: 0.0, hi: 0.7 },
        },
    });

    InterventionPatch {
        name: UNDERGROUND_DISTRIBUTION.to_string(),
        description: "Move all distribution lines underground. Wind-driven distribution damage under \
hurricane, severe winter storm, severe thunderstorm and high wind becomes Negligible; terrorism \
distribution damage probability is capped at Low. Buried lines gain a flooding exposure whose \
parameters mirror flooding's generator and storage rows (probability 0.01-0.5, impacts 0-0.7). The \
existing earthquake distribution row is left unchanged."
            .to_string(),
        ops,
    }
}

/// Hardens generator and storage assets.
pub fn builtin_harden_generation() -> InterventionPatch {
    let immune = [
        (HURRICANE, "Heavy Rains/Storm Surge Damages Generator"),
        (HURRICANE, "Heavy Rains/Storm Surge Damages Storage"),
        (TORNADO, "Generator Damage"),
        (TORNADO, "Storage Damage"),
        (EARTHQUAKE, "Generator Damage"),
        (EARTHQUAKE, "Storage Damage"),
        (FLOODING, "Infrastructure Damage to Generator"),
        (FLOODING, "Infrastructure Damage to Storage"),
    ];
    let mut ops = Vec::new();
    for (threat, vulnerability) in immune {
        for dimension in Dimension::BOTH {
            ops.push(PatchOp::SetImpact {
                threat: threat.to_string(),
                vulnerability: vulnerability.to_string(),
                dimension,
                range: negligible(),
            });
        }
    }
    let moderate = rating_to_range(RatingLevel::Moderate).hi;
    for vulnerability in ["Generator Damage", "Storage Damage"] {
        ops.push(PatchOp::CapVulnerabilityProbability {
            threat: TERRORISM.to_string(),
            vulnerability: vulnerability.to_string(),
            max_hi: moderate,
        });
        for dimension in Dimension::BOTH {
            ops.push(PatchOp::CapImpact {
                threat: TERRORISM.to_string(),
                vulnerability: vulnerability.to_string(),
                dimension,
                max_hi: moderate,
            });
        }
    }

    InterventionPatch {
        name: HARDEN_GENERATION.to_string(),
        description: "Physically harden generator and storage assets. Their operational and \
infrastructural impacts under hurricane, tornado, earthquake and flooding become Negligible; \
terrorism probability and impacts on generator and storage are capped at Moderate."
            .to_string(),
        ops,
    }
}

pub fn builtin_patches() -> Vec<InterventionPatch> {
    vec![builtin_underground_distribution(), builtin_harden_generation()]
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompareError {
    #[error(transparent)]
    Patch(#[from] PatchError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("percent reduction is undefined for a zero baseline")]
    ZeroBaseline,
}

/// `(base - new) / base * 100`.
pub fn percent_reduction(base: f64, new: f64) -> Result<f64, CompareError> {
    if base == 0.0 {
        return Err(CompareError::ZeroBaseline);
    }
    Ok((base - new) / base * 100.0)
}

/// Improvement of a patched run over the baseline; positive is better for
/// every field. Percentages are `None` when the baseline risk is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deltas {
    pub op_risk_abs: f64,
    pub op_risk_pct: Option<f64>,
    pub infra_risk_abs: f64,
    pub infra_risk_pct: Option<f64>,
    pub resilience_abs: f64,
}

impl Deltas {
    pub fn between(baseline: &RunReport, patched: &RunReport) -> Self {
        let (op0, op1) = (baseline.operational.mean, patched.operational.mean);
        let (in0, in1) = (baseline.infrastructural.mean, patched.infrastructural.mean);
        Deltas {
            op_risk_abs: op0 - op1,
            op_risk_pct: percent_reduction(op0, op1).ok(),
            infra_risk_abs: in0 - in1,
            infra_risk_pct: percent_reduction(in0, in1).ok(),
            resilience_abs: patched.resilience.mean - baseline.resilience.mean,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchOutcome {
    pub name: String,
    pub description: String,
    pub report: RunReport,
    pub deltas: Deltas,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub baseline: RunReport,
    pub patches: Vec<PatchOutcome>,
    /// Patch names by resilience mean, best first; ties keep list order.
    pub ranking: Vec<String>,
}

/// Simulates the baseline and every patched scenario with the same config
/// and seed.
pub fn compare(s: &Scenario, patches: &[InterventionPatch], cfg: &SimConfig) -> Result<ComparisonReport, CompareError> {
    let patched: Vec<Scenario> = patches.iter().map(|p| apply_patch(s, p)).collect::<Result<_, _>>()?;
    let baseline = run_scenario(s, cfg)?;

    let mut outcomes = Vec::with_capacity(patches.len());
    for (patch, scenario) in patches.iter().zip(&patched) {
        let report = run_scenario(scenario, cfg)?;
        outcomes.push(PatchOutcome {
            name: patch.name.clone(),
            description: patch.description.clone(),
            deltas: Deltas::between(&baseline, &report),
            report,
        });
    }

    let mut order: Vec<usize> = (0..outcomes.len()).collect();
    order.sort_by(|&a, &b| {
        outcomes[b]
            .report
            .resilience
            .mean
            .total_cmp(&outcomes[a].report.resilience.mean)
    });
    let ranking = order.into_iter().map(|i| outcomes[i].name.clone()).collect();

    Ok(ComparisonReport {
        baseline,
        patches: outcomes,
        ranking,
    })
}
