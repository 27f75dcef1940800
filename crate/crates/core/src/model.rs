//! Threat / vulnerability / impact register.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A closed sub-interval `[lo, hi]` of `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundedRange {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid range [{lo}, {hi}]: need 0 <= lo <= hi <= 1")]
pub struct RangeError {
    pub lo: f64,
    pub hi: f64,
}

impl BoundedRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self, RangeError> {
        let range = BoundedRange { lo, hi };
        if range.is_valid() {
            Ok(range)
        } else {
            Err(RangeError { lo, hi })
        }
    }

    pub const fn point(x: f64) -> Self {
        BoundedRange { lo: x, hi: x }
    }

    /// False for NaN endpoints.
    pub fn is_valid(&self) -> bool {
        0.0 <= self.lo && self.lo <= self.hi && self.hi <= 1.0
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }
}

impl fmt::Display for BoundedRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Operational,
    Infrastructural,
}

impl Dimension {
    pub const BOTH: [Dimension; 2] = [Dimension::Operational, Dimension::Infrastructural];

    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::Operational => "operational",
            Dimension::Infrastructural => "infrastructural",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "operational" | "op" => Some(Dimension::Operational),
            "infrastructural" | "infra" => Some(Dimension::Infrastructural),
            _ => None,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VulnerabilitySpec {
    pub name: String,
    /// Probability of being exploited given that the threat occurs.
    pub probability: BoundedRange,
    /// Fraction of critical load not served.
    pub operational_impact: BoundedRange,
    /// Restoration cost relative to the embedded cost of the system.
    pub infrastructural_impact: BoundedRange,
}

impl VulnerabilitySpec {
    pub fn impact(&self, dimension: Dimension) -> &BoundedRange {
        match dimension {
            Dimension::Operational => &self.operational_impact,
            Dimension::Infrastructural => &self.infrastructural_impact,
        }
    }

    pub fn impact_mut(&mut self, dimension: Dimension) -> &mut BoundedRange {
        match dimension {
            Dimension::Operational => &mut self.operational_impact,
            Dimension::Infrastructural => &mut self.infrastructural_impact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreatSpec {
    pub name: String,
    /// Annual probability of occurrence at any severity.
    pub probability: BoundedRange,
    /// Fixed weight in `[0, 1]`; never sampled.
    pub importance: f64,
    pub vulnerabilities: Vec<VulnerabilitySpec>,
}

impl ThreatSpec {
    pub fn vulnerability(&self, name: &str) -> Option<&VulnerabilitySpec> {
        self.vulnerabilities.iter().find(|v| v.name == name)
    }

    pub fn vulnerability_mut(&mut self, name: &str) -> Option<&mut VulnerabilitySpec> {
        self.vulnerabilities.iter_mut().find(|v| v.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub threats: Vec<ThreatSpec>,
}

impl Scenario {
    pub fn threat(&self, name: &str) -> Option<&ThreatSpec> {
        self.threats.iter().find(|t| t.name == name)
    }

    pub fn threat_mut(&mut self, name: &str) -> Option<&mut ThreatSpec> {
        self.threats.iter_mut().find(|t| t.name == name)
    }

    pub fn pair_count(&self) -> usize {
        self.threats.iter().map(|t| t.vulnerabilities.len()).sum()
    }
}

/// One violated invariant. `path` reads `threat/vulnerability/field`, with
/// the leading components omitted where they do not apply.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationIssue {
    pub path: String,
    pub message: String,
}

impl ValidationIssue {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ValidationIssue {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn check_range(issues: &mut Vec<ValidationIssue>, path: String, range: &BoundedRange) {
    if !range.is_valid() {
        issues.push(ValidationIssue::new(
            path,
            format!("range {range} must satisfy 0 <= lo <= hi <= 1"),
        ));
    }
}

/// Checks every register invariant. An empty result means the scenario is valid.
pub fn validate_scenario(s: &Scenario) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    if s.threats.is_empty() {
        issues.push(ValidationIssue::new(
            "threats",
            "scenario must list at least one threat",
        ));
    }

    let mut seen_threats = HashSet::new();
    for threat in &s.threats {
        let tp = &threat.name;
        if threat.name.trim().is_empty() {
            issues.push(ValidationIssue::new(format!("{tp}/name"), "threat name is empty"));
        }
        if !seen_threats.insert(threat.name.as_str()) {
            issues.push(ValidationIssue::new(
                format!("{tp}/name"),
                format!("duplicate threat name `{tp}`"),
            ));
        }
        check_range(&mut issues, format!("{tp}/probability"), &threat.probability);
        if !(0.0..=1.0).contains(&threat.importance) {
            issues.push(ValidationIssue::new(
                format!("{tp}/importance"),
                format!("importance {} must lie in [0, 1]", threat.importance),
            ));
        }
        if threat.vulnerabilities.is_empty() {
            issues.push(ValidationIssue::new(
                format!("{tp}/vulnerabilities"),
                "threat must list at least one vulnerability",
            ));
        }

        let mut seen_vulns = HashSet::new();
        for vuln in &threat.vulnerabilities {
            let vp = format!("{tp}/{}", vuln.name);
            if vuln.name.trim().is_empty() {
                issues.push(ValidationIssue::new(
                    format!("{vp}/name"),
                    "vulnerability name is empty",
                ));
            }
            if !seen_vulns.insert(vuln.name.as_str()) {
                issues.push(ValidationIssue::new(
                    format!("{vp}/name"),
                    format!("duplicate vulnerability name `{}` under `{tp}`", vuln.name),
                ));
            }
            check_range(&mut issues, format!("{vp}/probability"), &vuln.probability);
            check_range(
                &mut issues,
                format!("{vp}/operational_impact"),
                &vuln.operational_impact,
            );
            check_range(
                &mut issues,
                format!("{vp}/infrastructural_impact"),
                &vuln.infrastructural_impact,
            );
        }
    }
    issues
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::builtin_new_england;

    fn tiny() -> Scenario {
        Scenario {
            name: "tiny".into(),
            description: String::new(),
            threats: vec![ThreatSpec {
                name: "storm".into(),
                probability: BoundedRange::new(0.1, 0.2).unwrap(),
                importance: 1.0,
                vulnerabilities: vec![VulnerabilitySpec {
                    name: "lines".into(),
                    probability: BoundedRange::new(0.5, 0.6).unwrap(),
                    operational_impact: BoundedRange::new(0.0, 0.5).unwrap(),
                    infrastructural_impact: BoundedRange::new(0.0, 0.2).unwrap(),
                }],
            }],
        }
    }

    #[test]
    fn range_constructor() {
        assert!(BoundedRange::new(0.0, 1.0).is_ok());
        assert!(BoundedRange::new(0.3, 0.3).is_ok());
        assert!(BoundedRange::new(0.4, 0.3).is_err());
        assert!(BoundedRange::new(-0.1, 0.3).is_err());
        assert!(BoundedRange::new(0.1, 1.01).is_err());
        assert!(BoundedRange::new(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn builtin_is_valid() {
        assert!(validate_scenario(&builtin_new_england()).is_empty());
        assert!(validate_scenario(&tiny()).is_empty());
    }

    #[test]
    fn importance_out_of_range() {
        let mut s = tiny();
        s.threats[0].importance = 1.5;
        let issues = validate_scenario(&s);
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].path, "storm/importance");
    }

    #[test]
    fn duplicate_threat() {
        let mut s = tiny();
        s.threats.push(s.threats[0].clone());
        let issues = validate_scenario(&s);
        assert_eq!(issues.len(), 1);
        assert!(issues[0].message.contains("storm"), "{}", issues[0]);
    }

    #[test]
    fn duplicate_vulnerability_and_bad_ranges() {
        let mut s = tiny();
        let mut v = s.threats[0].vulnerabilities[0].clone();
        v.operational_impact = BoundedRange { lo: 0.6, hi: 0.5 };
        s.threats[0].vulnerabilities.push(v);
        let paths: Vec<_> = validate_scenario(&s).into_iter().map(|i| i.path).collect();
        assert_eq!(paths, ["storm/lines/name", "storm/lines/operational_impact"]);
    }

    #[test]
    fn empty_register() {
        let mut s = tiny();
        s.threats.clear();
        assert_eq!(validate_scenario(&s)[0].path, "threats");
        let mut s = tiny();
        s.threats[0].vulnerabilities.clear();
        assert_eq!(validate_scenario(&s)[0].path, "storm/vulnerabilities");
    }
}
