//! Machine-readable check reports shared by every verification entry point.

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "g2kit/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Identity or axiom this check encodes, written as a formula.
    pub anchor: String,
    pub status: Status,
    /// Largest observed deviation for numeric checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default)]
    pub details: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub subject: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report { schema: SCHEMA.to_string(), subject: subject.into(), notes: Vec::new(), checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Exact check: passes iff `ok`.
    pub fn exact(&mut self, name: &str, anchor: &str, ok: bool, details: impl Into<String>) {
        self.push(Check {
            name: name.to_string(),
            anchor: anchor.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: None,
            details: details.into(),
        });
    }

    /// Numeric check: passes iff `residual <= tol` (NaN fails).
    pub fn numeric(&mut self, name: &str, anchor: &str, residual: f64, tol: f64, details: impl Into<String>) {
        let ok = residual <= tol;
        self.push(Check {
            name: name.to_string(),
            anchor: anchor.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: Some(residual),
            details: details.into(),
        });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().filter_map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} [{}]\n", self.subject, if self.passed() { "PASS" } else { "FAIL" });
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        for c in &self.checks {
            let tag = if c.passed() { "ok  " } else { "FAIL" };
            let res = c.residual.map(|r| format!(" residual={r:.3e}")).unwrap_or_default();
            out.push_str(&format!("  {tag} {}{}  ({})\n", c.name, res, c.anchor));
            if !c.details.is_empty() && !c.passed() {
                out.push_str(&format!("       {}\n", c.details));
            }
        }
        out
    }
}

/// Running maximum helper for sampled numeric checks.
#[derive(Debug, Clone, Copy, Default)]
pub struct MaxResidual(pub f64);

impl MaxResidual {
    pub fn see(&mut self, r: f64) {
        if !r.is_finite() || r > self.0 {
            self.0 = if r.is_finite() { r } else { f64::MAX };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjunction_and_roundtrip() {
        let mut r = Report::new("demo");
        r.exact("a", "x = x", true, "");
        r.numeric("b", "y ~ y", 1e-3, 1e-9, "too big");
        assert!(!r.passed());
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
