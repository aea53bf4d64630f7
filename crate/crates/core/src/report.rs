//! Verification reports: one record per (case, check), rendered as JSON or text.

use std::fmt::Write as _;

use serde::Serialize;

pub const REPORT_SCHEMA: &str = "cartan-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    DiscrepancyNoted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::DiscrepancyNoted => "discrepancy-noted",
        }
    }
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    /// printed in the source literature for the worked example
    Reference,
    /// worked out independently from the definitions
    Derived,
    /// follows immediately from a definition (zero torsion, flat space, ...)
    Elementary,
}

/// Largest absolute value over the sample points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub name: String,
    pub max_abs: f64,
}

/// A computed quantity in both frame and coordinate form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Artifact {
    pub name: String,
    pub frame: String,
    pub coordinate: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origin: Option<Origin>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub case: String,
    pub name: String,
    pub status: Status,
    pub residuals: Vec<Residual>,
    pub artifacts: Vec<Artifact>,
    pub notes: Vec<String>,
}

impl CheckResult {
    pub fn new(case: &str, name: &str) -> CheckResult {
        CheckResult {
            case: case.to_string(),
            name: name.to_string(),
            status: Status::Pass,
            residuals: Vec::new(),
            artifacts: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn residual(&mut self, name: impl Into<String>, max_abs: f64) {
        self.residuals.push(Residual { name: name.into(), max_abs });
    }

    /// Records a residual that must stay within `tol`, failing the check otherwise.
    pub fn require(&mut self, name: impl Into<String>, max_abs: f64, tol: f64) {
        let name = name.into();
        if max_abs.is_nan() || max_abs > tol {
            self.fail(format!("{name}: {max_abs:.3e} exceeds {tol:.1e}"));
        }
        self.residual(name, max_abs);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn fail(&mut self, text: impl Into<String>) {
        self.status = Status::Fail;
        self.notes.push(text.into());
    }

    pub fn residual_named(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|r| r.name == name).map(|r| r.max_abs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub scenario: String,
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(scenario: &str, samples: usize, tol: f64, seed: u64, mut checks: Vec<CheckResult>) -> Report {
        checks.sort_by(|a, b| (&a.case, &a.name).cmp(&(&b.case, &b.name)));
        Report { schema: REPORT_SCHEMA, scenario: scenario.to_string(), samples, tol, seed, checks }
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn find(&self, case: &str, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.case == case && c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ =
            writeln!(out, "scenario {}  samples={} tol={:e} seed={}", self.scenario, self.samples, self.tol, self.seed);
        for c in &self.checks {
            let _ = writeln!(out, "\n[{}] {} / {}", c.status.as_str(), c.case, c.name);
            for r in &c.residuals {
                let _ = writeln!(out, "    {:<40} {:.3e}", r.name, r.max_abs);
            }
            for a in &c.artifacts {
                let width = a.name.chars().count();
                let mark = match a.matches {
                    Some(true) => " ok",
                    Some(false) => " MISMATCH",
                    None => "",
                };
                let _ = writeln!(out, "    {} = {}{}", a.name, a.frame, mark);
                let _ = writeln!(out, "    {:width$}   {}", "", a.coordinate);
                if let Some(exp) = &a.expected {
                    let origin = a.origin.map(|o| format!(" ({o:?})").to_lowercase()).unwrap_or_default();
                    let _ = writeln!(out, "    {:width$}   expected {}{}", "", exp, origin);
                }
            }
            for n in &c.notes {
                let _ = writeln!(out, "    note: {n}");
            }
        }
        let (pass, fail, noted) = self.checks.iter().fold((0, 0, 0), |(p, f, d), c| match c.status {
            Status::Pass => (p + 1, f, d),
            Status::Fail => (p, f + 1, d),
            Status::DiscrepancyNoted => (p, f, d + 1),
        });
        let _ = writeln!(out, "\n{pass} pass, {fail} fail, {noted} discrepancy-noted");
        out
    }
}
