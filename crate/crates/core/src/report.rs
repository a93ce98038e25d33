//! Pass/fail records for verification runs, serialized as versioned JSON.

use serde::Serialize;

use crate::error::Error;
use crate::quadrature::QuadratureSpec;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Status::Pass
    }
}

/// One named property check. `worst_slack` is the smallest `rhs − lhs`
/// observed (negative means violated); `witness_t` is where it occurred.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub worst_slack: Option<f64>,
    pub witness_t: Option<f64>,
    pub detail: String,
    /// Failed only because some points could not be evaluated; nothing was violated.
    #[serde(skip)]
    pub errored: bool,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status.passed()
    }
}

/// Accumulates per-point observations into a [`Check`].
#[derive(Debug)]
pub struct CheckBuilder {
    name: String,
    worst_slack: Option<f64>,
    witness_t: Option<f64>,
    points: usize,
    violations: usize,
    errors: Vec<String>,
    notes: Vec<String>,
}

impl CheckBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        CheckBuilder {
            name: name.into(),
            worst_slack: None,
            witness_t: None,
            points: 0,
            violations: 0,
            errors: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Record a point with slack `rhs − lhs`; `ok` decides pass/fail for it.
    pub fn observe(&mut self, t: f64, slack: f64, ok: bool) {
        self.points += 1;
        if !ok {
            self.violations += 1;
        }
        if self.worst_slack.is_none_or(|w| slack < w || slack.is_nan()) {
            self.worst_slack = Some(slack);
            self.witness_t = Some(t);
        }
    }

    pub fn error(&mut self, t: f64, err: &Error) {
        self.errors.push(format!("t = {t}: {err}"));
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn violations(&self) -> usize {
        self.violations
    }

    pub fn finish(self) -> Check {
        let pass = self.violations == 0 && self.errors.is_empty() && self.points > 0;
        let mut detail = format!("{} points, {} violations", self.points, self.violations);
        if !self.errors.is_empty() {
            detail.push_str(&format!(", {} errors; first: {}", self.errors.len(), self.errors[0]));
        }
        for n in &self.notes {
            detail.push_str("; ");
            detail.push_str(n);
        }
        Check {
            name: self.name,
            status: Status::from_pass(pass),
            worst_slack: self.worst_slack.filter(|s| s.is_finite()),
            witness_t: self.witness_t,
            errored: !self.errors.is_empty() && self.violations == 0,
            detail,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Environment {
    pub tool_version: String,
    pub quadrature: QuadratureSpec,
}

impl Environment {
    pub fn new(quadrature: QuadratureSpec) -> Self {
        Environment {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            quadrature,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: String,
    pub status: Status,
    pub checks: Vec<Check>,
    pub environment: Environment,
}

impl VerificationReport {
    /// Status is pass iff every check passes (and there is at least one).
    pub fn new(suite: impl Into<String>, checks: Vec<Check>, quadrature: QuadratureSpec) -> Self {
        let pass = !checks.is_empty() && checks.iter().all(Check::passed);
        VerificationReport {
            schema: REPORT_SCHEMA,
            suite: suite.into(),
            status: Status::from_pass(pass),
            checks,
            environment: Environment::new(quadrature),
        }
    }

    pub fn passed(&self) -> bool {
        self.status.passed()
    }
}
