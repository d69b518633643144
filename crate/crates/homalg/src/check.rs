//! Named pass/fail outcomes shared by every verification suite.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One verified identity; `witness` pins a concrete failing entry or vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub anchor: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub wall_ms: u64,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>, anchor: impl Into<String>) -> Self {
        CheckResult { name: name.into(), anchor: anchor.into(), passed: true, witness: None, note: None, wall_ms: 0 }
    }

    pub fn fail(name: impl Into<String>, anchor: impl Into<String>, witness: Value) -> Self {
        CheckResult { name: name.into(), anchor: anchor.into(), passed: false, witness: Some(witness), note: None, wall_ms: 0 }
    }

    pub fn from_outcome(name: impl Into<String>, anchor: impl Into<String>, outcome: Result<(), Value>) -> Self {
        match outcome {
            Ok(()) => Self::pass(name, anchor),
            Err(w) => Self::fail(name, anchor, w),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn timed(mut self, started: std::time::Instant) -> Self {
        self.wall_ms = started.elapsed().as_millis() as u64;
        self
    }
}

pub fn all_passed(checks: &[CheckResult]) -> bool {
    checks.iter().all(|c| c.passed)
}
