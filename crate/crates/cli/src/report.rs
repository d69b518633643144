//! Versioned JSON report.

use crate::config::RunConfig;
use crate::suites::{Status, SuiteReport};
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Environment {
    pub tool: &'static str,
    pub version: &'static str,
    pub os: &'static str,
    pub arch: &'static str,
}

impl Environment {
    pub fn current() -> Self {
        Environment { tool: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION"), os: std::env::consts::OS, arch: std::env::consts::ARCH }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped_suites: Vec<&'static str>,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub environment: Environment,
    pub config: RunConfig,
    pub suites: Vec<SuiteReport>,
    pub summary: Summary,
    pub wall_ms: u64,
}

impl Report {
    pub fn new(config: RunConfig, suites: Vec<SuiteReport>, wall_ms: u64) -> Self {
        let checks = suites.iter().map(|s| s.checks.len()).sum();
        let passed = suites.iter().flat_map(|s| &s.checks).filter(|c| c.passed).count();
        let skipped_suites = suites.iter().filter(|s| s.status == Status::Skipped).map(|s| s.name).collect();
        let status = if suites.iter().any(|s| s.status == Status::Fail) { Status::Fail } else { Status::Pass };
        let summary = Summary { checks, passed, failed: checks - passed, skipped_suites, status };
        Report { schema_version: SCHEMA_VERSION, environment: Environment::current(), config, suites, summary, wall_ms }
    }

    pub fn passed(&self) -> bool {
        self.summary.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

/// Drops every `wall_ms` field, recursively; what remains is deterministic.
pub fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("wall_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn strip_timing_is_recursive() {
        let mut v = json!({ "wall_ms": 3, "suites": [{ "wall_ms": 1, "checks": [{ "name": "a", "wall_ms": 2 }] }] });
        strip_timing(&mut v);
        assert_eq!(v, json!({ "suites": [{ "checks": [{ "name": "a" }] }] }));
    }

    #[test]
    fn summary_counts_failures_and_skips() {
        use ghc_homalg::CheckResult;
        let suites = vec![
            SuiteReport { name: "a", status: Status::Pass, reason: None, checks: vec![CheckResult::pass("x", "x")], wall_ms: 0 },
            SuiteReport { name: "b", status: Status::Skipped, reason: Some("r".into()), checks: vec![], wall_ms: 0 },
        ];
        let r = Report::new(RunConfig::default_config(), suites, 0);
        assert!(r.passed());
        assert_eq!((r.summary.checks, r.summary.failed, r.summary.skipped_suites.clone()), (1, 0, vec!["b"]));
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema_version"], 1);
    }
}
