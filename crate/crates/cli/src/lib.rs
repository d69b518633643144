//! Config-driven verification harness.
//!
//! A run validates its [`RunConfig`](config::RunConfig), builds the model and
//! its certified Green's operators once, runs the selected suites concurrently
//! and merges their checks into a [`Report`](report::Report) in fixed order.

pub mod cache;
pub mod cohomology;
pub mod config;
pub mod dump;
pub mod report;
pub mod suites;

use config::Validated;
use ghc_rma::GreenHomotopy;
use report::Report;
use std::path::Path;
use std::time::Instant;

/// Builds the Green's homotopy, seeding its column cache from `cache_dir`.
pub fn homotopy(v: &Validated, cache_dir: Option<&Path>) -> Option<GreenHomotopy> {
    let h = GreenHomotopy::new(&v.model).ok()?;
    if let Some(dir) = cache_dir {
        cache::load(dir, &cache::model_key(&v.model), h.ops());
    }
    Some(h)
}

/// Runs the suites of a validated config; writes the column cache back when configured.
pub fn verify(v: &Validated) -> Report {
    let t0 = Instant::now();
    let dir = v.config.cache_dir.as_deref();
    let h = homotopy(v, dir);
    let suites = suites::run_suites(v, h.as_ref());
    if let (Some(dir), Some(h)) = (dir, &h) {
        if let Err(e) = cache::store(dir, &cache::model_key(&v.model), h.ops()) {
            eprintln!("warning: cache not written to {}: {e}", dir.display());
        }
    }
    Report::new(v.config.clone(), suites, t0.elapsed().as_millis() as u64)
}
