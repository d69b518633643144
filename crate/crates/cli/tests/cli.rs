use ghc_cli::config::{RunConfig, DEFAULT_TOML};
use ghc_cli::report::strip_timing;
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn ghc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghc")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn equal_outer_slices_are_rejected_before_any_work() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &DEFAULT_TOML.replace("future = 14", "future = 8"));
    let report = dir.path().join("r.json");
    let o = ghc(&["verify", "--config", &cfg, "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("past < present < future"), "{}", stderr(&o));
    assert!(!report.exists());
}

#[test]
fn zero_margin_is_rejected_at_lattice_registration() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &DEFAULT_TOML.replace("margin = 2", "margin = 0"));
    let o = ghc(&["verify", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lattice rejected"), "{}", stderr(&o));
}

#[test]
fn tight_geometry_suggests_a_remedy() {
    let dir = tempfile::tempdir().unwrap();
    let text = DEFAULT_TOML.replace("n_time = 24", "n_time = 16").replace("past = 8", "past = 5").replace("present = 11", "present = 7").replace("future = 14", "future = 9");
    let cfg = write_config(dir.path(), &text);
    let o = ghc(&["verify", "--config", &cfg, "--suite", "poisson"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("grow n_time or margin"), "{}", stderr(&o));
}

#[test]
fn malformed_input_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "seed = \"zero\"");
    assert_eq!(ghc(&["verify", "--config", &cfg]).status.code(), Some(2));
    assert_eq!(ghc(&["verify", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(ghc(&["verify", "--config", "/nonexistent/run.toml"]).status.code(), Some(2));
}

#[test]
fn list_models_names_every_kind() {
    let o = ghc(&["list-models"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    for k in ["klein_gordon", "de_rham", "chern_simons", "maxwell_p"] {
        assert!(text.contains(k));
    }
}

fn verify_dgcat(dir: &Path, name: &str, seed: &str) -> Value {
    let report = dir.join(name);
    let o = ghc(&["verify", "--suite", "dgcat", "--seed", seed, "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap()
}

#[test]
fn reports_are_versioned_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut a = verify_dgcat(dir.path(), "a.json", "7");
    let mut b = verify_dgcat(dir.path(), "b.json", "7");
    let mut c = verify_dgcat(dir.path(), "c.json", "8");
    assert_eq!(a["schema_version"], 1);
    assert_eq!(a["config"]["seed"], 7);
    assert_eq!(a["summary"]["status"], "pass");
    let checks = a["suites"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["anchor"].as_str().is_some_and(|s| !s.is_empty())));
    for v in [&mut a, &mut b, &mut c] {
        strip_timing(v);
    }
    assert_eq!(a, b);
    assert_ne!(a, c, "the seed reaches the randomized suite");
}

#[test]
fn cache_directory_is_filled_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cfg = RunConfig::default_config();
    let text = toml::to_string(&RunConfig { suites: vec![ghc_cli::config::Suite::Witness], ..cfg }).unwrap();
    let path = write_config(dir.path(), &text);
    let run = |name: &str| {
        let report = dir.path().join(name);
        let o = ghc(&["verify", "--config", &path, "--cache", cache.to_str().unwrap(), "--report", report.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
        strip_timing(&mut v);
        v
    };
    let first = run("a.json");
    let files: Vec<_> = std::fs::read_dir(&cache).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert_eq!(files.len(), 2, "{files:?}");
    assert!(files.iter().all(|f| f.starts_with("green-") && (f.ends_with("-retarded.json") || f.ends_with("-advanced.json"))));
    assert_eq!(run("b.json"), first);
}

struct Row {
    t: i64,
    x: i64,
    value: (String, String),
}

fn dump(args: &[&str]) -> Vec<Row> {
    let o = ghc(&[&["green-dump"], args].concat());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), ["t", "x", "degree", "fiber", "numerator", "denominator"]);
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            Row { t: rec[0].parse().unwrap(), x: rec[1].parse().unwrap(), value: (rec[4].to_string(), rec[5].to_string()) }
        })
        .collect()
}

fn is_zero(r: &Row) -> bool {
    r.value.0 == "0"
}

#[test]
fn zero_source_dumps_zeros() {
    for variant in ["retarded", "advanced"] {
        let rows = dump(&["--source", "zero", "--variant", variant]);
        assert_eq!(rows.len(), 24 * 12);
        assert!(rows.iter().all(is_zero));
    }
}

/// Leapfrog propagation: the retarded response lives at later times within
/// one spatial step per time step of the source, on the periodic circle.
#[test]
fn delta_source_stays_inside_the_future_cone() {
    let (t0, x0) = (9, 4);
    let rows = dump(&["--source", &format!("{t0},{x0}"), "--variant", "retarded"]);
    let nonzero: Vec<_> = rows.iter().filter(|r| !is_zero(r)).collect();
    assert!(!nonzero.is_empty());
    for r in &nonzero {
        let dx = (r.x - x0).rem_euclid(12);
        let dist = dx.min(12 - dx);
        assert!(r.t > t0 && dist < r.t - t0, "({}, {}) outside the cone", r.t, r.x);
    }
    assert!(nonzero.iter().any(|r| r.t == 23), "the response reaches the last level");
}

/// The Klein-Gordon stencil is symmetric in time, so reflecting the source
/// and swapping retarded for advanced reflects the response.
#[test]
fn advanced_dump_is_the_time_reflection_of_the_retarded_one() {
    let (t0, x0) = (7, 3);
    let ret = dump(&["--source", &format!("{t0},{x0}"), "--variant", "retarded"]);
    let adv = dump(&["--source", &format!("{},{x0}", 23 - t0), "--variant", "advanced"]);
    let at = |rows: &[Row], t: i64, x: i64| rows.iter().find(|r| r.t == t && r.x == x).unwrap().value.clone();
    for r in &ret {
        assert_eq!(at(&adv, 23 - r.t, r.x), r.value, "({}, {})", r.t, r.x);
    }
    assert!(ret.iter().any(|r| !is_zero(r)));
}

#[test]
fn inadmissible_sources_are_rejected() {
    for args in [["--source", "0,3", "--variant", "retarded"], ["--source", "23,3", "--variant", "advanced"], ["--source", "5,12", "--variant", "retarded"]] {
        let o = ghc(&[&["green-dump"], &args[..]].concat());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn cohomology_reports_de_rham_slab_classes_without_failing() {
    let dir = tempfile::tempdir().unwrap();
    let text = DEFAULT_TOML.replace("kind = \"klein_gordon\"", "kind = \"de_rham\"").replace("mass = \"1\"\n", "").replace("[lattice]", "[sampling]\nacyclic_compacts = 3\n\n[lattice]");
    let cfg = write_config(dir.path(), &text);
    let o = ghc(&["cohomology", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["full_slab"]["0"], 1);
    assert_eq!(v["acyclic"], true);
    assert_eq!(v["compacts"].as_array().unwrap().len(), 3);
    assert!(v["cone_rma"].as_object().unwrap().values().all(|d| d == 0));
}
