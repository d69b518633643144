use clap::{Parser, Subcommand, ValueEnum};
use ghc_cli::config::{ConfigError, RunConfig, Suite, Validated};
use ghc_cli::dump::{green_dump, source_vector, Source};
use ghc_green::Direction;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ghc", version, about = "Exact verification of Green's homotopies on causal lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// TOML run configuration; the built-in Klein-Gordon default when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config cache directory.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Retarded,
    Advanced,
}

#[derive(Subcommand)]
enum Command {
    /// Run the selected suites and write a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite to run; repeatable, replaces the config selection.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Report path; stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Apply G+ or G- to a point source and write the result as CSV.
    GreenDump {
        #[command(flatten)]
        common: Common,
        /// "zero" or a site "t,x[,y]".
        #[arg(long)]
        source: String,
        #[arg(long, value_enum)]
        variant: Variant,
        /// Field degree of the source; the highest degree when omitted.
        #[arg(long)]
        degree: Option<i64>,
        #[arg(long, default_value_t = 0)]
        fiber: usize,
        /// CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cohomology dimensions of causal windows, cone(L) and the full slab.
    Cohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List the shipped models.
    ListModels,
}

enum Failure {
    Config(String),
    Checks,
    Io(String),
}

fn load(common: &Common, suites: &[String]) -> Result<Validated, Failure> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default_config()),
    }
    .map_err(|e| Failure::Config(e.to_string()))?;
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(c) = &common.cache {
        cfg.cache_dir = Some(c.clone());
    }
    if !suites.is_empty() {
        cfg.suites = suites.iter().map(|s| Suite::parse(s)).collect::<Result<_, ConfigError>>().map_err(|e| Failure::Config(e.to_string()))?;
    }
    cfg.validate().map_err(|e| Failure::Config(e.to_string()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Verify { common, suites, report } => {
            let v = load(&common, &suites)?;
            let r = ghc_cli::verify(&v);
            write_out(report.as_deref(), &r.to_json())?;
            eprintln!("{} checks, {} failed, suites skipped: {:?}", r.summary.checks, r.summary.failed, r.summary.skipped_suites);
            if r.passed() {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
        Command::GreenDump { common, source, variant, degree, fiber, out } => {
            let v = load(&common, &[])?;
            let h = ghc_cli::homotopy(&v, v.config.cache_dir.as_deref()).ok_or_else(|| Failure::Config("the model has no certified Green's operators".into()))?;
            let f = h.fields();
            let degree = degree.unwrap_or(f.degrees().end - 1);
            let src: Source = source.parse().map_err(|e: ghc_cli::dump::DumpError| Failure::Config(e.to_string()))?;
            let phi = source_vector(f, &src, degree, fiber).map_err(|e| Failure::Config(e.to_string()))?;
            let dir = match variant {
                Variant::Retarded => Direction::Retarded,
                Variant::Advanced => Direction::Advanced,
            };
            let mut buf = Vec::new();
            green_dump(h.ops(), dir, degree, &phi, &mut buf).map_err(|e| Failure::Config(e.to_string()))?;
            write_out(out.as_deref(), &String::from_utf8(buf).expect("CSV is UTF-8"))
        }
        Command::Cohomology { common, report } => {
            let v = load(&common, &[])?;
            let h = ghc_cli::homotopy(&v, v.config.cache_dir.as_deref()).ok_or_else(|| Failure::Config("the model has no certified Green's operators".into()))?;
            let r = ghc_cli::cohomology::cohomology_report(&v, &h).map_err(Failure::Io)?;
            write_out(report.as_deref(), &(serde_json::to_string_pretty(&r).expect("serializes") + "\n"))?;
            if r.acyclic {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
        Command::ListModels => {
            for (kind, note) in [
                ("klein_gordon", "m = 2 or 3; mass a non-negative rational; fields in degrees 0, 1"),
                ("de_rham", "m = 2 or 3; all form degrees"),
                ("chern_simons", "m = 3; de Rham shifted by one; no pairing"),
                ("maxwell_p", "p = 1, m = 2; ghosts, fields, antifields, antighosts"),
            ] {
                println!("{kind:14} {note}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
