//! Run configuration, read from TOML.
//!
//! ```toml
//! seed = 0
//! suites = ["witness", "green", "rma", "poisson", "dgcat", "models"]
//! cache_dir = ".ghc-cache"          # optional
//!
//! [model]
//! kind = "klein_gordon"             # klein_gordon | de_rham | chern_simons | maxwell_p
//! mass = "1"                        # klein_gordon only; a rational such as "1/3"
//! p = 1                             # maxwell_p only
//! m = 2                             # spacetime dimension
//!
//! [lattice]
//! n_time = 24
//! spatial = [12]
//! margin = 2
//!
//! [slices]
//! past = 8
//! present = 11
//! future = 14
//!
//! [sampling]                        # optional; omitted keys take these defaults
//! witness = "basis"                 # "basis" or a count of random test sections
//! adjoint = 8
//! acyclic_compacts = 10
//! acyclic_samples = "basis"
//! certificate_samples = "basis"
//! pairing_samples = 6
//! ev_samples = 50
//! dgcat_cases = 20
//! ```

use ghc_green::Sampling;
use ghc_homalg::Scalar;
use ghc_lattice::CausalLattice;
use ghc_models::{Model, ModelKind, ModelSpec};
use ghc_rma::CertificateGeometry;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config does not match the schema: {0}")]
    Schema(String),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("geometry too tight: {0}; grow n_time or margin, or move the slices inward")]
    Geometry(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Witness,
    Green,
    Rma,
    Poisson,
    Dgcat,
    Models,
}

impl Suite {
    /// Report order.
    pub const ALL: [Suite; 6] = [Suite::Witness, Suite::Green, Suite::Rma, Suite::Poisson, Suite::Dgcat, Suite::Models];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Witness => "witness",
            Suite::Green => "green",
            Suite::Rma => "rma",
            Suite::Poisson => "poisson",
            Suite::Dgcat => "dgcat",
            Suite::Models => "models",
        }
    }

    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| ConfigError::Invalid(format!("unknown suite {s:?}")))
    }

    fn needs_slices(self) -> bool {
        matches!(self, Suite::Rma | Suite::Poisson)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rational {
    Int(i64),
    Text(String),
}

impl Rational {
    fn parse(&self) -> Result<Scalar, ConfigError> {
        match self {
            Rational::Int(n) => Ok(Scalar::from_int(*n)),
            Rational::Text(s) => s.trim().parse().map_err(|_| ConfigError::Invalid(format!("{s:?} is not a rational number"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub n_time: usize,
    pub spatial: Vec<usize>,
    pub margin: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceSection {
    pub past: i64,
    pub present: i64,
    pub future: i64,
}

/// `"basis"` or a number of random test sections.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SampleCount {
    Count(usize),
    Basis(String),
}

impl SampleCount {
    fn basis() -> Self {
        SampleCount::Basis("basis".into())
    }

    fn validate(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        match self {
            SampleCount::Count(0) => Err(ConfigError::Invalid(format!("sampling.{key} must be positive"))),
            SampleCount::Count(n) => Ok(Some(*n)),
            SampleCount::Basis(s) if s == "basis" => Ok(None),
            SampleCount::Basis(s) => Err(ConfigError::Invalid(format!("sampling.{key} = {s:?}; expected \"basis\" or a count"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingSection {
    pub witness: SampleCount,
    /// Pairwise, so quadratic in the count.
    pub adjoint: SampleCount,
    pub acyclic_compacts: usize,
    pub acyclic_samples: SampleCount,
    pub certificate_samples: SampleCount,
    pub pairing_samples: usize,
    pub ev_samples: usize,
    pub dgcat_cases: usize,
}

impl Default for SamplingSection {
    fn default() -> Self {
        SamplingSection {
            witness: SampleCount::basis(),
            adjoint: SampleCount::Count(8),
            acyclic_compacts: 10,
            acyclic_samples: SampleCount::basis(),
            certificate_samples: SampleCount::basis(),
            pairing_samples: 6,
            ev_samples: 50,
            dgcat_cases: 20,
        }
    }
}

fn all_suites() -> Vec<Suite> {
    Suite::ALL.to_vec()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "all_suites")]
    pub suites: Vec<Suite>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    pub model: ModelSection,
    pub lattice: LatticeSection,
    pub slices: SliceSection,
    #[serde(default)]
    pub sampling: SamplingSection,
}

/// Parsed and cross-checked configuration.
#[derive(Clone, Debug)]
pub struct Validated {
    pub config: RunConfig,
    pub spec: ModelSpec,
    pub model: Model,
    pub geometry: CertificateGeometry,
    pub witness_sampling: Sampling,
    pub adjoint_sampling: Sampling,
    pub acyclic_samples: Option<usize>,
    pub certificate_samples: Option<usize>,
}

pub const DEFAULT_TOML: &str = include_str!("../../../configs/default.toml");

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Schema(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    pub fn default_config() -> Self {
        Self::from_toml(DEFAULT_TOML).expect("the shipped default config parses")
    }

    pub fn model_kind(&self) -> Result<ModelKind, ConfigError> {
        let m = &self.model;
        let unused = |field: &str| ConfigError::Invalid(format!("model.{field} does not apply to {}", m.kind));
        match m.kind.as_str() {
            "klein_gordon" => {
                if m.p.is_some() {
                    return Err(unused("p"));
                }
                let mass = m.mass.as_ref().map_or(Ok(Scalar::zero()), Rational::parse)?;
                Ok(ModelKind::KleinGordon { mass })
            }
            "de_rham" | "chern_simons" => {
                if m.p.is_some() {
                    return Err(unused("p"));
                }
                if m.mass.is_some() {
                    return Err(unused("mass"));
                }
                Ok(if m.kind == "de_rham" { ModelKind::DeRham } else { ModelKind::ChernSimons })
            }
            "maxwell_p" => {
                if m.mass.is_some() {
                    return Err(unused("mass"));
                }
                Ok(ModelKind::MaxwellP { p: m.p.unwrap_or(1) })
            }
            other => Err(ConfigError::Invalid(format!("unknown model kind {other:?}"))),
        }
    }

    /// Schema checks first, then lattice registration, then geometry.
    pub fn validate(&self) -> Result<Validated, ConfigError> {
        let s = self.slices;
        if !(s.past < s.present && s.present < s.future) {
            return Err(ConfigError::Invalid(format!(
                "slices must satisfy past < present < future, got {} / {} / {}",
                s.past, s.present, s.future
            )));
        }
        if self.suites.is_empty() {
            return Err(ConfigError::Invalid("no suites selected".into()));
        }
        if self.lattice.spatial.len() + 1 != self.model.m {
            return Err(ConfigError::Invalid(format!(
                "model.m = {} needs {} spatial extents, got {}",
                self.model.m,
                self.model.m.saturating_sub(1),
                self.lattice.spatial.len()
            )));
        }
        let witness_sampling = match self.sampling.witness.validate("witness")? {
            None => Sampling::Basis,
            Some(count) => Sampling::Random { count, seed: self.seed },
        };
        let adjoint_sampling = match self.sampling.adjoint.validate("adjoint")? {
            None => Sampling::Basis,
            Some(count) => Sampling::Random { count, seed: self.seed },
        };
        let acyclic_samples = self.sampling.acyclic_samples.validate("acyclic_samples")?;
        let certificate_samples = self.sampling.certificate_samples.validate("certificate_samples")?;
        let kind = self.model_kind()?;
        let lat = CausalLattice::new(self.model.m, self.lattice.n_time, self.lattice.spatial.clone(), self.lattice.margin)
            .map_err(|e| ConfigError::Invalid(format!("lattice rejected: {e}")))?;
        let spec = ModelSpec::new(kind, lat.clone()).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let model = Model::build(&spec).map_err(|e| ConfigError::Invalid(format!("lattice rejected: {e}")))?;
        let geometry = CertificateGeometry::new(s.past, s.future);
        if self.suites.iter().any(|x| x.needs_slices()) {
            let (lo, hi) = lat.interior();
            for (name, t) in [("past", s.past), ("present", s.present), ("future", s.future)] {
                if t < lo || t > hi {
                    return Err(ConfigError::Geometry(format!("slice {name} = {t} is outside the interior [{lo}, {hi}]")));
                }
            }
            let last = lat.n_time() as i64 - 1;
            let (a, b) = (s.past - geometry.hull, s.future + geometry.hull);
            let (s0, s1) = (geometry.pad, last - geometry.pad);
            if a - 1 <= s0 || b + 1 >= s1 {
                return Err(ConfigError::Geometry(format!(
                    "compact band [{a}, {b}] around the slices must sit strictly inside the slab band [{s0}, {s1}]"
                )));
            }
        }
        Ok(Validated { config: self.clone(), spec, model, geometry, witness_sampling, adjoint_sampling, acyclic_samples, certificate_samples })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        let v = RunConfig::default_config().validate().unwrap();
        assert_eq!(v.spec.name(), "klein_gordon");
        assert_eq!(v.config.suites, Suite::ALL.to_vec());
    }

    #[test]
    fn equal_slices_are_rejected_before_any_computation() {
        let mut c = RunConfig::default_config();
        c.slices.future = c.slices.past;
        assert!(matches!(c.validate(), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn zero_margin_is_rejected_by_the_lattice() {
        let mut c = RunConfig::default_config();
        c.lattice.margin = 0;
        let e = c.validate().unwrap_err();
        assert!(e.to_string().contains("lattice rejected"), "{e}");
    }

    #[test]
    fn unknown_keys_and_kinds_are_schema_errors() {
        let text = DEFAULT_TOML.replace("[lattice]", "[lattice]\nwidth = 3");
        assert!(matches!(RunConfig::from_toml(&text), Err(ConfigError::Schema(_))));
        let mut c = RunConfig::default_config();
        c.model.kind = "yang_mills".into();
        assert!(c.validate().is_err());
        c.model.kind = "de_rham".into();
        assert!(c.validate().is_err(), "mass does not apply to de Rham");
    }

    #[test]
    fn tight_geometry_carries_a_hint() {
        let mut c = RunConfig::default_config();
        c.lattice.n_time = 16;
        let e = c.validate().unwrap_err();
        assert!(matches!(e, ConfigError::Geometry(_)));
        assert!(e.to_string().contains("grow n_time"));
        c.suites = vec![Suite::Dgcat];
        assert!(c.validate().is_ok());
    }

    #[test]
    fn sampling_accepts_basis_or_counts() {
        let text = format!("{DEFAULT_TOML}\n[sampling]\nwitness = 5\n");
        let c = RunConfig::from_toml(&text).unwrap();
        assert_eq!(c.validate().unwrap().witness_sampling, Sampling::Random { count: 5, seed: 0 });
        let bad = format!("{DEFAULT_TOML}\n[sampling]\nwitness = \"all\"\n");
        assert!(RunConfig::from_toml(&bad).unwrap().validate().is_err());
    }
}
