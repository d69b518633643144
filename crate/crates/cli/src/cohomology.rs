//! Cohomology dimensions: `J±(K)` windows over sampled compacts, `cone(Λ)`,
//! and the unrestricted slab complex for reference.

use crate::config::Validated;
use ghc_green::Direction;
use ghc_homalg::{cohomology_dims, cone};
use ghc_rma::{cone_window, random_compact, Certificate, GreenHomotopy};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

type Dims = BTreeMap<i64, usize>;

#[derive(Clone, Debug, Serialize)]
pub struct CompactDims {
    pub sites: Vec<Vec<i64>>,
    pub retarded: Dims,
    pub advanced: Dims,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub model: &'static str,
    pub compacts: Vec<CompactDims>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone_rma: Option<Dims>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone_rma_skipped: Option<String>,
    /// Informational: the slab complex has cohomology of its own.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_slab: Option<Dims>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_slab_skipped: Option<String>,
    pub acyclic: bool,
}

fn is_zero(d: &Dims) -> bool {
    d.values().all(|&x| x == 0)
}

pub fn cohomology_report(v: &Validated, h: &GreenHomotopy) -> Result<CohomologyReport, String> {
    let dim = v.spec.lattice.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(v.config.seed);
    let mut compacts = Vec::new();
    for _ in 0..v.config.sampling.acyclic_compacts {
        let k = random_compact(h, &mut rng);
        let dims = |dir| cone_window(h, dir, &k).map(|w| cohomology_dims(&w.complex)).map_err(|e| e.to_string());
        compacts.push(CompactDims {
            sites: k.iter().map(|s| s[..dim].to_vec()).collect(),
            retarded: dims(Direction::Retarded)?,
            advanced: dims(Direction::Advanced)?,
        });
    }
    let (cone_rma, cone_rma_skipped) = match Certificate::build(h, v.geometry) {
        Ok(cert) => {
            let c = cone(cert.lambda_map(), cert.shifted_compact(), &cert.slab().complex).map_err(|e| e.to_string())?;
            (Some(cohomology_dims(&c)), None)
        }
        Err(e) => (None, Some(e.to_string())),
    };
    let (full_slab, full_slab_skipped) = match v.model.complex() {
        Ok(c) => (Some(cohomology_dims(&c)), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let acyclic = compacts.iter().all(|c| is_zero(&c.retarded) && is_zero(&c.advanced)) && cone_rma.as_ref().is_none_or(is_zero);
    Ok(CohomologyReport { model: v.spec.name(), compacts, cone_rma, cone_rma_skipped, full_slab, full_slab_skipped, acyclic })
}
