//! On-disk cache of Green's operator columns.
//!
//! One file per (operator, variant). The key hashes the lattice, the model
//! kind and the `Q` and `W` stencils, so any stencil change misses the cache.

use ghc_green::{Direction, GreenOperators};
use ghc_homalg::Scalar;
use ghc_models::Model;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Serialize, Deserialize)]
struct CachedColumn {
    degree: i64,
    index: usize,
    /// Nonzero entries as `(row, value)`.
    entries: Vec<(usize, Scalar)>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    key: String,
    variant: String,
    columns: Vec<CachedColumn>,
}

pub fn model_key(model: &Model) -> String {
    let text = format!("{:?}\n{:?}\n{:?}\n{:?}", model.spec().kind, model.lattice(), model.q_local(), model.w_local());
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn cache_path(dir: &Path, key: &str, variant: Direction) -> PathBuf {
    dir.join(format!("green-{key}-{}.json", variant.name()))
}

/// Seeds `ops` from the cache; a missing or stale file loads nothing.
pub fn load(dir: &Path, key: &str, ops: &GreenOperators) -> usize {
    let mut total = 0;
    for d in [Direction::Retarded, Direction::Advanced] {
        let Ok(text) = std::fs::read_to_string(cache_path(dir, key, d)) else { continue };
        let Ok(file) = serde_json::from_str::<CacheFile>(&text) else { continue };
        if file.key != key || file.variant != d.name() {
            continue;
        }
        let f = ops.operator().fields();
        let columns: Vec<_> = file
            .columns
            .into_iter()
            .filter(|c| f.has_degree(c.degree))
            .map(|c| {
                let mut v = vec![Scalar::zero(); f.dim(c.degree)];
                for (i, x) in c.entries {
                    if i < v.len() {
                        v[i] = x;
                    }
                }
                (c.degree, c.index, v)
            })
            .collect();
        total += ops.preload(d, columns).unwrap_or(0);
    }
    total
}

/// Writes every cached column of both variants.
pub fn store(dir: &Path, key: &str, ops: &GreenOperators) -> std::io::Result<usize> {
    std::fs::create_dir_all(dir)?;
    let mut total = 0;
    for d in [Direction::Retarded, Direction::Advanced] {
        let columns: Vec<_> = ops
            .export_columns(d)
            .into_iter()
            .map(|(degree, index, col)| CachedColumn {
                degree,
                index,
                entries: col.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect(),
            })
            .collect();
        total += columns.len();
        let file = CacheFile { key: key.to_string(), variant: d.name().to_string(), columns };
        let tmp = cache_path(dir, key, d).with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_vec(&file)?)?;
        std::fs::rename(&tmp, cache_path(dir, key, d))?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ghc_homalg::Scalar;
    use ghc_lattice::CausalLattice;
    use ghc_models::{witness_of, ModelKind, ModelSpec};

    fn model(mass: i64) -> Model {
        let lat = CausalLattice::new(2, 10, vec![5], 2).unwrap();
        Model::build(&ModelSpec::new(ModelKind::KleinGordon { mass: Scalar::from_int(mass) }, lat).unwrap()).unwrap()
    }

    fn ops(m: &Model) -> GreenOperators {
        GreenOperators::new(witness_of(m).unwrap().p)
    }

    #[test]
    fn stored_columns_load_back_identically() {
        let dir = tempfile::tempdir().unwrap();
        let m = model(1);
        let key = model_key(&m);
        let a = ops(&m);
        for j in [3, 17, 40] {
            a.column(Direction::Retarded, 1, j);
            a.column(Direction::Advanced, 0, j);
        }
        assert_eq!(store(dir.path(), &key, &a).unwrap(), 6);
        let b = ops(&m);
        assert_eq!(load(dir.path(), &key, &b), 6);
        for d in [Direction::Retarded, Direction::Advanced] {
            assert_eq!(a.export_columns(d), b.export_columns(d));
        }
        assert_eq!(*b.column(Direction::Retarded, 1, 17), *ops(&m).column(Direction::Retarded, 1, 17));
    }

    #[test]
    fn key_tracks_the_stencils_and_stale_files_are_ignored() {
        let (m0, m1) = (model(0), model(1));
        assert_ne!(model_key(&m0), model_key(&m1));
        assert_eq!(model_key(&m1), model_key(&model(1)));
        let dir = tempfile::tempdir().unwrap();
        let key = model_key(&m1);
        std::fs::write(cache_path(dir.path(), &key, Direction::Retarded), "not json").unwrap();
        assert_eq!(load(dir.path(), &key, &ops(&m1)), 0);
    }
}
