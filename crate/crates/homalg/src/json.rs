//! Sparse-triplet JSON interchange for graded maps and cochains.

use crate::graded::{Cochain, GradedMap, GradedSpace};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triplet {
    pub degree: i64,
    pub row: String,
    pub col: String,
    pub numerator: String,
    pub denominator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapTriplets {
    pub map_degree: i64,
    pub entries: Vec<Triplet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainEntry {
    pub label: String,
    pub numerator: String,
    pub denominator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainTriplets {
    pub degree: i64,
    pub entries: Vec<CochainEntry>,
}

/// Entries keyed by source degree, with rows and columns named by basis labels.
pub fn map_to_triplets(f: &GradedMap) -> MapTriplets {
    let mut entries = Vec::new();
    for n in f.nonzero_degrees() {
        let m = f.block(n);
        for (i, j, v) in m.triplets() {
            entries.push(Triplet {
                degree: n,
                row: f.cod().label(n + f.degree(), i).to_string(),
                col: f.dom().label(n, j).to_string(),
                numerator: v.numer().to_string(),
                denominator: v.denom().to_string(),
            });
        }
    }
    MapTriplets { map_degree: f.degree(), entries }
}

pub fn cochain_to_triplets(space: &GradedSpace, c: &Cochain) -> CochainTriplets {
    let entries = c
        .support()
        .into_iter()
        .map(|i| CochainEntry {
            label: space.label(c.degree, i).to_string(),
            numerator: c.values[i].numer().to_string(),
            denominator: c.values[i].denom().to_string(),
        })
        .collect();
    CochainTriplets { degree: c.degree, entries }
}
