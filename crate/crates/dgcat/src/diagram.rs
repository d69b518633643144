//! Functors from a finite poset into complexes.

use crate::error::DgError;
use crate::poset::Poset;
use ghc_homalg::{identity_of, is_cochain_map, GradedMap, LadderComplex};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct FiniteDiagram {
    poset: Poset,
    values: Vec<LadderComplex>,
    /// One cochain map per strict relation `a < b`.
    arrows: BTreeMap<(usize, usize), GradedMap>,
}

impl FiniteDiagram {
    /// Arrows missing from `given` are composed through intermediate objects,
    /// so the covering relations suffice. Functoriality is then checked on
    /// every triple `a < b < c`.
    pub fn new(poset: Poset, values: Vec<LadderComplex>, given: BTreeMap<(usize, usize), GradedMap>) -> Result<Self, DgError> {
        if values.len() != poset.len() {
            return Err(DgError::ValueCount { expected: poset.len(), found: values.len() });
        }
        let mut arrows = BTreeMap::new();
        for ((a, b), f) in given {
            if !poset.lt(a, b) {
                return Err(DgError::MissingArrow(a, b));
            }
            check_arrow(&values, a, b, &f)?;
            arrows.insert((a, b), f);
        }
        // Relations ordered by the number of objects strictly between them.
        let mut rel = poset.relations();
        rel.sort_by_key(|&(a, b)| (0..poset.len()).filter(|&k| poset.lt(a, k) && poset.lt(k, b)).count());
        for (a, b) in rel {
            if arrows.contains_key(&(a, b)) {
                continue;
            }
            let mid = (0..poset.len()).find(|&k| poset.lt(a, k) && poset.lt(k, b) && arrows.contains_key(&(a, k)) && arrows.contains_key(&(k, b)));
            let k = mid.ok_or(DgError::MissingArrow(a, b))?;
            let f = arrows[&(k, b)].compose(&arrows[&(a, k)])?;
            arrows.insert((a, b), f);
        }
        let d = FiniteDiagram { poset, values, arrows };
        for c in d.poset.chains(2) {
            let composite = d.arrow(c[1], c[2]).compose(&d.arrow(c[0], c[1]))?;
            if !composite.equals(&d.arrow(c[0], c[2])) {
                return Err(DgError::NotFunctorial(c[0], c[1], c[2]));
            }
        }
        Ok(d)
    }

    /// `ΔV`: every value `V`, every arrow the identity.
    pub fn constant(poset: Poset, v: &LadderComplex) -> Self {
        let arrows = poset.relations().into_iter().map(|r| (r, identity_of(v))).collect();
        let values = vec![v.clone(); poset.len()];
        FiniteDiagram { poset, values, arrows }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn value(&self, a: usize) -> &LadderComplex {
        &self.values[a]
    }

    pub fn values(&self) -> &[LadderComplex] {
        &self.values
    }

    /// `V(a ≤ b)`, the identity when `a = b`.
    pub fn arrow(&self, a: usize, b: usize) -> GradedMap {
        if a == b {
            return identity_of(&self.values[a]);
        }
        self.arrows.get(&(a, b)).cloned().unwrap_or_else(|| panic!("{a} is not below {b}"))
    }

    pub fn total_dim(&self) -> usize {
        self.values.iter().map(|v| v.space().total_dim()).sum()
    }
}

fn check_arrow(values: &[LadderComplex], a: usize, b: usize, f: &GradedMap) -> Result<(), DgError> {
    let (v, w) = (&values[a], &values[b]);
    if f.degree() != 0 || !f.dom().same_shape(v.space()) || !f.cod().same_shape(w.space()) {
        return Err(DgError::ArrowShape(a, b));
    }
    if !is_cochain_map(f, v, w)? {
        return Err(DgError::NotCochainMap(a, b));
    }
    Ok(())
}
