//! Retarded and advanced Green's operators by exact time substitution.

use crate::certify::{CausalOperator, Direction};
use ghc_homalg::{CausalClass, GradedMap, Scalar, SparseMatrix};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Levels a source must keep clear of on the initial side of a sweep.
///
/// A retarded source touching level 0 (advanced: level `N−1`) would be
/// silently dropped by the zero initial data, so it is rejected instead.
pub const INITIAL_BUFFER: i64 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
pub enum GreenError {
    #[error("{direction:?} source touches the initial levels at cell {cell} (degree {degree})")]
    Inadmissible { direction: Direction, degree: i64, cell: String },
    #[error("degree {0} is not a degree of the field space")]
    Degree(i64),
    #[error("source has length {found}, expected {expected}")]
    Length { expected: usize, found: usize },
}

type Column = Arc<Vec<Scalar>>;

/// Green's operators of a certified causal operator, with a lazy column cache.
pub struct GreenOperators {
    op: CausalOperator,
    cache: Mutex<HashMap<(Direction, i64, usize), Column>>,
}

impl GreenOperators {
    pub fn new(op: CausalOperator) -> Self {
        GreenOperators { op, cache: Mutex::new(HashMap::new()) }
    }

    pub fn operator(&self) -> &CausalOperator {
        &self.op
    }

    /// Whether a source is admissible for the given sweep.
    pub fn admissible(&self, dir: Direction, n: i64, phi: &[Scalar]) -> Result<(), GreenError> {
        let f = self.op.fields();
        if !f.has_degree(n) {
            return Err(GreenError::Degree(n));
        }
        if phi.len() != f.dim(n) {
            return Err(GreenError::Length { expected: f.dim(n), found: phi.len() });
        }
        let last = f.lattice().n_time() as i64 - 1;
        for (i, v) in phi.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let (lo, hi) = f.lattice().time_span(&f.cell(n, i));
            let bad = match dir {
                Direction::Retarded => lo < INITIAL_BUFFER,
                Direction::Advanced => hi > last - INITIAL_BUFFER,
            };
            if bad {
                return Err(GreenError::Inadmissible { direction: dir, degree: n, cell: f.label(n, i) });
            }
        }
        Ok(())
    }

    /// `G± φ` after an admissibility check.
    pub fn solve(&self, dir: Direction, n: i64, phi: &[Scalar]) -> Result<Vec<Scalar>, GreenError> {
        self.admissible(dir, n, phi)?;
        Ok(self.solve_unchecked(dir, n, phi))
    }

    /// Substitution without the admissibility check.
    pub fn solve_unchecked(&self, dir: Direction, n: i64, phi: &[Scalar]) -> Vec<Scalar> {
        let sweep = self.op.sweep(dir, n);
        let mut psi = vec![Scalar::zero(); phi.len()];
        for st in &sweep.steps {
            let mut acc = phi[st.row].clone();
            for (j, a) in &st.rest {
                if !psi[*j].is_zero() {
                    acc -= &(a * &psi[*j]);
                }
            }
            if !acc.is_zero() {
                psi[st.target] = acc * &st.inv_lead;
            }
        }
        psi
    }

    /// `G±` applied to the basis vector of cell `j`, cached.
    pub fn column(&self, dir: Direction, n: i64, j: usize) -> Column {
        if let Some(c) = self.cache.lock().unwrap().get(&(dir, n, j)) {
            return c.clone();
        }
        let mut e = vec![Scalar::zero(); self.op.fields().dim(n)];
        e[j] = Scalar::one();
        let col = Arc::new(self.solve_unchecked(dir, n, &e));
        self.cache.lock().unwrap().insert((dir, n, j), col.clone());
        col
    }

    /// Several columns, computed in parallel; order follows `js`.
    pub fn columns(&self, dir: Direction, n: i64, js: &[usize]) -> Vec<Column> {
        js.par_iter().map(|&j| self.column(dir, n, j)).collect()
    }

    /// Full slab matrix of `G±` in degree `n`.
    pub fn matrix(&self, dir: Direction, n: i64) -> SparseMatrix {
        let dim = self.op.fields().dim(n);
        let js: Vec<usize> = (0..dim).collect();
        let cols = self.columns(dir, n, &js);
        let mut trip = Vec::new();
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                if !v.is_zero() {
                    trip.push((i, j, v.clone()));
                }
            }
        }
        SparseMatrix::from_triplets(dim, dim, trip)
    }

    /// `G±` as a degree-0 graded map on the field space.
    pub fn graded_map(&self, dir: Direction) -> GradedMap {
        let f = self.op.fields();
        let blocks = f.degrees().map(|n| (n, self.matrix(dir, n))).collect();
        let class = match dir {
            Direction::Retarded => CausalClass::Retarded,
            Direction::Advanced => CausalClass::Advanced,
        };
        GradedMap::new(f.graded(), f.graded(), 0, blocks).expect("square blocks").with_class(class, None)
    }

    /// `G = G₊ − G₋`.
    pub fn causal_propagator(&self) -> GradedMap {
        self.graded_map(Direction::Retarded)
            .sub(&self.graded_map(Direction::Advanced))
            .expect("same shape")
            .with_class(CausalClass::Mixed, None)
    }

    pub fn cached_columns(&self) -> usize {
        self.cache.lock().unwrap().len()
    }

    /// Cached columns of one direction, ordered by `(degree, index)`.
    pub fn export_columns(&self, dir: Direction) -> Vec<(i64, usize, Column)> {
        let cache = self.cache.lock().unwrap();
        let mut out: Vec<_> = cache.iter().filter(|(k, _)| k.0 == dir).map(|(k, c)| (k.1, k.2, c.clone())).collect();
        out.sort_by_key(|e| (e.0, e.1));
        out
    }

    /// Seeds the cache; columns of the wrong length are rejected.
    pub fn preload(&self, dir: Direction, columns: Vec<(i64, usize, Vec<Scalar>)>) -> Result<usize, GreenError> {
        let f = self.op.fields();
        let mut cache = self.cache.lock().unwrap();
        let mut count = 0;
        for (n, j, col) in columns {
            if !f.has_degree(n) {
                return Err(GreenError::Degree(n));
            }
            if col.len() != f.dim(n) || j >= f.dim(n) {
                return Err(GreenError::Length { expected: f.dim(n), found: col.len() });
            }
            cache.insert((dir, n, j), Arc::new(col));
            count += 1;
        }
        Ok(count)
    }
}
