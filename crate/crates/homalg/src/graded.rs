//! Graded spaces, cochains and graded maps.

use crate::error::HomalgError;
use crate::matrix::{EntryMismatch, SparseMatrix};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Finite graded space; degree `lo + i` has basis `bases[i]`. Degrees outside are zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedSpace {
    lo: i64,
    bases: Vec<Arc<Vec<String>>>,
}

impl GradedSpace {
    pub fn new(lo: i64, bases: Vec<Vec<String>>) -> Self {
        for b in &bases {
            let mut s: Vec<&String> = b.iter().collect();
            s.sort();
            s.dedup();
            assert_eq!(s.len(), b.len(), "basis labels must be unique per degree");
        }
        GradedSpace { lo, bases: bases.into_iter().map(Arc::new).collect() }
    }

    /// Space with generic labels `e0, e1, ...`.
    pub fn from_dims(lo: i64, dims: &[usize]) -> Self {
        let bases = dims.iter().map(|&d| Arc::new((0..d).map(|i| format!("e{i}")).collect())).collect();
        GradedSpace { lo, bases }
    }

    pub fn zero() -> Self {
        GradedSpace { lo: 0, bases: Vec::new() }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// One past the highest stored degree.
    pub fn hi(&self) -> i64 {
        self.lo + self.bases.len() as i64
    }

    pub fn degrees(&self) -> std::ops::Range<i64> {
        self.lo..self.hi()
    }

    pub fn dim(&self, n: i64) -> usize {
        self.basis(n).map_or(0, |b| b.len())
    }

    pub fn total_dim(&self) -> usize {
        self.bases.iter().map(|b| b.len()).sum()
    }

    pub fn basis(&self, n: i64) -> Option<&Arc<Vec<String>>> {
        if n < self.lo {
            return None;
        }
        self.bases.get((n - self.lo) as usize)
    }

    pub fn label(&self, n: i64, i: usize) -> &str {
        &self.basis(n).expect("degree out of range")[i]
    }

    /// `V[p]^n = V^{n+p}`.
    pub fn shift(&self, p: i64) -> Self {
        GradedSpace { lo: self.lo - p, bases: self.bases.clone() }
    }

    /// Degreewise direct sum; labels are prefixed to stay unique.
    pub fn direct_sum(&self, other: &Self, tags: (&str, &str)) -> Self {
        if self.bases.is_empty() {
            return other.clone();
        }
        if other.bases.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let bases = (lo..hi)
            .map(|n| {
                let mut b: Vec<String> = Vec::new();
                if let Some(x) = self.basis(n) {
                    b.extend(x.iter().map(|l| format!("{}:{l}", tags.0)));
                }
                if let Some(y) = other.basis(n) {
                    b.extend(y.iter().map(|l| format!("{}:{l}", tags.1)));
                }
                Arc::new(b)
            })
            .collect();
        GradedSpace { lo, bases }
    }

    /// Same dimension in every degree.
    pub fn same_shape(&self, other: &Self) -> bool {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..hi).all(|n| self.dim(n) == other.dim(n))
    }
}

/// Homogeneous element of a graded space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cochain {
    pub degree: i64,
    pub values: Vec<Scalar>,
}

impl Cochain {
    pub fn zero(space: &GradedSpace, degree: i64) -> Self {
        Cochain { degree, values: vec![Scalar::zero(); space.dim(degree)] }
    }

    pub fn basis_vector(space: &GradedSpace, degree: i64, i: usize) -> Self {
        let mut c = Self::zero(space, degree);
        c.values[i] = Scalar::one();
        c
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    /// Indices of nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        self.values.iter().enumerate().filter(|e| !e.1.is_zero()).map(|e| e.0).collect()
    }
}

/// Declared causal behaviour of a map, used by reports and support checks.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalClass {
    Local,
    Retarded,
    Advanced,
    Mixed,
}

/// Degree-`degree` linear map; `block(n)` sends degree `n` to degree `n + degree`.
#[derive(Clone, Debug)]
pub struct GradedMap {
    dom: GradedSpace,
    cod: GradedSpace,
    degree: i64,
    blocks: BTreeMap<i64, SparseMatrix>,
    pub support_radius: Option<u32>,
    pub causal_class: CausalClass,
}

impl GradedMap {
    pub fn new(
        dom: &GradedSpace,
        cod: &GradedSpace,
        degree: i64,
        blocks: BTreeMap<i64, SparseMatrix>,
    ) -> Result<Self, HomalgError> {
        let mut kept = BTreeMap::new();
        for (n, m) in blocks {
            let want = (cod.dim(n + degree), dom.dim(n));
            if m.shape() != want {
                return Err(HomalgError::Shape { degree: n, expected: want, found: m.shape() });
            }
            if !m.is_zero() {
                kept.insert(n, m);
            }
        }
        Ok(GradedMap {
            dom: dom.clone(),
            cod: cod.clone(),
            degree,
            blocks: kept,
            support_radius: None,
            causal_class: CausalClass::Mixed,
        })
    }

    pub fn zero(dom: &GradedSpace, cod: &GradedSpace, degree: i64) -> Self {
        Self::new(dom, cod, degree, BTreeMap::new()).unwrap()
    }

    pub fn identity(space: &GradedSpace) -> Self {
        Self::scalar(space, &Scalar::one())
    }

    pub fn scalar(space: &GradedSpace, s: &Scalar) -> Self {
        let blocks = space.degrees().map(|n| (n, SparseMatrix::scalar_identity(space.dim(n), s))).collect();
        let mut m = Self::new(space, space, 0, blocks).unwrap();
        m.causal_class = CausalClass::Local;
        m.support_radius = Some(0);
        m
    }

    pub fn with_class(mut self, class: CausalClass, radius: Option<u32>) -> Self {
        self.causal_class = class;
        self.support_radius = radius;
        self
    }

    pub fn dom(&self) -> &GradedSpace {
        &self.dom
    }

    pub fn cod(&self) -> &GradedSpace {
        &self.cod
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Block out of degree `n`, materialized as zero when absent.
    pub fn block(&self, n: i64) -> SparseMatrix {
        self.blocks
            .get(&n)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.cod.dim(n + self.degree), self.dom.dim(n)))
    }

    pub fn block_ref(&self, n: i64) -> Option<&SparseMatrix> {
        self.blocks.get(&n)
    }

    pub fn nonzero_degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.blocks.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    fn map_blocks(&self, f: impl Fn(&SparseMatrix) -> SparseMatrix) -> Self {
        let blocks = self.blocks.iter().map(|(n, m)| (*n, f(m))).collect();
        let mut out = Self::new(&self.dom, &self.cod, self.degree, blocks).unwrap();
        out.causal_class = self.causal_class;
        out.support_radius = self.support_radius;
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map_blocks(|m| m.scale(s))
    }

    pub fn neg(&self) -> Self {
        self.map_blocks(SparseMatrix::neg)
    }

    fn check_parallel(&self, other: &Self) -> Result<(), HomalgError> {
        if self.degree != other.degree || !self.dom.same_shape(&other.dom) || !self.cod.same_shape(&other.cod) {
            return Err(HomalgError::SpaceMismatch("maps are not parallel".into()));
        }
        Ok(())
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &Self, s: &Scalar) -> Result<Self, HomalgError> {
        self.check_parallel(other)?;
        let mut degs: Vec<i64> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        degs.sort_unstable();
        degs.dedup();
        let blocks = degs.into_iter().map(|n| (n, self.block(n).add_scaled(&other.block(n), s))).collect();
        let mut out = Self::new(&self.dom, &self.cod, self.degree, blocks)?;
        out.causal_class = if self.causal_class == other.causal_class { self.causal_class } else { CausalClass::Mixed };
        out.support_radius = match (self.support_radius, other.support_radius) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, HomalgError> {
        self.add_scaled(other, &Scalar::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HomalgError> {
        self.add_scaled(other, &Scalar::from_int(-1))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self, HomalgError> {
        if !inner.cod.same_shape(&self.dom) {
            return Err(HomalgError::SpaceMismatch("composition: codomain/domain differ".into()));
        }
        let blocks = inner
            .blocks
            .iter()
            .filter_map(|(n, f)| self.blocks.get(&(n + inner.degree)).map(|g| (*n, g.mul(f))))
            .collect();
        let mut out = Self::new(&inner.dom, &self.cod, self.degree + inner.degree, blocks)?;
        out.support_radius = match (self.support_radius, inner.support_radius) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        out.causal_class = match (self.causal_class, inner.causal_class) {
            (CausalClass::Local, c) | (c, CausalClass::Local) => c,
            (a, b) if a == b => a,
            _ => CausalClass::Mixed,
        };
        Ok(out)
    }

    pub fn apply(&self, x: &Cochain) -> Cochain {
        assert_eq!(x.values.len(), self.dom.dim(x.degree), "cochain does not live in the domain");
        let target = x.degree + self.degree;
        let values = match self.blocks.get(&x.degree) {
            Some(m) => m.mul_vec(&x.values),
            None => vec![Scalar::zero(); self.cod.dim(target)],
        };
        Cochain { degree: target, values }
    }

    /// First differing entry, keyed by source degree.
    pub fn first_mismatch(&self, other: &Self) -> Result<Option<(i64, EntryMismatch)>, HomalgError> {
        self.check_parallel(other)?;
        let mut degs: Vec<i64> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        degs.sort_unstable();
        degs.dedup();
        for n in degs {
            if let Some(e) = self.block(n).first_mismatch(&other.block(n)) {
                return Ok(Some((n, e)));
            }
        }
        Ok(None)
    }

    pub fn equals(&self, other: &Self) -> bool {
        matches!(self.first_mismatch(other), Ok(None))
    }

    /// Reinterprets the map between shifted spaces `dom[p] -> cod[q]` without signs.
    pub fn reindex(&self, p: i64, q: i64) -> Self {
        let blocks = self.blocks.iter().map(|(n, m)| (n - p, m.clone())).collect();
        let mut out = Self::new(&self.dom.shift(p), &self.cod.shift(q), self.degree + p - q, blocks).unwrap();
        out.causal_class = self.causal_class;
        out.support_radius = self.support_radius;
        out
    }

    /// Restricts every block to the given row and column index lists per degree.
    pub fn restrict(&self, dom: &GradedSpace, cod: &GradedSpace, cols: &BTreeMap<i64, Vec<usize>>, rows: &BTreeMap<i64, Vec<usize>>) -> Self {
        let empty = Vec::new();
        let blocks = dom
            .degrees()
            .map(|n| {
                let c = cols.get(&n).unwrap_or(&empty);
                let r = rows.get(&(n + self.degree)).unwrap_or(&empty);
                (n, self.block(n).select(r, c))
            })
            .collect();
        let mut out = Self::new(dom, cod, self.degree, blocks).unwrap();
        out.causal_class = self.causal_class;
        out.support_radius = self.support_radius;
        out
    }
}
