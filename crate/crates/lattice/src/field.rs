//! Graded section spaces of form-valued fields on the slab, and graded local operators.

use crate::geometry::{cell_label, CausalLattice, Cell, CellIndex};
use crate::region::Region;
use crate::stencil::Stencil;
use ghc_homalg::{CausalClass, GradedMap, GradedSpace, Scalar, SparseMatrix};
use std::collections::BTreeMap;

/// Degree `lo + i` consists of `form_degrees[i]`-forms on the slab.
#[derive(Clone, Debug)]
pub struct FieldSpace {
    lat: CausalLattice,
    lo: i64,
    form_degrees: Vec<usize>,
    indexes: Vec<CellIndex>,
    space: GradedSpace,
}

impl FieldSpace {
    pub fn new(lat: &CausalLattice, lo: i64, form_degrees: Vec<usize>) -> Self {
        let indexes: Vec<CellIndex> = form_degrees.iter().map(|&p| lat.cell_index(p)).collect();
        let bases = indexes.iter().map(|ix| ix.labels(lat)).collect();
        FieldSpace { lat: lat.clone(), lo, form_degrees, indexes, space: GradedSpace::new(lo, bases) }
    }

    pub fn lattice(&self) -> &CausalLattice {
        &self.lat
    }

    pub fn graded(&self) -> &GradedSpace {
        &self.space
    }

    pub fn degrees(&self) -> std::ops::Range<i64> {
        self.lo..self.lo + self.form_degrees.len() as i64
    }

    pub fn has_degree(&self, n: i64) -> bool {
        self.degrees().contains(&n)
    }

    pub fn form_degree(&self, n: i64) -> usize {
        self.form_degrees[(n - self.lo) as usize]
    }

    pub fn index(&self, n: i64) -> &CellIndex {
        &self.indexes[(n - self.lo) as usize]
    }

    pub fn dim(&self, n: i64) -> usize {
        if self.has_degree(n) {
            self.index(n).len()
        } else {
            0
        }
    }

    pub fn cell(&self, n: i64, i: usize) -> Cell {
        self.index(n).cell_at(&self.lat, i)
    }

    pub fn position(&self, n: i64, c: &Cell) -> Option<usize> {
        if !self.has_degree(n) {
            return None;
        }
        self.index(n).index_of(&self.lat, c)
    }

    pub fn label(&self, n: i64, i: usize) -> String {
        cell_label(&self.lat, &self.cell(n, i))
    }

    /// Indices in degree `n` of cells satisfying the predicate.
    pub fn select(&self, n: i64, pred: impl Fn(&Cell) -> bool) -> Vec<usize> {
        if !self.has_degree(n) {
            return Vec::new();
        }
        (0..self.dim(n)).filter(|&i| pred(&self.cell(n, i))).collect()
    }

    /// Indices of cells with every vertex time in `[lo, hi]`.
    pub fn time_window(&self, n: i64, lo: i64, hi: i64) -> Vec<usize> {
        self.select(n, |c| {
            let (a, b) = self.lat.time_span(c);
            a >= lo && b <= hi
        })
    }

    /// Indices of cells lying in the region.
    pub fn in_region(&self, n: i64, r: &Region) -> Vec<usize> {
        self.select(n, |c| r.contains_cell(&self.lat, c))
    }

    /// Union of vertex sets of cells carrying a nonzero coefficient.
    pub fn support(&self, n: i64, values: &[Scalar]) -> Region {
        let mut r = Region::empty(&self.lat);
        for (i, v) in values.iter().enumerate() {
            if !v.is_zero() {
                r.insert_cell(&self.lat, &self.cell(n, i));
            }
        }
        r
    }
}

/// Graded operator given by one stencil per source degree.
#[derive(Clone, Debug)]
pub struct LocalOperator {
    degree: i64,
    stencils: BTreeMap<i64, Stencil>,
}

impl LocalOperator {
    pub fn new(degree: i64, stencils: BTreeMap<i64, Stencil>) -> Self {
        let stencils = stencils.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        LocalOperator { degree, stencils }
    }

    pub fn zero(degree: i64) -> Self {
        LocalOperator { degree, stencils: BTreeMap::new() }
    }

    pub fn identity(fields: &FieldSpace) -> Self {
        let m = fields.lattice().dim();
        let stencils = fields.degrees().map(|n| (n, Stencil::identity(m, fields.form_degree(n)))).collect();
        Self::new(0, stencils)
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn stencil(&self, n: i64) -> Option<&Stencil> {
        self.stencils.get(&n)
    }

    pub fn stencils(&self) -> &BTreeMap<i64, Stencil> {
        &self.stencils
    }

    pub fn is_zero(&self) -> bool {
        self.stencils.is_empty()
    }

    /// `self ∘ inner` as stencils on the infinite lattice.
    pub fn compose(&self, inner: &Self) -> Self {
        let stencils = inner
            .stencils
            .iter()
            .filter_map(|(n, b)| self.stencils.get(&(n + inner.degree)).map(|a| (*n, a.compose(b))))
            .collect();
        Self::new(self.degree + inner.degree, stencils)
    }

    pub fn add_scaled(&self, other: &Self, s: &Scalar) -> Self {
        assert_eq!(self.degree, other.degree);
        let mut stencils = self.stencils.clone();
        for (n, b) in &other.stencils {
            let b = b.scale(s);
            let e = stencils.remove(n).map_or(b.clone(), |a| a.add(&b));
            stencils.insert(*n, e);
        }
        Self::new(self.degree, stencils)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &Scalar::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &Scalar::from_int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::new(self.degree, self.stencils.iter().map(|(n, a)| (*n, a.scale(s))).collect())
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.degree == other.degree && self.stencils == other.stencils
    }

    pub fn radius(&self) -> u32 {
        self.stencils.values().map(Stencil::radius).max().unwrap_or(0)
    }

    pub fn slab_block(&self, fields_dom: &FieldSpace, fields_cod: &FieldSpace, n: i64) -> SparseMatrix {
        match self.stencils.get(&n) {
            Some(s) if fields_dom.has_degree(n) && fields_cod.has_degree(n + self.degree) => s.slab_matrix(fields_dom.lattice()),
            _ => SparseMatrix::zeros(fields_cod.dim(n + self.degree), fields_dom.dim(n)),
        }
    }

    /// Slab matrices of every stencil, as a graded map; out-of-slab reads are dropped.
    pub fn to_graded_map(&self, dom: &FieldSpace, cod: &FieldSpace) -> GradedMap {
        let blocks = dom.degrees().map(|n| (n, self.slab_block(dom, cod, n))).collect();
        GradedMap::new(dom.graded(), cod.graded(), self.degree, blocks)
            .expect("stencil degrees match the field spaces")
            .with_class(CausalClass::Local, Some(self.radius()))
    }
}
