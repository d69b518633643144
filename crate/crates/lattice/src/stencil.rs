//! Translation-invariant linear stencils between cochain degrees.
//!
//! A term `(dst_mask, src_mask, offset, c)` contributes
//! `c · φ(src_mask, v + offset)` to `(Sφ)(dst_mask, v)`.

use crate::geometry::{CausalLattice, Cell, Coord};
use ghc_homalg::{Scalar, SparseMatrix};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub dst: u8,
    pub src: u8,
    pub offset: Coord,
    pub coeff: Scalar,
}

/// Linear stencil from `src_degree`-cells to `dst_degree`-cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stencil {
    pub src_degree: usize,
    pub dst_degree: usize,
    terms: Vec<Term>,
}

impl Stencil {
    /// Canonical form: sorted, duplicates merged, zeros dropped.
    pub fn new(src_degree: usize, dst_degree: usize, terms: Vec<Term>) -> Self {
        let mut acc: BTreeMap<(u8, u8, Coord), Scalar> = BTreeMap::new();
        for t in terms {
            *acc.entry((t.dst, t.src, t.offset)).or_default() += &t.coeff;
        }
        let terms = acc
            .into_iter()
            .filter(|e| !e.1.is_zero())
            .map(|((dst, src, offset), coeff)| Term { dst, src, offset, coeff })
            .collect();
        Stencil { src_degree, dst_degree, terms }
    }

    pub fn zero(src_degree: usize, dst_degree: usize) -> Self {
        Stencil { src_degree, dst_degree, terms: Vec::new() }
    }

    pub fn identity(m: usize, p: usize) -> Self {
        Self::scalar(m, p, &Scalar::one())
    }

    pub fn scalar(m: usize, p: usize, s: &Scalar) -> Self {
        let terms = crate::geometry::masks_of_degree(m, p)
            .into_iter()
            .map(|k| Term { dst: k, src: k, offset: [0; 3], coeff: s.clone() })
            .collect();
        Self::new(p, p, terms)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let terms = self.terms.iter().map(|t| Term { coeff: &t.coeff * s, ..t.clone() }).collect();
        Self::new(self.src_degree, self.dst_degree, terms)
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.src_degree, self.dst_degree), (other.src_degree, other.dst_degree));
        let terms = self.terms.iter().chain(&other.terms).cloned().collect();
        Self::new(self.src_degree, self.dst_degree, terms)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        assert_eq!(self.src_degree, inner.dst_degree, "stencil degrees do not compose");
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in inner.terms.iter().filter(|b| b.dst == a.src) {
                terms.push(Term {
                    dst: a.dst,
                    src: b.src,
                    offset: add(a.offset, b.offset),
                    coeff: &a.coeff * &b.coeff,
                });
            }
        }
        Self::new(inner.src_degree, self.dst_degree, terms)
    }

    /// The transpose with respect to the unweighted cell sum.
    pub fn transpose(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term { dst: t.src, src: t.dst, offset: neg(t.offset), coeff: t.coeff.clone() })
            .collect();
        Self::new(self.dst_degree, self.src_degree, terms)
    }

    /// Multiplies each term by a factor depending on its destination mask.
    pub fn weight_rows(&self, w: impl Fn(u8) -> Scalar) -> Self {
        let terms = self.terms.iter().map(|t| Term { coeff: &t.coeff * &w(t.dst), ..t.clone() }).collect();
        Self::new(self.src_degree, self.dst_degree, terms)
    }

    /// Multiplies each term by a factor depending on its source mask.
    pub fn weight_cols(&self, w: impl Fn(u8) -> Scalar) -> Self {
        let terms = self.terms.iter().map(|t| Term { coeff: &t.coeff * &w(t.src), ..t.clone() }).collect();
        Self::new(self.src_degree, self.dst_degree, terms)
    }

    /// Largest per-axis vertex displacement between a cell and the cells it reads.
    pub fn radius(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| {
                (0..3)
                    .map(|a| {
                        let sb = ((t.src >> a) & 1) as i64;
                        let db = ((t.dst >> a) & 1) as i64;
                        let o = t.offset[a];
                        [o - db, o + sb - db, o, o + sb].iter().map(|v| v.unsigned_abs()).max().unwrap()
                    })
                    .max()
                    .unwrap() as u32
            })
            .max()
            .unwrap_or(0)
    }

    /// Cells read by the stencil at `c`, with coefficients, before slab truncation.
    pub fn reads(&self, lat: &CausalLattice, c: &Cell) -> Vec<(Cell, Scalar)> {
        self.terms
            .iter()
            .filter(|t| t.dst == c.mask)
            .map(|t| (Cell { mask: t.src, base: lat.wrap(add(c.base, t.offset)) }, t.coeff.clone()))
            .collect()
    }

    /// Slab matrix: rows and columns are slab cells; terms leaving the slab are dropped.
    pub fn slab_matrix(&self, lat: &CausalLattice) -> SparseMatrix {
        let rows_idx = lat.cell_index(self.dst_degree);
        let cols_idx = lat.cell_index(self.src_degree);
        let mut by_dst: BTreeMap<u8, Vec<&Term>> = BTreeMap::new();
        for t in &self.terms {
            by_dst.entry(t.dst).or_default().push(t);
        }
        let mut entries = Vec::new();
        for i in 0..rows_idx.len() {
            let c = rows_idx.cell_at(lat, i);
            if let Some(ts) = by_dst.get(&c.mask) {
                for t in ts {
                    let src = Cell { mask: t.src, base: add(c.base, t.offset) };
                    if let Some(j) = cols_idx.index_of(lat, &src) {
                        entries.push((i, j, t.coeff.clone()));
                    }
                }
            }
        }
        SparseMatrix::from_triplets(rows_idx.len(), cols_idx.len(), entries)
    }
}

pub fn add(a: Coord, b: Coord) -> Coord {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn neg(a: Coord) -> Coord {
    [-a[0], -a[1], -a[2]]
}

pub fn unit(axis: usize) -> Coord {
    let mut e = [0; 3];
    e[axis] = 1;
    e
}
