//! Translation-invariant bilinear stencils from pairs of cochains to cochains.
//!
//! A term `(out, a_mask, a_off, b_mask, b_off, c)` contributes
//! `c · a(a_mask, v + a_off) · b(b_mask, v + b_off)` to `B(a, b)(out, v)`.

use ghc_homalg::{Scalar, SparseMatrix};
use ghc_lattice::stencil::{add, unit};
use ghc_lattice::{CausalLattice, Cell, CellIndex, Coord, Stencil};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiTerm {
    pub out: u8,
    pub a_mask: u8,
    pub a_off: Coord,
    pub b_mask: u8,
    pub b_off: Coord,
    pub coeff: Scalar,
}

/// Bilinear stencil from `(a_degree, b_degree)`-forms to `out_degree`-forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bilinear {
    pub a_degree: usize,
    pub b_degree: usize,
    pub out_degree: usize,
    terms: Vec<BiTerm>,
}

type Key = (u8, u8, Coord, u8, Coord);

impl Bilinear {
    /// Canonical form: sorted, merged, zeros dropped.
    pub fn new(a_degree: usize, b_degree: usize, out_degree: usize, terms: Vec<BiTerm>) -> Self {
        let mut acc: BTreeMap<Key, Scalar> = BTreeMap::new();
        for t in terms {
            *acc.entry((t.out, t.a_mask, t.a_off, t.b_mask, t.b_off)).or_default() += &t.coeff;
        }
        let terms = acc
            .into_iter()
            .filter(|e| !e.1.is_zero())
            .map(|((out, a_mask, a_off, b_mask, b_off), coeff)| BiTerm { out, a_mask, a_off, b_mask, b_off, coeff })
            .collect();
        Bilinear { a_degree, b_degree, out_degree, terms }
    }

    pub fn zero(a_degree: usize, b_degree: usize, out_degree: usize) -> Self {
        Bilinear { a_degree, b_degree, out_degree, terms: Vec::new() }
    }

    pub fn terms(&self) -> &[BiTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let terms = self.terms.iter().map(|t| BiTerm { coeff: &t.coeff * s, ..t.clone() }).collect();
        Self::new(self.a_degree, self.b_degree, self.out_degree, terms)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.a_degree, self.b_degree, self.out_degree),
            (other.a_degree, other.b_degree, other.out_degree),
            "bilinear degrees differ"
        );
        let terms = self.terms.iter().chain(&other.terms).cloned().collect();
        Self::new(self.a_degree, self.b_degree, self.out_degree, terms)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    /// `(a, b) ↦ B(b, a)`.
    pub fn swap(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| BiTerm { out: t.out, a_mask: t.b_mask, a_off: t.b_off, b_mask: t.a_mask, b_off: t.a_off, coeff: t.coeff.clone() })
            .collect();
        Self::new(self.b_degree, self.a_degree, self.out_degree, terms)
    }

    /// `(a, b) ↦ B(S a, b)`.
    pub fn compose_a(&self, s: &Stencil) -> Self {
        assert_eq!(s.dst_degree, self.a_degree);
        let mut terms = Vec::new();
        for t in &self.terms {
            for u in s.terms().iter().filter(|u| u.dst == t.a_mask) {
                terms.push(BiTerm { a_mask: u.src, a_off: add(t.a_off, u.offset), coeff: &t.coeff * &u.coeff, ..t.clone() });
            }
        }
        Self::new(s.src_degree, self.b_degree, self.out_degree, terms)
    }

    /// `(a, b) ↦ B(a, S b)`.
    pub fn compose_b(&self, s: &Stencil) -> Self {
        self.swap().compose_a(s).swap()
    }

    /// `(a, b) ↦ d(B(a, b))`.
    pub fn exterior_d(&self, m: usize) -> Self {
        let d = ghc_lattice::dec::exterior_d(m, self.out_degree);
        let mut terms = Vec::new();
        for u in d.terms() {
            for t in self.terms.iter().filter(|t| t.out == u.src) {
                terms.push(BiTerm {
                    out: u.dst,
                    a_off: add(t.a_off, u.offset),
                    b_off: add(t.b_off, u.offset),
                    coeff: &t.coeff * &u.coeff,
                    ..t.clone()
                });
            }
        }
        Self::new(self.a_degree, self.b_degree, self.out_degree + 1, terms)
    }

    /// Largest per-axis offset magnitude.
    pub fn radius(&self) -> u32 {
        self.terms
            .iter()
            .flat_map(|t| t.a_off.iter().chain(&t.b_off).map(|o| o.unsigned_abs() as u32).collect::<Vec<_>>())
            .max()
            .unwrap_or(0)
    }

    /// Evaluates on slab cochains; reads leaving the slab in time count as zero.
    pub fn evaluate(&self, lat: &CausalLattice, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let ia = lat.cell_index(self.a_degree);
        let ib = lat.cell_index(self.b_degree);
        let io = lat.cell_index(self.out_degree);
        let mut out = vec![Scalar::zero(); io.len()];
        for (i, o) in out.iter_mut().enumerate() {
            let c = io.cell_at(lat, i);
            for t in self.terms.iter().filter(|t| t.out == c.mask) {
                let (Some(x), Some(y)) = (read(lat, &ia, a, t.a_mask, add(c.base, t.a_off)), read(lat, &ib, b, t.b_mask, add(c.base, t.b_off)))
                else {
                    continue;
                };
                if !x.is_zero() && !y.is_zero() {
                    *o += &(&(x * y) * &t.coeff);
                }
            }
        }
        out
    }

    /// Matrix `M` with `Σ_{c ∈ cells} B(a, b)(c) = aᵀ M b` (out-of-slab reads dropped).
    pub fn integrate_matrix(&self, lat: &CausalLattice, out_cells: &[Cell]) -> SparseMatrix {
        let ia = lat.cell_index(self.a_degree);
        let ib = lat.cell_index(self.b_degree);
        let mut trip = Vec::new();
        for c in out_cells {
            for t in self.terms.iter().filter(|t| t.out == c.mask) {
                let ca = Cell { mask: t.a_mask, base: add(c.base, t.a_off) };
                let cb = Cell { mask: t.b_mask, base: add(c.base, t.b_off) };
                if let (Some(i), Some(j)) = (ia.index_of(lat, &ca), ib.index_of(lat, &cb)) {
                    trip.push((i, j, t.coeff.clone()));
                }
            }
        }
        SparseMatrix::from_triplets(ia.len(), ib.len(), trip)
    }
}

fn read<'a>(lat: &CausalLattice, ix: &CellIndex, v: &'a [Scalar], mask: u8, base: Coord) -> Option<&'a Scalar> {
    ix.index_of(lat, &Cell { mask, base }).map(|i| &v[i])
}

/// Synthesises `B` of out-degree `m−1` with `dB = t` for a top-degree `t`
/// whose groups (same masks, same relative offset) have vanishing coefficient sums.
///
/// Each `h(· + o) − h(·)` is telescoped along the path that moves axis by axis
/// in increasing order; a step `±e_i` contributes to the face missing axis `i`.
pub fn flux_primitive(t: &Bilinear, m: usize) -> Result<Bilinear, Residue> {
    assert_eq!(t.out_degree, m);
    let full: u8 = (1 << m) - 1;
    let mut groups: BTreeMap<(u8, u8, Coord), Vec<(Coord, Scalar)>> = BTreeMap::new();
    for term in &t.terms {
        let delta = sub(term.a_off, term.b_off);
        groups.entry((term.a_mask, term.b_mask, delta)).or_default().push((term.b_off, term.coeff.clone()));
    }
    let mut out = Vec::new();
    for ((am, bm, delta), entries) in &groups {
        let total: Scalar = entries.iter().map(|e| e.1.clone()).sum();
        if !total.is_zero() {
            return Err(Residue { a_mask: *am, b_mask: *bm, delta: *delta, sum: total });
        }
        for (o, c) in entries {
            let mut u = [0i64; 3];
            for axis in 0..m {
                let sigma = Scalar::from_int(if axis % 2 == 0 { 1 } else { -1 });
                let face = full & !(1 << axis);
                while u[axis] != o[axis] {
                    let step = (o[axis] - u[axis]).signum();
                    let (at, coeff) = if step > 0 { (u, c * &sigma) } else { (add(u, neg_unit(axis)), -(c * &sigma)) };
                    out.push(BiTerm { out: face, a_mask: *am, a_off: add(at, *delta), b_mask: *bm, b_off: at, coeff });
                    u[axis] += step;
                }
            }
        }
    }
    Ok(Bilinear::new(t.a_degree, t.b_degree, m - 1, out))
}

/// Synthesises a 0-form-valued `B` with `dB = t` for a 1-form-valued `t`,
/// dividing the time component by `X_t − 1`; the spatial components are then
/// checked by the caller.
pub fn time_primitive(t: &Bilinear) -> Result<Bilinear, Residue> {
    assert_eq!(t.out_degree, 1);
    let mut groups: BTreeMap<(u8, u8, Coord, [i64; 2]), BTreeMap<i64, Scalar>> = BTreeMap::new();
    for term in t.terms.iter().filter(|x| x.out == 1) {
        let delta = sub(term.a_off, term.b_off);
        let key = (term.a_mask, term.b_mask, delta, [term.b_off[1], term.b_off[2]]);
        *groups.entry(key).or_default().entry(term.b_off[0]).or_default() += &term.coeff;
    }
    let mut out = Vec::new();
    for ((am, bm, delta, sp), poly) in &groups {
        let total: Scalar = poly.values().cloned().sum();
        if !total.is_zero() {
            return Err(Residue { a_mask: *am, b_mask: *bm, delta: *delta, sum: total });
        }
        let (lo, hi) = (*poly.keys().next().unwrap(), *poly.keys().last().unwrap());
        let mut running = Scalar::zero();
        for k in lo..hi {
            if let Some(p) = poly.get(&k) {
                running += p;
            }
            let b_off = [k, sp[0], sp[1]];
            out.push(BiTerm { out: 0, a_mask: *am, a_off: add(b_off, *delta), b_mask: *bm, b_off, coeff: -running.clone() });
        }
    }
    Ok(Bilinear::new(t.a_degree, t.b_degree, 0, out))
}

/// A group whose coefficients do not sum to zero, so no local primitive exists.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Residue {
    pub a_mask: u8,
    pub b_mask: u8,
    pub delta: Coord,
    pub sum: Scalar,
}

fn sub(a: Coord, b: Coord) -> Coord {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn neg_unit(axis: usize) -> Coord {
    let e = unit(axis);
    [-e[0], -e[1], -e[2]]
}
