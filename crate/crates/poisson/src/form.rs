//! Bilinear forms `V ⊗ V → R` on a finite graded space, one matrix per degree pair.
//!
//! Entry `(i, j)` of block `(a, b)` is `f(e_i ⊗ e_j)` with `e_i` of degree `a`
//! and `e_j` of degree `b`. A form of degree `k` has blocks only where `a + b = −k`.

use ghc_homalg::json::Triplet;
use ghc_homalg::{EntryMismatch, GradedMap, GradedSpace, LadderComplex, Scalar, SparseMatrix};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct BilinearForm {
    space: GradedSpace,
    degree: i64,
    blocks: BTreeMap<(i64, i64), SparseMatrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormTriplets {
    pub form_degree: i64,
    pub entries: Vec<Triplet>,
}

impl BilinearForm {
    pub fn zero(space: &GradedSpace, degree: i64) -> Self {
        BilinearForm { space: space.clone(), degree, blocks: BTreeMap::new() }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Degree pairs `(a, b)` of the space with `a + b = −k`.
    pub fn pairs(&self) -> Vec<(i64, i64)> {
        pairs_of(&self.space, self.degree)
    }

    pub fn insert(&mut self, a: i64, b: i64, m: SparseMatrix) {
        assert_eq!(a + b, -self.degree, "block ({a}, {b}) does not match form degree {}", self.degree);
        assert_eq!(m.shape(), (self.space.dim(a), self.space.dim(b)), "block ({a}, {b}) has wrong shape");
        if m.is_zero() {
            self.blocks.remove(&(a, b));
        } else {
            self.blocks.insert((a, b), m);
        }
    }

    pub fn block(&self, a: i64, b: i64) -> SparseMatrix {
        self.blocks.get(&(a, b)).cloned().unwrap_or_else(|| SparseMatrix::zeros(self.space.dim(a), self.space.dim(b)))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.blocks.values().map(SparseMatrix::nnz).sum()
    }

    /// `f(x ⊗ y)` for homogeneous `x` of degree `a` and `y` of degree `b`.
    pub fn eval(&self, a: i64, x: &[Scalar], b: i64, y: &[Scalar]) -> Scalar {
        match self.blocks.get(&(a, b)) {
            Some(m) => m.mul_vec(y).iter().zip(x).map(|(u, v)| u * v).sum(),
            None => Scalar::zero(),
        }
    }

    fn map_blocks(&self, f: impl Fn(&SparseMatrix) -> SparseMatrix) -> Self {
        BilinearForm { space: self.space.clone(), degree: self.degree, blocks: self.blocks.iter().map(|(k, m)| (*k, f(m))).filter(|(_, m)| !m.is_zero()).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map_blocks(|m| m.scale(s))
    }

    pub fn neg(&self) -> Self {
        self.map_blocks(SparseMatrix::neg)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let mut out = self.clone();
        for (&(a, b), m) in &other.blocks {
            out.insert(a, b, out.block(a, b).add(m));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn assert_compatible(&self, other: &Self) {
        assert!(self.space.same_shape(&other.space), "forms live on different spaces");
        assert_eq!(self.degree, other.degree, "forms have different degrees");
    }

    /// `f ∘ γ`, with `γ(x ⊗ y) = (−1)^{|x||y|} y ⊗ x`.
    pub fn swap(&self) -> Self {
        let mut out = BilinearForm::zero(&self.space, self.degree);
        for (&(a, b), m) in &self.blocks {
            out.insert(b, a, m.transpose().scale(&Scalar::sign(a * b)));
        }
        out
    }

    /// `asym(f) = ½(f − f∘γ)`.
    pub fn asym(&self) -> Self {
        self.sub(&self.swap()).scale(&Scalar::new(1, 2))
    }

    /// `∂f = −(−1)^k f ∘ d_⊗` for the differential `d` of `v`, with
    /// `d_⊗(x ⊗ y) = dx ⊗ y + (−1)^{|x|} x ⊗ dy`.
    pub fn boundary(&self, v: &LadderComplex) -> Self {
        assert!(v.space().same_shape(&self.space), "complex does not carry the form");
        let mut out = BilinearForm::zero(&self.space, self.degree + 1);
        let s = Scalar::sign(self.degree + 1);
        for (a, b) in out.pairs() {
            let left = v.differential(a).transpose().mul(&self.block(a + 1, b));
            let right = self.block(a, b + 1).mul(&v.differential(b)).scale(&Scalar::sign(a));
            out.insert(a, b, left.add(&right).scale(&s));
        }
        out
    }

    /// `f ∘ (g ⊗ h)`, with `(g ⊗ h)(x ⊗ y) = (−1)^{|h||x|} gx ⊗ hy`.
    pub fn precompose(&self, g: &GradedMap, h: &GradedMap) -> Self {
        assert!(g.dom().same_shape(h.dom()), "maps have different domains");
        assert!(g.cod().same_shape(&self.space) && h.cod().same_shape(&self.space), "maps do not land in the form's space");
        let (p, q) = (g.degree(), h.degree());
        let mut out = BilinearForm::zero(g.dom(), self.degree + p + q);
        for (a, b) in out.pairs() {
            let inner = match self.blocks.get(&(a + p, b + q)) {
                Some(m) => m,
                None => continue,
            };
            let m = g.block(a).transpose().mul(inner).mul(&h.block(b)).scale(&Scalar::sign(q * a));
            out.insert(a, b, m);
        }
        out
    }

    /// `f ∘ (g ⊗ g)`.
    pub fn pullback(&self, g: &GradedMap) -> Self {
        self.precompose(g, g)
    }

    pub fn first_mismatch(&self, other: &Self) -> Option<(i64, i64, EntryMismatch)> {
        self.assert_compatible(other);
        self.pairs().into_iter().find_map(|(a, b)| self.block(a, b).first_mismatch(&other.block(a, b)).map(|e| (a, b, e)))
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.first_mismatch(other).is_none()
    }

    /// `f∘γ = −f`, or the first entry where it fails.
    pub fn antisymmetry_defect(&self) -> Option<(i64, i64, EntryMismatch)> {
        self.swap().neg().first_mismatch(self)
    }

    /// A JSON witness for a mismatch, with basis labels.
    pub fn describe(&self, m: &(i64, i64, EntryMismatch)) -> Value {
        let (a, b, e) = m;
        json!({
            "degrees": [a, b],
            "left_basis": self.space.label(*a, e.row),
            "right_basis": self.space.label(*b, e.col),
            "lhs": e.left,
            "rhs": e.right,
        })
    }

    pub fn to_triplets(&self) -> FormTriplets {
        let mut entries = Vec::new();
        for (&(a, b), m) in &self.blocks {
            for (i, j, v) in m.triplets() {
                entries.push(Triplet {
                    degree: a,
                    row: self.space.label(a, i).to_string(),
                    col: self.space.label(b, j).to_string(),
                    numerator: v.numer().to_string(),
                    denominator: v.denom().to_string(),
                });
            }
        }
        FormTriplets { form_degree: self.degree, entries }
    }
}

fn pairs_of(space: &GradedSpace, degree: i64) -> Vec<(i64, i64)> {
    space.degrees().filter_map(|a| {
        let b = -degree - a;
        (space.degrees().contains(&b) && space.dim(a) > 0 && space.dim(b) > 0).then_some((a, b))
    }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ghc_homalg::complex::shift;
    use proptest::prelude::*;

    fn space() -> GradedSpace {
        GradedSpace::from_dims(-1, &[2, 3, 2])
    }

    fn complex() -> LadderComplex {
        let d0 = SparseMatrix::from_dense(3, 2, &[vec![1.into(), 0.into()], vec![0.into(), 1.into()], vec![1.into(), 1.into()]]);
        let d1 = SparseMatrix::from_dense(2, 3, &[vec![1.into(), 1.into(), Scalar::from_int(-1)], vec![0.into(), 0.into(), 0.into()]]);
        LadderComplex::from_blocks(space(), vec![d0, d1]).unwrap()
    }

    fn form(degree: i64, entries: &[i64]) -> BilinearForm {
        let mut f = BilinearForm::zero(&space(), degree);
        let mut it = entries.iter().cycle();
        for (a, b) in f.pairs() {
            let (r, c) = (space().dim(a), space().dim(b));
            let data: Vec<Vec<Scalar>> = (0..r).map(|_| (0..c).map(|_| Scalar::from_int(*it.next().unwrap())).collect()).collect();
            f.insert(a, b, SparseMatrix::from_dense(r, c, &data));
        }
        f
    }

    proptest! {
        #[test]
        fn asym_is_an_antisymmetric_projection(k in -1i64..=1, e in prop::collection::vec(-3i64..=3, 1..40)) {
            let f = form(k, &e);
            let g = f.asym();
            prop_assert!(g.antisymmetry_defect().is_none());
            prop_assert!(g.asym().equals(&g));
            prop_assert!(f.swap().swap().equals(&f));
        }

        #[test]
        fn boundary_squares_to_zero_and_commutes_with_swap(k in -1i64..=1, e in prop::collection::vec(-3i64..=3, 1..40)) {
            let v = complex();
            let f = form(k, &e);
            prop_assert!(f.boundary(&v).boundary(&v).is_zero());
            prop_assert!(f.boundary(&v).swap().equals(&f.swap().boundary(&v)));
        }

        #[test]
        fn boundary_of_a_pullback_along_a_cochain_map(s in -3i64..=3, e in prop::collection::vec(-3i64..=3, 1..40)) {
            let v = complex();
            let w = shift(&shift(&v, 1), -1);
            let g = ghc_homalg::identity_of(&w).scale(&Scalar::from_int(s));
            let f = form(-1, &e);
            prop_assert!(f.pullback(&g).boundary(&w).equals(&f.boundary(&v).pullback(&g)));
        }
    }

    #[test]
    fn eval_reads_the_block_entry() {
        let f = form(0, &[1, -2, 3, 0, 2]);
        let x = vec![Scalar::zero(), Scalar::one(), Scalar::zero()];
        let y = vec![Scalar::zero(), Scalar::zero(), Scalar::one()];
        assert_eq!(f.eval(0, &x, 0, &y), f.block(0, 0).get(1, 2));
        assert_eq!(f.eval(1, &x[..2], 1, &y[..2]), Scalar::zero());
    }
}
