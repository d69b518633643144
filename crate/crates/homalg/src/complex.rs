//! Cochain complexes, the internal-hom differential, shifts, cones and cohomology.

use crate::error::HomalgError;
use crate::graded::{CausalClass, GradedMap, GradedSpace};
use crate::matrix::SparseMatrix;
use crate::rank::{rank_exact, rank_modp};
use crate::scalar::Scalar;
use crate::sign;
use std::collections::{BTreeMap, HashMap};

/// A finite graded space with a degree +1 differential squaring to zero.
#[derive(Clone, Debug)]
pub struct LadderComplex {
    space: GradedSpace,
    q: GradedMap,
}

impl LadderComplex {
    pub fn new(space: GradedSpace, q: GradedMap) -> Result<Self, HomalgError> {
        if q.degree() != 1 {
            return Err(HomalgError::Degree { expected: 1, found: q.degree() });
        }
        if !q.dom().same_shape(&space) || !q.cod().same_shape(&space) {
            return Err(HomalgError::SpaceMismatch("differential does not act on the space".into()));
        }
        let qq = q.compose(&q)?;
        if let Some(n) = qq.nonzero_degrees().next() {
            return Err(HomalgError::NotDifferential(n));
        }
        Ok(LadderComplex { space, q })
    }

    /// Complex with zero differential.
    pub fn trivial(space: GradedSpace) -> Self {
        let q = GradedMap::zero(&space, &space, 1);
        LadderComplex { space, q }
    }

    /// Builds from the list of differential blocks `Q^lo, Q^{lo+1}, ...`.
    pub fn from_blocks(space: GradedSpace, blocks: Vec<SparseMatrix>) -> Result<Self, HomalgError> {
        let lo = space.lo();
        let map = blocks.into_iter().enumerate().map(|(i, m)| (lo + i as i64, m)).collect();
        let q = GradedMap::new(&space, &space, 1, map)?;
        Self::new(space, q)
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn q(&self) -> &GradedMap {
        &self.q
    }

    pub fn dim(&self, n: i64) -> usize {
        self.space.dim(n)
    }

    pub fn differential(&self, n: i64) -> SparseMatrix {
        self.q.block(n)
    }
}

fn check_maps(f: &GradedMap, v: &LadderComplex, w: &LadderComplex) -> Result<(), HomalgError> {
    if !f.dom().same_shape(v.space()) || !f.cod().same_shape(w.space()) {
        return Err(HomalgError::SpaceMismatch("map does not go between the given complexes".into()));
    }
    Ok(())
}

/// `∂f = Q_W ∘ f - (-1)^{|f|} f ∘ Q_V`.
pub fn internal_hom_differential(f: &GradedMap, v: &LadderComplex, w: &LadderComplex) -> Result<GradedMap, HomalgError> {
    check_maps(f, v, w)?;
    let left = w.q().compose(f)?;
    let right = f.compose(v.q())?;
    let mut out = left.add_scaled(&right, &Scalar::from_int(sign::hom_differential(f.degree())))?;
    out.causal_class = f.causal_class;
    out.support_radius = match (f.support_radius, v.q().support_radius.max(w.q().support_radius)) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    };
    Ok(out)
}

pub fn is_cochain_map(f: &GradedMap, v: &LadderComplex, w: &LadderComplex) -> Result<bool, HomalgError> {
    Ok(internal_hom_differential(f, v, w)?.is_zero())
}

/// `V[p]` with `Q_{V[p]}^n = (-1)^p Q_V^{n+p}`.
pub fn shift(v: &LadderComplex, p: i64) -> LadderComplex {
    let q = v.q().reindex(p, p).scale(&Scalar::from_int(sign::shift(p)));
    LadderComplex { space: v.space().shift(p), q }
}

/// Cone of a degree-0 cochain map `f: V -> W`: `cone^n = V^n ⊕ W^{n-1}`,
/// `d(v, w) = (Q_V v, f v - Q_W w)`.
pub fn cone(f: &GradedMap, v: &LadderComplex, w: &LadderComplex) -> Result<LadderComplex, HomalgError> {
    if f.degree() != 0 {
        return Err(HomalgError::Degree { expected: 0, found: f.degree() });
    }
    let df = internal_hom_differential(f, v, w)?;
    if let Some(n) = df.nonzero_degrees().next() {
        return Err(HomalgError::NotCochainMap(n));
    }
    let ws = w.space().shift(-1);
    let space = v.space().direct_sum(&ws, ("V", "W"));
    let mut blocks = BTreeMap::new();
    for n in space.degrees() {
        let rs = [v.dim(n + 1), w.dim(n)];
        let cs = [v.dim(n), w.dim(n - 1)];
        let qv = v.differential(n);
        let fv = f.block(n);
        let qw = w.differential(n - 1).neg();
        let m = SparseMatrix::assemble(&rs, &cs, &[(0, 0, &qv), (1, 0, &fv), (1, 1, &qw)]);
        blocks.insert(n, m);
    }
    let q = GradedMap::new(&space, &space, 1, blocks)?;
    LadderComplex::new(space, q)
}

/// How a cohomology dimension was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMethod {
    /// Mod-p ranks already saturate the dimension, which forces vanishing.
    ModularCertificate,
    Exact,
}

/// `dim H^n = dim V^n - rank Q^n - rank Q^{n-1}` for every stored degree.
pub fn cohomology_dims(v: &LadderComplex) -> BTreeMap<i64, usize> {
    cohomology_with_method(v).into_iter().map(|(n, (h, _))| (n, h)).collect()
}

/// As `cohomology_dims`, also reporting which rank path settled each degree.
///
/// Ranks mod p bound rational ranks from below while `Q² = 0` bounds their
/// sum by the dimension, so saturation mod p is an exact certificate of
/// vanishing. Other degrees fall back to exact elimination.
pub fn cohomology_with_method(v: &LadderComplex) -> BTreeMap<i64, (usize, RankMethod)> {
    let degs: Vec<i64> = v.space().degrees().collect();
    let mut modular: HashMap<i64, Option<usize>> = HashMap::new();
    let mut exact: HashMap<i64, usize> = HashMap::new();
    let mut out = BTreeMap::new();
    for &n in &degs {
        for k in [n - 1, n] {
            modular.entry(k).or_insert_with(|| rank_modp(&v.differential(k)));
        }
        let dim = v.dim(n);
        if let (Some(a), Some(b)) = (modular[&n], modular[&(n - 1)]) {
            if a + b == dim {
                out.insert(n, (0, RankMethod::ModularCertificate));
                continue;
            }
        }
        for k in [n - 1, n] {
            exact.entry(k).or_insert_with(|| rank_exact(&v.differential(k)));
        }
        out.insert(n, (dim - exact[&n] - exact[&(n - 1)], RankMethod::Exact));
    }
    out
}

/// Cohomology using only exact elimination.
pub fn cohomology_dims_exact(v: &LadderComplex) -> BTreeMap<i64, usize> {
    v.space()
        .degrees()
        .map(|n| (n, v.dim(n) - rank_exact(&v.differential(n)) - rank_exact(&v.differential(n - 1))))
        .collect()
}

pub fn is_acyclic(v: &LadderComplex) -> bool {
    cohomology_dims(v).values().all(|&h| h == 0)
}

/// True iff `∂h = g - f` exactly.
pub fn check_homotopy(f: &GradedMap, g: &GradedMap, h: &GradedMap, v: &LadderComplex, w: &LadderComplex) -> Result<bool, HomalgError> {
    if h.degree() != f.degree() - 1 || f.degree() != g.degree() {
        return Err(HomalgError::Degree { expected: f.degree() - 1, found: h.degree() });
    }
    let dh = internal_hom_differential(h, v, w)?;
    Ok(dh.equals(&g.sub(f)?))
}

/// The identity of `V` viewed as a local map.
pub fn identity_of(v: &LadderComplex) -> GradedMap {
    GradedMap::identity(v.space()).with_class(CausalClass::Local, Some(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    /// `K --id--> K` in degrees 0, 1.
    fn id_two_term(k: usize) -> LadderComplex {
        let space = GradedSpace::from_dims(0, &[k, k]);
        LadderComplex::from_blocks(space, vec![SparseMatrix::identity(k)]).unwrap()
    }

    fn torus_de_rham(n: usize) -> LadderComplex {
        // vertices (i,j); edges x then y; faces
        let v = |i: usize, j: usize| (i % n) * n + (j % n);
        let nn = n * n;
        let mut d0 = Vec::new();
        let mut d1 = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let ex = v(i, j);
                let ey = nn + v(i, j);
                d0.push((ex, v(i + 1, j), s(1)));
                d0.push((ex, v(i, j), s(-1)));
                d0.push((ey, v(i, j + 1), s(1)));
                d0.push((ey, v(i, j), s(-1)));
                let f = v(i, j);
                d1.push((f, nn + v(i + 1, j), s(1)));
                d1.push((f, nn + v(i, j), s(-1)));
                d1.push((f, v(i, j + 1), s(-1)));
                d1.push((f, v(i, j), s(1)));
            }
        }
        let space = GradedSpace::from_dims(0, &[nn, 2 * nn, nn]);
        LadderComplex::from_blocks(
            space,
            vec![SparseMatrix::from_triplets(2 * nn, nn, d0), SparseMatrix::from_triplets(nn, 2 * nn, d1)],
        )
        .unwrap()
    }

    fn random_map(rng: &mut ChaCha8Rng, dom: &GradedSpace, cod: &GradedSpace, deg: i64) -> GradedMap {
        let mut blocks = BTreeMap::new();
        for n in dom.degrees() {
            let (r, c) = (cod.dim(n + deg), dom.dim(n));
            let e: Vec<_> = (0..r)
                .flat_map(|i| (0..c).map(move |j| (i, j)))
                .filter_map(|(i, j)| if rng.gen_bool(0.4) { Some((i, j, s(rng.gen_range(-3..4)))) } else { None })
                .collect();
            blocks.insert(n, SparseMatrix::from_triplets(r, c, e));
        }
        GradedMap::new(dom, cod, deg, blocks).unwrap()
    }

    #[test]
    fn zero_complex_has_no_cohomology() {
        let z = LadderComplex::trivial(GradedSpace::from_dims(0, &[0, 0]));
        assert!(cohomology_dims(&z).values().all(|&h| h == 0));
    }

    #[test]
    fn identity_two_term_is_acyclic() {
        assert!(is_acyclic(&id_two_term(3)));
    }

    #[test]
    fn torus_betti_numbers() {
        let c = torus_de_rham(4);
        let dims: Vec<usize> = cohomology_dims(&c).values().copied().collect();
        assert_eq!(dims, vec![1, 2, 1]);
        assert_eq!(cohomology_dims_exact(&c), cohomology_dims(&c));
    }

    #[test]
    fn non_differential_is_rejected() {
        let space = GradedSpace::from_dims(0, &[1, 1, 1]);
        let r = LadderComplex::from_blocks(space, vec![SparseMatrix::identity(1), SparseMatrix::identity(1)]);
        assert_eq!(r.unwrap_err(), HomalgError::NotDifferential(0));
    }

    #[test]
    fn differential_of_identity_and_q() {
        let c = torus_de_rham(4);
        assert!(internal_hom_differential(&identity_of(&c), &c, &c).unwrap().is_zero());
        assert!(internal_hom_differential(c.q(), &c, &c).unwrap().is_zero());
    }

    #[test]
    fn differential_squares_to_zero_on_random_maps() {
        let c = torus_de_rham(4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for deg in [-2, -1, 0, 1] {
            let f = random_map(&mut rng, c.space(), c.space(), deg);
            let df = internal_hom_differential(&f, &c, &c).unwrap();
            assert!(internal_hom_differential(&df, &c, &c).unwrap().is_zero());
        }
    }

    #[test]
    fn degree_minus_one_differential_is_anticommutator() {
        let c = torus_de_rham(4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_map(&mut rng, c.space(), c.space(), -1);
        let df = internal_hom_differential(&h, &c, &c).unwrap();
        let direct = c.q().compose(&h).unwrap().add(&h.compose(c.q()).unwrap()).unwrap();
        assert!(df.equals(&direct));
    }

    #[test]
    fn shift_laws() {
        let c = torus_de_rham(4);
        let s0 = shift(&c, 0);
        assert!(s0.q().equals(c.q()));
        let back = shift(&shift(&c, 1), -1);
        assert_eq!(back.space(), c.space());
        assert!(back.q().equals(c.q()));
        let s1 = shift(&c, 1);
        assert_eq!(s1.differential(-1), c.differential(0).neg());
        let s12 = shift(&shift(&c, 1), 2);
        let s3 = shift(&c, 3);
        assert!(s12.q().equals(s3.q()));
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = torus_de_rham(3);
        let k = cone(&identity_of(&c), &c, &c).unwrap();
        assert!(is_acyclic(&k));
    }

    #[test]
    fn cone_of_zero_from_zero_is_shifted_target() {
        let c = torus_de_rham(3);
        let zero_space = GradedSpace::zero();
        let z = LadderComplex::trivial(zero_space.clone());
        let f = GradedMap::zero(&zero_space, c.space(), 0);
        let k = cone(&f, &z, &c).unwrap();
        let shifted = shift(&c, -1);
        assert!(k.space().same_shape(shifted.space()));
        assert_eq!(cohomology_dims(&k), cohomology_dims(&shifted));
    }

    #[test]
    fn cone_of_zero_map_adds_cohomology() {
        let c = torus_de_rham(3);
        let f = GradedMap::zero(c.space(), c.space(), 0);
        let k = cone(&f, &c, &c).unwrap();
        let h = cohomology_dims(&k);
        // H(cone) = H(V) ⊕ H(W)[-1]
        assert_eq!(h.get(&0), Some(&1));
        assert_eq!(h.get(&1), Some(&3));
        assert_eq!(h.get(&2), Some(&3));
        assert_eq!(h.get(&3), Some(&1));
    }

    #[test]
    fn non_cochain_map_is_rejected_by_cone() {
        let c = torus_de_rham(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_map(&mut rng, c.space(), c.space(), 0);
        assert!(matches!(cone(&f, &c, &c), Err(HomalgError::NotCochainMap(_))));
    }

    #[test]
    fn contracting_homotopy_of_identity_complex() {
        let c = id_two_term(3);
        let id = identity_of(&c);
        let zero = GradedMap::zero(c.space(), c.space(), 0);
        let mut blocks = BTreeMap::new();
        blocks.insert(1, SparseMatrix::identity(3));
        let h = GradedMap::new(c.space(), c.space(), -1, blocks).unwrap();
        // ∂h = Qh + hQ = id, so h is a homotopy from 0 to id
        assert!(check_homotopy(&zero, &id, &h, &c, &c).unwrap());
        assert!(check_homotopy(&id, &id, &GradedMap::zero(c.space(), c.space(), -1), &c, &c).unwrap());
        let mut bad = BTreeMap::new();
        bad.insert(1, SparseMatrix::identity(3).add(&SparseMatrix::from_triplets(3, 3, vec![(0, 2, s(1))])));
        let hb = GradedMap::new(c.space(), c.space(), -1, bad).unwrap();
        assert!(!check_homotopy(&zero, &id, &hb, &c, &c).unwrap());
    }

    #[test]
    fn modular_certificate_used_for_acyclic() {
        let m = cohomology_with_method(&id_two_term(4));
        assert!(m.values().all(|&(h, how)| h == 0 && how == RankMethod::ModularCertificate));
    }
}
