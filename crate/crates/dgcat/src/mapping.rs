//! The cosimplicial mapping complex `map(V, W)`.
//!
//! An element of degree `n` has one component `pr_{q,c} ∈ [V(c₀), W(c_q)]^{n−q}`
//! per strict chain `c` of length `q`. Absent components are zero; on chains
//! with a repeated object every component is zero by normalization.

use crate::diagram::FiniteDiagram;
use crate::error::DgError;
use crate::poset::{chain_label, face, Chain};
use ghc_homalg::sign::parity;
use ghc_homalg::{internal_hom_differential, GradedMap, GradedSpace, LadderComplex, Scalar, SparseMatrix};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct MappingCochain {
    degree: i64,
    /// Nonzero components only.
    components: BTreeMap<Chain, GradedMap>,
}

impl MappingCochain {
    pub fn zero(degree: i64) -> Self {
        MappingCochain { degree, components: BTreeMap::new() }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// Sets `pr_c`; its degree must be `n − q`.
    pub fn insert(&mut self, chain: Chain, f: GradedMap) -> Result<(), DgError> {
        let expected = self.degree - (chain.len() as i64 - 1);
        if f.degree() != expected {
            return Err(DgError::ComponentDegree { chain, expected, found: f.degree() });
        }
        if f.is_zero() {
            self.components.remove(&chain);
        } else {
            self.components.insert(chain, f);
        }
        Ok(())
    }

    pub fn component(&self, chain: &[usize]) -> Option<&GradedMap> {
        self.components.get(chain)
    }

    pub fn components(&self) -> impl Iterator<Item = (&Chain, &GradedMap)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// A family `η_c ∈ [V(c), W(c)]^n` placed in `q = 0`.
    pub fn from_family(degree: i64, family: Vec<GradedMap>) -> Result<Self, DgError> {
        let mut out = Self::zero(degree);
        for (c, f) in family.into_iter().enumerate() {
            out.insert(vec![c], f)?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.degree);
        for (c, f) in &self.components {
            out.insert(c.clone(), f.scale(s)).unwrap();
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, DgError> {
        if self.degree != other.degree {
            return Err(DgError::DiagramMismatch(format!("degrees {} and {}", self.degree, other.degree)));
        }
        let mut out = self.clone();
        for (c, f) in &other.components {
            let sum = match out.components.get(c) {
                Some(g) => g.add(f)?,
                None => f.clone(),
            };
            out.insert(c.clone(), sum)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, DgError> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    /// Exact equality; a component absent on one side must vanish on the other.
    pub fn equals(&self, other: &Self) -> bool {
        self.degree == other.degree && self.sub(other).is_ok_and(|d| d.is_zero())
    }

    /// `pr_{q,c}(g∘f) = Σ_k (−1)^{k(q−k+|g|)} pr_{q−k,c^{≥k}} g ∘ pr_{k,c^{≤k}} f`.
    pub fn compose(&self, f: &MappingCochain) -> Result<Self, DgError> {
        let n = self.degree;
        let mut acc: BTreeMap<Chain, GradedMap> = BTreeMap::new();
        for (cf, a) in &f.components {
            for (cg, b) in &self.components {
                if cf.last() != cg.first() {
                    continue;
                }
                let k = cf.len() as i64 - 1;
                let q = k + cg.len() as i64 - 1;
                let term = b.compose(a)?.scale(&Scalar::sign(k * (q - k + n)));
                let mut chain = cf.clone();
                chain.extend_from_slice(&cg[1..]);
                let sum = match acc.remove(&chain) {
                    Some(prev) => prev.add(&term)?,
                    None => term,
                };
                acc.insert(chain, sum);
            }
        }
        let mut out = Self::zero(n + f.degree);
        for (c, m) in acc {
            out.insert(c, m)?;
        }
        Ok(out)
    }
}

/// `map(V, W)` for two diagrams over the same poset.
pub struct MappingSpace<'d> {
    source: &'d FiniteDiagram,
    target: &'d FiniteDiagram,
    chains: Vec<Chain>,
}

/// One block of the flattened basis: `pr_{c}` out of source degree `j`.
#[derive(Clone, Debug)]
struct Block {
    chain: usize,
    j: i64,
    rows: usize,
    cols: usize,
}

impl<'d> MappingSpace<'d> {
    pub fn new(source: &'d FiniteDiagram, target: &'d FiniteDiagram) -> Result<Self, DgError> {
        if source.poset() != target.poset() {
            return Err(DgError::DiagramMismatch("diagrams are indexed by different posets".into()));
        }
        Ok(MappingSpace { source, target, chains: source.poset().all_chains() })
    }

    pub fn source(&self) -> &FiniteDiagram {
        self.source
    }

    pub fn target(&self) -> &FiniteDiagram {
        self.target
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    fn ends(&self, c: &[usize]) -> (&LadderComplex, &LadderComplex) {
        (self.source.value(c[0]), self.target.value(*c.last().unwrap()))
    }

    /// The zero element of `[V(c₀), W(c_q)]^p`.
    pub fn zero_component(&self, c: &[usize], p: i64) -> GradedMap {
        let (v, w) = self.ends(c);
        GradedMap::zero(v.space(), w.space(), p)
    }

    /// Identity natural transformation of `V` (requires `V = W`).
    pub fn identity(&self) -> MappingCochain {
        let family = (0..self.source.poset().len()).map(|c| self.source.arrow(c, c)).collect();
        MappingCochain::from_family(0, family).unwrap()
    }

    /// `pr_c(δη)` on any chain, degenerate ones included.
    ///
    /// `δ_h` uses the cofaces: `d⁰` precomposes with `V(γ₀)`, `d^q` postcomposes
    /// with `W(γ_{q−1})`, the inner ones drop an object; `pr_q δ_h = Σ (−1)^k d^{q−k} pr_{q−1}`.
    /// `δ_v` is `(−1)^q ∂` componentwise.
    pub fn differential_at(&self, eta: &MappingCochain, c: &[usize]) -> Result<GradedMap, DgError> {
        let q = c.len() - 1;
        let n = eta.degree();
        let mut out = self.zero_component(c, n + 1 - q as i64);
        let comp = |ch: &[usize]| eta.component(ch);
        if q >= 1 {
            for j in 0..=q {
                let s = Scalar::from_int(parity((q - j) as i64));
                let term = if j == 0 {
                    comp(&c[1..]).map(|f| f.compose(&self.source.arrow(c[0], c[1]))).transpose()?
                } else if j == q {
                    comp(&c[..q]).map(|f| self.target.arrow(c[q - 1], c[q]).compose(f)).transpose()?
                } else {
                    comp(&face(c, j)).cloned()
                };
                if let Some(t) = term {
                    out = out.add_scaled(&t, &s)?;
                }
            }
        }
        if let Some(f) = comp(c) {
            let (v, w) = self.ends(c);
            let d = internal_hom_differential(f, v, w)?;
            out = out.add_scaled(&d, &Scalar::from_int(parity(q as i64)))?;
        }
        Ok(out)
    }

    /// `δ = δ_h + δ_v`.
    pub fn differential(&self, eta: &MappingCochain) -> Result<MappingCochain, DgError> {
        let mut out = MappingCochain::zero(eta.degree() + 1);
        for c in &self.chains {
            out.insert(c.clone(), self.differential_at(eta, c)?)?;
        }
        Ok(out)
    }

    /// The naturality defect `W(γ)∘η_a − η_b∘V(γ)` of the `q = 0` part along `a < b`.
    pub fn naturality_defect(&self, eta: &MappingCochain, a: usize, b: usize) -> Result<GradedMap, DgError> {
        let zero = |x: usize| self.zero_component(&[x], eta.degree());
        let ea = eta.component(&[a]).cloned().unwrap_or_else(|| zero(a));
        let eb = eta.component(&[b]).cloned().unwrap_or_else(|| zero(b));
        let left = self.target.arrow(a, b).compose(&ea)?;
        let right = eb.compose(&self.source.arrow(a, b))?;
        Ok(left.sub(&right)?)
    }

    fn layout(&self, n: i64) -> Vec<Block> {
        let mut out = Vec::new();
        for (i, c) in self.chains.iter().enumerate() {
            let p = n - (c.len() as i64 - 1);
            let (v, w) = self.ends(c);
            for j in v.space().degrees() {
                let (rows, cols) = (w.dim(j + p), v.dim(j));
                if rows * cols > 0 {
                    out.push(Block { chain: i, j, rows, cols });
                }
            }
        }
        out
    }

    /// Total degrees where `map(V, W)` can be nonzero.
    pub fn degree_range(&self) -> std::ops::RangeInclusive<i64> {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for c in &self.chains {
            let q = c.len() as i64 - 1;
            let (v, w) = self.ends(c);
            lo = lo.min(w.space().lo() - (v.space().hi() - 1) + q);
            hi = hi.max(w.space().hi() - 1 - v.space().lo() + q);
        }
        lo..=hi
    }

    pub fn dim(&self, n: i64) -> usize {
        self.layout(n).iter().map(|b| b.rows * b.cols).sum()
    }

    /// Coordinates in the basis of row-major block entries.
    pub fn to_vector(&self, eta: &MappingCochain) -> Vec<Scalar> {
        let mut out = Vec::new();
        for b in self.layout(eta.degree()) {
            let mut dense = vec![Scalar::zero(); b.rows * b.cols];
            if let Some(f) = eta.component(&self.chains[b.chain]) {
                for (r, c, x) in f.block(b.j).triplets() {
                    dense[r * b.cols + c] = x.clone();
                }
            }
            out.extend(dense);
        }
        out
    }

    pub fn from_vector(&self, n: i64, x: &[Scalar]) -> MappingCochain {
        let mut blocks: BTreeMap<usize, BTreeMap<i64, SparseMatrix>> = BTreeMap::new();
        let mut off = 0;
        for b in self.layout(n) {
            let entries = (0..b.rows * b.cols)
                .filter(|k| !x[off + k].is_zero())
                .map(|k| (k / b.cols, k % b.cols, x[off + k].clone()));
            blocks.entry(b.chain).or_default().insert(b.j, SparseMatrix::from_triplets(b.rows, b.cols, entries));
            off += b.rows * b.cols;
        }
        assert_eq!(off, x.len(), "vector length does not match map^{n}");
        let mut out = MappingCochain::zero(n);
        for (i, bl) in blocks {
            let c = &self.chains[i];
            let (v, w) = self.ends(c);
            let f = GradedMap::new(v.space(), w.space(), n - (c.len() as i64 - 1), bl).expect("layout shapes");
            out.insert(c.clone(), f).unwrap();
        }
        out
    }

    /// `map(V, W)` as a finite complex, `δ` assembled column by column.
    pub fn complex(&self) -> Result<LadderComplex, DgError> {
        let range = self.degree_range();
        let lo = *range.start();
        let mut bases = Vec::new();
        for n in range.clone() {
            let mut labels = Vec::new();
            for b in self.layout(n) {
                let c = chain_label(&self.chains[b.chain]);
                for r in 0..b.rows {
                    for k in 0..b.cols {
                        labels.push(format!("{c}:{}:{r},{k}", b.j));
                    }
                }
            }
            bases.push(labels);
        }
        let space = GradedSpace::new(lo, bases);
        let mut blocks = BTreeMap::new();
        for n in range {
            let dim = space.dim(n);
            let mut cols = Vec::with_capacity(dim);
            for k in 0..dim {
                let mut e = vec![Scalar::zero(); dim];
                e[k] = Scalar::one();
                let d = self.differential(&self.from_vector(n, &e))?;
                cols.push(self.to_vector(&d));
            }
            blocks.insert(n, SparseMatrix::from_columns(space.dim(n + 1), &cols));
        }
        let q = GradedMap::new(&space, &space, 1, blocks)?;
        Ok(LadderComplex::new(space, q)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;
    use crate::random::{random_cochain, random_diagram, DiagramShape};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn delta_squares_to_zero_over_a_diamond(seed in any::<u64>(), n in -1i64..=1) {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let p = Poset::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
            let v = random_diagram(&mut r, p.clone(), &DiagramShape::default());
            let w = random_diagram(&mut r, p, &DiagramShape::default());
            let s = MappingSpace::new(&v, &w).unwrap();
            let eta = random_cochain(&mut r, &s, n, 0.5);
            prop_assert!(s.differential(&s.differential(&eta).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn components_must_match_the_total_degree() {
        let f = GradedMap::zero(&GradedSpace::from_dims(0, &[1]), &GradedSpace::from_dims(0, &[1]), 0);
        let mut eta = MappingCochain::zero(1);
        assert!(eta.insert(vec![0], f.clone()).is_err());
        assert!(eta.insert(vec![0, 1], f).is_ok());
    }
}
