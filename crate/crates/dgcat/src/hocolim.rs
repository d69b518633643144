//! Homotopy colimits as total complexes of the simplicial replacement.
//!
//! `hocolim^n = ⊕_{q, c} V(c₀)^{n+q}` over strict chains `c` of length `q`,
//! with `d = −d_h + d_v`: `d_h ι_{q,c} = Σ_k (−1)^k ι_{q−1,c∘k̂} d_k`, where `d₀`
//! applies `V(γ₀)` and the other faces are identities, and
//! `d_v ι_{q,c} = (−1)^q ι_{q,c} Q`.

use crate::diagram::FiniteDiagram;
use crate::error::DgError;
use crate::mapping::MappingCochain;
use crate::poset::{chain_label, face, Chain};
use ghc_homalg::sign::parity;
use ghc_homalg::{GradedMap, GradedSpace, LadderComplex, Scalar, SparseMatrix};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct HocolimComplex {
    complex: LadderComplex,
    chains: Vec<Chain>,
    /// Source value per chain, `V(c₀)`.
    heads: Vec<GradedSpace>,
    /// Offset of `ι_{q,c}` inside the degree-`n` basis, keyed by `(n, chain index)`.
    offsets: BTreeMap<(i64, usize), usize>,
}

fn q_of(c: &[usize]) -> i64 {
    c.len() as i64 - 1
}

impl HocolimComplex {
    pub fn new(v: &FiniteDiagram) -> Result<Self, DgError> {
        let chains = v.poset().all_chains();
        let heads: Vec<GradedSpace> = chains.iter().map(|c| v.value(c[0]).space().clone()).collect();
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for (c, s) in chains.iter().zip(&heads) {
            if s.total_dim() > 0 {
                lo = lo.min(s.lo() - q_of(c));
                hi = hi.max(s.hi() - q_of(c));
            }
        }
        if lo > hi {
            (lo, hi) = (0, 0);
        }
        let mut offsets = BTreeMap::new();
        let mut bases = Vec::new();
        for n in lo..hi {
            let mut labels = Vec::new();
            for (i, (c, s)) in chains.iter().zip(&heads).enumerate() {
                offsets.insert((n, i), labels.len());
                if let Some(b) = s.basis(n + q_of(c)) {
                    let tag = chain_label(c);
                    labels.extend(b.iter().map(|l| format!("{tag}|{l}")));
                }
            }
            bases.push(labels);
        }
        let space = GradedSpace::new(lo, bases);
        let index: BTreeMap<&Chain, usize> = chains.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut blocks = BTreeMap::new();
        for n in lo..hi {
            let mut entries = Vec::new();
            for (i, c) in chains.iter().enumerate() {
                let q = q_of(c);
                let col0 = offsets[&(n, i)];
                let place = |m: &SparseMatrix, target: usize, s: i64, entries: &mut Vec<(usize, usize, Scalar)>| {
                    if let Some(&row0) = offsets.get(&(n + 1, target)) {
                        for (r, k, x) in m.triplets() {
                            entries.push((row0 + r, col0 + k, x * &Scalar::from_int(s)));
                        }
                    }
                };
                // −d_h
                for k in (0..c.len()).filter(|_| q >= 1) {
                    let target = index[&face(c, k)];
                    let m = if k == 0 {
                        v.arrow(c[0], c[1]).block(n + q)
                    } else {
                        SparseMatrix::identity(v.value(c[0]).dim(n + q))
                    };
                    place(&m, target, -parity(k as i64), &mut entries);
                }
                // d_v
                place(&v.value(c[0]).differential(n + q), i, parity(q), &mut entries);
            }
            blocks.insert(n, SparseMatrix::from_triplets(space.dim(n + 1), space.dim(n), entries));
        }
        let q = GradedMap::new(&space, &space, 1, blocks)?;
        let complex = LadderComplex::new(space, q)?;
        Ok(HocolimComplex { complex, chains, heads, offsets })
    }

    pub fn complex(&self) -> &LadderComplex {
        &self.complex
    }

    pub fn space(&self) -> &GradedSpace {
        self.complex.space()
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    fn chain_index(&self, c: &[usize]) -> usize {
        self.chains.iter().position(|x| x == c).unwrap_or_else(|| panic!("{c:?} is not a strict chain"))
    }

    /// `ι_{q,c}: V(c₀) → hocolim`, of degree `−q`.
    pub fn injection(&self, c: &[usize]) -> GradedMap {
        let i = self.chain_index(c);
        let q = q_of(c);
        let head = &self.heads[i];
        let blocks = head
            .degrees()
            .filter_map(|j| {
                let off = *self.offsets.get(&(j - q, i))?;
                let d = head.dim(j);
                let m = SparseMatrix::from_triplets(self.space().dim(j - q), d, (0..d).map(|k| (off + k, k, Scalar::one())));
                Some((j, m))
            })
            .collect();
        GradedMap::new(head, self.space(), -q, blocks).expect("injection shapes")
    }

    /// Builds a map out of `hocolim` from its restriction to each `ι_{q,c}`:
    /// `part(c, n)` is the block on `V(c₀)^{n+q}` landing in `cod^{n+degree}`.
    fn assemble(&self, cod: &GradedSpace, degree: i64, part: impl Fn(usize, i64) -> Option<SparseMatrix>) -> GradedMap {
        let mut blocks = BTreeMap::new();
        for n in self.space().degrees() {
            let mut entries = Vec::new();
            for i in 0..self.chains.len() {
                let col0 = self.offsets[&(n, i)];
                if let Some(m) = part(i, n) {
                    for (r, k, x) in m.triplets() {
                        entries.push((r, col0 + k, x.clone()));
                    }
                }
            }
            blocks.insert(n, SparseMatrix::from_triplets(cod.dim(n + degree), self.space().dim(n), entries));
        }
        GradedMap::new(self.space(), cod, degree, blocks).expect("assembled shapes")
    }

    /// `hocolim V → colim V = V(t)` for a poset with top `t`:
    /// `ι_{0,c}v ↦ V(c ≤ t)v`, higher chains to zero.
    pub fn to_colim(&self, v: &FiniteDiagram) -> Result<GradedMap, DgError> {
        let t = v.poset().top().ok_or(DgError::NoTop)?;
        Ok(self.assemble(v.value(t).space(), 0, |i, n| {
            let c = &self.chains[i];
            (c.len() == 1).then(|| v.arrow(c[0], t).block(n))
        }))
    }

    /// `hocolim ΔX → X`, `ι_{0,c}x ↦ x`, higher chains to zero.
    pub fn collapse(&self, x: &LadderComplex) -> GradedMap {
        self.assemble(x.space(), 0, |i, n| (self.chains[i].len() == 1).then(|| SparseMatrix::identity(x.dim(n))))
    }

    /// `hocolim(η)ι_{q,c}v = Σ_k (−1)^{−qm + k(q−k)} ι_{q−k,c^{≥k}}(pr_{k,c^{≤k}} η)v`
    /// with `m = |η|`, as a map into `target = hocolim W`.
    pub fn on_morphism(&self, eta: &MappingCochain, target: &HocolimComplex) -> GradedMap {
        let m = eta.degree();
        let mut blocks = BTreeMap::new();
        for n in self.space().degrees() {
            let mut entries = Vec::new();
            for (i, c) in self.chains.iter().enumerate() {
                let q = q_of(c);
                let col0 = self.offsets[&(n, i)];
                for k in 0..c.len() {
                    let Some(f) = eta.component(&c[..=k]) else { continue };
                    let back = target.chain_index(&c[k..]);
                    let Some(&row0) = target.offsets.get(&(n + m, back)) else { continue };
                    let s = Scalar::from_int(parity(-q * m + k as i64 * (q - k as i64)));
                    for (r, j, x) in f.block(n + q).triplets() {
                        entries.push((row0 + r, col0 + j, x * &s));
                    }
                }
            }
            blocks.insert(n, SparseMatrix::from_triplets(target.space().dim(n + m), self.space().dim(n), entries));
        }
        GradedMap::new(self.space(), target.space(), m, blocks).expect("hocolim(η) shapes")
    }

    /// `map(V, ΔX)^m → [hocolim V, X]^m`, `ι_{q,c}v ↦ (−1)^{−qm}(pr_{q,c}η)v`.
    pub fn adjunct(&self, eta: &MappingCochain, x: &LadderComplex) -> GradedMap {
        let m = eta.degree();
        self.assemble(x.space(), m, |i, n| {
            let c = &self.chains[i];
            let q = q_of(c);
            eta.component(c).map(|f| f.block(n + q).scale(&Scalar::from_int(parity(-q * m))))
        })
    }

    /// Inverse of `adjunct`: `pr_{q,c}η = (−1)^{qm} F∘ι_{q,c}`.
    pub fn adjunct_inverse(&self, f: &GradedMap) -> Result<MappingCochain, DgError> {
        if !f.dom().same_shape(self.space()) {
            return Err(DgError::DiagramMismatch("map does not start at this hocolim".into()));
        }
        let m = f.degree();
        let mut out = MappingCochain::zero(m);
        for c in &self.chains {
            let q = q_of(c);
            let g = f.compose(&self.injection(c))?.scale(&Scalar::from_int(parity(q * m)));
            out.insert(c.clone(), g)?;
        }
        Ok(out)
    }
}
