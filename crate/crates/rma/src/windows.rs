//! Finite subquotient complexes of the slab field complex.
//!
//! A window is built from a seed set of cells (support side) and a cut (quotient
//! side). `A` is the seed closed under the images of `Q`; `X ⊆ A` keeps, in each
//! degree above the lowest, only cells whose `Q`-reads inside `A` all lie in `X`
//! and never leave the slab. `Q` restricted to `X` then squares to zero and
//! agrees with the infinite-lattice `Q` for sections supported in `A`.

use ghc_homalg::{GradedSpace, HomalgError, LadderComplex, Scalar, SparseMatrix};
use ghc_lattice::{Cell, FieldSpace, LocalOperator};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
pub struct Window {
    /// Slab indices of the kept cells, ascending, per field degree.
    pub cells: BTreeMap<i64, Vec<usize>>,
    pub complex: LadderComplex,
}

impl Window {
    pub fn lo(&self) -> i64 {
        self.complex.space().lo()
    }

    pub fn cells(&self, n: i64) -> &[usize] {
        self.cells.get(&n).map_or(&[], Vec::as_slice)
    }

    /// Position of a slab cell inside the window, per degree.
    pub fn positions(&self, n: i64) -> BTreeMap<usize, usize> {
        self.cells(n).iter().enumerate().map(|(k, &i)| (i, k)).collect()
    }

    /// Zero-extends a window vector to the slab.
    pub fn extend(&self, fields: &FieldSpace, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); fields.dim(n)];
        for (k, &i) in self.cells(n).iter().enumerate() {
            out[i] = v[k].clone();
        }
        out
    }

    /// Restricts a slab vector to the window cells.
    pub fn restrict(&self, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        self.cells(n).iter().map(|&i| v[i].clone()).collect()
    }

    /// Whether a slab vector vanishes off the window.
    pub fn contains(&self, n: i64, v: &[Scalar]) -> Option<usize> {
        let keep: BTreeSet<usize> = self.cells(n).iter().copied().collect();
        (0..v.len()).find(|i| !v[*i].is_zero() && !keep.contains(i))
    }

    pub fn dims(&self) -> Vec<usize> {
        self.complex.space().degrees().map(|n| self.complex.dim(n)).collect()
    }
}

pub fn windowed(
    fields: &FieldSpace,
    q: &LocalOperator,
    seed: impl Fn(i64, &Cell) -> bool,
    cut: impl Fn(&Cell) -> bool,
) -> Result<Window, HomalgError> {
    let lat = fields.lattice();
    let degrees: Vec<i64> = fields.degrees().collect();
    let mut a: BTreeMap<i64, BTreeSet<usize>> = BTreeMap::new();
    let mut x: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut blocks = BTreeMap::new();
    for &n in &degrees {
        let mut an: BTreeSet<usize> = fields.select(n, |c| seed(n, c)).into_iter().collect();
        let xn: Vec<usize> = match q.stencil(n - 1).filter(|_| a.contains_key(&(n - 1))) {
            None => an.iter().copied().filter(|&i| cut(&fields.cell(n, i))).collect(),
            Some(st) => {
                let prev_a = &a[&(n - 1)];
                let prev_x: BTreeSet<usize> = x[&(n - 1)].iter().copied().collect();
                let mut keep = Vec::new();
                let mut reads_of = BTreeMap::new();
                for i in 0..fields.dim(n) {
                    let reads: Vec<Option<usize>> =
                        st.reads(lat, &fields.cell(n, i)).iter().map(|(c, _)| fields.position(n - 1, c)).collect();
                    if reads.iter().flatten().any(|j| prev_a.contains(j)) {
                        an.insert(i);
                    }
                    reads_of.insert(i, reads);
                }
                for &i in &an {
                    let reads = &reads_of[&i];
                    let ok = reads.iter().all(|r| r.is_some_and(|j| !prev_a.contains(&j) || prev_x.contains(&j)));
                    if ok {
                        keep.push(i);
                    }
                }
                keep
            }
        };
        a.insert(n, an);
        x.insert(n, xn);
    }
    let space = GradedSpace::new(
        fields.degrees().start,
        degrees.iter().map(|&n| x[&n].iter().map(|&i| fields.label(n, i)).collect()).collect(),
    );
    for &n in &degrees {
        if fields.has_degree(n + 1) {
            let m: SparseMatrix = q.slab_block(fields, fields, n).select(&x[&(n + 1)], &x[&n]);
            blocks.insert(n, m);
        }
    }
    let qmap = ghc_homalg::GradedMap::new(&space, &space, 1, blocks)?;
    Ok(Window { cells: x, complex: LadderComplex::new(space, qmap)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ghc_lattice::CausalLattice;
    use ghc_models::{Model, ModelKind, ModelSpec};
    use proptest::prelude::*;

    fn maxwell() -> Model {
        let lat = CausalLattice::new(2, 12, vec![4], 2).unwrap();
        Model::build(&ModelSpec::new(ModelKind::MaxwellP { p: 1 }, lat).unwrap()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// A band window whose closure stays clear of the slab ends is a
        /// subcomplex: the slab `Q` of a zero-extended section stays inside it
        /// and restricts to the window differential. `restrict ∘ extend = id`.
        #[test]
        fn interior_band_windows_are_subcomplexes(lo in 4i64..6, width in 0i64..2, seed in 0u64..1000) {
            let m = maxwell();
            let f = m.fields();
            let lat = f.lattice();
            let hi = lo + width;
            let w = windowed(f, m.q_local(), |_, c| { let (x, y) = lat.time_span(c); x >= lo && y <= hi }, |_| true).unwrap();
            for n in f.degrees() {
                let len = w.cells(n).len();
                let v: Vec<Scalar> = (0..len).map(|k| Scalar::from_int(((k as u64 * 31 + seed) % 7) as i64 - 3)).collect();
                let ext = w.extend(f, n, &v);
                prop_assert_eq!(w.restrict(n, &ext), v.clone());
                if f.has_degree(n + 1) {
                    let slab = m.q_local().slab_block(f, f, n).mul_vec(&ext);
                    prop_assert!(w.contains(n + 1, &slab).is_none());
                    prop_assert_eq!(w.restrict(n + 1, &slab), w.complex.differential(n).mul_vec(&v));
                }
            }
        }
    }
}
