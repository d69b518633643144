//! Site regions, causal cones, Cauchy slices, the Σ-map and partitions of unity.

use crate::geometry::{CausalLattice, Cell, Coord, LatticeError};
use ghc_homalg::Scalar;
use serde::{Deserialize, Serialize};

/// A set of sites, stored as a membership mask over the lattice's site order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Region {
    member: Vec<bool>,
    dims: (usize, usize, usize),
}

impl Region {
    pub fn empty(lat: &CausalLattice) -> Self {
        Region {
            member: vec![false; lat.n_sites()],
            dims: (lat.n_time(), lat.extent(1) as usize, lat.extent(2) as usize),
        }
    }

    pub fn full(lat: &CausalLattice) -> Self {
        let mut r = Self::empty(lat);
        r.member.iter_mut().for_each(|b| *b = true);
        r
    }

    pub fn from_sites<I: IntoIterator<Item = Coord>>(lat: &CausalLattice, sites: I) -> Self {
        let mut r = Self::empty(lat);
        for s in sites {
            if let Some(i) = lat.site_index(s) {
                r.member[i] = true;
            }
        }
        r
    }

    /// All sites with time in `[lo, hi]`.
    pub fn time_band(lat: &CausalLattice, lo: i64, hi: i64) -> Self {
        let mut r = Self::empty(lat);
        for (i, b) in r.member.iter_mut().enumerate() {
            let t = lat.site_at(i)[0];
            *b = t >= lo && t <= hi;
        }
        r
    }

    pub fn contains(&self, lat: &CausalLattice, s: Coord) -> bool {
        lat.site_index(s).is_some_and(|i| self.member[i])
    }

    /// A cell belongs to the region when all its vertices do.
    pub fn contains_cell(&self, lat: &CausalLattice, c: &Cell) -> bool {
        lat.cell_in_slab(c) && lat.vertices(c).iter().all(|v| self.contains(lat, *v))
    }

    pub fn insert(&mut self, lat: &CausalLattice, s: Coord) {
        if let Some(i) = lat.site_index(s) {
            self.member[i] = true;
        }
    }

    /// Adds every vertex of the cell.
    pub fn insert_cell(&mut self, lat: &CausalLattice, c: &Cell) {
        for v in lat.vertices(c) {
            self.insert(lat, v);
        }
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.member.iter().any(|&b| b)
    }

    pub fn sites(&self, lat: &CausalLattice) -> Vec<Coord> {
        self.member.iter().enumerate().filter(|e| *e.1).map(|(i, _)| lat.site_at(i)).collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        let member = self.member.iter().zip(&other.member).map(|(a, b)| *a || *b).collect();
        Region { member, dims: self.dims }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let member = self.member.iter().zip(&other.member).map(|(a, b)| *a && *b).collect();
        Region { member, dims: self.dims }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.member.iter().zip(&other.member).all(|(a, b)| !*a || *b)
    }

    /// Smallest and largest occupied time, if any.
    pub fn time_range(&self, lat: &CausalLattice) -> Option<(i64, i64)> {
        let ts: Vec<i64> = self.sites(lat).iter().map(|s| s[0]).collect();
        Some((*ts.iter().min()?, *ts.iter().max()?))
    }

    /// Sorted coordinate list, truncated to the lattice dimension.
    pub fn to_coordinates(&self, lat: &CausalLattice) -> Vec<Vec<i64>> {
        self.sites(lat).iter().map(|s| s[..lat.dim()].to_vec()).collect()
    }

    pub fn from_coordinates(lat: &CausalLattice, coords: &[Vec<i64>]) -> Self {
        Self::from_sites(
            lat,
            coords.iter().map(|c| {
                let mut s = [0; 3];
                s[..c.len().min(3)].copy_from_slice(&c[..c.len().min(3)]);
                s
            }),
        )
    }
}

/// Serializable form of a region: the sorted coordinate list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionCoordinates(pub Vec<Vec<i64>>);

/// Spatial Chebyshev ball of radius one around every occupied site of one level.
fn dilate_level(lat: &CausalLattice, level: &[bool]) -> Vec<bool> {
    let (e1, e2) = (lat.extent(1), lat.extent(2));
    let r2 = if lat.dim() == 3 { 1 } else { 0 };
    let mut out = vec![false; level.len()];
    for x in 0..e1 {
        for y in 0..e2 {
            if !level[(x * e2 + y) as usize] {
                continue;
            }
            for dx in -1..=1 {
                for dy in -r2..=r2 {
                    let nx = (x + dx).rem_euclid(e1);
                    let ny = (y + dy).rem_euclid(e2);
                    out[(nx * e2 + ny) as usize] = true;
                }
            }
        }
    }
    out
}

fn sweep(lat: &CausalLattice, k: &Region, forward: bool) -> Region {
    let vol = lat.spatial_volume();
    let nt = lat.n_time();
    let mut out = k.clone();
    let order: Vec<usize> = if forward { (1..nt).collect() } else { (0..nt - 1).rev().collect() };
    for t in order {
        let prev = if forward { t - 1 } else { t + 1 };
        let grown = dilate_level(lat, &out.member[prev * vol..(prev + 1) * vol]);
        for (i, g) in grown.into_iter().enumerate() {
            out.member[t * vol + i] |= g;
        }
    }
    out
}

/// `J⁺(K)`: sites reachable by future-directed unit-slope steps, inside the slab.
pub fn causal_future(lat: &CausalLattice, k: &Region) -> Region {
    sweep(lat, k, true)
}

/// `J⁻(K)`, the time-reverse of `causal_future`.
pub fn causal_past(lat: &CausalLattice, k: &Region) -> Region {
    sweep(lat, k, false)
}

/// `I⁺(K)`: sites reached from `K` by at least one future-directed step.
pub fn chronological_future(lat: &CausalLattice, k: &Region) -> Region {
    let j = causal_future(lat, k);
    let vol = lat.spatial_volume();
    let mut out = Region::empty(lat);
    for t in 1..lat.n_time() {
        let grown = dilate_level(lat, &j.member[(t - 1) * vol..t * vol]);
        for (i, g) in grown.into_iter().enumerate() {
            out.member[t * vol + i] = g;
        }
    }
    out
}

/// A constant-time Cauchy slice at an interior time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CauchySlice {
    time_index: i64,
}

impl CauchySlice {
    pub fn new(lat: &CausalLattice, time_index: i64) -> Result<Self, LatticeError> {
        let (lo, hi) = lat.interior();
        if time_index < lo || time_index > hi {
            return Err(LatticeError::SliceNotInterior(time_index));
        }
        Ok(CauchySlice { time_index })
    }

    pub fn time(&self) -> i64 {
        self.time_index
    }

    pub fn region(&self, lat: &CausalLattice) -> Region {
        Region::time_band(lat, self.time_index, self.time_index)
    }
}

/// `(J⁺(Σ₋) ∩ J⁻(K)) ∪ (J⁻(Σ₊) ∩ J⁺(K))`.
pub fn sigma_map(lat: &CausalLattice, k: &Region, lower: &CauchySlice, upper: &CauchySlice) -> Result<Region, LatticeError> {
    if upper.time() <= lower.time() {
        return Err(LatticeError::SliceOrder { lower: lower.time(), upper: upper.time() });
    }
    let after_lower = causal_future(lat, &lower.region(lat));
    let before_upper = causal_past(lat, &upper.region(lat));
    let a = after_lower.intersection(&causal_past(lat, k));
    let b = before_upper.intersection(&causal_future(lat, k));
    Ok(a.union(&b))
}

/// Time-dependent weights with `χ₊ + χ₋ = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionOfUnity {
    chi_plus: Vec<Scalar>,
    lower: i64,
    upper: i64,
}

impl PartitionOfUnity {
    /// `χ₊` vanishes up to `Σ₋`, equals one from `Σ₊` on, and is linear in between.
    pub fn new(lat: &CausalLattice, lower: &CauchySlice, upper: &CauchySlice) -> Result<Self, LatticeError> {
        let (a, b) = (lower.time(), upper.time());
        if b < a + 2 {
            return Err(LatticeError::SlicesTooClose { lower: a, upper: b, min: 2 });
        }
        let chi_plus = (0..lat.n_time() as i64)
            .map(|t| {
                if t <= a {
                    Scalar::zero()
                } else if t >= b {
                    Scalar::one()
                } else {
                    Scalar::new(t - a, b - a)
                }
            })
            .collect();
        Ok(PartitionOfUnity { chi_plus, lower: a, upper: b })
    }

    pub fn chi_plus(&self, t: i64) -> Scalar {
        self.chi_plus[t as usize].clone()
    }

    pub fn chi_minus(&self, t: i64) -> Scalar {
        Scalar::one() - self.chi_plus(t)
    }

    pub fn slices(&self) -> (i64, i64) {
        (self.lower, self.upper)
    }

    /// Weight used for a cell: the value at its lowest vertex time.
    pub fn chi_plus_cell(&self, c: &Cell) -> Scalar {
        self.chi_plus(c.base[0])
    }

    pub fn support_plus(&self, lat: &CausalLattice) -> Region {
        Region::time_band(lat, self.lower + 1, lat.n_time() as i64 - 1)
    }

    pub fn support_minus(&self, lat: &CausalLattice) -> Region {
        Region::time_band(lat, 0, self.upper - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::{HashSet, VecDeque};

    fn lat() -> CausalLattice {
        CausalLattice::new(2, 16, vec![8], 3).unwrap()
    }

    /// Breadth-first search over explicit unit-slope steps.
    fn bfs_future(l: &CausalLattice, start: &[Coord]) -> HashSet<Coord> {
        let mut seen: HashSet<Coord> = start.iter().copied().collect();
        let mut q: VecDeque<Coord> = start.iter().copied().collect();
        while let Some(s) = q.pop_front() {
            if s[0] + 1 >= l.n_time() as i64 {
                continue;
            }
            for dx in -1..=1 {
                let n = l.wrap([s[0] + 1, s[1] + dx, 0]);
                if seen.insert(n) {
                    q.push_back(n);
                }
            }
        }
        seen
    }

    #[test]
    fn empty_cone() {
        let l = lat();
        assert!(causal_future(&l, &Region::empty(&l)).is_empty());
    }

    #[test]
    fn point_cone_fills_circle() {
        let l = lat();
        let k = Region::from_sites(&l, [[2, 1, 0]]);
        let j = causal_future(&l, &k);
        for t in 2..16 {
            for x in 0..8 {
                let want = l.axis_distance(1, x, 1) <= t - 2;
                assert_eq!(j.contains(&l, [t, x, 0]), want, "t={t} x={x}");
            }
        }
        assert!(!j.contains(&l, [1, 1, 0]));
        let full = (0..8).all(|x| j.contains(&l, [6, x, 0]));
        assert!(full);
    }

    #[test]
    fn sigma_of_point_is_diamond_union() {
        let l = lat();
        let lo = CauchySlice::new(&l, 4).unwrap();
        let hi = CauchySlice::new(&l, 10).unwrap();
        let k = Region::from_sites(&l, [[7, 3, 0]]);
        let s = sigma_map(&l, &k, &lo, &hi).unwrap();
        let oracle = Region::time_band(&l, 4, 15)
            .intersection(&causal_past(&l, &k))
            .union(&Region::time_band(&l, 0, 10).intersection(&causal_future(&l, &k)));
        assert_eq!(s, oracle);
        assert!(k.is_subset(&s));
        assert!(s.contains(&l, [4, 0, 0]));
        assert!(!s.contains(&l, [3, 3, 0]));
        assert!(sigma_map(&l, &Region::empty(&l), &lo, &hi).unwrap().is_empty());
        assert!(sigma_map(&l, &k, &hi, &lo).is_err());
    }

    #[test]
    fn slices_must_be_interior() {
        let l = lat();
        assert!(CauchySlice::new(&l, 2).is_err());
        assert!(CauchySlice::new(&l, 13).is_err());
        assert!(CauchySlice::new(&l, 12).is_ok());
    }

    #[test]
    fn partition_values() {
        let l = lat();
        let p = PartitionOfUnity::new(&l, &CauchySlice::new(&l, 4).unwrap(), &CauchySlice::new(&l, 6).unwrap()).unwrap();
        assert_eq!(p.chi_plus(4), Scalar::zero());
        assert_eq!(p.chi_plus(5), Scalar::new(1, 2));
        assert_eq!(p.chi_plus(6), Scalar::one());
        for t in 0..16 {
            assert_eq!(p.chi_plus(t) + p.chi_minus(t), Scalar::one());
        }
        let close = PartitionOfUnity::new(&l, &CauchySlice::new(&l, 4).unwrap(), &CauchySlice::new(&l, 5).unwrap());
        assert!(close.is_err());
    }

    #[test]
    fn partition_supports_lie_in_open_cones() {
        let l = lat();
        let lo = CauchySlice::new(&l, 4).unwrap();
        let hi = CauchySlice::new(&l, 9).unwrap();
        let p = PartitionOfUnity::new(&l, &lo, &hi).unwrap();
        let plus: Vec<Coord> = (0..16).flat_map(|t| (0..8).map(move |x| [t, x, 0])).filter(|s| !p.chi_plus(s[0]).is_zero()).collect();
        let minus: Vec<Coord> = (0..16).flat_map(|t| (0..8).map(move |x| [t, x, 0])).filter(|s| !p.chi_minus(s[0]).is_zero()).collect();
        assert!(Region::from_sites(&l, plus).is_subset(&chronological_future(&l, &lo.region(&l))));
        assert!(Region::from_sites(&l, minus).is_subset(&chronological_past(&l, &hi.region(&l))));
    }

    fn chronological_past(l: &CausalLattice, k: &Region) -> Region {
        // time reflection of the chronological future
        let n = l.n_time() as i64;
        let flip = |r: &Region| Region::from_sites(l, r.sites(l).into_iter().map(|s| [n - 1 - s[0], s[1], s[2]]));
        flip(&chronological_future(l, &flip(k)))
    }

    fn random_region() -> impl Strategy<Value = Vec<(i64, i64)>> {
        prop::collection::vec((0i64..16, 0i64..8), 0..6)
    }

    proptest! {
        #[test]
        fn cone_matches_bfs(pts in random_region()) {
            let l = lat();
            let sites: Vec<Coord> = pts.iter().map(|&(t, x)| [t, x, 0]).collect();
            let j = causal_future(&l, &Region::from_sites(&l, sites.clone()));
            let oracle = Region::from_sites(&l, bfs_future(&l, &sites));
            prop_assert_eq!(j, oracle);
        }

        #[test]
        fn cone_laws(a in random_region(), b in random_region()) {
            let l = lat();
            let ka = Region::from_sites(&l, a.iter().map(|&(t, x)| [t, x, 0]));
            let kb = ka.union(&Region::from_sites(&l, b.iter().map(|&(t, x)| [t, x, 0])));
            let ja = causal_future(&l, &ka);
            prop_assert!(ka.is_subset(&ja));
            prop_assert_eq!(causal_future(&l, &ja), ja.clone());
            prop_assert!(ja.is_subset(&causal_future(&l, &kb)));
            prop_assert!(causal_past(&l, &ka).is_subset(&causal_past(&l, &kb)));
        }

        #[test]
        fn future_and_past_are_adjoint(x in (0i64..16, 0i64..8), y in (0i64..16, 0i64..8)) {
            let l = lat();
            let sx = [x.0, x.1, 0];
            let sy = [y.0, y.1, 0];
            let fwd = causal_future(&l, &Region::from_sites(&l, [sx])).contains(&l, sy);
            let bwd = causal_past(&l, &Region::from_sites(&l, [sy])).contains(&l, sx);
            prop_assert_eq!(fwd, bwd);
        }

        #[test]
        fn sigma_property(pts in random_region(), a in 3i64..8, gap in 1i64..5) {
            let l = lat();
            let lo = CauchySlice::new(&l, a).unwrap();
            let hi = CauchySlice::new(&l, (a + gap).min(12)).unwrap();
            prop_assume!(hi.time() > lo.time());
            let k = Region::from_sites(&l, pts.iter().map(|&(t, x)| [t, x, 0]));
            let s = sigma_map(&l, &k, &lo, &hi).unwrap();
            prop_assert!(k.is_subset(&s));
            let jp = causal_future(&l, &lo.region(&l)).intersection(&causal_past(&l, &k));
            let jm = causal_past(&l, &hi.region(&l)).intersection(&causal_future(&l, &k));
            prop_assert!(jp.is_subset(&s));
            prop_assert!(jm.is_subset(&s));
        }

        #[test]
        fn sigma_is_monotone(a in random_region(), b in random_region()) {
            let l = lat();
            let lo = CauchySlice::new(&l, 5).unwrap();
            let hi = CauchySlice::new(&l, 9).unwrap();
            let ka = Region::from_sites(&l, a.iter().map(|&(t, x)| [t, x, 0]));
            let kb = ka.union(&Region::from_sites(&l, b.iter().map(|&(t, x)| [t, x, 0])));
            prop_assert!(sigma_map(&l, &ka, &lo, &hi).unwrap().is_subset(&sigma_map(&l, &kb, &lo, &hi).unwrap()));
        }
    }

    #[test]
    fn coordinates_roundtrip() {
        let l = lat();
        let k = Region::from_sites(&l, [[3, 2, 0], [1, 7, 0]]);
        let c = k.to_coordinates(&l);
        assert_eq!(c, vec![vec![1, 7], vec![3, 2]]);
        let json = serde_json::to_string(&RegionCoordinates(c.clone())).unwrap();
        let back: RegionCoordinates = serde_json::from_str(&json).unwrap();
        assert_eq!(Region::from_coordinates(&l, &back.0), k);
    }
}
