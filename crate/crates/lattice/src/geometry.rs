//! The slab `{0..n_time-1} × torus`, its sites and cubical cells.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Lattice offsets and coordinates: index 0 is time, 1.. are spatial axes.
pub type Coord = [i64; 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("spacetime dimension {0} unsupported (need 2 or 3)")]
    Dimension(usize),
    #[error("expected {expected} spatial extents, found {found}")]
    Extents { expected: usize, found: usize },
    #[error("spatial extent {0} too small (need at least 4)")]
    SpatialTooSmall(usize),
    #[error("n_time = {0} too small (need at least 8)")]
    TimeTooShort(usize),
    #[error("margin {margin} invalid for n_time {n_time} (need 2 <= margin and a nonempty interior)")]
    Margin { margin: usize, n_time: usize },
    #[error("operator radius {radius} exceeds the margin {margin}")]
    RadiusExceedsMargin { radius: u32, margin: usize },
    #[error("slice at t={0} is not interior")]
    SliceNotInterior(i64),
    #[error("slices out of order: {lower} must be below {upper}")]
    SliceOrder { lower: i64, upper: i64 },
    #[error("slices at t={lower} and t={upper} are closer than {min}")]
    SlicesTooClose { lower: i64, upper: i64, min: i64 },
}

/// A cubical cell: base site plus the set of axes it spans (bit 0 = time).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub mask: u8,
    pub base: Coord,
}

impl Cell {
    pub fn degree(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn has_time(&self) -> bool {
        self.mask & 1 == 1
    }

    /// Axes spanned, in increasing order.
    pub fn axes(&self) -> Vec<usize> {
        axes_of(self.mask)
    }
}

pub fn axes_of(mask: u8) -> Vec<usize> {
    (0..8).filter(|a| mask & (1 << a) != 0).collect()
}

/// Masks of `p`-cells in dimension `m`, increasing.
pub fn masks_of_degree(m: usize, p: usize) -> Vec<u8> {
    (0u8..(1 << m)).filter(|k| k.count_ones() as usize == p).collect()
}

/// Finite spacetime slab with periodic space and unit-slope causal cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalLattice {
    m: usize,
    n_time: usize,
    spatial: Vec<usize>,
    margin: usize,
}

/// Per-degree enumeration of slab cells: masks in order, then time, then space.
#[derive(Clone, Debug)]
pub struct CellIndex {
    masks: Vec<u8>,
    offsets: Vec<usize>,
    len: usize,
}

impl CausalLattice {
    pub fn new(m: usize, n_time: usize, spatial: Vec<usize>, margin: usize) -> Result<Self, LatticeError> {
        if !(2..=3).contains(&m) {
            return Err(LatticeError::Dimension(m));
        }
        if spatial.len() != m - 1 {
            return Err(LatticeError::Extents { expected: m - 1, found: spatial.len() });
        }
        if let Some(&e) = spatial.iter().find(|&&e| e < 4) {
            return Err(LatticeError::SpatialTooSmall(e));
        }
        if n_time < 8 {
            return Err(LatticeError::TimeTooShort(n_time));
        }
        if margin < 2 || 2 * margin >= n_time {
            return Err(LatticeError::Margin { margin, n_time });
        }
        Ok(CausalLattice { m, n_time, spatial, margin })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn n_time(&self) -> usize {
        self.n_time
    }

    pub fn spatial_extents(&self) -> &[usize] {
        &self.spatial
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    /// Spatial step over time step; the cone slope is one.
    pub fn step_ratio(&self) -> ghc_homalg::Scalar {
        ghc_homalg::Scalar::one()
    }

    /// Checks a registered operator radius against the margin.
    pub fn register_radius(&self, radius: u32) -> Result<(), LatticeError> {
        if radius as usize > self.margin {
            return Err(LatticeError::RadiusExceedsMargin { radius, margin: self.margin });
        }
        Ok(())
    }

    pub fn spatial_volume(&self) -> usize {
        self.spatial.iter().product()
    }

    pub fn n_sites(&self) -> usize {
        self.n_time * self.spatial_volume()
    }

    pub fn extent(&self, axis: usize) -> i64 {
        if axis == 0 {
            self.n_time as i64
        } else {
            self.spatial.get(axis - 1).map_or(1, |&e| e as i64)
        }
    }

    /// Wraps spatial coordinates; leaves time untouched.
    pub fn wrap(&self, mut c: Coord) -> Coord {
        for a in 1..3 {
            c[a] = c[a].rem_euclid(self.extent(a));
        }
        c
    }

    pub fn site_index(&self, c: Coord) -> Option<usize> {
        if c[0] < 0 || c[0] >= self.n_time as i64 {
            return None;
        }
        let c = self.wrap(c);
        Some((c[0] as usize * self.extent(1) as usize + c[1] as usize) * self.extent(2) as usize + c[2] as usize)
    }

    pub fn site_at(&self, i: usize) -> Coord {
        let e2 = self.extent(2) as usize;
        let e1 = self.extent(1) as usize;
        [(i / (e1 * e2)) as i64, ((i / e2) % e1) as i64, (i % e2) as i64]
    }

    /// Spatial sites in canonical order, as coordinates with time 0.
    pub fn spatial_sites(&self) -> Vec<Coord> {
        let mut out = Vec::with_capacity(self.spatial_volume());
        for x in 0..self.extent(1) {
            for y in 0..self.extent(2) {
                out.push([0, x, y]);
            }
        }
        out
    }

    /// Wrap-around distance along a spatial axis.
    pub fn axis_distance(&self, axis: usize, a: i64, b: i64) -> i64 {
        let e = self.extent(axis);
        let d = (a - b).rem_euclid(e);
        d.min(e - d)
    }

    /// Chebyshev distance between spatial positions on the torus.
    pub fn spatial_distance(&self, a: Coord, b: Coord) -> i64 {
        (1..self.m).map(|k| self.axis_distance(k, a[k], b[k])).max().unwrap_or(0)
    }

    pub fn cell_index(&self, p: usize) -> CellIndex {
        let masks = masks_of_degree(self.m, p);
        let vol = self.spatial_volume();
        let mut offsets = Vec::with_capacity(masks.len());
        let mut len = 0;
        for &k in &masks {
            offsets.push(len);
            len += (self.n_time - (k & 1) as usize) * vol;
        }
        CellIndex { masks, offsets, len }
    }

    /// Vertex coordinates of a cell, spatially wrapped.
    pub fn vertices(&self, c: &Cell) -> Vec<Coord> {
        let axes = c.axes();
        (0..1u32 << axes.len())
            .map(|s| {
                let mut v = c.base;
                for (k, &a) in axes.iter().enumerate() {
                    if s & (1 << k) != 0 {
                        v[a] += 1;
                    }
                }
                self.wrap(v)
            })
            .collect()
    }

    pub fn cell_in_slab(&self, c: &Cell) -> bool {
        c.base[0] >= 0 && c.base[0] + ((c.mask & 1) as i64) < self.n_time as i64
    }

    /// Lowest and highest vertex times of a cell.
    pub fn time_span(&self, c: &Cell) -> (i64, i64) {
        (c.base[0], c.base[0] + (c.mask & 1) as i64)
    }

    /// Interior time range `[margin, n_time-1-margin]` for admissible compact supports.
    pub fn interior(&self) -> (i64, i64) {
        (self.margin as i64, (self.n_time - 1 - self.margin) as i64)
    }
}

impl CellIndex {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn masks(&self) -> &[u8] {
        &self.masks
    }

    pub fn index_of(&self, lat: &CausalLattice, c: &Cell) -> Option<usize> {
        let k = self.masks.iter().position(|&k| k == c.mask)?;
        if !lat.cell_in_slab(c) {
            return None;
        }
        let s = lat.site_index(c.base)?;
        Some(self.offsets[k] + s)
    }

    pub fn cell_at(&self, lat: &CausalLattice, i: usize) -> Cell {
        let k = match self.offsets.binary_search(&i) {
            Ok(mut k) => {
                // skip empty blocks sharing the offset
                while k + 1 < self.offsets.len() && self.offsets[k + 1] == i {
                    k += 1;
                }
                k
            }
            Err(k) => k - 1,
        };
        Cell { mask: self.masks[k], base: lat.site_at(i - self.offsets[k]) }
    }

    pub fn cells(&self, lat: &CausalLattice) -> Vec<Cell> {
        (0..self.len).map(|i| self.cell_at(lat, i)).collect()
    }

    /// Human-readable basis labels.
    pub fn labels(&self, lat: &CausalLattice) -> Vec<String> {
        self.cells(lat).iter().map(|c| cell_label(lat, c)).collect()
    }
}

pub fn cell_label(lat: &CausalLattice, c: &Cell) -> String {
    let coords: Vec<String> = c.base[..lat.dim()].iter().map(|v| v.to_string()).collect();
    format!("({};{:0w$b})", coords.join(","), c.mask, w = lat.dim())
}
