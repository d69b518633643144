//! CSV dumps of `G±` applied to a point source.

use ghc_green::{Direction, GreenError, GreenOperators};
use ghc_homalg::Scalar;
use ghc_lattice::{causal_future, causal_past, masks_of_degree, FieldSpace};
use std::io::Write;
use std::str::FromStr;

#[derive(Debug, thiserror::Error)]
pub enum DumpError {
    #[error("bad source {0:?}; expected \"zero\" or a site \"t,x[,y]\"")]
    Syntax(String),
    #[error("source site {0:?} lies outside the lattice")]
    OutOfRange(Vec<i64>),
    #[error("degree {degree} has no fiber {fiber}")]
    Fiber { degree: i64, fiber: usize },
    #[error(transparent)]
    Green(#[from] GreenError),
    #[error("solution leaves the causal cone of the source at {0}")]
    Cone(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Zero,
    Site(Vec<i64>),
}

impl FromStr for Source {
    type Err = DumpError;
    fn from_str(s: &str) -> Result<Self, DumpError> {
        if s.trim() == "zero" {
            return Ok(Source::Zero);
        }
        let coords: Result<Vec<i64>, _> = s.split(',').map(|x| x.trim().parse()).collect();
        coords.map(Source::Site).map_err(|_| DumpError::Syntax(s.to_string()))
    }
}

/// The source vector: a unit on fiber `fiber` of degree `degree` at the site.
pub fn source_vector(f: &FieldSpace, source: &Source, degree: i64, fiber: usize) -> Result<Vec<Scalar>, DumpError> {
    if !f.has_degree(degree) {
        return Err(GreenError::Degree(degree).into());
    }
    let mut v = vec![Scalar::zero(); f.dim(degree)];
    let Source::Site(site) = source else { return Ok(v) };
    let lat = f.lattice();
    let extents: Vec<i64> = std::iter::once(lat.n_time()).chain(lat.spatial_extents().iter().copied()).map(|e| e as i64).collect();
    if site.len() != extents.len() || site.iter().zip(&extents).any(|(x, e)| *x < 0 || x >= e) {
        return Err(DumpError::OutOfRange(site.clone()));
    }
    let masks = masks_of_degree(lat.dim(), f.form_degree(degree));
    let mask = *masks.get(fiber).ok_or(DumpError::Fiber { degree, fiber })?;
    let mut base = [0i64; 3];
    base[..site.len()].copy_from_slice(site);
    let i = f.position(degree, &ghc_lattice::Cell { mask, base }).ok_or_else(|| DumpError::OutOfRange(site.clone()))?;
    v[i] = Scalar::one();
    Ok(v)
}

/// Fiber index of a cell among the cells of its form degree at the same base.
fn fiber_of(f: &FieldSpace, n: i64, mask: u8) -> usize {
    masks_of_degree(f.lattice().dim(), f.form_degree(n)).iter().position(|&k| k == mask).expect("mask of the right degree")
}

/// Solves, checks cone containment, then writes one row per cell of `degree`.
pub fn green_dump(ops: &GreenOperators, dir: Direction, degree: i64, phi: &[Scalar], out: impl Write) -> Result<usize, DumpError> {
    let f = ops.operator().fields();
    let lat = f.lattice();
    let u = ops.solve(dir, degree, phi)?;
    let src = f.support(degree, phi);
    let cone = match dir {
        Direction::Retarded => causal_future(lat, &src),
        Direction::Advanced => causal_past(lat, &src),
    };
    if let Some(i) = (0..u.len()).find(|&i| !u[i].is_zero() && !cone.contains_cell(lat, &f.cell(degree, i))) {
        return Err(DumpError::Cone(f.label(degree, i)));
    }
    let mut w = csv::Writer::from_writer(out);
    let spatial = ["x", "y"];
    let mut header = vec!["t"];
    header.extend(&spatial[..lat.dim() - 1]);
    header.extend(["degree", "fiber", "numerator", "denominator"]);
    w.write_record(&header)?;
    for (i, x) in u.iter().enumerate() {
        let c = f.cell(degree, i);
        let mut row: Vec<String> = c.base[..lat.dim()].iter().map(|b| b.to_string()).collect();
        row.extend([degree.to_string(), fiber_of(f, degree, c.mask).to_string(), x.numer().to_string(), x.denom().to_string()]);
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(u.len())
}
