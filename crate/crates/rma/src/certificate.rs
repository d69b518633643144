//! The retarded-minus-advanced map `Λ: C[1] → S` between finite windows and its
//! quasi-inverse data `Θ`, `Ξ`, `Υ` built from a partition of unity.
//!
//! `C` holds sections supported in a time band around the two slices, closed
//! under `Q`. `S` is the restriction of sections to a band kept `pad` levels off
//! both slab ends. `Λ` and `Θ` are checked as cochain maps between these finite
//! complexes; the homotopy identities are checked on zero-extended basis
//! sections of `C` and `S`.

use crate::homotopy::{add, mismatch, neg, sub, GreenHomotopy};
use crate::windows::{windowed, Window};
use ghc_green::Direction;
use ghc_homalg::{cohomology_dims, cone, is_cochain_map, shift, CheckResult, GradedMap, GradedSpace, HomalgError, LadderComplex, Scalar, SparseMatrix};
use ghc_lattice::{CauchySlice, FieldSpace, LatticeError, PartitionOfUnity};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Debug, thiserror::Error)]
pub enum CertificateError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Homalg(#[from] HomalgError),
    #[error("geometry too tight: {0}")]
    Geometry(String),
}

/// Declared finite domains of a certificate.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CertificateGeometry {
    pub lower: i64,
    pub upper: i64,
    /// `C` is seeded by cells with vertex times in `[lower − hull, upper + hull]`.
    pub hull: i64,
    /// `S` starts from cells with vertex times in `[pad, N − 1 − pad]`.
    pub pad: i64,
}

impl CertificateGeometry {
    pub fn new(lower: i64, upper: i64) -> Self {
        CertificateGeometry { lower, upper, hull: 2, pad: 4 }
    }
}

pub struct Certificate<'a> {
    h: &'a GreenHomotopy,
    geometry: CertificateGeometry,
    chi: PartitionOfUnity,
    compact: Window,
    slab: Window,
    shifted: LadderComplex,
    lambda: GradedMap,
}

fn weight(fields: &FieldSpace, n: i64, chi: &PartitionOfUnity, plus: bool, v: &[Scalar]) -> Vec<Scalar> {
    v.iter()
        .enumerate()
        .map(|(i, x)| {
            if x.is_zero() {
                return Scalar::zero();
            }
            let c = fields.cell(n, i);
            let w = if plus { chi.chi_plus_cell(&c) } else { Scalar::one() - chi.chi_plus_cell(&c) };
            x * &w
        })
        .collect()
}

fn basis(dim: usize, k: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    v[k] = Scalar::one();
    v
}

impl<'a> Certificate<'a> {
    pub fn build(h: &'a GreenHomotopy, geometry: CertificateGeometry) -> Result<Self, CertificateError> {
        let f = h.fields();
        let lat = f.lattice();
        let last = lat.n_time() as i64 - 1;
        let lower = CauchySlice::new(lat, geometry.lower)?;
        let upper = CauchySlice::new(lat, geometry.upper)?;
        let chi = PartitionOfUnity::new(lat, &lower, &upper)?;
        let (a, b) = (geometry.lower - geometry.hull, geometry.upper + geometry.hull);
        let (s0, s1) = (geometry.pad, last - geometry.pad);
        if a - 1 <= s0 || b + 1 >= s1 {
            return Err(CertificateError::Geometry(format!(
                "compact band [{a}, {b}] must sit strictly inside the restriction band [{s0}, {s1}]"
            )));
        }
        let in_band = |c: &ghc_lattice::Cell, lo: i64, hi: i64| {
            let (x, y) = lat.time_span(c);
            x >= lo && y <= hi
        };
        let q = h.model().q_local();
        let compact = windowed(f, q, |_, c| in_band(c, a, b), |_| true)?;
        let slab = windowed(f, q, |_, _| true, |c| in_band(c, s0, s1))?;
        let shifted = shift(&compact.complex, 1);
        let mut cert = Certificate { h, geometry, chi, compact, slab, shifted, lambda: GradedMap::zero(&GradedSpace::zero(), &GradedSpace::zero(), 0) };
        cert.lambda = cert.assemble_lambda()?;
        Ok(cert)
    }

    pub fn homotopy(&self) -> &'a GreenHomotopy {
        self.h
    }

    pub fn geometry(&self) -> &CertificateGeometry {
        &self.geometry
    }

    pub fn compact(&self) -> &Window {
        &self.compact
    }

    pub fn slab(&self) -> &Window {
        &self.slab
    }

    /// `C[1]`, with differential `−Q`.
    pub fn shifted_compact(&self) -> &LadderComplex {
        &self.shifted
    }

    pub fn lambda_map(&self) -> &GradedMap {
        &self.lambda
    }

    /// `Λ` as a degree-0 map `C[1] → S`: column `j` of degree `n` is `Λ` of the
    /// `j`-th cell of `C^{n+1}`, restricted to `S^n`.
    fn assemble_lambda(&self) -> Result<GradedMap, HomalgError> {
        let f = self.h.fields();
        let dom = self.shifted.space();
        let cod = self.slab.complex.space();
        let mut blocks = BTreeMap::new();
        for n in dom.degrees() {
            if !f.has_degree(n) {
                continue;
            }
            let cells = self.compact.cells(n + 1);
            let cols: Vec<Vec<Scalar>> = cells
                .par_iter()
                .map(|&j| self.slab.restrict(n, &self.h.rma(n + 1, &basis(f.dim(n + 1), j))))
                .collect();
            blocks.insert(n, SparseMatrix::from_columns(cod.dim(n), &cols));
        }
        GradedMap::new(dom, cod, 0, blocks)
    }

    /// `Θφ = Q(χ₊φ) − χ₊Qφ`, degree `n → n + 1` on slab vectors.
    pub fn theta(&self, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        self.theta_branch(n, v, true)
    }

    /// `Q(χ±φ) − χ±Qφ`; the minus branch enters `Θ` with a sign.
    pub fn theta_branch(&self, n: i64, v: &[Scalar], plus: bool) -> Vec<Scalar> {
        let f = self.h.fields();
        let a = self.h.q(n, &weight(f, n, &self.chi, plus, v));
        let b = weight(f, n + 1, &self.chi, plus, &self.h.q(n, v));
        sub(&a, &b)
    }

    /// `Ξψ = −χ₋Λ₊ψ − χ₊Λ₋ψ` for `ψ` of field degree `n`.
    pub fn xi(&self, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.h.fields();
        let a = weight(f, n - 1, &self.chi, false, &self.h.lambda(Direction::Retarded, n, v));
        let b = weight(f, n - 1, &self.chi, true, &self.h.lambda(Direction::Advanced, n, v));
        neg(&add(&a, &b))
    }

    /// `Υφ = Λ₊χ₊φ + Λ₋χ₋φ`.
    pub fn upsilon(&self, n: i64, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.h.fields();
        let a = self.h.lambda(Direction::Retarded, n, &weight(f, n, &self.chi, true, v));
        let b = self.h.lambda(Direction::Advanced, n, &weight(f, n, &self.chi, false, v));
        add(&a, &b)
    }

    /// `Θ` as a degree-0 map `S → C[1]`, or the first cell where `Θφ` leaves `C`.
    pub fn theta_map(&self) -> Result<GradedMap, serde_json::Value> {
        let f = self.h.fields();
        let dom = self.slab.complex.space();
        let cod = self.shifted.space();
        let mut blocks = BTreeMap::new();
        for n in dom.degrees() {
            if !f.has_degree(n + 1) {
                continue;
            }
            let mut cols = Vec::new();
            for (k, _) in self.slab.cells(n).iter().enumerate() {
                let phi = self.slab.extend(f, n, &basis(self.slab.cells(n).len(), k));
                let t = self.theta(n, &phi);
                if let Some(i) = self.compact.contains(n + 1, &t) {
                    return Err(json!({ "degree": n, "source": self.slab.complex.space().label(n, k), "escapes_at": f.label(n + 1, i) }));
                }
                cols.push(self.compact.restrict(n + 1, &t));
            }
            blocks.insert(n, SparseMatrix::from_columns(cod.dim(n), &cols));
        }
        Ok(GradedMap::new(dom, cod, 0, blocks).expect("shapes follow the windows"))
    }
}

/// Every check of the certificate; `samples` bounds the test sections per degree (`None`: all).
pub fn verify_certificate(cert: &Certificate, samples: Option<usize>) -> Vec<CheckResult> {
    let h = cert.h;
    let f = h.fields();
    let mut out = Vec::new();
    let take = |len: usize| -> Vec<usize> {
        match samples {
            None => (0..len).collect(),
            Some(s) if s >= len => (0..len).collect(),
            Some(s) => (0..s).map(|k| k * len / s).collect(),
        }
    };

    let t0 = Instant::now();
    let lam_ok = is_cochain_map(&cert.lambda, &cert.shifted, &cert.slab.complex);
    out.push(
        CheckResult::from_outcome(
            "rma_cochain_map",
            "Q L + L Q_c = 0 on C[1] -> S",
            match lam_ok {
                Ok(true) => Ok(()),
                Ok(false) => Err(json!({ "reason": "dL != 0" })),
                Err(e) => Err(json!({ "error": e.to_string() })),
            },
        )
        .with_note(format!("C dims {:?}, S dims {:?}", cert.compact.dims(), cert.slab.dims()))
        .timed(t0),
    );

    let t0 = Instant::now();
    let cone_dims = cone(&cert.lambda, &cert.shifted, &cert.slab.complex).map(|c| cohomology_dims(&c));
    out.push(
        CheckResult::from_outcome(
            "rma_cone_acyclic",
            "H(cone L) = 0",
            match &cone_dims {
                Ok(d) if d.values().all(|&x| x == 0) => Ok(()),
                Ok(d) => Err(json!({ "cohomology": d })),
                Err(e) => Err(json!({ "error": e.to_string() })),
            },
        )
        .with_note(format!(
            "H(C[1]) = {:?}, H(S) = {:?}",
            cohomology_dims(&cert.shifted).values().collect::<Vec<_>>(),
            cohomology_dims(&cert.slab.complex).values().collect::<Vec<_>>()
        ))
        .timed(t0),
    );

    let t0 = Instant::now();
    let mut branches = Ok(());
    'b: for n in f.degrees().filter(|n| f.has_degree(n + 1)) {
        let cells = cert.slab.cells(n);
        for k in take(cells.len()) {
            let phi = cert.slab.extend(f, n, &basis(cells.len(), k));
            let p = cert.theta_branch(n, &phi, true);
            let m = neg(&cert.theta_branch(n, &phi, false));
            let all: Vec<usize> = (0..p.len()).collect();
            if let Some(w) = mismatch(f, n + 1, &p, &m, &all) {
                branches = Err(w);
                break 'b;
            }
        }
    }
    out.push(CheckResult::from_outcome("theta_branches", "Q(x+ a) - x+ Qa = -(Q(x- a) - x- Qa)", branches).timed(t0));

    let t0 = Instant::now();
    let theta = cert.theta_map();
    let theta_ok = match &theta {
        Ok(t) => match is_cochain_map(t, &cert.slab.complex, &cert.shifted) {
            Ok(true) => Ok(()),
            Ok(false) => Err(json!({ "reason": "dTheta != 0" })),
            Err(e) => Err(json!({ "error": e.to_string() })),
        },
        Err(w) => Err(w.clone()),
    };
    out.push(CheckResult::from_outcome("theta_cochain_map", "Theta: S -> C[1] is a cochain map with compact image", theta_ok).timed(t0));

    // ∂Ξ = −QΞ − ΞQ on C[1]
    let t0 = Instant::now();
    let mut xi_res = Ok(());
    let mut xi_escapes = 0usize;
    'x: for n in f.degrees() {
        let cells = cert.compact.cells(n);
        for k in take(cells.len()) {
            let psi = cert.compact.extend(f, n, &basis(cells.len(), k));
            let xi = cert.xi(n, &psi);
            if f.has_degree(n - 1) && cert.compact.contains(n - 1, &xi).is_some() {
                xi_escapes += 1;
            }
            let left = neg(&add(&h.q(n - 1, &xi), &cert.xi(n + 1, &h.q(n, &psi))));
            let lam = h.rma(n, &psi);
            let right = if f.has_degree(n - 1) { sub(&psi, &cert.theta(n - 1, &lam)) } else { psi.clone() };
            let all: Vec<usize> = (0..psi.len()).collect();
            if let Some(w) = mismatch(f, n, &left, &right, &all) {
                xi_res = Err(w);
                break 'x;
            }
        }
    }
    out.push(
        CheckResult::from_outcome("xi_homotopy", "dXi = id - Theta L on C[1]", xi_res)
            .with_note(format!("Xi leaves C on {xi_escapes} basis sections"))
            .timed(t0),
    );

    // ∂Υ = QΥ + ΥQ on S, compared on the cells of S
    let t0 = Instant::now();
    let mut up_res = Ok(());
    'u: for n in f.degrees() {
        let cells = cert.slab.cells(n);
        for k in take(cells.len()) {
            let phi = cert.slab.extend(f, n, &basis(cells.len(), k));
            let left = add(&h.q(n - 1, &cert.upsilon(n, &phi)), &cert.upsilon(n + 1, &h.q(n, &phi)));
            let right = if f.has_degree(n + 1) { sub(&phi, &h.rma(n + 1, &cert.theta(n, &phi))) } else { phi.clone() };
            if let Some(w) = mismatch(f, n, &left, &right, cells) {
                up_res = Err(w);
                break 'u;
            }
        }
    }
    out.push(CheckResult::from_outcome("upsilon_homotopy", "dUpsilon = id - L Theta on S", up_res).timed(t0));
    out
}
