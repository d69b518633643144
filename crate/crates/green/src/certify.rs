//! Discrete causal-solvability certificate.
//!
//! A degree-preserving `P` is certified when, in every degree and for every
//! row cell `c` at base time `s`:
//! - the only entry at base time `s+1` is `c + e_t` with a nonzero coefficient
//!   (rows whose `c + e_t` leaves the slab are terminal), and symmetrically at
//!   `s−1` for the advanced sweep;
//! - no entry reaches further than one level in time;
//! - every vertex of the solved cell lies in the causal future (past) of some
//!   vertex of every other cell the row reads.
//!
//! Forward substitution is then well defined and support-propagating.

use ghc_homalg::{GradedMap, Scalar};
use ghc_lattice::{CausalLattice, Cell, FieldSpace};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Issue {
    MissingLeading { degree: i64, row: String, direction: String },
    ExtraLeading { degree: i64, row: String, col: String, direction: String },
    TimeReach { degree: i64, row: String, col: String },
    ConeViolation { degree: i64, row: String, col: String, direction: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
pub enum CertificationFailure {
    #[error("operator has degree {0}, expected 0")]
    NotDegreeZero(i64),
    #[error("operator does not act on the given field space")]
    SpaceMismatch,
    #[error("{} causal issues, first: {:?}", .total, .issues.first())]
    Issues { total: usize, issues: Vec<Issue> },
}

/// One substitution step: `ψ[target] = (φ[row] − Σ rest·ψ) · inv_lead`.
#[derive(Clone, Debug)]
pub struct SolveStep {
    pub row: usize,
    pub target: usize,
    pub level: i64,
    pub inv_lead: Scalar,
    pub rest: Vec<(usize, Scalar)>,
}

/// Ordered substitution schedule for one degree and one time direction.
#[derive(Clone, Debug, Default)]
pub struct Sweep {
    pub steps: Vec<SolveStep>,
    /// Rows that determine nothing (their solved cell would leave the slab).
    pub terminal: Vec<usize>,
    /// Cells never solved for; they carry the zero initial data.
    pub initial: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Retarded,
    Advanced,
}

impl Direction {
    pub fn sign(self) -> i64 {
        match self {
            Direction::Retarded => 1,
            Direction::Advanced => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Retarded => "retarded",
            Direction::Advanced => "advanced",
        }
    }
}

/// A certified causal operator with its extracted substitution schedules.
#[derive(Clone, Debug)]
pub struct CausalOperator {
    fields: FieldSpace,
    p: GradedMap,
    sweeps: BTreeMap<(Direction, i64), Sweep>,
}

/// `w ∈ J⁺(u)` when `dir` is retarded, `w ∈ J⁻(u)` otherwise.
fn in_cone(lat: &CausalLattice, dir: Direction, u: [i64; 3], w: [i64; 3]) -> bool {
    let dt = (w[0] - u[0]) * dir.sign();
    dt >= 0 && lat.spatial_distance(u, w) <= dt
}

const MAX_LISTED: usize = 20;

impl CausalOperator {
    pub fn fields(&self) -> &FieldSpace {
        &self.fields
    }

    pub fn p(&self) -> &GradedMap {
        &self.p
    }

    pub fn sweep(&self, dir: Direction, n: i64) -> &Sweep {
        &self.sweeps[&(dir, n)]
    }

    /// Leading coefficients of the retarded sweep, keyed by row.
    pub fn leading_block(&self, n: i64) -> Vec<(usize, Scalar)> {
        self.sweep(Direction::Retarded, n).steps.iter().map(|s| (s.row, s.inv_lead.recip())).collect()
    }
}

fn certify_degree(
    fields: &FieldSpace,
    p: &GradedMap,
    n: i64,
    dir: Direction,
    issues: &mut Vec<Issue>,
) -> Sweep {
    let lat = fields.lattice();
    let m = p.block(n);
    let label = |i: usize| fields.label(n, i);
    let dirname = dir.name().to_string();
    let mut steps = Vec::new();
    let mut terminal = Vec::new();
    let mut solved = vec![false; fields.dim(n)];
    for r in 0..m.nrows() {
        let c = fields.cell(n, r);
        let s = c.base[0];
        let mut target_cell = c;
        target_cell.base[0] += dir.sign();
        let target = fields.position(n, &target_cell);
        let mut lead = None;
        let mut rest = Vec::new();
        for (j, v) in m.row(r) {
            let cj = fields.cell(n, *j);
            let dt = cj.base[0] - s;
            if dt.abs() > 1 {
                issues.push(Issue::TimeReach { degree: n, row: label(r), col: label(*j) });
                continue;
            }
            if dt == dir.sign() {
                if Some(*j) == target {
                    lead = Some(v.clone());
                } else {
                    issues.push(Issue::ExtraLeading { degree: n, row: label(r), col: label(*j), direction: dirname.clone() });
                }
                continue;
            }
            rest.push((*j, v.clone(), cj));
        }
        let Some(t) = target else {
            terminal.push(r);
            continue;
        };
        let Some(lead) = lead else {
            issues.push(Issue::MissingLeading { degree: n, row: label(r), direction: dirname.clone() });
            continue;
        };
        let tv = lat.vertices(&target_cell);
        for (j, _, cj) in &rest {
            let uv = lat.vertices(cj);
            if !tv.iter().all(|w| uv.iter().any(|u| in_cone(lat, dir, *u, *w))) {
                issues.push(Issue::ConeViolation { degree: n, row: label(r), col: label(*j), direction: dirname.clone() });
            }
        }
        solved[t] = true;
        steps.push(SolveStep {
            row: r,
            target: t,
            level: s,
            inv_lead: lead.recip(),
            rest: rest.into_iter().map(|(j, v, _)| (j, v)).collect(),
        });
    }
    // forward sweeps run upward in time, backward sweeps downward
    steps.sort_by_key(|st| (st.level * dir.sign(), st.row));
    let initial = (0..solved.len()).filter(|&i| !solved[i]).collect();
    Sweep { steps, terminal, initial }
}

/// Certifies `p` on `fields`, or lists the offending rows.
pub fn certify_causal(p: &GradedMap, fields: &FieldSpace) -> Result<CausalOperator, CertificationFailure> {
    if p.degree() != 0 {
        return Err(CertificationFailure::NotDegreeZero(p.degree()));
    }
    if !p.dom().same_shape(fields.graded()) || !p.cod().same_shape(fields.graded()) {
        return Err(CertificationFailure::SpaceMismatch);
    }
    let mut issues = Vec::new();
    let mut sweeps = BTreeMap::new();
    for n in fields.degrees() {
        for dir in [Direction::Retarded, Direction::Advanced] {
            let sw = certify_degree(fields, p, n, dir, &mut issues);
            sweeps.insert((dir, n), sw);
        }
    }
    if !issues.is_empty() {
        let total = issues.len();
        issues.truncate(MAX_LISTED);
        return Err(CertificationFailure::Issues { total, issues });
    }
    Ok(CausalOperator { fields: fields.clone(), p: p.clone(), sweeps })
}

/// Cell shifted in time, used by callers that reason about leading cells.
pub fn time_shift(c: &Cell, dt: i64) -> Cell {
    let mut out = *c;
    out.base[0] += dt;
    out
}
