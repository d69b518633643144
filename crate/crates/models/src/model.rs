//! Model specifications, their complexes `(F, Q)` and Green's witnesses `W`.

use ghc_green::{certify_causal, CausalOperator, CertificationFailure};
use ghc_homalg::{is_cochain_map, shift, GradedMap, HomalgError, LadderComplex, Scalar, SparseMatrix};
use ghc_lattice::dec::{codifferential, dalembertian, exterior_d};
use ghc_lattice::{CausalLattice, FieldSpace, LatticeError, LocalOperator, Stencil};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    KleinGordon { mass: Scalar },
    DeRham,
    ChernSimons,
    MaxwellP { p: usize },
}

#[derive(Clone, Debug)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub lattice: CausalLattice,
}

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("invalid model: {0}")]
    InvalidSpec(String),
    #[error("witness not causal: {0}")]
    Certification(#[from] CertificationFailure),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Homalg(#[from] HomalgError),
    #[error("no differential pairing for {0}")]
    PairingUnsupported(String),
    #[error("pairing synthesis failed: {0}")]
    Synthesis(String),
}

impl ModelSpec {
    pub fn new(kind: ModelKind, lattice: CausalLattice) -> Result<Self, ModelError> {
        let m = lattice.dim();
        match &kind {
            ModelKind::KleinGordon { mass } if mass.signum() < 0 => {
                return Err(ModelError::InvalidSpec(format!("mass {mass} is negative")))
            }
            ModelKind::ChernSimons if m != 3 => {
                return Err(ModelError::InvalidSpec(format!("Chern-Simons needs dimension 3, got {m}")))
            }
            ModelKind::MaxwellP { p } if *p != 1 || m != 2 => {
                return Err(ModelError::InvalidSpec(format!("Maxwell forms supported for p = 1, m = 2; got p = {p}, m = {m}")))
            }
            _ => {}
        }
        Ok(ModelSpec { kind, lattice })
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ModelKind::KleinGordon { .. } => "klein_gordon",
            ModelKind::DeRham => "de_rham",
            ModelKind::ChernSimons => "chern_simons",
            ModelKind::MaxwellP { .. } => "maxwell_p",
        }
    }
}

/// A model on a lattice: field space with local `Q` (degree 1) and `W` (degree −1).
#[derive(Clone, Debug)]
pub struct Model {
    spec: ModelSpec,
    fields: FieldSpace,
    q: LocalOperator,
    w: LocalOperator,
}

fn op(degree: i64, entries: Vec<(i64, Stencil)>) -> LocalOperator {
    LocalOperator::new(degree, entries.into_iter().collect::<BTreeMap<_, _>>())
}

impl Model {
    pub fn build(spec: &ModelSpec) -> Result<Self, ModelError> {
        let spec = ModelSpec::new(spec.kind.clone(), spec.lattice.clone())?;
        let lat = &spec.lattice.clone();
        let m = lat.dim();
        let minus = Scalar::from_int(-1);
        let (lo, forms, q, w) = match &spec.kind {
            ModelKind::KleinGordon { mass } => {
                let p = dalembertian(m, 0).sub(&Stencil::scalar(m, 0, &(mass * mass)));
                (0, vec![0, 0], op(1, vec![(0, p)]), op(-1, vec![(1, Stencil::identity(m, 0))]))
            }
            ModelKind::DeRham => (
                0,
                (0..=m).collect(),
                op(1, (0..m).map(|k| (k as i64, exterior_d(m, k))).collect()),
                op(-1, (1..=m).map(|k| (k as i64, codifferential(m, k))).collect()),
            ),
            // the de Rham complex shifted by one: Q = −d, W = −δ
            ModelKind::ChernSimons => (
                -1,
                (0..=m).collect(),
                op(1, (0..m).map(|k| (k as i64 - 1, exterior_d(m, k).scale(&minus))).collect()),
                op(-1, (1..=m).map(|k| (k as i64 - 1, codifferential(m, k).scale(&minus))).collect()),
            ),
            ModelKind::MaxwellP { .. } => (
                -1,
                vec![0, 1, 1, 0],
                op(1, vec![(-1, exterior_d(2, 0)), (0, codifferential(2, 2).compose(&exterior_d(2, 1))), (1, codifferential(2, 1))]),
                op(-1, vec![(0, codifferential(2, 1)), (1, Stencil::identity(2, 1)), (2, exterior_d(2, 0))]),
            ),
        };
        let fields = FieldSpace::new(lat, lo, forms);
        let model = Model { spec, fields, q, w };
        lat.register_radius(model.p_local().radius())?;
        Ok(model)
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn lattice(&self) -> &CausalLattice {
        &self.spec.lattice
    }

    pub fn fields(&self) -> &FieldSpace {
        &self.fields
    }

    pub fn q_local(&self) -> &LocalOperator {
        &self.q
    }

    pub fn w_local(&self) -> &LocalOperator {
        &self.w
    }

    /// `P = QW + WQ` as composite stencils.
    pub fn p_local(&self) -> LocalOperator {
        self.q.compose(&self.w).add(&self.w.compose(&self.q))
    }

    pub fn q_map(&self) -> GradedMap {
        self.q.to_graded_map(&self.fields, &self.fields)
    }

    pub fn w_map(&self) -> GradedMap {
        self.w.to_graded_map(&self.fields, &self.fields)
    }

    /// Slab matrix of the composite stencil, not the product of slab matrices.
    pub fn p_map(&self) -> GradedMap {
        self.p_local().to_graded_map(&self.fields, &self.fields)
    }

    pub fn complex(&self) -> Result<LadderComplex, ModelError> {
        Ok(LadderComplex::new(self.fields.graded().clone(), self.q_map())?)
    }
}

/// A Green's witness with its certified induced operator.
#[derive(Clone, Debug)]
pub struct GreenWitness {
    pub w: GradedMap,
    pub w_local: LocalOperator,
    pub p: CausalOperator,
}

pub fn build_complex(spec: &ModelSpec) -> Result<LadderComplex, ModelError> {
    Model::build(spec)?.complex()
}

pub fn build_witness(spec: &ModelSpec) -> Result<GreenWitness, ModelError> {
    let model = Model::build(spec)?;
    witness_of(&model)
}

pub fn witness_of(model: &Model) -> Result<GreenWitness, ModelError> {
    let p = certify_causal(&model.p_map(), model.fields())?;
    Ok(GreenWitness { w: model.w_map(), w_local: model.w_local().clone(), p })
}

/// Checks that the identity is an isomorphism from the Chern-Simons complex
/// to the shifted de Rham complex on the same lattice.
pub fn chern_simons_is_shifted_de_rham(lat: &CausalLattice) -> Result<bool, ModelError> {
    let cs = build_complex(&ModelSpec::new(ModelKind::ChernSimons, lat.clone())?)?;
    let dr = shift(&build_complex(&ModelSpec::new(ModelKind::DeRham, lat.clone())?)?, 1);
    if !cs.space().same_shape(dr.space()) {
        return Ok(false);
    }
    let blocks = cs.space().degrees().map(|n| (n, SparseMatrix::identity(cs.dim(n)))).collect();
    let id = GradedMap::new(cs.space(), dr.space(), 0, blocks)?;
    Ok(is_cochain_map(&id, &cs, &dr)? && cs.q().equals(dr.q()))
}
