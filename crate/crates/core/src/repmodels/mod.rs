//! Finite-dimensional matrix models of presentations: evaluation,
//! relation residuals, numerical rank of monomial families, direct sums.

mod library;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ncalg::{Generator, Letter, Poly, Word};
use crate::presentations::{
    orthogonal_qg_presentation, sphere_presentation, tuple_space_presentation, unitary_qg_presentation,
    CommutationPair, Presentation, PresentationKind,
};

pub use library::{
    corrected_sphere_model, diagonal_unitary_model, four_products, free_unitary_model, identity_orthogonal_model,
    mixed_products, o2plus_model, o2plus_summands, point_model_sphere, point_model_tuple, remark_matrices,
    remark_model, remark_pair, remark_phi_model, remark_phi_pair, torus_model, FreeUnitaryWitness, NoFiniteWitness,
    TORUS_DEFAULT_SAMPLES,
};

pub type CMatrix = DMatrix<Complex64>;

pub const DEFAULT_RESIDUAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("generator {0} has no assigned matrix")]
    UnassignedGenerator(String),
    #[error("generator {gen} is {rows}×{cols}, expected {dim}×{dim}")]
    ShapeMismatch { gen: String, rows: usize, cols: usize, dim: usize },
    #[error("models represent different presentations")]
    PresentationMismatch,
    #[error("degenerate samples: {0}")]
    DegenerateSamples(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("witness model {model} violates its relations (max residual {residual:e})")]
    WitnessInvalid { model: String, residual: f64 },
    #[error("malformed model file: {0}")]
    Json(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelState {
    /// All relations hold within tolerance.
    Valid,
    /// Some relation is violated; kept for bare matrix computations.
    Probe,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationResidual {
    pub relation: String,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub per_relation: Vec<RelationResidual>,
    pub max: f64,
}

impl ResidualReport {
    pub fn violations(&self, tol: f64) -> impl Iterator<Item = &RelationResidual> {
        self.per_relation.iter().filter(move |r| r.residual > tol)
    }
}

/// Largest singular value; exact zero for the zero matrix.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

pub fn adjoint(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

/// An assignment of complex matrices to the generators of a presentation.
#[derive(Clone, Debug)]
pub struct MatrixModel {
    pub name: String,
    pub dim: usize,
    pub presentation: Presentation,
    assignment: BTreeMap<Generator, CMatrix>,
    pub residual_tolerance: f64,
}

impl MatrixModel {
    pub fn new(
        name: impl Into<String>,
        presentation: Presentation,
        dim: usize,
        assignment: BTreeMap<Generator, CMatrix>,
    ) -> Result<Self, ModelError> {
        for g in presentation.generators() {
            let m = assignment.get(&g).ok_or_else(|| ModelError::UnassignedGenerator(g.to_string()))?;
            if m.nrows() != dim || m.ncols() != dim {
                return Err(ModelError::ShapeMismatch { gen: g.to_string(), rows: m.nrows(), cols: m.ncols(), dim });
            }
        }
        Ok(MatrixModel {
            name: name.into(),
            dim,
            presentation,
            assignment,
            residual_tolerance: DEFAULT_RESIDUAL_TOLERANCE,
        })
    }

    pub fn matrix(&self, g: Generator) -> Option<&CMatrix> {
        self.assignment.get(&g)
    }

    fn letter_matrix(&self, l: Letter) -> Result<CMatrix, ModelError> {
        let m = self.assignment.get(&l.gen).ok_or_else(|| ModelError::UnassignedGenerator(l.gen.to_string()))?;
        Ok(if l.starred { m.adjoint() } else { m.clone() })
    }

    pub fn evaluate_word(&self, w: &Word) -> Result<CMatrix, ModelError> {
        let mut acc = CMatrix::identity(self.dim, self.dim);
        for &l in w.letters() {
            acc = &acc * self.letter_matrix(l)?;
        }
        Ok(acc)
    }

    /// Words go to matrix products, stars to adjoints.
    pub fn evaluate(&self, p: &Poly) -> Result<CMatrix, ModelError> {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (w, c) in p.terms() {
            out += self.evaluate_word(w)? * c.to_complex64();
        }
        Ok(out)
    }

    /// Operator-norm residual of every relation, sums expanded.
    pub fn residuals(&self) -> ResidualReport {
        let mut per_relation = Vec::new();
        let mut relations = self.presentation.relations.clone();
        for r in self.presentation.expanded_sums() {
            if !relations.iter().any(|q| q.poly == r.poly) {
                relations.push(r);
            }
        }
        for r in &relations {
            let residual = self.evaluate(&r.poly).map(|m| operator_norm(&m)).unwrap_or(f64::INFINITY);
            per_relation.push(RelationResidual { relation: format!("{}: {} = 0", r.label, r.poly), residual });
        }
        let max = per_relation.iter().map(|r| r.residual).fold(0.0, f64::max);
        ResidualReport { per_relation, max }
    }

    pub fn state(&self) -> ModelState {
        if self.residuals().max <= self.residual_tolerance {
            ModelState::Valid
        } else {
            ModelState::Probe
        }
    }

    /// Fails with `WitnessInvalid` unless the model is a genuine
    /// representation within tolerance.
    pub fn require_valid(&self) -> Result<(), ModelError> {
        let r = self.residuals();
        if r.max <= self.residual_tolerance {
            Ok(())
        } else {
            Err(ModelError::WitnessInvalid { model: self.name.clone(), residual: r.max })
        }
    }

    /// The same matrices read against another presentation on the same
    /// generators.
    pub fn retarget(&self, presentation: Presentation, name: impl Into<String>) -> Result<Self, ModelError> {
        if presentation.roster() != self.presentation.roster() {
            return Err(ModelError::PresentationMismatch);
        }
        MatrixModel::new(name, presentation, self.dim, self.assignment.clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let generators: BTreeMap<String, Vec<[String; 2]>> = self
            .assignment
            .iter()
            .map(|(g, m)| {
                let entries = (0..self.dim)
                    .flat_map(|i| (0..self.dim).map(move |j| (i, j)))
                    .map(|(i, j)| [m[(i, j)].re.to_string(), m[(i, j)].im.to_string()])
                    .collect();
                (g.to_string(), entries)
            })
            .collect();
        serde_json::json!({
            "name": self.name,
            "dim": self.dim,
            "kind": self.presentation.kind,
            "pair": self.presentation.source,
            "generators": generators,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        #[derive(Deserialize)]
        struct File {
            name: String,
            dim: usize,
            kind: PresentationKind,
            pair: CommutationPair,
            generators: BTreeMap<String, Vec<[String; 2]>>,
        }
        let f: File = serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        let pres = match f.kind {
            PresentationKind::ComplexSphere => sphere_presentation(&f.pair),
            PresentationKind::UnitaryQg => unitary_qg_presentation(&f.pair),
            PresentationKind::OrthogonalQg => orthogonal_qg_presentation(&f.pair.epsilon),
            PresentationKind::TupleSpace => tuple_space_presentation(&f.pair.epsilon),
        };
        let family = pres.kind.family();
        let mut assignment = BTreeMap::new();
        for (name, entries) in &f.generators {
            let g =
                Generator::parse(name, family).ok_or_else(|| ModelError::Json(format!("unknown generator {name}")))?;
            if entries.len() != f.dim * f.dim {
                return Err(ModelError::Json(format!("{name} has {} entries", entries.len())));
            }
            let parse = |s: &str| s.parse::<f64>().map_err(|e| ModelError::Json(format!("{name}: {e}")));
            let vals = entries
                .iter()
                .map(|[re, im]| Ok(Complex64::new(parse(re)?, parse(im)?)))
                .collect::<Result<Vec<_>, ModelError>>()?;
            assignment.insert(g, CMatrix::from_row_slice(f.dim, f.dim, &vals));
        }
        MatrixModel::new(f.name, pres, f.dim, assignment)
    }
}

/// Block-diagonal sum of models of one presentation.
pub fn direct_sum(models: &[MatrixModel], name: impl Into<String>) -> Result<MatrixModel, ModelError> {
    let first = models.first().ok_or_else(|| ModelError::InvalidParameter("empty direct sum".into()))?;
    let pres = &first.presentation;
    if models.iter().any(|m| m.presentation.kind != pres.kind || m.presentation.source != pres.source) {
        return Err(ModelError::PresentationMismatch);
    }
    let dim: usize = models.iter().map(|m| m.dim).sum();
    let mut assignment = BTreeMap::new();
    for g in pres.generators() {
        let mut big = CMatrix::zeros(dim, dim);
        let mut off = 0;
        for m in models {
            big.view_mut((off, off), (m.dim, m.dim)).copy_from(&m.assignment[&g]);
            off += m.dim;
        }
        assignment.insert(g, big);
    }
    let mut out = MatrixModel::new(name, pres.clone(), dim, assignment)?;
    out.residual_tolerance = models.iter().map(|m| m.residual_tolerance).fold(f64::INFINITY, f64::min);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceResult {
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

/// Numerical rank of the images of `family`, flattened to vectors.
pub fn check_independence(
    family: &[Poly],
    model: &MatrixModel,
    threshold: f64,
) -> Result<IndependenceResult, ModelError> {
    if family.is_empty() {
        return Err(ModelError::InvalidParameter("empty family".into()));
    }
    let d2 = model.dim * model.dim;
    let mut cols = CMatrix::zeros(d2, family.len());
    for (k, p) in family.iter().enumerate() {
        let m = model.evaluate(p)?;
        for i in 0..model.dim {
            for j in 0..model.dim {
                cols[(i * model.dim + j, k)] = m[(i, j)];
            }
        }
    }
    let mut singular_values: Vec<f64> = cols.svd(false, false).singular_values.iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let rank = singular_values.iter().filter(|&&s| s > threshold).count();
    Ok(IndependenceResult { rank, singular_values })
}
