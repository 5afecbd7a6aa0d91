use num_complex::Complex64;
use serde::Serialize;

use crate::ncalg::{Generator, Poly, Word};
use crate::presentations::CommutationPair;
use crate::repmodels::{
    check_independence, four_products, free_unitary_model, mixed_products, o2plus_model, remark_model,
    remark_phi_model, torus_model, MatrixModel, ModelError, ModelState, TORUS_DEFAULT_SAMPLES,
};

pub const DEFAULT_SVD_THRESHOLD: f64 = 1e-6;

/// A named monomial family together with the model that separates it.
#[derive(Clone, Debug, PartialEq)]
pub enum IndependenceSuite {
    /// `{a*b, ab*, b*a, ba*}` for the 4×4 commuting non-normal pair.
    RemarkProducts,
    /// `{b*b, bb*, 1}`, read as `{x₂x₂*, x₂*x₂, 1}` in the model `x₂ ↦ b*`.
    RemarkUnit,
    /// `{x₁*x₂, x₁x₂*}` on diagonal torus points.
    Torus { samples: Vec<(Complex64, Complex64)> },
    /// `{x₁*x₂, x₁x₂*, x₂*x₁, x₂x₁*}` on seeded random unitaries.
    FreeUnitary { dim: usize, seed: u64 },
    /// `{v₁₁v₂₁, v₂₁v₁₁}` in the O₂⁺ direct sum.
    O2Plus,
}

impl IndependenceSuite {
    pub const NAMES: [&'static str; 5] = ["remark-products", "remark-unit", "torus", "free-unitary", "o2plus"];

    /// Suite with its default parameters, or `None` for an unknown name.
    pub fn from_name(name: &str, seed: u64) -> Option<Self> {
        Some(match name {
            "remark-products" => IndependenceSuite::RemarkProducts,
            "remark-unit" => IndependenceSuite::RemarkUnit,
            "torus" => IndependenceSuite::Torus { samples: TORUS_DEFAULT_SAMPLES.to_vec() },
            "free-unitary" => IndependenceSuite::FreeUnitary { dim: 4, seed },
            "o2plus" => IndependenceSuite::O2Plus,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            IndependenceSuite::RemarkProducts => "remark-products",
            IndependenceSuite::RemarkUnit => "remark-unit",
            IndependenceSuite::Torus { .. } => "torus",
            IndependenceSuite::FreeUnitary { .. } => "free-unitary",
            IndependenceSuite::O2Plus => "o2plus",
        }
    }

    /// The a, b products only need the matrices to commute, so that suite
    /// may run on a model that violates the sphere normalization.
    fn allows_probe(&self) -> bool {
        matches!(self, IndependenceSuite::RemarkProducts)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub suite: String,
    pub model: String,
    pub model_state: ModelState,
    pub residual_max: f64,
    pub family: Vec<String>,
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    pub rank: usize,
    pub expected_rank: usize,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn x(i: usize) -> Poly {
    Poly::letter(Generator::sphere(i).letter())
}

fn xs(i: usize) -> Poly {
    Poly::letter(Generator::sphere(i).star_letter())
}

fn remark_product_family() -> Vec<Poly> {
    vec![&xs(0) * &x(1), &x(0) * &xs(1), &xs(1) * &x(0), &x(1) * &xs(0)]
}

fn remark_unit_family() -> Vec<Poly> {
    vec![&x(1) * &xs(1), &xs(1) * &x(1), Poly::one()]
}

fn o2plus_family() -> Vec<Poly> {
    let v = |i, j| Generator::orthogonal(i, j).letter();
    vec![Poly::word(Word::from_letters([v(0, 0), v(1, 0)])), Poly::word(Word::from_letters([v(1, 0), v(0, 0)]))]
}

/// Builds the suite's model, refuses it unless its residuals are within
/// tolerance (the a, b products excepted), and reports the numerical rank
/// of the family.
pub fn check_independence_suite(
    suite: &IndependenceSuite,
    threshold: f64,
    tolerance: f64,
) -> Result<IndependenceReport, ModelError> {
    let free = CommutationPair::free(2);
    let (model, family, seed): (MatrixModel, Vec<Poly>, Option<u64>) = match suite {
        IndependenceSuite::RemarkProducts => (remark_model(), remark_product_family(), None),
        IndependenceSuite::RemarkUnit => (remark_phi_model(), remark_unit_family(), None),
        IndependenceSuite::Torus { samples } => (torus_model(samples, &free)?, mixed_products(), None),
        IndependenceSuite::FreeUnitary { dim, seed } => {
            let w = free_unitary_model(*dim, *seed, &free)?;
            (w.model, four_products(), Some(w.seed))
        }
        IndependenceSuite::O2Plus => (o2plus_model(), o2plus_family(), None),
    };
    let mut model = model;
    model.residual_tolerance = tolerance;
    let residuals = model.residuals();
    let model_state = if residuals.max <= model.residual_tolerance { ModelState::Valid } else { ModelState::Probe };
    if model_state == ModelState::Probe && !suite.allows_probe() {
        return Err(ModelError::WitnessInvalid { model: model.name.clone(), residual: residuals.max });
    }
    let r = check_independence(&family, &model, threshold)?;
    Ok(IndependenceReport {
        suite: suite.name().into(),
        model: model.name.clone(),
        model_state,
        residual_max: residuals.max,
        family: family.iter().map(|p| p.to_string()).collect(),
        certified: r.rank == family.len(),
        expected_rank: family.len(),
        rank: r.rank,
        singular_values: r.singular_values,
        threshold,
        seed,
    })
}
