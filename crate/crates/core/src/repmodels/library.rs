use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{check_independence, direct_sum, CMatrix, MatrixModel, ModelError};
use crate::ncalg::{Generator, Poly, Word};
use crate::presentations::{
    orthogonal_qg_presentation, sphere_presentation, tuple_space_presentation, unitary_qg_presentation, BinMatrix,
    CommutationPair,
};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = c(1.0);
    m
}

/// The 4×4 matrices `a = e₃₁ ⊕ √2/2`, `b = e₂₁ + e₃₂ ⊕ √2/2`.
pub fn remark_matrices() -> (CMatrix, CMatrix) {
    let mut a = unit(4, 2, 0);
    a[(3, 3)] = c(FRAC_1_SQRT_2);
    let mut b = unit(4, 1, 0) + unit(4, 2, 1);
    b[(3, 3)] = c(FRAC_1_SQRT_2);
    (a, b)
}

/// ε = [[0,1],[1,0]], η = 0.
pub fn remark_pair() -> CommutationPair {
    CommutationPair::from_rows(&[&[0, 1], &[1, 0]], &[&[0, 0], &[0, 0]])
}

/// ε = 0, η = [[0,1],[1,0]].
pub fn remark_phi_pair() -> CommutationPair {
    CommutationPair::from_rows(&[&[0, 0], &[0, 0]], &[&[0, 1], &[1, 0]])
}

fn sphere_model(name: &str, pair: &CommutationPair, dim: usize, xs: Vec<CMatrix>) -> Result<MatrixModel, ModelError> {
    let assignment = xs.into_iter().enumerate().map(|(i, m)| (Generator::sphere(i), m)).collect();
    MatrixModel::new(name, sphere_presentation(pair), dim, assignment)
}

/// `x₁ ↦ a`, `x₂ ↦ b` on the commuting sphere. The matrices commute
/// (`ab = ba ≠ 0`) and are not normal, but the normalization sums fail, so
/// the model is only a probe.
pub fn remark_model() -> MatrixModel {
    let (a, b) = remark_matrices();
    sphere_model("remark", &remark_pair(), 4, vec![a, b]).expect("complete assignment")
}

/// `x₁ ↦ a`, `x₂ ↦ b*` on the sphere with ε = 0 and x₁, x₂* commuting with
/// each other's adjoints. This one satisfies every relation.
pub fn remark_phi_model() -> MatrixModel {
    let (a, b) = remark_matrices();
    sphere_model("remark-phi", &remark_phi_pair(), 4, vec![a, b.adjoint()]).expect("complete assignment")
}

/// Why no finite-dimensional model can have the properties asked of a
/// commuting non-normal witness.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no finite-dimensional witness exists: {reason}")]
pub struct NoFiniteWitness {
    pub reason: String,
}

/// A model of the commuting sphere (ε₁₂ = 1, η = 0) with non-normal
/// coordinates. None exists: commuting matrices share a Schur basis, and in
/// that basis the first diagonal entries of A*A + B*B and AA* + BB* differ
/// by the squared norm of the strictly upper first rows; equality forces
/// those rows to vanish, and induction on the dimension makes A, B
/// diagonal, hence normal. The same conclusion holds in every Hilbert-space
/// representation (a commuting spherical isometry whose adjoint is also a
/// spherical isometry is normal).
pub fn corrected_sphere_model() -> Result<MatrixModel, NoFiniteWitness> {
    Err(NoFiniteWitness {
        reason: "commuting A, B with A*A + B*B = AA* + BB* = 1 are simultaneously unitarily \
                 triangularizable, and comparing diagonal entries row by row forces the \
                 triangular forms to be diagonal, so A and B are normal"
            .into(),
    })
}

pub const TORUS_DEFAULT_SAMPLES: [(Complex64, Complex64); 2] =
    [(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)), (Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0))];

/// Coordinates `x_i = (√2/2) z_i` on the two-torus, one diagonal entry per
/// sample point. Commuting normal entries satisfy every (ε, η) relation.
pub fn torus_model(samples: &[(Complex64, Complex64)], pair: &CommutationPair) -> Result<MatrixModel, ModelError> {
    if pair.n() != 2 {
        return Err(ModelError::InvalidParameter("the torus model has two coordinates".into()));
    }
    if samples.len() < 2 {
        return Err(ModelError::DegenerateSamples("need at least two sample points".into()));
    }
    if let Some((z, w)) = samples.iter().find(|(z, w)| (z.norm() - 1.0).abs() > 1e-12 || (w.norm() - 1.0).abs() > 1e-12)
    {
        return Err(ModelError::InvalidParameter(format!("phases must have modulus 1, got ({z}, {w})")));
    }
    let d = samples.len();
    let x1 = CMatrix::from_diagonal(&DVector::from_iterator(d, samples.iter().map(|(z, _)| z * FRAC_1_SQRT_2)));
    let x2 = CMatrix::from_diagonal(&DVector::from_iterator(d, samples.iter().map(|(_, w)| w * FRAC_1_SQRT_2)));
    let model = sphere_model("torus", pair, d, vec![x1, x2])?;
    let r = check_independence(&mixed_products(), &model, 1e-6)?;
    if r.rank < 2 {
        return Err(ModelError::DegenerateSamples(format!(
            "x1* x2 and x1 x2* have rank {} on these phases; pick non-proportional ones",
            r.rank
        )));
    }
    Ok(model)
}

/// `{x₁* x₂, x₁ x₂*}`
pub fn mixed_products() -> Vec<Poly> {
    let x = |i: usize| Generator::sphere(i).letter();
    let xs = |i: usize| Generator::sphere(i).star_letter();
    vec![Poly::word(Word::from_letters([xs(0), x(1)])), Poly::word(Word::from_letters([x(0), xs(1)]))]
}

/// `{x₁* x₂, x₁ x₂*, x₂* x₁, x₂ x₁*}`
pub fn four_products() -> Vec<Poly> {
    let x = |i: usize| Generator::sphere(i).letter();
    let xs = |i: usize| Generator::sphere(i).star_letter();
    vec![
        Poly::word(Word::from_letters([xs(0), x(1)])),
        Poly::word(Word::from_letters([x(0), xs(1)])),
        Poly::word(Word::from_letters([xs(1), x(0)])),
        Poly::word(Word::from_letters([x(1), xs(0)])),
    ]
}

fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    g.qr().q()
}

#[derive(Clone, Debug)]
pub struct FreeUnitaryWitness {
    pub model: MatrixModel,
    /// Seed of the accepted draw.
    pub seed: u64,
}

/// `x_i = (√2/2) U_i` with seeded pseudo-random unitaries, redrawn with
/// the next seed if the four mixed products are not independent.
pub fn free_unitary_model(dim: usize, seed: u64, pair: &CommutationPair) -> Result<FreeUnitaryWitness, ModelError> {
    if dim < 3 {
        // For 2×2 unitaries V* = (tr V · 1 − V)/det V, so the four products
        // span at most three dimensions.
        return Err(ModelError::InvalidParameter(format!("dimension {dim} < 3 cannot separate the four products")));
    }
    if pair.n() != 2 {
        return Err(ModelError::InvalidParameter("the free unitary model has two coordinates".into()));
    }
    for s in seed..seed + 16 {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let u1 = random_unitary(dim, &mut rng);
        let u2 = random_unitary(dim, &mut rng);
        let model = sphere_model("free-unitary", pair, dim, vec![u1 * c(FRAC_1_SQRT_2), u2 * c(FRAC_1_SQRT_2)])?;
        if check_independence(&four_products(), &model, 1e-6)?.rank == 4 {
            return Ok(FreeUnitaryWitness { model, seed: s });
        }
    }
    Err(ModelError::DegenerateSamples(format!("16 draws from seed {seed} were degenerate")))
}

/// The two summands of the O₂⁺ witness. The first is commutative,
/// `[[H, H], [H, −H]]` with `H = ½[[1, 1], [1, −1]]`, a pair of classical
/// points `±(√2/2)[[1, 1], [1, −1]]` written in a dyadic basis. The second is
/// the anticommuting block model `[[A, B], [B, A]]` with
/// `A = (σ_z + σ_x)/2`, `B = (σ_z − σ_x)/2`. All entries are dyadic, so
/// orthogonality holds exactly in floating point.
pub fn o2plus_summands() -> (MatrixModel, MatrixModel) {
    let eps = BinMatrix::zeros(2);
    let pres = orthogonal_qg_presentation(&eps);
    let m2 = |e: [f64; 4]| CMatrix::from_row_slice(2, 2, &e.map(c));
    let a = m2([0.5, 0.5, 0.5, -0.5]);
    let b = m2([0.5, -0.5, -0.5, -0.5]);
    let h = a.clone();
    let point: BTreeMap<Generator, CMatrix> = [
        (Generator::orthogonal(0, 0), h.clone()),
        (Generator::orthogonal(0, 1), h.clone()),
        (Generator::orthogonal(1, 0), h.clone()),
        (Generator::orthogonal(1, 1), -h),
    ]
    .into_iter()
    .collect();
    let block: BTreeMap<Generator, CMatrix> = [
        (Generator::orthogonal(0, 0), a.clone()),
        (Generator::orthogonal(0, 1), b.clone()),
        (Generator::orthogonal(1, 0), b),
        (Generator::orthogonal(1, 1), a),
    ]
    .into_iter()
    .collect();
    (
        MatrixModel::new("o2plus-commutative", pres.clone(), 2, point).expect("complete"),
        MatrixModel::new("o2plus-anticommuting", pres, 2, block).expect("complete"),
    )
}

/// Direct sum of the two [`o2plus_summands`].
pub fn o2plus_model() -> MatrixModel {
    let (p, q) = o2plus_summands();
    direct_sum(&[p, q], "o2plus").expect("same presentation")
}

/// 1-dimensional: `x_k ↦ z₀`, all other coordinates ↦ 0 (k is 1-based).
pub fn point_model_sphere(
    k: usize,
    n: usize,
    pair: &CommutationPair,
    z0: Complex64,
) -> Result<MatrixModel, ModelError> {
    if k == 0 || k > n || pair.n() != n {
        return Err(ModelError::InvalidParameter(format!("index {k} out of range for n = {n}")));
    }
    let xs = (0..n).map(|i| CMatrix::from_element(1, 1, if i == k - 1 { z0 } else { c(0.0) })).collect();
    sphere_model(&format!("point-{k}"), pair, 1, xs)
}

fn identity_assignment(family_gen: impl Fn(usize, usize) -> Generator, n: usize) -> BTreeMap<Generator, CMatrix> {
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (family_gen(i, j), CMatrix::from_element(1, 1, c(if i == j { 1.0 } else { 0.0 }))))
        .collect()
}

/// 1-dimensional tuple-space character with column k equal to e_k. The
/// remaining columns must also be unit vectors, so the whole assignment is
/// `x_ij ↦ δ_ij`.
pub fn point_model_tuple(k: usize, eps: &BinMatrix) -> Result<MatrixModel, ModelError> {
    let n = eps.n();
    if k == 0 || k > n {
        return Err(ModelError::InvalidParameter(format!("index {k} out of range for n = {n}")));
    }
    MatrixModel::new(format!("point-{k}"), tuple_space_presentation(eps), 1, identity_assignment(Generator::tuple, n))
}

/// `u_ij ↦ δ_ij` (the counit).
pub fn identity_orthogonal_model(eps: &BinMatrix) -> MatrixModel {
    MatrixModel::new("counit", orthogonal_qg_presentation(eps), 1, identity_assignment(Generator::orthogonal, eps.n()))
        .expect("complete")
}

/// `u_ij ↦ δ_ij D_i` with distinct diagonal unitaries `D_i`; valid for
/// every pair.
pub fn diagonal_unitary_model(pair: &CommutationPair) -> MatrixModel {
    let n = pair.n();
    let phases = [c(1.0), Complex64::new(0.0, 1.0), c(-1.0), Complex64::new(0.0, -1.0)];
    let assignment = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let m = if i == j {
                CMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0), phases[(i + 1) % 4]]))
            } else {
                CMatrix::zeros(2, 2)
            };
            (Generator::unitary(i, j), m)
        })
        .collect();
    MatrixModel::new("diagonal-unitary", unitary_qg_presentation(pair), 2, assignment).expect("complete")
}
