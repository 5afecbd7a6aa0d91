#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

use ncstar_core::ncalg::{Generator, Poly, Roster, Word};
use ncstar_core::presentations::{CommutationPair, Presentation, PresentationKind};
use ncstar_core::repmodels::{
    diagonal_unitary_model, free_unitary_model, identity_orthogonal_model, o2plus_model, point_model_sphere,
    point_model_tuple, remark_phi_model, torus_model, CMatrix, MatrixModel, ModelState, TORUS_DEFAULT_SAMPLES,
};
use ncstar_core::Scalar;

pub fn small_scalar<R: Rng>(rng: &mut R) -> Scalar {
    loop {
        let s = Scalar::gaussian(rng.random_range(-3..=3), rng.random_range(-2..=2));
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn random_word<R: Rng>(roster: &Roster, max_degree: usize, rng: &mut R) -> Word {
    let letters = roster.letters();
    let d = rng.random_range(0..=max_degree);
    Word::from_letters((0..d).map(|_| letters[rng.random_range(0..letters.len())]))
}

pub fn random_poly<R: Rng>(roster: &Roster, max_degree: usize, terms: usize, rng: &mut R) -> Poly {
    let mut p = Poly::zero();
    for _ in 0..terms {
        p.add_term(random_word(roster, max_degree, rng), &small_scalar(rng));
    }
    p
}

/// Swaps the two coordinates: u_ij ↦ δ_{i,1-j} as scalars.
fn swap_point(pres: &Presentation) -> Option<MatrixModel> {
    if pres.n != 2 {
        return None;
    }
    let family = pres.kind.family();
    let assignment = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| {
            let v = if i + j == 1 { 1.0 } else { 0.0 };
            (Generator::matrix(family, i, j), CMatrix::from_element(1, 1, Complex64::new(v, 0.0)))
        })
        .collect();
    MatrixModel::new("swap-point", pres.clone(), 1, assignment).ok()
}

/// Every library model that is a valid representation of `pres`.
pub fn valid_models(pres: &Presentation) -> Vec<MatrixModel> {
    let pair: &CommutationPair = &pres.source;
    let n = pres.n;
    let mut out: Vec<MatrixModel> = Vec::new();
    match pres.kind {
        PresentationKind::ComplexSphere => {
            for k in 1..=n {
                out.extend(point_model_sphere(k, n, pair, Complex64::new(0.0, 1.0)).ok());
            }
            if n == 2 {
                out.extend(torus_model(&TORUS_DEFAULT_SAMPLES, pair).ok());
                out.extend(free_unitary_model(3, 0, pair).ok().map(|w| w.model));
                out.extend(remark_phi_model().retarget(pres.clone(), "remark-phi").ok());
            }
        }
        PresentationKind::UnitaryQg => {
            out.push(diagonal_unitary_model(pair));
            out.extend(swap_point(pres));
        }
        PresentationKind::OrthogonalQg => {
            out.push(identity_orthogonal_model(&pair.epsilon));
            out.extend(swap_point(pres));
            if n == 2 {
                out.extend(o2plus_model().retarget(pres.clone(), "o2plus").ok());
            }
        }
        PresentationKind::TupleSpace => {
            out.extend(point_model_tuple(1, &pair.epsilon).ok());
            out.extend(swap_point(pres));
        }
    }
    out.retain(|m| m.state() == ModelState::Valid);
    out
}
