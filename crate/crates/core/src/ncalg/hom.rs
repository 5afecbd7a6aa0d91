//! *-homomorphisms from a free *-algebra into a two-leg tensor algebra,
//! given by generator images.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::poly::{Poly, TensorPoly};
use super::word::{Family, Generator, Letter, Roster};
use super::AlgebraError;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct TensorHom {
    source: Roster,
    left: Roster,
    right: Roster,
    images: HashMap<Letter, TensorPoly>,
}

impl TensorHom {
    /// Builds the map from images of the unstarred generators; starred
    /// letters go to the leg-wise adjoint.
    pub fn new(source: Roster, left: Roster, right: Roster, image: impl Fn(Generator) -> TensorPoly) -> Self {
        let mut images = HashMap::new();
        for g in source.generators() {
            let t = image(g);
            debug_assert_eq!((t.left_roster(), t.right_roster()), (left, right));
            if !source.family.is_self_adjoint() {
                images.insert(g.star_letter(), t.star());
            }
            images.insert(g.letter(), t);
        }
        TensorHom { source, left, right, images }
    }

    pub fn source(&self) -> Roster {
        self.source
    }

    pub fn image_of(&self, l: Letter) -> Option<&TensorPoly> {
        self.images.get(&l)
    }

    pub fn apply(&self, p: &Poly) -> Result<TensorPoly, AlgebraError> {
        p.check_roster(&self.source)?;
        let mut out = TensorPoly::zero(self.left, self.right);
        for (w, c) in p.terms() {
            let mut acc = TensorPoly::one(self.left, self.right);
            for l in w.letters() {
                acc = acc.mul(&self.images[l])?;
            }
            out.add_scaled(&acc, c)?;
        }
        Ok(out)
    }
}

fn single(a: Generator, b: Generator, left: Roster, right: Roster) -> TensorPoly {
    let mut t = TensorPoly::zero(left, right);
    t.add_term(a.letter().into(), b.letter().into(), &Scalar::one());
    t
}

/// `Δ(u_ij) = Σ_k u_ik ⊗ u_kj` (zero-based indices).
pub fn comultiply_generator(i: usize, j: usize, n: usize) -> TensorPoly {
    let r = Roster::new(Family::Unitary, n);
    let mut t = TensorPoly::zero(r, r);
    for k in 0..n {
        t.add_scaled(&single(Generator::unitary(i, k), Generator::unitary(k, j), r, r), &Scalar::one())
            .expect("same rosters");
    }
    t
}

pub fn comultiplication(n: usize) -> TensorHom {
    let r = Roster::new(Family::Unitary, n);
    TensorHom::new(r, r, r, |g| comultiply_generator(g.row(), g.col(), n))
}

/// Left (α) or right (β) coaction formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn symbol(self) -> &'static str {
        match self {
            Side::Left => "alpha",
            Side::Right => "beta",
        }
    }
}

/// `α(x_i) = Σ_j u_ij ⊗ x_j`, `β(x_i) = Σ_k u_ki ⊗ x_k`.
pub fn sphere_action(n: usize, side: Side) -> TensorHom {
    let s = Roster::new(Family::Sphere, n);
    let u = Roster::new(Family::Unitary, n);
    TensorHom::new(s, u, s, |g| {
        let i = g.row();
        let mut t = TensorPoly::zero(u, s);
        for j in 0..n {
            let ug = match side {
                Side::Left => Generator::unitary(i, j),
                Side::Right => Generator::unitary(j, i),
            };
            t.add_scaled(&single(ug, Generator::sphere(j), u, s), &Scalar::one()).expect("same rosters");
        }
        t
    })
}

/// `α(x_ik) = Σ_j u_ij ⊗ x_jk`, `β(x_ik) = Σ_j u_ji ⊗ x_jk`.
pub fn tuple_action(n: usize, side: Side) -> TensorHom {
    let x = Roster::new(Family::Tuple, n);
    let o = Roster::new(Family::Orthogonal, n);
    TensorHom::new(x, o, x, |g| {
        let (i, k) = (g.row(), g.col());
        let mut t = TensorPoly::zero(o, x);
        for j in 0..n {
            let ug = match side {
                Side::Left => Generator::orthogonal(i, j),
                Side::Right => Generator::orthogonal(j, i),
            };
            t.add_scaled(&single(ug, Generator::tuple(j, k), o, x), &Scalar::one()).expect("same rosters");
        }
        t
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comultiply_small_cases() {
        assert_eq!(comultiply_generator(0, 0, 2).to_string(), "u12 ⊗ u21 + u11 ⊗ u11");
        assert_eq!(comultiply_generator(0, 0, 1).to_string(), "u11 ⊗ u11");
    }

    #[test]
    fn comultiply_mixed_product_has_n_squared_terms() {
        let delta = comultiplication(3);
        let p = Poly::word(super::super::word::Word::from_letters([
            Generator::unitary(0, 1).star_letter(),
            Generator::unitary(2, 0).letter(),
        ]));
        let t = delta.apply(&p).unwrap();
        assert_eq!(t.len(), 9);
        for (a, b, _) in t.terms() {
            assert!(a.letters()[0].starred && b.letters()[0].starred);
            assert_eq!(a.letters()[0].gen.row(), 0);
            assert_eq!(b.letters()[1].gen.col(), 0);
        }
    }

    #[test]
    fn homomorphism_respects_products_and_star() {
        let delta = comultiplication(2);
        let a = Poly::letter(Generator::unitary(0, 1).letter());
        let b = Poly::letter(Generator::unitary(1, 1).star_letter());
        let ab = delta.apply(&(&a * &b)).unwrap();
        assert_eq!(ab, delta.apply(&a).unwrap().mul(&delta.apply(&b).unwrap()).unwrap());
        assert_eq!(delta.apply(&(&a * &b).star()).unwrap(), ab.star());
    }
}
