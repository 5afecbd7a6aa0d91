use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::word::{Letter, Roster, Word};
use super::AlgebraError;
use crate::scalar::Scalar;

/// A noncommutative *-polynomial with Gaussian-rational coefficients.
///
/// Stored canonically: no zero coefficients, one entry per word.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Word, Scalar>,
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::term(Word::unit(), c)
    }

    pub fn term(w: Word, c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.add_term(w, &c);
        p
    }

    pub fn word(w: Word) -> Self {
        Poly::term(w, Scalar::one())
    }

    pub fn letter(l: Letter) -> Self {
        Poly::word(Word::from(l))
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Scalar)>>(terms: I) -> Self {
        let mut p = Poly::zero();
        for (w, c) in terms {
            p.add_term(w, &c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) {
        accumulate(&mut self.terms, w, c);
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &Poly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            accumulate(&mut self.terms, w.clone(), &(c * d));
        }
    }

    pub fn remove(&mut self, w: &Word) -> Option<Scalar> {
        self.terms.remove(w)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Option<&Scalar> {
        self.terms.get(w)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn words(&self) -> impl DoubleEndedIterator<Item = &Word> {
        self.terms.keys()
    }

    /// Largest word and its coefficient.
    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Maximal word degree; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(w, d)| (w.clone(), c * d)).collect() }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
            None => Poly::zero(),
        }
    }

    /// The involution: reverses words, stars letters, conjugates coefficients.
    pub fn star(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(w, c)| (w.star(), c.conj())).collect() }
    }

    /// `left · self · right`
    pub fn sandwich(&self, left: &Word, right: &Word) -> Poly {
        Poly { terms: self.terms.iter().map(|(w, c)| (left.concat(w).concat(right), c.clone())).collect() }
    }

    /// Checks that every letter belongs to `roster`.
    pub fn check_roster(&self, roster: &Roster) -> Result<(), AlgebraError> {
        match self.terms.keys().find(|w| !roster.admits_word(w)) {
            Some(w) => Err(AlgebraError::RosterMismatch(format!(
                "word {w} is not over the {:?} roster of size {}",
                roster.family, roster.n
            ))),
            None => Ok(()),
        }
    }

    pub fn add_checked(&self, other: &Poly, roster: &Roster) -> Result<Poly, AlgebraError> {
        self.check_roster(roster)?;
        other.check_roster(roster)?;
        Ok(self + other)
    }

    pub fn mul_checked(&self, other: &Poly, roster: &Roster) -> Result<Poly, AlgebraError> {
        self.check_roster(roster)?;
        other.check_roster(roster)?;
        Ok(self * other)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::from_int(-1));
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.add_term(a.concat(b), &(c * d));
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Scalar::from_int(-1))
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Scalar,
    body: &dyn fmt::Display,
    is_unit: bool,
) -> fmt::Result {
    let neg_real = c.is_real() && c.re() < &num_rational::BigRational::from_integer(0.into());
    if !first {
        f.write_str(if neg_real { " - " } else { " + " })?;
    } else if neg_real {
        f.write_str("-")?;
    }
    let mag = if neg_real { -c } else { c.clone() };
    if is_unit {
        return write!(f, "{mag}");
    }
    if mag.is_one() {
        write!(f, "{body}")
    } else if mag.is_real() {
        write!(f, "{mag} {body}")
    } else {
        write!(f, "({mag}) {body}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().rev().enumerate() {
            write_term(f, k == 0, c, w, w.is_unit())?;
        }
        Ok(())
    }
}

/// An element of the algebraic tensor product of two free *-algebras.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorPoly {
    left: Roster,
    right: Roster,
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl TensorPoly {
    pub fn zero(left: Roster, right: Roster) -> Self {
        TensorPoly { left, right, terms: BTreeMap::new() }
    }

    pub fn one(left: Roster, right: Roster) -> Self {
        let mut t = TensorPoly::zero(left, right);
        t.add_term(Word::unit(), Word::unit(), &Scalar::one());
        t
    }

    /// `p ⊗ q`
    pub fn tensor(p: &Poly, q: &Poly, left: Roster, right: Roster) -> Result<Self, AlgebraError> {
        p.check_roster(&left)?;
        q.check_roster(&right)?;
        let mut t = TensorPoly::zero(left, right);
        for (a, c) in p.terms() {
            for (b, d) in q.terms() {
                t.add_term(a.clone(), b.clone(), &(c * d));
            }
        }
        Ok(t)
    }

    pub fn left_roster(&self) -> Roster {
        self.left
    }

    pub fn right_roster(&self) -> Roster {
        self.right
    }

    pub fn add_term(&mut self, a: Word, b: Word, c: &Scalar) {
        accumulate(&mut self.terms, (a, b), c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Word, &Scalar)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_rosters(&self, other: &TensorPoly) -> Result<(), AlgebraError> {
        if self.left != other.left || self.right != other.right {
            return Err(AlgebraError::RosterMismatch(format!(
                "tensor legs {:?}/{:?} vs {:?}/{:?}",
                self.left, self.right, other.left, other.right
            )));
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &TensorPoly, c: &Scalar) -> Result<(), AlgebraError> {
        self.same_rosters(other)?;
        for ((a, b), d) in &other.terms {
            accumulate(&mut self.terms, (a.clone(), b.clone()), &(c * d));
        }
        Ok(())
    }

    pub fn add(&self, other: &TensorPoly) -> Result<TensorPoly, AlgebraError> {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one())?;
        Ok(out)
    }

    pub fn sub(&self, other: &TensorPoly) -> Result<TensorPoly, AlgebraError> {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1))?;
        Ok(out)
    }

    /// Leg-wise product `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`.
    pub fn mul(&self, other: &TensorPoly) -> Result<TensorPoly, AlgebraError> {
        self.same_rosters(other)?;
        let mut out = TensorPoly::zero(self.left, self.right);
        for ((a, b), c) in &self.terms {
            for ((x, y), d) in &other.terms {
                out.add_term(a.concat(x), b.concat(y), &(c * d));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> TensorPoly {
        let mut out = TensorPoly::zero(self.left, self.right);
        for ((a, b), d) in &self.terms {
            out.add_term(a.clone(), b.clone(), &(c * d));
        }
        out
    }

    /// Leg-wise involution.
    pub fn star(&self) -> TensorPoly {
        TensorPoly {
            left: self.left,
            right: self.right,
            terms: self.terms.iter().map(|((a, b), c)| ((a.star(), b.star()), c.conj())).collect(),
        }
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, ((a, b), c)) in self.terms.iter().rev().enumerate() {
            let body = format!("{a} ⊗ {b}");
            write_term(f, k == 0, c, &body, false)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::word::{Family, Generator};

    fn x(i: usize) -> Poly {
        Poly::letter(Generator::sphere(i).letter())
    }

    fn xs(i: usize) -> Poly {
        Poly::letter(Generator::sphere(i).star_letter())
    }

    #[test]
    fn star_of_mixed_monomial() {
        // (x1 x2*)* = x2 x1*
        assert_eq!((&x(0) * &xs(1)).star(), &x(1) * &xs(0));
    }

    #[test]
    fn commutator_by_construction() {
        let lhs = &(&x(0) * &x(1)) + &(&(-&x(1)) * &x(0));
        let expected = Poly::from_terms([
            (Word::from_letters([Generator::sphere(0).letter(), Generator::sphere(1).letter()]), Scalar::one()),
            (Word::from_letters([Generator::sphere(1).letter(), Generator::sphere(0).letter()]), Scalar::from_int(-1)),
        ]);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn star_is_antilinear() {
        let p = x(0).scale(&Scalar::i());
        assert_eq!(p.star(), xs(0).scale(&-Scalar::i()));
    }

    #[test]
    fn cancellation_keeps_canonical_form() {
        let p = &x(0) - &x(0);
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn roster_checks() {
        let sphere = Roster::new(Family::Sphere, 2);
        assert!(x(1).check_roster(&sphere).is_ok());
        assert!(matches!(x(2).check_roster(&sphere), Err(AlgebraError::RosterMismatch(_))));
        let u = Poly::letter(Generator::unitary(0, 0).letter());
        assert!(x(0).mul_checked(&u, &sphere).is_err());
    }

    #[test]
    fn display_signs() {
        let p = &(&x(0) * &xs(0)) - &Poly::one();
        assert_eq!(p.to_string(), "x1 x1* - 1");
    }

    #[test]
    fn tensor_mul_and_star() {
        let s = Roster::new(Family::Sphere, 2);
        let t = TensorPoly::tensor(&x(0), &xs(1), s, s).unwrap();
        let sq = t.mul(&t).unwrap();
        assert_eq!(sq.len(), 1);
        let (a, b, _) = sq.terms().next().unwrap();
        assert_eq!(a.degree(), 2);
        assert_eq!(b.degree(), 2);
        assert_eq!(t.star().star(), t);
        let other = TensorPoly::zero(Roster::new(Family::Unitary, 2), s);
        assert!(t.add(&other).is_err());
    }
}
