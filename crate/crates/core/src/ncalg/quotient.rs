//! Degree-bounded quotients of the free *-algebra by a relation span, and
//! the zero tests built on them.

use std::collections::BTreeMap;

use super::certificate::{Certificate, CombinationTerm, Leg, LegReduction, ZeroEvidence};
use super::echelon::{Combination, Echelon};
use super::poly::{Poly, TensorPoly};
use super::word::{Roster, Word};
use super::AlgebraError;
use crate::presentations::{Presentation, Relation};

pub const DEFAULT_DIMENSION_CAP: usize = 2_000_000;

/// Which sandwich `left · relation · right` a span generator is.
#[derive(Clone, Debug, PartialEq, Eq)]
struct SpanGenerator {
    relation: usize,
    left: Word,
    right: Word,
}

/// The span of `m₁ · r · m₂` over closed relations `r` with total degree at
/// most `product_bound`, in reduced echelon form.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    roster: Roster,
    product_bound: usize,
    relations: Vec<Relation>,
    generators: Vec<SpanGenerator>,
    echelon: Echelon,
}

impl QuotientBasis {
    /// The pure relation span (no products beyond degree 2).
    pub fn build(pres: &Presentation, bound: usize) -> Result<Self, AlgebraError> {
        QuotientBasis::with_products(pres, bound, DEFAULT_DIMENSION_CAP, false)
    }

    /// Like [`QuotientBasis::build`], but reductions carry the explicit
    /// relation combination.
    pub fn build_tracked(pres: &Presentation, bound: usize) -> Result<Self, AlgebraError> {
        QuotientBasis::with_products(pres, bound, DEFAULT_DIMENSION_CAP, true)
    }

    pub fn with_products(
        pres: &Presentation,
        product_bound: usize,
        cap: usize,
        track: bool,
    ) -> Result<Self, AlgebraError> {
        let roster = pres.roster();
        let needed = roster.word_count(product_bound);
        if needed > cap {
            return Err(AlgebraError::DimensionCap { needed, cap });
        }
        let relations = pres.closed_relations();
        let multipliers = roster.words_up_to(product_bound.saturating_sub(1));
        let mut generators = Vec::new();
        let mut echelon = Echelon::new(track);
        for (ri, r) in relations.iter().enumerate() {
            let d = r.poly.degree();
            if d > product_bound {
                continue;
            }
            let room = product_bound - d;
            for left in multipliers.iter().take_while(|m| m.degree() <= room) {
                for right in multipliers.iter().take_while(|m| m.degree() + left.degree() <= room) {
                    let g = r.poly.sandwich(left, right);
                    let id = generators.len();
                    generators.push(SpanGenerator { relation: ri, left: left.clone(), right: right.clone() });
                    echelon.insert(&g, id);
                }
            }
        }
        Ok(QuotientBasis { roster, product_bound, relations, generators, echelon })
    }

    pub fn roster(&self) -> Roster {
        self.roster
    }

    pub fn bound(&self) -> usize {
        self.product_bound
    }

    /// Dimension of the relation span.
    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// The closed relation list that combination terms index into.
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Words of degree ≤ bound that are not pivots: a basis of the quotient.
    pub fn monomials(&self) -> Vec<Word> {
        self.roster.words_up_to(self.product_bound).into_iter().filter(|w| !self.echelon.is_pivot(w)).collect()
    }

    fn check(&self, p: &Poly) -> Result<(), AlgebraError> {
        p.check_roster(&self.roster)?;
        if p.degree() > self.product_bound {
            return Err(AlgebraError::DegreeAboveBound { degree: p.degree(), bound: self.product_bound });
        }
        Ok(())
    }

    /// Normal form: coordinates on the standard monomials.
    pub fn reduce(&self, p: &Poly) -> Result<Poly, AlgebraError> {
        self.check(p)?;
        Ok(self.echelon.reduce(p).0)
    }

    fn combination_terms(&self, combo: &Combination) -> Vec<CombinationTerm> {
        combo
            .iter()
            .map(|(&g, c)| {
                let s = &self.generators[g];
                CombinationTerm {
                    relation: s.relation,
                    label: self.relations[s.relation].label.clone(),
                    left: s.left.clone(),
                    right: s.right.clone(),
                    coefficient: c.clone(),
                }
            })
            .collect()
    }

    /// Normal form plus the combination explaining `p - normal_form`
    /// (empty unless the basis tracks combinations).
    pub fn reduce_with_evidence(&self, p: &Poly) -> Result<(Poly, Vec<CombinationTerm>), AlgebraError> {
        self.check(p)?;
        let (r, combo) = self.echelon.reduce(p);
        Ok((r, self.combination_terms(&combo)))
    }
}

/// Decides `t = 0` in the tensor product of the two bounded quotients.
///
/// Left leg words are replaced by their normal forms; the right-leg
/// polynomial attached to each standard left word must then reduce to zero.
pub fn is_zero_tensor(
    t: &TensorPoly,
    left: &QuotientBasis,
    right: &QuotientBasis,
) -> Result<Certificate, AlgebraError> {
    if t.left_roster() != left.roster() || t.right_roster() != right.roster() {
        return Err(AlgebraError::RosterMismatch(format!(
            "tensor legs {:?}/{:?}, bases {:?}/{:?}",
            t.left_roster(),
            t.right_roster(),
            left.roster(),
            right.roster()
        )));
    }
    let mut by_left: BTreeMap<Word, Poly> = BTreeMap::new();
    for (a, b, c) in t.terms() {
        by_left.entry(a.clone()).or_default().add_term(b.clone(), c);
    }
    let mut reductions = Vec::new();
    let mut grouped: BTreeMap<Word, Poly> = BTreeMap::new();
    for (a, q) in &by_left {
        let input = Poly::word(a.clone());
        let (nf, combination) = left.reduce_with_evidence(&input)?;
        for (s, d) in nf.terms() {
            grouped.entry(s.clone()).or_default().add_scaled(q, d);
        }
        if nf != input {
            reductions.push(LegReduction { leg: Leg::Left, input, normal_form: nf, combination });
        }
    }
    for (s, q) in &grouped {
        if q.is_zero() {
            continue;
        }
        let (nf, combination) = right.reduce_with_evidence(q)?;
        if !nf.is_zero() {
            return Ok(Certificate::inconclusive(format!(
                "component {s} ⊗ ({nf}) survives in the degree-{} quotient",
                right.bound()
            )));
        }
        reductions.push(LegReduction { leg: Leg::Right, input: q.clone(), normal_form: nf, combination });
    }
    Ok(Certificate::zero(ZeroEvidence::Tensor { reductions }))
}

/// Membership of `p` in the span of `m₁ · r · m₂` (total degree at most
/// `product_bound`), with the explicit combination as evidence.
pub fn ideal_membership_bounded(
    p: &Poly,
    pres: &Presentation,
    product_bound: usize,
) -> Result<Certificate, AlgebraError> {
    if p.degree() > product_bound {
        return Err(AlgebraError::DegreeAboveBound { degree: p.degree(), bound: product_bound });
    }
    let basis = QuotientBasis::with_products(pres, product_bound, DEFAULT_DIMENSION_CAP, true)?;
    membership_in(p, &basis)
}

/// Same as [`ideal_membership_bounded`] against a prebuilt tracked basis.
pub fn membership_in(p: &Poly, basis: &QuotientBasis) -> Result<Certificate, AlgebraError> {
    let (r, terms) = basis.reduce_with_evidence(p)?;
    if r.is_zero() {
        Ok(Certificate::zero(ZeroEvidence::Combination { terms }))
    } else {
        Ok(Certificate::inconclusive(format!("normal form {r} is nonzero at bound {}", basis.bound())))
    }
}
