use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::word::Word;
use crate::presentations::Relation;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ProvedZero,
    ProvedNonzero,
    Inconclusive,
}

/// `coefficient · left · relation · right`
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CombinationTerm {
    pub relation: usize,
    pub label: String,
    #[serde(serialize_with = "word_text")]
    pub left: Word,
    #[serde(serialize_with = "word_text")]
    pub right: Word,
    pub coefficient: Scalar,
}

/// One step of a rewrite run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TraceStep {
    /// A rule applied at letter offset `position` of `word`.
    Rule {
        rule: usize,
        #[serde(serialize_with = "word_text")]
        word: Word,
        position: usize,
        terms: usize,
    },
    /// Subtraction of `coefficient` times a rule-normalized linear relation.
    Linear { row: usize, relation: String, normalized: String, coefficient: Scalar, terms: usize },
}

/// A leg word (or leg polynomial) and its normal form in the quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LegReduction {
    pub leg: Leg,
    #[serde(serialize_with = "poly_text")]
    pub input: Poly,
    #[serde(serialize_with = "poly_text")]
    pub normal_form: Poly,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub combination: Vec<CombinationTerm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Leg {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ZeroEvidence {
    Trace { steps: Vec<TraceStep> },
    Combination { terms: Vec<CombinationTerm> },
    Tensor { reductions: Vec<LegReduction> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonzeroEvidence {
    pub model: String,
    pub image_norm: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_evidence: Option<ZeroEvidence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonzero_evidence: Option<NonzeroEvidence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Certificate {
    pub fn zero(evidence: ZeroEvidence) -> Self {
        Certificate { status: Status::ProvedZero, zero_evidence: Some(evidence), nonzero_evidence: None, note: None }
    }

    pub fn nonzero(evidence: NonzeroEvidence) -> Self {
        Certificate { status: Status::ProvedNonzero, zero_evidence: None, nonzero_evidence: Some(evidence), note: None }
    }

    pub fn inconclusive(note: impl Into<String>) -> Self {
        Certificate {
            status: Status::Inconclusive,
            zero_evidence: None,
            nonzero_evidence: None,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.status == Status::ProvedZero
    }
}

/// `Σ coefficient · left · relation · right`
pub fn evaluate_combination(terms: &[CombinationTerm], relations: &[Relation]) -> Option<Poly> {
    let mut out = Poly::zero();
    for t in terms {
        let r = relations.get(t.relation)?;
        out.add_scaled(&r.poly.sandwich(&t.left, &t.right), &t.coefficient);
    }
    Some(out)
}

/// Checks a combination certificate for `p` against the closed relation
/// list it refers to, in exact arithmetic.
pub fn replay_combination(p: &Poly, terms: &[CombinationTerm], relations: &[Relation]) -> bool {
    evaluate_combination(terms, relations).is_some_and(|q| &q == p)
}

/// Checks the leg reductions of a tensor certificate: each reduction must be
/// justified by its combination, and substituting the normal forms must
/// annihilate `t`.
pub fn replay_tensor(
    t: &super::poly::TensorPoly,
    reductions: &[LegReduction],
    left_relations: &[Relation],
    right_relations: &[Relation],
) -> bool {
    use std::collections::BTreeMap;
    for r in reductions {
        let rels = match r.leg {
            Leg::Left => left_relations,
            Leg::Right => right_relations,
        };
        if !replay_combination(&(&r.input - &r.normal_form), &r.combination, rels) {
            return false;
        }
    }
    let left_nf: BTreeMap<&Poly, &Poly> =
        reductions.iter().filter(|r| r.leg == Leg::Left).map(|r| (&r.input, &r.normal_form)).collect();
    // Substitute left normal forms, then group by left standard word.
    let mut grouped: BTreeMap<Word, Poly> = BTreeMap::new();
    for (a, b, c) in t.terms() {
        let key = Poly::word(a.clone());
        let nf = left_nf.get(&key).map(|p| (*p).clone()).unwrap_or(key);
        for (s, d) in nf.terms() {
            grouped.entry(s.clone()).or_default().add_term(b.clone(), &(c * d));
        }
    }
    let right_nf: BTreeMap<&Poly, &Poly> =
        reductions.iter().filter(|r| r.leg == Leg::Right).map(|r| (&r.input, &r.normal_form)).collect();
    grouped.values().filter(|q| !q.is_zero()).all(|q| right_nf.get(q).is_some_and(|nf| nf.is_zero()))
}

fn word_text<S: serde::Serializer>(w: &Word, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(w)
}

fn poly_text<S: serde::Serializer>(p: &Poly, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}
