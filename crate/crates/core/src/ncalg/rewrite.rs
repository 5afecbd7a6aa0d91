//! Oriented rewriting on degree-2 patterns, followed by a linear pass over
//! the rule-normalized relations.
//!
//! This is deliberately independent of [`super::quotient`]: rules are read
//! off the relation shapes, and the linear pass uses its own elimination, so
//! agreement between the two routes is a meaningful cross-check.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::certificate::{Certificate, TraceStep, ZeroEvidence};
use super::poly::Poly;
use super::word::{Generator, Letter, Roster, Word};
use super::AlgebraError;
use crate::presentations::{Presentation, PresentationKind, Relation};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    Zero,
    Canonical,
    Order,
}

#[derive(Clone, Debug, Serialize)]
pub struct Rule {
    pub id: usize,
    pub kind: RuleKind,
    #[serde(serialize_with = "word_text")]
    pub pattern: Word,
    #[serde(serialize_with = "poly_text")]
    pub replacement: Poly,
    pub source: String,
}

fn word_text<S: serde::Serializer>(w: &Word, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(w)
}

fn poly_text<S: serde::Serializer>(p: &Poly, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}

#[derive(Clone, Debug)]
struct LinearRow {
    label: String,
    /// The source relation after rule normalization, before scaling.
    normalized: String,
    /// Monic in its largest word.
    poly: Poly,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    roster: Roster,
    rules: Vec<Rule>,
    index: HashMap<(Letter, Letter), usize>,
    syzygies: Vec<Relation>,
    linear: Vec<LinearRow>,
    linear_index: BTreeMap<Word, usize>,
    canonical_column: Option<usize>,
}

impl RewriteSystem {
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn syzygies(&self) -> &[Relation] {
        &self.syzygies
    }

    /// Zero-based k₀ = min{k : η_kk = 0} for quantum unitary presentations.
    pub fn canonical_column(&self) -> Option<usize> {
        self.canonical_column
    }

    pub fn roster(&self) -> Roster {
        self.roster
    }

    /// Number of rule-normalized relations kept for the linear pass.
    pub fn linear_rank(&self) -> usize {
        self.linear.len()
    }

    fn add_rule(&mut self, kind: RuleKind, pattern: Word, replacement: Poly, source: String) -> bool {
        debug_assert_eq!(pattern.degree(), 2);
        let key = (pattern.letters()[0], pattern.letters()[1]);
        if self.index.contains_key(&key) {
            return false;
        }
        let id = self.rules.len();
        self.index.insert(key, id);
        self.rules.push(Rule { id, kind, pattern, replacement, source });
        true
    }

    /// The first rule matching inside `w`, scanning left to right.
    fn find_rule(&self, w: &Word) -> Option<(usize, &Rule)> {
        let l = w.letters();
        (0..l.len().saturating_sub(1)).find_map(|i| self.index.get(&(l[i], l[i + 1])).map(|&r| (i, &self.rules[r])))
    }

    /// Applies rules until none matches, rewriting the largest reducible word
    /// first.
    fn saturate(
        &self,
        p: &mut Poly,
        steps: &mut usize,
        max_steps: usize,
        trace: &mut Option<&mut Vec<TraceStep>>,
    ) -> Result<(), AlgebraError> {
        loop {
            let hit =
                p.terms().rev().find_map(|(w, c)| self.find_rule(w).map(|(pos, r)| (w.clone(), c.clone(), pos, r.id)));
            let Some((w, c, pos, rid)) = hit else { return Ok(()) };
            if *steps >= max_steps {
                return Err(AlgebraError::StepLimitExceeded(max_steps));
            }
            *steps += 1;
            let rule = &self.rules[rid];
            p.remove(&w);
            let prefix = Word::from_letters(w.letters()[..pos].iter().copied());
            let suffix = Word::from_letters(w.letters()[pos + 2..].iter().copied());
            p.add_scaled(&rule.replacement.sandwich(&prefix, &suffix), &c);
            if let Some(t) = trace.as_deref_mut() {
                t.push(TraceStep::Rule { rule: rid, word: w, position: pos, terms: p.len() });
            }
        }
    }

    fn linear_pass(&self, p: &mut Poly, trace: &mut Option<&mut Vec<TraceStep>>) -> bool {
        let mut changed = false;
        loop {
            let hit = p.terms().rev().find_map(|(w, c)| self.linear_index.get(w).map(|&k| (k, c.clone())));
            let Some((k, c)) = hit else { return changed };
            let row = &self.linear[k];
            p.add_scaled(&row.poly, &-&c);
            changed = true;
            if let Some(t) = trace.as_deref_mut() {
                t.push(TraceStep::Linear {
                    row: k,
                    relation: row.label.clone(),
                    normalized: row.normalized.clone(),
                    coefficient: c,
                    terms: p.len(),
                });
            }
        }
    }

    fn run(&self, p: &Poly, max_steps: usize, mut trace: Option<&mut Vec<TraceStep>>) -> Result<Poly, AlgebraError> {
        p.check_roster(&self.roster)?;
        let mut q = p.clone();
        let mut steps = 0;
        loop {
            self.saturate(&mut q, &mut steps, max_steps, &mut trace)?;
            if !self.linear_pass(&mut q, &mut trace) {
                return Ok(q);
            }
        }
    }

    /// Rule normal form only, no linear pass.
    pub fn normalize_rules(&self, p: &Poly, max_steps: usize) -> Result<Poly, AlgebraError> {
        let mut q = p.clone();
        let mut steps = 0;
        self.saturate(&mut q, &mut steps, max_steps, &mut None)?;
        Ok(q)
    }

    /// Full reduction with a replayable trace.
    pub fn rewrite(&self, p: &Poly, max_steps: usize) -> Result<(Poly, Vec<TraceStep>), AlgebraError> {
        let mut trace = Vec::new();
        let q = self.run(p, max_steps, Some(&mut trace))?;
        Ok((q, trace))
    }

    /// Full reduction without recording a trace.
    pub fn reduce(&self, p: &Poly, max_steps: usize) -> Result<Poly, AlgebraError> {
        self.run(p, max_steps, None)
    }

    /// ProvedZero with the rewrite trace if `p` reduces to zero.
    pub fn certify(&self, p: &Poly, max_steps: usize) -> Certificate {
        match self.rewrite(p, max_steps) {
            Ok((q, steps)) if q.is_zero() => Certificate::zero(ZeroEvidence::Trace { steps }),
            Ok((q, _)) => Certificate::inconclusive(format!("rewrites to {q}")),
            Err(e) => Certificate::inconclusive(e.to_string()),
        }
    }

    /// Replays a rewrite trace step by step in exact arithmetic and returns
    /// the final polynomial, or `None` if a step does not apply.
    pub fn replay(&self, p: &Poly, steps: &[TraceStep]) -> Option<Poly> {
        let mut q = p.clone();
        for s in steps {
            match s {
                TraceStep::Rule { rule, word, position, .. } => {
                    let r = self.rules.get(*rule)?;
                    let l = word.letters();
                    if l.get(*position..*position + 2)? != r.pattern.letters() {
                        return None;
                    }
                    let c = q.remove(word)?;
                    let prefix = Word::from_letters(l[..*position].iter().copied());
                    let suffix = Word::from_letters(l[*position + 2..].iter().copied());
                    q.add_scaled(&r.replacement.sandwich(&prefix, &suffix), &c);
                }
                TraceStep::Linear { row, coefficient, .. } => {
                    let row = self.linear.get(*row)?;
                    q.add_scaled(&row.poly, &-coefficient);
                }
            }
        }
        Some(q)
    }

    fn insert_linear(&mut self, label: String, normalized: Poly) {
        let shown = normalized.to_string();
        let mut p = normalized;
        self.linear_pass(&mut p, &mut None);
        let Some((lead, c)) = p.leading().map(|(w, c)| (w.clone(), c.clone())) else { return };
        let poly = p.scale(&c.inv().expect("nonzero"));
        self.linear_index.insert(lead.clone(), self.linear.len());
        self.linear.push(LinearRow { label, normalized: shown, poly });
    }
}

fn smallest(words: &[Word]) -> Word {
    words.iter().min().expect("nonempty class").clone()
}

/// Rules for the X/Y classes: every word of a class rewrites to the class
/// minimum in word order.
fn canonical_classes(pres: &Presentation) -> Vec<(String, Vec<Word>)> {
    let n = pres.n;
    let eta = &pres.source.eta;
    let free: Vec<usize> = (0..n).filter(|&k| !eta.get(k, k)).collect();
    let u = |i, j| Generator::unitary(i, j).letter();
    let us = |i, j| Generator::unitary(i, j).star_letter();
    let mut classes = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !eta.get(i, j) {
                continue;
            }
            let x: Vec<Word> = free
                .iter()
                .flat_map(|&k| [Word::from_letters([us(i, k), u(j, k)]), Word::from_letters([u(j, k), us(i, k)])])
                .collect();
            let y: Vec<Word> = free
                .iter()
                .flat_map(|&k| [Word::from_letters([us(k, i), u(k, j)]), Word::from_letters([u(k, j), us(k, i)])])
                .collect();
            classes.push((format!("X{}{}", i + 1, j + 1), x));
            classes.push((format!("Y{}{}", i + 1, j + 1), y));
        }
    }
    classes
}

pub fn build_rewrite_system(pres: &Presentation) -> RewriteSystem {
    let roster = pres.roster();
    let closed = pres.closed_relations();
    let canonical_column = match pres.kind {
        PresentationKind::UnitaryQg => pres.source.non_normal_indices().first().copied(),
        _ => None,
    };
    let mut rs = RewriteSystem {
        roster,
        rules: Vec::new(),
        index: HashMap::new(),
        syzygies: pres.expanded_sums(),
        linear: Vec::new(),
        linear_index: BTreeMap::new(),
        canonical_column,
    };
    for r in closed.iter().filter(|r| r.poly.len() == 1 && r.poly.degree() == 2) {
        let (w, _) = r.poly.leading().expect("one term");
        rs.add_rule(RuleKind::Zero, w.clone(), Poly::zero(), r.label.clone());
    }
    if canonical_column.is_some() {
        for (label, class) in canonical_classes(pres) {
            let min = smallest(&class);
            for w in class.into_iter().filter(|w| *w != min) {
                rs.add_rule(RuleKind::Canonical, w, Poly::word(min.clone()), label.clone());
            }
        }
    }
    // δ-sums stay syzygies for the linear pass even when they have two terms.
    let sums: BTreeSet<Poly> = rs.syzygies.iter().map(|r| r.poly.monic()).collect();
    for r in closed.iter().filter(|r| !sums.contains(&r.poly.monic())) {
        let terms: Vec<(&Word, &Scalar)> = r.poly.terms().collect();
        if terms.len() != 2 || terms.iter().any(|(w, _)| w.degree() != 2) {
            continue;
        }
        // Terms are ascending, so the second is the larger word.
        let (small, cs) = terms[0];
        let (large, cl) = terms[1];
        let replacement = Poly::term(small.clone(), -(cs / cl));
        rs.add_rule(RuleKind::Order, large.clone(), replacement, r.label.clone());
    }
    for r in &closed {
        let normalized = rs.normalize_rules(&r.poly, usize::MAX).expect("rules terminate");
        if !normalized.is_zero() {
            rs.insert_linear(r.label.clone(), normalized);
        }
    }
    rs
}
