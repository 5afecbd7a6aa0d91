//! (ε, η) data, regularity, and the four presentation families.

mod pair;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ncalg::{Family, Generator, Letter, Poly, Roster, Word};
use crate::scalar::Scalar;

pub use pair::{
    enumerate_epsilons, enumerate_pairs, is_regular, pair_count, parse_pair_json, random_pair, regularize,
    validate_epsilon, validate_pair, BinMatrix, CommutationPair, PairError, PairInputError, RegularityReport,
    DEFAULT_ENUMERATION_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PresentationKind {
    ComplexSphere,
    UnitaryQg,
    OrthogonalQg,
    TupleSpace,
}

impl PresentationKind {
    pub fn family(self) -> Family {
        match self {
            PresentationKind::ComplexSphere => Family::Sphere,
            PresentationKind::UnitaryQg => Family::Unitary,
            PresentationKind::OrthogonalQg => Family::Orthogonal,
            PresentationKind::TupleSpace => Family::Tuple,
        }
    }
}

/// A relation `poly = 0` with a human-readable label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub label: String,
    pub poly: Poly,
}

/// A schema of δ-sums, one relation per index pair `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumFamily {
    /// `Σ_i x_i* x_i = 1`
    SphereStarFirst,
    /// `Σ_i x_i x_i* = 1`
    SphereStarLast,
    /// `Σ_k u_ka* u_kb = δ_ab`  (u*u = 1)
    ColumnsStarFirst,
    /// `Σ_k u_ak u_bk* = δ_ab`  (uu* = 1)
    RowsStarLast,
    /// `Σ_k u_ak* u_bk = δ_ab`  (ū*ū = 1)
    RowsStarFirst,
    /// `Σ_k u_ka u_kb* = δ_ab`  (ūū* = 1)
    ColumnsStarLast,
    /// `Σ_k u_ak u_bk = δ_ab` (self-adjoint entries)
    Rows,
    /// `Σ_k u_ka u_kb = δ_ab` (self-adjoint entries)
    Columns,
}

impl SumFamily {
    pub fn describe(self) -> &'static str {
        match self {
            SumFamily::SphereStarFirst => "sum_i x_i* x_i = 1",
            SumFamily::SphereStarLast => "sum_i x_i x_i* = 1",
            SumFamily::ColumnsStarFirst => "sum_k u_ki* u_kj = delta_ij",
            SumFamily::RowsStarLast => "sum_k u_ik u_jk* = delta_ij",
            SumFamily::RowsStarFirst => "sum_k u_ik* u_jk = delta_ij",
            SumFamily::ColumnsStarLast => "sum_k u_ki u_kj* = delta_ij",
            SumFamily::Rows => "sum_k u_ik u_jk = delta_ij",
            SumFamily::Columns => "sum_k u_ki u_kj = delta_ij",
        }
    }

    /// Expands the schema over `roster` into one polynomial per index pair.
    pub fn expand(self, roster: Roster) -> Vec<Relation> {
        let n = roster.n;
        let fam = roster.family;
        let one = Scalar::one();
        if !fam.is_matrix() {
            let mut p = Poly::constant(-Scalar::one());
            for i in 0..n {
                let (a, b) = (Generator::sphere(i).letter(), Generator::sphere(i).star_letter());
                let w = match self {
                    SumFamily::SphereStarFirst => Word::from_letters([b, a]),
                    _ => Word::from_letters([a, b]),
                };
                p.add_term(w, &one);
            }
            return vec![Relation { label: self.describe().to_string(), poly: p }];
        }
        let g = |i, j| Generator::matrix(fam, i, j);
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let mut p = if a == b { Poly::constant(-Scalar::one()) } else { Poly::zero() };
                for k in 0..n {
                    let (l1, l2) = match self {
                        SumFamily::ColumnsStarFirst => (g(k, a).star_letter(), g(k, b).letter()),
                        SumFamily::RowsStarLast => (g(a, k).letter(), g(b, k).star_letter()),
                        SumFamily::RowsStarFirst => (g(a, k).star_letter(), g(b, k).letter()),
                        SumFamily::ColumnsStarLast => (g(k, a).letter(), g(k, b).star_letter()),
                        SumFamily::Rows => (g(a, k).letter(), g(b, k).letter()),
                        SumFamily::Columns => (g(k, a).letter(), g(k, b).letter()),
                        SumFamily::SphereStarFirst | SumFamily::SphereStarLast => unreachable!(),
                    };
                    p.add_term(Word::from_letters([l1, l2]), &one);
                }
                let mut label = format!("{} at ({},{})", self.describe(), a + 1, b + 1);
                if fam == Family::Tuple {
                    label = label.replace("u_", "x_");
                }
                out.push(Relation { label, poly: p });
            }
        }
        out
    }
}

/// Generator roster, relations (each `= 0`) and δ-sum schemas of one
/// algebra.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub kind: PresentationKind,
    pub n: usize,
    pub relations: Vec<Relation>,
    pub sum_families: Vec<SumFamily>,
    /// The pair it was built from; for orthogonal and tuple-space
    /// presentations η is all zero and unused.
    pub source: CommutationPair,
}

impl Presentation {
    pub fn roster(&self) -> Roster {
        Roster::new(self.kind.family(), self.n)
    }

    pub fn generators(&self) -> Vec<Generator> {
        self.roster().generators()
    }

    /// Relations closed under the involution, with the sum schemas
    /// expanded, scalar multiples removed. The verifier and the linear
    /// oracle both work from this list.
    pub fn closed_relations(&self) -> Vec<Relation> {
        let mut seen: BTreeSet<Poly> = BTreeSet::new();
        let mut out = Vec::new();
        let mut push = |r: Relation, out: &mut Vec<Relation>| {
            if r.poly.is_zero() {
                return;
            }
            if seen.insert(r.poly.monic()) {
                out.push(r);
            }
        };
        for r in &self.relations {
            push(r.clone(), &mut out);
        }
        for r in &self.relations {
            push(Relation { label: format!("({})*", r.label), poly: r.poly.star() }, &mut out);
        }
        for f in &self.sum_families {
            for r in f.expand(self.roster()) {
                push(r, &mut out);
            }
        }
        out
    }

    /// The δ-sum schemas expanded into polynomials.
    pub fn expanded_sums(&self) -> Vec<Relation> {
        self.sum_families.iter().flat_map(|f| f.expand(self.roster())).collect()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?} n={} {}", self.kind, self.n, self.source)?;
        for r in &self.relations {
            writeln!(f, "  {}: {} = 0", r.label, r.poly)?;
        }
        for s in &self.sum_families {
            writeln!(f, "  {}", s.describe())?;
        }
        Ok(())
    }
}

fn word2(a: Letter, b: Letter) -> Word {
    Word::from_letters([a, b])
}

/// `a - b` for two words.
fn diff(a: Word, b: Word) -> Poly {
    let mut p = Poly::word(a);
    p.add_term(b, &-Scalar::one());
    p
}

fn rel(label: String, poly: Poly) -> Relation {
    Relation { label, poly }
}

pub fn sphere_presentation(pair: &CommutationPair) -> Presentation {
    let n = pair.n();
    let x = |i: usize| Generator::sphere(i).letter();
    let xs = |i: usize| Generator::sphere(i).star_letter();
    let mut relations = Vec::new();
    for f in [SumFamily::SphereStarFirst, SumFamily::SphereStarLast] {
        relations.extend(f.expand(Roster::new(Family::Sphere, n)));
    }
    for i in 0..n {
        for j in i + 1..n {
            if pair.epsilon.get(i, j) {
                relations.push(rel(
                    format!("x{} x{} = x{} x{}", i + 1, j + 1, j + 1, i + 1),
                    diff(word2(x(i), x(j)), word2(x(j), x(i))),
                ));
            }
        }
    }
    for i in 0..n {
        for j in i..n {
            if pair.eta.get(i, j) {
                relations.push(rel(
                    format!("x{}* x{} = x{} x{}*", i + 1, j + 1, j + 1, i + 1),
                    diff(word2(xs(i), x(j)), word2(x(j), xs(i))),
                ));
            }
        }
    }
    Presentation {
        kind: PresentationKind::ComplexSphere,
        n,
        relations,
        sum_families: vec![SumFamily::SphereStarFirst, SumFamily::SphereStarLast],
        source: pair.clone(),
    }
}

fn push_unique(relations: &mut Vec<Relation>, seen: &mut BTreeSet<Poly>, label: String, poly: Poly) {
    if poly.is_zero() {
        return;
    }
    let key = poly.monic();
    let neg = (-&poly).monic();
    if seen.contains(&key) || seen.contains(&neg) {
        return;
    }
    seen.insert(key);
    relations.push(rel(label, poly));
}

pub fn unitary_qg_presentation(pair: &CommutationPair) -> Presentation {
    let n = pair.n();
    let (eps, eta) = (&pair.epsilon, &pair.eta);
    let u = |i: usize, j: usize| Generator::unitary(i, j).letter();
    let us = |i: usize, j: usize| Generator::unitary(i, j).star_letter();
    let mut relations = Vec::new();
    let mut seen = BTreeSet::new();
    let idx = |a: usize, b: usize, c: usize, d: usize| format!("({},{};{},{})", a + 1, b + 1, c + 1, d + 1);
    let quads: Vec<(usize, usize, usize, usize)> = (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| (0..n).flat_map(move |k| (0..n).map(move |l| (i, j, k, l)))))
        .collect();

    for &(i, j, k, l) in &quads {
        let lhs = word2(u(i, k), u(j, l));
        let rhs = match (eps.get(i, j), eps.get(k, l)) {
            (true, true) => word2(u(j, l), u(i, k)),
            (true, false) => word2(u(j, k), u(i, l)),
            (false, true) => word2(u(i, l), u(j, k)),
            (false, false) => continue,
        };
        push_unique(&mut relations, &mut seen, format!("R^eps {}", idx(i, j, k, l)), diff(lhs, rhs));
    }
    for &(i, j, k, l) in &quads {
        let (hij, hkl) = (eta.get(i, j), eta.get(k, l));
        if hij && hkl {
            push_unique(
                &mut relations,
                &mut seen,
                format!("star-commute {}", idx(i, j, k, l)),
                diff(word2(us(i, k), u(j, l)), word2(u(j, l), us(i, k))),
            );
        }
        if (hij && !hkl && k != l) || (!hij && hkl && i != j) {
            let tag = if hij { "zero-col" } else { "zero-row" };
            push_unique(
                &mut relations,
                &mut seen,
                format!("{tag} {}", idx(i, j, k, l)),
                Poly::word(word2(us(i, k), u(j, l))),
            );
            push_unique(
                &mut relations,
                &mut seen,
                format!("{tag}* {}", idx(i, j, k, l)),
                Poly::word(word2(u(i, k), us(j, l))),
            );
        }
        if hij && !eta.get(k, k) && !eta.get(l, l) {
            let a = word2(us(i, k), u(j, k));
            for b in [word2(us(i, l), u(j, l)), word2(u(j, k), us(i, k)), word2(u(j, l), us(i, l))] {
                push_unique(&mut relations, &mut seen, format!("X {}", idx(i, j, k, l)), diff(a.clone(), b));
            }
            let a = word2(us(k, i), u(k, j));
            for b in [word2(us(l, i), u(l, j)), word2(u(k, j), us(k, i)), word2(u(l, j), us(l, i))] {
                push_unique(&mut relations, &mut seen, format!("Y {}", idx(i, j, k, l)), diff(a.clone(), b));
            }
        }
    }
    Presentation {
        kind: PresentationKind::UnitaryQg,
        n,
        relations,
        sum_families: vec![
            SumFamily::ColumnsStarFirst,
            SumFamily::RowsStarLast,
            SumFamily::RowsStarFirst,
            SumFamily::ColumnsStarLast,
        ],
        source: pair.clone(),
    }
}

/// The ε-family shared by the orthogonal group and the tuple space:
/// commutation when both indices pairs commute, zero for the mixed cases.
fn self_adjoint_relations(family: Family, eps: &BinMatrix) -> Vec<Relation> {
    let n = eps.n();
    let g = |i: usize, j: usize| Generator::matrix(family, i, j).letter();
    let mut relations = Vec::new();
    let mut seen = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let lhs = word2(g(i, k), g(j, l));
                    let label = format!("({},{};{},{})", i + 1, j + 1, k + 1, l + 1);
                    match (eps.get(i, j), eps.get(k, l)) {
                        (true, true) => push_unique(
                            &mut relations,
                            &mut seen,
                            format!("commute {label}"),
                            diff(lhs, word2(g(j, l), g(i, k))),
                        ),
                        (true, false) | (false, true) => {
                            push_unique(&mut relations, &mut seen, format!("zero {label}"), Poly::word(lhs))
                        }
                        (false, false) => {}
                    }
                }
            }
        }
    }
    relations
}

pub fn orthogonal_qg_presentation(epsilon: &BinMatrix) -> Presentation {
    let n = epsilon.n();
    Presentation {
        kind: PresentationKind::OrthogonalQg,
        n,
        relations: self_adjoint_relations(Family::Orthogonal, epsilon),
        sum_families: vec![SumFamily::Rows, SumFamily::Columns],
        source: CommutationPair { epsilon: epsilon.clone(), eta: BinMatrix::zeros(n) },
    }
}

pub fn tuple_space_presentation(epsilon: &BinMatrix) -> Presentation {
    let n = epsilon.n();
    Presentation {
        kind: PresentationKind::TupleSpace,
        n,
        relations: self_adjoint_relations(Family::Tuple, epsilon),
        sum_families: vec![SumFamily::Columns],
        source: CommutationPair { epsilon: epsilon.clone(), eta: BinMatrix::zeros(n) },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RestrictError {
    #[error("the kept index set is empty")]
    EmptySubset,
    #[error("index {index} is out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index {0} is listed twice")]
    DuplicateIndex(usize),
    #[error("only sphere presentations can be restricted")]
    NotASphere,
}

/// Where each original sphere coordinate goes under restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMap {
    /// `targets[i] = Some(p)`: x_i ↦ x_p in the smaller sphere; `None`: x_i ↦ 0.
    pub targets: Vec<Option<usize>>,
}

impl GeneratorMap {
    /// Image of a polynomial over the original roster.
    pub fn apply(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        'terms: for (w, c) in p.terms() {
            let mut letters = Vec::with_capacity(w.degree());
            for l in w.letters() {
                match self.targets[l.gen.row()] {
                    Some(q) => letters.push(Letter { gen: Generator::sphere(q), starred: l.starred }),
                    None => continue 'terms,
                }
            }
            out.add_term(Word::from_letters(letters), c);
        }
        out
    }
}

/// The sphere on the coordinates in `keep` (1-based, in the given order),
/// with the others sent to zero.
pub fn restrict_presentation(
    pres: &Presentation,
    keep: &[usize],
) -> Result<(Presentation, GeneratorMap), RestrictError> {
    if pres.kind != PresentationKind::ComplexSphere {
        return Err(RestrictError::NotASphere);
    }
    if keep.is_empty() {
        return Err(RestrictError::EmptySubset);
    }
    let mut targets = vec![None; pres.n];
    let mut zero_based = Vec::with_capacity(keep.len());
    for (pos, &k) in keep.iter().enumerate() {
        if k == 0 || k > pres.n {
            return Err(RestrictError::IndexOutOfRange { index: k, n: pres.n });
        }
        if targets[k - 1].is_some() {
            return Err(RestrictError::DuplicateIndex(k));
        }
        targets[k - 1] = Some(pos);
        zero_based.push(k - 1);
    }
    let sub = pres.source.restrict(&zero_based);
    Ok((sphere_presentation(&sub), GeneratorMap { targets }))
}
