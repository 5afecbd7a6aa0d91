use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Which generator family a letter belongs to. The declaration order is the
/// first component of the letter order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Sphere coordinates `x_i`.
    Sphere,
    /// Quantum unitary group entries `u_ij`.
    Unitary,
    /// Quantum orthogonal group entries `u_ij`, self-adjoint.
    Orthogonal,
    /// Quantum tuple-space coordinates `x_ij`, self-adjoint.
    Tuple,
}

impl Family {
    /// Self-adjoint families never carry a star.
    pub fn is_self_adjoint(self) -> bool {
        matches!(self, Family::Orthogonal | Family::Tuple)
    }

    pub fn is_matrix(self) -> bool {
        !matches!(self, Family::Sphere)
    }

    fn symbol(self) -> &'static str {
        match self {
            Family::Sphere | Family::Tuple => "x",
            Family::Unitary | Family::Orthogonal => "u",
        }
    }
}

/// A generator. Indices are zero-based; `col` is unused (zero) for sphere
/// coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub family: Family,
    pub row: u8,
    pub col: u8,
}

impl Generator {
    pub fn sphere(i: usize) -> Self {
        Generator { family: Family::Sphere, row: i as u8, col: 0 }
    }

    pub fn matrix(family: Family, i: usize, j: usize) -> Self {
        debug_assert!(family.is_matrix());
        Generator { family, row: i as u8, col: j as u8 }
    }

    pub fn unitary(i: usize, j: usize) -> Self {
        Generator::matrix(Family::Unitary, i, j)
    }

    pub fn orthogonal(i: usize, j: usize) -> Self {
        Generator::matrix(Family::Orthogonal, i, j)
    }

    pub fn tuple(i: usize, j: usize) -> Self {
        Generator::matrix(Family::Tuple, i, j)
    }

    pub fn letter(self) -> Letter {
        Letter { gen: self, starred: false }
    }

    pub fn star_letter(self) -> Letter {
        Letter { gen: self, starred: !self.family.is_self_adjoint() }
    }

    pub fn row(self) -> usize {
        self.row as usize
    }

    pub fn col(self) -> usize {
        self.col as usize
    }

    /// Parses the display form (`x2`, `u12`, `u1,2`).
    pub fn parse(s: &str, family: Family) -> Option<Self> {
        let rest = s.strip_prefix(family.symbol())?;
        if !family.is_matrix() {
            let i: usize = rest.parse().ok()?;
            return (i >= 1).then(|| Generator::sphere(i - 1));
        }
        let (i, j) = match rest.split_once(',') {
            Some((a, b)) => (a.parse().ok()?, b.parse().ok()?),
            None if rest.len() == 2 => (rest[..1].parse::<usize>().ok()?, rest[1..].parse::<usize>().ok()?),
            None => return None,
        };
        (i >= 1 && j >= 1).then(|| Generator::matrix(family, i - 1, j - 1))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.family.symbol();
        if !self.family.is_matrix() {
            return write!(f, "{}{}", sym, self.row + 1);
        }
        if self.row < 9 && self.col < 9 {
            write!(f, "{}{}{}", sym, self.row + 1, self.col + 1)
        } else {
            write!(f, "{}{},{}", sym, self.row + 1, self.col + 1)
        }
    }
}

/// A generator or its adjoint. Ordered by `(family, row, col, starred)`
/// with unstarred before starred.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: Generator,
    pub starred: bool,
}

impl Letter {
    pub fn star(self) -> Letter {
        if self.gen.family.is_self_adjoint() {
            self
        } else {
            Letter { gen: self.gen, starred: !self.starred }
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.gen, if self.starred { "*" } else { "" })
    }
}

/// A monomial in the free *-algebra. The empty word is the unit.
///
/// Words are ordered length-lexicographically: shorter words first, then
/// letter by letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(SmallVec<[Letter; 4]>);

impl Word {
    pub fn unit() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        Word(letters.into_iter().collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Reverses the word and stars every letter.
    pub fn star(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.star()).collect())
    }

    /// `prefix · middle · suffix`, where `prefix = self[..at]` and
    /// `suffix = self[at + width..]`.
    pub fn splice(&self, at: usize, width: usize, middle: &Word) -> Word {
        let mut v: SmallVec<[Letter; 4]> = SmallVec::with_capacity(self.0.len() - width + middle.0.len());
        v.extend_from_slice(&self.0[..at]);
        v.extend_from_slice(&middle.0);
        v.extend_from_slice(&self.0[at + width..]);
        Word(v)
    }
}

impl From<Letter> for Word {
    fn from(l: Letter) -> Self {
        Word::from_letters([l])
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// The generator set of one presentation: a family and its size `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Roster {
    pub family: Family,
    pub n: usize,
}

impl Roster {
    pub fn new(family: Family, n: usize) -> Self {
        Roster { family, n }
    }

    pub fn generators(&self) -> Vec<Generator> {
        if self.family.is_matrix() {
            (0..self.n)
                .flat_map(|i| (0..self.n).map(move |j| (i, j)))
                .map(|(i, j)| Generator::matrix(self.family, i, j))
                .collect()
        } else {
            (0..self.n).map(Generator::sphere).collect()
        }
    }

    /// All letters over the roster in letter order.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for g in self.generators() {
            out.push(g.letter());
            if !self.family.is_self_adjoint() {
                out.push(g.star_letter());
            }
        }
        out
    }

    pub fn contains(&self, g: Generator) -> bool {
        g.family == self.family
            && g.row() < self.n
            && (if self.family.is_matrix() { g.col() < self.n } else { g.col == 0 })
    }

    pub fn admits_letter(&self, l: Letter) -> bool {
        self.contains(l.gen) && !(l.starred && self.family.is_self_adjoint())
    }

    pub fn admits_word(&self, w: &Word) -> bool {
        w.letters().iter().all(|&l| self.admits_letter(l))
    }

    /// All words of degree at most `bound`, in increasing word order.
    pub fn words_up_to(&self, bound: usize) -> Vec<Word> {
        let letters = self.letters();
        let mut out = vec![Word::unit()];
        let mut layer = vec![Word::unit()];
        for _ in 0..bound {
            let next: Vec<Word> =
                layer.iter().flat_map(|w| letters.iter().map(move |&l| w.concat(&Word::from(l)))).collect();
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Number of words of degree at most `bound`, saturating.
    pub fn word_count(&self, bound: usize) -> usize {
        let l = self.letters().len();
        let mut total = 0usize;
        let mut layer = 1usize;
        for _ in 0..=bound {
            total = total.saturating_add(layer);
            layer = layer.saturating_mul(l);
        }
        total
    }
}
