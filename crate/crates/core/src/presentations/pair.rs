use std::fmt;

use serde::{Deserialize, Serialize};

/// A symmetric n×n matrix over {0, 1}.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct BinMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl BinMatrix {
    pub fn zeros(n: usize) -> Self {
        BinMatrix { n, bits: vec![false; n * n] }
    }

    /// All off-diagonal entries set.
    pub fn off_diagonal_ones(n: usize) -> Self {
        let mut m = BinMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn ones(n: usize) -> Self {
        BinMatrix { n, bits: vec![true; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.bits[i * self.n + j] = v;
        self.bits[j * self.n + i] = v;
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) as u8).collect()).collect()
    }

    /// The submatrix on `keep`, in the given order.
    pub fn restrict(&self, keep: &[usize]) -> BinMatrix {
        let mut m = BinMatrix::zeros(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m.bits[a * keep.len() + b] = self.get(i, j);
            }
        }
        m
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &BinMatrix) -> bool {
        self.n == other.n && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    fn from_rows(name: &'static str, rows: &[Vec<i64>]) -> Result<BinMatrix, PairError> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(PairError::SizeMismatch(format!("{name} row {} has {} entries, expected {n}", i + 1, r.len())));
        }
        let mut m = BinMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 && v != 1 {
                    return Err(PairError::BadEntry { matrix: name, i: i + 1, j: j + 1, value: v });
                }
                m.bits[i * n + j] = v == 1;
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if m.get(i, j) != m.get(j, i) {
                    return Err(PairError::NotSymmetric { matrix: name, i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(m)
    }
}

impl fmt::Display for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows().iter().map(|r| r.iter().map(u8::to_string).collect::<Vec<_>>().join(",")).collect();
        write!(f, "[{}]", rows.join(";"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PairError {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("{matrix} is not symmetric at ({i},{j})/({j},{i})")]
    NotSymmetric { matrix: &'static str, i: usize, j: usize },
    #[error("epsilon has nonzero diagonal entry at ({i},{i})")]
    BadDiagonal { i: usize },
    #[error("{matrix} entry at ({i},{j}) is {value}, expected 0 or 1")]
    BadEntry { matrix: &'static str, i: usize, j: usize, value: i64 },
    #[error("{count} pairs of size {n} exceed the enumeration cap {cap}")]
    TooLarge { n: usize, count: u128, cap: usize },
}

/// The (ε, η) data: ε says which coordinates commute, η which pairs commute
/// with adjoints. The diagonal of η marks normal coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct CommutationPair {
    pub epsilon: BinMatrix,
    pub eta: BinMatrix,
}

fn check_epsilon_diagonal(eps: &BinMatrix) -> Result<(), PairError> {
    match (0..eps.n()).find(|&i| eps.get(i, i)) {
        Some(i) => Err(PairError::BadDiagonal { i: i + 1 }),
        None => Ok(()),
    }
}

/// Validates a commutation matrix on its own (orthogonal and tuple-space
/// presentations only use ε).
pub fn validate_epsilon(epsilon: &[Vec<i64>]) -> Result<BinMatrix, PairError> {
    if epsilon.is_empty() {
        return Err(PairError::SizeMismatch("matrix must be at least 1×1".into()));
    }
    let eps = BinMatrix::from_rows("epsilon", epsilon)?;
    check_epsilon_diagonal(&eps)?;
    Ok(eps)
}

pub fn validate_pair(epsilon: &[Vec<i64>], eta: &[Vec<i64>]) -> Result<CommutationPair, PairError> {
    if epsilon.len() != eta.len() {
        return Err(PairError::SizeMismatch(format!(
            "epsilon is {}×{}, eta is {}×{}",
            epsilon.len(),
            epsilon.len(),
            eta.len(),
            eta.len()
        )));
    }
    let eps = validate_epsilon(epsilon)?;
    let eta = BinMatrix::from_rows("eta", eta)?;
    Ok(CommutationPair { epsilon: eps, eta })
}

impl CommutationPair {
    pub fn n(&self) -> usize {
        self.epsilon.n()
    }

    /// Shorthand for tests and built-in examples; panics on invalid input.
    pub fn from_rows(epsilon: &[&[i64]], eta: &[&[i64]]) -> Self {
        let e: Vec<Vec<i64>> = epsilon.iter().map(|r| r.to_vec()).collect();
        let h: Vec<Vec<i64>> = eta.iter().map(|r| r.to_vec()).collect();
        validate_pair(&e, &h).expect("valid pair literal")
    }

    pub fn free(n: usize) -> Self {
        CommutationPair { epsilon: BinMatrix::zeros(n), eta: BinMatrix::zeros(n) }
    }

    pub fn classical(n: usize) -> Self {
        CommutationPair { epsilon: BinMatrix::off_diagonal_ones(n), eta: BinMatrix::ones(n) }
    }

    pub fn restrict(&self, keep: &[usize]) -> CommutationPair {
        CommutationPair { epsilon: self.epsilon.restrict(keep), eta: self.eta.restrict(keep) }
    }

    /// Indices with η_kk = 0, ascending.
    pub fn non_normal_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&k| !self.eta.get(k, k)).collect()
    }
}

impl fmt::Display for CommutationPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "eps={} eta={}", self.epsilon, self.eta)
    }
}

#[derive(Serialize, Deserialize)]
struct PairFile {
    n: usize,
    epsilon: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eta: Option<Vec<Vec<i64>>>,
}

impl Serialize for CommutationPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let to_i = |m: &BinMatrix| -> Vec<Vec<i64>> {
            m.rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect()
        };
        PairFile { n: self.n(), epsilon: to_i(&self.epsilon), eta: Some(to_i(&self.eta)) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CommutationPair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let file = PairFile::deserialize(d)?;
        parse_pair_file(file).map_err(serde::de::Error::custom)
    }
}

fn parse_pair_file(file: PairFile) -> Result<CommutationPair, PairError> {
    if file.epsilon.len() != file.n {
        return Err(PairError::SizeMismatch(format!("n = {} but epsilon has {} rows", file.n, file.epsilon.len())));
    }
    let eta = file.eta.unwrap_or_else(|| vec![vec![0; file.n]; file.n]);
    validate_pair(&file.epsilon, &eta)
}

/// Parses the JSON pair file format `{"n", "epsilon", "eta"}`; a missing
/// `eta` means all zeros.
pub fn parse_pair_json(text: &str) -> Result<CommutationPair, PairInputError> {
    let file: PairFile = serde_json::from_str(text).map_err(|e| PairInputError::Json(e.to_string()))?;
    Ok(parse_pair_file(file)?)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PairInputError {
    #[error("malformed pair file: {0}")]
    Json(String),
    #[error(transparent)]
    Invalid(#[from] PairError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub is_regular: bool,
    /// 1-based `(i, j)` with `i < j`.
    pub violations_convention_a: Vec<(usize, usize)>,
    /// 1-based indices.
    pub violations_convention_b: Vec<usize>,
}

pub fn is_regular(pair: &CommutationPair) -> RegularityReport {
    let n = pair.n();
    let (eps, eta) = (&pair.epsilon, &pair.eta);
    let mut a = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if (eta.get(i, i) || eta.get(j, j)) && eps.get(i, j) != eta.get(i, j) {
                a.push((i + 1, j + 1));
            }
        }
    }
    let b: Vec<usize> = (0..n)
        .filter(|&i| !eta.get(i, i))
        .filter(|&i| !(0..n).any(|j| j != i && !eta.get(j, j) && (!eps.get(i, j) || !eta.get(i, j))))
        .map(|i| i + 1)
        .collect();
    RegularityReport {
        is_regular: a.is_empty() && b.is_empty(),
        violations_convention_a: a,
        violations_convention_b: b,
    }
}

/// Least fixpoint of the two closure rules: a coordinate all of whose
/// non-normal partners fully commute with it (including the case of no such
/// partner) becomes normal; commutation and star-commutation merge next to a
/// normal coordinate.
pub fn regularize(pair: &CommutationPair) -> CommutationPair {
    let n = pair.n();
    let mut eps = pair.epsilon.clone();
    let mut eta = pair.eta.clone();
    loop {
        let mut changed = false;
        for i in 0..n {
            if !eta.get(i, i) && (0..n).all(|j| j == i || eta.get(j, j) || (eps.get(i, j) && eta.get(i, j))) {
                eta.set(i, i, true);
                changed = true;
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if (eta.get(i, i) || eta.get(j, j)) && eps.get(i, j) != eta.get(i, j) {
                    eps.set(i, j, true);
                    eta.set(i, j, true);
                    changed = true;
                }
            }
        }
        if !changed {
            return CommutationPair { epsilon: eps, eta };
        }
    }
}

pub const DEFAULT_ENUMERATION_CAP: usize = 1 << 16;

/// Number of valid pairs of size n: 2^(n(n−1)/2) choices of ε times
/// 2^(n(n+1)/2) of η.
pub fn pair_count(n: usize) -> u128 {
    let bits = (n * (n - 1) / 2 + n * (n + 1) / 2) as u32;
    if bits >= 128 {
        u128::MAX
    } else {
        1u128 << bits
    }
}

/// Every symmetric zero-diagonal ε of size n, lexicographic on the flattened
/// matrix.
pub fn enumerate_epsilons(n: usize) -> Vec<BinMatrix> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    (0u64..1 << slots.len())
        .map(|mask| {
            let mut m = BinMatrix::zeros(n);
            // The first slot in row-major order is the most significant bit.
            for (k, &(i, j)) in slots.iter().enumerate() {
                if mask >> (slots.len() - 1 - k) & 1 == 1 {
                    m.set(i, j, true);
                }
            }
            m
        })
        .collect()
}

fn enumerate_etas(n: usize) -> Vec<BinMatrix> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    (0u64..1 << slots.len())
        .map(|mask| {
            let mut m = BinMatrix::zeros(n);
            for (k, &(i, j)) in slots.iter().enumerate() {
                if mask >> (slots.len() - 1 - k) & 1 == 1 {
                    m.set(i, j, true);
                }
            }
            m
        })
        .collect()
}

/// All valid pairs of size n in lexicographic order of flattened (ε, η).
pub fn enumerate_pairs(n: usize, regular_only: bool, cap: usize) -> Result<Vec<CommutationPair>, PairError> {
    assert!(n >= 1, "pairs need n >= 1");
    let count = pair_count(n);
    if count > cap as u128 {
        return Err(PairError::TooLarge { n, count, cap });
    }
    let etas = enumerate_etas(n);
    let mut out = Vec::new();
    for eps in enumerate_epsilons(n) {
        for eta in &etas {
            let p = CommutationPair { epsilon: eps.clone(), eta: eta.clone() };
            if !regular_only || is_regular(&p).is_regular {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// A uniformly random valid pair.
pub fn random_pair<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> CommutationPair {
    let mut eps = BinMatrix::zeros(n);
    let mut eta = BinMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            if i != j {
                eps.set(i, j, rng.random());
            }
            eta.set(i, j, rng.random());
        }
    }
    CommutationPair { epsilon: eps, eta }
}
