//! Certificate-level replays: the comultiplication is a *-homomorphism,
//! the coactions preserve relations, the sphere-to-column map is not
//! injective, and the independence facts hold in witness models.

mod independence;
mod noninjectivity;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::ncalg::{
    comultiplication, is_zero_tensor, sphere_action, tuple_action, Certificate, QuotientBasis, Side, Status, TensorHom,
};
use crate::presentations::{
    is_regular, orthogonal_qg_presentation, regularize, sphere_presentation, tuple_space_presentation,
    unitary_qg_presentation, BinMatrix, CommutationPair, Presentation, Relation,
};

pub use independence::{check_independence_suite, IndependenceReport, IndependenceSuite, DEFAULT_SVD_THRESHOLD};
pub use noninjectivity::{noninjectivity_pair, verify_noninjectivity_example, verify_noninjectivity_for};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub relation: String,
    pub status: Status,
    /// What the check must produce to count as certified; ProvedZero when
    /// absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Status>,
    pub certificate: Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub micros: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub task: String,
    pub pair: CommutationPair,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notices: Vec<String>,
    pub checks: Vec<Check>,
    /// ProvedZero only if every check met its expected status; anything
    /// else downgrades to Inconclusive.
    pub overall: Status,
}

impl Check {
    pub fn met(&self) -> bool {
        self.status == self.expected.unwrap_or(Status::ProvedZero)
    }
}

impl VerificationReport {
    fn assemble(task: String, pair: CommutationPair, notices: Vec<String>, checks: Vec<Check>) -> Self {
        let overall = if checks.iter().all(Check::met) { Status::ProvedZero } else { Status::Inconclusive };
        VerificationReport { task, pair, notices, checks, overall }
    }

    pub fn passed(&self) -> bool {
        self.overall == Status::ProvedZero
    }

    /// Drops per-check timings, for byte-reproducible output.
    pub fn without_timings(mut self) -> Self {
        for c in &mut self.checks {
            c.micros = None;
        }
        self
    }

    pub fn failing(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.met())
    }
}

/// Verification knobs shared by all tensor checks.
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub bound: usize,
    /// Rewrite step budget for the trace-based checks.
    pub step_limit: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { bound: 2, step_limit: 100_000 }
    }
}

fn run_checks(map: &TensorHom, relations: &[Relation], left: &QuotientBasis, right: &QuotientBasis) -> Vec<Check> {
    relations
        .par_iter()
        .map(|r| {
            let start = Instant::now();
            let certificate = map
                .apply(&r.poly)
                .and_then(|t| is_zero_tensor(&t, left, right))
                .unwrap_or_else(|e| Certificate::inconclusive(e.to_string()));
            Check {
                relation: format!("{}: {} = 0", r.label, r.poly),
                status: certificate.status,
                expected: None,
                certificate,
                micros: Some(start.elapsed().as_micros() as u64),
            }
        })
        .collect()
}

fn basis_or_note(pres: &Presentation, bound: usize) -> Result<QuotientBasis, String> {
    QuotientBasis::build_tracked(pres, bound).map_err(|e| e.to_string())
}

fn failed_setup(task: String, pair: CommutationPair, notices: Vec<String>, err: String) -> VerificationReport {
    let certificate = Certificate::inconclusive(err);
    let check = Check {
        relation: "quotient construction".into(),
        status: certificate.status,
        expected: None,
        certificate,
        micros: None,
    };
    VerificationReport::assemble(task, pair, notices, vec![check])
}

/// Every relation of the quantum unitary group, and the unitarity of u and
/// ū, is mapped to zero by Δ in the bounded tensor quotient.
pub fn verify_comultiplication(pair: &CommutationPair, cfg: VerifyConfig) -> VerificationReport {
    let task = "hopf".to_string();
    let pres = unitary_qg_presentation(pair);
    let basis = match basis_or_note(&pres, cfg.bound) {
        Ok(b) => b,
        Err(e) => return failed_setup(task, pair.clone(), vec![], e),
    };
    let mut relations = pres.relations.clone();
    relations.extend(pres.expanded_sums());
    let checks = run_checks(&comultiplication(pair.n()), &relations, &basis, &basis);
    VerificationReport::assemble(task, pair.clone(), vec![], checks)
}

/// Images of all sphere relations under α or β vanish in
/// C(U) ⊗ C(S). Non-regular input is regularized first, with a notice.
pub fn verify_sphere_action(pair: &CommutationPair, side: Side, cfg: VerifyConfig) -> VerificationReport {
    let task = format!("sphere-action/{}", side.symbol());
    let mut notices = Vec::new();
    let pair = if is_regular(pair).is_regular {
        pair.clone()
    } else {
        let reg = regularize(pair);
        notices.push(format!("input pair is not regular; regularized first to {reg}"));
        reg
    };
    let sphere = sphere_presentation(&pair);
    let group = unitary_qg_presentation(&pair);
    let (left, right) = match (basis_or_note(&group, cfg.bound), basis_or_note(&sphere, cfg.bound)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => return failed_setup(task, pair, notices, e),
    };
    let checks = run_checks(&sphere_action(pair.n(), side), &sphere.relations, &left, &right);
    VerificationReport::assemble(task, pair, notices, checks)
}

/// Images of all tuple-space relations under α or β vanish in
/// C(Ô) ⊗ C(X).
pub fn verify_tuple_action(epsilon: &BinMatrix, side: Side, cfg: VerifyConfig) -> VerificationReport {
    let task = format!("tuple-action/{}", side.symbol());
    let space = tuple_space_presentation(epsilon);
    let group = orthogonal_qg_presentation(epsilon);
    let pair = space.source.clone();
    let (left, right) = match (basis_or_note(&group, cfg.bound), basis_or_note(&space, cfg.bound)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => return failed_setup(task, pair, vec![], e),
    };
    let mut relations = space.relations.clone();
    relations.extend(space.expanded_sums());
    let checks = run_checks(&tuple_action(epsilon.n(), side), &relations, &left, &right);
    VerificationReport::assemble(task, pair, vec![], checks)
}

/// Outcome of checking that the regularized sphere's extra relations follow
/// from the original ones.
#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub pair: CommutationPair,
    pub regularized: CommutationPair,
    pub product_bound: usize,
    pub checks: Vec<Check>,
    pub proved: usize,
    pub inconclusive: usize,
}

/// Each relation of the regularized sphere is tested for membership in the
/// two-sided span of the original relations up to `product_bound`.
/// Inconclusive entries are reported, not treated as failures.
pub fn regularization_consistency(pair: &CommutationPair, product_bound: usize) -> ConsistencyReport {
    use crate::ncalg::quotient::membership_in;
    let reg = regularize(pair);
    let original = sphere_presentation(pair);
    let target = sphere_presentation(&reg);
    let basis =
        QuotientBasis::with_products(&original, product_bound, crate::ncalg::quotient::DEFAULT_DIMENSION_CAP, false);
    let checks: Vec<Check> = target
        .relations
        .iter()
        .map(|r| {
            let certificate = match &basis {
                Ok(b) => membership_in(&r.poly, b).unwrap_or_else(|e| Certificate::inconclusive(e.to_string())),
                Err(e) => Certificate::inconclusive(e.to_string()),
            };
            Check {
                relation: format!("{}: {} = 0", r.label, r.poly),
                status: certificate.status,
                expected: None,
                certificate,
                micros: None,
            }
        })
        .collect();
    let proved = checks.iter().filter(|c| c.status == Status::ProvedZero).count();
    ConsistencyReport {
        pair: pair.clone(),
        regularized: reg,
        product_bound,
        proved,
        inconclusive: checks.len() - proved,
        checks,
    }
}
