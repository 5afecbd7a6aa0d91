use crate::ncalg::certificate::NonzeroEvidence;
use crate::ncalg::quotient::ideal_membership_bounded;
use crate::ncalg::{build_rewrite_system, Certificate, Generator, Letter, Poly, Status, TraceStep, Word, ZeroEvidence};
use crate::presentations::{sphere_presentation, unitary_qg_presentation, CommutationPair};
use crate::repmodels::{operator_norm, remark_phi_model, remark_phi_pair, ModelState};

use super::{Check, VerificationReport, VerifyConfig};

const NONZERO_THRESHOLD: f64 = 1e-9;

/// n = 2, ε = 0, η₁₂ = 1 with both diagonal entries 0.
pub fn noninjectivity_pair() -> CommutationPair {
    remark_phi_pair()
}

/// `x_i ↦ u_{i,k}` on words.
fn column_image(p: &Poly, k: usize) -> Poly {
    Poly::from_terms(p.terms().map(|(w, c)| {
        let letters =
            w.letters().iter().map(|l| Letter { gen: Generator::unitary(l.gen.row(), k), starred: l.starred });
        (Word::from_letters(letters), c.clone())
    }))
}

fn word(letters: impl IntoIterator<Item = Letter>) -> Poly {
    Poly::word(Word::from_letters(letters))
}

fn check(relation: String, expected: Status, certificate: Certificate) -> Check {
    Check { relation, status: certificate.status, expected: Some(expected), certificate, micros: None }
}

/// Rewrites `p` to zero and cross-checks with an explicit two-sided
/// combination; the note names the linear rows the trace used.
fn certify_zero(p: &Poly, pair: &CommutationPair, cfg: VerifyConfig) -> Certificate {
    let pres = unitary_qg_presentation(pair);
    let rs = build_rewrite_system(&pres);
    let cert = rs.certify(p, cfg.step_limit);
    let Some(ZeroEvidence::Trace { steps }) = &cert.zero_evidence else { return cert };
    let rows: Vec<String> = steps
        .iter()
        .filter_map(|s| match s {
            TraceStep::Linear { relation, normalized, coefficient, .. } => {
                Some(format!("{relation} normalizes to {normalized}, subtracted with coefficient {coefficient}"))
            }
            TraceStep::Rule { .. } => None,
        })
        .collect();
    let membership = match ideal_membership_bounded(p, &pres, cfg.bound.max(p.degree())) {
        Ok(c) if c.is_zero() => match &c.zero_evidence {
            Some(ZeroEvidence::Combination { terms }) => format!("ideal membership agrees with {} terms", terms.len()),
            _ => "ideal membership agrees".to_string(),
        },
        Ok(_) => return Certificate::inconclusive("rewriting and ideal membership disagree"),
        Err(e) => format!("ideal membership unavailable: {e}"),
    };
    cert.with_note(format!("{}; {membership}", rows.join("; ")))
}

/// Noninjectivity checks for a given pair. The column map needs η₁₂ = 1 and
/// a column k with η_kk = 0; otherwise the zero checks are Inconclusive.
pub fn verify_noninjectivity_for(pair: &CommutationPair, cfg: VerifyConfig) -> VerificationReport {
    let task = "noninjectivity".to_string();
    let x1 = Generator::sphere(0);
    let x2 = Generator::sphere(1);
    let sphere_word = word([x1.letter(), x2.star_letter()]);
    let k0 = pair.non_normal_indices().first().copied();
    let mut checks = Vec::new();
    match k0 {
        Some(k) if pair.n() == 2 && pair.eta.get(0, 1) => {
            let phi = column_image(&sphere_word, k);
            checks.push(check(
                format!("phi({sphere_word}) = {phi} = 0"),
                Status::ProvedZero,
                certify_zero(&phi, pair, cfg),
            ));
            let u = |i| Generator::unitary(i, k);
            let x12 = word([u(0).star_letter(), u(1).letter()]);
            checks.push(check(format!("X12 = {x12} = 0"), Status::ProvedZero, certify_zero(&x12, pair, cfg)));
        }
        _ => {
            let reason = if pair.n() != 2 {
                "the column map is only set up for n = 2"
            } else if !pair.eta.get(0, 1) {
                "η12 = 0, so X12 is not defined"
            } else {
                "every η_kk = 1, so there is no column to map onto"
            };
            checks.push(check("X12 = 0".into(), Status::ProvedZero, Certificate::inconclusive(reason)));
        }
    }
    let witness = if pair.n() != 2 {
        Certificate::inconclusive("the witness has two coordinates")
    } else {
        let base = remark_phi_model();
        match base.retarget(sphere_presentation(pair), "remark-phi") {
            Ok(model) if model.state() == ModelState::Valid => match model.evaluate(&sphere_word) {
                Ok(image) => {
                    let norm = operator_norm(&image);
                    let diag: Vec<String> = (0..image.nrows()).map(|i| format!("{}", image[(i, i)].re)).collect();
                    let off_diag = (&image - crate::repmodels::CMatrix::from_diagonal(&image.diagonal())).norm();
                    let cert = if norm > NONZERO_THRESHOLD {
                        Certificate::nonzero(NonzeroEvidence {
                            model: model.name.clone(),
                            image_norm: norm,
                            threshold: NONZERO_THRESHOLD,
                        })
                    } else {
                        Certificate::inconclusive("image vanishes in the witness")
                    };
                    cert.with_note(format!("image diag({}), off-diagonal norm {off_diag:e}", diag.join(", ")))
                }
                Err(e) => Certificate::inconclusive(e.to_string()),
            },
            Ok(model) => Certificate::inconclusive(format!(
                "witness violates this pair's relations (max residual {:e})",
                model.residuals().max
            )),
            Err(e) => Certificate::inconclusive(e.to_string()),
        }
    };
    checks.push(check(format!("{sphere_word} != 0"), Status::ProvedNonzero, witness));
    VerificationReport::assemble(task, pair.clone(), vec![], checks)
}

pub fn verify_noninjectivity_example() -> VerificationReport {
    verify_noninjectivity_for(&noninjectivity_pair(), VerifyConfig::default())
}
