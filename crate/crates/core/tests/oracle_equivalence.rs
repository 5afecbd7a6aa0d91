//! The rewrite engine and the linear-span oracle are independent routes to
//! "this polynomial vanishes"; they must agree, and whatever they prove
//! zero must vanish in every genuine representation.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ncstar_core::ncalg::{build_rewrite_system, ideal_membership_bounded, Poly, QuotientBasis};
use ncstar_core::presentations::{
    enumerate_epsilons, enumerate_pairs, orthogonal_qg_presentation, sphere_presentation, tuple_space_presentation,
    unitary_qg_presentation, Presentation, DEFAULT_ENUMERATION_CAP,
};
use ncstar_core::repmodels::operator_norm;

use common::{random_poly, small_scalar, valid_models};

fn n2_presentations() -> Vec<Presentation> {
    let mut out = Vec::new();
    for pair in enumerate_pairs(2, false, DEFAULT_ENUMERATION_CAP).unwrap() {
        out.push(sphere_presentation(&pair));
        out.push(unitary_qg_presentation(&pair));
    }
    for eps in enumerate_epsilons(2) {
        out.push(orthogonal_qg_presentation(&eps));
        out.push(tuple_space_presentation(&eps));
    }
    out
}

/// Half of the samples are relation combinations, so both outcomes occur.
fn sample(pres: &Presentation, rng: &mut ChaCha8Rng) -> Poly {
    let roster = pres.roster();
    let closed = pres.closed_relations();
    match rng.random_range(0..3) {
        0 => random_poly(&roster, 2, rng.random_range(1..=3), rng),
        kind => {
            let mut p = Poly::zero();
            for _ in 0..rng.random_range(1..=3) {
                let r = &closed[rng.random_range(0..closed.len())];
                p.add_scaled(&r.poly, &small_scalar(rng));
            }
            if kind == 2 {
                p = &p + &random_poly(&roster, 2, 1, rng);
            }
            p
        }
    }
}

#[test]
fn rewrite_and_linear_span_agree_on_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let (mut total, mut zero) = (0, 0);
    for pres in n2_presentations() {
        let rs = build_rewrite_system(&pres);
        let basis = QuotientBasis::build(&pres, 2).unwrap();
        let models = valid_models(&pres);
        assert!(!models.is_empty(), "{:?} {} has no witness", pres.kind, pres.source);
        for _ in 0..40 {
            let p = sample(&pres, &mut rng);
            let by_rewrite = rs.reduce(&p, 100_000).unwrap().is_zero();
            let by_span = basis.reduce(&p).unwrap().is_zero();
            assert_eq!(by_rewrite, by_span, "{:?} {}: {p}", pres.kind, pres.source);
            total += 1;
            if by_span {
                zero += 1;
                for m in &models {
                    let norm = operator_norm(&m.evaluate(&p).unwrap());
                    assert!(norm < 1e-9, "{p} evaluates to norm {norm} in {}", m.name);
                }
            }
        }
    }
    assert!(total >= 1000, "{total}");
    assert!(zero > total / 4 && zero < total, "{zero}/{total}");
}

#[test]
fn combination_certificates_replay() {
    use ncstar_core::ncalg::certificate::replay_combination;
    use ncstar_core::ncalg::ZeroEvidence;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for pres in n2_presentations().into_iter().step_by(3) {
        let closed = pres.closed_relations();
        for _ in 0..5 {
            let p = sample(&pres, &mut rng);
            let cert = ideal_membership_bounded(&p, &pres, 2).unwrap();
            if let Some(ZeroEvidence::Combination { terms }) = &cert.zero_evidence {
                assert!(replay_combination(&p, terms, &closed), "{p}");
            }
        }
    }
}

#[test]
fn rewrite_traces_replay() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for pres in n2_presentations() {
        let rs = build_rewrite_system(&pres);
        for _ in 0..5 {
            let p = sample(&pres, &mut rng);
            let (q, trace) = rs.rewrite(&p, 100_000).unwrap();
            assert_eq!(rs.replay(&p, &trace), Some(q));
        }
    }
}

#[test]
fn relations_are_zero_in_both_routes_and_star_closed() {
    for pres in n2_presentations() {
        let rs = build_rewrite_system(&pres);
        let basis = QuotientBasis::build(&pres, 2).unwrap();
        for r in pres.closed_relations() {
            assert!(basis.reduce(&r.poly).unwrap().is_zero(), "{}", r.label);
            assert!(basis.reduce(&r.poly.star()).unwrap().is_zero(), "({})*", r.label);
            assert!(rs.reduce(&r.poly, 100_000).unwrap().is_zero(), "{}", r.label);
        }
    }
}
