use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncstar_core::ncalg::certificate::replay_tensor;
use ncstar_core::ncalg::{comultiplication, sphere_action, tuple_action, Side, Status, TensorHom, ZeroEvidence};
use ncstar_core::presentations::{
    enumerate_epsilons, enumerate_pairs, is_regular, orthogonal_qg_presentation, random_pair, sphere_presentation,
    tuple_space_presentation, unitary_qg_presentation, BinMatrix, CommutationPair, Presentation,
    DEFAULT_ENUMERATION_CAP,
};
use ncstar_core::verifier::{
    regularization_consistency, verify_comultiplication, verify_sphere_action, verify_tuple_action, VerificationReport,
    VerifyConfig,
};

/// Re-derives each tensor image and replays its certificate against the
/// closed relation lists in exact arithmetic.
fn replay_all(
    report: &VerificationReport,
    map: &TensorHom,
    source: &Presentation,
    left: &Presentation,
    right: &Presentation,
) {
    let mut relations = source.relations.clone();
    for r in source.expanded_sums() {
        if !relations.iter().any(|q| q.poly == r.poly) {
            relations.push(r);
        }
    }
    let (lrel, rrel) = (left.closed_relations(), right.closed_relations());
    let checked: Vec<_> = relations
        .iter()
        .filter(|r| report.checks.iter().any(|c| c.relation == format!("{}: {} = 0", r.label, r.poly)))
        .collect();
    assert_eq!(checked.len(), report.checks.len(), "{}", report.task);
    for r in checked {
        let check = report.checks.iter().find(|c| c.relation == format!("{}: {} = 0", r.label, r.poly)).unwrap();
        let Some(ZeroEvidence::Tensor { reductions }) = &check.certificate.zero_evidence else {
            panic!("{}: no tensor evidence", check.relation)
        };
        let t = map.apply(&r.poly).unwrap();
        assert!(replay_tensor(&t, reductions, &lrel, &rrel), "{}: {}", report.task, check.relation);
    }
}

#[test]
fn comultiplication_over_all_two_pairs_with_replay() {
    let pairs = enumerate_pairs(2, false, DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(pairs.len(), 16);
    for p in &pairs {
        let r = verify_comultiplication(p, VerifyConfig::default());
        assert!(r.passed(), "{p}");
        let pres = unitary_qg_presentation(p);
        replay_all(&r, &comultiplication(2), &pres, &pres, &pres);
    }
}

#[test]
fn sphere_actions_replay() {
    for p in enumerate_pairs(2, true, DEFAULT_ENUMERATION_CAP).unwrap() {
        for side in [Side::Left, Side::Right] {
            let r = verify_sphere_action(&p, side, VerifyConfig::default());
            assert!(r.passed(), "{p} {}", side.symbol());
            let sphere = sphere_presentation(&p);
            replay_all(&r, &sphere_action(2, side), &sphere, &unitary_qg_presentation(&p), &sphere);
        }
    }
}

#[test]
fn tuple_actions_replay() {
    for eps in enumerate_epsilons(2) {
        for side in [Side::Left, Side::Right] {
            let r = verify_tuple_action(&eps, side, VerifyConfig::default());
            assert!(r.passed(), "{eps} {}", side.symbol());
            let space = tuple_space_presentation(&eps);
            replay_all(&r, &tuple_action(2, side), &space, &orthogonal_qg_presentation(&eps), &space);
        }
    }
}

#[test]
fn classical_and_free_sphere_images() {
    let classical = verify_sphere_action(&CommutationPair::classical(2), Side::Left, VerifyConfig::default());
    assert_eq!(classical.checks.len(), 6);
    assert!(classical.passed());
    let free = verify_sphere_action(&CommutationPair::free(2), Side::Right, VerifyConfig::default());
    assert_eq!(free.checks.len(), 2);
    assert!(free.passed());
}

#[test]
fn non_regular_input_is_regularized_with_a_notice() {
    let p = CommutationPair::from_rows(&[&[0, 1], &[1, 0]], &[&[0, 1], &[1, 0]]);
    assert!(!is_regular(&p).is_regular);
    let r = verify_sphere_action(&p, Side::Left, VerifyConfig::default());
    assert!(r.passed());
    assert!(r.notices[0].contains("regularized"));
}

#[test]
fn fifty_random_four_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..50 {
        let p = random_pair(4, &mut rng);
        assert!(verify_comultiplication(&p, VerifyConfig::default()).passed(), "{p}");
    }
}

#[test]
fn regularization_consequences_up_to_two() {
    for n in 1..=2 {
        for p in
            enumerate_pairs(n, false, DEFAULT_ENUMERATION_CAP).unwrap().iter().filter(|p| !is_regular(p).is_regular)
        {
            let c = regularization_consistency(p, 4);
            assert_eq!(
                c.inconclusive,
                0,
                "{p}: {:?}",
                c.checks.iter().filter(|c| c.status != Status::ProvedZero).map(|c| &c.relation).collect::<Vec<_>>()
            );
        }
    }
}

#[test]
fn tuple_zero_cases_are_exercised() {
    let eps = BinMatrix::off_diagonal_ones(2);
    let r = verify_tuple_action(&eps, Side::Left, VerifyConfig::default());
    assert!(r.passed());
    assert!(
        r.checks.iter().any(|c| c.relation.contains("x11 x21")),
        "{:?}",
        r.checks.iter().map(|c| &c.relation).collect::<Vec<_>>()
    );
}
