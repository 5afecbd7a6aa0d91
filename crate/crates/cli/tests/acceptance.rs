//! One PASS/FAIL line per acceptance criterion. Runs the release-style
//! binary for everything observable from the CLI and the library for the
//! oracle and regularization properties.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use ncstar_core::ncalg::{build_rewrite_system, ideal_membership_bounded, Poly};
use ncstar_core::presentations::{
    enumerate_epsilons, enumerate_pairs, is_regular, orthogonal_qg_presentation, random_pair, regularize,
    sphere_presentation, tuple_space_presentation, unitary_qg_presentation, CommutationPair, Presentation,
    DEFAULT_ENUMERATION_CAP,
};
use ncstar_core::repmodels::{operator_norm, remark_matrices, remark_model, CMatrix, ModelState};

const SVD_THRESHOLD: &str = "1e-6";
const HALF_TOL: f64 = 1e-12;
const ANOMALY_TOL: f64 = 1e-12;
const ZERO_EVAL_TOL: f64 = 1e-9;
const N2_BUDGET: Duration = Duration::from_secs(60);
const N3_BUDGET: Duration = Duration::from_secs(30 * 60);

fn ncstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncstar")).args(args).env_remove("NCSTAR_JOBS").output().expect("binary runs")
}

fn json(o: &Output) -> Result<Value, String> {
    serde_json::from_slice(&o.stdout).map_err(|e| format!("bad json: {e}"))
}

struct Sweep {
    n: usize,
    elapsed: Duration,
    bytes: Vec<u8>,
    report: Value,
}

impl Sweep {
    fn run(n: usize) -> Result<Self, String> {
        let n_arg = n.to_string();
        let start = Instant::now();
        let o = ncstar(&["sweep", "--n", &n_arg, "--format", "json"]);
        let elapsed = start.elapsed();
        if o.status.code() != Some(0) {
            return Err(format!("sweep n={n} exited {:?}", o.status.code()));
        }
        let report = json(&o)?["report"].clone();
        Ok(Sweep { n, elapsed, bytes: o.stdout, report })
    }

    /// (runs, passed) for one target.
    fn tally(&self, target: &str) -> (usize, usize) {
        let entries = self.report["entries"].as_array().map(Vec::as_slice).unwrap_or(&[]);
        let of_target: Vec<_> = entries.iter().filter(|e| e["target"] == target).collect();
        (of_target.len(), of_target.iter().filter(|e| e["passed"] == true).count())
    }
}

type Verdict = Result<String, String>;

fn ensure(cond: bool, detail: String) -> Verdict {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sweeps_for(sweeps: &[Sweep], target: &str, expected: impl Fn(usize) -> usize) -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for s in sweeps {
        let (runs, passed) = s.tally(target);
        let want = expected(s.n);
        ok &= runs == want && passed == runs;
        parts.push(format!("n={}: {passed}/{runs} of {want}", s.n));
    }
    ensure(ok, parts.join(", "))
}

fn criterion_1(sweeps: &[Sweep]) -> Verdict {
    let hopf = sweeps_for(&sweeps[1..], "hopf", |n| 1 << (n * n))?;
    let (t2, t3) = (sweeps[1].elapsed, sweeps[2].elapsed);
    ensure(
        t2 < N2_BUDGET && t3 < N3_BUDGET,
        format!("{hopf}; whole sweeps took {:.1}s (n=2), {:.1}s (n=3)", t2.as_secs_f64(), t3.as_secs_f64()),
    )
}

fn regular_count(n: usize) -> usize {
    enumerate_pairs(n, true, DEFAULT_ENUMERATION_CAP).unwrap().len()
}

fn criterion_2(sweeps: &[Sweep]) -> Verdict {
    sweeps_for(sweeps, "sphere-action", |n| 2 * regular_count(n))
}

fn criterion_3(sweeps: &[Sweep]) -> Verdict {
    sweeps_for(sweeps, "tuple-action", |n| 2 << (n * (n - 1) / 2))
}

fn criterion_4() -> Verdict {
    let o = ncstar(&["verify", "noninjectivity", "--format", "json"]);
    let code = o.status.code();
    let v = json(&o)?;
    let report = &v["report"][0];
    let checks = report["checks"].as_array().cloned().unwrap_or_default();
    let coefficient_two = checks.iter().any(|c| {
        c["relation"].as_str().is_some_and(|r| r.starts_with("X12"))
            && c["status"] == "proved-zero"
            && c["certificate"]["zero_evidence"]["steps"]
                .as_array()
                .is_some_and(|s| s.iter().any(|st| st["normalized"].as_str().is_some_and(|t| t.starts_with("2 "))))
    });
    let cited = checks.iter().any(|c| c["certificate"]["note"].as_str().is_some_and(|n| n.contains("2 u11 u21*")));
    let image_norm =
        checks.iter().find_map(|c| c["certificate"]["nonzero_evidence"]["image_norm"].as_f64()).unwrap_or(f64::NAN);
    // Independently of the verifier: x1 -> a, x2 -> b*, so x1 x2* -> a b.
    let (a, b) = remark_matrices();
    let mut target = CMatrix::zeros(4, 4);
    target[(3, 3)] = Complex64::new(0.5, 0.0);
    let entry_err = (a * b - target).iter().map(|z| z.norm()).fold(0.0, f64::max);
    ensure(
        code == Some(0)
            && report["overall"] == "proved-zero"
            && coefficient_two
            && cited
            && (image_norm - 0.5).abs() <= HALF_TOL
            && entry_err <= HALF_TOL,
        format!(
            "exit {code:?}, coefficient 2 {coefficient_two}, cites 2 u11 u21* {cited}, |image| = {image_norm}, \
             max |ab - diag(0,0,0,1/2)| = {entry_err:e}"
        ),
    )
}

fn criterion_5() -> Verdict {
    let suites: [(&str, &[&str], u64); 5] = [
        ("remark-products", &[], 4),
        ("remark-unit", &[], 3),
        ("torus", &[], 2),
        ("free-unitary", &["--dim", "4"], 4),
        ("o2plus", &[], 2),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (suite, extra, want) in suites {
        let mut args = vec!["witness", suite, "--format", "json", "--svd-threshold", SVD_THRESHOLD];
        args.extend_from_slice(extra);
        let o = ncstar(&args);
        let r = json(&o)?["report"].clone();
        let rank = r["rank"].as_u64().unwrap_or(0);
        ok &= o.status.code() == Some(0) && rank == want && r["expected_rank"] == want;
        if suite == "o2plus" {
            ok &= r["residual_max"].as_f64() == Some(0.0);
            parts.push(format!("{suite} {rank}/{want} residual {}", r["residual_max"]));
        } else {
            parts.push(format!("{suite} {rank}/{want}"));
        }
    }
    ensure(ok, parts.join(", "))
}

fn criterion_6() -> Verdict {
    let m = remark_model();
    let residuals = m.residuals();
    let sum =
        residuals.per_relation.iter().find(|r| r.relation.contains("x_i* x_i")).map(|r| r.residual).unwrap_or(f64::NAN);
    let o = ncstar(&["witness", "remark-products", "--format", "json"]);
    let reported = json(&o)?["report"]["model_state"].clone();
    ensure(
        (sum - 1.0).abs() <= ANOMALY_TOL && m.state() == ModelState::Probe && reported == "probe",
        format!("residual {sum}, state {:?}, reported as {reported}", m.state()),
    )
}

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

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut total, mut zero, mut disagree, mut leaks) = (0, 0, 0, 0);
    for pres in n2_presentations() {
        let rs = build_rewrite_system(&pres);
        let closed = pres.closed_relations();
        let roster = pres.roster();
        let models = common::valid_models(&pres);
        for _ in 0..40 {
            let mut p = common::random_poly(&roster, 2, rng.random_range(1..=3), &mut rng);
            if rng.random_bool(0.5) {
                p = Poly::zero();
                for _ in 0..rng.random_range(1..=3) {
                    p.add_scaled(&closed[rng.random_range(0..closed.len())].poly, &common::small_scalar(&mut rng));
                }
            }
            let by_rewrite = rs.reduce(&p, 100_000).map(|q| q.is_zero()).unwrap_or(false);
            let by_span = ideal_membership_bounded(&p, &pres, 2).map(|c| c.zero_evidence.is_some()).unwrap_or(false);
            total += 1;
            disagree += usize::from(by_rewrite != by_span);
            if by_rewrite || by_span {
                zero += 1;
                for m in &models {
                    let ev = m.evaluate(&p).map(|e| operator_norm(&e)).unwrap_or(f64::INFINITY);
                    leaks += usize::from(ev >= ZERO_EVAL_TOL);
                }
            }
        }
    }
    ensure(
        total >= 1000 && disagree == 0 && leaks == 0 && zero > 0,
        format!("{total} polynomials, {zero} proved zero, {disagree} disagreements, {leaks} nonzero evaluations"),
    )
}

fn regularize_holds(p: &CommutationPair) -> bool {
    let r = regularize(p);
    regularize(&r) == r && is_regular(&r).is_regular && p.epsilon.le(&r.epsilon) && p.eta.le(&r.eta)
}

fn criterion_8() -> Verdict {
    let mut exhaustive = 0;
    let mut bad = 0;
    for n in 1..=3 {
        for p in enumerate_pairs(n, false, DEFAULT_ENUMERATION_CAP).unwrap() {
            exhaustive += 1;
            bad += usize::from(!regularize_holds(&p));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        bad += usize::from(!regularize_holds(&random_pair(4, &mut rng)));
    }
    ensure(bad == 0, format!("{exhaustive} exhaustive pairs (n<=3) + 500 random n=4, {bad} violations"))
}

fn criterion_9(first: &[Sweep]) -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for s in first {
        let again = Sweep::run(s.n)?;
        let same = again.bytes == s.bytes;
        ok &= same;
        parts.push(format!("n={}: {} bytes {}", s.n, s.bytes.len(), if same { "identical" } else { "DIFFER" }));
    }
    ensure(ok, parts.join(", "))
}

fn main() -> ExitCode {
    let sweeps: Result<Vec<Sweep>, String> = (1..=3).map(Sweep::run).collect();
    let results: Vec<(&str, Verdict)> = match &sweeps {
        Ok(s) => vec![
            ("hopf replay, all pairs n=2 and n=3", criterion_1(s)),
            ("sphere action, regular pairs n<=3, both sides", criterion_2(s)),
            ("tuple action, all epsilon n<=3, both sides", criterion_3(s)),
            ("noninjectivity anchor", criterion_4()),
            ("witness suite ranks at threshold 1e-6", criterion_5()),
            ("anomaly residual 1 +- 1e-12 as probe", criterion_6()),
            ("rewrite vs linear span oracle, n=2", criterion_7()),
            ("regularize properties", criterion_8()),
            ("sweep JSON determinism", criterion_9(s)),
        ],
        Err(e) => vec![("sweeps", Err(e.clone()))],
    };
    let mut failed = 0;
    for (i, (name, verdict)) in results.iter().enumerate() {
        let (tag, detail) = match verdict {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {}: {tag} {name} ({detail})", i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
