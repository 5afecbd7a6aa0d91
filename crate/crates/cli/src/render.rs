//! Human-readable tables. JSON output does not go through here.

use std::fmt::Write as _;

use ncstar_core::ncalg::Status;
use ncstar_core::presentations::{CommutationPair, RegularityReport};
use ncstar_core::verifier::{ConsistencyReport, IndependenceReport, VerificationReport};

use crate::SweepTarget;

pub fn status(s: Status) -> &'static str {
    match s {
        Status::ProvedZero => "proved-zero",
        Status::ProvedNonzero => "proved-nonzero",
        Status::Inconclusive => "inconclusive",
    }
}

pub fn sweep_target(t: SweepTarget) -> &'static str {
    match t {
        SweepTarget::Hopf => "hopf",
        SweepTarget::SphereAction => "sphere-action",
        SweepTarget::TupleAction => "tuple-action",
    }
}

fn regularity(out: &mut String, label: &str, pair: &CommutationPair, r: &RegularityReport) {
    let _ = writeln!(out, "{label}: {pair}");
    let _ = writeln!(out, "  regular: {}", r.is_regular);
    for (i, j) in &r.violations_convention_a {
        let _ = writeln!(out, "  ε and η differ at ({i},{j}) next to a normal coordinate");
    }
    for i in &r.violations_convention_b {
        let _ = writeln!(out, "  x{i} is non-normal without a non-normal partner it fails to commute with");
    }
}

pub fn regularize(
    input: &CommutationPair,
    before: &RegularityReport,
    output: &CommutationPair,
    consistency: Option<&ConsistencyReport>,
) -> String {
    let mut out = String::new();
    regularity(&mut out, "input", input, before);
    if input == output {
        out.push_str("unchanged");
    } else {
        let _ = write!(out, "regularized: {output}");
    }
    if let Some(c) = consistency {
        let _ = write!(
            out,
            "\nconsequences at product bound {}: {} proved, {} inconclusive",
            c.product_bound, c.proved, c.inconclusive
        );
        for ch in c.checks.iter().filter(|ch| ch.status != Status::ProvedZero) {
            let _ = write!(out, "\n  inconclusive  {}", ch.relation);
        }
    }
    out
}

pub fn verification(r: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}  {}", r.task, r.pair);
    for n in &r.notices {
        let _ = writeln!(out, "  note: {n}");
    }
    for c in &r.checks {
        let mark = if c.met() { "ok  " } else { "FAIL" };
        let time = c.micros.map(|m| format!("  {m}µs")).unwrap_or_default();
        let _ = writeln!(out, "  {mark} {:<14} {}{time}", status(c.status), c.relation);
        if let Some(note) = &c.certificate.note {
            let _ = writeln!(out, "       {note}");
        }
        if let Some(ev) = &c.certificate.nonzero_evidence {
            let _ = writeln!(out, "       witness {}: image norm {}", ev.model, ev.image_norm);
        }
    }
    let _ = write!(out, "overall: {}", status(r.overall));
    out
}

pub fn independence(r: &IndependenceReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} in model {} ({:?}, max residual {:e})", r.suite, r.model, r.model_state, r.residual_max);
    let _ = writeln!(out, "  family: {{{}}}", r.family.join(", "));
    let sv: Vec<String> = r.singular_values.iter().map(|s| format!("{s:.6e}")).collect();
    let _ = writeln!(out, "  singular values: {}", sv.join(" "));
    if let Some(seed) = r.seed {
        let _ = writeln!(out, "  seed: {seed}");
    }
    let _ = write!(out, "  rank {}/{} at threshold {:e}", r.rank, r.expected_rank, r.threshold);
    out
}
