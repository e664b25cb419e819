//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use semiforge::builders::{
    build_chain, build_strong_semilattice, build_theta_product, cyclic_group, extract_theta_data,
    BuildError, ComponentSpec,
};
use semiforge::enumverify::{
    enumerate_semigroups, enumerate_with_cell_order, verify_note_after_theorem1, verify_theorem,
    CellOrder, EnumerationRequest, MismatchSide, Mode, TheoremId, VerificationReport,
};
use semiforge::identities::format_inclusion_class;
use semiforge::rees::{build_rees, coordinatize, ReesSpec};
use semiforge::semigroup::is_associative_light;
use semiforge::structure::idempotent_product_closed;
use semiforge::{is_member, parse_inclusion_class, predefined, FiniteSemigroup};

const MAX_ORDER: usize = 4;
const EXPECTED_SIZES: [usize; 4] = [1, 5, 24, 188];

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: String) -> Self {
        Outcome {
            pass,
            summary,
            details: Vec::new(),
        }
    }
}

fn universe(n: usize) -> Vec<FiniteSemigroup> {
    enumerate_semigroups(&EnumerationRequest::new(n, Mode::UpToIso)).expect("order in envelope")
}

fn sizes(r: &VerificationReport) -> Vec<usize> {
    r.per_order.iter().map(|t| t.total).collect()
}

fn mismatch_lines(r: &VerificationReport, side: Option<MismatchSide>) -> Vec<String> {
    r.per_order
        .iter()
        .flat_map(|t| t.mismatches.iter())
        .filter(|m| side.is_none_or(|s| m.side == s))
        .map(|m| format!("{:?} {:?} {}", m.side, m.table, m.detail.clone().unwrap_or_default()))
        .collect()
}

fn harness(id: TheoremId) -> (VerificationReport, Outcome, Duration) {
    let start = Instant::now();
    let r = verify_theorem(id, MAX_ORDER).expect("order in envelope");
    let elapsed = start.elapsed();
    let ok_sizes = sizes(&r) == EXPECTED_SIZES;
    let mut o = Outcome::new(
        ok_sizes && r.is_clean(),
        format!(
            "{} harness over orders 1-{MAX_ORDER}: universe {:?}, {} mismatches, {:.2?}",
            id.class_name(),
            sizes(&r),
            r.mismatch_count(),
            elapsed
        ),
    );
    o.details = mismatch_lines(&r, None);
    (r, o, elapsed)
}

fn criterion1() -> Outcome {
    let (_, mut o, elapsed) = harness(TheoremId::T5);
    o.pass &= elapsed <= Duration::from_secs(60);
    o
}

fn criterion2() -> Outcome {
    let (_, mut o, _) = harness(TheoremId::T1);
    let note = verify_note_after_theorem1(MAX_ORDER).expect("order in envelope");
    o.pass &= note.violation_count() == 0;
    o.summary
        .push_str(&format!("; note check: {} violations", note.violation_count()));
    for t in &note.per_order {
        for v in &t.violations {
            o.details.push(format!("note violation {v:?}"));
        }
    }
    o
}

fn criterion3() -> Outcome {
    harness(TheoremId::T4).1
}

fn criterion4() -> Outcome {
    let (_, c3, _) = harness(TheoremId::C3);
    let t2 = verify_theorem(TheoremId::T2, MAX_ORDER).expect("order in envelope");
    let forward = mismatch_lines(&t2, Some(MismatchSide::ClassOnly));
    let converse = mismatch_lines(&t2, Some(MismatchSide::ConverseRebuild));
    let rebuilt: usize = t2.per_order.iter().map(|t| t.rebuilt).sum();
    let mut o = Outcome::new(
        c3.pass && forward.is_empty() && converse.is_empty(),
        format!(
            "{}; THM2 forward: {} failures; THM2 converse: {} of {rebuilt} COR3 members not rebuilt",
            c3.summary,
            forward.len(),
            converse.len()
        ),
    );
    o.details = c3.details;
    o.details.extend(forward);
    o.details.extend(converse);
    o
}

fn criterion5() -> Outcome {
    let thm4 = predefined("THM4").expect("predefined");
    let thm5 = predefined("THM5").expect("predefined");
    let mut checked = 0;
    let mut exceptions = Vec::new();
    for n in 1..=MAX_ORDER {
        for s in universe(n) {
            if is_member(&s, &thm4) || is_member(&s, &thm5) {
                checked += 1;
                if !idempotent_product_closed(&s) {
                    exceptions.push(format!("{:?}", s.rows()));
                }
            }
        }
    }
    let mut o = Outcome::new(
        exceptions.is_empty(),
        format!("idempotent closure on {checked} THM4/THM5 members: {} exceptions", exceptions.len()),
    );
    o.details = exceptions;
    o
}

fn criterion6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let trials = 200;
    let mut failures = Vec::new();
    for _ in 0..trials {
        let g = rng.gen_range(1..=4);
        let (i_size, l_size) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let spec = ReesSpec {
            group: cyclic_group(g),
            i_size,
            l_size,
            sandwich: (0..l_size)
                .map(|_| (0..i_size).map(|_| rng.gen_range(0..g)).collect())
                .collect(),
        };
        let s = build_rees(&spec).expect("valid spec");
        let ok = match coordinatize(&s) {
            Ok(c) => build_rees(&c.spec).is_ok_and(|t| is_iso_map(&t, &s, c.iso.as_slice())),
            Err(_) => false,
        };
        if !ok {
            failures.push(format!("{spec:?}"));
        }
    }
    let mut o = Outcome::new(
        failures.is_empty(),
        format!(
            "Rees build/coordinatize/build round trip: {}/{trials} isomorphic",
            trials - failures.len()
        ),
    );
    o.details = failures;
    o
}

fn criterion7() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 1..=3 {
        for (mode, anti) in [(Mode::UpToIso, false), (Mode::UpToIsoAnti, true)] {
            let got: Vec<Rows> = enumerate_semigroups(&EnumerationRequest::new(n, mode))
                .expect("order in envelope")
                .iter()
                .map(FiniteSemigroup::rows)
                .collect();
            let oracle: Vec<Rows> = brute_force_classes(n, anti).into_iter().collect();
            pass &= got == oracle;
            parts.push(format!("n={n} {mode:?} {}/{}", got.len(), oracle.len()));
        }
    }
    let req = EnumerationRequest::new(4, Mode::UpToIso);
    let rows = enumerate_with_cell_order(&req, CellOrder::RowMajor).expect("order in envelope");
    let cols = enumerate_with_cell_order(&req, CellOrder::ColumnMajor).expect("order in envelope");
    pass &= rows == cols;
    parts.push(format!("n=4 row-major {} vs column-major {}", rows.len(), cols.len()));
    Outcome::new(pass, format!("enumeration vs brute force: {}", parts.join(", ")))
}

fn criterion8() -> Outcome {
    let mut total = 0;
    let mut disagreements = Vec::new();
    let mut check = |t: Rows| {
        total += 1;
        if is_associative_light(&t) != associative(&t) {
            disagreements.push(format!("{t:?}"));
        }
    };
    for n in 1..=3 {
        all_tables(n).for_each(&mut check);
    }
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        check((0..n).map(|_| (0..n).map(|_| rng.gen_range(0..n)).collect()).collect());
    }
    let mut o = Outcome::new(
        disagreements.is_empty(),
        format!("Light's test vs naive: {}/{total} agree", total - disagreements.len()),
    );
    o.details = disagreements;
    o
}

fn criterion9() -> Outcome {
    let mut exprs: Vec<_> = semiforge::identities::predefined_classes().into_values().collect();
    let mut rng = StdRng::seed_from_u64(9);
    exprs.extend((0..500).map(|_| random_expr(&mut rng)));
    let mut failures = Vec::new();
    for e in &exprs {
        let text = format_inclusion_class(e);
        if parse_inclusion_class(&text).as_ref() != Ok(e) {
            failures.push(text);
        }
    }
    let mut o = Outcome::new(
        failures.is_empty(),
        format!("parser round trip: {}/{} expressions", exprs.len() - failures.len(), exprs.len()),
    );
    o.details = failures;
    o
}

fn criterion10() -> Outcome {
    let thm1 = predefined("THM1").expect("predefined");
    let thm2 = predefined("THM2").expect("predefined");
    let cor3 = predefined("COR3").expect("predefined");
    let thm5 = predefined("THM5").expect("predefined");
    let mut failures = Vec::new();

    let grid = chain_grid(8);
    let mut chains = 0;
    for specs in &grid {
        let g2_below_top = specs[..specs.len() - 1].contains(&ComponentSpec::G2);
        match build_chain(specs) {
            Ok(s) if !g2_below_top && associative(&s.rows()) && naive_member(&s, &thm1) => chains += 1,
            Err(BuildError::NontrivialG2BelowTop { .. }) if g2_below_top => {}
            other => failures.push(format!("chain {specs:?}: {other:?}")),
        }
    }

    let strong = strong_grid();
    for data in &strong {
        match build_strong_semilattice(data) {
            Ok(s) if associative(&s.rows()) && naive_member(&s, &thm5) => {}
            other => failures.push(format!("strong semilattice {data:?}: {other:?}")),
        }
    }

    let (mut theta_outputs, mut theta_rejected) = (0, 0);
    for n in 1..=MAX_ORDER {
        for s in universe(n).into_iter().filter(|s| is_member(s, &cor3)) {
            let (data, map) = extract_theta_data(&s);
            match build_theta_product(&data) {
                Ok(t) => {
                    theta_outputs += 1;
                    if !(associative(&t.rows()) && naive_member(&t, &thm2) && t == s.relabel(&map)) {
                        failures.push(format!("theta product from {:?}", s.rows()));
                    }
                }
                Err(_) => theta_rejected += 1,
            }
        }
    }

    let mut o = Outcome::new(
        failures.is_empty(),
        format!(
            "builder outputs in promised classes: {chains} chains of {} specs (G2-below-top rejected), \
             {} strong semilattices, {theta_outputs} theta products ({theta_rejected} inputs rejected, see criterion 4); \
             {} failures",
            grid.len(),
            strong.len(),
            failures.len()
        ),
    );
    o.details = failures;
    o
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("THM5 harness", criterion1),
        ("THM1 harness and chain note", criterion2),
        ("THM4 harness", criterion3),
        ("COR3 harness, THM2 forward and converse", criterion4),
        ("idempotent closure", criterion5),
        ("Rees round trip", criterion6),
        ("enumeration counts", criterion7),
        ("Light's test", criterion8),
        ("parser round trip", criterion9),
        ("builder outputs", criterion10),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!(
            "{} criterion {:>2} ({name}): {}",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.summary
        );
        for d in o.details.iter().take(12) {
            println!("       {d}");
        }
        if o.details.len() > 12 {
            println!("       ... {} more", o.details.len() - 12);
        }
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
