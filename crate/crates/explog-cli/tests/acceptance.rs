//! Acceptance runner: one PASS/FAIL line per criterion.
//!
//! Exits 0 so the workspace test run reports the lines without aborting;
//! set `ACCEPTANCE_STRICT=1` to exit 1 when any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use explog_core::compact::{parse_compact_term, print_raw, typecheck_compact};
use explog_core::enf::{
    check_enf_grammar, enf, enf_to_formula, eval_arith, ArithValue, Assignment,
};
use explog_core::fixtures::{self, Fixture};
use explog_core::gen::{random_closed_term, random_formula};
use explog_core::iso::{decide_iso, enf_ac_equal, IsoVerdict};
use explog_core::lambda::beta_successors;
use explog_core::nbe::{ebn, nbe, nbe_unchecked};
use explog_core::syntax::{parse_term, parse_type, print_type, typecheck_nd};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Report {
    passed: usize,
    total: usize,
}

impl Report {
    fn line(&mut self, n: usize, title: &str, ok: bool, detail: String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        }
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {verdict}  {title}: {detail}");
    }
}

fn explog(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_explog"))
        .args(args)
        .output()
        .expect("run explog");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).trim().to_string(),
    )
}

/// Normal forms of all terms of a fixture, and whether they match.
fn fixture_ok(fx: &Fixture, failures: &mut Vec<String>) -> bool {
    let f = parse_type(fx.ty).unwrap();
    let mut ok = true;
    for (i, t) in fx.terms.iter().enumerate() {
        let got = print_raw(&nbe(&parse_term(t).unwrap(), &f).unwrap());
        if got != fx.expected(i) {
            ok = false;
            failures.push(format!("{} term {}: got {got}", fx.name, i + 1));
        }
    }
    ok
}

fn enf_ok(fx: &Fixture, failures: &mut Vec<String>) -> bool {
    let got = enf_to_formula(&enf(&parse_type(fx.ty).unwrap())).unwrap();
    let ok = got == parse_type(fx.enf).unwrap();
    if !ok {
        failures.push(format!("{} type: got {got}", fx.name));
    }
    ok
}

fn summary(fs: &[String], pass: &str) -> String {
    if fs.is_empty() {
        pass.to_string()
    } else {
        fs.join("; ")
    }
}

fn c1(r: &mut Report) {
    let mut notes = Vec::new();
    let mut ok = true;
    for (i, (src, want)) in fixtures::WORKED_ENF.iter().enumerate() {
        let f = parse_type(src).unwrap();
        let start = Instant::now();
        let e = enf(&f);
        let took = start.elapsed();
        let got = print_type(&enf_to_formula(&e).unwrap());
        let exact = got == *want;
        let ac = enf_ac_equal(&e, &enf(&parse_type(want).unwrap()));
        let fast = took < Duration::from_millis(1);
        ok &= exact && fast;
        notes.push(format!(
            "form {}: {} ({:?}){}",
            i + 1,
            if exact { "exact" } else { "differs" },
            took,
            if exact {
                String::new()
            } else {
                format!(", got {got}, equal up to factor order: {ac}")
            }
        ));
    }
    r.line(1, "worked type normalizations", ok, notes.join("; "));
}

fn golden(r: &mut Report, n: usize, title: &str, fxs: &[Fixture], with_enf: bool) {
    let mut fails = Vec::new();
    let mut ok = true;
    for fx in fxs {
        ok &= fixture_ok(fx, &mut fails);
        if with_enf {
            ok &= enf_ok(fx, &mut fails);
        }
    }
    let terms: usize = fxs.iter().map(|f| f.terms.len()).sum();
    r.line(
        n,
        title,
        ok,
        summary(&fails, &format!("{terms} terms match")),
    );
}

fn c6(r: &mut Report) {
    let mut fails = Vec::new();
    let mut ok = true;
    for fx in [fixtures::DUPLICATED_CASE, fixtures::SWAPPED_CASES] {
        ok &= fixture_ok(&fx, &mut fails);
        let f = parse_type(fx.ty).unwrap();
        let a = nbe(&parse_term(fx.terms[0]).unwrap(), &f).unwrap();
        let b = nbe(&parse_term(fx.terms[1]).unwrap(), &f).unwrap();
        if a == b {
            ok = false;
            fails.push(format!("{}: forms coincide", fx.name));
        }
        let (code, _) = explog(&["equal", fx.terms[0], fx.terms[1], fx.ty]);
        if code != 2 {
            ok = false;
            fails.push(format!("{}: equal exited {code}", fx.name));
        }
        for p in fx.normal {
            if typecheck_compact(&parse_compact_term(p).unwrap(), &enf(&f)).is_err() {
                fails.push(format!("{}: reference form does not typecheck", fx.name));
            }
        }
    }
    r.line(
        6,
        "distinct normal forms of equal terms",
        ok,
        summary(&fails, "both pairs match, equal exits 2"),
    );
}

fn agree(f: &explog_core::Formula, g: &explog_core::Formula, a: &Assignment) -> Option<bool> {
    match (eval_arith(f, a).unwrap(), eval_arith(g, a).unwrap()) {
        (ArithValue::Value(x), ArithValue::Value(y)) => Some(x == y),
        _ => None,
    }
}

fn c7_c8(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let start = Instant::now();
    let (mut bad, mut compared, mut skipped, mut grammar_bad, mut idem_bad) = (0, 0, 0, 0, 0);
    let mut idem_time = Duration::ZERO;
    for _ in 0..1000 {
        let f = random_formula(&mut rng, 5, 6);
        let e = enf(&f);
        let g = enf_to_formula(&e).unwrap();
        for _ in 0..5 {
            let a: Assignment = f
                .atoms()
                .into_iter()
                .map(|p| (p, rng.gen_range(1..=3)))
                .collect();
            match agree(&f, &g, &a) {
                Some(true) => compared += 1,
                Some(false) => bad += 1,
                None => skipped += 1,
            }
        }
        let t = Instant::now();
        if !check_enf_grammar(&g) {
            grammar_bad += 1;
        }
        if enf(&g) != e {
            idem_bad += 1;
        }
        idem_time += t.elapsed();
    }
    let took = start.elapsed() - idem_time;
    r.line(
        7,
        "arithmetic preservation",
        bad == 0 && took < Duration::from_secs(10),
        format!("{compared} equal, {bad} differ, {skipped} overflow skipped, {took:?}"),
    );
    r.line(
        8,
        "grammar and idempotence",
        grammar_bad == 0 && idem_bad == 0,
        format!("{grammar_bad} outside the grammar, {idem_bad} not idempotent, of 1000"),
    );
}

fn c9(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let start = Instant::now();
    let mut fails = Vec::new();
    for _ in 0..200 {
        let (t, f) = random_closed_term(&mut rng, 4, 3, 80);
        let p = match nbe(&t, &f) {
            Ok(p) => p,
            Err(e) => {
                fails.push(format!("{t}: {e}"));
                continue;
            }
        };
        if typecheck_compact(&p, &enf(&f)).is_err() {
            fails.push(format!("{t}: normal form ill-typed"));
            continue;
        }
        match ebn(&p, &f) {
            Ok(back) if typecheck_nd(&[], &back, &f).is_ok() => {
                if nbe_unchecked(&back, &f) != p {
                    fails.push(format!("{t}: round trip differs"));
                }
            }
            _ => fails.push(format!("{t}: reverse ill-typed")),
        }
    }
    let took = start.elapsed();
    r.line(
        9,
        "typing preservation and round trip",
        fails.is_empty() && took < Duration::from_secs(30),
        format!(
            "{} of 200 failed, {took:?}{}",
            fails.len(),
            fails
                .first()
                .map(|f| format!("; first: {f}"))
                .unwrap_or_default()
        ),
    );
}

fn c10(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut terms, mut steps, mut bad) = (0, 0, 0);
    while terms < 200 {
        let (t, f) = random_closed_term(&mut rng, 4, 3, 80);
        let succ = beta_successors(&t);
        if succ.is_empty() {
            continue;
        }
        terms += 1;
        let p = nbe_unchecked(&t, &f);
        for s in succ {
            steps += 1;
            if typecheck_nd(&[], &s, &f).is_err() || nbe_unchecked(&s, &f) != p {
                bad += 1;
            }
        }
    }
    r.line(
        10,
        "beta soundness",
        bad == 0,
        format!("{steps} steps from {terms} terms, {bad} changed the normal form"),
    );
}

fn c11(r: &mut Report) {
    let t = |s: &str| parse_type(s).unwrap();
    let mut fails = Vec::new();
    for (a, b) in [("p->q->r", "p*q->r"), ("p+q", "q+p"), ("p*q", "q*p")] {
        match decide_iso(&t(a), &t(b), 32, 0) {
            IsoVerdict::Isomorphic(_) => {}
            v => fails.push(format!("{a} vs {b}: {v}")),
        }
        let (code, _) = explog(&["iso", a, b]);
        if code != 0 {
            fails.push(format!("iso {a} {b} exited {code}"));
        }
    }
    for (a, b) in [("p->p", "p"), ("p+q", "p*q")] {
        let v = decide_iso(&t(a), &t(b), 32, 0);
        if !v.verify_witness(&t(a), &t(b)) {
            fails.push(format!("{a} vs {b}: {v}"));
        }
        let (code, _) = explog(&["iso", a, b]);
        if code != 1 {
            fails.push(format!("iso {a} {b} exited {code}"));
        }
    }
    r.line(
        11,
        "isomorphism heuristic",
        fails.is_empty(),
        summary(
            &fails,
            "3 isomorphic, 2 refuted with checked witnesses, exit codes 0/1",
        ),
    );
}

fn main() {
    let worker = std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(|| {
            let mut r = Report {
                passed: 0,
                total: 0,
            };
            c1(&mut r);
            golden(&mut r, 2, "sum argument", &[fixtures::SUM_ARGUMENT], false);
            golden(&mut r, 3, "nested cases", &[fixtures::NESTED_CASES], false);
            golden(
                &mut r,
                4,
                "commuting conversions",
                &[fixtures::CASE_APP, fixtures::CASE_CASE],
                false,
            );
            golden(
                &mut r,
                5,
                "eta equations",
                &[
                    fixtures::ETA_ARROW,
                    fixtures::ETA_PAIR,
                    fixtures::ETA_SUM,
                    fixtures::ETA_CASE_LAMBDA,
                    fixtures::ETA_CASE_FST,
                    fixtures::ETA_CASE_SND,
                ],
                true,
            );
            c6(&mut r);
            c7_c8(&mut r);
            c9(&mut r);
            c10(&mut r);
            c11(&mut r);
            println!("{} of {} criteria passed", r.passed, r.total);
            r.passed == r.total
        })
        .expect("spawn");
    let all = worker.join().expect("acceptance runner panicked");
    if !all && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
