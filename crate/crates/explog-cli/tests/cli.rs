use std::process::Command;

use explog_core::fixtures;

fn explog(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_explog"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout)
            .unwrap()
            .trim_end()
            .to_string(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn enf_command() {
    let (code, out, _) = explog(&["enf", "(p+q) -> ((p+q)->r) -> r"]);
    assert_eq!(
        (code, out.as_str()),
        (0, "((p->r)*(q->r)*p -> r) * ((p->r)*(q->r)*q -> r)")
    );
    assert_eq!(explog(&["enf", "p"]).1, "p");
    let (code, _, err) = explog(&["enf", "p ->"]);
    assert_eq!(code, 3);
    assert!(err.contains("syntax error"));
}

#[test]
fn iso_command() {
    let (code, out, _) = explog(&["iso", "p->q->r", "p*q->r"]);
    assert_eq!((code, out.as_str()), (0, "isomorphic (enf-ac-equal)"));
    let (code, out, _) = explog(&["iso", "p->p", "p"]);
    assert_eq!((code, out.as_str()), (1, "not isomorphic: p=2 gives 4 ≠ 2"));
    assert_eq!(explog(&["iso", "p", "p"]).0, 0);
    assert_eq!(explog(&["iso", "p", "p", "--trials", "0"]).0, 3);
}

#[test]
fn iso_unknown_exits_two() {
    let mut tower = "p->p".to_string();
    for _ in 0..3 {
        tower = format!("({tower}) -> ({tower})");
    }
    let doubled = format!("({tower}) * ({tower})");
    let (code, out, _) = explog(&["iso", &tower, &doubled, "--seed", "3"]);
    assert_eq!((code, out.as_str()), (2, "unknown"));
}

#[test]
fn normalize_command() {
    let (code, out, _) = explog(&["normalize", r"\x.\y. y x", "(p+q)->((p+q)->r)->r"]);
    assert_eq!((code, out.as_str()), (0, "<x0 x2, x1 x2>"));
    assert_eq!(
        explog(&["normalize", r"\x. x", "(p->p)->(p->p)"]).1,
        "x1 x0"
    );
    let (code, _, err) = explog(&["normalize", r"\x. x", "p->q"]);
    assert_eq!(code, 3);
    assert!(err.contains("type mismatch"));
}

#[test]
fn raw_output_reparses() {
    for fx in fixtures::ALL {
        let (code, out, _) = explog(&["normalize", "--raw", fx.terms[0], fx.ty]);
        assert_eq!(code, 0);
        let p = explog_core::compact::parse_compact_term(&out).unwrap();
        assert_eq!(explog_core::compact::print_raw(&p), out);
    }
}

#[test]
fn equal_command() {
    let fx = fixtures::NESTED_CASES;
    let (code, out, _) = explog(&["equal", fx.terms[0], fx.terms[1], fx.ty]);
    assert_eq!((code, out.as_str()), (0, "equal"));
    let fx = fixtures::DUPLICATED_CASE;
    let (code, out, _) = explog(&["equal", fx.terms[0], fx.terms[1], fx.ty]);
    assert_eq!((code, out.as_str()), (2, "not proven equal"));
    assert_eq!(explog(&["equal", fx.terms[0], fx.terms[0], fx.ty]).0, 0);
}

#[test]
fn reverse_then_normalize() {
    let fx = fixtures::SUM_ARGUMENT;
    let (code, lam, _) = explog(&["reverse", fx.normal[0], fx.ty]);
    assert_eq!(code, 0);
    let (_, back, _) = explog(&["normalize", "--raw", &lam, fx.ty]);
    assert_eq!(back, fx.normal[0]);
    assert_eq!(explog(&["reverse", "<>", "p"]).0, 3);
}

#[test]
fn arguments_from_file() {
    let dir = std::env::temp_dir().join(format!("explog-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("input.txt");
    std::fs::write(&path, "\\x. x\n\n(p->p)->(p->p)\n").unwrap();
    let (code, out, _) = explog(&["normalize", "--file", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, "x1 x0"));
    let (code, _, err) = explog(&["normalize", "--file", dir.join("missing").to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("cannot read"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(explog(&["frobnicate"]).0, 3);
    assert_eq!(explog(&["normalize", r"\x. x"]).0, 3);
    assert_eq!(explog(&["--help"]).0, 0);
}
