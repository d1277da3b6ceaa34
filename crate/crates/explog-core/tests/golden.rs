use explog_core::compact::{parse_compact_term, print_raw, typecheck_compact};
use explog_core::enf::{check_enf_grammar, enf, enf_to_formula};
use explog_core::fixtures::{self, Fixture};
use explog_core::nbe::{ebn, nbe};
use explog_core::syntax::{parse_term, parse_type, print_term, print_type, typecheck_nd};

fn normal_forms(fx: &Fixture) -> Vec<String> {
    let f = parse_type(fx.ty).unwrap();
    fx.terms
        .iter()
        .map(|t| print_raw(&nbe(&parse_term(t).unwrap(), &f).unwrap()))
        .collect()
}

fn check(fx: &Fixture) {
    let f = parse_type(fx.ty).unwrap();
    let e = enf_to_formula(&enf(&f)).unwrap();
    assert_eq!(
        e,
        parse_type(fx.enf).unwrap(),
        "{}: normal form of the type",
        fx.name
    );
    assert!(check_enf_grammar(&e));
    for (i, got) in normal_forms(fx).iter().enumerate() {
        assert_eq!(got, fx.expected(i), "{}: term {i}", fx.name);
    }
}

#[test]
fn sum_argument() {
    check(&fixtures::SUM_ARGUMENT);
}

#[test]
fn nested_cases() {
    check(&fixtures::NESTED_CASES);
}

#[test]
fn case_app() {
    check(&fixtures::CASE_APP);
}

#[test]
fn case_case() {
    check(&fixtures::CASE_CASE);
}

#[test]
fn eta_arrow() {
    check(&fixtures::ETA_ARROW);
}

#[test]
fn eta_pair() {
    check(&fixtures::ETA_PAIR);
}

#[test]
fn eta_sum() {
    check(&fixtures::ETA_SUM);
}

#[test]
fn eta_case_lambda() {
    check(&fixtures::ETA_CASE_LAMBDA);
}

#[test]
fn eta_case_fst() {
    check(&fixtures::ETA_CASE_FST);
}

#[test]
fn eta_case_snd() {
    check(&fixtures::ETA_CASE_SND);
}

#[test]
fn duplicated_case() {
    check(&fixtures::DUPLICATED_CASE);
}

#[test]
fn swapped_cases_are_distinct() {
    let got = normal_forms(&fixtures::SWAPPED_CASES);
    assert_ne!(got[0], got[1]);
}

#[test]
fn printed_normal_forms_typecheck() {
    for fx in fixtures::ALL {
        let e = enf(&parse_type(fx.ty).unwrap());
        for p in fx.normal {
            typecheck_compact(&parse_compact_term(p).unwrap(), &e)
                .unwrap_or_else(|err| panic!("{}: {err}", fx.name));
        }
    }
}

#[test]
fn reverse_round_trip() {
    for fx in fixtures::ALL {
        let f = parse_type(fx.ty).unwrap();
        for p in fx.normal {
            let p = parse_compact_term(p).unwrap();
            let t = ebn(&p, &f).unwrap();
            typecheck_nd(&[], &t, &f).unwrap();
            assert_eq!(nbe(&t, &f).unwrap(), p, "{}", fx.name);
        }
    }
}

#[test]
fn reverse_of_sum_argument_is_the_case_form() {
    let fx = fixtures::SUM_ARGUMENT;
    let f = parse_type(fx.ty).unwrap();
    let t = ebn(&parse_compact_term(fx.normal[0]).unwrap(), &f).unwrap();
    assert_eq!(t, parse_term(fx.terms[1]).unwrap());
}

#[test]
fn worked_type_normalizations() {
    let (src, _) = fixtures::WORKED_ENF[1];
    let got = enf_to_formula(&enf(&parse_type(src).unwrap())).unwrap();
    assert_eq!(print_type(&got), fixtures::WORKED_ENF[1].1);
}

#[test]
fn swapped_cases_computed_forms() {
    // the second analysis is on `u v` (index 2) in the first term and on
    // `z v` (index 3) in the second
    let got = normal_forms(&fixtures::SWAPPED_CASES);
    assert_eq!(
        got[0],
        "<case 2 <app 0 <>> <inl2 <app 5 <>>, case 2 <app 1 <>> <inr2 <app 5 <>>, inl2 <app 6 <>>>>>"
    );
    assert_eq!(
        got[1],
        "<case 1 <app 0 <>> <case 3 <app 1 <>> <inl2 <app 6 <>>, inr2 <app 5 <>>>, inl2 <app 5 <>>>>"
    );
}

#[test]
fn swapped_cases_reference_forms_analyse_one_function_twice() {
    let f = parse_type(fixtures::SWAPPED_CASES.ty).unwrap();
    let back: Vec<String> = fixtures::SWAPPED_CASES
        .normal
        .iter()
        .map(|p| print_term(&ebn(&parse_compact_term(p).unwrap(), &f).unwrap()))
        .collect();
    assert_eq!(
        back[0],
        r"\x0 x1 x2 x3 x4. case x2 x4 of inl x5 => inl x0 | inr x5 => case x2 x4 of inl x6 => inr x1 | inr x6 => inl x0"
    );
    assert_eq!(
        back[1],
        r"\x0 x1 x2 x3 x4. case x3 x4 of inl x5 => case x3 x4 of inl x6 => inl x0 | inr x6 => inr x1 | inr x5 => inl x0"
    );
}

fn round_trip(term: &str, ty: &str) -> (String, String, String) {
    let f = parse_type(ty).unwrap();
    let p = nbe(&parse_term(term).unwrap(), &f).unwrap();
    let back = ebn(&p, &f).unwrap();
    typecheck_nd(&[], &back, &f).unwrap();
    let again = nbe(&back, &f).unwrap();
    (print_raw(&p), print_term(&back), print_raw(&again))
}

#[test]
fn case_inside_a_pair_is_read_back_once() {
    let (p, back, again) = round_trip(
        r"\x y z. <case z (fst y) of inl u => inr u | inr u => inl u, inl (fst y)>",
        "b*c+(a->c) -> c*(c+b) -> (c -> a+a) -> (a+a)*(c+c)",
    );
    assert!(back.contains("=> <inr x5, inl (fst x1)>"), "{back}");
    assert_eq!(again, p);
}

#[test]
fn projection_of_an_analysed_result_is_analysed_again() {
    // `x0 x1` has to be analysed to reach its first component; the reverse
    // term names it twice and nothing merges the two analyses
    let (p, back, again) = round_trip(
        r"\x y z. z (fst (x y))",
        "(b -> d*(a+d)) -> b -> (d->c) -> c",
    );
    assert_eq!(p, "<app 0 <case 2 <app 1 <>> <app 0 <>, app 0 <>>>>");
    assert_eq!(
        back,
        r"\x0 x1 x2. x2 (case snd (x0 x1) of inl x3 => fst (x0 x1) | inr x3 => fst (x0 x1))"
    );
    assert_eq!(
        again,
        "<app 0 <case 2 <app 1 <>> <case 4 <app 3 <>> <app 0 <>, app 0 <>>, \
         case 4 <app 3 <>> <app 0 <>, app 0 <>>>>>"
    );
}
