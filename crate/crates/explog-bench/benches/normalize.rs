use criterion::{black_box, criterion_group, criterion_main, Criterion};

use explog_core::compact::parse_compact_term;
use explog_core::enf::enf;
use explog_core::fixtures;
use explog_core::iso::decide_iso;
use explog_core::nbe::{ebn_unchecked, nbe_unchecked};
use explog_core::syntax::{parse_term, parse_type};

fn types(c: &mut Criterion) {
    for (src, _) in fixtures::WORKED_ENF {
        let f = parse_type(src).unwrap();
        c.bench_function(&format!("enf {src}"), |b| b.iter(|| enf(black_box(&f))));
    }
    let (f, g) = (parse_type("p->p").unwrap(), parse_type("p").unwrap());
    c.bench_function("iso refute", |b| {
        b.iter(|| decide_iso(black_box(&f), &g, 32, 0))
    });
    let (f, g) = (
        parse_type("p->q->r").unwrap(),
        parse_type("p*q->r").unwrap(),
    );
    c.bench_function("iso prove", |b| {
        b.iter(|| decide_iso(black_box(&f), &g, 32, 0))
    });
}

fn terms(c: &mut Criterion) {
    for fx in fixtures::ALL {
        let f = parse_type(fx.ty).unwrap();
        let t = parse_term(fx.terms[fx.terms.len() - 1]).unwrap();
        c.bench_function(&format!("nbe {}", fx.name), |b| {
            b.iter(|| nbe_unchecked(black_box(&t), &f))
        });
        let p = parse_compact_term(fx.normal[0]).unwrap();
        c.bench_function(&format!("ebn {}", fx.name), |b| {
            b.iter(|| ebn_unchecked(black_box(&p), &f))
        });
    }
}

criterion_group!(benches, types, terms);
criterion_main!(benches);
