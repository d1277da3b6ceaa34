//! Reference inputs with known normal forms, shared by tests, benchmarks
//! and the acceptance runner.

/// A group of terms at one type together with their expected images.
#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub ty: &'static str,
    /// Expected normal form of `ty`, in the type syntax.
    pub enf: &'static str,
    pub terms: &'static [&'static str],
    /// Expected compact form of each term, raw syntax. A single entry
    /// applies to every term.
    pub normal: &'static [&'static str],
}

impl Fixture {
    pub fn expected(&self, i: usize) -> &'static str {
        if self.normal.len() == 1 {
            self.normal[0]
        } else {
            self.normal[i]
        }
    }
}

pub const SUM_ARGUMENT: Fixture = Fixture {
    name: "sum-argument",
    ty: "(p+q) -> ((p+q)->r) -> r",
    enf: "((p->r)*(q->r)*p -> r) * ((p->r)*(q->r)*q -> r)",
    terms: &[
        r"\x. \y. y (case x of inl z => inl z | inr z => inr z)",
        r"\x. \y. case x of inl z => y (inl z) | inr z => y (inr z)",
        r"\x. case x of inl z => (\y. y (inl z)) | inr z => (\y. y (inr z))",
        r"\x. \y. y x",
    ],
    normal: &["<app 0 <app 2 <>>, app 1 <app 2 <>>>"],
};

pub const NESTED_CASES: Fixture = Fixture {
    name: "nested-cases",
    ty: "(a->b) -> (c->a) -> c -> (d+e) -> b",
    enf: "(d*c*(c->a)*(a->b) -> b) * (e*c*(c->a)*(a->b) -> b)",
    terms: &[
        r"\x y z u. x (y z)",
        r"\x y z u. case u of inl x1 => x (y z) | inr x2 => x (y z)",
        r"\x y z u. case u of
            inl x1 => (case inl z of inl y1 => x (y y1) | inr y2 => x y2)
          | inr x2 => (case inr (y z) of inl y1 => x (y y1) | inr y2 => x y2)",
        r"\x y z u. case (case u of inl x1 => inl z | inr x2 => inr (y z)) of
            inl y1 => x (y y1) | inr y2 => x y2",
    ],
    normal: &["<app 3 <app 2 <app 1 <>>>, app 3 <app 2 <app 1 <>>>>"],
};

pub const CASE_APP: Fixture = Fixture {
    name: "case-app",
    ty: "s -> (p->s->r) -> (q->s->r) -> (p+q) -> r",
    enf: "(p*(s*q->r)*(s*p->r)*s -> r) * (q*(s*q->r)*(s*p->r)*s -> r)",
    terms: &[
        r"\x y z u. (case u of inl v1 => y v1 | inr v2 => z v2) x",
        r"\x y z u. case u of inl v1 => y v1 x | inr v2 => z v2 x",
    ],
    normal: &["<app 2 <app 3 <>, app 0 <>>, app 1 <app 3 <>, app 0 <>>>"],
};

pub const CASE_CASE: Fixture = Fixture {
    name: "case-case",
    ty: "(p+q) -> (p->r+s) -> (q->r+s) -> (r->a) -> (s->a) -> a",
    enf: "((s->a)*(r->a)*(q->r+s)*(p->r+s)*p -> a) * ((s->a)*(r->a)*(q->r+s)*(p->r+s)*q -> a)",
    terms: &[
        r"\x y z u v. case (case x of inl x1 => y x1 | inr x2 => z x2) of
            inl w1 => u w1 | inr w2 => v w2",
        r"\x y z u v. case x of
            inl x1 => (case y x1 of inl w1 => u w1 | inr w2 => v w2)
          | inr x2 => (case z x2 of inl w1 => u w1 | inr w2 => v w2)",
    ],
    normal: &["<case 3 <app 4 <>> <app 2 <app 0 <>>, app 1 <app 0 <>>>, \
               case 2 <app 4 <>> <app 2 <app 0 <>>, app 1 <app 0 <>>>>"],
};

pub const ETA_ARROW: Fixture = Fixture {
    name: "eta-arrow",
    ty: "(p->p) -> (p->p)",
    enf: "p*(p->p) -> p",
    terms: &[r"\x. x", r"\x y. x y"],
    normal: &["<app 1 <app 0 <>>>"],
};

pub const ETA_PAIR: Fixture = Fixture {
    name: "eta-pair",
    ty: "(p*q) -> (p*q)",
    enf: "(p*q -> p) * (p*q -> q)",
    terms: &[r"\x. x", r"\x. <fst x, snd x>"],
    normal: &["<app 0 <>, app 1 <>>"],
};

pub const ETA_SUM: Fixture = Fixture {
    name: "eta-sum",
    ty: "((p+q)->r) -> ((p+q)->r)",
    enf: "(p*(p->r)*(q->r) -> r) * (q*(p->r)*(q->r) -> r)",
    terms: &[
        r"\x y. x y",
        r"\x y. case y of inl x1 => x (inl x1) | inr x2 => x (inr x2)",
    ],
    normal: &["<app 1 <app 0 <>>, app 2 <app 0 <>>>"],
};

pub const ETA_CASE_LAMBDA: Fixture = Fixture {
    name: "eta-case-lambda",
    ty: "(p->s) -> (q->s) -> (p+q) -> r -> s",
    enf: "(r*p*(q->s)*(p->s) -> s) * (r*q*(q->s)*(p->s) -> s)",
    terms: &[
        r"\x y z. case z of inl z1 => (\u. x z1) | inr z2 => (\u. y z2)",
        r"\x y z u. case z of inl z1 => x z1 | inr z2 => y z2",
    ],
    normal: &["<app 3 <app 1 <>>, app 2 <app 1 <>>>"],
};

pub const ETA_CASE_FST: Fixture = Fixture {
    name: "eta-case-fst",
    ty: "(p->s*r) -> (q->s*r) -> (p+q) -> s",
    enf: "(p*(q->s)*(q->r)*(p->s)*(p->r) -> s) * (q*(q->s)*(q->r)*(p->s)*(p->r) -> s)",
    terms: &[
        r"\x y z. fst (case z of inl z1 => x z1 | inr z2 => y z2)",
        r"\x y z. case z of inl z1 => fst (x z1) | inr z2 => fst (y z2)",
    ],
    normal: &["<app 3 <app 0 <>>, app 1 <app 0 <>>>"],
};

pub const ETA_CASE_SND: Fixture = Fixture {
    name: "eta-case-snd",
    ty: "(p->s*r) -> (q->s*r) -> (p+q) -> r",
    enf: "(p*(q->s)*(q->r)*(p->s)*(p->r) -> r) * (q*(q->s)*(q->r)*(p->s)*(p->r) -> r)",
    terms: &[
        r"\x y z. snd (case z of inl z1 => x z1 | inr z2 => y z2)",
        r"\x y z. case z of inl z1 => snd (x z1) | inr z2 => snd (y z2)",
    ],
    normal: &["<app 4 <app 0 <>>, app 2 <app 0 <>>>"],
};

/// Equal terms with distinct normal forms: a duplicated scrutinee.
pub const DUPLICATED_CASE: Fixture = Fixture {
    name: "duplicated-case",
    ty: "(f->g) -> (h->g) -> i -> (i->f+h) -> g",
    enf: "(i->f+h)*i*(h->g)*(f->g) -> g",
    terms: &[
        r"\x y z u. case u z of inl w => x w | inr w => y w",
        r"\x y z u. case u z of
            inl w => (case u z of inl w2 => x w2 | inr w2 => y w2)
          | inr w => y w",
    ],
    normal: &[
        "<case 0 <app 1 <>> <app 4 <app 0 <>>, app 3 <app 0 <>>>>",
        "<case 0 <app 1 <>> <case 1 <app 2 <>> <app 5 <app 0 <>>, app 4 <app 0 <>>>, \
         app 3 <app 0 <>>>>",
    ],
};

/// Equal terms with distinct normal forms: case analyses in swapped order.
pub const SWAPPED_CASES: Fixture = Fixture {
    name: "swapped-cases",
    ty: "k -> l -> (f->g+h) -> (f->i+j) -> f -> k+l",
    enf: "f*(f->i+j)*(f->g+h)*l*k -> k+l",
    terms: &[
        r"\x y z u v. case z v of
            inl x1 => inl x
          | inr x2 => (case u v of inl y1 => inr y | inr y2 => inl x)",
        r"\x y z u v. case u v of
            inl y1 => (case z v of inl x1 => inl x | inr x2 => inr y)
          | inr y2 => inl x",
    ],
    normal: &[
        "<case 2 <app 0 <>> <inl2 <app 5 <>>, case 3 <app 1 <>> <inr2 <app 5 <>>, inl2 <app 6 <>>>>>",
        "<case 1 <app 0 <>> <case 2 <app 1 <>> <inl2 <app 6 <>>, inr2 <app 5 <>>>, inl2 <app 5 <>>>>",
    ],
};

pub const ALL: &[Fixture] = &[
    SUM_ARGUMENT,
    NESTED_CASES,
    CASE_APP,
    CASE_CASE,
    ETA_ARROW,
    ETA_PAIR,
    ETA_SUM,
    ETA_CASE_LAMBDA,
    ETA_CASE_FST,
    ETA_CASE_SND,
    DUPLICATED_CASE,
    SWAPPED_CASES,
];

/// Type normalizations computed by hand, as (input, expected normal form).
/// The first expected form lists the factors in a different order than
/// the normalizer produces; see [`SUM_ARGUMENT`] for the normalizer's order.
pub const WORKED_ENF: &[(&str, &str)] = &[
    (
        "t+s -> (t+s -> r) -> r",
        "(t*(t->r)*(s->r) -> r) * (s*(t->r)*(s->r) -> r)",
    ),
    (
        "(t1->t2) -> (t3->t1) -> t3 -> t4+t5 -> t2",
        "(t4*t3*(t3->t1)*(t1->t2) -> t2) * (t5*t3*(t3->t1)*(t1->t2) -> t2)",
    ),
];
