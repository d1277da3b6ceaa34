//! Normalization by evaluation between lambda terms and compact terms.
//!
//! Semantic values live in a continuation monad over worlds. A world is a
//! context size: the number of entries of an ND context, or the number of
//! factors of a compact context. Worlds only grow by adding entries at the
//! front, so a variable is identified by its level (its distance from the
//! back) and its index at world `w` is `w - 1 - level`.
//!
//! Two instantiations are used: compact terms as answers (for [`nbe`]) and
//! ND terms as answers (for [`ebn`]). Between evaluation and reification,
//! [`f2f`] and [`f2f_inv`] transport values across the isomorphism between
//! a type and its exp-log normal form.

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::compact::{typecheck_compact, BaseTerm, CompactTerm, CompactTypeError, ProductTerm};
use crate::enf::{distrib, enf, enf2cnf, explog0, explogn, nplus, Base, Cnf, Dnf, Enf};
use crate::lambda::shift;
use crate::syntax::{typecheck_nd, Formula, NdTerm, TypeError};

pub type World = usize;

/// Syntax that can be carried by a semantic atom.
pub trait Syntax: Clone + 'static {
    /// The same term in a context extended by `k` entries at the front.
    fn weaken(&self, k: usize) -> Self;
}

impl Syntax for NdTerm {
    fn weaken(&self, k: usize) -> Self {
        shift(self, 0, k)
    }
}

impl Syntax for BaseTerm {
    fn weaken(&self, k: usize) -> Self {
        let mut t = self.clone();
        for _ in 0..k {
            t = BaseTerm::WknC(Box::new(t));
        }
        t
    }
}

pub type Kont<A> = Rc<dyn Fn(World, Sem<A>) -> A>;

/// A Kripke function: usable at any world at least as large as the one it
/// was built at.
pub type Kfn<A> = Rc<dyn Fn(World, Mon<A>) -> Mon<A>>;

/// A monadic value: run at a world with a continuation, it produces an
/// answer at that world.
pub struct Mon<A>(Rc<dyn Fn(World, Kont<A>) -> A>);

impl<A> Clone for Mon<A> {
    fn clone(&self) -> Self {
        Mon(self.0.clone())
    }
}

/// Semantic values. Which variant is valid is determined by the type index
/// the value is used at.
pub enum Sem<A> {
    /// Syntax at an atomic type, built at the given world.
    Atom(A, World),
    /// The empty product.
    Unit,
    /// A factor `c -> b` of a product, and the remaining factors.
    Con(Kfn<A>, Mon<A>),
    Pair(Mon<A>, Mon<A>),
    Fun(Kfn<A>),
    Inl(Mon<A>),
    Inr(Mon<A>),
}

impl<A: Clone> Clone for Sem<A> {
    fn clone(&self) -> Self {
        match self {
            Sem::Atom(a, w) => Sem::Atom(a.clone(), *w),
            Sem::Unit => Sem::Unit,
            Sem::Con(f, m) => Sem::Con(f.clone(), m.clone()),
            Sem::Pair(a, b) => Sem::Pair(a.clone(), b.clone()),
            Sem::Fun(f) => Sem::Fun(f.clone()),
            Sem::Inl(m) => Sem::Inl(m.clone()),
            Sem::Inr(m) => Sem::Inr(m.clone()),
        }
    }
}

impl<A> Sem<A> {
    fn tag(&self) -> &'static str {
        match self {
            Sem::Atom(..) => "atom",
            Sem::Unit => "unit",
            Sem::Con(..) => "factor",
            Sem::Pair(..) => "pair",
            Sem::Fun(..) => "function",
            Sem::Inl(..) => "inl",
            Sem::Inr(..) => "inr",
        }
    }
}

impl<A> fmt::Debug for Sem<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

fn shape<A, T>(want: &str, got: &Sem<A>) -> T {
    panic!(
        "internal invariant violated: expected a {want} value, found {}",
        got.tag()
    )
}

impl<A: Syntax> Mon<A> {
    pub fn new(f: impl Fn(World, Kont<A>) -> A + 'static) -> Mon<A> {
        Mon(Rc::new(f))
    }

    pub fn run(&self, w: World, k: Kont<A>) -> A {
        (self.0)(w, k)
    }

    pub fn ret(v: Sem<A>) -> Mon<A> {
        Mon::new(move |w, k| k(w, v.clone()))
    }

    pub fn bind(&self, f: impl Fn(World, Sem<A>) -> Mon<A> + 'static) -> Mon<A> {
        let m = self.clone();
        let f = Rc::new(f);
        Mon::new(move |w, k| {
            let f = f.clone();
            m.run(w, Rc::new(move |w2, v| f(w2, v).run(w2, k.clone())))
        })
    }
}

fn kont<A>(f: impl Fn(World, Sem<A>) -> A + 'static) -> Kont<A> {
    Rc::new(f)
}

fn kfn<A>(f: impl Fn(World, Mon<A>) -> Mon<A> + 'static) -> Kfn<A> {
    Rc::new(f)
}

/// Applies a Kripke function at whatever world the result is run at.
fn apply<A: Syntax>(f: Kfn<A>, a: Mon<A>) -> Mon<A> {
    Mon::new(move |w, k| f(w, a.clone()).run(w, k))
}

// ---------------------------------------------------------------------------
// Tuples

/// The first factor of a tuple, as a function.
fn head_fn<A: Syntax>(m: Mon<A>) -> Kfn<A> {
    kfn(move |_w, a| {
        m.bind(move |w2, v| match v {
            Sem::Con(f, _) => f(w2, a.clone()),
            other => shape("factor", &other),
        })
    })
}

fn tail<A: Syntax>(m: &Mon<A>) -> Mon<A> {
    m.bind(|_, v| match v {
        Sem::Con(_, rest) => rest,
        other => shape("factor", &other),
    })
}

fn drop_n<A: Syntax>(n: usize, m: &Mon<A>) -> Mon<A> {
    let mut m = m.clone();
    for _ in 0..n {
        m = tail(&m);
    }
    m
}

fn nth_fn<A: Syntax>(n: usize, m: &Mon<A>) -> Kfn<A> {
    head_fn(drop_n(n, m))
}

fn tuple<A: Syntax>(fs: Vec<Kfn<A>>) -> Mon<A> {
    let mut acc = Mon::ret(Sem::Unit);
    for f in fs.into_iter().rev() {
        acc = Mon::ret(Sem::Con(f, acc));
    }
    acc
}

/// The concatenation of a tuple for `c1` and another tuple.
fn sem_ntimes<A: Syntax>(c1: &Cnf, m1: Mon<A>, m2: Mon<A>) -> Mon<A> {
    match c1 {
        Cnf::Top => m2,
        Cnf::Con(_, _, rest) => {
            let t = tail(&m1);
            Mon::ret(Sem::Con(head_fn(m1), sem_ntimes(rest, t, m2)))
        }
    }
}

/// The first `|c1|` factors of a tuple.
fn prefix<A: Syntax>(c1: &Cnf, m: &Mon<A>) -> Mon<A> {
    match c1 {
        Cnf::Top => Mon::ret(Sem::Unit),
        Cnf::Con(_, _, rest) => Mon::ret(Sem::Con(head_fn(m.clone()), prefix(rest, &tail(m)))),
    }
}

// ---------------------------------------------------------------------------
// Sums

/// The value of summand `i` of `d`.
fn inject<A: Syntax>(d: &Dnf, i: usize, x: Mon<A>) -> Sem<A> {
    match (d, i) {
        (Dnf::Two(..), 0) | (Dnf::Dis(..), 0) => Sem::Inl(x),
        (Dnf::Two(..), 1) => Sem::Inr(x),
        (Dnf::Dis(_, d0), i) => Sem::Inr(Mon::ret(inject(d0, i - 1, x))),
        (Dnf::Two(..), _) => panic!("internal invariant violated: summand {i} of a binary sum"),
    }
}

/// Injects a value of the sum formed by the summands from position `n` on.
fn inject_suffix<A: Syntax>(d: &Dnf, n: usize, x: Mon<A>) -> Sem<A> {
    if n == 1 {
        return Sem::Inr(x);
    }
    match d {
        Dnf::Dis(_, d0) => Sem::Inr(Mon::ret(inject_suffix(d0, n - 1, x))),
        Dnf::Two(..) => panic!("internal invariant violated: suffix past a binary sum"),
    }
}

/// The value at `e` made from summand `i`.
fn inject_enf<A: Syntax>(e: &Enf, i: usize, x: Mon<A>) -> Mon<A> {
    match e {
        Enf::CnfE(_) => x,
        Enf::DnfE(d) => Mon::ret(inject(d, i, x)),
    }
}

type Branch<A> = Rc<dyn Fn(World, usize, Mon<A>) -> Mon<A>>;

/// Runs `m`, a value of `d`, and continues with the summand index and the
/// tuple it carries.
fn case_dnf<A: Syntax>(d: &Dnf, m: &Mon<A>, f: Branch<A>) -> Mon<A> {
    let d = d.clone();
    m.bind(move |w, v| match (&d, v) {
        (_, Sem::Inl(x)) => f(w, 0, x),
        (Dnf::Two(..), Sem::Inr(x)) => f(w, 1, x),
        (Dnf::Dis(_, d0), Sem::Inr(y)) => {
            let f = f.clone();
            case_dnf(d0, &y, Rc::new(move |w, i, x| f(w, i + 1, x)))
        }
        (_, other) => shape("sum", &other),
    })
}

fn case_enf<A: Syntax>(e: &Enf, m: &Mon<A>, f: Branch<A>) -> Mon<A> {
    match e {
        Enf::CnfE(_) => {
            let m = m.clone();
            Mon::new(move |w, k| f(w, 0, m.clone()).run(w, k))
        }
        Enf::DnfE(d) => case_dnf(d, m, f),
    }
}

fn to_cnf<A: Syntax>(e: &Enf, x: Mon<A>) -> Mon<A> {
    match e {
        Enf::CnfE(_) => x,
        Enf::DnfE(_) => Mon::ret(Sem::Con(kfn(move |_, _| x.clone()), Mon::ret(Sem::Unit))),
    }
}

fn from_cnf<A: Syntax>(e: &Enf, x: Mon<A>) -> Mon<A> {
    match e {
        Enf::CnfE(_) => x,
        Enf::DnfE(_) => apply(head_fn(x), Mon::ret(Sem::Unit)),
    }
}

fn as_dnf(e: Enf) -> Dnf {
    match e {
        Enf::DnfE(d) => d,
        Enf::CnfE(_) => panic!("internal invariant violated: expected a sum type"),
    }
}

fn fst<A: Syntax>(m: &Mon<A>) -> Mon<A> {
    m.bind(|_, v| match v {
        Sem::Pair(a, _) => a,
        other => shape("pair", &other),
    })
}

fn snd<A: Syntax>(m: &Mon<A>) -> Mon<A> {
    m.bind(|_, v| match v {
        Sem::Pair(_, b) => b,
        other => shape("pair", &other),
    })
}

/// Runs the function and applies it to the unevaluated argument.
fn call<A: Syntax>(m: &Mon<A>, arg: Mon<A>) -> Mon<A> {
    m.bind(move |w, v| match v {
        Sem::Fun(f) => f(w, arg.clone()),
        other => shape("function", &other),
    })
}

// ---------------------------------------------------------------------------
// Transport between a type and its normal form

/// Maps a value of `f` to a value of `enf(f)`.
pub fn f2f<A: Syntax>(f: &Formula, m: Mon<A>) -> Mon<A> {
    match f {
        Formula::Prop(_) => Mon::ret(Sem::Con(kfn(move |_, _| m.clone()), Mon::ret(Sem::Unit))),
        Formula::Conj(a, b) => {
            let (a, b) = ((**a).clone(), (**b).clone());
            m.bind(move |_, v| match v {
                Sem::Pair(x, y) => f2f_pair(&a, &b, x, y),
                other => shape("pair", &other),
            })
        }
        Formula::Disj(a, b) => {
            let (ea, eb) = (Rc::new(enf(a)), enf(b));
            let d = Rc::new(nplus(&ea, &eb));
            let na = ea.summands().len();
            let (a, b) = (a.clone(), b.clone());
            m.bind(move |_, v| match v {
                Sem::Inl(x) => {
                    let d = d.clone();
                    case_enf(
                        &ea,
                        &f2f(&a, x),
                        Rc::new(move |_, i, y| Mon::ret(inject(&d, i, y))),
                    )
                }
                Sem::Inr(y) => Mon::ret(inject_suffix(&d, na, f2f(&b, y))),
                other => shape("sum", &other),
            })
        }
        Formula::Impl(a, b) => {
            let ea = Rc::new(enf(a));
            let eb = Rc::new(enf(b));
            let cb = enf2cnf(&eb);
            let a_parts: Vec<Cnf> = ea.summands().into_iter().cloned().collect();
            let mut fs = Vec::new();
            for (j, (c1j, _)) in cb.factors().into_iter().enumerate() {
                for (i, _) in a_parts.iter().enumerate() {
                    let (m, ea, eb, c1j) = (m.clone(), ea.clone(), eb.clone(), c1j.clone());
                    let (a, b) = ((**a).clone(), (**b).clone());
                    fs.push(kfn(move |_, ctx: Mon<A>| {
                        let xj = prefix(&c1j, &ctx);
                        let xa = drop_n(c1j.len(), &ctx);
                        let arg = f2f_inv(&a, inject_enf(&ea, i, xa));
                        let res = call(&m, arg);
                        let tb = to_cnf(&eb, f2f(&b, res));
                        apply(nth_fn(j, &tb), xj)
                    }));
                }
            }
            tuple(fs)
        }
    }
}

/// The normal-form value of a pair whose components are `xa` and `xb`.
fn f2f_pair<A: Syntax>(a: &Formula, b: &Formula, xa: Mon<A>, xb: Mon<A>) -> Mon<A> {
    let (ea, eb) = (enf(a), enf(b));
    let xa = f2f(a, xa);
    let xb = f2f(b, xb);
    match (&ea, &eb) {
        (Enf::CnfE(ca), Enf::CnfE(_)) => sem_ntimes(ca, xa, xb),
        _ => {
            let d = Rc::new(as_dnf(distrib(&ea, &eb)));
            let nb = eb.summands().len();
            let a_parts: Rc<Vec<Cnf>> = Rc::new(ea.summands().into_iter().cloned().collect());
            let eb = Rc::new(eb);
            case_enf(
                &ea,
                &xa,
                Rc::new(move |_, i, ya| {
                    let (d, a_parts) = (d.clone(), a_parts.clone());
                    case_enf(
                        &eb,
                        &xb,
                        Rc::new(move |_, k, yb| {
                            let c = sem_ntimes(&a_parts[i], ya.clone(), yb);
                            Mon::ret(inject(&d, i * nb + k, c))
                        }),
                    )
                }),
            )
        }
    }
}

/// Maps a value of `enf(f)` to a value of `f`.
pub fn f2f_inv<A: Syntax>(f: &Formula, m: Mon<A>) -> Mon<A> {
    match f {
        Formula::Prop(_) => apply(head_fn(m), Mon::ret(Sem::Unit)),
        Formula::Conj(a, b) => {
            let (ea, eb) = (enf(a), enf(b));
            match (&ea, &eb) {
                (Enf::CnfE(ca), Enf::CnfE(_)) => Mon::ret(Sem::Pair(
                    f2f_inv(a, prefix(ca, &m)),
                    f2f_inv(b, drop_n(ca.len(), &m)),
                )),
                _ => {
                    let d = as_dnf(distrib(&ea, &eb));
                    let nb = eb.summands().len();
                    let a_parts: Vec<Cnf> = ea.summands().into_iter().cloned().collect();
                    let (a, b) = ((**a).clone(), (**b).clone());
                    case_dnf(
                        &d,
                        &m,
                        Rc::new(move |_, s, x| {
                            let (i, k) = (s / nb, s % nb);
                            let ya = prefix(&a_parts[i], &x);
                            let yb = drop_n(a_parts[i].len(), &x);
                            Mon::ret(Sem::Pair(
                                f2f_inv(&a, inject_enf(&ea, i, ya)),
                                f2f_inv(&b, inject_enf(&eb, k, yb)),
                            ))
                        }),
                    )
                }
            }
        }
        Formula::Disj(a, b) => {
            let (ea, eb) = (enf(a), enf(b));
            let d = nplus(&ea, &eb);
            let na = ea.summands().len();
            split_sum(
                Rc::new(SumSplit {
                    a: (**a).clone(),
                    b: (**b).clone(),
                    ea,
                }),
                d,
                na,
                0,
                m,
            )
        }
        Formula::Impl(a, b) => {
            let ea = Rc::new(enf(a));
            let eb = Rc::new(enf(b));
            let cb = Rc::new(enf2cnf(&eb));
            let na = ea.summands().len();
            let (a, b) = (Rc::new((**a).clone()), Rc::new((**b).clone()));
            Mon::ret(Sem::Fun(kfn(move |_, arg| {
                let (m, eb, cb, b) = (m.clone(), eb.clone(), cb.clone(), b.clone());
                let xa = f2f(&a, arg);
                case_enf(
                    &ea,
                    &xa,
                    Rc::new(move |_, i, ya| {
                        let mut fs = Vec::new();
                        for (j, (c1j, _)) in cb.factors().into_iter().enumerate() {
                            let (m, c1j, ya) = (m.clone(), c1j.clone(), ya.clone());
                            fs.push(kfn(move |_, xj| {
                                apply(nth_fn(j * na + i, &m), sem_ntimes(&c1j, xj, ya.clone()))
                            }));
                        }
                        f2f_inv(&b, from_cnf(&eb, tuple(fs)))
                    }),
                )
            })))
        }
    }
}

struct SumSplit {
    a: Formula,
    b: Formula,
    ea: Enf,
}

/// Reads a value of `nplus(enf a, enf b)` back as a value of `a + b`. The
/// first `remaining` summands of `d` belong to `a`; `offset` of them have
/// already been passed.
fn split_sum<A: Syntax>(
    s: Rc<SumSplit>,
    d: Dnf,
    remaining: usize,
    offset: usize,
    m: Mon<A>,
) -> Mon<A> {
    m.bind(move |_, v| match (&d, v) {
        (_, Sem::Inl(x)) => Mon::ret(Sem::Inl(f2f_inv(&s.a, inject_enf(&s.ea, offset, x)))),
        (Dnf::Two(..), Sem::Inr(x)) => {
            debug_assert_eq!(remaining, 1);
            Mon::ret(Sem::Inr(f2f_inv(&s.b, x)))
        }
        (Dnf::Dis(_, d0), Sem::Inr(y)) => {
            if remaining == 1 {
                Mon::ret(Sem::Inr(f2f_inv(&s.b, y)))
            } else {
                split_sum(s.clone(), (**d0).clone(), remaining - 1, offset + 1, y)
            }
        }
        (_, other) => shape("sum", &other),
    })
}

// ---------------------------------------------------------------------------
// Evaluation of ND terms

/// ND terms with shared subterms, so closures can hold them cheaply.
enum Code {
    Var(usize),
    Wkn(Rc<Code>),
    Lam(Rc<Code>),
    App(Rc<Code>, Rc<Code>),
    Pair(Rc<Code>, Rc<Code>),
    Fst(Rc<Code>),
    Snd(Rc<Code>),
    Inl(Rc<Code>),
    Inr(Rc<Code>),
    Cas(Rc<Code>, Rc<Code>, Rc<Code>),
}

fn compile(t: &NdTerm) -> Rc<Code> {
    if let Some(n) = t.as_var() {
        return Rc::new(Code::Var(n));
    }
    Rc::new(match t {
        NdTerm::Hyp => Code::Var(0),
        NdTerm::Wkn(m) => Code::Wkn(compile(m)),
        NdTerm::Lam(m) => Code::Lam(compile(m)),
        NdTerm::App(m, n) => Code::App(compile(m), compile(n)),
        NdTerm::Pair(m, n) => Code::Pair(compile(m), compile(n)),
        NdTerm::Fst(m) => Code::Fst(compile(m)),
        NdTerm::Snd(m) => Code::Snd(compile(m)),
        NdTerm::Inl(m) => Code::Inl(compile(m)),
        NdTerm::Inr(m) => Code::Inr(compile(m)),
        NdTerm::Cas(m, n1, n2) => Code::Cas(compile(m), compile(n1), compile(n2)),
    })
}

/// One monadic value per context entry, innermost first.
pub enum Env<A> {
    Nil,
    Cons(Mon<A>, Rc<Env<A>>),
}

impl<A: Syntax> Env<A> {
    pub fn from_vec(vs: Vec<Mon<A>>) -> Rc<Env<A>> {
        let mut e = Rc::new(Env::Nil);
        for v in vs.into_iter().rev() {
            e = Rc::new(Env::Cons(v, e));
        }
        e
    }

    fn get(&self, n: usize) -> Mon<A> {
        match (self, n) {
            (Env::Cons(m, _), 0) => m.clone(),
            (Env::Cons(_, rest), n) => rest.get(n - 1),
            (Env::Nil, _) => panic!("internal invariant violated: unbound variable"),
        }
    }

    fn rest(&self) -> Rc<Env<A>> {
        match self {
            Env::Cons(_, rest) => rest.clone(),
            Env::Nil => panic!("internal invariant violated: weakening the empty environment"),
        }
    }
}

fn eval_code<A: Syntax>(t: &Rc<Code>, env: &Rc<Env<A>>) -> Mon<A> {
    match &**t {
        Code::Var(n) => env.get(*n),
        Code::Wkn(m) => eval_code(m, &env.rest()),
        Code::Lam(body) => {
            let (body, env) = (body.clone(), env.clone());
            Mon::ret(Sem::Fun(kfn(move |_, a| {
                eval_code(&body, &Rc::new(Env::Cons(a, env.clone())))
            })))
        }
        Code::App(m, n) => call(&eval_code(m, env), eval_code(n, env)),
        Code::Pair(m, n) => Mon::ret(Sem::Pair(eval_code(m, env), eval_code(n, env))),
        Code::Fst(m) => fst(&eval_code(m, env)),
        Code::Snd(m) => snd(&eval_code(m, env)),
        Code::Inl(m) => Mon::ret(Sem::Inl(eval_code(m, env))),
        Code::Inr(m) => Mon::ret(Sem::Inr(eval_code(m, env))),
        Code::Cas(m, n1, n2) => {
            let (n1, n2, env) = (n1.clone(), n2.clone(), env.clone());
            // the scrutinee runs first; the branch continues in its world
            eval_code(m, &env).bind(move |_, v| match v {
                Sem::Inl(a) => eval_code(&n1, &Rc::new(Env::Cons(a, env.clone()))),
                Sem::Inr(b) => eval_code(&n2, &Rc::new(Env::Cons(b, env.clone()))),
                other => shape("sum", &other),
            })
        }
    }
}

/// Evaluates an ND term in an environment.
pub fn eval_nd<A: Syntax>(t: &NdTerm, env: &Rc<Env<A>>) -> Mon<A> {
    eval_code(&compile(t), env)
}

// ---------------------------------------------------------------------------
// Evaluation of compact terms

/// Evaluates a closed tuple at product type `c`.
pub fn eval_compact<A: Syntax>(p: &ProductTerm, c: &Cnf) -> Mon<A> {
    let fs = c
        .factors()
        .into_iter()
        .zip(p.0.iter())
        .map(|((arg, head), m)| {
            let (m, arg, head) = (Rc::new(m.clone()), arg.clone(), head.clone());
            kfn(move |_, a| eval_base(&m, &arg, &head, a))
        })
        .collect();
    tuple(fs)
}

/// The tuple for `c1` given a tuple at `explogn(c1, ctx)` and the context.
fn unexplog<A: Syntax>(c1: &Cnf, tp: Mon<A>, gamma: Mon<A>) -> Mon<A> {
    let fs = c1
        .factors()
        .into_iter()
        .enumerate()
        .map(|(i, (arg, _))| {
            let (tp, gamma, arg) = (tp.clone(), gamma.clone(), arg.clone());
            kfn(move |_, a| apply(nth_fn(i, &tp), sem_ntimes(&arg, a, gamma.clone())))
        })
        .collect();
    tuple(fs)
}

/// Evaluates `m : (ctx |- goal)` given the semantic context.
pub fn eval_base<A: Syntax>(m: &BaseTerm, ctx: &Cnf, goal: &Base, gamma: Mon<A>) -> Mon<A> {
    let here = Enf::CnfE(ctx.clone());
    let nth = |n: usize| {
        ctx.nth(n)
            .unwrap_or_else(|| panic!("internal invariant violated: index {n} out of range"))
    };
    match m {
        BaseTerm::AppN(n, p) => {
            let (c1, _, _) = nth(*n);
            let arg = unexplog(c1, eval_compact(p, &explogn(c1, &here)), gamma.clone());
            apply(nth_fn(*n, &gamma), arg)
        }
        BaseTerm::CasN(n, p, q) => {
            let (c1, head, _) = nth(*n);
            let d = match head {
                Base::Bd(d) => (**d).clone(),
                Base::Prp(_) => panic!("internal invariant violated: case on an atom"),
            };
            let arg = unexplog(c1, eval_compact(p, &explogn(c1, &here)), gamma.clone());
            let scrut = apply(nth_fn(*n, &gamma), arg);
            let tq = eval_compact(q, &explogn(&explog0(goal, &d), &here));
            let parts: Vec<Cnf> = d.summands().into_iter().cloned().collect();
            case_dnf(
                &d,
                &scrut,
                Rc::new(move |_, i, x| {
                    apply(nth_fn(i, &tq), sem_ntimes(&parts[i], x, gamma.clone()))
                }),
            )
        }
        BaseTerm::WknC(inner) => match ctx {
            Cnf::Con(_, _, rest) => eval_base(inner, rest, goal, tail(&gamma)),
            Cnf::Top => panic!("internal invariant violated: weakening the empty context"),
        },
        BaseTerm::InlTwo(p) | BaseTerm::InrTwo(p) | BaseTerm::InlDis(p) => {
            let d = match goal {
                Base::Bd(d) => d,
                Base::Prp(_) => panic!("internal invariant violated: injection into an atom"),
            };
            let (c, left) = match (m, &**d) {
                (BaseTerm::InlTwo(_), Dnf::Two(c1, _)) => (c1, true),
                (BaseTerm::InrTwo(_), Dnf::Two(_, c2)) => (c2, false),
                (BaseTerm::InlDis(_), Dnf::Dis(c, _)) => (c, true),
                _ => panic!("internal invariant violated: injection into the wrong sum"),
            };
            let v = unexplog(c, eval_compact(p, &explogn(c, &here)), gamma);
            Mon::ret(if left { Sem::Inl(v) } else { Sem::Inr(v) })
        }
        BaseTerm::InrDis(inner) => match goal {
            Base::Bd(d) => match &**d {
                Dnf::Dis(_, d0) => Mon::ret(Sem::Inr(eval_base(
                    inner,
                    ctx,
                    &Base::Bd(d0.clone()),
                    gamma,
                ))),
                Dnf::Two(..) => panic!("internal invariant violated: inrD at a binary sum"),
            },
            Base::Prp(_) => panic!("internal invariant violated: injection into an atom"),
        },
    }
}

// ---------------------------------------------------------------------------
// Reification into compact terms

fn reify_atom<A: Syntax>(w: World, v: Sem<A>) -> A {
    match v {
        Sem::Atom(t, at) => {
            assert!(
                at <= w,
                "internal invariant violated: atom from a larger world"
            );
            t.weaken(w - at)
        }
        other => shape("atom", &other),
    }
}

/// Reads back a value of product type `c` at world `w` as a tuple at
/// `explogn(c, w)`.
pub fn creify(c: &Cnf, m: &Mon<BaseTerm>, w: World) -> ProductTerm {
    let mut out = Vec::new();
    for (j, (c1, b)) in c.factors().into_iter().enumerate() {
        let w1 = w + c1.len();
        let vars = creflect(c1, w1);
        let r = apply(nth_fn(j, m), vars);
        out.push(breify(b, &r, w1));
    }
    ProductTerm(out)
}

fn breify(b: &Base, m: &Mon<BaseTerm>, w: World) -> BaseTerm {
    match b {
        Base::Prp(_) => m.run(w, kont(reify_atom)),
        Base::Bd(d) => dreify(d, m, w),
    }
}

/// Reads back a value of sum type `d` at world `w`.
pub fn dreify(d: &Dnf, m: &Mon<BaseTerm>, w: World) -> BaseTerm {
    let d = d.clone();
    m.run(
        w,
        kont(move |w2, v| match (&d, v) {
            (Dnf::Two(c1, _), Sem::Inl(x)) => BaseTerm::InlTwo(creify(c1, &x, w2)),
            (Dnf::Two(_, c2), Sem::Inr(x)) => BaseTerm::InrTwo(creify(c2, &x, w2)),
            (Dnf::Dis(c, _), Sem::Inl(x)) => BaseTerm::InlDis(creify(c, &x, w2)),
            (Dnf::Dis(_, d0), Sem::Inr(y)) => BaseTerm::InrDis(Box::new(dreify(d0, &y, w2))),
            (_, other) => shape("sum", &other),
        }),
    )
}

/// The tuple of variables for the factors of `c`, which occupy positions
/// `0..|c|` of world `w`.
pub fn creflect(c: &Cnf, w: World) -> Mon<BaseTerm> {
    let fs = c
        .factors()
        .into_iter()
        .enumerate()
        .map(|(j, (c1, b))| {
            let level = w - 1 - j;
            let (c1, b) = (c1.clone(), b.clone());
            kfn(move |_, arg: Mon<BaseTerm>| match &b {
                Base::Prp(_) => {
                    let c1 = c1.clone();
                    Mon::new(move |w2, k| {
                        let t = BaseTerm::AppN(w2 - 1 - level, creify(&c1, &arg, w2));
                        k(w2, Sem::Atom(t, w2))
                    })
                }
                Base::Bd(d) => dreflect(level, &c1, d, arg),
            })
        })
        .collect();
    tuple(fs)
}

/// A case analysis on the variable at `level`, applied to `arg`, as a value
/// of sum type `d`.
pub fn dreflect(level: usize, c1: &Cnf, d: &Dnf, arg: Mon<BaseTerm>) -> Mon<BaseTerm> {
    let (c1, d) = (c1.clone(), d.clone());
    Mon::new(move |w, k| {
        let p = creify(&c1, &arg, w);
        let q = d
            .summands()
            .into_iter()
            .enumerate()
            .map(|(i, ci)| {
                let w3 = w + ci.len();
                k(w3, inject(&d, i, creflect(ci, w3)))
            })
            .collect();
        BaseTerm::CasN(w - 1 - level, p, ProductTerm(q))
    })
}

// ---------------------------------------------------------------------------
// Reification into ND terms

type Neutral = Rc<dyn Fn(World) -> NdTerm>;

fn var_at(level: usize) -> Neutral {
    Rc::new(move |w| NdTerm::var(w - 1 - level))
}

/// Reads back a value of `f` at world `w`.
pub fn sreify(f: &Formula, m: &Mon<NdTerm>, w: World) -> NdTerm {
    match f {
        Formula::Prop(_) => m.run(w, kont(reify_atom)),
        Formula::Conj(a, b) => {
            // one run, so a case above the pair is not repeated per component
            let (a, b) = ((**a).clone(), (**b).clone());
            m.run(
                w,
                kont(move |w2, v| match v {
                    Sem::Pair(x, y) => NdTerm::pair(sreify(&a, &x, w2), sreify(&b, &y, w2)),
                    other => shape("pair", &other),
                }),
            )
        }
        Formula::Impl(a, b) => {
            // the fresh variable is analysed once, right under its binder
            let x = sreflect(a, var_at(w));
            let m = m.clone();
            let body = x.bind(move |_, v| call(&m, Mon::ret(v)));
            NdTerm::lam(sreify(b, &body, w + 1))
        }
        Formula::Disj(a, b) => {
            let (a, b) = ((**a).clone(), (**b).clone());
            m.run(
                w,
                kont(move |w2, v| match v {
                    Sem::Inl(x) => NdTerm::inl(sreify(&a, &x, w2)),
                    Sem::Inr(y) => NdTerm::inr(sreify(&b, &y, w2)),
                    other => shape("sum", &other),
                }),
            )
        }
    }
}

/// The value of a neutral term of type `f`.
pub fn sreflect(f: &Formula, n: Rc<dyn Fn(World) -> NdTerm>) -> Mon<NdTerm> {
    match f {
        Formula::Prop(_) => Mon::new(move |w, k| k(w, Sem::Atom(n(w), w))),
        Formula::Conj(a, b) => {
            let n1 = n.clone();
            Mon::ret(Sem::Pair(
                sreflect(a, Rc::new(move |w| NdTerm::fst(n1(w)))),
                sreflect(b, Rc::new(move |w| NdTerm::snd(n(w)))),
            ))
        }
        Formula::Impl(a, b) => {
            let (a, b) = ((**a).clone(), (**b).clone());
            Mon::ret(Sem::Fun(kfn(move |_, arg| {
                let (n, a) = (n.clone(), a.clone());
                sreflect(&b, Rc::new(move |w| NdTerm::app(n(w), sreify(&a, &arg, w))))
            })))
        }
        Formula::Disj(a, b) => {
            let (a, b) = ((**a).clone(), (**b).clone());
            Mon::new(move |w, k| {
                let left = k(w + 1, Sem::Inl(sreflect(&a, var_at(w))));
                let right = k(w + 1, Sem::Inr(sreflect(&b, var_at(w))));
                NdTerm::cas(n(w), left, right)
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Pipelines

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NbeError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Compact(#[from] CompactTypeError),
}

/// Normalizes a closed term of type `f` to a compact term at `enf(f)`.
pub fn nbe(t: &NdTerm, f: &Formula) -> Result<CompactTerm, NbeError> {
    typecheck_nd(&[], t, f)?;
    Ok(nbe_unchecked(t, f))
}

/// [`nbe`] without the input typecheck. Ill-typed input panics.
pub fn nbe_unchecked(t: &NdTerm, f: &Formula) -> CompactTerm {
    let m: Mon<BaseTerm> = eval_nd(t, &Rc::new(Env::Nil));
    let e = f2f(f, m);
    match enf(f) {
        Enf::CnfE(c) => CompactTerm::Product(creify(&c, &e, 0)),
        Enf::DnfE(d) => CompactTerm::Base(dreify(&d, &e, 0)),
    }
}

/// Converts a compact term at `enf(f)` back to a closed term of type `f`.
pub fn ebn(p: &CompactTerm, f: &Formula) -> Result<NdTerm, NbeError> {
    typecheck_compact(p, &enf(f))?;
    Ok(ebn_unchecked(p, f))
}

pub fn ebn_unchecked(p: &CompactTerm, f: &Formula) -> NdTerm {
    let m: Mon<NdTerm> = match (p, enf(f)) {
        (CompactTerm::Product(p), Enf::CnfE(c)) => eval_compact(p, &c),
        (CompactTerm::Base(m), Enf::DnfE(d)) => {
            eval_base(m, &Cnf::Top, &Base::Bd(Box::new(d)), Mon::ret(Sem::Unit))
        }
        _ => panic!("internal invariant violated: compact term shape does not match the type"),
    };
    sreify(f, &f2f_inv(f, m), 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compact::{parse_compact, print_compact, print_raw};
    use crate::enf::p2c;
    use crate::syntax::{parse_term, parse_type, Atom};

    fn ty(s: &str) -> Formula {
        parse_type(s).unwrap()
    }

    fn norm(t: &str, f: &str) -> String {
        match nbe(&parse_term(t).unwrap(), &ty(f)).unwrap() {
            CompactTerm::Product(p) => print_compact(&p),
            other => print_raw(&other),
        }
    }

    #[test]
    fn identity_round_trip() {
        let t = NdTerm::lam(NdTerm::Hyp);
        let m: Mon<NdTerm> = eval_nd(&t, &Rc::new(Env::Nil));
        assert_eq!(sreify(&ty("p->p"), &m, 0), t);
    }

    #[test]
    fn sreflect_then_sreify_atom() {
        let m = sreflect(&ty("p"), var_at(0));
        assert_eq!(sreify(&ty("p"), &m, 1), NdTerm::Hyp);
    }

    #[test]
    fn eta_long_sum_function() {
        let m = sreflect(&ty("(p+q)->r"), var_at(0));
        let t = sreify(&ty("(p+q)->r"), &m, 1);
        let expect = NdTerm::lam(NdTerm::cas(
            NdTerm::Hyp,
            NdTerm::app(NdTerm::var(2), NdTerm::inl(NdTerm::Hyp)),
            NdTerm::app(NdTerm::var(2), NdTerm::inr(NdTerm::Hyp)),
        ));
        assert_eq!(t, expect);
    }

    #[test]
    fn creify_basics() {
        let m: Mon<BaseTerm> = Mon::ret(Sem::Unit);
        assert_eq!(creify(&Cnf::Top, &m, 3), ProductTerm::tt());
        let c = p2c(&Atom::new("p"));
        let vars = creflect(&c, 1);
        assert_eq!(creify(&c, &vars, 1), ProductTerm::one(BaseTerm::var(0)));
    }

    #[test]
    fn eval_compact_fixed_point() {
        let c = p2c(&Atom::new("p"));
        // x0 as a function of the one-variable context
        let ctx = Cnf::con(c.clone(), Base::Prp(Atom::new("p")), Cnf::Top);
        let p = ProductTerm::one(BaseTerm::var(0));
        let m: Mon<BaseTerm> = eval_compact(&p, &ctx);
        assert_eq!(creify(&ctx, &m, 0), p);
    }

    #[test]
    fn small_normal_forms() {
        assert_eq!(norm("\\x. x", "(p->p)->(p->p)"), "x1 x0");
        assert_eq!(norm("\\x. x", "p*q -> p*q"), "<x0, x1>");
        assert_eq!(
            norm("\\x. \\y. y x", "(p+q) -> ((p+q)->r) -> r"),
            "<x0 x2, x1 x2>"
        );
    }

    #[test]
    fn ebn_then_nbe() {
        let f = ty("(p+q) -> ((p+q)->r) -> r");
        let p =
            CompactTerm::Product(parse_compact("<app 0 <app 2 <>>, app 1 <app 2 <>>>").unwrap());
        let t = ebn(&p, &f).unwrap();
        typecheck_nd(&[], &t, &f).unwrap();
        assert_eq!(nbe(&t, &f).unwrap(), p);
    }

    #[test]
    fn sum_types_at_top() {
        let f = ty("(p->p)+q");
        let t = parse_term("inl (\\x. x)").unwrap();
        let c = nbe(&t, &f).unwrap();
        assert_eq!(print_raw(&c), "inl2 <app 0 <>>");
        let back = ebn(&c, &f).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn ill_typed_input_is_rejected() {
        assert!(nbe(&NdTerm::lam(NdTerm::Hyp), &ty("p->q")).is_err());
        let p = CompactTerm::Product(ProductTerm::tt());
        assert!(ebn(&p, &ty("p->p")).is_err());
    }
}
