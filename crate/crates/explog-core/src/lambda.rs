//! Substitution and beta reduction on ND terms, kept independent of the
//! evaluator so it can serve as a test oracle.

use crate::syntax::NdTerm;

/// Rewrites every `Wkn` on a compound term into shifts of its variables,
/// leaving only `Wkn^n Hyp` variables.
pub fn expand_wkn(t: &NdTerm) -> NdTerm {
    if t.as_var().is_some() {
        return t.clone();
    }
    match t {
        NdTerm::Hyp => NdTerm::Hyp,
        NdTerm::Wkn(m) => shift(&expand_wkn(m), 0, 1),
        NdTerm::Lam(m) => NdTerm::lam(expand_wkn(m)),
        NdTerm::App(m, n) => NdTerm::app(expand_wkn(m), expand_wkn(n)),
        NdTerm::Pair(m, n) => NdTerm::pair(expand_wkn(m), expand_wkn(n)),
        NdTerm::Fst(m) => NdTerm::fst(expand_wkn(m)),
        NdTerm::Snd(m) => NdTerm::snd(expand_wkn(m)),
        NdTerm::Inl(m) => NdTerm::inl(expand_wkn(m)),
        NdTerm::Inr(m) => NdTerm::inr(expand_wkn(m)),
        NdTerm::Cas(m, n1, n2) => NdTerm::cas(expand_wkn(m), expand_wkn(n1), expand_wkn(n2)),
    }
}

/// Applies `f(depth, index)` to every variable, where `depth` counts the
/// binders crossed so far.
fn map_vars(t: &NdTerm, depth: usize, f: &dyn Fn(usize, usize) -> NdTerm) -> NdTerm {
    if let Some(n) = t.as_var() {
        return f(depth, n);
    }
    match t {
        NdTerm::Hyp => unreachable!(),
        NdTerm::Wkn(_) => map_vars(&expand_wkn(t), depth, f),
        NdTerm::Lam(m) => NdTerm::lam(map_vars(m, depth + 1, f)),
        NdTerm::App(m, n) => NdTerm::app(map_vars(m, depth, f), map_vars(n, depth, f)),
        NdTerm::Pair(m, n) => NdTerm::pair(map_vars(m, depth, f), map_vars(n, depth, f)),
        NdTerm::Fst(m) => NdTerm::fst(map_vars(m, depth, f)),
        NdTerm::Snd(m) => NdTerm::snd(map_vars(m, depth, f)),
        NdTerm::Inl(m) => NdTerm::inl(map_vars(m, depth, f)),
        NdTerm::Inr(m) => NdTerm::inr(map_vars(m, depth, f)),
        NdTerm::Cas(m, n1, n2) => NdTerm::cas(
            map_vars(m, depth, f),
            map_vars(n1, depth + 1, f),
            map_vars(n2, depth + 1, f),
        ),
    }
}

/// Adds `k` to every variable with index at least `cutoff`.
pub fn shift(t: &NdTerm, cutoff: usize, k: usize) -> NdTerm {
    map_vars(t, cutoff, &|d, n| {
        if n >= d {
            NdTerm::var(n + k)
        } else {
            NdTerm::var(n)
        }
    })
}

/// `body{arg/0}`: replaces variable 0 by `arg` and lowers the others.
pub fn subst_top(body: &NdTerm, arg: &NdTerm) -> NdTerm {
    let arg = expand_wkn(arg);
    map_vars(body, 0, &|d, n| {
        if n == d {
            shift(&arg, 0, d)
        } else if n > d {
            NdTerm::var(n - 1)
        } else {
            NdTerm::var(n)
        }
    })
}

/// Contracts `t` if it is itself a redex.
pub fn contract(t: &NdTerm) -> Option<NdTerm> {
    match t {
        NdTerm::App(f, a) => match &**f {
            NdTerm::Lam(body) => Some(subst_top(body, a)),
            _ => None,
        },
        NdTerm::Fst(p) => match &**p {
            NdTerm::Pair(a, _) => Some((**a).clone()),
            _ => None,
        },
        NdTerm::Snd(p) => match &**p {
            NdTerm::Pair(_, b) => Some((**b).clone()),
            _ => None,
        },
        NdTerm::Cas(s, n1, n2) => match &**s {
            NdTerm::Inl(a) => Some(subst_top(n1, a)),
            NdTerm::Inr(b) => Some(subst_top(n2, b)),
            _ => None,
        },
        _ => None,
    }
}

/// One beta step at the leftmost-outermost redex.
pub fn beta_step(t: &NdTerm) -> Option<NdTerm> {
    if let Some(r) = contract(t) {
        return Some(r);
    }
    match t {
        NdTerm::Hyp => None,
        NdTerm::Wkn(m) => beta_step(m).map(NdTerm::wkn),
        NdTerm::Lam(m) => beta_step(m).map(NdTerm::lam),
        NdTerm::Fst(m) => beta_step(m).map(NdTerm::fst),
        NdTerm::Snd(m) => beta_step(m).map(NdTerm::snd),
        NdTerm::Inl(m) => beta_step(m).map(NdTerm::inl),
        NdTerm::Inr(m) => beta_step(m).map(NdTerm::inr),
        NdTerm::App(m, n) => beta_step(m)
            .map(|m| NdTerm::app(m, (**n).clone()))
            .or_else(|| beta_step(n).map(|n| NdTerm::app((**m).clone(), n))),
        NdTerm::Pair(m, n) => beta_step(m)
            .map(|m| NdTerm::pair(m, (**n).clone()))
            .or_else(|| beta_step(n).map(|n| NdTerm::pair((**m).clone(), n))),
        NdTerm::Cas(s, n1, n2) => beta_step(s)
            .map(|s| NdTerm::cas(s, (**n1).clone(), (**n2).clone()))
            .or_else(|| beta_step(n1).map(|n1| NdTerm::cas((**s).clone(), n1, (**n2).clone())))
            .or_else(|| beta_step(n2).map(|n2| NdTerm::cas((**s).clone(), (**n1).clone(), n2))),
    }
}

/// All terms reachable from `t` by contracting exactly one redex.
pub fn beta_successors(t: &NdTerm) -> Vec<NdTerm> {
    let mut out = Vec::new();
    if let Some(r) = contract(t) {
        out.push(r);
    }
    let wrap1 = |m: &NdTerm, k: fn(NdTerm) -> NdTerm, out: &mut Vec<NdTerm>| {
        for r in beta_successors(m) {
            out.push(k(r));
        }
    };
    match t {
        NdTerm::Hyp => {}
        NdTerm::Wkn(m) => wrap1(m, NdTerm::wkn, &mut out),
        NdTerm::Lam(m) => wrap1(m, NdTerm::lam, &mut out),
        NdTerm::Fst(m) => wrap1(m, NdTerm::fst, &mut out),
        NdTerm::Snd(m) => wrap1(m, NdTerm::snd, &mut out),
        NdTerm::Inl(m) => wrap1(m, NdTerm::inl, &mut out),
        NdTerm::Inr(m) => wrap1(m, NdTerm::inr, &mut out),
        NdTerm::App(m, n) | NdTerm::Pair(m, n) => {
            let mk = |a: NdTerm, b: NdTerm| match t {
                NdTerm::App(..) => NdTerm::app(a, b),
                _ => NdTerm::pair(a, b),
            };
            for r in beta_successors(m) {
                out.push(mk(r, (**n).clone()));
            }
            for r in beta_successors(n) {
                out.push(mk((**m).clone(), r));
            }
        }
        NdTerm::Cas(s, n1, n2) => {
            for r in beta_successors(s) {
                out.push(NdTerm::cas(r, (**n1).clone(), (**n2).clone()));
            }
            for r in beta_successors(n1) {
                out.push(NdTerm::cas((**s).clone(), r, (**n2).clone()));
            }
            for r in beta_successors(n2) {
                out.push(NdTerm::cas((**s).clone(), (**n1).clone(), r));
            }
        }
    }
    out
}
