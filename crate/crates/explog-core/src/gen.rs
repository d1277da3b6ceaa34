//! Random formulas and well-typed terms, for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::compact::{BaseTerm, ProductTerm};
use crate::enf::{explog0, explogn, Base, Cnf, Dnf, Enf};
use crate::syntax::{Atom, Formula, NdTerm};

const ATOM_NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

/// A random formula of depth at most `depth` over the first `atoms` atom
/// names.
pub fn random_formula<R: Rng>(rng: &mut R, depth: usize, atoms: usize) -> Formula {
    let atoms = atoms.clamp(1, ATOM_NAMES.len());
    if depth <= 1 || rng.gen_bool(0.3) {
        return Formula::Prop(Atom::new(ATOM_NAMES[rng.gen_range(0..atoms)]));
    }
    let a = random_formula(rng, depth - 1, atoms);
    let b = random_formula(rng, depth - 1, atoms);
    match rng.gen_range(0..3) {
        0 => Formula::disj(a, b),
        1 => Formula::conj(a, b),
        _ => Formula::imp(a, b),
    }
}

/// Type-directed term search with random choices and a step budget.
pub struct TermGen<'r, R: Rng> {
    rng: &'r mut R,
    fuel: usize,
    /// Probability of building a redex where one fits.
    pub redex_rate: f64,
}

impl<'r, R: Rng> TermGen<'r, R> {
    pub fn new(rng: &'r mut R, fuel: usize) -> Self {
        TermGen {
            rng,
            fuel,
            redex_rate: 0.15,
        }
    }

    fn tick(&mut self) -> Option<()> {
        if self.fuel == 0 {
            None
        } else {
            self.fuel -= 1;
            Some(())
        }
    }

    /// A term of type `goal` in `ctx` (innermost first), if one is found
    /// within the budget.
    pub fn term(&mut self, ctx: &[Formula], goal: &Formula, depth: usize) -> Option<NdTerm> {
        self.tick()?;
        if depth > 0 && self.rng.gen_bool(self.redex_rate) {
            if let Some(t) = self.redex(ctx, goal, depth) {
                return Some(t);
            }
        }
        let intro_first = self.rng.gen_bool(0.7);
        if intro_first {
            if let Some(t) = self.intro(ctx, goal, depth) {
                return Some(t);
            }
        }
        if let Some(t) = self.elim_any(ctx, goal, depth) {
            return Some(t);
        }
        if !intro_first {
            return self.intro(ctx, goal, depth);
        }
        None
    }

    fn extend(ctx: &[Formula], a: &Formula) -> Vec<Formula> {
        let mut c = Vec::with_capacity(ctx.len() + 1);
        c.push(a.clone());
        c.extend_from_slice(ctx);
        c
    }

    fn intro(&mut self, ctx: &[Formula], goal: &Formula, depth: usize) -> Option<NdTerm> {
        let d = depth.saturating_sub(1);
        match goal {
            Formula::Prop(_) => None,
            Formula::Impl(a, b) => Some(NdTerm::lam(self.term(&Self::extend(ctx, a), b, d)?)),
            Formula::Conj(a, b) => Some(NdTerm::pair(self.term(ctx, a, d)?, self.term(ctx, b, d)?)),
            Formula::Disj(a, b) => {
                let left = self.rng.gen_bool(0.5);
                let (first, second) = if left { (a, b) } else { (b, a) };
                if let Some(t) = self.term(ctx, first, d) {
                    return Some(if left { NdTerm::inl(t) } else { NdTerm::inr(t) });
                }
                let t = self.term(ctx, second, d)?;
                Some(if left { NdTerm::inr(t) } else { NdTerm::inl(t) })
            }
        }
    }

    fn elim_any(&mut self, ctx: &[Formula], goal: &Formula, depth: usize) -> Option<NdTerm> {
        let mut order: Vec<usize> = (0..ctx.len()).collect();
        order.shuffle(self.rng);
        for i in order {
            if let Some(t) = self.elim(ctx, NdTerm::var(i), &ctx[i], goal, depth) {
                return Some(t);
            }
        }
        None
    }

    /// Eliminates `head : h` towards `goal`.
    fn elim(
        &mut self,
        ctx: &[Formula],
        head: NdTerm,
        h: &Formula,
        goal: &Formula,
        depth: usize,
    ) -> Option<NdTerm> {
        self.tick()?;
        if h == goal && (matches!(h, Formula::Prop(_)) || self.rng.gen_bool(0.8)) {
            return Some(head);
        }
        if depth == 0 {
            return None;
        }
        let d = depth - 1;
        match h {
            Formula::Prop(_) => None,
            Formula::Impl(a, b) => {
                if !Self::reaches(b, goal) {
                    return None;
                }
                let arg = self.term(ctx, a, d)?;
                self.elim(ctx, NdTerm::app(head, arg), b, goal, d)
            }
            Formula::Conj(a, b) => {
                let first = self.rng.gen_bool(0.5);
                let tries = if first { [true, false] } else { [false, true] };
                for left in tries {
                    let (part, t) = if left {
                        (a, NdTerm::fst(head.clone()))
                    } else {
                        (b, NdTerm::snd(head.clone()))
                    };
                    if Self::reaches(part, goal) {
                        if let Some(r) = self.elim(ctx, t, part, goal, d) {
                            return Some(r);
                        }
                    }
                }
                None
            }
            Formula::Disj(a, b) => {
                let n1 = self.term(&Self::extend(ctx, a), goal, d)?;
                let n2 = self.term(&Self::extend(ctx, b), goal, d)?;
                Some(NdTerm::cas(head, n1, n2))
            }
        }
    }

    /// Whether eliminating `h` can end at `goal`.
    fn reaches(h: &Formula, goal: &Formula) -> bool {
        h == goal
            || match h {
                Formula::Prop(_) => false,
                Formula::Impl(_, b) => Self::reaches(b, goal),
                Formula::Conj(a, b) => Self::reaches(a, goal) || Self::reaches(b, goal),
                Formula::Disj(..) => true,
            }
    }

    fn redex(&mut self, ctx: &[Formula], goal: &Formula, depth: usize) -> Option<NdTerm> {
        let d = depth - 1;
        let other = if ctx.is_empty() || self.rng.gen_bool(0.3) {
            goal.clone()
        } else {
            ctx[self.rng.gen_range(0..ctx.len())].clone()
        };
        match self.rng.gen_range(0..4) {
            0 => {
                let body = self.term(&Self::extend(ctx, &other), goal, d)?;
                let arg = self.term(ctx, &other, d)?;
                Some(NdTerm::app(NdTerm::lam(body), arg))
            }
            1 => {
                let a = self.term(ctx, goal, d)?;
                let b = self.term(ctx, &other, d)?;
                Some(NdTerm::fst(NdTerm::pair(a, b)))
            }
            2 => {
                let a = self.term(ctx, &other, d)?;
                let b = self.term(ctx, goal, d)?;
                Some(NdTerm::snd(NdTerm::pair(a, b)))
            }
            _ => {
                let arg = self.term(ctx, &other, d)?;
                let n1 = self.term(&Self::extend(ctx, &other), goal, d)?;
                let n2 = self.term(&Self::extend(ctx, goal), goal, d)?;
                let left = self.rng.gen_bool(0.5);
                Some(if left {
                    NdTerm::cas(NdTerm::inl(arg), n1, n2)
                } else {
                    NdTerm::cas(NdTerm::inr(arg), n2, n1)
                })
            }
        }
    }
}

/// A random closed well-typed term at a random formula, retrying until one
/// is found. Terms are bounded by `max_size` constructors.
pub fn random_closed_term<R: Rng>(
    rng: &mut R,
    depth: usize,
    atoms: usize,
    max_size: usize,
) -> (NdTerm, Formula) {
    loop {
        let f = random_implication(rng, depth, atoms);
        let mut g = TermGen::new(rng, 400);
        if let Some(t) = g.term(&[], &f, 6) {
            if t.size() <= max_size {
                return (t, f);
            }
        }
    }
}

/// A formula with hypotheses in front, so closed terms exist more often.
fn random_implication<R: Rng>(rng: &mut R, depth: usize, atoms: usize) -> Formula {
    let n = rng.gen_range(1..=3);
    let mut f = random_formula(rng, depth.saturating_sub(1).max(1), atoms);
    for _ in 0..n {
        let h = random_formula(rng, depth.saturating_sub(1).max(1), atoms);
        f = Formula::imp(h, f);
    }
    f
}

/// Random search for compact terms.
pub struct CompactGen<'r, R: Rng> {
    rng: &'r mut R,
    fuel: usize,
    /// Probability of offering an explicit weakening.
    pub wkn_rate: f64,
}

impl<'r, R: Rng> CompactGen<'r, R> {
    pub fn new(rng: &'r mut R, fuel: usize) -> Self {
        CompactGen {
            rng,
            fuel,
            wkn_rate: 0.1,
        }
    }

    /// A tuple whose component `i` lives in the context of factor `i`.
    pub fn product(&mut self, c: &Cnf, depth: usize) -> Option<ProductTerm> {
        let mut out = Vec::new();
        for (arg, head) in c.factors() {
            out.push(self.base(arg, head, depth)?);
        }
        Some(ProductTerm(out))
    }

    pub fn base(&mut self, ctx: &Cnf, goal: &Base, depth: usize) -> Option<BaseTerm> {
        if self.fuel == 0 {
            return None;
        }
        self.fuel -= 1;
        let here = Enf::CnfE(ctx.clone());
        let d = depth.saturating_sub(1);
        let mut options: Vec<usize> = Vec::new();
        if let Base::Bd(_) = goal {
            options.push(0);
        }
        for (i, (_, head)) in ctx.factors().into_iter().enumerate() {
            match head {
                Base::Prp(_) if head == goal => options.push(1 + 2 * i),
                Base::Bd(_) if depth > 0 => options.push(2 + 2 * i),
                _ => {}
            }
        }
        if depth > 0 && !ctx.is_empty() && self.rng.gen_bool(self.wkn_rate) {
            options.push(usize::MAX);
        }
        options.shuffle(self.rng);
        for o in options {
            let r = match o {
                0 => self.inject(ctx, goal, &here, d),
                usize::MAX => match ctx {
                    Cnf::Con(_, _, rest) => self
                        .base(rest, goal, d)
                        .map(|m| BaseTerm::WknC(Box::new(m))),
                    Cnf::Top => None,
                },
                o => {
                    let n = (o - 1) / 2;
                    let (c1, head, _) = ctx.nth(n).unwrap();
                    let p = match self.product(&explogn(c1, &here), d) {
                        Some(p) => p,
                        None => continue,
                    };
                    match head {
                        Base::Prp(_) => Some(BaseTerm::AppN(n, p)),
                        Base::Bd(dd) => self
                            .product(&explogn(&explog0(goal, dd), &here), d)
                            .map(|q| BaseTerm::CasN(n, p, q)),
                    }
                }
            };
            if r.is_some() {
                return r;
            }
        }
        None
    }

    fn inject(&mut self, ctx: &Cnf, goal: &Base, here: &Enf, d: usize) -> Option<BaseTerm> {
        let dn = match goal {
            Base::Bd(dn) => dn,
            Base::Prp(_) => return None,
        };
        match &**dn {
            Dnf::Two(c1, c2) => {
                if self.rng.gen_bool(0.5) {
                    self.product(&explogn(c1, here), d).map(BaseTerm::InlTwo)
                } else {
                    self.product(&explogn(c2, here), d).map(BaseTerm::InrTwo)
                }
            }
            Dnf::Dis(c, rest) => {
                if self.rng.gen_bool(0.5) {
                    self.product(&explogn(c, here), d).map(BaseTerm::InlDis)
                } else {
                    let goal = Base::Bd(rest.clone());
                    self.base(ctx, &goal, d)
                        .map(|m| BaseTerm::InrDis(Box::new(m)))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compact::typecheck_product;
    use crate::enf::enf;
    use crate::syntax::typecheck_nd;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn formulas_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let f = random_formula(&mut rng, 5, 6);
            assert!(f.depth() <= 5);
            assert!(f.atoms().len() <= 6);
        }
    }

    #[test]
    fn generated_terms_typecheck() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let (t, f) = random_closed_term(&mut rng, 3, 3, 60);
            typecheck_nd(&[], &t, &f).unwrap();
        }
    }

    #[test]
    fn generated_compact_terms_typecheck() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut found = 0;
        for _ in 0..200 {
            let f = random_formula(&mut rng, 4, 3);
            if let Enf::CnfE(c) = enf(&f) {
                if let Some(p) = CompactGen::new(&mut rng, 200).product(&c, 4) {
                    typecheck_product(&p, &c).unwrap();
                    found += 1;
                }
            }
        }
        assert!(found > 10);
    }
}
