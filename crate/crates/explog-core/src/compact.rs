//! The compact term calculus at exp-log normal types.
//!
//! A [`ProductTerm`] is a tuple of [`BaseTerm`]s. Variables are indices into
//! the factors of the context, counted from the left starting at 0. There is
//! no lambda and no projection.

use std::fmt;

use thiserror::Error;

use crate::enf::{explog0, explogn, Base, Cnf, Dnf, Enf};
use crate::syntax::{Lexer, SyntaxError};

/// `<M1, ..., Mn>`, typed by a product with `n` factors.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ProductTerm(pub Vec<BaseTerm>);

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum BaseTerm {
    AppN(usize, ProductTerm),
    CasN(usize, ProductTerm, ProductTerm),
    WknC(Box<BaseTerm>),
    InlTwo(ProductTerm),
    InrTwo(ProductTerm),
    InlDis(ProductTerm),
    InrDis(Box<BaseTerm>),
}

/// Normal form at a product type or, when the type is a sum, at a base type
/// in the empty context.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CompactTerm {
    Product(ProductTerm),
    Base(BaseTerm),
}

impl ProductTerm {
    pub fn tt() -> ProductTerm {
        ProductTerm(Vec::new())
    }

    pub fn one(m: BaseTerm) -> ProductTerm {
        ProductTerm(vec![m])
    }

    /// `PairC(head, tail)`.
    pub fn pair(head: BaseTerm, tail: ProductTerm) -> ProductTerm {
        let mut v = Vec::with_capacity(tail.0.len() + 1);
        v.push(head);
        v.extend(tail.0);
        ProductTerm(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        1 + self.0.iter().map(BaseTerm::size).sum::<usize>()
    }
}

impl BaseTerm {
    /// The variable `x_n` applied to the empty tuple.
    pub fn var(n: usize) -> BaseTerm {
        BaseTerm::AppN(n, ProductTerm::tt())
    }

    pub fn size(&self) -> usize {
        match self {
            BaseTerm::AppN(_, p)
            | BaseTerm::InlTwo(p)
            | BaseTerm::InrTwo(p)
            | BaseTerm::InlDis(p) => 1 + p.size(),
            BaseTerm::CasN(_, p, q) => 1 + p.size() + q.size(),
            BaseTerm::WknC(m) | BaseTerm::InrDis(m) => 1 + m.size(),
        }
    }
}

// ---------------------------------------------------------------------------
// Typing

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompactTypeError {
    #[error("tuple `{term}` has {found} components but its type `{ty}` has {expected} factors")]
    Arity {
        term: String,
        ty: String,
        expected: usize,
        found: usize,
    },
    #[error("index {index} out of range in `{term}`: the context has {len} factors")]
    Index {
        term: String,
        index: usize,
        len: usize,
    },
    #[error("`{term}` does not fit the context: {msg}")]
    Context { term: String, msg: String },
    #[error("`{term}` does not have type {goal}: {msg}")]
    Shape {
        term: String,
        goal: String,
        msg: String,
    },
}

fn show_base(b: &Base) -> String {
    match crate::enf::base_to_formula(b) {
        Ok(f) => f.to_string(),
        Err(_) => "1".to_string(),
    }
}

pub fn typecheck_product(p: &ProductTerm, c: &Cnf) -> Result<(), CompactTypeError> {
    let fs = c.factors();
    if fs.len() != p.0.len() {
        return Err(CompactTypeError::Arity {
            term: print_raw_product(p),
            ty: c.to_string(),
            expected: fs.len(),
            found: p.0.len(),
        });
    }
    for (m, (arg, head)) in p.0.iter().zip(fs) {
        typecheck_base(m, arg, head)?;
    }
    Ok(())
}

/// Checks `m : (ctx |- goal)`.
pub fn typecheck_base(m: &BaseTerm, ctx: &Cnf, goal: &Base) -> Result<(), CompactTypeError> {
    let shape = |msg: &str| CompactTypeError::Shape {
        term: print_raw_base(m),
        goal: show_base(goal),
        msg: msg.to_string(),
    };
    let lookup = |n: usize| {
        ctx.nth(n).ok_or_else(|| CompactTypeError::Index {
            term: print_raw_base(m),
            index: n,
            len: ctx.len(),
        })
    };
    let here = Enf::CnfE(ctx.clone());
    match m {
        BaseTerm::AppN(n, p) => {
            let (c1, head, _) = lookup(*n)?;
            match head {
                Base::Prp(_) if head == goal => {}
                Base::Prp(_) => {
                    return Err(shape(&format!("x{n} has codomain {}", show_base(head))))
                }
                Base::Bd(_) => {
                    return Err(CompactTypeError::Context {
                        term: print_raw_base(m),
                        msg: format!("x{n} has a sum codomain and must be analysed by case"),
                    })
                }
            }
            typecheck_product(p, &explogn(c1, &here))
        }
        BaseTerm::CasN(n, p, q) => {
            let (c1, head, _) = lookup(*n)?;
            let d = match head {
                Base::Bd(d) => d,
                Base::Prp(_) => {
                    return Err(CompactTypeError::Context {
                        term: print_raw_base(m),
                        msg: format!("x{n} has atomic codomain {}", show_base(head)),
                    })
                }
            };
            typecheck_product(p, &explogn(c1, &here))?;
            typecheck_product(q, &explogn(&explog0(goal, d), &here))
        }
        BaseTerm::WknC(inner) => match ctx {
            Cnf::Con(_, _, rest) => typecheck_base(inner, rest, goal),
            Cnf::Top => Err(CompactTypeError::Context {
                term: print_raw_base(m),
                msg: "weakening in the empty context".to_string(),
            }),
        },
        BaseTerm::InlTwo(p) | BaseTerm::InrTwo(p) => match goal {
            Base::Bd(d) => match &**d {
                Dnf::Two(c1, c2) => {
                    let c = if matches!(m, BaseTerm::InlTwo(_)) {
                        c1
                    } else {
                        c2
                    };
                    typecheck_product(p, &explogn(c, &here))
                }
                Dnf::Dis(..) => Err(shape("a sum of more than two summands")),
            },
            Base::Prp(_) => Err(shape("an atom")),
        },
        BaseTerm::InlDis(p) => match goal {
            Base::Bd(d) => match &**d {
                Dnf::Dis(c, _) => typecheck_product(p, &explogn(c, &here)),
                Dnf::Two(..) => Err(shape("a binary sum")),
            },
            Base::Prp(_) => Err(shape("an atom")),
        },
        BaseTerm::InrDis(inner) => match goal {
            Base::Bd(d) => match &**d {
                Dnf::Dis(_, rest) => typecheck_base(inner, ctx, &Base::Bd(rest.clone())),
                Dnf::Two(..) => Err(shape("a binary sum")),
            },
            Base::Prp(_) => Err(shape("an atom")),
        },
    }
}

/// Checks a closed compact term at an ENF type.
pub fn typecheck_compact(t: &CompactTerm, e: &Enf) -> Result<(), CompactTypeError> {
    match (t, e) {
        (CompactTerm::Product(p), Enf::CnfE(c)) => typecheck_product(p, c),
        (CompactTerm::Base(m), Enf::DnfE(d)) => {
            typecheck_base(m, &Cnf::Top, &Base::Bd(Box::new(d.clone())))
        }
        (CompactTerm::Product(p), Enf::DnfE(_)) => Err(CompactTypeError::Shape {
            term: print_raw_product(p),
            goal: e.to_string(),
            msg: "a tuple at a sum type".to_string(),
        }),
        (CompactTerm::Base(m), Enf::CnfE(_)) => Err(CompactTypeError::Shape {
            term: print_raw_base(m),
            goal: e.to_string(),
            msg: "a base term at a product type".to_string(),
        }),
    }
}

// ---------------------------------------------------------------------------
// Printing

pub fn print_raw_product(p: &ProductTerm) -> String {
    let mut out = String::new();
    raw_product(p, &mut out);
    out
}

pub fn print_raw_base(m: &BaseTerm) -> String {
    let mut out = String::new();
    raw_base(m, &mut out);
    out
}

pub fn print_raw(t: &CompactTerm) -> String {
    match t {
        CompactTerm::Product(p) => print_raw_product(p),
        CompactTerm::Base(m) => print_raw_base(m),
    }
}

fn raw_product(p: &ProductTerm, out: &mut String) {
    out.push('<');
    for (i, m) in p.0.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        raw_base(m, out);
    }
    out.push('>');
}

fn raw_base(m: &BaseTerm, out: &mut String) {
    match m {
        BaseTerm::AppN(n, p) => {
            out.push_str(&format!("app {n} "));
            raw_product(p, out);
        }
        BaseTerm::CasN(n, p, q) => {
            out.push_str(&format!("case {n} "));
            raw_product(p, out);
            out.push(' ');
            raw_product(q, out);
        }
        BaseTerm::WknC(m) => {
            out.push_str("wkn ");
            raw_base(m, out);
        }
        BaseTerm::InlTwo(p) => {
            out.push_str("inl2 ");
            raw_product(p, out);
        }
        BaseTerm::InrTwo(p) => {
            out.push_str("inr2 ");
            raw_product(p, out);
        }
        BaseTerm::InlDis(p) => {
            out.push_str("inlD ");
            raw_product(p, out);
        }
        BaseTerm::InrDis(m) => {
            out.push_str("inrD ");
            raw_base(m, out);
        }
    }
}

/// Human-readable form: `app n <>` is `xn`, a singleton `<M>` is `M`.
pub fn print_compact(p: &ProductTerm) -> String {
    pretty_product(p)
}

pub fn print_pretty(t: &CompactTerm) -> String {
    match t {
        CompactTerm::Product(p) => pretty_product(p),
        CompactTerm::Base(m) => pretty_base(m),
    }
}

fn pretty_product(p: &ProductTerm) -> String {
    if p.0.len() == 1 {
        return pretty_base(&p.0[0]);
    }
    let items: Vec<String> = p.0.iter().map(pretty_base).collect();
    format!("<{}>", items.join(", "))
}

/// A tuple in argument position.
fn pretty_arg(p: &ProductTerm) -> String {
    if p.0.len() == 1 && !matches!(p.0[0], BaseTerm::AppN(_, ref q) if q.is_empty()) {
        format!("({})", pretty_base(&p.0[0]))
    } else {
        pretty_product(p)
    }
}

fn pretty_base(m: &BaseTerm) -> String {
    match m {
        BaseTerm::AppN(n, p) if p.is_empty() => format!("x{n}"),
        BaseTerm::AppN(n, p) => format!("x{n} {}", pretty_arg(p)),
        BaseTerm::CasN(n, p, q) => format!("case {n} {} {}", pretty_arg(p), pretty_arg(q)),
        BaseTerm::WknC(m) => format!("wkn {}", pretty_base_arg(m)),
        BaseTerm::InlTwo(p) => format!("inl2 {}", pretty_arg(p)),
        BaseTerm::InrTwo(p) => format!("inr2 {}", pretty_arg(p)),
        BaseTerm::InlDis(p) => format!("inlD {}", pretty_arg(p)),
        BaseTerm::InrDis(m) => format!("inrD {}", pretty_base_arg(m)),
    }
}

fn pretty_base_arg(m: &BaseTerm) -> String {
    match m {
        BaseTerm::AppN(_, p) if p.is_empty() => pretty_base(m),
        _ => format!("({})", pretty_base(m)),
    }
}

impl fmt::Display for ProductTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_product(self))
    }
}

impl fmt::Display for BaseTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_base(self))
    }
}

impl fmt::Display for CompactTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_pretty(self))
    }
}

// ---------------------------------------------------------------------------
// Parsing (raw syntax)

pub fn parse_compact(text: &str) -> Result<ProductTerm, SyntaxError> {
    let mut lx = Lexer::new(text)?;
    let p = parse_prod(&mut lx)?;
    lx.done()?;
    Ok(p)
}

/// Parses either a tuple or a single base term.
pub fn parse_compact_term(text: &str) -> Result<CompactTerm, SyntaxError> {
    let mut lx = Lexer::new(text)?;
    let t = if text.trim_start().starts_with('<') {
        CompactTerm::Product(parse_prod(&mut lx)?)
    } else {
        CompactTerm::Base(parse_base(&mut lx)?)
    };
    lx.done()?;
    Ok(t)
}

fn parse_prod(lx: &mut Lexer) -> Result<ProductTerm, SyntaxError> {
    lx.eat_lt()?;
    let mut items = Vec::new();
    if lx.eat_gt() {
        return Ok(ProductTerm(items));
    }
    loop {
        items.push(parse_base(lx)?);
        if lx.eat_comma() {
            continue;
        }
        if lx.eat_gt() {
            return Ok(ProductTerm(items));
        }
        return lx.fail("expected `,` or `>`");
    }
}

fn parse_base(lx: &mut Lexer) -> Result<BaseTerm, SyntaxError> {
    let kw = lx.ident()?;
    Ok(match kw.as_str() {
        "app" => {
            let n = lx.nat()?;
            BaseTerm::AppN(n, parse_prod(lx)?)
        }
        "case" => {
            let n = lx.nat()?;
            let p = parse_prod(lx)?;
            BaseTerm::CasN(n, p, parse_prod(lx)?)
        }
        "wkn" => BaseTerm::WknC(Box::new(parse_base(lx)?)),
        "inl2" => BaseTerm::InlTwo(parse_prod(lx)?),
        "inr2" => BaseTerm::InrTwo(parse_prod(lx)?),
        "inlD" => BaseTerm::InlDis(parse_prod(lx)?),
        "inrD" => BaseTerm::InrDis(Box::new(parse_base(lx)?)),
        other => return lx.fail(&format!("unknown compact constructor `{other}`")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enf::{enf, p2c};
    use crate::syntax::{parse_type, Atom};

    fn app(n: usize, args: Vec<BaseTerm>) -> BaseTerm {
        BaseTerm::AppN(n, ProductTerm(args))
    }

    fn cnf_of(s: &str) -> Cnf {
        match enf(&parse_type(s).unwrap()) {
            Enf::CnfE(c) => c,
            Enf::DnfE(_) => panic!("sum type"),
        }
    }

    #[test]
    fn product_typing() {
        assert!(typecheck_product(&ProductTerm::tt(), &Cnf::Top).is_ok());
        let ex1 = ProductTerm(vec![
            app(0, vec![BaseTerm::var(2)]),
            app(1, vec![BaseTerm::var(2)]),
        ]);
        assert!(typecheck_product(&ex1, &cnf_of("(p+q) -> ((p+q)->r) -> r")).is_ok());
        assert!(matches!(
            typecheck_product(&ProductTerm::tt(), &p2c(&Atom::new("p"))),
            Err(CompactTypeError::Arity { .. })
        ));
    }

    #[test]
    fn base_typing() {
        let p = Base::Prp(Atom::new("p"));
        let ctx = p2c(&Atom::new("p"));
        assert!(typecheck_base(&BaseTerm::var(0), &ctx, &p).is_ok());
        assert!(matches!(
            typecheck_base(&BaseTerm::var(5), &ctx, &p),
            Err(CompactTypeError::Index { index: 5, .. })
        ));
        assert!(typecheck_base(&BaseTerm::var(0), &ctx, &Base::Prp(Atom::new("q"))).is_err());
        let wk = BaseTerm::WknC(Box::new(BaseTerm::var(0)));
        let ctx2 = Cnf::con(Cnf::Top, Base::Prp(Atom::new("q")), ctx.clone());
        assert!(typecheck_base(&wk, &ctx2, &p).is_ok());
        assert!(typecheck_base(&wk, &ctx, &p).is_err());
    }

    #[test]
    fn example5_terms_typecheck() {
        let c = cnf_of("(f->g) -> (h->g) -> i -> (i -> f+h) -> g");
        for s in [
            "<case 0 <app 1 <>> <app 4 <app 0 <>>, app 3 <app 0 <>>>>",
            "<case 0 <app 1 <>> <case 1 <app 2 <>> <app 5 <app 0 <>>, app 4 <app 0 <>>>, app 3 <app 0 <>>>>",
        ] {
            let p = parse_compact(s).unwrap();
            typecheck_product(&p, &c).unwrap();
        }
    }

    #[test]
    fn printing() {
        let ex1 = ProductTerm(vec![
            app(0, vec![BaseTerm::var(2)]),
            app(1, vec![BaseTerm::var(2)]),
        ]);
        assert_eq!(print_compact(&ex1), "<x0 x2, x1 x2>");
        let inner = app(3, vec![app(2, vec![BaseTerm::var(1)])]);
        let ex2 = ProductTerm(vec![inner.clone(), inner]);
        assert_eq!(print_compact(&ex2), "<x3 (x2 x1), x3 (x2 x1)>");
        assert_eq!(print_compact(&ProductTerm::tt()), "<>");
        assert_eq!(
            print_compact(&ProductTerm::one(app(1, vec![BaseTerm::var(0)]))),
            "x1 x0"
        );
        assert_eq!(
            print_raw_product(&ex1),
            "<app 0 <app 2 <>>, app 1 <app 2 <>>>"
        );
    }

    #[test]
    fn parsing() {
        assert_eq!(
            parse_compact("<app 0 <>>").unwrap(),
            ProductTerm::one(BaseTerm::var(0))
        );
        let p = parse_compact("<case 0 <app 1 <>> <app 4 <app 0 <>>, app 3 <app 0 <>>>>").unwrap();
        assert_eq!(
            p,
            ProductTerm::one(BaseTerm::CasN(
                0,
                ProductTerm::one(BaseTerm::var(1)),
                ProductTerm(vec![
                    app(4, vec![BaseTerm::var(0)]),
                    app(3, vec![BaseTerm::var(0)])
                ])
            ))
        );
        assert!(parse_compact("<app 0").is_err());
        assert!(parse_compact("<lam 0 <>>").is_err());
        let all = "<wkn app 0 <>, inl2 <>, inr2 <app 1 <>>, inlD <>, inrD inl2 <>, case 2 <> <>>";
        assert_eq!(print_raw_product(&parse_compact(all).unwrap()), all);
    }
}
