//! Types and lambda terms with sums: data, parsing, printing, typechecking.
//!
//! Terms are de Bruijn: [`NdTerm::Hyp`] is index 0 and [`NdTerm::Wkn`] is the
//! successor. The surface syntax uses names and is lowered on parsing.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// An atomic type. Equality is by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Atom {
        assert!(!name.is_empty(), "atom names are non-empty");
        Atom(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Prop(Atom),
    Disj(Box<Formula>, Box<Formula>),
    Conj(Box<Formula>, Box<Formula>),
    Impl(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn prop(name: &str) -> Formula {
        Formula::Prop(Atom::new(name))
    }

    pub fn disj(a: Formula, b: Formula) -> Formula {
        Formula::Disj(Box::new(a), Box::new(b))
    }

    pub fn conj(a: Formula, b: Formula) -> Formula {
        Formula::Conj(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Impl(Box::new(a), Box::new(b))
    }

    /// Atoms in order of first occurrence, without duplicates.
    pub fn atoms(&self) -> Vec<Atom> {
        fn go(f: &Formula, out: &mut Vec<Atom>) {
            match f {
                Formula::Prop(a) => {
                    if !out.contains(a) {
                        out.push(a.clone());
                    }
                }
                Formula::Disj(a, b) | Formula::Conj(a, b) | Formula::Impl(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Prop(_) => 0,
            Formula::Disj(a, b) | Formula::Conj(a, b) | Formula::Impl(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_type(self))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_type(self))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum NdTerm {
    Hyp,
    Wkn(Box<NdTerm>),
    Lam(Box<NdTerm>),
    App(Box<NdTerm>, Box<NdTerm>),
    Pair(Box<NdTerm>, Box<NdTerm>),
    Fst(Box<NdTerm>),
    Snd(Box<NdTerm>),
    Inl(Box<NdTerm>),
    Inr(Box<NdTerm>),
    Cas(Box<NdTerm>, Box<NdTerm>, Box<NdTerm>),
}

impl NdTerm {
    /// The variable with de Bruijn index `n`.
    pub fn var(n: usize) -> NdTerm {
        let mut t = NdTerm::Hyp;
        for _ in 0..n {
            t = NdTerm::Wkn(Box::new(t));
        }
        t
    }

    pub fn wkn(t: NdTerm) -> NdTerm {
        NdTerm::Wkn(Box::new(t))
    }
    pub fn lam(t: NdTerm) -> NdTerm {
        NdTerm::Lam(Box::new(t))
    }
    pub fn app(m: NdTerm, n: NdTerm) -> NdTerm {
        NdTerm::App(Box::new(m), Box::new(n))
    }
    pub fn pair(m: NdTerm, n: NdTerm) -> NdTerm {
        NdTerm::Pair(Box::new(m), Box::new(n))
    }
    pub fn fst(m: NdTerm) -> NdTerm {
        NdTerm::Fst(Box::new(m))
    }
    pub fn snd(m: NdTerm) -> NdTerm {
        NdTerm::Snd(Box::new(m))
    }
    pub fn inl(m: NdTerm) -> NdTerm {
        NdTerm::Inl(Box::new(m))
    }
    pub fn inr(m: NdTerm) -> NdTerm {
        NdTerm::Inr(Box::new(m))
    }
    pub fn cas(m: NdTerm, n1: NdTerm, n2: NdTerm) -> NdTerm {
        NdTerm::Cas(Box::new(m), Box::new(n1), Box::new(n2))
    }

    /// If the term is `Wkn^n Hyp`, its index.
    pub fn as_var(&self) -> Option<usize> {
        match self {
            NdTerm::Hyp => Some(0),
            NdTerm::Wkn(t) => t.as_var().map(|n| n + 1),
            _ => None,
        }
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            NdTerm::Hyp => 1,
            NdTerm::Wkn(t)
            | NdTerm::Lam(t)
            | NdTerm::Fst(t)
            | NdTerm::Snd(t)
            | NdTerm::Inl(t)
            | NdTerm::Inr(t) => 1 + t.size(),
            NdTerm::App(a, b) | NdTerm::Pair(a, b) => 1 + a.size() + b.size(),
            NdTerm::Cas(a, b, c) => 1 + a.size() + b.size() + c.size(),
        }
    }
}

impl fmt::Display for NdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

/// Typing context, innermost binder first.
pub type Context = Vec<Formula>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
}

// ---------------------------------------------------------------------------
// Lexing

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(usize),
    Arrow,
    FatArrow,
    Star,
    Plus,
    LParen,
    RParen,
    Lt,
    Gt,
    Comma,
    Backslash,
    Dot,
    Bar,
}

pub(crate) struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, SyntaxError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (p, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let next = chars.get(i + 1).map(|x| x.1);
        let tok = match c {
            '-' if next == Some('>') => {
                i += 2;
                Tok::Arrow
            }
            '=' if next == Some('>') => {
                i += 2;
                Tok::FatArrow
            }
            '→' => {
                i += 1;
                Tok::Arrow
            }
            '*' | '×' => {
                i += 1;
                Tok::Star
            }
            '+' => {
                i += 1;
                Tok::Plus
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '<' | '⟨' => {
                i += 1;
                Tok::Lt
            }
            '>' | '⟩' => {
                i += 1;
                Tok::Gt
            }
            ',' => {
                i += 1;
                Tok::Comma
            }
            '\\' | 'λ' => {
                i += 1;
                Tok::Backslash
            }
            '.' => {
                i += 1;
                Tok::Dot
            }
            '|' => {
                i += 1;
                Tok::Bar
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().map(|x| x.1).collect();
                let n = s.parse::<usize>().map_err(|_| SyntaxError::Parse {
                    pos: p,
                    msg: format!("number `{s}` out of range"),
                })?;
                i = j;
                Tok::Nat(n)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].1.is_alphanumeric() || chars[j].1 == '_' || chars[j].1 == '\'')
                {
                    j += 1;
                }
                let s: String = chars[i..j].iter().map(|x| x.1).collect();
                i = j;
                Tok::Ident(s)
            }
            other => {
                return Err(SyntaxError::Parse {
                    pos: p,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        toks.push((tok, p));
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end: text.len(),
    })
}

impl Lexer {
    pub(crate) fn new(text: &str) -> Result<Lexer, SyntaxError> {
        lex(text)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    pub(crate) fn nat(&mut self) -> Result<usize, SyntaxError> {
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected a natural number"),
        }
    }

    pub(crate) fn eat_lt(&mut self) -> Result<(), SyntaxError> {
        self.expect(Tok::Lt, "`<`")
    }

    pub(crate) fn eat_gt(&mut self) -> bool {
        if self.peek() == Some(&Tok::Gt) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn eat_comma(&mut self) -> bool {
        if self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn fail<T>(&self, msg: &str) -> Result<T, SyntaxError> {
        self.err(msg)
    }

    pub(crate) fn done(&self) -> Result<(), SyntaxError> {
        self.finish()
    }
}

// ---------------------------------------------------------------------------
// Types

pub fn parse_type(text: &str) -> Result<Formula, SyntaxError> {
    let mut lx = lex(text)?;
    let f = type_expr(&mut lx)?;
    lx.finish()?;
    Ok(f)
}

fn type_expr(lx: &mut Lexer) -> Result<Formula, SyntaxError> {
    let lhs = type_sum(lx)?;
    if lx.peek() == Some(&Tok::Arrow) {
        lx.bump();
        let rhs = type_expr(lx)?;
        Ok(Formula::imp(lhs, rhs))
    } else {
        Ok(lhs)
    }
}

fn type_sum(lx: &mut Lexer) -> Result<Formula, SyntaxError> {
    let mut items = vec![type_prod(lx)?];
    while lx.peek() == Some(&Tok::Plus) {
        lx.bump();
        items.push(type_prod(lx)?);
    }
    Ok(fold_right(items, Formula::disj))
}

fn type_prod(lx: &mut Lexer) -> Result<Formula, SyntaxError> {
    let mut items = vec![type_atomic(lx)?];
    while lx.peek() == Some(&Tok::Star) {
        lx.bump();
        items.push(type_atomic(lx)?);
    }
    Ok(fold_right(items, Formula::conj))
}

fn type_atomic(lx: &mut Lexer) -> Result<Formula, SyntaxError> {
    match lx.peek() {
        Some(Tok::Ident(_)) => Ok(Formula::Prop(Atom::new(&lx.ident()?))),
        Some(Tok::LParen) => {
            lx.bump();
            let f = type_expr(lx)?;
            lx.expect(Tok::RParen, "`)`")?;
            Ok(f)
        }
        _ => lx.err("expected a type"),
    }
}

fn fold_right(mut items: Vec<Formula>, mk: fn(Formula, Formula) -> Formula) -> Formula {
    let mut acc = items.pop().expect("non-empty");
    while let Some(x) = items.pop() {
        acc = mk(x, acc);
    }
    acc
}

/// Prints with minimal parentheses. Operators are spaced only when the
/// expression is not trivially small, e.g. `p->r` but `a -> b -> c`.
pub fn print_type(f: &Formula) -> String {
    match f {
        Formula::Prop(a) => a.name().to_string(),
        Formula::Impl(..) => {
            let mut items = Vec::new();
            let mut cur = f;
            while let Formula::Impl(a, b) = cur {
                items.push(wrap(a, matches!(**a, Formula::Impl(..))));
                cur = b;
            }
            let all_atomic = items.len() == 1
                && matches!(f, Formula::Impl(a, _) if matches!(**a, Formula::Prop(_)));
            let last_atomic = matches!(cur, Formula::Prop(_));
            items.push(print_type(cur));
            if all_atomic && last_atomic {
                items.join("->")
            } else {
                items.join(" -> ")
            }
        }
        Formula::Conj(..) => {
            let mut items = Vec::new();
            let mut cur = f;
            while let Formula::Conj(a, b) = cur {
                items.push(wrap(a, !matches!(**a, Formula::Prop(_))));
                cur = b;
            }
            items.push(wrap(
                cur,
                matches!(cur, Formula::Impl(..) | Formula::Disj(..)),
            ));
            join_spaced(items, "*")
        }
        Formula::Disj(..) => {
            let mut items = Vec::new();
            let mut cur = f;
            while let Formula::Disj(a, b) = cur {
                items.push(wrap(
                    a,
                    matches!(**a, Formula::Impl(..) | Formula::Disj(..)),
                ));
                cur = b;
            }
            items.push(wrap(cur, matches!(cur, Formula::Impl(..))));
            join_spaced(items, "+")
        }
    }
}

fn wrap(f: &Formula, parens: bool) -> String {
    if parens {
        format!("({})", print_type(f))
    } else {
        print_type(f)
    }
}

fn join_spaced(items: Vec<String>, op: &str) -> String {
    if items.iter().any(|s| s.contains(' ')) {
        items.join(&format!(" {op} "))
    } else {
        items.join(op)
    }
}

// ---------------------------------------------------------------------------
// Terms

/// Parses a named term and lowers it to de Bruijn form. Free variables are
/// an error.
pub fn parse_term(text: &str) -> Result<NdTerm, SyntaxError> {
    let mut lx = lex(text)?;
    let mut scope = Vec::new();
    let t = term_expr(&mut lx, &mut scope)?;
    lx.finish()?;
    Ok(t)
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "fst" | "snd" | "inl" | "inr" | "case" | "of")
}

fn lookup(scope: &[String], name: &str) -> Result<NdTerm, SyntaxError> {
    scope
        .iter()
        .rev()
        .position(|n| n == name)
        .map(NdTerm::var)
        .ok_or_else(|| SyntaxError::Unbound(name.to_string()))
}

fn binder(lx: &mut Lexer) -> Result<String, SyntaxError> {
    let name = lx.ident()?;
    if is_keyword(&name) {
        return lx.err(format!("`{name}` is a keyword"));
    }
    Ok(name)
}

fn term_expr(lx: &mut Lexer, scope: &mut Vec<String>) -> Result<NdTerm, SyntaxError> {
    match lx.peek() {
        Some(Tok::Backslash) => {
            lx.bump();
            let mut names = vec![binder(lx)?];
            while let Some(Tok::Ident(_)) = lx.peek() {
                names.push(binder(lx)?);
            }
            lx.expect(Tok::Dot, "`.`")?;
            let n = names.len();
            scope.extend(names);
            let body = term_expr(lx, scope);
            scope.truncate(scope.len() - n);
            let mut t = body?;
            for _ in 0..n {
                t = NdTerm::lam(t);
            }
            Ok(t)
        }
        Some(Tok::Ident(k)) if k == "case" => {
            lx.bump();
            let scrut = term_expr(lx, scope)?;
            keyword(lx, "of")?;
            let _ = lx.peek() == Some(&Tok::Bar) && lx.bump().is_some();
            keyword(lx, "inl")?;
            let x = binder(lx)?;
            lx.expect(Tok::FatArrow, "`=>`")?;
            scope.push(x);
            let n1 = term_expr(lx, scope);
            scope.pop();
            let n1 = n1?;
            lx.expect(Tok::Bar, "`|`")?;
            keyword(lx, "inr")?;
            let y = binder(lx)?;
            lx.expect(Tok::FatArrow, "`=>`")?;
            scope.push(y);
            let n2 = term_expr(lx, scope);
            scope.pop();
            Ok(NdTerm::cas(scrut, n1, n2?))
        }
        _ => term_app(lx, scope),
    }
}

fn keyword(lx: &mut Lexer, kw: &str) -> Result<(), SyntaxError> {
    match lx.peek() {
        Some(Tok::Ident(s)) if s == kw => {
            lx.bump();
            Ok(())
        }
        _ => lx.err(format!("expected `{kw}`")),
    }
}

fn starts_atom(lx: &Lexer) -> bool {
    match lx.peek() {
        Some(Tok::Ident(s)) => s != "of" && s != "case",
        Some(Tok::LParen) | Some(Tok::Lt) => true,
        _ => false,
    }
}

fn term_app(lx: &mut Lexer, scope: &mut Vec<String>) -> Result<NdTerm, SyntaxError> {
    let mut t = term_prefix(lx, scope)?;
    loop {
        if starts_atom(lx) {
            let a = term_prefix(lx, scope)?;
            t = NdTerm::app(t, a);
        } else if matches!(lx.peek(), Some(Tok::Backslash))
            || matches!(lx.peek(), Some(Tok::Ident(s)) if s == "case")
        {
            // a trailing lambda or case is the last argument
            let a = term_expr(lx, scope)?;
            return Ok(NdTerm::app(t, a));
        } else {
            return Ok(t);
        }
    }
}

fn term_prefix(lx: &mut Lexer, scope: &mut Vec<String>) -> Result<NdTerm, SyntaxError> {
    if let Some(Tok::Ident(s)) = lx.peek() {
        let mk: Option<fn(NdTerm) -> NdTerm> = match s.as_str() {
            "fst" => Some(NdTerm::fst),
            "snd" => Some(NdTerm::snd),
            "inl" => Some(NdTerm::inl),
            "inr" => Some(NdTerm::inr),
            _ => None,
        };
        if let Some(mk) = mk {
            lx.bump();
            let arg = match lx.peek() {
                Some(Tok::Backslash) => term_expr(lx, scope)?,
                Some(Tok::Ident(k)) if k == "case" => term_expr(lx, scope)?,
                _ => term_prefix(lx, scope)?,
            };
            return Ok(mk(arg));
        }
    }
    term_atom(lx, scope)
}

fn term_atom(lx: &mut Lexer, scope: &mut Vec<String>) -> Result<NdTerm, SyntaxError> {
    match lx.peek() {
        Some(Tok::Ident(s)) if !is_keyword(s) => {
            let name = lx.ident()?;
            lookup(scope, &name)
        }
        Some(Tok::LParen) => {
            lx.bump();
            let t = term_expr(lx, scope)?;
            lx.expect(Tok::RParen, "`)`")?;
            Ok(t)
        }
        Some(Tok::Lt) => {
            lx.bump();
            let a = term_expr(lx, scope)?;
            lx.expect(Tok::Comma, "`,`")?;
            let b = term_expr(lx, scope)?;
            lx.expect(Tok::Gt, "`>`")?;
            Ok(NdTerm::pair(a, b))
        }
        _ => lx.err("expected a term"),
    }
}

/// Prints a term with generated names: a binder at depth `d` is `x{d}`.
pub fn print_term(t: &NdTerm) -> String {
    let mut out = String::new();
    pr_term(t, 0, Prec::Top, &mut out);
    out
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Top,
    Fun,
    Arg,
}

fn name_at(depth: usize, index: usize) -> String {
    assert!(index < depth, "free variable in printed term");
    format!("x{}", depth - 1 - index)
}

fn pr_term(t: &NdTerm, depth: usize, prec: Prec, out: &mut String) {
    if let Some(n) = t.as_var() {
        if n < depth {
            out.push_str(&name_at(depth, n));
        } else {
            out.push_str(&format!("#{n}"));
        }
        return;
    }
    match t {
        NdTerm::Hyp => unreachable!(),
        NdTerm::Wkn(inner) => {
            // names are level-based, so the inner term prints the same in
            // the shorter context; its own binders may reuse the skipped name
            pr_term(inner, depth.saturating_sub(1), prec, out);
        }
        NdTerm::Lam(_) => {
            let paren = prec > Prec::Top;
            if paren {
                out.push('(');
            }
            let mut cur = t;
            let mut d = depth;
            out.push('\\');
            let mut first = true;
            while let NdTerm::Lam(b) = cur {
                if !first {
                    out.push(' ');
                }
                first = false;
                out.push_str(&format!("x{d}"));
                d += 1;
                cur = b;
            }
            out.push_str(". ");
            pr_term(cur, d, Prec::Top, out);
            if paren {
                out.push(')');
            }
        }
        NdTerm::Cas(m, n1, n2) => {
            let paren = prec > Prec::Top;
            if paren {
                out.push('(');
            }
            out.push_str("case ");
            pr_term(m, depth, Prec::Top, out);
            out.push_str(&format!(" of inl x{depth} => "));
            pr_term(n1, depth + 1, Prec::Top, out);
            out.push_str(&format!(" | inr x{depth} => "));
            pr_term(n2, depth + 1, Prec::Top, out);
            if paren {
                out.push(')');
            }
        }
        NdTerm::App(m, n) => {
            let paren = prec == Prec::Arg;
            if paren {
                out.push('(');
            }
            pr_term(m, depth, Prec::Fun, out);
            out.push(' ');
            pr_term(n, depth, Prec::Arg, out);
            if paren {
                out.push(')');
            }
        }
        NdTerm::Fst(m) | NdTerm::Snd(m) | NdTerm::Inl(m) | NdTerm::Inr(m) => {
            let kw = match t {
                NdTerm::Fst(_) => "fst",
                NdTerm::Snd(_) => "snd",
                NdTerm::Inl(_) => "inl",
                _ => "inr",
            };
            let paren = prec == Prec::Arg;
            if paren {
                out.push('(');
            }
            out.push_str(kw);
            out.push(' ');
            pr_term(m, depth, Prec::Arg, out);
            if paren {
                out.push(')');
            }
        }
        NdTerm::Pair(a, b) => {
            out.push('<');
            pr_term(a, depth, Prec::Top, out);
            out.push_str(", ");
            pr_term(b, depth, Prec::Top, out);
            out.push('>');
        }
    }
}

// ---------------------------------------------------------------------------
// Typechecking

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("type mismatch in `{term}`: expected {expected}, found {actual}")]
    Mismatch {
        term: String,
        expected: String,
        actual: String,
    },
    #[error("variable index out of range in `{term}`")]
    Unbound { term: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    Meta(usize),
    Prop(Atom),
    Disj(Box<Ty>, Box<Ty>),
    Conj(Box<Ty>, Box<Ty>),
    Impl(Box<Ty>, Box<Ty>),
}

impl Ty {
    fn of(f: &Formula) -> Ty {
        match f {
            Formula::Prop(a) => Ty::Prop(a.clone()),
            Formula::Disj(a, b) => Ty::Disj(Box::new(Ty::of(a)), Box::new(Ty::of(b))),
            Formula::Conj(a, b) => Ty::Conj(Box::new(Ty::of(a)), Box::new(Ty::of(b))),
            Formula::Impl(a, b) => Ty::Impl(Box::new(Ty::of(a)), Box::new(Ty::of(b))),
        }
    }
}

struct Unifier {
    subst: HashMap<usize, Ty>,
    next: usize,
}

impl Unifier {
    fn new() -> Unifier {
        Unifier {
            subst: HashMap::new(),
            next: 0,
        }
    }

    fn fresh(&mut self) -> Ty {
        self.next += 1;
        Ty::Meta(self.next - 1)
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match t {
            Ty::Meta(m) => match self.subst.get(m) {
                Some(t) => self.resolve(t),
                None => t.clone(),
            },
            Ty::Prop(_) => t.clone(),
            Ty::Disj(a, b) => Ty::Disj(Box::new(self.resolve(a)), Box::new(self.resolve(b))),
            Ty::Conj(a, b) => Ty::Conj(Box::new(self.resolve(a)), Box::new(self.resolve(b))),
            Ty::Impl(a, b) => Ty::Impl(Box::new(self.resolve(a)), Box::new(self.resolve(b))),
        }
    }

    fn occurs(&self, m: usize, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Meta(n) => n == m,
            Ty::Prop(_) => false,
            Ty::Disj(a, b) | Ty::Conj(a, b) | Ty::Impl(a, b) => {
                self.occurs(m, &a) || self.occurs(m, &b)
            }
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> bool {
        let a = self.resolve(a);
        let b = self.resolve(b);
        match (&a, &b) {
            (Ty::Meta(m), Ty::Meta(n)) if m == n => true,
            (Ty::Meta(m), t) | (t, Ty::Meta(m)) => {
                if self.occurs(*m, t) {
                    return false;
                }
                self.subst.insert(*m, t.clone());
                true
            }
            (Ty::Prop(x), Ty::Prop(y)) => x == y,
            (Ty::Disj(a1, b1), Ty::Disj(a2, b2))
            | (Ty::Conj(a1, b1), Ty::Conj(a2, b2))
            | (Ty::Impl(a1, b1), Ty::Impl(a2, b2)) => self.unify(a1, a2) && self.unify(b1, b2),
            _ => false,
        }
    }

    fn show(&self, t: &Ty) -> String {
        fn go(t: &Ty) -> String {
            match t {
                Ty::Meta(m) => format!("?{m}"),
                Ty::Prop(a) => a.name().to_string(),
                Ty::Disj(a, b) => format!("({} + {})", go(a), go(b)),
                Ty::Conj(a, b) => format!("({} * {})", go(a), go(b)),
                Ty::Impl(a, b) => format!("({} -> {})", go(a), go(b)),
            }
        }
        go(&self.resolve(t))
    }

    fn to_formula(&self, t: &Ty) -> Option<Formula> {
        Some(match self.resolve(t) {
            Ty::Meta(_) => return None,
            Ty::Prop(a) => Formula::Prop(a),
            Ty::Disj(a, b) => Formula::disj(self.to_formula(&a)?, self.to_formula(&b)?),
            Ty::Conj(a, b) => Formula::conj(self.to_formula(&a)?, self.to_formula(&b)?),
            Ty::Impl(a, b) => Formula::imp(self.to_formula(&a)?, self.to_formula(&b)?),
        })
    }
}

fn check(u: &mut Unifier, ctx: &[Ty], t: &NdTerm, goal: &Ty) -> Result<(), TypeError> {
    let mismatch = |u: &Unifier, expected: &Ty, actual: &Ty| TypeError::Mismatch {
        term: print_open(t, ctx.len()),
        expected: u.show(expected),
        actual: u.show(actual),
    };
    match t {
        NdTerm::Hyp => match ctx.first() {
            Some(a) => {
                if u.unify(a, goal) {
                    Ok(())
                } else {
                    Err(mismatch(u, goal, a))
                }
            }
            None => Err(TypeError::Unbound {
                term: print_open(t, 0),
            }),
        },
        NdTerm::Wkn(inner) => {
            if ctx.is_empty() {
                return Err(TypeError::Unbound {
                    term: print_open(t, 0),
                });
            }
            check(u, &ctx[1..], inner, goal)
        }
        NdTerm::Lam(body) => {
            let a = u.fresh();
            let b = u.fresh();
            let shape = Ty::Impl(Box::new(a.clone()), Box::new(b.clone()));
            if !u.unify(goal, &shape) {
                return Err(mismatch(u, goal, &shape));
            }
            let mut inner = Vec::with_capacity(ctx.len() + 1);
            inner.push(a);
            inner.extend_from_slice(ctx);
            check(u, &inner, body, &b)
        }
        NdTerm::App(m, n) => {
            let a = u.fresh();
            check(
                u,
                ctx,
                m,
                &Ty::Impl(Box::new(a.clone()), Box::new(goal.clone())),
            )?;
            check(u, ctx, n, &a)
        }
        NdTerm::Pair(m, n) => {
            let a = u.fresh();
            let b = u.fresh();
            let shape = Ty::Conj(Box::new(a.clone()), Box::new(b.clone()));
            if !u.unify(goal, &shape) {
                return Err(mismatch(u, goal, &shape));
            }
            check(u, ctx, m, &a)?;
            check(u, ctx, n, &b)
        }
        NdTerm::Fst(m) => {
            let b = u.fresh();
            check(u, ctx, m, &Ty::Conj(Box::new(goal.clone()), Box::new(b)))
        }
        NdTerm::Snd(m) => {
            let a = u.fresh();
            check(u, ctx, m, &Ty::Conj(Box::new(a), Box::new(goal.clone())))
        }
        NdTerm::Inl(m) | NdTerm::Inr(m) => {
            let a = u.fresh();
            let b = u.fresh();
            let shape = Ty::Disj(Box::new(a.clone()), Box::new(b.clone()));
            if !u.unify(goal, &shape) {
                return Err(mismatch(u, goal, &shape));
            }
            let part = if matches!(t, NdTerm::Inl(_)) { a } else { b };
            check(u, ctx, m, &part)
        }
        NdTerm::Cas(m, n1, n2) => {
            let a = u.fresh();
            let b = u.fresh();
            check(
                u,
                ctx,
                m,
                &Ty::Disj(Box::new(a.clone()), Box::new(b.clone())),
            )?;
            let mut c1 = vec![a];
            c1.extend_from_slice(ctx);
            check(u, &c1, n1, goal)?;
            let mut c2 = vec![b];
            c2.extend_from_slice(ctx);
            check(u, &c2, n2, goal)
        }
    }
}

/// Prints a possibly open term; free variables show as `#n`.
fn print_open(t: &NdTerm, depth: usize) -> String {
    let mut out = String::new();
    pr_term(t, depth, Prec::Top, &mut out);
    out
}

/// Checks that `t` inhabits `goal` in `ctx`.
pub fn typecheck_nd(ctx: &[Formula], t: &NdTerm, goal: &Formula) -> Result<(), TypeError> {
    let mut u = Unifier::new();
    let ctx: Vec<Ty> = ctx.iter().map(Ty::of).collect();
    check(&mut u, &ctx, t, &Ty::of(goal))
}

/// The principal type of `t` in `ctx`, if it has one without unresolved
/// parts. `Ok(None)` means the term is typable but its type is not fully
/// determined.
pub fn synthesize_nd(ctx: &[Formula], t: &NdTerm) -> Result<Option<Formula>, TypeError> {
    let mut u = Unifier::new();
    let ctx: Vec<Ty> = ctx.iter().map(Ty::of).collect();
    let goal = u.fresh();
    check(&mut u, &ctx, t, &goal)?;
    Ok(u.to_formula(&goal))
}
