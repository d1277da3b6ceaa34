//! Exp-log normal form of types.
//!
//! The normalizer is a set of structurally recursive functions, one per
//! oriented arithmetic identity. Their factor and summand orders are part of
//! the contract: compact terms index into them.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::syntax::{Atom, Formula};

/// A product of arrows `(c1 -> b1) * ... * (cn -> bn)`, right nested.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Cnf {
    Top,
    Con(Box<Cnf>, Base, Box<Cnf>),
}

/// A sum of at least two products, right nested.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Dnf {
    Two(Cnf, Cnf),
    Dis(Cnf, Box<Dnf>),
}

/// Codomain of an arrow: an atom or a sum.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Base {
    Prp(Atom),
    Bd(Box<Dnf>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Enf {
    CnfE(Cnf),
    DnfE(Dnf),
}

impl Cnf {
    pub fn con(arg: Cnf, head: Base, rest: Cnf) -> Cnf {
        Cnf::Con(Box::new(arg), head, Box::new(rest))
    }

    /// The factors as `(argument, head)` pairs, left to right.
    pub fn factors(&self) -> Vec<(&Cnf, &Base)> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Cnf::Con(a, b, rest) = cur {
            out.push((&**a, b));
            cur = rest;
        }
        out
    }

    pub fn len(&self) -> usize {
        let mut n = 0;
        let mut cur = self;
        while let Cnf::Con(_, _, rest) = cur {
            n += 1;
            cur = rest;
        }
        n
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Cnf::Top)
    }

    /// The factor at position `n` and the factors after it.
    pub fn nth(&self, n: usize) -> Option<(&Cnf, &Base, &Cnf)> {
        let mut cur = self;
        let mut i = 0;
        while let Cnf::Con(a, b, rest) = cur {
            if i == n {
                return Some((a, b, rest));
            }
            i += 1;
            cur = rest;
        }
        None
    }

    /// Drops the first factor.
    pub fn tail(&self) -> Option<&Cnf> {
        match self {
            Cnf::Top => None,
            Cnf::Con(_, _, rest) => Some(rest),
        }
    }

    pub fn from_factors(fs: Vec<(Cnf, Base)>) -> Cnf {
        let mut acc = Cnf::Top;
        for (a, b) in fs.into_iter().rev() {
            acc = Cnf::con(a, b, acc);
        }
        acc
    }
}

impl Dnf {
    pub fn summands(&self) -> Vec<&Cnf> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Dnf::Two(a, b) => {
                    out.push(a);
                    out.push(b);
                    return out;
                }
                Dnf::Dis(a, rest) => {
                    out.push(a);
                    cur = rest;
                }
            }
        }
    }

    /// Number of summands, at least two.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        match self {
            Dnf::Two(..) => 2,
            Dnf::Dis(_, d) => 1 + d.len(),
        }
    }
}

impl Enf {
    /// A Cnf counts as a single summand.
    pub fn summands(&self) -> Vec<&Cnf> {
        match self {
            Enf::CnfE(c) => vec![c],
            Enf::DnfE(d) => d.summands(),
        }
    }
}

pub fn nplus1(d: &Dnf, e2: &Enf) -> Dnf {
    match d {
        Dnf::Two(c, c0) => match e2 {
            Enf::CnfE(c1) => Dnf::Dis(c.clone(), Box::new(Dnf::Two(c0.clone(), c1.clone()))),
            Enf::DnfE(d0) => Dnf::Dis(
                c.clone(),
                Box::new(Dnf::Dis(c0.clone(), Box::new(d0.clone()))),
            ),
        },
        Dnf::Dis(c, d0) => Dnf::Dis(c.clone(), Box::new(nplus1(d0, e2))),
    }
}

/// Flattened sum of `e1` and `e2`.
pub fn nplus(e1: &Enf, e2: &Enf) -> Dnf {
    match e1 {
        Enf::CnfE(a) => match e2 {
            Enf::CnfE(c) => Dnf::Two(a.clone(), c.clone()),
            Enf::DnfE(d) => Dnf::Dis(a.clone(), Box::new(d.clone())),
        },
        Enf::DnfE(b) => nplus1(b, e2),
    }
}

/// Flattened product: the factors of `c1` followed by those of `c2`.
pub fn ntimes(c1: &Cnf, c2: &Cnf) -> Cnf {
    match c1 {
        Cnf::Top => c2.clone(),
        Cnf::Con(c10, d, c13) => Cnf::Con(c10.clone(), d.clone(), Box::new(ntimes(c13, c2))),
    }
}

pub fn distrib0(c: &Cnf, d: &Dnf) -> Enf {
    match d {
        Dnf::Two(c0, c1) => Enf::DnfE(Dnf::Two(ntimes(c, c0), ntimes(c, c1))),
        Dnf::Dis(c0, d0) => match distrib0(c, d0) {
            Enf::CnfE(c1) => Enf::DnfE(Dnf::Two(ntimes(c, c0), c1)),
            Enf::DnfE(d1) => Enf::DnfE(Dnf::Dis(ntimes(c, c0), Box::new(d1))),
        },
    }
}

pub fn distrib1(c: &Cnf, e: &Enf) -> Enf {
    match e {
        Enf::CnfE(a) => Enf::CnfE(ntimes(c, a)),
        Enf::DnfE(b) => distrib0(c, b),
    }
}

pub fn distribn(d: &Dnf, e2: &Enf) -> Enf {
    match d {
        Dnf::Two(c, c0) => Enf::DnfE(nplus(&distrib1(c, e2), &distrib1(c0, e2))),
        Dnf::Dis(c, d0) => Enf::DnfE(nplus(&distrib1(c, e2), &distribn(d0, e2))),
    }
}

/// Normal form of the product `e1 * e2`.
pub fn distrib(e1: &Enf, e2: &Enf) -> Enf {
    match e1 {
        Enf::CnfE(a) => distrib1(a, e2),
        Enf::DnfE(b) => distribn(b, e2),
    }
}

/// `(c1 -> b) * ... * (cn -> b)` for the sum `c1 + ... + cn`.
pub fn explog0(b: &Base, d2: &Dnf) -> Cnf {
    match d2 {
        Dnf::Two(c1, c2) => ntimes(
            &Cnf::con(c1.clone(), b.clone(), Cnf::Top),
            &Cnf::con(c2.clone(), b.clone(), Cnf::Top),
        ),
        Dnf::Dis(c, d3) => ntimes(&Cnf::con(c.clone(), b.clone(), Cnf::Top), &explog0(b, d3)),
    }
}

pub fn explog1(b: &Base, e: &Enf) -> Cnf {
    match e {
        Enf::CnfE(c) => Cnf::con(c.clone(), b.clone(), Cnf::Top),
        Enf::DnfE(d1) => explog0(b, d1),
    }
}

/// Normal form of `e2 -> c`.
pub fn explogn(c: &Cnf, e2: &Enf) -> Cnf {
    match c {
        Cnf::Top => Cnf::Top,
        Cnf::Con(c1, d, c2) => ntimes(&explog1(d, &distrib1(c1, e2)), &explogn(c2, e2)),
    }
}

pub fn p2c(p: &Atom) -> Cnf {
    Cnf::con(Cnf::Top, Base::Prp(p.clone()), Cnf::Top)
}

pub fn b2c(b: &Base) -> Cnf {
    match b {
        Base::Prp(p) => p2c(p),
        Base::Bd(_) => Cnf::con(Cnf::Top, b.clone(), Cnf::Top),
    }
}

pub fn enf2cnf(e: &Enf) -> Cnf {
    match e {
        Enf::CnfE(c) => c.clone(),
        Enf::DnfE(d) => b2c(&Base::Bd(Box::new(d.clone()))),
    }
}

pub fn enf(f: &Formula) -> Enf {
    match f {
        Formula::Prop(p) => Enf::CnfE(p2c(p)),
        Formula::Disj(f0, f1) => Enf::DnfE(nplus(&enf(f0), &enf(f1))),
        Formula::Conj(f0, f1) => distrib(&enf(f0), &enf(f1)),
        Formula::Impl(f0, f1) => Enf::CnfE(explogn(&enf2cnf(&enf(f1)), &enf(f0))),
    }
}

// ---------------------------------------------------------------------------
// Readback

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReadbackError {
    #[error("the empty product has no formula")]
    EmptyProduct,
}

pub fn enf_to_formula(e: &Enf) -> Result<Formula, ReadbackError> {
    match e {
        Enf::CnfE(c) => cnf_to_formula(c),
        Enf::DnfE(d) => dnf_to_formula(d),
    }
}

pub fn cnf_to_formula(c: &Cnf) -> Result<Formula, ReadbackError> {
    let fs = c.factors();
    let mut items = Vec::with_capacity(fs.len());
    for (arg, head) in fs {
        let h = base_to_formula(head)?;
        items.push(match arg {
            Cnf::Top => h,
            _ => Formula::imp(cnf_to_formula(arg)?, h),
        });
    }
    let mut acc = items.pop().ok_or(ReadbackError::EmptyProduct)?;
    while let Some(x) = items.pop() {
        acc = Formula::conj(x, acc);
    }
    Ok(acc)
}

pub fn dnf_to_formula(d: &Dnf) -> Result<Formula, ReadbackError> {
    match d {
        Dnf::Two(a, b) => Ok(Formula::disj(cnf_to_formula(a)?, cnf_to_formula(b)?)),
        Dnf::Dis(a, rest) => Ok(Formula::disj(cnf_to_formula(a)?, dnf_to_formula(rest)?)),
    }
}

pub fn base_to_formula(b: &Base) -> Result<Formula, ReadbackError> {
    match b {
        Base::Prp(p) => Ok(Formula::Prop(p.clone())),
        Base::Bd(d) => dnf_to_formula(d),
    }
}

impl fmt::Display for Enf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match enf_to_formula(self) {
            Ok(x) => write!(f, "{x}"),
            Err(_) => f.write_str("1"),
        }
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match cnf_to_formula(self) {
            Ok(x) => write!(f, "{x}"),
            Err(_) => f.write_str("1"),
        }
    }
}

// ---------------------------------------------------------------------------
// Grammar check on formulas

/// Whether `f` is the display form of an exp-log normal form: right-nested
/// sums of right-nested products of factors `c -> b` (or a bare atom), where
/// `c` is again a product and `b` an atom or a sum.
pub fn check_enf_grammar(f: &Formula) -> bool {
    is_dnf(f) || is_cnf(f)
}

fn is_cnf(f: &Formula) -> bool {
    match f {
        Formula::Conj(a, b) => !matches!(**a, Formula::Conj(..)) && is_factor(a) && is_cnf(b),
        _ => is_factor(f),
    }
}

fn is_factor(f: &Formula) -> bool {
    match f {
        Formula::Impl(c, b) => is_cnf(c) && is_base(b),
        // only atoms are written without their empty context
        Formula::Prop(_) => true,
        _ => false,
    }
}

fn is_base(f: &Formula) -> bool {
    matches!(f, Formula::Prop(_)) || is_dnf(f)
}

fn is_dnf(f: &Formula) -> bool {
    match f {
        Formula::Disj(a, b) => {
            !matches!(**a, Formula::Disj(..)) && is_cnf(a) && (is_dnf(b) || is_cnf(b))
        }
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Arithmetic

/// Default digit budget for [`eval_arith`].
pub const DEFAULT_DIGIT_BUDGET: usize = 100_000;

/// Assignment of positive integers to atoms.
pub type Assignment = HashMap<Atom, u64>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ArithValue {
    Value(BigUint),
    Overflow,
}

impl ArithValue {
    pub fn value(&self) -> Option<&BigUint> {
        match self {
            ArithValue::Value(v) => Some(v),
            ArithValue::Overflow => None,
        }
    }
}

impl fmt::Display for ArithValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithValue::Value(v) => write!(f, "{v}"),
            ArithValue::Overflow => f.write_str("overflow"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("no value for atom `{0}`")]
    Unassigned(Atom),
    #[error("atom `{0}` is assigned 0; values must be positive")]
    NonPositive(Atom),
}

/// Value of `f` read as an exponential polynomial, with the default budget.
pub fn eval_arith(f: &Formula, a: &Assignment) -> Result<ArithValue, ArithError> {
    eval_arith_budget(f, a, DEFAULT_DIGIT_BUDGET)
}

pub fn eval_arith_budget(
    f: &Formula,
    a: &Assignment,
    digits: usize,
) -> Result<ArithValue, ArithError> {
    // log2(10) < 3.33
    let max_bits = (digits as u64).saturating_mul(10_000) / 3_011 + 1;
    go_arith(f, a, max_bits)
}

fn go_arith(f: &Formula, a: &Assignment, max_bits: u64) -> Result<ArithValue, ArithError> {
    use ArithValue::*;
    let fits = |v: BigUint| {
        if v.bits() > max_bits {
            Overflow
        } else {
            Value(v)
        }
    };
    Ok(match f {
        Formula::Prop(p) => match a.get(p) {
            None => return Err(ArithError::Unassigned(p.clone())),
            Some(0) => return Err(ArithError::NonPositive(p.clone())),
            Some(v) => Value(BigUint::from(*v)),
        },
        Formula::Disj(x, y) => match (go_arith(x, a, max_bits)?, go_arith(y, a, max_bits)?) {
            (Value(x), Value(y)) => fits(x + y),
            _ => Overflow,
        },
        Formula::Conj(x, y) => match (go_arith(x, a, max_bits)?, go_arith(y, a, max_bits)?) {
            (Value(x), Value(y)) => {
                if x.bits() + y.bits() > max_bits + 1 {
                    Overflow
                } else {
                    fits(x * y)
                }
            }
            _ => Overflow,
        },
        Formula::Impl(x, y) => {
            let base = go_arith(y, a, max_bits)?;
            let exp = go_arith(x, a, max_bits)?;
            match (base, exp) {
                (Value(b), _) if b.is_one() => Value(b),
                (Value(b), Value(e)) => {
                    // bits(b^e) >= e * (bits(b) - 1)
                    let e_small = e
                        .to_u64()
                        .filter(|e| e.saturating_mul(b.bits().saturating_sub(1)) <= max_bits);
                    match e_small.and_then(|e| u32::try_from(e).ok()) {
                        Some(e) => fits(b.pow(e)),
                        None => Overflow,
                    }
                }
                _ => Overflow,
            }
        }
    })
}
