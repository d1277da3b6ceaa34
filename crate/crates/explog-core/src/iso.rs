//! Type isomorphism heuristic: normal forms compared up to reordering of
//! sums and products, with arithmetic evaluation to refute.

use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enf::{enf, eval_arith, ArithValue, Assignment, Base, Cnf, Dnf, Enf};
use crate::syntax::{Atom, Formula};

pub const DEFAULT_TRIALS: usize = 32;
pub const DEFAULT_SEED: u64 = 0;

/// Largest value tried for an atom.
pub const MAX_ATOM_VALUE: u64 = 3;

/// A normal form with summands and factors sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Canon {
    Prod(Vec<(Canon, CanonBase)>),
    Sum(Vec<Canon>),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum CanonBase {
    Atom(Atom),
    Sum(Vec<Canon>),
}

fn canon_cnf(c: &Cnf) -> Canon {
    let mut fs: Vec<_> = c
        .factors()
        .into_iter()
        .map(|(arg, head)| (canon_cnf(arg), canon_base(head)))
        .collect();
    fs.sort();
    Canon::Prod(fs)
}

fn canon_dnf(d: &Dnf) -> Vec<Canon> {
    let mut ss: Vec<_> = d.summands().into_iter().map(canon_cnf).collect();
    ss.sort();
    ss
}

fn canon_base(b: &Base) -> CanonBase {
    match b {
        Base::Prp(p) => CanonBase::Atom(p.clone()),
        Base::Bd(d) => CanonBase::Sum(canon_dnf(d)),
    }
}

fn canon(e: &Enf) -> Canon {
    match e {
        Enf::CnfE(c) => canon_cnf(c),
        Enf::DnfE(d) => Canon::Sum(canon_dnf(d)),
    }
}

/// Equality of normal forms up to the order of summands and factors, at
/// every depth.
pub fn enf_ac_equal(e1: &Enf, e2: &Enf) -> bool {
    canon(e1) == canon(e2)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IsoMethod {
    EnfEqual,
    EnfAcEqual,
}

impl fmt::Display for IsoMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IsoMethod::EnfEqual => "enf-equal",
            IsoMethod::EnfAcEqual => "enf-ac-equal",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IsoVerdict {
    Isomorphic(IsoMethod),
    NotIsomorphic {
        witness: Assignment,
        lhs_value: BigUint,
        rhs_value: BigUint,
    },
    Unknown,
}

impl IsoVerdict {
    /// Re-evaluates a refutation at its witness.
    pub fn verify_witness(&self, f1: &Formula, f2: &Formula) -> bool {
        match self {
            IsoVerdict::NotIsomorphic {
                witness,
                lhs_value,
                rhs_value,
            } => {
                let l = eval_arith(f1, witness);
                let r = eval_arith(f2, witness);
                matches!((l, r), (Ok(ArithValue::Value(l)), Ok(ArithValue::Value(r)))
                    if &l == lhs_value && &r == rhs_value && l != r)
            }
            _ => false,
        }
    }
}

impl fmt::Display for IsoVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoVerdict::Isomorphic(m) => write!(f, "isomorphic ({m})"),
            IsoVerdict::NotIsomorphic {
                witness,
                lhs_value,
                rhs_value,
            } => {
                let mut vs: Vec<_> = witness.iter().collect();
                vs.sort();
                let vs: Vec<String> = vs.iter().map(|(a, v)| format!("{a}={v}")).collect();
                write!(
                    f,
                    "not isomorphic: {} gives {lhs_value} ≠ {rhs_value}",
                    vs.join(", ")
                )
            }
            IsoVerdict::Unknown => f.write_str("unknown"),
        }
    }
}

fn union_atoms(f1: &Formula, f2: &Formula) -> Vec<Atom> {
    let mut atoms = f1.atoms();
    atoms.extend(f2.atoms());
    atoms.sort();
    atoms.dedup();
    atoms
}

/// Compares the arithmetic values of both types at `a`, if neither
/// overflows.
fn refute(f1: &Formula, f2: &Formula, a: &Assignment) -> Option<IsoVerdict> {
    match (eval_arith(f1, a), eval_arith(f2, a)) {
        (Ok(ArithValue::Value(l)), Ok(ArithValue::Value(r))) if l != r => {
            Some(IsoVerdict::NotIsomorphic {
                witness: a.clone(),
                lhs_value: l,
                rhs_value: r,
            })
        }
        _ => None,
    }
}

/// Decides isomorphism where it can. `trials` assignments are sampled
/// after the constant assignment 2, which is always tried first.
pub fn decide_iso(f1: &Formula, f2: &Formula, trials: usize, seed: u64) -> IsoVerdict {
    let (e1, e2) = (enf(f1), enf(f2));
    if e1 == e2 {
        return IsoVerdict::Isomorphic(IsoMethod::EnfEqual);
    }
    if enf_ac_equal(&e1, &e2) {
        return IsoVerdict::Isomorphic(IsoMethod::EnfAcEqual);
    }
    let atoms = union_atoms(f1, f2);
    let twos: Assignment = atoms.iter().map(|a| (a.clone(), 2)).collect();
    if let Some(v) = refute(f1, f2, &twos) {
        return v;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let a: Assignment = atoms
            .iter()
            .map(|p| (p.clone(), rng.gen_range(1..=MAX_ATOM_VALUE)))
            .collect();
        if let Some(v) = refute(f1, f2, &a) {
            return v;
        }
    }
    IsoVerdict::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type;

    fn t(s: &str) -> Formula {
        parse_type(s).unwrap()
    }

    fn iso(a: &str, b: &str) -> IsoVerdict {
        decide_iso(&t(a), &t(b), DEFAULT_TRIALS, DEFAULT_SEED)
    }

    #[test]
    fn ac_equality() {
        assert!(enf_ac_equal(&enf(&t("p+q")), &enf(&t("q+p"))));
        assert!(enf_ac_equal(&enf(&t("p->q->r")), &enf(&t("p*q->r"))));
        assert!(!enf_ac_equal(&enf(&t("p")), &enf(&t("q"))));
        assert!(!enf_ac_equal(&enf(&t("p*p")), &enf(&t("p"))));
    }

    #[test]
    fn verdicts() {
        assert_eq!(iso("p", "p"), IsoVerdict::Isomorphic(IsoMethod::EnfEqual));
        assert_eq!(
            iso("p->q->r", "p*q->r"),
            IsoVerdict::Isomorphic(IsoMethod::EnfAcEqual)
        );
        let v = iso("p->p", "p");
        assert_eq!(v.to_string(), "not isomorphic: p=2 gives 4 ≠ 2");
        assert!(v.verify_witness(&t("p->p"), &t("p")));
        let v = iso("p+q", "p*q");
        assert!(matches!(v, IsoVerdict::NotIsomorphic { .. }));
        assert!(v.verify_witness(&t("p+q"), &t("p*q")));
    }

    #[test]
    fn sampling_is_deterministic() {
        // equal at p=q=2, so the sampled assignments decide
        let (a, b) = (t("p*p"), t("p*q"));
        let v1 = decide_iso(&a, &b, 8, 7);
        assert_eq!(v1, decide_iso(&a, &b, 8, 7));
        assert!(v1.verify_witness(&a, &b));
    }

    #[test]
    fn unknown_is_reachable() {
        // towers overflow at p >= 2 and are 1 at p = 1
        let mut tower = t("p->p");
        for _ in 0..3 {
            tower = Formula::imp(tower.clone(), tower);
        }
        let doubled = Formula::conj(tower.clone(), tower.clone());
        assert_eq!(decide_iso(&tower, &doubled, 16, 1), IsoVerdict::Unknown);
    }
}
