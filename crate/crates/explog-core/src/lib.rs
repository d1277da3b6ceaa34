//! Exp-log normal forms of simple types with sums, products and arrows, a
//! type isomorphism heuristic built on them, and a normalizer from lambda
//! terms to compact terms at normal-form type (and back).

pub mod compact;
pub mod enf;
pub mod fixtures;
pub mod gen;
pub mod iso;
pub mod lambda;
pub mod nbe;
pub mod syntax;

pub use compact::{
    parse_compact, parse_compact_term, print_pretty, print_raw, typecheck_compact, BaseTerm,
    CompactTerm, CompactTypeError, ProductTerm,
};
pub use enf::{
    check_enf_grammar, enf, enf_to_formula, eval_arith, ArithValue, Assignment, Base, Cnf, Dnf, Enf,
};
pub use iso::{decide_iso, enf_ac_equal, IsoMethod, IsoVerdict};
pub use nbe::{ebn, nbe, NbeError};
pub use syntax::{
    parse_term, parse_type, print_term, print_type, typecheck_nd, Atom, Formula, NdTerm,
    SyntaxError, TypeError,
};
