use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use explog_core::compact::{parse_compact_term, print_pretty, print_raw};
use explog_core::enf::{check_enf_grammar, enf, enf_to_formula};
use explog_core::iso::{decide_iso, IsoVerdict, DEFAULT_SEED, DEFAULT_TRIALS};
use explog_core::nbe::{ebn, nbe, NbeError};
use explog_core::syntax::{parse_term, parse_type, print_term, SyntaxError};

const OK: u8 = 0;
const DISTINCT: u8 = 1;
const UNKNOWN: u8 = 2;
const USER_ERROR: u8 = 3;
const INTERNAL: u8 = 4;

/// Normal forms of types with sums, and normalization of lambda terms to
/// compact terms.
#[derive(Parser, Debug)]
#[command(name = "explog", version)]
struct Cli {
    /// Read the positional arguments from a file, one per non-empty line.
    #[arg(long, global = true, value_name = "PATH")]
    file: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print the exp-log normal form of a type.
    Enf { ty: Option<String> },
    /// Check whether two types are isomorphic.
    Iso(IsoArgs),
    /// Normalize a closed term at a type to a compact term.
    Normalize {
        term: Option<String>,
        ty: Option<String>,
        /// Print in the raw compact syntax.
        #[arg(long)]
        raw: bool,
    },
    /// Compare two terms by their normal forms.
    Equal {
        term1: Option<String>,
        term2: Option<String>,
        ty: Option<String>,
    },
    /// Convert a compact term (raw syntax) back to a lambda term.
    Reverse {
        compact: Option<String>,
        ty: Option<String>,
    },
}

#[derive(Args, Debug)]
struct IsoArgs {
    ty1: Option<String>,
    ty2: Option<String>,
    /// Number of random assignments to try.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Nbe(#[from] NbeError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

struct Outcome {
    lines: Vec<String>,
    code: u8,
}

impl Outcome {
    fn line(s: impl Into<String>, code: u8) -> Outcome {
        Outcome {
            lines: vec![s.into()],
            code,
        }
    }
}

/// Fills the positional slots from `--file` when given.
fn inputs<const N: usize>(
    file: &Option<PathBuf>,
    given: [Option<String>; N],
    names: [&str; N],
) -> Result<[String; N], CliError> {
    let mut vals = given;
    if let Some(path) = file {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        for v in vals.iter_mut().filter(|v| v.is_none()) {
            *v = lines.next().map(str::to_string);
        }
    }
    let mut out: [String; N] = std::array::from_fn(|_| String::new());
    for (i, v) in vals.into_iter().enumerate() {
        out[i] = v.ok_or_else(|| CliError::Usage(format!("missing argument <{}>", names[i])))?;
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let file = &cli.file;
    match cli.cmd {
        Cmd::Enf { ty } => {
            let [ty] = inputs(file, [ty], ["TY"])?;
            let f = parse_type(&ty)?;
            let e = enf_to_formula(&enf(&f))
                .unwrap_or_else(|err| panic!("internal invariant violated: {err}"));
            assert!(
                check_enf_grammar(&e),
                "internal invariant violated: output outside the grammar"
            );
            Ok(Outcome::line(e.to_string(), OK))
        }
        Cmd::Iso(a) => {
            let [t1, t2] = inputs(file, [a.ty1, a.ty2], ["TY1", "TY2"])?;
            if a.trials == 0 {
                return Err(CliError::Usage("--trials must be at least 1".into()));
            }
            let (f1, f2) = (parse_type(&t1)?, parse_type(&t2)?);
            let v = decide_iso(&f1, &f2, a.trials, a.seed);
            let code = match v {
                IsoVerdict::Isomorphic(_) => OK,
                IsoVerdict::NotIsomorphic { .. } => DISTINCT,
                IsoVerdict::Unknown => UNKNOWN,
            };
            Ok(Outcome::line(v.to_string(), code))
        }
        Cmd::Normalize { term, ty, raw } => {
            let [term, ty] = inputs(file, [term, ty], ["TERM", "TY"])?;
            let f = parse_type(&ty)?;
            let p = nbe(&parse_term(&term)?, &f)?;
            let s = if raw { print_raw(&p) } else { print_pretty(&p) };
            Ok(Outcome::line(s, OK))
        }
        Cmd::Equal { term1, term2, ty } => {
            let [t1, t2, ty] = inputs(file, [term1, term2, ty], ["TERM1", "TERM2", "TY"])?;
            let f = parse_type(&ty)?;
            let p1 = nbe(&parse_term(&t1)?, &f)?;
            let p2 = nbe(&parse_term(&t2)?, &f)?;
            Ok(if p1 == p2 {
                Outcome::line("equal", OK)
            } else {
                Outcome::line("not proven equal", UNKNOWN)
            })
        }
        Cmd::Reverse { compact, ty } => {
            let [compact, ty] = inputs(file, [compact, ty], ["COMPACT", "TY"])?;
            let f = parse_type(&ty)?;
            let p = parse_compact_term(&compact)?;
            Ok(Outcome::line(print_term(&ebn(&p, &f)?), OK))
        }
    }
}

fn panic_message(e: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = e.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = e.downcast_ref::<String>() {
        s.clone()
    } else {
        "unknown panic".to_string()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USER_ERROR } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    panic::set_hook(Box::new(|_| {}));
    // normalization recurses deeply on large inputs
    let worker = std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(move || run(cli))
        .expect("spawn worker thread");
    match worker.join() {
        Ok(Ok(out)) => {
            for l in out.lines {
                println!("{l}");
            }
            ExitCode::from(out.code)
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(USER_ERROR)
        }
        Err(p) => {
            eprintln!("internal error: {}", panic_message(&*p));
            ExitCode::from(INTERNAL)
        }
    }
}
