//! `hecke`: command-line front end for Hecke group computations.

mod commands;
mod manifest;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

const GRAMMAR: &str = "\
Numbers are written as expressions: integers, a/b, L (lambda), r or sqrtD \
(square root of the active discriminant), sqrtN or sqrt(N), z, + - * / ^ \
(integer exponents, negative allowed), parentheses and juxtaposition.
Examples: \"3 - 2*L\", \"(L + sqrt14)/2\", \"1/(z^2 - L*z - 3)\".

Exit codes: 0 success, 1 usage or internal error, 2 relations fail, 3 budget exhausted.
RPF_BUDGET (or --budget) overrides search limits, e.g. \"cf_steps=20000,coord_bound=16,height_bits=128\".";

#[derive(Parser, Debug)]
#[command(name = "hecke", version, about = "Exact computations for rational period functions on Hecke groups", after_help = GRAMMAR)]
pub struct Cli {
    /// Print LaTeX instead of JSON.
    #[arg(long, global = true)]
    latex: bool,
    /// Write a run manifest to this path.
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<String>,
    /// Search budget overrides, `key=value` pairs separated by commas.
    #[arg(long, global = true, env = "RPF_BUDGET", value_name = "SPEC")]
    budget: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
pub enum Command {
    /// Describe the field Q(lambda_p).
    Field {
        #[arg(long)]
        p: i64,
    },
    /// Evaluate a word in S, T, U (lowercase letters are inverses).
    Group {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        word: String,
        /// Also apply the element to this point.
        #[arg(long)]
        apply: Option<String>,
    },
    /// Binary quadratic forms over Z[lambda].
    #[command(subcommand)]
    Forms(FormsCommand),
    /// Continued fraction walk and automorphs of hyperbolic points.
    #[command(subcommand)]
    Cfrac(CfracCommand),
    /// Rational period functions.
    #[command(subcommand)]
    Rpf(RpfCommand),
    /// Re-run the command recorded in a manifest and compare output digests.
    Replay {
        #[arg(value_name = "MANIFEST")]
        path: String,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ClassArgs {
    #[arg(long)]
    p: i64,
    /// Discriminant, an element of Z[lambda].
    #[arg(long)]
    disc: String,
}

#[derive(Subcommand, Debug, Serialize)]
pub enum FormsCommand {
    /// List the hyperbolic class cycles of a discriminant.
    Enumerate {
        #[command(flatten)]
        class: ClassArgs,
    },
    /// The irreducible system of poles of one class (1-based index).
    Isp {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long = "class")]
        index: usize,
    },
    /// Whether the union of the ISPs of the given classes is Hecke-symmetric.
    Symmetric {
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long = "classes", value_delimiter = ',', required = true)]
        indices: Vec<usize>,
    },
}

#[derive(Subcommand, Debug, Serialize)]
pub enum CfracCommand {
    /// Preperiod, period and orbit of a point.
    Expand {
        #[arg(long)]
        p: i64,
        #[arg(long, visible_alias = "alpha")]
        x: String,
    },
    /// The primitive attracting stabilizer of a point.
    Automorph {
        #[arg(long)]
        p: i64,
        #[arg(long, visible_alias = "alpha")]
        x: String,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BuildArgs {
    #[arg(long)]
    p: i64,
    #[arg(long)]
    k: u32,
    /// Discriminant of the classes used.
    #[arg(long)]
    disc: Option<String>,
    /// 1 = general shape, 2 = symmetric odd weight, 3 = any-weight pair.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    theorem: Option<u8>,
    /// Build the RPF with a pole only at zero.
    #[arg(long, conflicts_with = "theorem")]
    pole_at_zero: bool,
    /// Class indices (1-based), repeatable.
    #[arg(long = "class")]
    classes: Vec<usize>,
    /// Coefficient per class, repeatable; defaults to 1.
    #[arg(long = "coeff", allow_hyphen_values = true)]
    coeffs: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    c0: Option<String>,
    /// Comma-separated c_1, c_2, ... of the z^{-n} tail.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    tail: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    a0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b1: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct InputArgs {
    /// RPF JSON document as written by `rpf build`.
    #[arg(long = "in", value_name = "PATH", conflicts_with = "expr")]
    input: Option<String>,
    /// A rational function of z instead of a document.
    #[arg(long, requires_all = ["p", "k"])]
    expr: Option<String>,
    #[arg(long)]
    p: Option<i64>,
    #[arg(long)]
    k: Option<u32>,
    /// Discriminant for `r` in --expr.
    #[arg(long)]
    disc: Option<String>,
}

#[derive(Subcommand, Debug, Serialize)]
pub enum RpfCommand {
    Build(BuildArgs),
    /// Check both relations exactly; exit 2 when either fails.
    Verify(InputArgs),
    /// Pole, ISP and symmetry report.
    Analyze(InputArgs),
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let code = commands::run(argv);
    ExitCode::from(code)
}
