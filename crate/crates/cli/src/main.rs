mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or input syntax; exit code 2.
    Usage(String),
    /// The mathematics refused the input, or output could not be written; exit code 1.
    Domain(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

/// Domain error tagged with the innermost error variant, e.g. `[SingularCurve]`.
pub fn domain<E: std::fmt::Display + std::fmt::Debug>(e: E) -> CliError {
    CliError::Domain(format!("{e} [{}]", variant_name(&format!("{e:?}"))))
}

/// Innermost variant name of a derived `Debug` rendering such as
/// `Curve(SingularCurve { a: 0, b: 0, p: 5 })`.
fn variant_name(debug: &str) -> &str {
    let mut rest = debug;
    loop {
        let end = rest.find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(rest.len());
        let name = &rest[..end];
        match rest[end..].strip_prefix('(') {
            Some(inner) if inner.starts_with(|c: char| c.is_ascii_uppercase()) => rest = inner,
            _ => return name,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "eclift", version, about = "Torsion lattices of CM elliptic curves, lifted onto Hopf tori")]
pub struct Cli {
    /// File of `key = value` defaults; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Directory for output files.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Largest field order for brute-force point counts.
    #[arg(long, global = true, value_name = "Q")]
    pub oracle_limit: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CurveArgs {
    /// Coefficient A in y^2 = x^3 + Ax + B.
    #[arg(short = 'a', allow_negative_numbers = true)]
    pub a: Option<i64>,
    /// Coefficient B.
    #[arg(short = 'b', allow_negative_numbers = true)]
    pub b: Option<i64>,
    /// Prime p >= 5.
    #[arg(short = 'p')]
    pub p: Option<u64>,
    /// Curve as an equation, e.g. "y^2 = x^3 + 3x".
    #[arg(long, conflicts_with_all = ["a", "b"])]
    pub curve: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistArg {
    Squared,
    Unsquared,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frobenius data and fixed-lattice tower, with point-count cross-checks.
    Analyze {
        #[command(flatten)]
        curve: CurveArgs,
        /// Highest level.
        #[arg(short = 'n')]
        n: Option<u32>,
    },
    /// Fixed lattice of one level: SVG of the fundamental domain and JSON.
    Lattice {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(short = 'n')]
        n: Option<u32>,
    },
    /// Hopf-torus mesh with torsion markers and Cayley edges.
    Embed {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(short = 'n')]
        n: Option<u32>,
        /// Number of wobbles of the base curve.
        #[arg(long)]
        k: Option<u32>,
        /// Mesh resolution along the fibers.
        #[arg(long)]
        ns: Option<usize>,
        /// Mesh resolution along the base curve.
        #[arg(long)]
        nt: Option<usize>,
        /// Unit quaternion w,x,y,z applied before projection.
        #[arg(long, value_name = "W,X,Y,Z", allow_hyphen_values = true)]
        rotation: Option<String>,
        #[arg(long, value_enum)]
        twist: Option<TwistArg>,
    },
    /// Multiplicative group of F_{p^n} on the unit circle.
    Mulgrp {
        #[arg(short = 'p')]
        p: Option<u64>,
        #[arg(short = 'n')]
        n: Option<u32>,
    },
    /// Circles fixed by complex conjugation on C/(Z + tau Z).
    RealLocus {
        /// Lattice parameter re,im; otherwise taken from the curve.
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
        tau: Option<String>,
        #[command(flatten)]
        curve: CurveArgs,
    },
    /// Exact check that the explicit lift of Frobenius reduces correctly mod 5.
    VerifyFrobeniusLift,
    /// Run the built-in acceptance checks.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
