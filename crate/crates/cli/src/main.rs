mod commands;
mod input;
mod text;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mahler_core::Error;

/// Exact tools for Mahler equations and k-regular sequences.
#[derive(Parser, Debug)]
#[command(name = "mahler", version)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Equation input: a path, `-` for stdin, or inline JSON.
#[derive(Args, Debug)]
pub struct EqArgs {
    pub input: String,
    /// Required for a bare coefficient list; checked against the equation otherwise.
    #[arg(long)]
    pub k: Option<usize>,
}

/// Where the prefix of `F` comes from when one is needed.
#[derive(Args, Debug)]
pub struct PrefixArgs {
    /// Series file or inline JSON; defaults to the stored or solved prefix.
    #[arg(long)]
    pub series: Option<String>,
    /// Truncation order used when the prefix is solved for.
    #[arg(long, default_value_t = 256)]
    pub order: i64,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct SearchArgs {
    #[arg(long, env = "MAHLER_DEPTH_MAX", default_value_t = 3)]
    pub depth_max: usize,
    #[arg(long, env = "MAHLER_DEG_MAX", default_value_t = 10)]
    pub deg_max: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Basis of truncated Laurent solutions.
    Solve {
        #[command(flatten)]
        eq: EqArgs,
        #[arg(long, default_value_t = 32)]
        order: i64,
    },
    /// Substitutes a series into an equation.
    Verify {
        #[command(flatten)]
        eq: EqArgs,
        #[arg(long)]
        series: String,
    },
    /// Smallest equation fitting a series prefix.
    Guess {
        series: String,
        #[arg(long)]
        k: usize,
        #[arg(long, env = "MAHLER_DEPTH_MAX", default_value_t = 2)]
        depth_max: usize,
        #[arg(long, env = "MAHLER_DEG_MAX", default_value_t = 4)]
        deg_max: usize,
    },
    /// Cartier sections of a series.
    Cartier {
        series: String,
        #[arg(long)]
        k: usize,
        /// Only this section; all `k` otherwise.
        #[arg(long)]
        digit: Option<usize>,
    },
    /// Values of a linear representation.
    RepEval {
        input: String,
        #[arg(long, default_value_t = 16)]
        count: u64,
    },
    /// Linear representation from the Cartier closure.
    RepFromEq {
        #[command(flatten)]
        eq: EqArgs,
        #[command(flatten)]
        prefix: PrefixArgs,
        #[arg(long, default_value_t = 32)]
        max_dim: usize,
        #[arg(long, default_value_t = 32)]
        max_depth: usize,
    },
    /// Mahler equation of a linear representation.
    EqFromRep { input: String },
    /// Moves non-coprime root-of-unity zeros out of `a_0`.
    Normalize {
        #[command(flatten)]
        eq: EqArgs,
    },
    /// Bounded search for an equation with `a_0 = 1`.
    BeckerSearch {
        series: String,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        bounds: SearchArgs,
    },
    /// Regularity certificate.
    Certify {
        #[command(flatten)]
        eq: EqArgs,
        #[command(flatten)]
        prefix: PrefixArgs,
        #[arg(long, default_value_t = 2)]
        m_max: usize,
    },
    /// Equation for `F` with a regular-friendly `a_0`.
    Witness {
        #[command(flatten)]
        eq: EqArgs,
        #[command(flatten)]
        prefix: PrefixArgs,
        #[command(flatten)]
        bounds: SearchArgs,
    },
    /// `F = J / prod Gamma(z^{k^j})`.
    Decompose {
        #[command(flatten)]
        eq: EqArgs,
        #[command(flatten)]
        prefix: PrefixArgs,
    },
    /// Pole orders of the matrix products along a cyclotomic factor.
    PoleProfile {
        #[command(flatten)]
        eq: EqArgs,
        #[arg(long, default_value_t = 1)]
        root_order: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// Reference examples.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Checks that files are in canonical form.
    Roundtrip {
        #[arg(required = true)]
        paths: Vec<String>,
    },
    /// Solve, normalize, search, witness and certify in one report.
    Pipeline {
        #[command(flatten)]
        eq: EqArgs,
        #[command(flatten)]
        prefix: PrefixArgs,
        #[command(flatten)]
        bounds: SearchArgs,
        #[arg(long, default_value_t = 2)]
        m_max: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum CorpusAction {
    List,
    Emit { name: String },
    /// Rewrites the golden files.
    Regenerate {
        #[arg(long)]
        dir: String,
    },
    /// Compares the golden files with freshly computed items.
    Check {
        #[arg(long)]
        dir: String,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_MALFORMED: u8 = 3;
pub const EXIT_INVARIANT: u8 = 4;

impl CliError {
    pub fn usage(m: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: m.into() }
    }

    pub fn malformed(m: impl Into<String>) -> Self {
        CliError { code: EXIT_MALFORMED, message: m.into() }
    }

    pub fn invariant(m: impl Into<String>) -> Self {
        CliError { code: EXIT_INVARIANT, message: m.into() }
    }

    /// Library errors raised while processing user data.
    pub fn from_input(e: Error) -> Self {
        e.into()
    }

    pub fn in_stage(self, stage: &str) -> Self {
        CliError {
            code: self.code,
            message: format!("stage {stage}: {}", self.message),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => CliError::invariant(e.to_string()),
            _ => CliError::malformed(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(&cli.command) {
        Ok(out) => {
            let rendered = match cli.format {
                Format::Json => mahler_core::json::to_canonical(&out.doc),
                Format::Text => Ok(out.text.unwrap_or_else(|| text::render(&out.doc))),
            };
            match rendered {
                Ok(s) => {
                    print!("{s}");
                    ExitCode::from(out.code)
                }
                Err(e) => report(CliError::from(e)),
            }
        }
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> ExitCode {
    eprintln!("error: {}", e.message);
    ExitCode::from(e.code)
}
