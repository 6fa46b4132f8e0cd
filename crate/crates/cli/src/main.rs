use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod cache;
mod commands;
mod output;

#[derive(Parser, Debug)]
#[command(name = "freeboundary", version, about = "Boundary actions of free groups: gluing relations, K-groups, witnesses")]
pub struct Cli {
    /// Rank of the free group.
    #[arg(long, global = true, default_value_t = 2)]
    pub d: usize,

    /// Words to glue along: comma-separated, `S` for all generators, `none` for no gluing.
    #[arg(long, global = true, default_value = "S")]
    pub relation: String,

    /// Cylinder level for checks that work at one level.
    #[arg(long, global = true)]
    pub level: Option<usize>,

    /// Highest level the K-group computation may reach.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_level: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Directory for cached normal forms.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,

    /// Word length bound for exhaustive verification passes.
    #[arg(long, global = true, default_value_t = 4)]
    pub check_bound: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// K₀ with marked classes and K₁ of the crossed product.
    Kgroup,
    /// Check the explicit identities behind the K-group computation.
    Verify {
        #[arg(value_enum)]
        check: VerifyCheck,
        /// Coefficients n(s) of Σ n(s)·q[s]; missing trailing entries are 0.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Vec<i64>,
    },
    /// Constructive witnesses for density and separation.
    Witness {
        #[arg(value_enum)]
        mode: WitnessMode,
        x: String,
        y: String,
    },
    /// Orbit count of the glued classes for F given by --relation.
    Orbits,
    /// Translate a point and inspect it.
    Act {
        g: String,
        x: String,
        /// Also report the class of the result under this relation.
        #[arg(long)]
        class: Option<String>,
        /// Cylinder functions to evaluate, e.g. `p[ab],q[a]`.
        #[arg(long, value_delimiter = ',')]
        eval: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyCheck {
    Recurrences,
    Obstruction,
    Preimage,
    Sigma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WitnessMode {
    Density,
    Separate,
}

/// Exit status of a completed command.
pub enum Outcome {
    Ok,
    Failed,
    NotStabilized,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Ok(Outcome::NotStabilized) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
