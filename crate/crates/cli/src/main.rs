use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod inputs;
mod run;

#[derive(Parser, Debug)]
#[command(
    name = "cbm",
    version,
    about = "Contextual behavioural metrics over metric transition systems"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Process LTS files, merged (comma separated). Bundled fixture names work too.
    #[arg(long, global = true, value_delimiter = ',')]
    pub lts: Vec<String>,

    /// MLTS files, merged (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    pub mlts: Vec<String>,

    /// Built-in quantale name or a `.q` table file; overrides the input files.
    #[arg(long, global = true)]
    pub quantale: Option<String>,

    /// Immediate distance policy; overrides the LTS files.
    #[arg(long, global = true)]
    pub policy: Option<Policy>,

    /// Bound overrides, `key=value,...`. Defaults come from the file named by CBM_BOUNDS.
    #[arg(long, global = true)]
    pub bounds: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    Canonical,
    CommonAction,
    Liberal,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Law suites for the quantale, the immediate distance and the MLTS closure.
    Validate {
        /// Largest subset size for the lattice laws.
        #[arg(long, default_value_t = 3)]
        max_subset: usize,
    },
    /// Contextual distance between two process terms.
    Metric {
        p: String,
        q: String,
        /// Add a characteristic state per process pair so the distance is exact.
        #[arg(long)]
        exact: bool,
    },
    /// Parametrized bisimilarity `p ~_s q`.
    Check { p: String, q: String, s: String },
    /// MLTS order `s ≼ t`.
    Order { s: String, t: String },
    /// Behavioural metric tables and their CBM agreement.
    Behavioural {
        #[arg(long, value_enum, default_value_t = Style::Both)]
        style: Style,
    },
    /// Compositionality bound of an operator: restrict:<l>, prefix:<l>, sum, par, bang.
    Compose {
        operator: String,
        /// Argument candidates as process terms (comma separated); default: every base state.
        #[arg(long, value_delimiter = ',')]
        candidates: Vec<String>,
        /// Distances as MLTS terms (comma separated); default: the reachable universe.
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        /// Also compute the bound literally from exact distances and compare.
        #[arg(long)]
        literal: bool,
    },
    /// Statistics of the bounded MLTS closure.
    Closure,
    /// Solver family against the brute-force oracle.
    Oracle {
        /// Random instances to run when no --lts/--mlts is given.
        #[arg(long, default_value_t = 20)]
        instances: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    PerMove,
    Hausdorff,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(run::exit_code(&e))
        }
    }
}
