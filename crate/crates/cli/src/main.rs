//! `fairdiv`: exact fair division from the command line.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 the requested fair
//! allocation does not exist, 3 refused over a degeneracy or search budget.

mod budget;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fairdiv_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "fairdiv",
    version,
    about = "Fair, Pareto-optimal division with minimal sharing"
)]
pub struct Cli {
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// A fair fPO allocation minimizing the chosen objective.
    Solve(SolveArgs),
    /// Fairness, fPO status and sharing counts of an allocation.
    Check(CheckArgs),
    /// Every consumption graph of an fPO allocation.
    Enumerate(EnumerateArgs),
    /// An allocation every agent values as an exact 1/n split of everything.
    Consensus(ConsensusArgs),
    /// A dominating fPO allocation with an acyclic consumption graph.
    Improve(ImproveArgs),
    /// The degree of degeneracy of the valuations.
    Degeneracy(InputArgs),
    /// Write a generated instance.
    Gen(GenArgs),
    /// Brute-force minimum objective over every support (small instances).
    Oracle(SolveArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Instance JSON file.
    #[arg(short = 'i', long = "input")]
    pub input: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FairnessArg {
    Ef,
    Prop,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Sharings,
    SharedObjects,
    SharedValue,
    Feasible,
}

#[derive(Args, Debug)]
pub struct FairnessArgs {
    #[arg(long, value_enum, default_value_t = FairnessArg::Ef)]
    pub fairness: FairnessArg,
    /// Entitlements as comma-separated numbers summing to 1, e.g. `1/3,2/3`.
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output file (default: standard output).
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub fairness: FairnessArgs,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Sharings)]
    pub objective: ObjectiveArg,
    /// Use the two-agent sorted-ratio algorithm instead of enumeration.
    #[arg(long = "fast-2agent")]
    pub fast_two_agent: bool,
    /// Add approximate decimal copies of the numbers, marked as such.
    #[arg(long)]
    pub decimal: bool,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Allocation JSON file.
    #[arg(short = 'a', long = "allocation")]
    pub allocation: PathBuf,
    #[command(flatten)]
    pub fairness: FairnessArgs,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Drop graphs with more sharings than this.
    #[arg(long)]
    pub max_sharings: Option<usize>,
    /// Print only the number of graphs.
    #[arg(long)]
    pub count_only: bool,
}

#[derive(Args, Debug)]
pub struct ConsensusArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    /// Hand the bundles to agents in a random order drawn from this seed.
    #[arg(long)]
    pub permute_seed: Option<u64>,
    #[arg(long)]
    pub decimal: bool,
}

#[derive(Args, Debug)]
pub struct ImproveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(short = 'a', long = "allocation")]
    pub allocation: PathBuf,
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub decimal: bool,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// One of: random, identical-partition, perturbed-partition,
    /// degeneracy-family, consensus-tightness, identical-goods, fig1-left,
    /// fig1-right.
    pub family: String,
    /// Family parameters, e.g. `random 3 5 -10 10` (agents, objects, value
    /// range), `identical-partition 3,5,8`, `degeneracy-family 4,4,4 20`.
    #[arg(allow_negative_numbers = true)]
    pub params: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::NoFairAllocation) => 2,
        Some(Error::DegeneracyTooHigh { .. } | Error::BudgetExceeded { .. }) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_errors_map_to_exit_codes() {
        assert_eq!(exit_code(&Error::NoFairAllocation.into()), 2);
        let refused = Error::DegeneracyTooHigh {
            degeneracy: 3,
            exponent: 9,
            budget: 4,
        };
        assert_eq!(exit_code(&refused.into()), 3);
        assert_eq!(
            exit_code(&Error::BudgetExceeded { size: 9, budget: 1 }.into()),
            3
        );
        assert_eq!(exit_code(&Error::Json("eof".into()).into()), 1);
        assert_eq!(exit_code(&anyhow::anyhow!("usage")), 1);
    }
}
