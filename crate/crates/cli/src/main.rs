// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod bench;
mod commands;
mod common;

use common::Mode;

/// Exact mapping of quantum circuits to coupling-constrained devices with
/// the fewest inserted SWAP and H gates.
///
/// Exit codes: 0 success, 1 error or failed verification, 2 no valid
/// mapping exists, 3 time limit exceeded.
#[derive(Parser)]
#[command(name = "qxmap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Target {
    /// Builtin architecture (`ibm-qx4`) or path to a JSON coupling map.
    #[arg(long, default_value = "ibm-qx4")]
    pub arch: String,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Permutation points for `--mode custom`, 1-based CNOT positions.
    #[arg(long, value_delimiter = ',')]
    pub points: Vec<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Map a circuit and write the mapped OpenQASM.
    Map {
        input: PathBuf,
        #[command(flatten)]
        target: Target,
        /// Mapped circuit destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Solution JSON destination; defaults to `<out>.sol.json`.
        #[arg(long)]
        solution: Option<PathBuf>,
        /// Seconds allowed for the search.
        #[arg(long, default_value_t = 600, value_parser = clap::value_parser!(u64).range(1..))]
        timeout: u64,
        #[arg(long)]
        jobs: Option<usize>,
        /// Recompute the minimum by exhaustive enumeration and compare.
        #[arg(long)]
        oracle_check: bool,
    },
    /// Write the weighted MaxSAT instance and its variable map.
    Encode {
        input: PathBuf,
        #[command(flatten)]
        target: Target,
        /// Restrict to these physical qubits (comma separated).
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
        #[arg(long)]
        out: PathBuf,
        /// Variable map destination; defaults to `<out>.vars`.
        #[arg(long)]
        vars: Option<PathBuf>,
    },
    /// Turn a MaxSAT model back into a mapped circuit.
    Decode {
        input: PathBuf,
        #[arg(long, default_value = "ibm-qx4")]
        arch: String,
        #[arg(long)]
        vars: PathBuf,
        /// Solver output with `v` lines.
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Check a mapped circuit against the original and its solution.
    Verify {
        original: PathBuf,
        mapped: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, default_value = "ibm-qx4")]
        arch: String,
    },
    /// Map every `.qasm` file of a directory in all modes and write a CSV.
    Bench {
        dir: PathBuf,
        #[arg(long, default_value = "ibm-qx4")]
        arch: String,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Seconds allowed per mode and benchmark.
        #[arg(long, default_value_t = 600, value_parser = clap::value_parser!(u64).range(1..))]
        timeout: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        oracle_check: bool,
    },
}

fn configure_pool(jobs: Option<usize>) {
    if let Some(j) = jobs {
        // only fails if already initialized, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Map {
            input,
            target,
            out,
            solution,
            timeout,
            jobs,
            oracle_check,
        } => {
            configure_pool(jobs);
            commands::map(&input, &target, out, solution, timeout, oracle_check)
        }
        Command::Encode {
            input,
            target,
            subset,
            out,
            vars,
        } => commands::encode(&input, &target, subset, &out, vars),
        Command::Decode {
            input,
            arch,
            vars,
            model,
            out,
            solution,
        } => commands::decode(&input, &arch, &vars, &model, out, solution),
        Command::Verify {
            original,
            mapped,
            solution,
            arch,
        } => commands::verify(&original, &mapped, &solution, &arch),
        Command::Bench {
            dir,
            arch,
            csv,
            timeout,
            jobs,
            oracle_check,
        } => {
            configure_pool(jobs);
            bench::bench(&dir, &arch, csv, timeout, oracle_check)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
