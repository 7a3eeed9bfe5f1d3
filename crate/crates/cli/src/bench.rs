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

//! Table-shaped benchmark harness.

use std::io;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{anyhow, Context};
use rayon::prelude::*;
use qxmap::{extract_skeleton, CouplingMap, QuantumCircuit, SolveError, StrategyError};

use crate::common::{load_circuit, mode_points, oracle_cost, run_mode, CmdResult, Mode, RunError};

pub const HEADER: [&str; 19] = [
    "benchmark",
    "n",
    "original_cost",
    "c_min",
    "t_min_s",
    "c_subsets",
    "t_subsets_s",
    "Gp_disjoint",
    "c_disjoint",
    "d_disjoint",
    "t_disjoint_s",
    "Gp_odd",
    "c_odd",
    "d_odd",
    "t_odd_s",
    "Gp_triangle",
    "c_triangle",
    "d_triangle",
    "t_triangle_s",
];

/// One cell pair of the table: the cost (or a marker) and the runtime.
struct Cell {
    cost: Result<u64, &'static str>,
    seconds: String,
}

fn marker(e: &RunError) -> &'static str {
    match e {
        RunError::Solve(SolveError::Timeout) => "TO",
        RunError::Solve(SolveError::Infeasible(_)) => "INF",
        RunError::Strategy(StrategyError::NoTriangle(_)) => "NA",
        _ => "ERR",
    }
}

fn cost_text(c: &Result<u64, &'static str>) -> String {
    match c {
        Ok(v) => v.to_string(),
        Err(m) => m.to_string(),
    }
}

struct Outcome {
    row: Vec<String>,
    oracle_mismatch: bool,
}

fn bench_one(
    circuit: &QuantumCircuit,
    name: &str,
    cm: &CouplingMap,
    timeout: Duration,
    oracle_check: bool,
) -> Outcome {
    let mut oracle_mismatch = false;
    let mut cell = |mode: Mode| {
        let start = std::time::Instant::now();
        let result = run_mode(circuit, cm, mode, &[], timeout);
        let seconds = format!("{:.3}", start.elapsed().as_secs_f64());
        let cost = match &result {
            Ok(run) => {
                if oracle_check && matches!(oracle_cost(run, cm, mode), Some(Some(c)) if c != run.solution.cost)
                {
                    eprintln!("error: {name}: {mode} cost disagrees with enumeration");
                    oracle_mismatch = true;
                }
                Ok(run.solution.cost)
            }
            Err(e) => {
                if marker(e) == "ERR" {
                    eprintln!("warning: {name}: {mode}: {e}");
                }
                Err(marker(e))
            }
        };
        Cell { cost, seconds }
    };
    let exact = cell(Mode::Exact);
    let subsets = cell(Mode::ExactSubsets);
    let strategies: Vec<(Mode, Cell)> = [Mode::Disjoint, Mode::Odd, Mode::Triangle]
        .into_iter()
        .map(|m| (m, cell(m)))
        .collect();

    let skeleton = extract_skeleton(circuit);
    let mut row = vec![
        name.to_string(),
        circuit.num_qubits().to_string(),
        circuit.original_cost().to_string(),
        cost_text(&exact.cost),
        exact.seconds.clone(),
        cost_text(&subsets.cost),
        subsets.seconds,
    ];
    for (mode, c) in strategies {
        let gp = if skeleton.is_empty() {
            "0".to_string()
        } else {
            match mode_points(mode, &[], &skeleton, cm) {
                Ok(p) => p.len().to_string(),
                Err(e) => marker(&e).to_string(),
            }
        };
        let d = match (&exact.cost, &c.cost) {
            (Ok(min), Ok(v)) => (*v as i64 - *min as i64).to_string(),
            _ => String::new(),
        };
        row.extend([gp, cost_text(&c.cost), d, c.seconds]);
    }
    Outcome {
        row,
        oracle_mismatch,
    }
}

fn qasm_files(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "qasm"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn bench(
    dir: &Path,
    arch: &str,
    csv_path: Option<PathBuf>,
    timeout: u64,
    oracle_check: bool,
) -> CmdResult {
    let cm = crate::common::load_arch(arch)?;
    let files = qasm_files(dir)?;
    let timeout = Duration::from_secs(timeout);
    let outcomes: Vec<Outcome> = files
        .par_iter()
        .map(|path| {
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            match load_circuit(path) {
                Ok(c) => bench_one(&c, &name, &cm, timeout, oracle_check),
                Err(e) => {
                    eprintln!("warning: skipping {}: {e:#}", path.display());
                    let mut row = vec![String::new(); HEADER.len()];
                    row[0] = name;
                    row[1] = "ERR".into();
                    Outcome {
                        row,
                        oracle_mismatch: false,
                    }
                }
            }
        })
        .collect();

    let sink: Box<dyn io::Write> = match &csv_path {
        Some(p) => Box::new(
            std::fs::File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
        ),
        None => Box::new(io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(HEADER)?;
    for o in &outcomes {
        w.write_record(&o.row)?;
    }
    w.flush()?;
    if outcomes.iter().any(|o| o.oracle_mismatch) {
        return Err(anyhow!("solver and enumeration disagree on at least one benchmark").into());
    }
    Ok(())
}
