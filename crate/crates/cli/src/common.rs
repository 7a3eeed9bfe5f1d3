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

//! Shared plumbing: architecture lookup, mapping modes and exit codes.

use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context};
use clap::ValueEnum;
use qxmap::strategies::PermutationPolicy;
use qxmap::{
    connected_subsets, extract_skeleton, points_all, solve_exact_with, solve_with_subsets_with,
    CnotSkeleton, CouplingMap, Limits, MappingSolution, PointSet, QuantumCircuit, SolveError,
    StrategyError,
};

/// Process exit codes.
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_TIMEOUT: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: EXIT_FAILURE,
            error: e.into(),
        }
    }
}

pub type CmdResult = Result<(), Failure>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Every CNOT after the first is a permutation point, all device qubits.
    Exact,
    /// Every point, best connected subset of n physical qubits.
    ExactSubsets,
    Disjoint,
    Odd,
    Triangle,
    /// Points given by --points, on connected subsets.
    Custom,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::ExactSubsets => "exact-subsets",
            Mode::Disjoint => "disjoint",
            Mode::Odd => "odd",
            Mode::Triangle => "triangle",
            Mode::Custom => "custom",
        }
    }

    /// Whether the mode searches connected subsets rather than the whole
    /// device.
    pub fn uses_subsets(self) -> bool {
        self != Mode::Exact
    }

    pub fn policy(self, custom: &[usize]) -> PermutationPolicy {
        match self {
            Mode::Exact | Mode::ExactSubsets => PermutationPolicy::AllGates,
            Mode::Disjoint => PermutationPolicy::DisjointQubits,
            Mode::Odd => PermutationPolicy::OddGates,
            Mode::Triangle => PermutationPolicy::QubitTriangle,
            Mode::Custom => PermutationPolicy::Custom(custom.iter().copied().collect()),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A builtin name such as `ibm-qx4`, or a path to a JSON coupling map.
pub fn load_arch(spec: &str) -> anyhow::Result<CouplingMap> {
    if let Some(cm) = CouplingMap::builtin(spec) {
        return Ok(cm);
    }
    let text = std::fs::read_to_string(spec)
        .with_context(|| format!("`{spec}` is neither a builtin architecture nor a readable file"))?;
    Ok(CouplingMap::from_json(&text)?)
}

pub fn load_circuit(path: &Path) -> anyhow::Result<QuantumCircuit> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let program =
        qxmap::parse_qasm(&text).with_context(|| format!("in {}", path.display()))?;
    for w in &program.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(program.circuit)
}

/// Result of one mapping run.
pub struct Run {
    pub skeleton: CnotSkeleton,
    pub points: PointSet,
    pub solution: MappingSolution,
    pub elapsed: Duration,
}

#[derive(Debug)]
pub enum RunError {
    Strategy(StrategyError),
    Solve(SolveError),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Strategy(e) => e.fmt(f),
            RunError::Solve(e) => e.fmt(f),
        }
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        let code = match &e {
            RunError::Strategy(StrategyError::NoTriangle(_)) => EXIT_INFEASIBLE,
            RunError::Solve(SolveError::Infeasible(_)) => EXIT_INFEASIBLE,
            RunError::Solve(SolveError::Timeout) => EXIT_TIMEOUT,
            _ => EXIT_FAILURE,
        };
        Failure {
            code,
            error: anyhow!(e),
        }
    }
}

/// Permutation points of `mode` for `skeleton`.
pub fn mode_points(
    mode: Mode,
    custom: &[usize],
    skeleton: &CnotSkeleton,
    cm: &CouplingMap,
) -> Result<PointSet, RunError> {
    mode.policy(custom)
        .points(skeleton, cm)
        .map_err(RunError::Strategy)
}

/// Maps `circuit` in the given mode within `timeout`.
pub fn run_mode(
    circuit: &QuantumCircuit,
    cm: &CouplingMap,
    mode: Mode,
    custom: &[usize],
    timeout: Duration,
) -> Result<Run, RunError> {
    let start = Instant::now();
    let skeleton = extract_skeleton(circuit);
    let n = skeleton.n;
    if skeleton.is_empty() {
        // nothing to route; keep the first subset the mode would search
        let subset = if mode.uses_subsets() {
            connected_subsets(cm, n)
                .into_iter()
                .next()
                .ok_or(RunError::Solve(SolveError::NoConnectedSubset(n)))?
        } else {
            cm.all_qubits()
        };
        if subset.len() < n {
            return Err(RunError::Solve(SolveError::Arch(
                qxmap::ArchError::TooFewQubits {
                    logical: n,
                    physical: subset.len(),
                },
            )));
        }
        return Ok(Run {
            solution: MappingSolution::trivial(n, &subset),
            points: points_all(&skeleton),
            skeleton,
            elapsed: start.elapsed(),
        });
    }
    let points = mode_points(mode, custom, &skeleton, cm)?;
    let limits = Limits::with_deadline(start + timeout);
    let solution = if mode.uses_subsets() {
        solve_with_subsets_with(&skeleton, cm, &points, &limits)
    } else {
        solve_exact_with(&skeleton, cm, &cm.all_qubits(), &points, &limits)
    }
    .map_err(RunError::Solve)?;
    Ok(Run {
        skeleton,
        points,
        solution,
        elapsed: start.elapsed(),
    })
}

/// Minimal cost over the same search space computed by exhaustive
/// enumeration; `None` when the enumeration gave up.
pub fn oracle_cost(run: &Run, cm: &CouplingMap, mode: Mode) -> Option<Option<u64>> {
    if run.skeleton.is_empty() {
        return Some(Some(0));
    }
    let subsets = if mode.uses_subsets() {
        connected_subsets(cm, run.skeleton.n)
    } else {
        vec![cm.all_qubits()]
    };
    let mut best: Option<u64> = None;
    for subset in subsets {
        match qxmap::brute_force_oracle(&run.skeleton, cm, &subset, &run.points) {
            Ok(Some(c)) => best = Some(best.map_or(c, |b| b.min(c))),
            Ok(None) => {}
            Err(_) => return None,
        }
    }
    Some(best)
}
