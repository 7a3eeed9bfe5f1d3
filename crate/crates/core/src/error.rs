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

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("qubit index {index} out of range for {qubits} qubits")]
    QubitOutOfRange { index: usize, qubits: usize },
    #[error("cnot control equals target (qubit {0})")]
    ControlEqualsTarget(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QasmError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: unsupported gate `{name}`")]
    UnsupportedGate {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: only a single quantum register is supported")]
    MultipleQuantumRegisters { line: usize, col: usize },
    #[error("{line}:{col}: no quantum register declared before use")]
    MissingRegister { line: usize, col: usize },
    #[error("{line}:{col}: unknown register `{name}`")]
    UnknownRegister {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: index {index} out of range for register of size {size}")]
    IndexOutOfRange {
        index: usize,
        size: usize,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: {source}")]
    Circuit {
        source: CircuitError,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: unknown provenance tag `{tag}`")]
    BadProvenance {
        tag: String,
        line: usize,
        col: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArchError {
    #[error("malformed coupling map JSON: {0}")]
    Json(String),
    #[error("coupling map has a self-loop on qubit {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) references a qubit outside 0..{2}")]
    IndexOutOfRange(usize, usize, usize),
    #[error("physical qubit subset {0:?} is not connected")]
    Disconnected(Vec<usize>),
    #[error("cannot place {logical} logical qubits on {physical} physical qubits")]
    TooFewQubits { logical: usize, physical: usize },
    #[error("{placements} placements exceed the table cap of {cap}")]
    TooManyPlacements { placements: u128, cap: u128 },
    #[error("not a permutation of {0} elements")]
    NotAPermutation(usize),
    #[error("invalid physical qubit subset {0:?}")]
    BadSubset(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error(transparent)]
    Arch(#[from] ArchError),
    #[error("cannot encode a circuit without CNOT gates")]
    EmptySkeleton,
    #[error("invalid permutation point {0}; points must lie in 2..={1}")]
    BadPoint(usize, usize),
    #[error("instance would need {0} transition variables, above the encoder cap")]
    TooLarge(u128),
    #[error("assignment does not cover variable {0}")]
    MissingVariable(u32),
    #[error("solution does not match the instance: {0}")]
    ShapeMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Arch(#[from] ArchError),
    #[error("cannot map a circuit without CNOT gates")]
    EmptySkeleton,
    #[error("invalid permutation point {0}; points must lie in 2..={1}")]
    BadPoint(usize, usize),
    #[error("no valid mapping: no placement satisfies CNOT g{0} under the permitted permutation points")]
    Infeasible(usize),
    #[error("no connected subset of {0} physical qubits")]
    NoConnectedSubset(usize),
    #[error("time limit exceeded")]
    Timeout,
    #[error("search cap of {0} visited nodes exceeded")]
    CapExceeded(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("coupling map `{0}` contains no triangle of physical qubits")]
    NoTriangle(String),
    #[error("invalid custom point {0}; points must lie in 2..={1}")]
    BadPoint(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolutionError {
    #[error("solution shape does not match the circuit: {0}")]
    Shape(String),
    #[error("placement for g{0} is not injective or leaves the subset")]
    BadPlacement(usize),
    #[error("g{0}: cnot is not executable on the coupling map with switch={1}")]
    IllegalCnot(usize, bool),
    #[error("g{0}: swap on ({1}, {2}) is not a coupling edge")]
    IllegalSwap(usize, usize, usize),
    #[error("g{0}: swaps do not transform the previous placement into this one")]
    BrokenTransition(usize),
    #[error("cost {recorded} does not match 7*swaps + 4*switches = {computed}")]
    CostMismatch { recorded: u64, computed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("simulation limited to {cap} qubits, got {got}")]
    DimensionCap { cap: usize, got: usize },
    #[error("malformed provenance at mapped gate {0}")]
    MalformedProvenance(usize),
    #[error(transparent)]
    Solution(#[from] SolutionError),
}
