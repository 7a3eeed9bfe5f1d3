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

//! Exact mapping of quantum circuits onto coupling-constrained devices.
//!
//! A circuit over logical qubits is laid out on the physical qubits of a
//! device whose CNOTs only run along the directed edges of a coupling map.
//! Where needed, SWAPs (seven gates each) move logical qubits around and
//! four H gates reverse a CNOT. [`solve_exact`] finds a layout that inserts
//! the fewest such gates, i.e. minimizes `F = 7 * swaps + 4 * switches`.
//!
//! ```
//! use qxmap::{build_mapped_circuit, extract_skeleton, parse_qasm, points_all};
//! use qxmap::{solve_exact, CouplingMap};
//!
//! let program = parse_qasm(qxmap::fixtures::EXAMPLE_QASM)?;
//! let skeleton = extract_skeleton(&program.circuit);
//! let qx4 = CouplingMap::ibm_qx4();
//! let sol = solve_exact(&skeleton, &qx4, &qx4.all_qubits(), &points_all(&skeleton))?;
//! assert_eq!(sol.cost, 4);
//!
//! let mapped = build_mapped_circuit(&program.circuit, &sol, &qx4)?;
//! assert_eq!(mapped.len(), 12);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod architecture;
pub mod circuit;
pub mod encoder;
pub mod error;
pub mod fixtures;
pub mod oracle;
pub mod qasm;
pub mod reconstruction;
pub mod solver;
pub mod strategies;
pub mod swap_table;
pub mod verifier;
pub mod wcnf;

pub use architecture::{connected_subsets, CouplingMap, Placement};
pub use circuit::{extract_skeleton, reassemble, Cnot, CnotSkeleton, Gate, QuantumCircuit, SingleKind};
pub use encoder::{
    encode, evaluate_assignment, solution_to_assignment, Assignment, EncodedInstance, Evaluation,
    Lit,
};
pub use error::{
    ArchError, CircuitError, EncodeError, QasmError, SolutionError, SolveError, StrategyError,
    VerifyError,
};
pub use oracle::brute_force_oracle;
pub use qasm::{parse_mapped_qasm, parse_qasm, QasmProgram};
pub use reconstruction::{build_mapped_circuit, emit_qasm, MappedCircuit, MappedGate, Provenance};
pub use solver::{
    solve_exact, solve_exact_with, solve_with_subsets, solve_with_subsets_with, Limits,
    MappingSolution, SWAP_COST, SWITCH_COST,
};
pub use strategies::{
    points_all, points_disjoint_qubits, points_odd_gates, points_qubit_triangle,
    PermutationPolicy, PointSet,
};
pub use swap_table::SwapTable;
pub use verifier::{
    check_coupling_legal, check_tracking, check_unitary_equivalence, EquivalenceReport, Unitary,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    mod circuits {}
    #[doc = include_str!("../../../book/src/architectures.md")]
    mod architectures {}
    #[doc = include_str!("../../../book/src/mapping.md")]
    mod mapping {}
    #[doc = include_str!("../../../book/src/strategies.md")]
    mod strategies {}
    #[doc = include_str!("../../../book/src/maxsat.md")]
    mod maxsat {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
