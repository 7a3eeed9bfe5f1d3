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

//! Reference inputs used throughout the tests and the guide.

use crate::architecture::CouplingMap;
use crate::circuit::{extract_skeleton, CnotSkeleton, Gate, QuantumCircuit, SingleKind};

/// The four-qubit, eight-gate running example (three single-qubit gates and
/// five CNOTs).
pub const EXAMPLE_QASM: &str = "OPENQASM 2.0;
include \"qelib1.inc\";
qreg q[4];
h q[2];
cx q[2],q[3];
cx q[0],q[1];
h q[1];
cx q[1],q[2];
t q[0];
cx q[2],q[0];
cx q[0],q[1];
";

/// The IBM QX4 coupling map in the JSON interchange format.
pub const QX4_JSON: &str = r#"{
  "name": "ibm-qx4",
  "qubits": 5,
  "edges": [[1, 0], [2, 0], [2, 1], [3, 2], [3, 4], [4, 2]]
}
"#;

pub fn example_circuit() -> QuantumCircuit {
    use SingleKind::{H, T};
    QuantumCircuit::new(
        4,
        vec![
            Gate::single(H, 2),
            Gate::cnot(2, 3),
            Gate::cnot(0, 1),
            Gate::single(H, 1),
            Gate::cnot(1, 2),
            Gate::single(T, 0),
            Gate::cnot(2, 0),
            Gate::cnot(0, 1),
        ],
    )
    .expect("valid circuit")
}

pub fn example_skeleton() -> CnotSkeleton {
    extract_skeleton(&example_circuit())
}

/// Directed path `0 -> 1 -> ... -> m-1`.
pub fn line(m: usize) -> CouplingMap {
    let edges = (1..m).map(|i| (i - 1, i));
    CouplingMap::new(format!("line{m}"), m, edges).expect("valid line")
}
