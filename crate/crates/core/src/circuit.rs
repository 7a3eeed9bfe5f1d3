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

//! Logical circuit representation and the CNOT skeleton the optimizer works on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CircuitError;

/// The fixed set of single-qubit gates accepted by the mapper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SingleKind {
    H,
    T,
    Tdg,
    S,
    Sdg,
    X,
    Y,
    Z,
}

impl SingleKind {
    pub const ALL: [SingleKind; 8] = [
        SingleKind::H,
        SingleKind::T,
        SingleKind::Tdg,
        SingleKind::S,
        SingleKind::Sdg,
        SingleKind::X,
        SingleKind::Y,
        SingleKind::Z,
    ];

    /// Lower-case OpenQASM name of the gate.
    pub fn qasm_name(self) -> &'static str {
        match self {
            SingleKind::H => "h",
            SingleKind::T => "t",
            SingleKind::Tdg => "tdg",
            SingleKind::S => "s",
            SingleKind::Sdg => "sdg",
            SingleKind::X => "x",
            SingleKind::Y => "y",
            SingleKind::Z => "z",
        }
    }

    pub fn from_qasm_name(name: &str) -> Option<SingleKind> {
        SingleKind::ALL.into_iter().find(|k| k.qasm_name() == name)
    }
}

impl fmt::Display for SingleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.qasm_name())
    }
}

/// A controlled-NOT between two distinct lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cnot {
    pub control: usize,
    pub target: usize,
}

impl Cnot {
    pub fn new(control: usize, target: usize) -> Self {
        Cnot { control, target }
    }

    /// Both lines touched by the gate.
    pub fn qubits(&self) -> [usize; 2] {
        [self.control, self.target]
    }

    pub fn touches(&self, qubit: usize) -> bool {
        self.control == qubit || self.target == qubit
    }
}

/// One gate of a circuit. Indices refer to logical qubits in a
/// [`QuantumCircuit`] and to physical qubits in a mapped circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    Single { qubit: usize, kind: SingleKind },
    Cnot(Cnot),
}

impl Gate {
    pub fn single(kind: SingleKind, qubit: usize) -> Gate {
        Gate::Single { qubit, kind }
    }

    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::Cnot(Cnot { control, target })
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Cnot(_))
    }

    /// Rewrites every qubit index through `f`.
    pub fn relabel(&self, mut f: impl FnMut(usize) -> usize) -> Gate {
        match *self {
            Gate::Single { qubit, kind } => Gate::Single {
                qubit: f(qubit),
                kind,
            },
            Gate::Cnot(c) => Gate::cnot(f(c.control), f(c.target)),
        }
    }

    fn max_index(&self) -> usize {
        match *self {
            Gate::Single { qubit, .. } => qubit,
            Gate::Cnot(c) => c.control.max(c.target),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Single { qubit, kind } => write!(f, "{kind} q{qubit}"),
            Gate::Cnot(c) => write!(f, "cx q{},q{}", c.control, c.target),
        }
    }
}

fn check_gate(n: usize, gate: &Gate) -> Result<(), CircuitError> {
    if gate.max_index() >= n {
        return Err(CircuitError::QubitOutOfRange {
            index: gate.max_index(),
            qubits: n,
        });
    }
    if let Gate::Cnot(c) = gate {
        if c.control == c.target {
            return Err(CircuitError::ControlEqualsTarget(c.control));
        }
    }
    Ok(())
}

/// A logical circuit: `n` lines and the gates in program order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumCircuit {
    n: usize,
    gates: Vec<Gate>,
}

impl QuantumCircuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        for gate in &gates {
            check_gate(n, gate)?;
        }
        Ok(QuantumCircuit { n, gates })
    }

    pub fn empty(n: usize) -> Self {
        QuantumCircuit {
            n,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        check_gate(self.n, &gate)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_cnot()).count()
    }

    /// Single-qubit plus CNOT gate count before mapping.
    pub fn original_cost(&self) -> usize {
        self.gates.len()
    }
}

/// The circuit split into its CNOT sequence and the single-qubit gates
/// interleaved around it.
///
/// `preludes[k]` holds the single-qubit gates that sat between CNOT `k - 1`
/// and CNOT `k` (0-based over `cnots`), and `epilogue` everything after the
/// last CNOT. With no CNOTs at all, every gate lands in the epilogue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnotSkeleton {
    pub n: usize,
    pub cnots: Vec<Cnot>,
    pub preludes: Vec<Vec<Gate>>,
    pub epilogue: Vec<Gate>,
}

impl CnotSkeleton {
    /// Builds a skeleton from bare CNOTs, without any single-qubit gates.
    pub fn from_cnots(n: usize, cnots: Vec<Cnot>) -> Result<Self, CircuitError> {
        for c in &cnots {
            check_gate(n, &Gate::Cnot(*c))?;
        }
        let preludes = vec![Vec::new(); cnots.len()];
        Ok(CnotSkeleton {
            n,
            cnots,
            preludes,
            epilogue: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.cnots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cnots.is_empty()
    }

    /// CNOT at the 1-based position `k` (the `g_k` of the mapping problem).
    pub fn gate(&self, k: usize) -> Cnot {
        self.cnots[k - 1]
    }

    pub fn gate_count(&self) -> usize {
        self.cnots.len()
            + self.preludes.iter().map(Vec::len).sum::<usize>()
            + self.epilogue.len()
    }
}

/// Strips single-qubit gates off the circuit, remembering where they were.
pub fn extract_skeleton(circuit: &QuantumCircuit) -> CnotSkeleton {
    let mut cnots = Vec::new();
    let mut preludes = Vec::new();
    let mut pending = Vec::new();
    for gate in circuit.gates() {
        match gate {
            Gate::Cnot(c) => {
                cnots.push(*c);
                preludes.push(std::mem::take(&mut pending));
            }
            Gate::Single { .. } => pending.push(*gate),
        }
    }
    CnotSkeleton {
        n: circuit.num_qubits(),
        cnots,
        preludes,
        epilogue: pending,
    }
}

/// Inverse of [`extract_skeleton`].
pub fn reassemble(skeleton: &CnotSkeleton) -> QuantumCircuit {
    let mut gates = Vec::with_capacity(skeleton.gate_count());
    for (prelude, cnot) in skeleton.preludes.iter().zip(&skeleton.cnots) {
        gates.extend_from_slice(prelude);
        gates.push(Gate::Cnot(*cnot));
    }
    gates.extend_from_slice(&skeleton.epilogue);
    QuantumCircuit {
        n: skeleton.n,
        gates,
    }
}
