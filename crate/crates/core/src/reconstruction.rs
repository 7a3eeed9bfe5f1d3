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

//! Builds the executable physical circuit from a mapping.

use std::fmt::Write as _;

use crate::architecture::{CouplingMap, Placement};
use crate::circuit::{extract_skeleton, Gate, QuantumCircuit, SingleKind};
use crate::error::SolutionError;
use crate::solver::MappingSolution;

/// Why a gate is present in the mapped circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Original,
    /// One of the seven gates realizing a SWAP.
    SwapInserted,
    /// One of the four H gates reversing a CNOT.
    DirectionH,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::Original => "original",
            Provenance::SwapInserted => "swap",
            Provenance::DirectionH => "direction-h",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Provenance> {
        match tag {
            "original" => Some(Provenance::Original),
            "swap" => Some(Provenance::SwapInserted),
            "direction-h" => Some(Provenance::DirectionH),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MappedGate {
    pub gate: Gate,
    pub provenance: Provenance,
}

/// A circuit over physical qubits, every gate tagged with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappedCircuit {
    pub num_qubits: usize,
    pub gates: Vec<MappedGate>,
}

impl MappedCircuit {
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn count(&self, provenance: Provenance) -> usize {
        self.gates
            .iter()
            .filter(|g| g.provenance == provenance)
            .count()
    }

    /// Inserted gates, i.e. everything not from the source circuit.
    pub fn overhead(&self) -> usize {
        self.len() - self.count(Provenance::Original)
    }

    fn push(&mut self, gate: Gate, provenance: Provenance) {
        self.gates.push(MappedGate { gate, provenance });
    }

    /// Seven-gate SWAP on `{a, b}`: three CNOTs along the coupled direction
    /// with the middle one reversed by H gates on both qubits.
    fn push_swap(&mut self, cm: &CouplingMap, a: usize, b: usize) {
        let (c, t) = if cm.has_edge(a, b) { (a, b) } else { (b, a) };
        let tag = Provenance::SwapInserted;
        self.push(Gate::cnot(c, t), tag);
        self.push(Gate::single(SingleKind::H, c), tag);
        self.push(Gate::single(SingleKind::H, t), tag);
        self.push(Gate::cnot(c, t), tag);
        self.push(Gate::single(SingleKind::H, c), tag);
        self.push(Gate::single(SingleKind::H, t), tag);
        self.push(Gate::cnot(c, t), tag);
    }

    fn push_singles(&mut self, gates: &[Gate], placement: &Placement) {
        for g in gates {
            self.push(g.relabel(|q| placement.physical(q)), Provenance::Original);
        }
    }
}

/// Lays out `circuit` on the device according to `sol`.
///
/// Single-qubit gates preceding CNOT `g_k` are emitted on the placement in
/// force before the SWAPs of `g_k`; the SWAPs follow, then the CNOT itself,
/// wrapped in H gates on both lines when it runs reversed.
pub fn build_mapped_circuit(
    circuit: &QuantumCircuit,
    sol: &MappingSolution,
    cm: &CouplingMap,
) -> Result<MappedCircuit, SolutionError> {
    let skeleton = extract_skeleton(circuit);
    sol.validate(&skeleton, cm, None)?;
    if sol.initial.len() != circuit.num_qubits() {
        return Err(SolutionError::Shape("initial placement size".into()));
    }
    let mut mc = MappedCircuit {
        num_qubits: cm.num_qubits(),
        gates: Vec::with_capacity(circuit.len() + sol.cost as usize),
    };
    let mut prev = &sol.initial;
    for (k, cnot) in skeleton.cnots.iter().enumerate() {
        mc.push_singles(&skeleton.preludes[k], prev);
        for &(a, b) in &sol.swap_sequences[k] {
            mc.push_swap(cm, a, b);
        }
        let placement = &sol.placements[k];
        let (pc, pt) = (
            placement.physical(cnot.control),
            placement.physical(cnot.target),
        );
        if sol.switches[k] {
            let h = Provenance::DirectionH;
            mc.push(Gate::single(SingleKind::H, pc), h);
            mc.push(Gate::single(SingleKind::H, pt), h);
            mc.push(Gate::cnot(pt, pc), Provenance::Original);
            mc.push(Gate::single(SingleKind::H, pc), h);
            mc.push(Gate::single(SingleKind::H, pt), h);
        } else {
            mc.push(Gate::cnot(pc, pt), Provenance::Original);
        }
        prev = placement;
    }
    mc.push_singles(&skeleton.epilogue, prev);
    Ok(mc)
}

/// OpenQASM 2.0 text over one register `q` of the device size, provenance
/// as trailing comments.
pub fn emit_qasm(mc: &MappedCircuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{}];", mc.num_qubits).unwrap();
    for g in &mc.gates {
        match g.gate {
            Gate::Single { qubit, kind } => write!(out, "{kind} q[{qubit}];").unwrap(),
            Gate::Cnot(c) => write!(out, "cx q[{}],q[{}];", c.control, c.target).unwrap(),
        }
        writeln!(out, " // {}", g.provenance.tag()).unwrap();
    }
    out
}
