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

//! Independent checks of mapped circuits.
//!
//! Nothing here reuses the reconstruction code: SWAP blocks and reversed
//! CNOTs are recognized from the gate stream, and equivalence is decided by
//! multiplying dense matrices.

use num_complex::Complex64;

use crate::architecture::{CouplingMap, Placement};
use crate::circuit::{Cnot, Gate, QuantumCircuit, SingleKind};
use crate::error::VerifyError;
use crate::reconstruction::{MappedCircuit, MappedGate, Provenance};
use crate::solver::MappingSolution;

/// Largest number of lines simulated densely.
pub const MAX_SIM_QUBITS: usize = 6;

/// Deviation accepted by [`check_unitary_equivalence`].
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Dense `2^q x 2^q` matrix. Qubit `i` is bit `i` of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    qubits: usize,
    data: Vec<Complex64>,
}

type Mat2 = [[Complex64; 2]; 2];

/// The 2x2 matrix of a single-qubit gate.
pub fn single_matrix(kind: SingleKind) -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let w = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    match kind {
        SingleKind::H => [[r, r], [r, -r]],
        SingleKind::T => [[one, z], [z, w]],
        SingleKind::Tdg => [[one, z], [z, w.conj()]],
        SingleKind::S => [[one, z], [z, i]],
        SingleKind::Sdg => [[one, z], [z, -i]],
        SingleKind::X => [[z, one], [one, z]],
        SingleKind::Y => [[z, -i], [i, z]],
        SingleKind::Z => [[one, z], [z, -one]],
    }
}

impl Unitary {
    pub fn identity(qubits: usize) -> Self {
        let dim = 1usize << qubits;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for d in 0..dim {
            data[d * dim + d] = Complex64::new(1.0, 0.0);
        }
        Unitary { qubits, data }
    }

    /// Product of `gates` in circuit order (first gate applied first).
    pub fn from_gates<'a>(qubits: usize, gates: impl IntoIterator<Item = &'a Gate>) -> Self {
        let mut u = Unitary::identity(qubits);
        for g in gates {
            u.apply(g);
        }
        u
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    /// Left-multiplies by `gate`.
    pub fn apply(&mut self, gate: &Gate) {
        match *gate {
            Gate::Single { qubit, kind } => self.apply_single(qubit, &single_matrix(kind)),
            Gate::Cnot(c) => self.apply_cnot(c),
        }
    }

    fn apply_single(&mut self, qubit: usize, g: &Mat2) {
        let dim = self.dim();
        let bit = 1 << qubit;
        for r0 in (0..dim).filter(|r| r & bit == 0) {
            let r1 = r0 | bit;
            for c in 0..dim {
                let a = self.data[r0 * dim + c];
                let b = self.data[r1 * dim + c];
                self.data[r0 * dim + c] = g[0][0] * a + g[0][1] * b;
                self.data[r1 * dim + c] = g[1][0] * a + g[1][1] * b;
            }
        }
    }

    fn apply_cnot(&mut self, cnot: Cnot) {
        let dim = self.dim();
        let (cb, tb) = (1 << cnot.control, 1 << cnot.target);
        for r in (0..dim).filter(|r| r & cb != 0 && r & tb == 0) {
            let (a, b) = (r * dim, (r | tb) * dim);
            for c in 0..dim {
                self.data.swap(a + c, b + c);
            }
        }
    }

    pub fn adjoint(&self) -> Unitary {
        let dim = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[c * dim + r] = self.data[r * dim + c].conj();
            }
        }
        Unitary {
            qubits: self.qubits,
            data,
        }
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &Unitary) -> Unitary {
        assert_eq!(self.qubits, rhs.qubits);
        let dim = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.data[r * dim + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..dim {
                    data[r * dim + c] += a * rhs.data[k * dim + c];
                }
            }
        }
        Unitary {
            qubits: self.qubits,
            data,
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Unitary) -> f64 {
        assert_eq!(self.qubits, other.qubits);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.mul(&self.adjoint())
            .max_abs_diff(&Unitary::identity(self.qubits))
            <= tol
    }
}

/// True iff every CNOT of `mc` runs along a coupling edge.
pub fn check_coupling_legal(mc: &MappedCircuit, cm: &CouplingMap) -> bool {
    mc.gates.iter().all(|g| match g.gate {
        Gate::Cnot(c) => cm.has_edge(c.control, c.target),
        Gate::Single { qubit, .. } => qubit < cm.num_qubits(),
    })
}

fn is_h(g: &MappedGate, qubit: usize, provenance: Provenance) -> bool {
    g.provenance == provenance && g.gate == Gate::single(SingleKind::H, qubit)
}

fn is_h_pair(gates: &[MappedGate], a: usize, b: usize, provenance: Provenance) -> bool {
    (is_h(&gates[0], a, provenance) && is_h(&gates[1], b, provenance))
        || (is_h(&gates[0], b, provenance) && is_h(&gates[1], a, provenance))
}

/// Recognizes a seven-gate SWAP block at the start of `gates`.
fn swap_block(gates: &[MappedGate]) -> Option<(usize, usize)> {
    if gates.len() < 7 {
        return None;
    }
    let Gate::Cnot(c) = gates[0].gate else {
        return None;
    };
    let tag = Provenance::SwapInserted;
    let cx = |g: &MappedGate| g.provenance == tag && g.gate == Gate::Cnot(c);
    let ok = cx(&gates[0])
        && is_h_pair(&gates[1..3], c.control, c.target, tag)
        && cx(&gates[3])
        && is_h_pair(&gates[4..6], c.control, c.target, tag)
        && cx(&gates[6]);
    ok.then_some((c.control, c.target))
}

/// Recognizes `H H CX H H` around a reversed CNOT; returns the CNOT as the
/// circuit meant it (control and target exchanged back).
fn switched_block(gates: &[MappedGate]) -> Option<Cnot> {
    if gates.len() < 5 {
        return None;
    }
    let Gate::Cnot(c) = gates[2].gate else {
        return None;
    };
    let tag = Provenance::DirectionH;
    let ok = gates[2].provenance == Provenance::Original
        && is_h_pair(&gates[0..2], c.control, c.target, tag)
        && is_h_pair(&gates[3..5], c.control, c.target, tag);
    ok.then_some(Cnot::new(c.target, c.control))
}

/// Replays `mc` against `circuit` and `sol`, reporting the index of the
/// first mapped gate where they part ways.
pub fn trace_tracking(
    circuit: &QuantumCircuit,
    mc: &MappedCircuit,
    sol: &MappingSolution,
) -> Result<(), VerifyError> {
    let orig = circuit.gates();
    let mut placement: Placement = sol.initial.clone();
    if placement.len() != circuit.num_qubits() || !placement.is_injective() {
        return Err(VerifyError::MalformedProvenance(0));
    }
    let mut next = 0; // next original gate
    let mut k = 0; // CNOTs seen
    let mut i = 0;
    let gates = &mc.gates;
    while i < gates.len() {
        let bad = || VerifyError::MalformedProvenance(i);
        let (logical_gate, switched, width) = match gates[i].provenance {
            Provenance::SwapInserted => {
                let (a, b) = swap_block(&gates[i..]).ok_or_else(bad)?;
                placement.swap_physical(a, b);
                i += 7;
                continue;
            }
            Provenance::DirectionH => {
                let c = switched_block(&gates[i..]).ok_or_else(bad)?;
                (Gate::Cnot(c), true, 5)
            }
            Provenance::Original => (gates[i].gate, false, 1),
        };
        let mut unmapped = None;
        let back = logical_gate.relabel(|p| match placement.logical_at(p) {
            Some(q) => q,
            None => {
                unmapped = Some(p);
                usize::MAX
            }
        });
        if unmapped.is_some() || orig.get(next) != Some(&back) {
            return Err(bad());
        }
        if back.is_cnot() {
            if sol.placements.get(k) != Some(&placement) || sol.switches.get(k) != Some(&switched)
            {
                return Err(bad());
            }
            k += 1;
        }
        next += 1;
        i += width;
    }
    if next != orig.len() || k != sol.placements.len() {
        return Err(VerifyError::MalformedProvenance(gates.len()));
    }
    Ok(())
}

/// True iff folding SWAP blocks and reversed CNOTs out of `mc` gives back
/// `circuit` gate for gate, with the placements and switch flags of `sol`.
pub fn check_tracking(circuit: &QuantumCircuit, mc: &MappedCircuit, sol: &MappingSolution) -> bool {
    trace_tracking(circuit, mc, sol).is_ok()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceReport {
    pub coupling_legal: bool,
    pub tracking_ok: bool,
    pub unitary_ok: bool,
    pub max_deviation: f64,
}

impl EquivalenceReport {
    pub fn all_ok(&self) -> bool {
        self.coupling_legal && self.tracking_ok && self.unitary_ok
    }
}

/// Every line of the device with an owner: logical qubits first, then the
/// unused physical qubits in increasing order as blank lines.
fn line_layout(initial: &Placement, m: usize) -> Vec<usize> {
    let mut lines = initial.as_slice().to_vec();
    lines.extend((0..m).filter(|p| !initial.as_slice().contains(p)));
    lines
}

fn scatter(x: usize, lines: &[usize]) -> usize {
    lines
        .iter()
        .enumerate()
        .filter(|(l, _)| x >> l & 1 == 1)
        .map(|(_, &p)| 1 << p)
        .sum()
}

/// Runs all three checks. The unitary comparison embeds the logical
/// circuit on the device lines chosen by `sol.initial` and reads it out on
/// the lines reached after replaying every SWAP of `sol`, blank lines
/// included.
pub fn check_unitary_equivalence(
    circuit: &QuantumCircuit,
    mc: &MappedCircuit,
    sol: &MappingSolution,
    cm: &CouplingMap,
) -> Result<EquivalenceReport, VerifyError> {
    let m = mc.num_qubits;
    let n = circuit.num_qubits();
    if m > MAX_SIM_QUBITS || n > MAX_SIM_QUBITS {
        return Err(VerifyError::DimensionCap {
            cap: MAX_SIM_QUBITS,
            got: m.max(n),
        });
    }
    let coupling_legal = check_coupling_legal(mc, cm);
    let tracking_ok = check_tracking(circuit, mc, sol);

    let mut report = EquivalenceReport {
        coupling_legal,
        tracking_ok,
        unitary_ok: false,
        max_deviation: f64::INFINITY,
    };
    if sol.initial.len() != n
        || !sol.initial.is_injective()
        || sol.initial.as_slice().iter().any(|&p| p >= m)
        || mc.gates.iter().any(|g| touches_beyond(&g.gate, m))
    {
        return Ok(report);
    }
    let lines_in = line_layout(&sol.initial, m);
    let mut out = Placement::new(lines_in.clone());
    for &(a, b) in sol.swap_sequences.iter().flatten() {
        if a >= m || b >= m {
            return Ok(report);
        }
        out.swap_physical(a, b);
    }
    let lines_out = out.0;

    let u_orig = Unitary::from_gates(n, circuit.gates());
    let mapped_gates: Vec<Gate> = mc.gates.iter().map(|g| g.gate).collect();
    let u_mapped = Unitary::from_gates(m, &mapped_gates);

    let dim = 1usize << m;
    let low = (1usize << n) - 1;
    let mut expected = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for c in (0..dim).filter(|c| c & !low == r & !low) {
            expected[scatter(r, &lines_out) * dim + scatter(c, &lines_in)] =
                u_orig.get(r & low, c & low);
        }
    }
    let expected = Unitary {
        qubits: m,
        data: expected,
    };
    report.max_deviation = u_mapped.max_abs_diff(&expected);
    report.unitary_ok = report.max_deviation <= UNITARY_TOLERANCE;
    Ok(report)
}

fn touches_beyond(gate: &Gate, m: usize) -> bool {
    match *gate {
        Gate::Single { qubit, .. } => qubit >= m,
        Gate::Cnot(c) => c.control >= m || c.target >= m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::extract_skeleton;
    use crate::fixtures;
    use crate::reconstruction::build_mapped_circuit;
    use crate::solver::solve_exact;
    use crate::strategies::points_all;

    fn swap_matrix(q: usize, a: usize, b: usize) -> Unitary {
        let dim = 1 << q;
        let mut u = Unitary::identity(q);
        u.data.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        for x in 0..dim {
            let (ba, bb) = (x >> a & 1, x >> b & 1);
            let y = (x & !(1 << a) & !(1 << b)) | (ba << b) | (bb << a);
            u.data[y * dim + x] = Complex64::new(1.0, 0.0);
        }
        u
    }

    #[test]
    fn gate_matrices_are_unitary() {
        for kind in SingleKind::ALL {
            let u = Unitary::from_gates(1, &[Gate::single(kind, 0)]);
            assert!(u.is_unitary(1e-12), "{kind}");
        }
        let u = Unitary::from_gates(3, &[Gate::cnot(2, 0), Gate::single(SingleKind::T, 1)]);
        assert!(u.is_unitary(1e-12));
    }

    #[test]
    fn cnot_matrix_entries() {
        // control 0, target 1: |01> (index 1) -> |11> (index 3)
        let u = Unitary::from_gates(2, &[Gate::cnot(0, 1)]);
        assert_eq!(u.get(3, 1), Complex64::new(1.0, 0.0));
        assert_eq!(u.get(1, 3), Complex64::new(1.0, 0.0));
        assert_eq!(u.get(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(u.get(2, 2), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn h_conjugation_reverses_cnot() {
        use SingleKind::H;
        let lhs = Unitary::from_gates(
            2,
            &[
                Gate::single(H, 0),
                Gate::single(H, 1),
                Gate::cnot(1, 0),
                Gate::single(H, 0),
                Gate::single(H, 1),
            ],
        );
        let rhs = Unitary::from_gates(2, &[Gate::cnot(0, 1)]);
        assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn seven_gates_make_a_swap() {
        use SingleKind::H;
        let (i, j) = (1, 0);
        let gates = [
            Gate::cnot(i, j),
            Gate::single(H, i),
            Gate::single(H, j),
            Gate::cnot(i, j),
            Gate::single(H, i),
            Gate::single(H, j),
            Gate::cnot(i, j),
        ];
        let u = Unitary::from_gates(2, &gates);
        assert!(u.max_abs_diff(&swap_matrix(2, 0, 1)) <= 1e-12);
    }

    fn example_setup() -> (QuantumCircuit, MappingSolution, MappedCircuit, CouplingMap) {
        let c = fixtures::example_circuit();
        let s = extract_skeleton(&c);
        let qx4 = CouplingMap::ibm_qx4();
        let sol = solve_exact(&s, &qx4, &qx4.all_qubits(), &points_all(&s)).unwrap();
        let mc = build_mapped_circuit(&c, &sol, &qx4).unwrap();
        (c, sol, mc, qx4)
    }

    #[test]
    fn example_reconstruction_is_equivalent() {
        let (c, sol, mc, qx4) = example_setup();
        let r = check_unitary_equivalence(&c, &mc, &sol, &qx4).unwrap();
        assert!(r.all_ok(), "{r:?}");
        assert!(r.max_deviation <= 1e-10);
    }

    #[test]
    fn deleted_h_breaks_equivalence() {
        let (c, sol, mut mc, qx4) = example_setup();
        let pos = mc
            .gates
            .iter()
            .position(|g| g.provenance == Provenance::DirectionH)
            .unwrap();
        mc.gates.remove(pos);
        let r = check_unitary_equivalence(&c, &mc, &sol, &qx4).unwrap();
        assert!(!r.unitary_ok);
        assert!(!r.tracking_ok);
        assert!(r.coupling_legal);
    }

    #[test]
    fn flipped_cnot_is_illegal() {
        let (_, _, mut mc, qx4) = example_setup();
        for g in &mut mc.gates {
            if let Gate::Cnot(c) = g.gate {
                g.gate = Gate::cnot(c.target, c.control);
                break;
            }
        }
        assert!(!check_coupling_legal(&mc, &qx4));
    }

    #[test]
    fn example3_direction() {
        let qx4 = CouplingMap::ibm_qx4();
        let mk = |c, t| MappedCircuit {
            num_qubits: 5,
            gates: vec![MappedGate {
                gate: Gate::cnot(c, t),
                provenance: Provenance::Original,
            }],
        };
        assert!(!check_coupling_legal(&mk(0, 1), &qx4));
        assert!(check_coupling_legal(&mk(1, 0), &qx4));
        assert!(check_coupling_legal(
            &MappedCircuit {
                num_qubits: 5,
                gates: vec![]
            },
            &qx4
        ));
    }

    #[test]
    fn switch_flag_flip_detected() {
        let (c, mut sol, mc, _) = example_setup();
        let k = sol.switches.iter().position(|&s| s).unwrap();
        sol.switches[k] = false;
        assert!(!check_tracking(&c, &mc, &sol));
    }

    #[test]
    fn cnot_free_identity_is_exact() {
        let c = QuantumCircuit::new(
            3,
            vec![
                Gate::single(SingleKind::T, 0),
                Gate::single(SingleKind::H, 2),
                Gate::single(SingleKind::Y, 1),
            ],
        )
        .unwrap();
        let qx4 = CouplingMap::ibm_qx4();
        let sol = MappingSolution::trivial(3, &qx4.all_qubits());
        let mc = build_mapped_circuit(&c, &sol, &qx4).unwrap();
        let r = check_unitary_equivalence(&c, &mc, &sol, &qx4).unwrap();
        assert!(r.all_ok());
        assert_eq!(r.max_deviation, 0.0);
    }

    #[test]
    fn swaps_with_blank_lines() {
        // two logical qubits on a 3-line path; the solver has to move one
        let line = fixtures::line(3);
        let c = QuantumCircuit::new(
            2,
            vec![
                Gate::cnot(0, 1),
                Gate::single(SingleKind::T, 1),
                Gate::cnot(1, 0),
                Gate::single(SingleKind::H, 0),
            ],
        )
        .unwrap();
        let s = extract_skeleton(&c);
        let sol = solve_exact(&s, &line, &[0, 1, 2], &points_all(&s)).unwrap();
        let mc = build_mapped_circuit(&c, &sol, &line).unwrap();
        let r = check_unitary_equivalence(&c, &mc, &sol, &line).unwrap();
        assert!(r.all_ok(), "{r:?}");
        // force a swap through an empty line by hand
        let sol = MappingSolution {
            initial: Placement::new(vec![0, 1]),
            placements: vec![Placement::new(vec![0, 1]), Placement::new(vec![0, 2])],
            switches: vec![false, false],
            swap_sequences: vec![vec![], vec![(1, 2)]],
            cost: 7,
            subset_used: vec![0, 1, 2],
        };
        let c = QuantumCircuit::new(
            2,
            vec![
                Gate::cnot(0, 1),
                Gate::single(SingleKind::X, 1),
                Gate::cnot(0, 1),
            ],
        )
        .unwrap();
        let tri = CouplingMap::new("tri", 3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let mc = build_mapped_circuit(&c, &sol, &tri).unwrap();
        let r = check_unitary_equivalence(&c, &mc, &sol, &tri).unwrap();
        assert!(r.all_ok(), "{r:?}");
    }

    #[test]
    fn deleted_swap_gate_detected() {
        let line = fixtures::line(3);
        let s = crate::circuit::CnotSkeleton::from_cnots(3, vec![Cnot::new(0, 1), Cnot::new(1, 2), Cnot::new(0, 2)]).unwrap();
        let c = crate::circuit::reassemble(&s);
        let sol = solve_exact(&s, &line, &[0, 1, 2], &points_all(&s)).unwrap();
        let mut mc = build_mapped_circuit(&c, &sol, &line).unwrap();
        let pos = mc
            .gates
            .iter()
            .position(|g| g.provenance == Provenance::SwapInserted)
            .unwrap();
        assert!(check_tracking(&c, &mc, &sol));
        mc.gates.remove(pos + 3);
        assert!(!check_tracking(&c, &mc, &sol));
        let r = check_unitary_equivalence(&c, &mc, &sol, &line).unwrap();
        assert!(!r.unitary_ok);
    }

    #[test]
    fn too_many_lines() {
        let cm = fixtures::line(7);
        let c = QuantumCircuit::empty(2);
        let sol = MappingSolution::trivial(2, &cm.all_qubits());
        let mc = build_mapped_circuit(&c, &sol, &cm).unwrap();
        assert!(matches!(
            check_unitary_equivalence(&c, &mc, &sol, &cm),
            Err(VerifyError::DimensionCap { cap: 6, got: 7 })
        ));
    }
}
