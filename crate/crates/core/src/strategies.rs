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

//! Choice of permutation points: the CNOT positions before which the
//! placement may change.
//!
//! Positions are 1-based over the CNOT skeleton (`g1` is position 1). The
//! first gate never carries a point since the initial placement is free.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::architecture::CouplingMap;
use crate::circuit::CnotSkeleton;
use crate::error::StrategyError;

pub type PointSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PermutationPolicy {
    /// A point before every gate except the first; guarantees minimality.
    AllGates,
    DisjointQubits,
    OddGates,
    QubitTriangle,
    Custom(PointSet),
}

impl PermutationPolicy {
    pub fn points(
        &self,
        skeleton: &CnotSkeleton,
        cm: &CouplingMap,
    ) -> Result<PointSet, StrategyError> {
        match self {
            PermutationPolicy::AllGates => Ok(points_all(skeleton)),
            PermutationPolicy::DisjointQubits => Ok(points_disjoint_qubits(skeleton)),
            PermutationPolicy::OddGates => Ok(points_odd_gates(skeleton)),
            PermutationPolicy::QubitTriangle => points_qubit_triangle(skeleton, cm),
            PermutationPolicy::Custom(points) => {
                let len = skeleton.len();
                if let Some(&bad) = points.iter().find(|&&k| k < 2 || k > len) {
                    return Err(StrategyError::BadPoint(bad, len));
                }
                Ok(points.clone())
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PermutationPolicy::AllGates => "all",
            PermutationPolicy::DisjointQubits => "disjoint",
            PermutationPolicy::OddGates => "odd",
            PermutationPolicy::QubitTriangle => "triangle",
            PermutationPolicy::Custom(_) => "custom",
        }
    }
}

impl fmt::Display for PermutationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PermutationPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(PermutationPolicy::AllGates),
            "disjoint" => Ok(PermutationPolicy::DisjointQubits),
            "odd" => Ok(PermutationPolicy::OddGates),
            "triangle" => Ok(PermutationPolicy::QubitTriangle),
            other => Err(format!("unknown permutation policy `{other}`")),
        }
    }
}

/// `{2, .., |G|}`.
pub fn points_all(skeleton: &CnotSkeleton) -> PointSet {
    (2..=skeleton.len()).collect()
}

/// Splits the CNOT sequence greedily into maximal runs of consecutive gates
/// for which `fits(block_start, k)` holds, and returns the start of every run
/// except the first.
fn block_starts(len: usize, mut fits: impl FnMut(usize, usize) -> bool) -> PointSet {
    let mut points = PointSet::new();
    let mut start = 1;
    for k in 2..=len {
        if !fits(start, k) {
            points.insert(k);
            start = k;
        }
    }
    points
}

/// Gates are grouped while their qubit pairs stay pairwise disjoint.
pub fn points_disjoint_qubits(skeleton: &CnotSkeleton) -> PointSet {
    block_starts(skeleton.len(), |start, k| {
        let g = skeleton.gate(k);
        (start..k).all(|i| {
            let h = skeleton.gate(i);
            !g.qubits().iter().any(|&q| h.touches(q))
        })
    })
}

/// Points before every odd-indexed gate from `g3` on.
pub fn points_odd_gates(skeleton: &CnotSkeleton) -> PointSet {
    (3..=skeleton.len()).step_by(2).collect()
}

/// Gates are grouped while the block touches at most three logical qubits,
/// so each block fits on one triangle of the architecture.
pub fn points_qubit_triangle(
    skeleton: &CnotSkeleton,
    cm: &CouplingMap,
) -> Result<PointSet, StrategyError> {
    if cm.triangles().is_empty() {
        return Err(StrategyError::NoTriangle(cm.name().to_string()));
    }
    Ok(block_starts(skeleton.len(), |start, k| {
        let support: BTreeSet<usize> = (start..=k)
            .flat_map(|i| skeleton.gate(i).qubits())
            .collect();
        support.len() <= 3
    }))
}

/// The odd-gates policy assumes some physical qubit couples to two others.
pub fn odd_gates_precondition(cm: &CouplingMap) -> bool {
    cm.has_branching_qubit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Cnot;
    use crate::fixtures;

    fn skel(n: usize, pairs: &[(usize, usize)]) -> CnotSkeleton {
        CnotSkeleton::from_cnots(n, pairs.iter().map(|&(c, t)| Cnot::new(c, t)).collect())
            .unwrap()
    }

    fn set(v: &[usize]) -> PointSet {
        v.iter().copied().collect()
    }

    #[test]
    fn example_point_sets() {
        let s = fixtures::example_skeleton();
        let qx4 = CouplingMap::ibm_qx4();
        assert_eq!(points_all(&s), set(&[2, 3, 4, 5]));
        assert_eq!(points_disjoint_qubits(&s), set(&[3, 4, 5]));
        assert_eq!(points_odd_gates(&s), set(&[3, 5]));
        assert_eq!(points_qubit_triangle(&s, &qx4).unwrap(), set(&[2]));
    }

    #[test]
    fn disjoint_edge_cases() {
        assert_eq!(
            points_disjoint_qubits(&skel(2, &[(0, 1), (0, 1), (1, 0)])),
            set(&[2, 3])
        );
        assert_eq!(points_disjoint_qubits(&skel(4, &[(0, 1), (2, 3)])), set(&[]));
    }

    #[test]
    fn odd_edge_cases() {
        assert_eq!(points_odd_gates(&skel(2, &[(0, 1)])), set(&[]));
        assert_eq!(points_odd_gates(&skel(2, &[(0, 1); 7])), set(&[3, 5, 7]));
    }

    #[test]
    fn triangle_edge_cases() {
        let qx4 = CouplingMap::ibm_qx4();
        assert_eq!(
            points_qubit_triangle(&skel(2, &[(0, 1), (1, 0), (0, 1)]), &qx4).unwrap(),
            set(&[])
        );
        assert_eq!(
            points_qubit_triangle(&skel(2, &[(0, 1)]), &fixtures::line(3)),
            Err(StrategyError::NoTriangle("line3".into()))
        );
    }

    #[test]
    fn custom_points_are_validated() {
        let s = fixtures::example_skeleton();
        let qx4 = CouplingMap::ibm_qx4();
        let p = PermutationPolicy::Custom(set(&[3, 5]));
        assert_eq!(p.points(&s, &qx4).unwrap(), points_odd_gates(&s));
        assert_eq!(
            PermutationPolicy::Custom(set(&[1])).points(&s, &qx4),
            Err(StrategyError::BadPoint(1, 5))
        );
        assert_eq!(
            PermutationPolicy::Custom(set(&[6])).points(&s, &qx4),
            Err(StrategyError::BadPoint(6, 5))
        );
    }

    #[test]
    fn odd_precondition() {
        assert!(odd_gates_precondition(&CouplingMap::ibm_qx4()));
        assert!(!odd_gates_precondition(&fixtures::line(2)));
    }
}
