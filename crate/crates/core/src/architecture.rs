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

//! Coupling maps, placements and connected qubit subsets.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ArchError;

/// Directed interaction graph of a device: `(c, t)` is present when a CNOT
/// with control `c` and target `t` can be executed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingMap {
    name: String,
    num_qubits: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct CouplingMapJson {
    name: String,
    qubits: usize,
    edges: Vec<[usize; 2]>,
}

impl CouplingMap {
    pub fn new(
        name: impl Into<String>,
        num_qubits: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ArchError> {
        let mut set = BTreeSet::new();
        for (c, t) in edges {
            if c >= num_qubits || t >= num_qubits {
                return Err(ArchError::IndexOutOfRange(c, t, num_qubits));
            }
            if c == t {
                return Err(ArchError::SelfLoop(c));
            }
            set.insert((c, t));
        }
        Ok(CouplingMap {
            name: name.into(),
            num_qubits,
            edges: set,
        })
    }

    /// IBM QX4: p2->p1, p3->p1, p3->p2, p4->p3, p4->p5, p5->p3 (stored
    /// 0-indexed).
    pub fn ibm_qx4() -> Self {
        CouplingMap::new(
            "ibm-qx4",
            5,
            [(1, 0), (2, 0), (2, 1), (3, 2), (3, 4), (4, 2)],
        )
        .expect("static map is valid")
    }

    /// Resolves a built-in architecture name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "ibm-qx4" | "qx4" => Some(CouplingMap::ibm_qx4()),
            _ => None,
        }
    }

    /// Reads `{"name": .., "qubits": .., "edges": [[c, t], ..]}`.
    pub fn from_json(text: &str) -> Result<Self, ArchError> {
        let raw: CouplingMapJson =
            serde_json::from_str(text).map_err(|e| ArchError::Json(e.to_string()))?;
        CouplingMap::new(raw.name, raw.qubits, raw.edges.iter().map(|e| (e[0], e[1])))
    }

    pub fn to_json(&self) -> String {
        let raw = CouplingMapJson {
            name: self.name.clone(),
            qubits: self.num_qubits,
            edges: self.edges.iter().map(|&(c, t)| [c, t]).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, control: usize, target: usize) -> bool {
        self.edges.contains(&(control, target))
    }

    /// True when a CNOT can act on `a` and `b` in at least one direction.
    pub fn is_coupled(&self, a: usize, b: usize) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    /// Undirected edges `(a, b)` with `a < b`, sorted.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let set: BTreeSet<_> = self.edges.iter().map(|&(c, t)| (c.min(t), c.max(t))).collect();
        set.into_iter().collect()
    }

    /// Undirected edges with both ends inside `subset`.
    pub fn undirected_edges_within(&self, subset: &[usize]) -> Vec<(usize, usize)> {
        self.undirected_edges()
            .into_iter()
            .filter(|(a, b)| subset.contains(a) && subset.contains(b))
            .collect()
    }

    pub fn all_qubits(&self) -> Vec<usize> {
        (0..self.num_qubits).collect()
    }

    /// Whether the undirected subgraph induced by `subset` is connected.
    /// The empty subset counts as connected.
    pub fn is_connected(&self, subset: &[usize]) -> bool {
        let Some(&start) = subset.first() else {
            return true;
        };
        let mut seen = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in subset {
                if !seen.contains(&v) && self.is_coupled(u, v) {
                    seen.push(v);
                    stack.push(v);
                }
            }
        }
        seen.len() == subset.len()
    }

    /// All 3-cliques of the undirected coupling graph, each sorted.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let m = self.num_qubits;
        let mut out = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if !self.is_coupled(a, b) {
                    continue;
                }
                for c in b + 1..m {
                    if self.is_coupled(a, c) && self.is_coupled(b, c) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// Physical qubits that can interact with at least two others.
    pub fn has_branching_qubit(&self) -> bool {
        (0..self.num_qubits)
            .any(|p| (0..self.num_qubits).filter(|&q| self.is_coupled(p, q)).count() >= 2)
    }

    pub(crate) fn check_subset(&self, subset: &[usize]) -> Result<(), ArchError> {
        let sorted = subset.windows(2).all(|w| w[0] < w[1]);
        if !sorted || subset.iter().any(|&p| p >= self.num_qubits) {
            return Err(ArchError::BadSubset(subset.to_vec()));
        }
        Ok(())
    }
}

impl fmt::Display for CouplingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} qubits)", self.name, self.num_qubits)
    }
}

/// Every size-`n` subset of physical qubits whose undirected induced subgraph
/// is connected, in lexicographic order.
pub fn connected_subsets(cm: &CouplingMap, n: usize) -> Vec<Vec<usize>> {
    fn rec(
        cm: &CouplingMap,
        n: usize,
        next: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == n {
            if cm.is_connected(current) {
                out.push(current.clone());
            }
            return;
        }
        for p in next..cm.num_qubits() {
            if cm.num_qubits() - p < n - current.len() {
                break;
            }
            current.push(p);
            rec(cm, n, p + 1, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 || n > cm.num_qubits() {
        return out;
    }
    rec(cm, n, 0, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Injective assignment of logical qubits to physical qubits:
/// `self[j]` is the physical qubit hosting logical qubit `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Placement(pub Vec<usize>);

impl Placement {
    pub fn new(assign: Vec<usize>) -> Self {
        Placement(assign)
    }

    /// Logical qubit `j` on the `j`-th entry of `subset`.
    pub fn trivial(n: usize, subset: &[usize]) -> Self {
        Placement(subset[..n].to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn physical(&self, logical: usize) -> usize {
        self.0[logical]
    }

    /// Logical qubit hosted on `physical`, if any.
    pub fn logical_at(&self, physical: usize) -> Option<usize> {
        self.0.iter().position(|&p| p == physical)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.0.iter().all(|p| seen.insert(*p))
    }

    /// Exchanges whatever sits on physical qubits `a` and `b` (either may be
    /// empty).
    pub fn swap_physical(&mut self, a: usize, b: usize) {
        for p in &mut self.0 {
            if *p == a {
                *p = b;
            } else if *p == b {
                *p = a;
            }
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self
            .0
            .iter()
            .enumerate()
            .map(|(j, p)| format!("q{}->p{}", j + 1, p + 1))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
