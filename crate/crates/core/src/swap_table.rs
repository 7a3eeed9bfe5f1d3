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

//! Minimal SWAP counts between placements.
//!
//! A SWAP on an undirected coupling edge `{i, j}` exchanges whatever sits on
//! `i` and `j`: a logical qubit or an empty slot. The distance between two
//! placements is the length of a shortest sequence of such exchanges, found
//! by breadth-first search over the placement graph. For `n = m` this is the
//! token-swapping number of the permutation relating the two placements.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

use crate::architecture::{CouplingMap, Placement};
use crate::error::ArchError;

/// Placements beyond this count are rejected instead of tabulated.
pub const DEFAULT_PLACEMENT_CAP: u128 = 10_000_000;

const UNREACHED: u16 = u16::MAX;

/// Number of injective placements of `n` logical qubits onto `k` physical
/// ones, `k! / (k - n)!`.
pub fn placement_count(k: usize, n: usize) -> u128 {
    if n > k {
        return 0;
    }
    ((k - n + 1)..=k).fold(1u128, |acc, v| acc.saturating_mul(v as u128))
}

/// Position of `p` in the lexicographic enumeration of injective placements
/// into `allowed` (sorted), as used by [`SwapTable::placements`].
pub fn placement_rank(allowed: &[usize], p: &Placement) -> Option<usize> {
    let n = p.len();
    if !p.is_injective() || n > allowed.len() {
        return None;
    }
    let mut rank = 0usize;
    for (j, &phys) in p.as_slice().iter().enumerate() {
        let slot = allowed.iter().position(|&a| a == phys)?;
        let smaller_free = allowed[..slot]
            .iter()
            .filter(|a| !p.as_slice()[..j].contains(a))
            .count();
        rank += smaller_free * placement_count(allowed.len() - j - 1, n - j - 1) as usize;
    }
    Some(rank)
}

/// Distance table for one coupling map, logical qubit count and physical
/// subset. Rows are computed on first use and then kept.
#[derive(Debug)]
pub struct SwapTable {
    n: usize,
    allowed: Vec<usize>,
    edges: Vec<(usize, usize)>,
    placements: Vec<Placement>,
    index: HashMap<Vec<usize>, u32>,
    // next[p * edges.len() + e]: placement reached from p by swapping edge e
    next: Vec<u32>,
    rows: Vec<OnceLock<Box<[u16]>>>,
}

impl SwapTable {
    pub fn build(cm: &CouplingMap, n: usize, allowed: &[usize]) -> Result<Self, ArchError> {
        SwapTable::build_with_cap(cm, n, allowed, DEFAULT_PLACEMENT_CAP)
    }

    pub fn build_with_cap(
        cm: &CouplingMap,
        n: usize,
        allowed: &[usize],
        cap: u128,
    ) -> Result<Self, ArchError> {
        cm.check_subset(allowed)?;
        if n > allowed.len() {
            return Err(ArchError::TooFewQubits {
                logical: n,
                physical: allowed.len(),
            });
        }
        if !cm.is_connected(allowed) {
            return Err(ArchError::Disconnected(allowed.to_vec()));
        }
        let count = placement_count(allowed.len(), n);
        if count > cap {
            return Err(ArchError::TooManyPlacements {
                placements: count,
                cap,
            });
        }

        let mut placements = Vec::with_capacity(count as usize);
        enumerate(allowed, n, &mut Vec::with_capacity(n), &mut placements);
        let index: HashMap<Vec<usize>, u32> = placements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.0.clone(), i as u32))
            .collect();

        let edges = cm.undirected_edges_within(allowed);
        let mut next = Vec::with_capacity(placements.len() * edges.len());
        for p in &placements {
            for &(a, b) in &edges {
                let mut q = p.clone();
                q.swap_physical(a, b);
                next.push(index[&q.0]);
            }
        }
        let rows = (0..placements.len()).map(|_| OnceLock::new()).collect();
        Ok(SwapTable {
            n,
            allowed: allowed.to_vec(),
            edges,
            placements,
            index,
            next,
            rows,
        })
    }

    /// Process-wide memoized table for `(cm, n, allowed)`.
    pub fn shared(
        cm: &CouplingMap,
        n: usize,
        allowed: &[usize],
    ) -> Result<Arc<SwapTable>, ArchError> {
        type Key = (usize, Vec<(usize, usize)>, usize, Vec<usize>);
        static CACHE: OnceLock<Mutex<HashMap<Key, Arc<SwapTable>>>> = OnceLock::new();
        let key = (cm.num_qubits(), cm.edges().collect(), n, allowed.to_vec());
        let cache = CACHE.get_or_init(Default::default);
        if let Some(t) = cache.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(SwapTable::build(cm, n, allowed)?);
        cache
            .lock()
            .expect("cache lock")
            .entry(key)
            .or_insert_with(|| Arc::clone(&table));
        Ok(table)
    }

    pub fn num_logical(&self) -> usize {
        self.n
    }

    pub fn allowed(&self) -> &[usize] {
        &self.allowed
    }

    /// Undirected SWAP edges inside the subset, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// All placements, in lexicographic order of their assignment vectors.
    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    pub fn index_of(&self, p: &Placement) -> Option<usize> {
        self.index.get(&p.0).map(|&i| i as usize)
    }

    /// Placement reached from placement `p` by swapping edge number `e`.
    pub fn neighbor(&self, p: usize, e: usize) -> usize {
        self.next[p * self.edges.len() + e] as usize
    }

    /// Distances from placement `src` to every placement.
    pub fn row(&self, src: usize) -> &[u16] {
        self.rows[src].get_or_init(|| self.bfs(src))
    }

    fn bfs(&self, src: usize) -> Box<[u16]> {
        let mut dist = vec![UNREACHED; self.placements.len()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(p) = queue.pop_front() {
            let d = dist[p] + 1;
            for e in 0..self.edges.len() {
                let q = self.neighbor(p, e);
                if dist[q] == UNREACHED {
                    dist[q] = d;
                    queue.push_back(q);
                }
            }
        }
        debug_assert!(dist.iter().all(|&d| d != UNREACHED));
        dist.into_boxed_slice()
    }

    pub fn distance_by_index(&self, a: usize, b: usize) -> u32 {
        self.row(a)[b] as u32
    }

    /// Minimal SWAP count turning `a` into `b`; `None` if either placement is
    /// not covered by this table.
    pub fn distance(&self, a: &Placement, b: &Placement) -> Option<u32> {
        Some(self.distance_by_index(self.index_of(a)?, self.index_of(b)?))
    }

    /// One shortest SWAP sequence from `a` to `b`. Among the candidate edges
    /// at every step the lexicographically first one is taken.
    pub fn witness_by_index(&self, a: usize, b: usize) -> Vec<(usize, usize)> {
        // Swaps are involutions, so distances from b are distances to b.
        let to_b = self.row(b);
        let mut cur = a;
        let mut out = Vec::with_capacity(to_b[a] as usize);
        while cur != b {
            let (e, q) = (0..self.edges.len())
                .map(|e| (e, self.neighbor(cur, e)))
                .find(|&(_, q)| to_b[q] + 1 == to_b[cur])
                .expect("bfs distances are consistent");
            out.push(self.edges[e]);
            cur = q;
        }
        out
    }

    pub fn witness(&self, a: &Placement, b: &Placement) -> Option<Vec<(usize, usize)>> {
        Some(self.witness_by_index(self.index_of(a)?, self.index_of(b)?))
    }
}

fn enumerate(allowed: &[usize], n: usize, current: &mut Vec<usize>, out: &mut Vec<Placement>) {
    if current.len() == n {
        out.push(Placement(current.clone()));
        return;
    }
    for &p in allowed {
        if !current.contains(&p) {
            current.push(p);
            enumerate(allowed, n, current, out);
            current.pop();
        }
    }
}

/// Minimal number of coupling-edge SWAPs realizing `pi`, where the state of
/// physical qubit `i` ends up on `pi[i]`.
pub fn swaps_of_permutation(cm: &CouplingMap, pi: &[usize]) -> Result<u32, ArchError> {
    let m = cm.num_qubits();
    let mut seen = vec![false; m];
    if pi.len() != m || pi.iter().any(|&p| p >= m || std::mem::replace(&mut seen[p], true)) {
        return Err(ArchError::NotAPermutation(m));
    }
    let table = SwapTable::shared(cm, m, &cm.all_qubits())?;
    let identity = Placement((0..m).collect());
    Ok(table
        .distance(&identity, &Placement(pi.to_vec()))
        .expect("both placements are full permutations"))
}
