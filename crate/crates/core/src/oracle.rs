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

//! Exhaustive reference search for tiny instances.
//!
//! Enumerates placement sequences (one placement per segment between
//! permutation points) depth first, pruning any prefix whose cost already
//! reaches the best complete sequence found. It shares no search code with
//! [`crate::solver`] and exists to cross-check it.

use std::collections::{HashMap, VecDeque};

use crate::architecture::CouplingMap;
use crate::circuit::CnotSkeleton;
use crate::error::{ArchError, SolveError};
use crate::strategies::PointSet;

/// Default bound on examined (segment, placement) candidates.
pub const DEFAULT_ORACLE_CAP: u64 = 200_000_000;

/// Minimal cost by enumeration, `Ok(None)` if no valid mapping exists.
pub fn brute_force_oracle(
    skeleton: &CnotSkeleton,
    cm: &CouplingMap,
    allowed: &[usize],
    points: &PointSet,
) -> Result<Option<u64>, SolveError> {
    brute_force_oracle_with_cap(skeleton, cm, allowed, points, DEFAULT_ORACLE_CAP)
}

pub fn brute_force_oracle_with_cap(
    skeleton: &CnotSkeleton,
    cm: &CouplingMap,
    allowed: &[usize],
    points: &PointSet,
    cap: u64,
) -> Result<Option<u64>, SolveError> {
    let len = skeleton.len();
    if len == 0 {
        return Err(SolveError::EmptySkeleton);
    }
    if let Some(&bad) = points.iter().find(|&&k| k < 2 || k > len) {
        return Err(SolveError::BadPoint(bad, len));
    }
    if allowed.len() < skeleton.n {
        return Err(ArchError::TooFewQubits {
            logical: skeleton.n,
            physical: allowed.len(),
        }
        .into());
    }
    if !cm.is_connected(allowed) {
        return Err(ArchError::Disconnected(allowed.to_vec()).into());
    }
    let mut placements = Vec::new();
    all_placements(allowed, skeleton.n, &mut Vec::new(), &mut placements);
    let index: HashMap<&[usize], usize> = placements
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let edges = cm.undirected_edges_within(allowed);

    // segments[s] = CNOT positions sharing one placement
    let mut segments: Vec<Vec<usize>> = Vec::new();
    for k in 1..=len {
        if k == 1 || points.contains(&k) {
            segments.push(Vec::new());
        }
        segments.last_mut().expect("segment opened").push(k);
    }

    // Direction penalty of placing segment s on placement p, None if illegal.
    let penalty = |s: usize, p: &[usize]| -> Option<u64> {
        segments[s].iter().try_fold(0u64, |acc, &k| {
            let g = skeleton.gate(k);
            let (c, t) = (p[g.control], p[g.target]);
            if cm.has_edge(c, t) {
                Some(acc)
            } else if cm.has_edge(t, c) {
                Some(acc + 4)
            } else {
                None
            }
        })
    };
    let penalties: Vec<Vec<Option<u64>>> = (0..segments.len())
        .map(|s| placements.iter().map(|p| penalty(s, p)).collect())
        .collect();

    let mut search = Search {
        placements: &placements,
        index: &index,
        edges: &edges,
        rows: vec![None; placements.len()],
        penalties: &penalties,
        best: None,
        visited: 0,
        cap,
    };
    search.descend(0, None, 0)?;
    Ok(search.best)
}

fn all_placements(allowed: &[usize], n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for &p in allowed {
        if !cur.contains(&p) {
            cur.push(p);
            all_placements(allowed, n, cur, out);
            cur.pop();
        }
    }
}

struct Search<'a> {
    placements: &'a [Vec<usize>],
    index: &'a HashMap<&'a [usize], usize>,
    edges: &'a [(usize, usize)],
    rows: Vec<Option<Vec<u64>>>,
    penalties: &'a [Vec<Option<u64>>],
    best: Option<u64>,
    visited: u64,
    cap: u64,
}

impl Search<'_> {
    /// SWAP counts from placement `src` to every placement, by plain BFS
    /// over single-edge exchanges.
    fn row(&mut self, src: usize) -> &[u64] {
        if self.rows[src].is_none() {
            let mut dist = vec![u64::MAX; self.placements.len()];
            dist[src] = 0;
            let mut queue = VecDeque::from([src]);
            while let Some(p) = queue.pop_front() {
                for &(a, b) in self.edges {
                    let next: Vec<usize> = self.placements[p]
                        .iter()
                        .map(|&q| if q == a { b } else if q == b { a } else { q })
                        .collect();
                    let q = self.index[next.as_slice()];
                    if dist[q] == u64::MAX {
                        dist[q] = dist[p] + 1;
                        queue.push_back(q);
                    }
                }
            }
            self.rows[src] = Some(dist);
        }
        self.rows[src].as_deref().expect("row filled")
    }

    fn descend(&mut self, seg: usize, prev: Option<usize>, so_far: u64) -> Result<(), SolveError> {
        if seg == self.penalties.len() {
            if self.best.map_or(true, |b| so_far < b) {
                self.best = Some(so_far);
            }
            return Ok(());
        }
        // Staying put first tends to find a tight bound early.
        let candidates: Vec<usize> = prev
            .into_iter()
            .chain((0..self.placements.len()).filter(|&p| Some(p) != prev))
            .collect();
        for p in candidates {
            self.visited += 1;
            if self.visited > self.cap {
                return Err(SolveError::CapExceeded(self.cap));
            }
            let Some(pen) = self.penalties[seg][p] else {
                continue;
            };
            let moved = match prev {
                Some(q) => 7 * self.row(q)[p],
                None => 0,
            };
            let cost = so_far + moved + pen;
            if self.best.is_some_and(|b| cost >= b) {
                continue;
            }
            self.descend(seg + 1, Some(p), cost)?;
        }
        Ok(())
    }
}
