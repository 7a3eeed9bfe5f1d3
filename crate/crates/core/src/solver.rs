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

//! Exact minimal-cost mapping.
//!
//! Consecutive CNOTs without a permutation point between them share one
//! placement, so the skeleton splits into segments. Every segment becomes a
//! layer whose nodes are the placements that can execute all of its CNOTs,
//! weighted by 4 per CNOT that only fits reversed. Consecutive layers are
//! fully connected with weight 7 times the SWAP distance. A shortest path
//! through the layers is a minimal mapping; the first layer is entered for
//! free since the initial placement is arbitrary.

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::architecture::{connected_subsets, CouplingMap, Placement};
use crate::circuit::{Cnot, CnotSkeleton};
use crate::error::{SolutionError, SolveError};
use crate::strategies::PointSet;
use crate::swap_table::SwapTable;

/// Gates added per inserted SWAP (3 CNOTs and 4 H).
pub const SWAP_COST: u64 = 7;
/// Gates added per direction-switched CNOT (4 H).
pub const SWITCH_COST: u64 = 4;

/// Optional wall-clock bound for a search.
#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub deadline: Option<Instant>,
}

impl Limits {
    pub fn with_deadline(deadline: Instant) -> Self {
        Limits {
            deadline: Some(deadline),
        }
    }

    pub(crate) fn check(&self) -> Result<(), SolveError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(SolveError::Timeout),
            _ => Ok(()),
        }
    }
}

/// A mapping of every CNOT of a skeleton onto the architecture.
///
/// Vectors are indexed by CNOT position minus one. `swap_sequences[k - 1]`
/// lists the SWAPs applied right before `g_k`, always empty for `g1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingSolution {
    pub initial: Placement,
    pub placements: Vec<Placement>,
    pub switches: Vec<bool>,
    pub swap_sequences: Vec<Vec<(usize, usize)>>,
    pub cost: u64,
    pub subset_used: Vec<usize>,
}

impl MappingSolution {
    /// The mapping used for a circuit without CNOTs: logical `j` on the
    /// `j`-th qubit of `subset`, no inserted gates.
    pub fn trivial(n: usize, subset: &[usize]) -> Self {
        MappingSolution {
            initial: Placement::trivial(n, subset),
            placements: Vec::new(),
            switches: Vec::new(),
            swap_sequences: Vec::new(),
            cost: 0,
            subset_used: subset.to_vec(),
        }
    }

    pub fn swap_count(&self) -> usize {
        self.swap_sequences.iter().map(Vec::len).sum()
    }

    pub fn switch_count(&self) -> usize {
        self.switches.iter().filter(|&&s| s).count()
    }

    /// `7 * swaps + 4 * switches`.
    pub fn computed_cost(&self) -> u64 {
        SWAP_COST * self.swap_count() as u64 + SWITCH_COST * self.switch_count() as u64
    }

    pub fn final_placement(&self) -> &Placement {
        self.placements.last().unwrap_or(&self.initial)
    }

    /// Checks the solution against the skeleton and coupling map without
    /// trusting how it was produced. With `points` given, SWAPs are only
    /// accepted before those positions.
    pub fn validate(
        &self,
        skeleton: &CnotSkeleton,
        cm: &CouplingMap,
        points: Option<&PointSet>,
    ) -> Result<(), SolutionError> {
        let len = skeleton.len();
        if self.placements.len() != len
            || self.switches.len() != len
            || self.swap_sequences.len() != len
        {
            return Err(SolutionError::Shape(format!(
                "expected {len} placements, switches and swap sequences"
            )));
        }
        let in_subset = |p: &Placement| {
            p.len() == skeleton.n
                && p.is_injective()
                && p.as_slice().iter().all(|q| self.subset_used.contains(q))
        };
        if !in_subset(&self.initial) {
            return Err(SolutionError::BadPlacement(0));
        }
        let mut prev = &self.initial;
        for k in 1..=len {
            let placement = &self.placements[k - 1];
            if !in_subset(placement) {
                return Err(SolutionError::BadPlacement(k));
            }
            let swaps = &self.swap_sequences[k - 1];
            let may_swap = k >= 2 && points.map_or(true, |p| p.contains(&k));
            if !swaps.is_empty() && !may_swap {
                return Err(SolutionError::BrokenTransition(k));
            }
            let mut cur = prev.clone();
            for &(a, b) in swaps {
                if !cm.is_coupled(a, b)
                    || !self.subset_used.contains(&a)
                    || !self.subset_used.contains(&b)
                {
                    return Err(SolutionError::IllegalSwap(k, a, b));
                }
                cur.swap_physical(a, b);
            }
            if &cur != placement {
                return Err(SolutionError::BrokenTransition(k));
            }
            let Cnot { control, target } = skeleton.gate(k);
            let (pc, pt) = (placement.physical(control), placement.physical(target));
            let switched = self.switches[k - 1];
            let ok = if switched {
                cm.has_edge(pt, pc)
            } else {
                cm.has_edge(pc, pt)
            };
            if !ok {
                return Err(SolutionError::IllegalCnot(k, switched));
            }
            prev = placement;
        }
        if self.cost != self.computed_cost() {
            return Err(SolutionError::CostMismatch {
                recorded: self.cost,
                computed: self.computed_cost(),
            });
        }
        Ok(())
    }
}

pub(crate) fn check_points(points: &PointSet, len: usize) -> Result<(), SolveError> {
    match points.iter().find(|&&k| k < 2 || k > len) {
        Some(&bad) => Err(SolveError::BadPoint(bad, len)),
        None => Ok(()),
    }
}

/// Whether the CNOT runs natively (`Some(false)`), only reversed
/// (`Some(true)`), or not at all on the placement.
fn orientation(cm: &CouplingMap, p: &Placement, g: Cnot) -> Option<bool> {
    let (pc, pt) = (p.physical(g.control), p.physical(g.target));
    if cm.has_edge(pc, pt) {
        Some(false)
    } else if cm.has_edge(pt, pc) {
        Some(true)
    } else {
        None
    }
}

struct Layer {
    first: usize,
    last: usize,
    // (placement index, node weight), ascending by placement index
    nodes: Vec<(usize, u64)>,
}

fn build_layers(
    skeleton: &CnotSkeleton,
    cm: &CouplingMap,
    table: &SwapTable,
    points: &PointSet,
    limits: &Limits,
) -> Result<Vec<Layer>, SolveError> {
    let mut starts: Vec<usize> = std::iter::once(1).chain(points.iter().copied()).collect();
    starts.push(skeleton.len() + 1);
    let mut layers = Vec::with_capacity(starts.len() - 1);
    for w in starts.windows(2) {
        limits.check()?;
        let (first, last) = (w[0], w[1] - 1);
        let nodes: Vec<(usize, u64)> = table
            .placements()
            .iter()
            .enumerate()
            .filter_map(|(idx, p)| {
                let mut weight = 0;
                for k in first..=last {
                    if orientation(cm, p, skeleton.gate(k))? {
                        weight += SWITCH_COST;
                    }
                }
                Some((idx, weight))
            })
            .collect();
        if nodes.is_empty() {
            return Err(SolveError::Infeasible(first));
        }
        layers.push(Layer { first, last, nodes });
    }
    Ok(layers)
}

/// Minimal-cost mapping of `skeleton` onto the physical qubits `allowed`
/// (sorted, connected), with placement changes only before the CNOT
/// positions in `points`.
///
/// Among equally cheap mappings the lexicographically smallest sequence of
/// placements is returned.
pub fn solve_exact(
    skeleton: &CnotSkeleton,
    cm: &CouplingMap,
    allowed: &[usize],
    points: &PointSet,
) -> Result<MappingSolution, SolveError> {
    solve_exact_with(skeleton, cm, allowed, points, &Limits::default())
}

pub fn solve_exact_with(
    skeleton: &CnotSkeleton,
    cm: &CouplingMap,
    allowed: &[usize],
    points: &PointSet,
    limits: &Limits,
) -> Result<MappingSolution, SolveError> {
    if skeleton.is_empty() {
        return Err(SolveError::EmptySkeleton);
    }
    check_points(points, skeleton.len())?;
    let table = SwapTable::shared(cm, skeleton.n, allowed)?;
    let layers = build_layers(skeleton, cm, &table, points, limits)?;

    // to_go[s][i]: cheapest completion from node i of layer s, its own weight included
    let mut to_go: Vec<Vec<u64>> = vec![Vec::new(); layers.len()];
    let last = layers.len() - 1;
    to_go[last] = layers[last].nodes.iter().map(|&(_, w)| w).collect();
    for s in (0..last).rev() {
        let (here, next) = (&layers[s], &layers[s + 1]);
        let next_cost = &to_go[s + 1];
        let mut costs = Vec::with_capacity(here.nodes.len());
        for &(a, w) in &here.nodes {
            limits.check()?;
            let row = table.row(a);
            let best = next
                .nodes
                .iter()
                .zip(next_cost)
                .map(|(&(b, _), &c)| SWAP_COST * row[b] as u64 + c)
                .min()
                .expect("layers are nonempty");
            costs.push(w + best);
        }
        to_go[s] = costs;
    }

    // Forward pass: first minimizer at every layer gives the smallest sequence.
    let mut chosen = Vec::with_capacity(layers.len());
    let start = argmin_first(&to_go[0]);
    chosen.push(start);
    for s in 1..layers.len() {
        let (ai, aw) = layers[s - 1].nodes[chosen[s - 1]];
        let target = to_go[s - 1][chosen[s - 1]] - aw;
        let row = table.row(ai);
        let bi = layers[s]
            .nodes
            .iter()
            .zip(&to_go[s])
            .position(|(&(b, _), &c)| SWAP_COST * row[b] as u64 + c == target)
            .expect("optimal successor exists");
        chosen.push(bi);
    }

    let len = skeleton.len();
    let mut placements = Vec::with_capacity(len);
    let mut switches = Vec::with_capacity(len);
    let mut swap_sequences = vec![Vec::new(); len];
    for (s, layer) in layers.iter().enumerate() {
        let idx = layer.nodes[chosen[s]].0;
        let placement = &table.placements()[idx];
        if s > 0 {
            let prev = layers[s - 1].nodes[chosen[s - 1]].0;
            swap_sequences[layer.first - 1] = table.witness_by_index(prev, idx);
        }
        for k in layer.first..=layer.last {
            placements.push(placement.clone());
            switches.push(orientation(cm, placement, skeleton.gate(k)) == Some(true));
        }
    }
    Ok(MappingSolution {
        initial: placements[0].clone(),
        placements,
        switches,
        swap_sequences,
        cost: to_go[0][start],
        subset_used: allowed.to_vec(),
    })
}

fn argmin_first(v: &[u64]) -> usize {
    v.iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
        .expect("nonempty")
}

fn solution_order(a: &MappingSolution, b: &MappingSolution) -> Ordering {
    a.cost
        .cmp(&b.cost)
        .then_with(|| a.placements.cmp(&b.placements))
        .then_with(|| a.subset_used.cmp(&b.subset_used))
}

/// Solves once per connected `n`-qubit subset of the architecture and keeps
/// the cheapest result. SWAPs stay inside each subset.
pub fn solve_with_subsets(
    skeleton: &CnotSkeleton,
    cm: &CouplingMap,
    points: &PointSet,
) -> Result<MappingSolution, SolveError> {
    solve_with_subsets_with(skeleton, cm, points, &Limits::default())
}

pub fn solve_with_subsets_with(
    skeleton: &CnotSkeleton,
    cm: &CouplingMap,
    points: &PointSet,
    limits: &Limits,
) -> Result<MappingSolution, SolveError> {
    if skeleton.is_empty() {
        return Err(SolveError::EmptySkeleton);
    }
    check_points(points, skeleton.len())?;
    let subsets = connected_subsets(cm, skeleton.n);
    if subsets.is_empty() {
        return Err(SolveError::NoConnectedSubset(skeleton.n));
    }
    let results: Vec<_> = subsets
        .par_iter()
        .map(|subset| solve_exact_with(skeleton, cm, subset, points, limits))
        .collect();
    let mut best: Option<MappingSolution> = None;
    let mut first_err = None;
    for r in results {
        match r {
            Ok(sol) => {
                if best
                    .as_ref()
                    .map_or(true, |b| solution_order(&sol, b) == Ordering::Less)
                {
                    best = Some(sol);
                }
            }
            Err(SolveError::Infeasible(k)) => {
                first_err.get_or_insert(SolveError::Infeasible(k));
            }
            Err(e) => return Err(e),
        }
    }
    best.ok_or_else(|| first_err.expect("at least one subset was tried"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::strategies::points_all;

    fn skel(n: usize, pairs: &[(usize, usize)]) -> CnotSkeleton {
        CnotSkeleton::from_cnots(n, pairs.iter().map(|&(c, t)| Cnot::new(c, t)).collect())
            .unwrap()
    }

    #[test]
    fn example_minimum_is_four() {
        let s = fixtures::example_skeleton();
        let qx4 = CouplingMap::ibm_qx4();
        let sol = solve_exact(&s, &qx4, &qx4.all_qubits(), &points_all(&s)).unwrap();
        assert_eq!(sol.cost, 4);
        assert_eq!(sol.swap_count(), 0);
        assert_eq!(sol.switch_count(), 1);
        sol.validate(&s, &qx4, None).unwrap();
    }

    #[test]
    fn single_and_repeated_cnots_cost_nothing() {
        let qx4 = CouplingMap::ibm_qx4();
        for s in [skel(2, &[(0, 1)]), skel(2, &[(1, 0), (1, 0)])] {
            let sol = solve_exact(&s, &qx4, &qx4.all_qubits(), &points_all(&s)).unwrap();
            assert_eq!(sol.cost, 0);
        }
    }

    #[test]
    fn reversed_pair_on_a_line_needs_one_switch() {
        let line = fixtures::line(2);
        let s = skel(2, &[(0, 1), (1, 0)]);
        let sol = solve_exact(&s, &line, &[0, 1], &points_all(&s)).unwrap();
        assert_eq!(sol.cost, 4);
        assert_eq!(sol.switches, vec![false, true]);
    }

    #[test]
    fn swaps_are_inserted_when_cheaper() {
        // Star of interactions around q0 on a 4-line forces movement.
        let line = fixtures::line(4);
        let s = skel(4, &[(0, 1), (0, 2), (0, 3), (0, 1), (0, 2), (0, 3)]);
        let sol = solve_exact(&s, &line, &line.all_qubits(), &points_all(&s)).unwrap();
        sol.validate(&s, &line, None).unwrap();
        assert!(sol.swap_count() > 0);
    }

    #[test]
    fn restricted_points_can_be_infeasible() {
        // Three qubits all pairwise interacting on a line with no permutations.
        let line = fixtures::line(3);
        let s = skel(3, &[(0, 1), (1, 2), (0, 2)]);
        let err = solve_exact(&s, &line, &[0, 1, 2], &PointSet::new()).unwrap_err();
        assert_eq!(err, SolveError::Infeasible(1));
    }

    #[test]
    fn input_errors() {
        let qx4 = CouplingMap::ibm_qx4();
        let s = skel(2, &[(0, 1), (0, 1)]);
        let all = qx4.all_qubits();
        assert_eq!(
            solve_exact(&skel(2, &[]), &qx4, &all, &PointSet::new()),
            Err(SolveError::EmptySkeleton)
        );
        assert_eq!(
            solve_exact(&s, &qx4, &all, &[1].into()),
            Err(SolveError::BadPoint(1, 2))
        );
        assert!(matches!(
            solve_exact(&s, &qx4, &[0, 3], &PointSet::new()),
            Err(SolveError::Arch(_))
        ));
    }

    #[test]
    fn subsets_mode() {
        let qx4 = CouplingMap::ibm_qx4();
        let s = fixtures::example_skeleton();
        let sol = solve_with_subsets(&s, &qx4, &points_all(&s)).unwrap();
        assert_eq!(sol.cost, 4);
        assert!(sol.subset_used.contains(&2));

        let two = skel(2, &[(0, 1), (1, 0), (0, 1)]);
        let sol = solve_with_subsets(&two, &qx4, &points_all(&two)).unwrap();
        assert_eq!(sol.subset_used.len(), 2);
        sol.validate(&two, &qx4, None).unwrap();

        let full = skel(5, &[(0, 1), (2, 3), (3, 4), (4, 0)]);
        let a = solve_with_subsets(&full, &qx4, &points_all(&full)).unwrap();
        let b = solve_exact(&full, &qx4, &qx4.all_qubits(), &points_all(&full)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn deadline_in_the_past_times_out() {
        let qx4 = CouplingMap::ibm_qx4();
        let s = fixtures::example_skeleton();
        let limits = Limits::with_deadline(Instant::now());
        assert_eq!(
            solve_exact_with(&s, &qx4, &qx4.all_qubits(), &points_all(&s), &limits),
            Err(SolveError::Timeout)
        );
    }

    #[test]
    fn validator_catches_corruption() {
        let qx4 = CouplingMap::ibm_qx4();
        let s = fixtures::example_skeleton();
        let sol = solve_exact(&s, &qx4, &qx4.all_qubits(), &points_all(&s)).unwrap();

        let mut bad = sol.clone();
        let k = bad.switches.iter().position(|&x| x).unwrap();
        bad.switches[k] = false;
        bad.cost = bad.computed_cost();
        assert!(matches!(
            bad.validate(&s, &qx4, None),
            Err(SolutionError::IllegalCnot(_, false))
        ));

        let mut bad = sol.clone();
        bad.cost += 1;
        assert!(matches!(
            bad.validate(&s, &qx4, None),
            Err(SolutionError::CostMismatch { .. })
        ));

        let mut bad = sol.clone();
        bad.swap_sequences[2].push((3, 4));
        assert!(matches!(
            bad.validate(&s, &qx4, None),
            Err(SolutionError::BrokenTransition(3))
        ));
    }
}
