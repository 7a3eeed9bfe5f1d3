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

//! The optimum of the emitted MaxSAT instance, found by a small
//! branch-and-bound solver that only sees the WCNF text, equals the cost of
//! the built-in exact solver.

use qxmap::wcnf::{decode_model, emit_wcnf, parse_wcnf, Wcnf};
use qxmap::{
    encode, extract_skeleton, fixtures, solve_exact, Assignment, CnotSkeleton, Cnot, CouplingMap,
    PointSet, SolveError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct MaxSat<'a> {
    w: &'a Wcnf,
    vals: Vec<Option<bool>>,
    trail: Vec<u32>,
    best: Option<(u64, Vec<Option<bool>>)>,
}

impl<'a> MaxSat<'a> {
    fn new(w: &'a Wcnf) -> Self {
        MaxSat {
            w,
            vals: vec![None; w.var_count as usize + 1],
            trail: Vec::new(),
            best: None,
        }
    }

    fn lit_value(&self, lit: i32) -> Option<bool> {
        self.vals[lit.unsigned_abs() as usize].map(|v| v == (lit > 0))
    }

    fn assign(&mut self, lit: i32) {
        self.vals[lit.unsigned_abs() as usize] = Some(lit > 0);
        self.trail.push(lit.unsigned_abs());
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.vals[v as usize] = None;
        }
    }

    /// Unit propagation over the hard clauses; false on conflict.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for c in &self.w.hard {
                let mut open = None;
                let mut open_count = 0;
                let mut sat = false;
                for l in c {
                    match self.lit_value(l.to_dimacs()) {
                        Some(true) => {
                            sat = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            open_count += 1;
                            open = Some(l.to_dimacs());
                        }
                    }
                }
                if sat {
                    continue;
                }
                match open_count {
                    0 => return false,
                    1 => {
                        let lit = open.unwrap();
                        self.vals[lit.unsigned_abs() as usize] = Some(lit > 0);
                        self.trail.push(lit.unsigned_abs());
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn lower_bound(&self) -> u64 {
        self.w
            .soft
            .iter()
            .filter(|(_, c)| c.iter().all(|l| self.lit_value(l.to_dimacs()) == Some(false)))
            .map(|(wt, _)| wt)
            .sum()
    }

    fn search(&mut self) {
        let mark = self.trail.len();
        if self.propagate() {
            let lb = self.lower_bound();
            if self.best.as_ref().map_or(true, |(b, _)| lb < *b) {
                match (1..=self.w.var_count).find(|&v| self.vals[v as usize].is_none()) {
                    None => self.best = Some((lb, self.vals.clone())),
                    Some(v) => {
                        for value in [false, true] {
                            let inner = self.trail.len();
                            self.assign(if value { v as i32 } else { -(v as i32) });
                            self.search();
                            self.undo(inner);
                        }
                    }
                }
            }
        }
        self.undo(mark);
    }
}

/// Optimum of the instance and one optimal model, `None` if unsatisfiable.
fn solve_wcnf(w: &Wcnf) -> Option<(u64, Assignment)> {
    let mut s = MaxSat::new(w);
    s.search();
    s.best.map(|(cost, vals)| {
        let mut a = Assignment::new(w.var_count);
        for v in 1..=w.var_count {
            a.set(v, vals[v as usize].unwrap());
        }
        (cost, a)
    })
}

fn check(skel: &CnotSkeleton, cm: &CouplingMap, allowed: &[usize], points: &PointSet) -> Option<u64> {
    let inst = encode(skel, cm, allowed, points).unwrap();
    let w = parse_wcnf(&emit_wcnf(&inst)).unwrap();
    let exact = solve_exact(skel, cm, allowed, points);
    match (solve_wcnf(&w), exact) {
        (Some((cost, model)), Ok(sol)) => {
            assert_eq!(cost, sol.cost, "{skel:?} on {} points {points:?}", cm.name());
            let decoded = decode_model(&inst.book, &model).unwrap();
            let rebuilt = decoded.to_solution(&inst.book, cm).unwrap();
            rebuilt.validate(skel, cm, Some(points)).unwrap();
            assert_eq!(rebuilt.cost, cost);
            Some(cost)
        }
        (None, Err(SolveError::Infeasible(_))) => None,
        (got, want) => panic!("MaxSAT {:?} vs solver {:?}", got.map(|g| g.0), want.map(|s| s.cost)),
    }
}

#[test]
fn example_prefix_on_subset() {
    let example = fixtures::example_skeleton();
    let skel = CnotSkeleton::from_cnots(4, example.cnots[..2].to_vec()).unwrap();
    let qx4 = CouplingMap::ibm_qx4();
    assert!(check(&skel, &qx4, &[1, 2, 3, 4], &[2].into()).is_some());
}

#[test]
fn infeasible_instance_is_unsatisfiable() {
    let line = fixtures::line(3);
    let skel = CnotSkeleton::from_cnots(
        3,
        vec![Cnot::new(0, 1), Cnot::new(1, 2), Cnot::new(0, 2)],
    )
    .unwrap();
    assert_eq!(check(&skel, &line, &[0, 1, 2], &PointSet::new()), None);
}

#[test]
fn random_small_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let qx4 = CouplingMap::ibm_qx4();
    let line3 = fixtures::line(3);
    let bidir = CouplingMap::new("bidir3", 3, [(0, 1), (1, 0), (1, 2)]).unwrap();
    let mut costs = Vec::new();
    for round in 0..60 {
        let (cm, n, allowed): (&CouplingMap, usize, Vec<usize>) = match round % 4 {
            0 => (&line3, 2, vec![0, 1, 2]),
            1 => (&line3, 3, vec![0, 1, 2]),
            2 => (&bidir, 2, vec![0, 1, 2]),
            _ => (&qx4, 2, vec![0, 1, 2]),
        };
        let len = rng.gen_range(1..=3);
        let cnots: Vec<Cnot> = (0..len)
            .map(|_| {
                let c = rng.gen_range(0..n);
                Cnot::new(c, (c + rng.gen_range(1..n)) % n)
            })
            .collect();
        let skel = CnotSkeleton::from_cnots(n, cnots).unwrap();
        let points: PointSet = (2..=len).filter(|_| rng.gen_bool(0.6)).collect();
        costs.push(check(&skel, cm, &allowed, &points));
    }
    // the sample has to exercise both swaps and switches
    assert!(costs.iter().any(|c| c.is_some_and(|c| c >= 7)));
    assert!(costs.iter().any(|c| c.is_some_and(|c| c % 7 != 0)));
}

#[test]
fn parsed_fixture_circuit() {
    let c = qxmap::parse_qasm(
        "OPENQASM 2.0;\nqreg q[2];\nh q[0];\ncx q[0],q[1];\ncx q[1],q[0];\nt q[1];\n",
    )
    .unwrap()
    .circuit;
    let skel = extract_skeleton(&c);
    // reversing once costs 4, a swap in between would cost 7
    assert_eq!(check(&skel, &fixtures::line(2), &[0, 1], &[2].into()), Some(4));
    assert_eq!(check(&skel, &fixtures::line(2), &[0, 1], &PointSet::new()), Some(4));
}
