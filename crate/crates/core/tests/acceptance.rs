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

//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qxmap::strategies::PermutationPolicy;
use qxmap::{
    brute_force_oracle, build_mapped_circuit, check_coupling_legal, check_unitary_equivalence,
    connected_subsets, encode, evaluate_assignment, extract_skeleton, fixtures, parse_qasm,
    points_all, points_disjoint_qubits, points_odd_gates, points_qubit_triangle,
    solution_to_assignment, solve_exact, solve_with_subsets, CnotSkeleton, CouplingMap, Gate,
    MappingSolution, Placement, PointSet, Provenance, QuantumCircuit, SingleKind, SolveError,
    SwapTable, Unitary,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn running_example() -> Verdict {
    let start = Instant::now();
    let program = parse_qasm(fixtures::EXAMPLE_QASM).map_err(|e| e.to_string())?;
    let circuit = program.circuit;
    ensure(circuit.num_qubits() == 4 && circuit.len() == 8, || {
        format!("parsed {} qubits / {} gates", circuit.num_qubits(), circuit.len())
    })?;
    let skel = extract_skeleton(&circuit);
    let qx4 = CouplingMap::ibm_qx4();
    let sol = solve_exact(&skel, &qx4, &qx4.all_qubits(), &points_all(&skel))
        .map_err(|e| e.to_string())?;
    let mc = build_mapped_circuit(&circuit, &sol, &qx4).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(sol.cost == 4, || format!("F = {}", sol.cost))?;
    ensure(sol.swap_count() == 0 && sol.switch_count() == 1, || {
        format!("{} swaps, {} switches", sol.swap_count(), sol.switch_count())
    })?;
    ensure(mc.len() == 12, || format!("{} mapped gates", mc.len()))?;
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;

    // a hand-built optimal layout: q1->p4, q2->p5, q3->p3, q4->p1, g4 reversed
    let p = Placement::new(vec![3, 4, 2, 0]);
    let hand = MappingSolution {
        initial: p.clone(),
        placements: vec![p; 5],
        switches: vec![false, false, false, true, false],
        swap_sequences: vec![vec![]; 5],
        cost: 4,
        subset_used: qx4.all_qubits(),
    };
    let hand_mc = build_mapped_circuit(&circuit, &hand, &qx4).map_err(|e| e.to_string())?;
    ensure(check_coupling_legal(&hand_mc, &qx4), || "hand-built layout not coupling-legal".into())?;
    Ok(format!(
        "F={} swaps=0 switches=1 mapped_gates=12 runtime={:.1}ms",
        sol.cost,
        elapsed.as_secs_f64() * 1e3
    ))
}

fn bookkeeping() -> Verdict {
    let skel = fixtures::example_skeleton();
    let qx4 = CouplingMap::ibm_qx4();
    let points = points_all(&skel);
    let full = encode(&skel, &qx4, &qx4.all_qubits(), &points).map_err(|e| e.to_string())?;
    ensure(full.book.x_count() == 100, || format!("full x-count {}", full.book.x_count()))?;
    let subsets = connected_subsets(&qx4, 4);
    ensure(subsets.len() == 4, || format!("{} connected subsets", subsets.len()))?;
    ensure(subsets.iter().all(|s| s.contains(&2)), || {
        format!("subset without p3: {subsets:?}")
    })?;
    for s in &subsets {
        let inst = encode(&skel, &qx4, s, &points).map_err(|e| e.to_string())?;
        ensure(inst.book.x_count() == 80, || {
            format!("subset {s:?} x-count {}", inst.book.x_count())
        })?;
    }
    Ok("x=100 full, x=80 per subset, 4 connected 4-subsets all containing p3".into())
}

fn strategy_sets() -> Verdict {
    let skel = fixtures::example_skeleton();
    let qx4 = CouplingMap::ibm_qx4();
    let expect = |got: PointSet, want: &[usize], name: &str| {
        ensure(got == want.iter().copied().collect(), || {
            format!("{name}: {got:?} != {want:?}")
        })
    };
    expect(points_disjoint_qubits(&skel), &[3, 4, 5], "disjoint")?;
    expect(points_odd_gates(&skel), &[3, 5], "odd")?;
    expect(
        points_qubit_triangle(&skel, &qx4).map_err(|e| e.to_string())?,
        &[2],
        "triangle",
    )?;
    for policy in [
        PermutationPolicy::DisjointQubits,
        PermutationPolicy::OddGates,
        PermutationPolicy::QubitTriangle,
    ] {
        let points = policy.points(&skel, &qx4).map_err(|e| e.to_string())?;
        let whole = solve_exact(&skel, &qx4, &qx4.all_qubits(), &points).map_err(|e| e.to_string())?;
        let sub = solve_with_subsets(&skel, &qx4, &points).map_err(|e| e.to_string())?;
        ensure(whole.cost == 4 && sub.cost == 4, || {
            format!("{policy}: cost {} / {} on subsets", whole.cost, sub.cost)
        })?;
    }
    Ok("disjoint={3,4,5} odd={3,5} triangle={2}, all cost 4".into())
}

fn random_circuit(rng: &mut ChaCha8Rng, n: usize, cnots: usize) -> QuantumCircuit {
    let mut gates = Vec::new();
    let singles = |rng: &mut ChaCha8Rng, gates: &mut Vec<Gate>| {
        for _ in 0..rng.gen_range(0..=2) {
            let kind = *SingleKind::ALL.choose(rng).unwrap();
            gates.push(Gate::single(kind, rng.gen_range(0..n)));
        }
    };
    for _ in 0..cnots {
        singles(rng, &mut gates);
        let c = rng.gen_range(0..n);
        let t = (c + rng.gen_range(1..n)) % n;
        gates.push(Gate::cnot(c, t));
    }
    singles(rng, &mut gates);
    QuantumCircuit::new(n, gates).unwrap()
}

struct Instance {
    label: String,
    circuit: QuantumCircuit,
    skel: CnotSkeleton,
    cm: CouplingMap,
}

fn suite() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2018);
    let qx4 = CouplingMap::ibm_qx4();
    let line3 = fixtures::line(3);
    let mut out = Vec::new();
    for (cm, ns, reps) in [(&qx4, &[2usize, 3, 4][..], 10), (&line3, &[2, 3][..], 10)] {
        for &n in ns {
            for cnots in 1..=5 {
                for r in 0..reps {
                    let circuit = random_circuit(&mut rng, n, cnots);
                    out.push(Instance {
                        label: format!("{}/n{n}/c{cnots}/{r}", cm.name()),
                        skel: extract_skeleton(&circuit),
                        circuit,
                        cm: cm.clone(),
                    });
                }
            }
        }
    }
    out
}

/// A solution produced somewhere in the suite, with the search space it
/// came from.
struct Produced {
    what: String,
    sol: MappingSolution,
    points: PointSet,
}

#[derive(Default)]
struct SuiteReport {
    oracle: Vec<String>,
    oracle_checks: usize,
    encoder: Vec<String>,
    encoder_checks: usize,
    monotone: Vec<String>,
    monotone_checks: usize,
    semantic: Vec<String>,
    semantic_checks: usize,
    worst_deviation: f64,
    instances: usize,
    elapsed: Duration,
}

fn run_suite() -> SuiteReport {
    let start = Instant::now();
    let mut rep = SuiteReport::default();
    for inst in suite() {
        rep.instances += 1;
        let (skel, cm) = (&inst.skel, &inst.cm);
        let all = cm.all_qubits();
        let full = points_all(skel);
        let mut produced = Vec::new();

        let exact = solve_exact(skel, cm, &all, &full);
        let oracle = brute_force_oracle(skel, cm, &all, &full);
        rep.oracle_checks += 1;
        let exact_cost = match (&exact, &oracle) {
            (Ok(s), Ok(Some(c))) if s.cost == *c => Some(s.cost),
            (e, o) => {
                rep.oracle.push(format!("{}: solver {:?} oracle {:?}", inst.label, e.as_ref().map(|s| s.cost), o));
                None
            }
        };
        if let Ok(s) = exact {
            produced.push(Produced {
                what: "exact".into(),
                sol: s,
                points: full.clone(),
            });
        }

        let mut restricted: Vec<(String, PointSet)> = vec![("subsets".into(), full.clone())];
        for policy in [
            PermutationPolicy::DisjointQubits,
            PermutationPolicy::OddGates,
            PermutationPolicy::QubitTriangle,
        ] {
            if let Ok(points) = policy.points(skel, cm) {
                // restricted points on the whole device, against the oracle
                let a = solve_exact(skel, cm, &all, &points);
                let b = brute_force_oracle(skel, cm, &all, &points);
                rep.oracle_checks += 1;
                let agree = match (&a, &b) {
                    (Ok(s), Ok(Some(c))) => s.cost == *c,
                    (Err(SolveError::Infeasible(_)), Ok(None)) => true,
                    _ => false,
                };
                if !agree {
                    rep.oracle.push(format!(
                        "{} [{policy}]: solver {:?} oracle {:?}",
                        inst.label,
                        a.as_ref().map(|s| s.cost),
                        b
                    ));
                }
                restricted.push((policy.name().to_string(), points));
            }
        }
        for (name, points) in restricted {
            match solve_with_subsets(skel, cm, &points) {
                Ok(s) => {
                    rep.monotone_checks += 1;
                    if let Some(c) = exact_cost {
                        if c > s.cost {
                            rep.monotone
                                .push(format!("{} [{name}]: exact {c} > {}", inst.label, s.cost));
                        }
                    }
                    produced.push(Produced {
                        what: name,
                        sol: s,
                        points,
                    });
                }
                Err(SolveError::Infeasible(_)) if name != "subsets" => {}
                Err(e) => rep.monotone.push(format!("{} [{name}]: {e}", inst.label)),
            }
        }

        for p in &produced {
            rep.encoder_checks += 1;
            let verdict = encode(skel, cm, &p.sol.subset_used, &p.points)
                .map_err(|e| e.to_string())
                .and_then(|enc| {
                    let a = solution_to_assignment(&p.sol, &enc).map_err(|e| e.to_string())?;
                    evaluate_assignment(&enc, &a).map_err(|e| e.to_string())
                });
            match verdict {
                Ok(ev) if ev.satisfies && ev.cost == p.sol.cost => {}
                other => rep.encoder.push(format!(
                    "{} [{}]: F={} evaluation {:?}",
                    inst.label, p.what, p.sol.cost, other
                )),
            }

            rep.semantic_checks += 1;
            let verdict = build_mapped_circuit(&inst.circuit, &p.sol, cm)
                .map_err(|e| e.to_string())
                .and_then(|mc| {
                    let overhead_ok = mc.overhead() as u64 == p.sol.cost
                        && mc.count(Provenance::Original) == inst.circuit.len();
                    check_unitary_equivalence(&inst.circuit, &mc, &p.sol, cm)
                        .map(|r| (r, overhead_ok))
                        .map_err(|e| e.to_string())
                });
            match verdict {
                Ok((r, true)) if r.all_ok() && r.max_deviation <= 1e-10 => {
                    rep.worst_deviation = rep.worst_deviation.max(r.max_deviation);
                }
                other => rep.semantic.push(format!("{} [{}]: {:?}", inst.label, p.what, other)),
            }
        }
    }
    rep.elapsed = start.elapsed();
    rep
}

fn summarize(failures: &[String], checks: usize, detail: String) -> Verdict {
    if failures.is_empty() {
        Ok(detail)
    } else {
        let shown: Vec<_> = failures.iter().take(5).cloned().collect();
        Err(format!("{}/{} failed: {}", failures.len(), checks, shown.join("; ")))
    }
}

fn matrix_identities() -> Result<f64, String> {
    use SingleKind::H;
    let hh = |a, b| [Gate::single(H, a), Gate::single(H, b)];
    let mut worst: f64 = 0.0;
    for (i, j) in [(0, 1), (1, 0)] {
        let mut gates = hh(0, 1).to_vec();
        gates.push(Gate::cnot(j, i));
        gates.extend(hh(0, 1));
        let lhs = Unitary::from_gates(2, &gates);
        let rhs = Unitary::from_gates(2, &[Gate::cnot(i, j)]);
        worst = worst.max(lhs.max_abs_diff(&rhs));

        let mut seven = vec![Gate::cnot(i, j)];
        seven.extend(hh(i, j));
        seven.push(Gate::cnot(i, j));
        seven.extend(hh(i, j));
        seven.push(Gate::cnot(i, j));
        let u = Unitary::from_gates(2, &seven);
        // SWAP: basis |b1 b0> -> |b0 b1>
        let mut dev: f64 = 0.0;
        for r in 0..4usize {
            for c in 0..4usize {
                let swapped = ((c & 1) << 1) | (c >> 1);
                let want = if r == swapped { 1.0 } else { 0.0 };
                dev = dev.max((u.get(r, c) - want).norm());
            }
        }
        worst = worst.max(dev);
    }
    if worst <= 1e-12 {
        Ok(worst)
    } else {
        Err(format!("identity deviation {worst:e}"))
    }
}

fn metric() -> Verdict {
    let qx4 = CouplingMap::ibm_qx4();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut triples = 0;
    let mut unit_edges = 0;
    for n in [4, 5] {
        let table = SwapTable::build(&qx4, n, &qx4.all_qubits()).map_err(|e| e.to_string())?;
        for _ in 0..500 {
            let [a, b, c] = [0; 3].map(|_| rng.gen_range(0..table.len()));
            let d = |x, y| table.distance_by_index(x, y);
            ensure(d(a, a) == 0, || format!("d(a,a) != 0 for {a}"))?;
            ensure(d(a, b) == d(b, a), || format!("asymmetric {a},{b}"))?;
            ensure(d(a, c) <= d(a, b) + d(b, c), || format!("triangle {a},{b},{c}"))?;
            ensure(a == b || d(a, b) > 0, || format!("d = 0 for distinct {a},{b}"))?;
            triples += 1;
        }
        for (i, p) in table.placements().iter().enumerate() {
            for &(x, y) in table.edges() {
                let mut q = p.clone();
                q.swap_physical(x, y);
                if q == *p {
                    continue;
                }
                let j = table.index_of(&q).expect("placement in table");
                ensure(table.distance_by_index(i, j) == 1, || {
                    format!("exchange on ({x},{y}) from {p} has distance != 1")
                })?;
                unit_edges += 1;
            }
        }
    }
    Ok(format!(
        "{triples} random triples (identity, symmetry, triangle), {unit_edges} single-edge exchanges at distance 1"
    ))
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Verdict)> = vec![
        ("running-example minimum", running_example()),
        ("search-space bookkeeping", bookkeeping()),
        ("strategy point sets", strategy_sets()),
    ];
    let rep = run_suite();
    let in_time = rep.elapsed < Duration::from_secs(600);
    let mut oracle = summarize(
        &rep.oracle,
        rep.oracle_checks,
        format!(
            "{} instances, {} solver/oracle comparisons agree, suite {:.1}s",
            rep.instances,
            rep.oracle_checks,
            rep.elapsed.as_secs_f64()
        ),
    );
    if oracle.is_ok() && (!in_time || rep.instances < 200) {
        oracle = Err(format!(
            "{} instances in {:.1}s",
            rep.instances,
            rep.elapsed.as_secs_f64()
        ));
    }
    results.push(("oracle equivalence", oracle));
    results.push((
        "encoder soundness",
        summarize(
            &rep.encoder,
            rep.encoder_checks,
            format!("{} solutions satisfy all hard clauses with cost F", rep.encoder_checks),
        ),
    ));
    results.push((
        "monotonicity",
        summarize(
            &rep.monotone,
            rep.monotone_checks,
            format!("{} restricted runs, none below the exact cost", rep.monotone_checks),
        ),
    ));
    let semantic = summarize(&rep.semantic, rep.semantic_checks, String::new()).and_then(|_| {
        let id = matrix_identities()?;
        Ok(format!(
            "{} reconstructions verified (max deviation {:.1e}), identities within {:.1e}",
            rep.semantic_checks, rep.worst_deviation, id
        ))
    });
    results.push(("semantic verification", semantic));
    results.push(("swap-distance metric", metric()));

    let mut ok = true;
    for (name, verdict) in &results {
        match verdict {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                ok = false;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
