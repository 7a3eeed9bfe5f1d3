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

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{anyhow, Context};
use qxmap::verifier::{trace_tracking, MAX_SIM_QUBITS};
use qxmap::wcnf::{decode_model, emit_sidecar, emit_wcnf, parse_model, parse_sidecar};
use qxmap::{
    build_mapped_circuit, check_coupling_legal, check_unitary_equivalence, emit_qasm, encode as encode_instance,
    extract_skeleton, parse_mapped_qasm, MappingSolution, PointSet, QuantumCircuit,
};

use crate::common::{
    load_arch, load_circuit, mode_points, oracle_cost, run_mode, CmdResult, Failure, Mode,
};
use crate::Target;

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{}{suffix}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Writes the mapped circuit and solution; the report goes to stdout when
/// the circuit goes to a file and to stderr otherwise.
fn emit_outputs(
    circuit: &QuantumCircuit,
    sol: &MappingSolution,
    cm: &qxmap::CouplingMap,
    out: Option<PathBuf>,
    solution: Option<PathBuf>,
    mut report: String,
) -> anyhow::Result<()> {
    let mc = build_mapped_circuit(circuit, sol, cm)?;
    writeln!(report, "mapped gates: {}", mc.len())?;
    let qasm = emit_qasm(&mc);
    let json = serde_json::to_string_pretty(sol)? + "\n";
    let solution = solution.or_else(|| out.as_deref().map(|p| sibling(p, ".sol.json")));
    if let Some(p) = &solution {
        write(p, &json)?;
    }
    match &out {
        Some(p) => {
            write(p, &qasm)?;
            print!("{report}");
        }
        None => {
            print!("{qasm}");
            eprint!("{report}");
        }
    }
    Ok(())
}

pub fn map(
    input: &Path,
    target: &Target,
    out: Option<PathBuf>,
    solution: Option<PathBuf>,
    timeout: u64,
    oracle_check: bool,
) -> CmdResult {
    let cm = load_arch(&target.arch)?;
    let circuit = load_circuit(input)?;
    let run = run_mode(
        &circuit,
        &cm,
        target.mode,
        &target.points,
        Duration::from_secs(timeout),
    )?;
    let sol = &run.solution;
    let mut report = String::new();
    writeln!(report, "mode: {}", target.mode)?;
    writeln!(report, "n: {}", circuit.num_qubits())?;
    writeln!(report, "original cost: {}", circuit.original_cost())?;
    writeln!(report, "permutation points: {}", run.points.len())?;
    writeln!(report, "F: {}", sol.cost)?;
    writeln!(report, "swaps: {}", sol.swap_count())?;
    writeln!(report, "switched cnots: {}", sol.switch_count())?;
    writeln!(report, "runtime: {:.3} s", run.elapsed.as_secs_f64())?;
    let mut mismatch = None;
    if oracle_check {
        match oracle_cost(&run, &cm, target.mode) {
            Some(Some(c)) if c == sol.cost => writeln!(report, "oracle: agrees ({c})")?,
            Some(found) => {
                let shown = found.map_or("none".to_string(), |c| c.to_string());
                writeln!(report, "oracle: DISAGREES ({shown})")?;
                mismatch = Some(shown);
            }
            None => writeln!(report, "oracle: skipped (enumeration cap reached)")?,
        }
    }
    emit_outputs(&circuit, sol, &cm, out, solution, report)?;
    if let Some(shown) = mismatch {
        return Err(anyhow!("solver cost {} differs from enumeration ({shown})", sol.cost).into());
    }
    Ok(())
}

pub fn encode(
    input: &Path,
    target: &Target,
    subset: Option<Vec<usize>>,
    out: &Path,
    vars: Option<PathBuf>,
) -> CmdResult {
    let cm = load_arch(&target.arch)?;
    let circuit = load_circuit(input)?;
    let skeleton = extract_skeleton(&circuit);
    if skeleton.is_empty() {
        return Err(anyhow!("circuit has no CNOT gates; there is nothing to encode").into());
    }
    let points = mode_points(target.mode, &target.points, &skeleton, &cm)?;
    let allowed = match subset {
        Some(mut s) => {
            s.sort_unstable();
            s.dedup();
            s
        }
        None if target.mode == Mode::ExactSubsets => {
            return Err(anyhow!("--mode exact-subsets needs the subset to encode (--subset)").into())
        }
        None => cm.all_qubits(),
    };
    let mut inst = encode_instance(&skeleton, &cm, &allowed, &points)?;
    inst.meta.circuit = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    write(out, &emit_wcnf(&inst))?;
    let vars = vars.unwrap_or_else(|| sibling(out, ".vars"));
    write(&vars, &emit_sidecar(&inst))?;
    let b = &inst.book;
    println!(
        "variables: {} (x {}, y {}, z {}, aux {})",
        inst.var_count,
        b.x_count(),
        b.y_count(),
        b.z_count(),
        b.aux_count()
    );
    println!("hard clauses: {}", inst.hard.len());
    println!("soft clauses: {}", inst.soft.len());
    Ok(())
}

pub fn decode(
    input: &Path,
    arch: &str,
    vars: &Path,
    model: &Path,
    out: Option<PathBuf>,
    solution: Option<PathBuf>,
) -> CmdResult {
    let cm = load_arch(arch)?;
    let circuit = load_circuit(input)?;
    let skeleton = extract_skeleton(&circuit);
    let read = |p: &Path| fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()));
    let book = parse_sidecar(&read(vars)?).context("in variable map")?;
    if book.num_cnots() != skeleton.len() || book.num_logical() != skeleton.n {
        return Err(anyhow!(
            "variable map describes {} CNOTs on {} qubits, circuit has {} on {}",
            book.num_cnots(),
            book.num_logical(),
            skeleton.len(),
            skeleton.n
        )
        .into());
    }
    let model = parse_model(&read(model)?, book.var_count()).context("in model")?;
    let decoded = decode_model(&book, &model)?;
    let sol = decoded.to_solution(&book, &cm)?;
    let points: PointSet = book.y_blocks().iter().map(|b| b.point).collect();
    sol.validate(&skeleton, &cm, Some(&points))?;
    let mut report = String::new();
    writeln!(report, "F: {}", sol.cost)?;
    writeln!(report, "swaps: {}", sol.swap_count())?;
    writeln!(report, "switched cnots: {}", sol.switch_count())?;
    emit_outputs(&circuit, &sol, &cm, out, solution, report)?;
    Ok(())
}

pub fn verify(original: &Path, mapped: &Path, solution: &Path, arch: &str) -> CmdResult {
    let cm = load_arch(arch)?;
    let circuit = load_circuit(original)?;
    let text = fs::read_to_string(mapped)
        .with_context(|| format!("cannot read {}", mapped.display()))?;
    let mc = parse_mapped_qasm(&text).with_context(|| format!("in {}", mapped.display()))?;
    let sol: MappingSolution = serde_json::from_str(
        &fs::read_to_string(solution)
            .with_context(|| format!("cannot read {}", solution.display()))?,
    )
    .with_context(|| format!("in {}", solution.display()))?;

    let mut failed = Vec::new();
    let skeleton = extract_skeleton(&circuit);
    match sol.validate(&skeleton, &cm, None) {
        Ok(()) => println!("solution: valid (F = {})", sol.cost),
        Err(e) => {
            println!("solution: invalid ({e})");
            failed.push("solution");
        }
    }
    let legal = check_coupling_legal(&mc, &cm);
    println!("coupling_legal: {legal}");
    if !legal {
        failed.push("coupling_legal");
    }
    match trace_tracking(&circuit, &mc, &sol) {
        Ok(()) => println!("tracking_ok: true"),
        Err(e) => {
            println!("tracking_ok: false ({e})");
            failed.push("tracking_ok");
        }
    }
    if mc.num_qubits.max(circuit.num_qubits()) <= MAX_SIM_QUBITS {
        let r = check_unitary_equivalence(&circuit, &mc, &sol, &cm)?;
        println!(
            "unitary_ok: {} (max deviation {:.3e})",
            r.unitary_ok, r.max_deviation
        );
        if !r.unitary_ok {
            failed.push("unitary_ok");
        }
    } else {
        println!("unitary_ok: skipped (more than {MAX_SIM_QUBITS} qubits)");
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::from(anyhow!(
            "verification failed: {}",
            failed.join(", ")
        )))
    }
}
