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

//! Weighted DIMACS (WCNF) output, the variable-map sidecar, and decoding of
//! models returned by external MaxSAT solvers.

use std::fmt::Write as _;

use thiserror::Error;

use crate::architecture::{CouplingMap, Placement};
use crate::error::ArchError;
use crate::solver::MappingSolution;
use crate::swap_table::SwapTable;
use crate::encoder::{Assignment, EncodedInstance, Lit, VarBook, VarKind, YBlock};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WcnfError {
    #[error("line {0}: {1}")]
    Parse(usize, String),
    #[error("model does not assign variable {0}")]
    Unassigned(u32),
    #[error("x variables of g{0} do not describe a placement")]
    NotAPlacement(usize),
    #[error("placement changes before g{0}, which is not a permutation point")]
    ChangeOffPoint(usize),
    #[error(transparent)]
    Arch(#[from] ArchError),
}

/// Writes `inst` as `p wcnf <vars> <clauses> <top>`; hard clauses carry
/// weight `top = 1 + sum of soft weights`.
pub fn emit_wcnf(inst: &EncodedInstance) -> String {
    let top = 1 + inst.soft_weight_sum();
    let mut out = String::new();
    writeln!(out, "c qxmap weighted MaxSAT instance").unwrap();
    if !inst.meta.circuit.is_empty() {
        writeln!(out, "c circuit {}", inst.meta.circuit).unwrap();
    }
    writeln!(out, "c architecture {}", inst.meta.architecture).unwrap();
    writeln!(
        out,
        "p wcnf {} {} {}",
        inst.var_count,
        inst.hard.len() + inst.soft.len(),
        top
    )
    .unwrap();
    for clause in &inst.hard {
        write!(out, "{top}").unwrap();
        for lit in clause {
            write!(out, " {lit}").unwrap();
        }
        out.push_str(" 0\n");
    }
    for s in &inst.soft {
        writeln!(out, "{} {} 0", s.weight, s.lit).unwrap();
    }
    out
}

/// A parsed WCNF file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wcnf {
    pub var_count: u32,
    pub top: u64,
    pub hard: Vec<Vec<Lit>>,
    pub soft: Vec<(u64, Vec<Lit>)>,
}

impl Wcnf {
    /// `(all hard clauses satisfied, weight of violated soft clauses)`.
    pub fn evaluate(&self, a: &Assignment) -> Result<(bool, u64), WcnfError> {
        let value = |l: Lit| a.lit(l).ok_or(WcnfError::Unassigned(l.var()));
        let mut sat = true;
        for c in &self.hard {
            let mut any = false;
            for &l in c {
                any |= value(l)?;
            }
            sat &= any;
        }
        let mut cost = 0;
        for (w, c) in &self.soft {
            let mut any = false;
            for &l in c {
                any |= value(l)?;
            }
            if !any {
                cost += w;
            }
        }
        Ok((sat, cost))
    }
}

pub fn parse_wcnf(text: &str) -> Result<Wcnf, WcnfError> {
    let mut header = None;
    let mut hard = Vec::new();
    let mut soft = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let err = |m: &str| WcnfError::Parse(ln, m.to_string());
        if let Some(rest) = line.strip_prefix("p wcnf") {
            let f: Vec<u64> = rest
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| err("bad header"))?;
            if f.len() != 3 {
                return Err(err("expected `p wcnf <vars> <clauses> <top>`"));
            }
            header = Some((f[0] as u32, f[2]));
            continue;
        }
        let (var_count, top) = header.ok_or_else(|| err("clause before header"))?;
        let mut fields = line.split_whitespace();
        let weight: u64 = fields
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| err("bad weight"))?;
        let mut lits = Vec::new();
        let mut terminated = false;
        for f in fields {
            let v: i32 = f.parse().map_err(|_| err("bad literal"))?;
            if v == 0 {
                terminated = true;
                break;
            }
            if v.unsigned_abs() > var_count {
                return Err(err("literal exceeds declared variable count"));
            }
            lits.push(Lit::from_dimacs(v));
        }
        if !terminated {
            return Err(err("clause not terminated by 0"));
        }
        if weight >= top {
            hard.push(lits);
        } else {
            soft.push((weight, lits));
        }
    }
    let (var_count, top) = header.ok_or(WcnfError::Parse(0, "missing header".into()))?;
    Ok(Wcnf {
        var_count,
        top,
        hard,
        soft,
    })
}

/// Reads a solver model: `v` lines with signed literals, or the compact
/// `v 0110...` bit-string form. Other lines are ignored.
pub fn parse_model(text: &str, var_count: u32) -> Result<Assignment, WcnfError> {
    let mut a = Assignment::new(var_count);
    for (ln, line) in text.lines().enumerate() {
        let Some(rest) = line.trim().strip_prefix('v') else {
            continue;
        };
        let rest = rest.trim();
        let bitstring = !rest.is_empty() && rest.chars().all(|c| c == '0' || c == '1');
        if bitstring && (rest.len() > 1 || var_count == 1) {
            for (i, c) in rest.chars().enumerate().take(var_count as usize) {
                a.set(i as u32 + 1, c == '1');
            }
            continue;
        }
        for f in rest.split_whitespace() {
            let v: i32 = f
                .parse()
                .map_err(|_| WcnfError::Parse(ln + 1, format!("bad literal `{f}`")))?;
            if v != 0 && v.unsigned_abs() <= var_count {
                a.set(v.unsigned_abs(), v > 0);
            }
        }
    }
    Ok(a)
}

/// Text form of a [`VarBook`], written next to the WCNF file so models can
/// be mapped back to placements.
pub fn emit_sidecar(inst: &EncodedInstance) -> String {
    let b = &inst.book;
    let mut out = String::new();
    let join = |v: &[usize]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
    writeln!(out, "c qxmap variable map").unwrap();
    writeln!(
        out,
        "c x(k,i,j) = 1 + ((k-1)*|allowed| + slot(i))*logical + j"
    )
    .unwrap();
    writeln!(
        out,
        "c y(k,a,b) = first + a*placements + b over lexicographic placements"
    )
    .unwrap();
    writeln!(out, "circuit {}", inst.meta.circuit).unwrap();
    writeln!(out, "architecture {}", inst.meta.architecture).unwrap();
    writeln!(out, "logical {}", b.n).unwrap();
    writeln!(out, "cnots {}", b.num_cnots).unwrap();
    writeln!(out, "allowed {}", join(&b.allowed)).unwrap();
    writeln!(out, "placements {}", b.placements).unwrap();
    writeln!(out, "x 1 {}", b.x_count()).unwrap();
    for y in &b.y_blocks {
        writeln!(out, "y {} {} {}", y.point, y.first, y.first + y.count - 1).unwrap();
    }
    writeln!(out, "z {} {}", b.z_first, b.z_first + b.z_count() - 1).unwrap();
    writeln!(out, "aux {} {}", b.aux_first, b.aux_first + b.aux_count).unwrap();
    out
}

pub fn parse_sidecar(text: &str) -> Result<VarBook, WcnfError> {
    let mut n = None;
    let mut cnots = None;
    let mut allowed = None;
    let mut placements = None;
    let mut y_blocks = Vec::new();
    let mut z_first = None;
    let mut aux = None;
    for (ln, line) in text.lines().enumerate() {
        let err = || WcnfError::Parse(ln + 1, format!("bad sidecar line `{line}`"));
        let mut f = line.split_whitespace();
        let Some(key) = f.next() else { continue };
        let nums = || -> Result<Vec<usize>, WcnfError> {
            line.split_whitespace()
                .skip(1)
                .map(|v| v.parse().map_err(|_| err()))
                .collect()
        };
        match key {
            "c" | "circuit" | "architecture" | "x" => {}
            "logical" => n = nums()?.first().copied(),
            "cnots" => cnots = nums()?.first().copied(),
            "allowed" => allowed = Some(nums()?),
            "placements" => placements = nums()?.first().copied(),
            "y" => {
                let v = nums()?;
                if v.len() != 3 {
                    return Err(err());
                }
                y_blocks.push(YBlock {
                    point: v[0],
                    first: v[1] as u32,
                    count: (v[2] - v[1] + 1) as u32,
                });
            }
            "z" => z_first = nums()?.first().map(|&v| v as u32),
            "aux" => {
                let v = nums()?;
                if v.len() != 2 {
                    return Err(err());
                }
                aux = Some((v[0] as u32, (v[1] - v[0]) as u32));
            }
            _ => return Err(err()),
        }
    }
    let missing = |what: &str| WcnfError::Parse(0, format!("sidecar lacks `{what}`"));
    let (aux_first, aux_count) = aux.ok_or_else(|| missing("aux"))?;
    Ok(VarBook {
        n: n.ok_or_else(|| missing("logical"))?,
        allowed: allowed.ok_or_else(|| missing("allowed"))?,
        num_cnots: cnots.ok_or_else(|| missing("cnots"))?,
        placements: placements.ok_or_else(|| missing("placements"))?,
        y_blocks,
        z_first: z_first.ok_or_else(|| missing("z"))?,
        aux_first,
        aux_count,
    })
}

/// Placements and switch flags read off a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedModel {
    /// `None` where the `x` layer of a CNOT is not a placement.
    pub placements: Vec<Option<Placement>>,
    pub switches: Vec<bool>,
    /// `(k, from, to)` for every true transition variable.
    pub transitions: Vec<(usize, usize, usize)>,
}

pub fn decode_model(book: &VarBook, model: &Assignment) -> Result<DecodedModel, WcnfError> {
    let mut placements = Vec::with_capacity(book.num_cnots());
    let mut switches = Vec::with_capacity(book.num_cnots());
    for k in 1..=book.num_cnots() {
        let mut assign = Vec::with_capacity(book.num_logical());
        for j in 0..book.num_logical() {
            let mut hosts = Vec::new();
            for &i in book.allowed() {
                let v = book.x(k, i, j);
                if model.get(v).ok_or(WcnfError::Unassigned(v))? {
                    hosts.push(i);
                }
            }
            assign.push(if hosts.len() == 1 { Some(hosts[0]) } else { None });
        }
        let p = assign
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .map(Placement::new)
            .filter(Placement::is_injective);
        placements.push(p);
        let z = book.z(k);
        switches.push(model.get(z).ok_or(WcnfError::Unassigned(z))?);
    }
    let mut transitions = Vec::new();
    for block in book.y_blocks() {
        for v in block.first..block.first + block.count {
            if model.get(v) == Some(true) {
                if let Some(VarKind::Y { k, from, to }) = book.kind_of(v) {
                    transitions.push((k, from, to));
                }
            }
        }
    }
    Ok(DecodedModel {
        placements,
        switches,
        transitions,
    })
}

impl DecodedModel {
    /// Rebuilds a mapping from the placements of the model. SWAP sequences
    /// are recomputed as shortest ones between consecutive placements, so
    /// the cost matches the model's whenever its transitions are minimal.
    pub fn to_solution(
        &self,
        book: &VarBook,
        cm: &CouplingMap,
    ) -> Result<MappingSolution, WcnfError> {
        let mut placements = Vec::with_capacity(self.placements.len());
        for (k, p) in self.placements.iter().enumerate() {
            placements.push(p.clone().ok_or(WcnfError::NotAPlacement(k + 1))?);
        }
        let Some(initial) = placements.first().cloned() else {
            return Err(WcnfError::NotAPlacement(1));
        };
        let table = SwapTable::shared(cm, book.num_logical(), book.allowed())?;
        let mut swap_sequences = vec![Vec::new()];
        for k in 2..=placements.len() {
            let (a, b) = (&placements[k - 2], &placements[k - 1]);
            if a == b {
                swap_sequences.push(Vec::new());
                continue;
            }
            if !book.y_blocks().iter().any(|blk| blk.point == k) {
                return Err(WcnfError::ChangeOffPoint(k));
            }
            let seq = table.witness(a, b).ok_or(WcnfError::NotAPlacement(k))?;
            swap_sequences.push(seq);
        }
        let mut sol = MappingSolution {
            initial,
            placements,
            switches: self.switches.clone(),
            swap_sequences,
            cost: 0,
            subset_used: book.allowed().to_vec(),
        };
        sol.cost = sol.computed_cost();
        Ok(sol)
    }
}
