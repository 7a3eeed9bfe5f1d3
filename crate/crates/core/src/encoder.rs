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

//! Boolean formulation of the mapping problem as weighted MaxSAT.
//!
//! Variables:
//!
//! * `x(k, i, j)`: logical qubit `j` sits on physical qubit `i` right before
//!   CNOT `g_k`. One per CNOT, physical qubit of the subset and logical qubit.
//! * `y(k, a, b)`: before `g_k` the placement moves from `a` to `b`. One per
//!   permutation point and ordered pair of placements.
//! * `z(k)`: `g_k` runs with control and target exchanged.
//! * auxiliaries, each defined as the conjunction of two `x` literals.
//!
//! Hard clauses make every `x` layer a placement, make every CNOT executable
//! in one orientation, tie `y` to the layers it connects, and define `z`.
//! Soft clauses `¬y(k, a, b)` weigh `7 * swaps(a, b)` and `¬z(k)` weighs 4, so
//! the cost of an optimal model is the number of inserted gates.

use std::fmt;
use std::ops::Not;

use crate::architecture::CouplingMap;
use crate::circuit::CnotSkeleton;
use crate::error::EncodeError;
use crate::solver::{MappingSolution, SWAP_COST, SWITCH_COST};
use crate::strategies::PointSet;
use crate::swap_table::{placement_rank, SwapTable};

/// Upper bound on `y` variables in a single instance.
pub const MAX_TRANSITION_VARS: u128 = 50_000_000;

/// A literal in DIMACS convention: positive or negated variable id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(i32);

impl Lit {
    pub fn pos(var: u32) -> Lit {
        Lit(var as i32)
    }

    pub fn neg(var: u32) -> Lit {
        Lit(-(var as i32))
    }

    pub fn from_dimacs(v: i32) -> Lit {
        assert_ne!(v, 0, "0 is not a literal");
        Lit(v)
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_negated(self) -> bool {
        self.0 < 0
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type Clause = Vec<Lit>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SoftClause {
    pub weight: u64,
    pub lit: Lit,
}

/// Auxiliary variable standing for the conjunction of `inputs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxDef {
    pub var: u32,
    pub inputs: [Lit; 2],
}

/// Transition variables of one permutation point, `count = P * P` ids
/// starting at `first`, pair `(a, b)` at offset `a * P + b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct YBlock {
    pub point: usize,
    pub first: u32,
    pub count: u32,
}

/// What a variable id stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    X {
        k: usize,
        physical: usize,
        logical: usize,
    },
    Y {
        k: usize,
        from: usize,
        to: usize,
    },
    Z {
        k: usize,
    },
    Aux,
}

/// Id layout of an instance. Ids are dense and 1-based: all `x`, then the
/// `y` blocks in point order, then `z`, then auxiliaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarBook {
    pub(crate) n: usize,
    pub(crate) allowed: Vec<usize>,
    pub(crate) num_cnots: usize,
    pub(crate) placements: usize,
    pub(crate) y_blocks: Vec<YBlock>,
    pub(crate) z_first: u32,
    pub(crate) aux_first: u32,
    pub(crate) aux_count: u32,
}

impl VarBook {
    pub fn num_logical(&self) -> usize {
        self.n
    }

    pub fn allowed(&self) -> &[usize] {
        &self.allowed
    }

    pub fn num_cnots(&self) -> usize {
        self.num_cnots
    }

    /// Placements per layer (the `P` of the `y` blocks).
    pub fn placement_count(&self) -> usize {
        self.placements
    }

    pub fn y_blocks(&self) -> &[YBlock] {
        &self.y_blocks
    }

    pub fn x_count(&self) -> u32 {
        (self.num_cnots * self.allowed.len() * self.n) as u32
    }

    pub fn y_count(&self) -> u32 {
        self.y_blocks.iter().map(|b| b.count).sum()
    }

    pub fn z_count(&self) -> u32 {
        self.num_cnots as u32
    }

    pub fn aux_count(&self) -> u32 {
        self.aux_count
    }

    pub fn var_count(&self) -> u32 {
        self.aux_first + self.aux_count - 1
    }

    /// `x(k, physical, logical)`; `k` is 1-based, `physical` must be in the
    /// subset.
    pub fn x(&self, k: usize, physical: usize, logical: usize) -> u32 {
        let slot = self
            .allowed
            .iter()
            .position(|&p| p == physical)
            .expect("physical qubit outside the encoded subset");
        1 + (((k - 1) * self.allowed.len() + slot) * self.n + logical) as u32
    }

    pub fn y(&self, k: usize, from: usize, to: usize) -> Option<u32> {
        let block = self.y_blocks.iter().find(|b| b.point == k)?;
        Some(block.first + (from * self.placements + to) as u32)
    }

    pub fn z(&self, k: usize) -> u32 {
        self.z_first + (k - 1) as u32
    }

    pub fn kind_of(&self, var: u32) -> Option<VarKind> {
        if var == 0 || var > self.var_count() {
            return None;
        }
        if var <= self.x_count() {
            let v = (var - 1) as usize;
            let logical = v % self.n;
            let slot = (v / self.n) % self.allowed.len();
            let k = v / (self.n * self.allowed.len()) + 1;
            return Some(VarKind::X {
                k,
                physical: self.allowed[slot],
                logical,
            });
        }
        if var >= self.aux_first {
            return Some(VarKind::Aux);
        }
        if var >= self.z_first {
            return Some(VarKind::Z {
                k: (var - self.z_first) as usize + 1,
            });
        }
        let block = self
            .y_blocks
            .iter()
            .find(|b| var >= b.first && var < b.first + b.count)?;
        let off = (var - block.first) as usize;
        Some(VarKind::Y {
            k: block.point,
            from: off / self.placements,
            to: off % self.placements,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstanceMeta {
    pub circuit: String,
    pub architecture: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedInstance {
    pub var_count: u32,
    pub hard: Vec<Clause>,
    pub soft: Vec<SoftClause>,
    pub aux: Vec<AuxDef>,
    pub book: VarBook,
    pub meta: InstanceMeta,
}

impl EncodedInstance {
    pub fn soft_weight_sum(&self) -> u64 {
        self.soft.iter().map(|s| s.weight).sum()
    }
}

/// Truth values indexed by variable id; unset variables are `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new(var_count: u32) -> Self {
        Assignment {
            values: vec![None; var_count as usize + 1],
        }
    }

    /// Every variable set to `value`.
    pub fn filled(var_count: u32, value: bool) -> Self {
        let mut a = Assignment::new(var_count);
        a.values[1..].fill(Some(value));
        a
    }

    pub fn var_count(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn set(&mut self, var: u32, value: bool) {
        self.values[var as usize] = Some(value);
    }

    pub fn get(&self, var: u32) -> Option<bool> {
        self.values.get(var as usize).copied().flatten()
    }

    pub fn lit(&self, lit: Lit) -> Option<bool> {
        self.get(lit.var()).map(|v| v != lit.is_negated())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluation {
    pub satisfies: bool,
    pub cost: u64,
}

struct Builder {
    hard: Vec<Clause>,
    aux: Vec<AuxDef>,
    next_var: u32,
}

impl Builder {
    fn and(&mut self, a: Lit, b: Lit) -> Lit {
        let var = self.next_var;
        self.next_var += 1;
        self.hard.push(vec![Lit::neg(var), a]);
        self.hard.push(vec![Lit::neg(var), b]);
        self.aux.push(AuxDef {
            var,
            inputs: [a, b],
        });
        Lit::pos(var)
    }
}

/// Builds the weighted MaxSAT instance for mapping `skeleton` onto the
/// physical qubits `allowed`, with placement changes permitted only before
/// the positions in `points`.
pub fn encode(
    skeleton: &CnotSkeleton,
    cm: &CouplingMap,
    allowed: &[usize],
    points: &PointSet,
) -> Result<EncodedInstance, EncodeError> {
    let len = skeleton.len();
    if len == 0 {
        return Err(EncodeError::EmptySkeleton);
    }
    if let Some(&bad) = points.iter().find(|&&k| k < 2 || k > len) {
        return Err(EncodeError::BadPoint(bad, len));
    }
    let n = skeleton.n;
    let table = SwapTable::shared(cm, n, allowed)?;
    let pcount = table.len();
    let y_total = (pcount as u128).pow(2) * points.len() as u128;
    if y_total > MAX_TRANSITION_VARS {
        return Err(EncodeError::TooLarge(y_total));
    }

    let x_count = (len * allowed.len() * n) as u32;
    let mut next = x_count + 1;
    let mut y_blocks = Vec::with_capacity(points.len());
    for &k in points {
        let count = (pcount * pcount) as u32;
        y_blocks.push(YBlock {
            point: k,
            first: next,
            count,
        });
        next += count;
    }
    let z_first = next;
    let aux_first = z_first + len as u32;
    let mut book = VarBook {
        n,
        allowed: allowed.to_vec(),
        num_cnots: len,
        placements: pcount,
        y_blocks,
        z_first,
        aux_first,
        aux_count: 0,
    };
    let mut b = Builder {
        hard: Vec::new(),
        aux: Vec::new(),
        next_var: aux_first,
    };
    let x = |k: usize, i: usize, j: usize| Lit::pos(book.x(k, i, j));

    for k in 1..=len {
        // Each logical qubit on exactly one physical qubit ...
        for j in 0..n {
            b.hard.push(allowed.iter().map(|&i| x(k, i, j)).collect());
            for (s, &i1) in allowed.iter().enumerate() {
                for &i2 in &allowed[s + 1..] {
                    b.hard.push(vec![!x(k, i1, j), !x(k, i2, j)]);
                }
            }
        }
        // ... and each physical qubit hosting at most one.
        for &i in allowed {
            for j1 in 0..n {
                for j2 in j1 + 1..n {
                    b.hard.push(vec![!x(k, i, j1), !x(k, i, j2)]);
                }
            }
        }

        // The CNOT sits on a coupling edge, natively or reversed; z marks
        // the reversed case where the native one is unavailable.
        let g = skeleton.gate(k);
        let (c, t) = (g.control, g.target);
        let mut options = Vec::new();
        let mut reversed_only = Vec::new();
        for (p, q) in cm.edges() {
            if !allowed.contains(&p) || !allowed.contains(&q) {
                continue;
            }
            options.push(b.and(x(k, p, c), x(k, q, t)));
            let rev = b.and(x(k, p, t), x(k, q, c));
            options.push(rev);
            if !cm.has_edge(q, p) {
                reversed_only.push((p, q, rev));
            }
        }
        b.hard.push(options);
        let z = Lit::pos(book.z(k));
        let mut z_implies = vec![!z];
        for &(p, q, rev) in &reversed_only {
            z_implies.push(rev);
            b.hard.push(vec![!x(k, p, t), !x(k, q, c), z]);
        }
        b.hard.push(z_implies);
    }

    // Placement changes between consecutive layers.
    for k in 2..=len {
        if points.contains(&k) {
            let mut any = Vec::with_capacity(pcount * pcount);
            for (ai, a) in table.placements().iter().enumerate() {
                for (bi, bp) in table.placements().iter().enumerate() {
                    let y = Lit::pos(book.y(k, ai, bi).expect("point has a block"));
                    any.push(y);
                    for j in 0..n {
                        b.hard.push(vec![!y, x(k - 1, a.physical(j), j)]);
                        b.hard.push(vec![!y, x(k, bp.physical(j), j)]);
                    }
                }
            }
            b.hard.push(any);
        } else {
            for &i in allowed {
                for j in 0..n {
                    b.hard.push(vec![!x(k - 1, i, j), x(k, i, j)]);
                    b.hard.push(vec![x(k - 1, i, j), !x(k, i, j)]);
                }
            }
        }
    }

    let mut soft = Vec::new();
    for block in &book.y_blocks {
        for ai in 0..pcount {
            let row = table.row(ai);
            for (bi, &d) in row.iter().enumerate() {
                if d > 0 {
                    soft.push(SoftClause {
                        weight: SWAP_COST * d as u64,
                        lit: Lit::neg(block.first + (ai * pcount + bi) as u32),
                    });
                }
            }
        }
    }
    for k in 1..=len {
        soft.push(SoftClause {
            weight: SWITCH_COST,
            lit: Lit::neg(book.z(k)),
        });
    }

    book.aux_count = b.next_var - aux_first;
    Ok(EncodedInstance {
        var_count: book.var_count(),
        hard: b.hard,
        soft,
        aux: b.aux,
        book,
        meta: InstanceMeta {
            circuit: String::new(),
            architecture: cm.name().to_string(),
        },
    })
}

/// Checks the hard clauses and sums the weights of violated soft clauses.
pub fn evaluate_assignment(
    inst: &EncodedInstance,
    assignment: &Assignment,
) -> Result<Evaluation, EncodeError> {
    for var in 1..=inst.var_count {
        if assignment.get(var).is_none() {
            return Err(EncodeError::MissingVariable(var));
        }
    }
    let value = |l: Lit| assignment.lit(l).expect("checked above");
    let satisfies = inst.hard.iter().all(|c| c.iter().any(|&l| value(l)));
    let cost = inst
        .soft
        .iter()
        .filter(|s| !value(s.lit))
        .map(|s| s.weight)
        .sum();
    Ok(Evaluation { satisfies, cost })
}

/// Translates a solver result into a model of `inst`.
pub fn solution_to_assignment(
    sol: &MappingSolution,
    inst: &EncodedInstance,
) -> Result<Assignment, EncodeError> {
    let book = &inst.book;
    let len = book.num_cnots;
    if sol.placements.len() != len || sol.switches.len() != len {
        return Err(EncodeError::ShapeMismatch(format!(
            "solution covers {} cnots, instance {len}",
            sol.placements.len()
        )));
    }
    let mut indices = Vec::with_capacity(len);
    for (k, p) in sol.placements.iter().enumerate() {
        let idx = placement_rank(&book.allowed, p).ok_or_else(|| {
            EncodeError::ShapeMismatch(format!("placement {p} for g{} not in subset", k + 1))
        })?;
        indices.push(idx);
    }

    let mut a = Assignment::filled(inst.var_count, false);
    for (k, p) in sol.placements.iter().enumerate() {
        for (j, &i) in p.as_slice().iter().enumerate() {
            a.set(book.x(k + 1, i, j), true);
        }
        a.set(book.z(k + 1), sol.switches[k]);
    }
    for block in &book.y_blocks {
        let k = block.point;
        let y = book
            .y(k, indices[k - 2], indices[k - 1])
            .expect("point has a block");
        a.set(y, true);
    }
    for def in &inst.aux {
        let v = def.inputs.iter().all(|&l| a.lit(l) == Some(true));
        a.set(def.var, v);
    }
    Ok(a)
}
