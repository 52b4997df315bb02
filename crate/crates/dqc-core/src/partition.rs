//! Balanced two-way qubit assignment and the Kernighan-Lin refinement pass.
//!
//! `kernighan_lin` starts from a seeded uniform random balanced split and
//! repeats gain-ordered swap passes until a pass yields no positive gain.
//! The result is canonicalized so qubit 0 always sits on side A.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::graph::InteractionGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Map qubit -> side with |count(A) - count(B)| <= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionAssignment {
    sides: Vec<Side>,
}

impl PartitionAssignment {
    pub fn new(sides: Vec<Side>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::InvalidArgument("empty partition".into()));
        }
        let a = sides.iter().filter(|s| **s == Side::A).count() as i64;
        let b = sides.len() as i64 - a;
        if (a - b).abs() > 1 {
            return Err(Error::InvalidArgument(format!(
                "unbalanced partition: {a} vs {b}"
            )));
        }
        Ok(PartitionAssignment { sides })
    }

    /// First ceil(n/2) qubits on side A, the rest on B.
    pub fn contiguous(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("empty partition".into()));
        }
        let half = n.div_ceil(2);
        Ok(PartitionAssignment {
            sides: (0..n)
                .map(|i| if i < half { Side::A } else { Side::B })
                .collect(),
        })
    }

    /// Seeded uniform random balanced split; side A gets ceil(n/2) qubits.
    pub fn random_balanced(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("empty partition".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let half = n.div_ceil(2);
        let mut sides = vec![Side::B; n];
        for &q in &order[..half] {
            sides[q] = Side::A;
        }
        Ok(PartitionAssignment { sides })
    }

    pub fn n(&self) -> usize {
        self.sides.len()
    }

    pub fn side_of(&self, qubit: usize) -> Side {
        self.sides[qubit]
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn count(&self, side: Side) -> usize {
        self.sides.iter().filter(|s| **s == side).count()
    }

    /// Swaps every label, preserving balance.
    pub fn swapped(&self) -> Self {
        PartitionAssignment {
            sides: self.sides.iter().map(|s| s.opposite()).collect(),
        }
    }

    /// Relabels so qubit 0 is on side A.
    pub fn canonicalized(&self) -> Self {
        if self.sides[0] == Side::A {
            self.clone()
        } else {
            self.swapped()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&PartitionFile {
            n: self.n(),
            side: self.sides.clone(),
        })
        .expect("partition serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PartitionFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("bad partition file: {e}")))?;
        if file.side.len() != file.n {
            return Err(Error::InvalidArgument(format!(
                "partition file lists {} sides for n = {}",
                file.side.len(),
                file.n
            )));
        }
        PartitionAssignment::new(file.side)
    }
}

#[derive(Serialize, Deserialize)]
struct PartitionFile {
    n: usize,
    side: Vec<Side>,
}

/// Which gates cross the cut. `global_indices` is strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateClassification {
    pub global_indices: Vec<usize>,
    pub local_indices: Vec<usize>,
}

impl GateClassification {
    /// Number of global gates (m_g).
    pub fn m_g(&self) -> usize {
        self.global_indices.len()
    }

    /// Position of a gate within the global order, if it is global.
    pub fn global_ordinal(&self, gate_index: usize) -> Option<usize> {
        self.global_indices.binary_search(&gate_index).ok()
    }
}

/// Splits a basic-library circuit's gates into local and global. A CNOT is
/// global exactly when its control and target live on different sides;
/// single-qubit gates are always local.
pub fn classify_gates(circuit: &Circuit, assignment: &PartitionAssignment) -> GateClassification {
    debug_assert!(circuit.is_basic());
    let mut global_indices = Vec::new();
    let mut local_indices = Vec::new();
    for (index, gate) in circuit.gates().iter().enumerate() {
        let global = gate.kind == GateKind::Cnot
            && assignment.side_of(gate.controls[0].0) != assignment.side_of(gate.target.0);
        if global {
            global_indices.push(index);
        } else {
            local_indices.push(index);
        }
    }
    GateClassification {
        global_indices,
        local_indices,
    }
}

/// Kernighan-Lin bipartitioning. Deterministic for a given seed; never
/// returns a split with a larger cut than the seeded initial one.
pub fn kernighan_lin(graph: &InteractionGraph, seed: u64) -> Result<PartitionAssignment> {
    let n = graph.n();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "kernighan-lin needs at least 2 nodes".into(),
        ));
    }
    let mut assignment = PartitionAssignment::random_balanced(n, seed)?;
    while kl_pass(graph, &mut assignment) {}
    Ok(assignment.canonicalized())
}

/// One K-L pass: builds the gain-ordered swap sequence, applies the best
/// positive prefix, and reports whether anything changed.
fn kl_pass(graph: &InteractionGraph, assignment: &mut PartitionAssignment) -> bool {
    let n = graph.n();
    // d[v] = external - internal connection cost.
    let mut d = vec![0i64; n];
    for v in 0..n {
        for u in 0..n {
            if u == v {
                continue;
            }
            let w = graph.weight(u, v) as i64;
            if assignment.side_of(u) == assignment.side_of(v) {
                d[v] -= w;
            } else {
                d[v] += w;
            }
        }
    }

    let side_a: Vec<usize> = (0..n).filter(|&v| assignment.side_of(v) == Side::A).collect();
    let side_b: Vec<usize> = (0..n).filter(|&v| assignment.side_of(v) == Side::B).collect();
    let rounds = side_a.len().min(side_b.len());

    let mut locked = vec![false; n];
    let mut swaps: Vec<(usize, usize, i64)> = Vec::with_capacity(rounds);

    for _ in 0..rounds {
        let mut best: Option<(usize, usize, i64)> = None;
        for &a in &side_a {
            if locked[a] {
                continue;
            }
            for &b in &side_b {
                if locked[b] {
                    continue;
                }
                let gain = d[a] + d[b] - 2 * graph.weight(a, b) as i64;
                // Strict improvement keeps the lowest (a, b) pair on ties.
                if best.map_or(true, |(_, _, g)| gain > g) {
                    best = Some((a, b, gain));
                }
            }
        }
        let (a, b, gain) = best.expect("rounds bounded by unlocked pairs");
        locked[a] = true;
        locked[b] = true;
        for v in 0..n {
            if locked[v] {
                continue;
            }
            let wa = graph.weight(v, a) as i64;
            let wb = graph.weight(v, b) as i64;
            if assignment.side_of(v) == Side::A {
                d[v] += 2 * wa - 2 * wb;
            } else {
                d[v] += 2 * wb - 2 * wa;
            }
        }
        swaps.push((a, b, gain));
    }

    // Best prefix of cumulative gain; ties take the shortest prefix.
    let mut best_len = 0;
    let mut best_sum = 0i64;
    let mut running = 0i64;
    for (k, &(_, _, gain)) in swaps.iter().enumerate() {
        running += gain;
        if running > best_sum {
            best_sum = running;
            best_len = k + 1;
        }
    }
    if best_sum <= 0 {
        return false;
    }
    for &(a, b, _) in &swaps[..best_len] {
        assignment.sides.swap(a, b);
    }
    true
}
