//! Circuit representation: qubits, gates, and the ordered gate list.
//!
//! Gates are indexed by their position in the circuit (0-based, left to
//! right). The "basic gate library" is CNOT plus single-qubit gates; parsers
//! may produce Toffoli/MCT/Fredkin gates, which `decompose_to_basic` rewrites
//! into the basic library.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Zero-based wire index, stable across decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QubitId(pub usize);

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// Single-qubit gate labels. `S`/`T` are kept distinct from `Rk(2)`/`Rk(3)`
/// for serialization fidelity even though they act identically in the
/// commutation table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SingleQubitGate {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    /// Phase rotation by 2*pi / 2^k.
    Rk(u32),
    RkDg(u32),
}

impl SingleQubitGate {
    /// Diagonal in the computational basis (commutes with CNOT controls).
    pub fn is_diagonal(self) -> bool {
        use SingleQubitGate::*;
        matches!(self, Z | S | Sdg | T | Tdg | Rk(_) | RkDg(_))
    }

    pub fn label(self) -> String {
        use SingleQubitGate::*;
        match self {
            X => "x".into(),
            Y => "y".into(),
            Z => "z".into(),
            H => "h".into(),
            S => "s".into(),
            Sdg => "sdg".into(),
            T => "t".into(),
            Tdg => "tdg".into(),
            Rk(k) => format!("rk{k}"),
            RkDg(k) => format!("rkdg{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Single(SingleQubitGate),
    Cnot,
    Toffoli,
    /// Multiple-controlled Toffoli with >= 3 controls.
    Mct,
    /// Controlled swap. Operands are stored as controls = [control, first
    /// swapped qubit] and target = second swapped qubit.
    Fredkin,
}

/// One circuit element. `controls` and `target` are pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub controls: Vec<QubitId>,
    pub target: QubitId,
}

impl Gate {
    pub fn single(g: SingleQubitGate, q: QubitId) -> Result<Self> {
        if let SingleQubitGate::Rk(k) | SingleQubitGate::RkDg(k) = g {
            if k < 1 {
                return Err(Error::InvalidCircuit(format!(
                    "rk phase index must be >= 1, got {k}"
                )));
            }
        }
        Ok(Gate {
            kind: GateKind::Single(g),
            controls: Vec::new(),
            target: q,
        })
    }

    pub fn cnot(control: QubitId, target: QubitId) -> Result<Self> {
        Self::checked(GateKind::Cnot, vec![control], target)
    }

    pub fn toffoli(c1: QubitId, c2: QubitId, target: QubitId) -> Result<Self> {
        Self::checked(GateKind::Toffoli, vec![c1, c2], target)
    }

    /// Multiple-controlled Toffoli; `controls.len()` must be >= 3.
    pub fn mct(controls: Vec<QubitId>, target: QubitId) -> Result<Self> {
        if controls.len() < 3 {
            return Err(Error::InvalidCircuit(format!(
                "mct requires >= 3 controls, got {}",
                controls.len()
            )));
        }
        Self::checked(GateKind::Mct, controls, target)
    }

    /// Controlled swap of `a` and `b` under `control`.
    pub fn fredkin(control: QubitId, a: QubitId, b: QubitId) -> Result<Self> {
        Self::checked(GateKind::Fredkin, vec![control, a], b)
    }

    fn checked(kind: GateKind, controls: Vec<QubitId>, target: QubitId) -> Result<Self> {
        let mut seen = controls.clone();
        seen.push(target);
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCircuit(format!(
                "duplicate operand in {} gate",
                kind_name(kind)
            )));
        }
        Ok(Gate {
            kind,
            controls,
            target,
        })
    }

    /// All wires the gate touches, controls first.
    pub fn operands(&self) -> impl Iterator<Item = QubitId> + '_ {
        self.controls.iter().copied().chain(std::iter::once(self.target))
    }

    pub fn touches(&self, q: QubitId) -> bool {
        self.target == q || self.controls.contains(&q)
    }

    pub fn is_basic(&self) -> bool {
        matches!(self.kind, GateKind::Single(_) | GateKind::Cnot)
    }

    /// Human-readable form, e.g. `cnot(q1;q0)` or `h(q2)`.
    pub fn describe(&self) -> String {
        match self.kind {
            GateKind::Single(g) => format!("{}({})", g.label(), self.target),
            _ => {
                let ctl: Vec<String> = self.controls.iter().map(|q| q.to_string()).collect();
                format!("{}({};{})", kind_name(self.kind), ctl.join(","), self.target)
            }
        }
    }
}

fn kind_name(kind: GateKind) -> &'static str {
    match kind {
        GateKind::Single(_) => "single",
        GateKind::Cnot => "cnot",
        GateKind::Toffoli => "toffoli",
        GateKind::Mct => "mct",
        GateKind::Fredkin => "fredkin",
    }
}

/// Ordered gate list over `n_qubits` wires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub name: String,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize, name: impl Into<String>) -> Self {
        Circuit {
            n_qubits,
            name: name.into(),
            gates: Vec::new(),
        }
    }

    /// Appends a gate after checking its operands are in range.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(q) = gate.operands().find(|q| q.0 >= self.n_qubits) {
            return Err(Error::InvalidCircuit(format!(
                "gate {} references {} but the circuit has {} qubits",
                gate.describe(),
                q,
                self.n_qubits
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// True when every gate is CNOT or single-qubit.
    pub fn is_basic(&self) -> bool {
        self.gates.iter().all(Gate::is_basic)
    }

    /// Index of the first non-basic gate, if any.
    pub fn first_non_basic(&self) -> Option<usize> {
        self.gates.iter().position(|g| !g.is_basic())
    }

    /// Same wires and same gate sequence; the name is ignored.
    pub fn same_structure(&self, other: &Circuit) -> bool {
        self.n_qubits == other.n_qubits && self.gates == other.gates
    }
}

/// Gate totals: `m_t` plus per-kind and per-label histograms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GateCounts {
    /// Total number of gates (m_t).
    pub total: usize,
    pub cnot: usize,
    pub single: usize,
    pub toffoli: usize,
    pub mct: usize,
    pub fredkin: usize,
    /// Counts keyed by printable label (`h`, `cnot`, `rk3`, ...).
    pub by_label: BTreeMap<String, usize>,
}

impl GateCounts {
    /// Diagonal single-qubit (phase) gates.
    pub fn phase(&self) -> usize {
        self.by_label
            .iter()
            .filter(|(label, _)| {
                matches!(label.as_str(), "z" | "s" | "sdg" | "t" | "tdg")
                    || label.starts_with("rk")
            })
            .map(|(_, n)| n)
            .sum()
    }
}

/// Tallies gate totals for a circuit.
pub fn gate_counts(circuit: &Circuit) -> GateCounts {
    let mut counts = GateCounts {
        total: circuit.len(),
        ..GateCounts::default()
    };
    for gate in circuit.gates() {
        let label = match gate.kind {
            GateKind::Single(g) => {
                counts.single += 1;
                g.label()
            }
            GateKind::Cnot => {
                counts.cnot += 1;
                "cnot".into()
            }
            GateKind::Toffoli => {
                counts.toffoli += 1;
                "toffoli".into()
            }
            GateKind::Mct => {
                counts.mct += 1;
                "mct".into()
            }
            GateKind::Fredkin => {
                counts.fredkin += 1;
                "fredkin".into()
            }
        };
        *counts.by_label.entry(label).or_insert(0) += 1;
    }
    counts
}
