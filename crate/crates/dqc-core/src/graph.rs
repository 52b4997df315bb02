//! Qubit interaction graph: one node per wire, edge weights count the
//! two-qubit basic gates on each pair.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::partition::PartitionAssignment;

/// Symmetric weighted graph stored as a dense upper-triangular matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraph {
    n: usize,
    weights: Vec<u64>,
}

impl InteractionGraph {
    pub fn new(n: usize) -> Self {
        InteractionGraph {
            n,
            weights: vec![0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, u: usize, v: usize) -> u64 {
        if u == v {
            0
        } else {
            self.weights[u * self.n + v]
        }
    }

    pub fn add_weight(&mut self, u: usize, v: usize, w: u64) {
        assert!(u != v && u < self.n && v < self.n);
        self.weights[u * self.n + v] += w;
        self.weights[v * self.n + u] += w;
    }

    pub fn set_weight(&mut self, u: usize, v: usize, w: u64) {
        assert!(u != v && u < self.n && v < self.n);
        self.weights[u * self.n + v] = w;
        self.weights[v * self.n + u] = w;
    }

    /// Sum of weights over unordered pairs.
    pub fn total_weight(&self) -> u64 {
        let mut total = 0;
        for u in 0..self.n {
            for v in u + 1..self.n {
                total += self.weight(u, v);
            }
        }
        total
    }
}

/// Counts two-qubit interactions of a basic-library circuit.
pub fn build_interaction_graph(circuit: &Circuit) -> Result<InteractionGraph> {
    if let Some(index) = circuit.first_non_basic() {
        return Err(Error::NonBasic { index });
    }
    let mut graph = InteractionGraph::new(circuit.n_qubits);
    for gate in circuit.gates() {
        if let Some(&control) = gate.controls.first() {
            graph.add_weight(control.0, gate.target.0, 1);
        }
    }
    Ok(graph)
}

/// Sum of edge weights crossing the partition.
pub fn cut_weight(graph: &InteractionGraph, assignment: &PartitionAssignment) -> u64 {
    let mut cut = 0;
    for u in 0..graph.n() {
        for v in u + 1..graph.n() {
            if assignment.side_of(u) != assignment.side_of(v) {
                cut += graph.weight(u, v);
            }
        }
    }
    cut
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, QubitId, SingleQubitGate};
    use crate::partition::Side;
    use crate::qft::generate_qft;

    #[test]
    fn single_cnot_edge() {
        let mut c = Circuit::new(2, "one");
        c.push(Gate::cnot(QubitId(0), QubitId(1)).unwrap()).unwrap();
        let g = build_interaction_graph(&c).unwrap();
        assert_eq!(g.weight(0, 1), 1);
        assert_eq!(g.weight(1, 0), 1);
        assert_eq!(g.total_weight(), 1);
    }

    #[test]
    fn qft4_is_complete_with_weight_two() {
        let c = generate_qft(4).unwrap();
        let g = build_interaction_graph(&c).unwrap();
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    assert_eq!(g.weight(u, v), 2, "pair ({u},{v})");
                }
            }
        }
        assert_eq!(g.total_weight(), 12);
    }

    #[test]
    fn hadamards_only_give_zero_weights() {
        let mut c = Circuit::new(3, "hs");
        for i in 0..3 {
            c.push(Gate::single(SingleQubitGate::H, QubitId(i)).unwrap())
                .unwrap();
        }
        let g = build_interaction_graph(&c).unwrap();
        assert_eq!(g.total_weight(), 0);
    }

    #[test]
    fn non_basic_rejected() {
        let mut c = Circuit::new(3, "tof");
        c.push(Gate::toffoli(QubitId(0), QubitId(1), QubitId(2)).unwrap())
            .unwrap();
        assert!(matches!(
            build_interaction_graph(&c).unwrap_err(),
            Error::NonBasic { index: 0 }
        ));
    }

    #[test]
    fn cut_of_edgeless_graph_is_zero() {
        let g = InteractionGraph::new(4);
        let p = PartitionAssignment::new(vec![Side::A, Side::A, Side::B, Side::B]).unwrap();
        assert_eq!(cut_weight(&g, &p), 0);
    }
}
