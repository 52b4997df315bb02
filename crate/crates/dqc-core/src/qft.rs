//! Quantum Fourier transform generator.
//!
//! The controlled phase between each qubit pair is emitted directly in its
//! two-CNOT basic-library form, so the generated circuit needs no further
//! decomposition. No terminal swap network is appended.

use crate::circuit::{Circuit, Gate, QubitId, SingleQubitGate};
use crate::decompose::append_controlled_rk;
use crate::error::{Error, Result};

/// Builds QFT(n): for each qubit i, H(i) followed by controlled R_k gates
/// with k = j - i + 1 from every later qubit j onto i.
pub fn generate_qft(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "qft needs at least one qubit".into(),
        ));
    }
    let mut circuit = Circuit::new(n, format!("qft{n}"));
    for i in 0..n {
        circuit.push(Gate::single(SingleQubitGate::H, QubitId(i))?)?;
        for j in i + 1..n {
            let k = (j - i + 1) as u32;
            append_controlled_rk(&mut circuit, k, QubitId(j), QubitId(i))?;
        }
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::gate_counts;

    #[test]
    fn zero_qubits_rejected() {
        assert!(generate_qft(0).is_err());
    }

    #[test]
    fn single_qubit_is_one_hadamard() {
        let c = generate_qft(1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(
            c.gates()[0],
            Gate::single(SingleQubitGate::H, QubitId(0)).unwrap()
        );
    }

    #[test]
    fn qft4_gate_totals() {
        let c = generate_qft(4).unwrap();
        let counts = gate_counts(&c);
        assert_eq!(counts.total, 34);
        assert_eq!(counts.by_label["h"], 4);
        assert_eq!(counts.cnot, 12);
        assert_eq!(counts.phase(), 18);
        assert!(c.is_basic());
    }

    #[test]
    fn gate_structure_counts_scale() {
        for n in 1..=9 {
            let c = generate_qft(n).unwrap();
            let counts = gate_counts(&c);
            assert_eq!(counts.by_label.get("h").copied().unwrap_or(0), n);
            assert_eq!(counts.cnot, n * (n - 1));
            assert_eq!(counts.total, n + 5 * n * (n - 1) / 2);
        }
    }

    #[test]
    fn phase_indices_follow_pair_distance() {
        let c = generate_qft(3).unwrap();
        // Pair (0,1): k=2 -> rk3 gates; pair (0,2): k=3 -> rk4; pair (1,2): k=2.
        let counts = gate_counts(&c);
        assert_eq!(counts.by_label["rk3"], 4);
        assert_eq!(counts.by_label["rkdg3"], 2);
        assert_eq!(counts.by_label["rk4"], 2);
        assert_eq!(counts.by_label["rkdg4"], 1);
    }
}
