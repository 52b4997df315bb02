//! Rewrites circuits into the basic gate library (CNOT + single-qubit).
//!
//! Rules:
//! - Toffoli: the standard 15-gate network (6 CNOTs, H/T/T-dagger).
//! - Fredkin(c; a, b): CNOT(b;a), Toffoli(c,a;b), CNOT(b;a), Toffoli expanded.
//! - MCT with k >= 3 controls: split the control set in half and realize the
//!   gate as B A B A, where A targets a borrowed ancilla and B is controlled
//!   on it. The ancilla is the lowest-index circuit qubit not touched by the
//!   gate; sub-gates borrow from the operands the split left idle, so the
//!   rewrite never reaches outside the gate's operands plus that one wire.

use crate::circuit::{Circuit, Gate, GateKind, QubitId, SingleQubitGate};
use crate::error::{Error, Result};

/// Appends the two-CNOT relative-phase expansion of a controlled R_k:
/// Rk+1(c), Rk+1(t), CNOT(c;t), RkDg+1(t), CNOT(c;t).
pub fn append_controlled_rk(circuit: &mut Circuit, k: u32, control: QubitId, target: QubitId) -> Result<()> {
    let half = k + 1;
    circuit.push(Gate::single(SingleQubitGate::Rk(half), control)?)?;
    circuit.push(Gate::single(SingleQubitGate::Rk(half), target)?)?;
    circuit.push(Gate::cnot(control, target)?)?;
    circuit.push(Gate::single(SingleQubitGate::RkDg(half), target)?)?;
    circuit.push(Gate::cnot(control, target)?)?;
    Ok(())
}

/// Returns an equivalent circuit containing only CNOT and single-qubit
/// gates. Basic circuits come back gate-for-gate unchanged.
pub fn decompose_to_basic(circuit: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(circuit.n_qubits, circuit.name.clone());
    for (index, gate) in circuit.gates().iter().enumerate() {
        match gate.kind {
            GateKind::Single(_) | GateKind::Cnot => out.push(gate.clone())?,
            GateKind::Toffoli => {
                push_toffoli(&mut out, gate.controls[0], gate.controls[1], gate.target)?;
            }
            GateKind::Fredkin => {
                let (c, a, b) = (gate.controls[0], gate.controls[1], gate.target);
                out.push(Gate::cnot(b, a)?)?;
                push_toffoli(&mut out, c, a, b)?;
                out.push(Gate::cnot(b, a)?)?;
            }
            GateKind::Mct => {
                let busy: Vec<QubitId> = gate.operands().collect();
                let ancilla = lowest_idle(circuit.n_qubits, &busy).ok_or(Error::Decompose {
                    index,
                    msg: format!(
                        "mct with {} controls needs an idle qubit but all {} are operands",
                        gate.controls.len(),
                        circuit.n_qubits
                    ),
                })?;
                push_mct(&mut out, &gate.controls, gate.target, ancilla, index)?;
            }
        }
    }
    Ok(out)
}

fn lowest_idle(n_qubits: usize, busy: &[QubitId]) -> Option<QubitId> {
    (0..n_qubits).map(QubitId).find(|q| !busy.contains(q))
}

/// The textbook Toffoli network: 6 CNOTs and 9 single-qubit gates.
fn push_toffoli(out: &mut Circuit, c1: QubitId, c2: QubitId, t: QubitId) -> Result<()> {
    use SingleQubitGate::{Tdg, H, T};
    out.push(Gate::single(H, t)?)?;
    out.push(Gate::cnot(c2, t)?)?;
    out.push(Gate::single(Tdg, t)?)?;
    out.push(Gate::cnot(c1, t)?)?;
    out.push(Gate::single(T, t)?)?;
    out.push(Gate::cnot(c2, t)?)?;
    out.push(Gate::single(Tdg, t)?)?;
    out.push(Gate::cnot(c1, t)?)?;
    out.push(Gate::single(T, c2)?)?;
    out.push(Gate::single(T, t)?)?;
    out.push(Gate::single(H, t)?)?;
    out.push(Gate::cnot(c1, c2)?)?;
    out.push(Gate::single(T, c1)?)?;
    out.push(Gate::single(Tdg, c2)?)?;
    out.push(Gate::cnot(c1, c2)?)?;
    Ok(())
}

/// Emits an MCT as basic gates using `ancilla` as a borrowed (dirty) wire.
///
/// With controls C split into halves C1, C2, the gate equals B A B A where
/// A = MCT(C1; ancilla) and B = MCT(C2 + ancilla; t). Recursive calls pick
/// their borrowed wires from the operands their own half leaves idle.
fn push_mct(
    out: &mut Circuit,
    controls: &[QubitId],
    target: QubitId,
    ancilla: QubitId,
    index: usize,
) -> Result<()> {
    let k = controls.len();
    debug_assert!(k >= 3);
    let k1 = k.div_ceil(2);
    let first = &controls[..k1];
    let second = &controls[k1..];

    let mut b_controls: Vec<QubitId> = second.to_vec();
    b_controls.push(ancilla);

    // Qubits idle for each sub-gate, drawn from this gate's operand set.
    let a_spare: Vec<QubitId> = {
        let mut v: Vec<QubitId> = second.to_vec();
        v.push(target);
        v
    };
    let b_spare: Vec<QubitId> = first.to_vec();

    for round in 0..2 {
        let _ = round;
        emit_half(out, &b_controls, target, &b_spare, index)?;
        emit_half(out, first, ancilla, &a_spare, index)?;
    }
    Ok(())
}

fn emit_half(
    out: &mut Circuit,
    controls: &[QubitId],
    target: QubitId,
    spare: &[QubitId],
    index: usize,
) -> Result<()> {
    match controls.len() {
        0 | 1 => Err(Error::Decompose {
            index,
            msg: "mct split produced a degenerate half".into(),
        }),
        2 => push_toffoli(out, controls[0], controls[1], target),
        _ => {
            let ancilla = spare
                .iter()
                .copied()
                .filter(|q| !controls.contains(q) && *q != target)
                .min()
                .ok_or(Error::Decompose {
                    index,
                    msg: "mct recursion ran out of borrowed qubits".into(),
                })?;
            push_mct(out, controls, target, ancilla, index)
        }
    }
}
