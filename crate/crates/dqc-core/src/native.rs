//! Native `.dqc` circuit format.
//!
//! Line-oriented text, one gate per line, covering every gate kind including
//! the phase gates `.real` cannot express:
//!
//! ```text
//! # comment
//! name qft4
//! qubits 4
//! h 0
//! rk 3 2
//! rkdg 3 0
//! cnot 1 0
//! toffoli 0 1 2
//! mct 0 1 2 3
//! fredkin 0 1 2
//! ```
//!
//! `name` is optional. `qubits` must precede the first gate line. `rk k q`
//! applies a phase of 2*pi / 2^k to qubit `q`.

use crate::circuit::{Circuit, Gate, GateKind, QubitId, SingleQubitGate};
use crate::error::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_native(text: &str) -> Result<Circuit> {
    let mut name = String::new();
    let mut circuit: Option<Circuit> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().expect("non-empty line");
        let rest: Vec<&str> = tokens.collect();

        match head {
            "name" => {
                if circuit.is_some() {
                    return Err(err(lineno, "name must come before qubits"));
                }
                name = rest.join(" ");
            }
            "qubits" => {
                if circuit.is_some() {
                    return Err(err(lineno, "second qubits line"));
                }
                let n: usize = rest
                    .first()
                    .ok_or_else(|| err(lineno, "qubits needs a count"))?
                    .parse()
                    .map_err(|_| err(lineno, "qubits count is not a number"))?;
                if n == 0 {
                    return Err(err(lineno, "qubits must be positive"));
                }
                circuit = Some(Circuit::new(n, name.clone()));
            }
            _ => {
                let circuit = circuit
                    .as_mut()
                    .ok_or_else(|| err(lineno, format!("gate '{head}' before qubits line")))?;
                let gate = parse_gate(head, &rest, lineno)?;
                circuit.push(gate).map_err(|e| err(lineno, e.to_string()))?;
            }
        }
    }

    circuit.ok_or_else(|| err(text.lines().count().max(1), "missing qubits line"))
}

fn parse_gate(head: &str, rest: &[&str], lineno: usize) -> Result<Gate> {
    let qubit = |tok: &str| -> Result<QubitId> {
        tok.parse::<usize>()
            .map(QubitId)
            .map_err(|_| err(lineno, format!("'{tok}' is not a qubit index")))
    };
    let arity = |n: usize| -> Result<()> {
        if rest.len() != n {
            Err(err(
                lineno,
                format!("gate {head} expects {n} operands, got {}", rest.len()),
            ))
        } else {
            Ok(())
        }
    };

    let simple = |g: SingleQubitGate, rest: &[&str]| -> Result<Gate> {
        arity(1)?;
        Gate::single(g, qubit(rest[0])?).map_err(|e| err(lineno, e.to_string()))
    };

    match head {
        "x" => simple(SingleQubitGate::X, rest),
        "y" => simple(SingleQubitGate::Y, rest),
        "z" => simple(SingleQubitGate::Z, rest),
        "h" => simple(SingleQubitGate::H, rest),
        "s" => simple(SingleQubitGate::S, rest),
        "sdg" => simple(SingleQubitGate::Sdg, rest),
        "t" => simple(SingleQubitGate::T, rest),
        "tdg" => simple(SingleQubitGate::Tdg, rest),
        "rk" | "rkdg" => {
            arity(2)?;
            let k: u32 = rest[0]
                .parse()
                .map_err(|_| err(lineno, format!("'{}' is not a phase index", rest[0])))?;
            let g = if head == "rk" {
                SingleQubitGate::Rk(k)
            } else {
                SingleQubitGate::RkDg(k)
            };
            Gate::single(g, qubit(rest[1])?).map_err(|e| err(lineno, e.to_string()))
        }
        "cnot" => {
            arity(2)?;
            Gate::cnot(qubit(rest[0])?, qubit(rest[1])?).map_err(|e| err(lineno, e.to_string()))
        }
        "toffoli" => {
            arity(3)?;
            Gate::toffoli(qubit(rest[0])?, qubit(rest[1])?, qubit(rest[2])?)
                .map_err(|e| err(lineno, e.to_string()))
        }
        "mct" => {
            if rest.len() < 4 {
                return Err(err(lineno, "mct expects at least 3 controls and a target"));
            }
            let mut ops = Vec::with_capacity(rest.len());
            for tok in rest {
                ops.push(qubit(tok)?);
            }
            let target = ops.pop().expect("len >= 4");
            Gate::mct(ops, target).map_err(|e| err(lineno, e.to_string()))
        }
        "fredkin" => {
            arity(3)?;
            Gate::fredkin(qubit(rest[0])?, qubit(rest[1])?, qubit(rest[2])?)
                .map_err(|e| err(lineno, e.to_string()))
        }
        other => Err(err(lineno, format!("unknown gate '{other}'"))),
    }
}

pub fn serialize_native(circuit: &Circuit) -> String {
    let mut out = String::new();
    if !circuit.name.is_empty() {
        out.push_str(&format!("name {}\n", circuit.name));
    }
    out.push_str(&format!("qubits {}\n", circuit.n_qubits));
    for gate in circuit.gates() {
        let line = match gate.kind {
            GateKind::Single(SingleQubitGate::Rk(k)) => format!("rk {k} {}", gate.target.0),
            GateKind::Single(SingleQubitGate::RkDg(k)) => format!("rkdg {k} {}", gate.target.0),
            GateKind::Single(g) => format!("{} {}", g.label(), gate.target.0),
            GateKind::Cnot => format!("cnot {} {}", gate.controls[0].0, gate.target.0),
            GateKind::Toffoli => format!(
                "toffoli {} {} {}",
                gate.controls[0].0, gate.controls[1].0, gate.target.0
            ),
            GateKind::Mct => {
                let mut ops: Vec<String> =
                    gate.controls.iter().map(|q| q.0.to_string()).collect();
                ops.push(gate.target.0.to_string());
                format!("mct {}", ops.join(" "))
            }
            GateKind::Fredkin => format!(
                "fredkin {} {} {}",
                gate.controls[0].0, gate.controls[1].0, gate.target.0
            ),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}
