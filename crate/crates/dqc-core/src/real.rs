//! RevLib `.real` reader and writer.
//!
//! Supported subset: directives `.version .numvars .variables .inputs
//! .outputs .constants .garbage .begin .end`, full-line `#` comments, Toffoli
//! family gate lines `t<k> v1 ... vk` (last operand is the target) and the
//! controlled swap `f3 v1 v2 v3` (first operand is the control). `.inputs`,
//! `.outputs`, `.constants` and `.garbage` are accepted and ignored.

use std::collections::HashMap;

use crate::circuit::{Circuit, Gate, GateKind, QubitId, SingleQubitGate};
use crate::error::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses a `.real` document into a circuit. Gate operands are mapped to
/// qubit indices by `.variables` order.
pub fn parse_real(text: &str) -> Result<Circuit> {
    let mut numvars: Option<usize> = None;
    let mut vars: HashMap<String, QubitId> = HashMap::new();
    let mut circuit: Option<Circuit> = None;
    let mut ended = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if ended {
            // Content after .end is ignored.
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().expect("non-empty line");
        let rest: Vec<&str> = tokens.collect();

        if let Some(directive) = head.strip_prefix('.') {
            match directive {
                "version" => {}
                "numvars" => {
                    let n: usize = rest
                        .first()
                        .ok_or_else(|| err(lineno, ".numvars needs a count"))?
                        .parse()
                        .map_err(|_| err(lineno, ".numvars count is not a number"))?;
                    if n == 0 {
                        return Err(err(lineno, ".numvars must be positive"));
                    }
                    numvars = Some(n);
                }
                "variables" => {
                    let n = numvars
                        .ok_or_else(|| err(lineno, ".variables before .numvars"))?;
                    if rest.len() != n {
                        return Err(err(
                            lineno,
                            format!(".variables lists {} names, expected {}", rest.len(), n),
                        ));
                    }
                    for (i, name) in rest.iter().enumerate() {
                        if vars.insert((*name).to_string(), QubitId(i)).is_some() {
                            return Err(err(lineno, format!("duplicate variable '{name}'")));
                        }
                    }
                }
                "inputs" | "outputs" | "constants" | "garbage" => {}
                "begin" => {
                    let n = numvars.ok_or_else(|| err(lineno, ".begin before .numvars"))?;
                    if vars.is_empty() {
                        return Err(err(lineno, ".begin before .variables"));
                    }
                    if circuit.is_some() {
                        return Err(err(lineno, "second .begin"));
                    }
                    circuit = Some(Circuit::new(n, ""));
                }
                "end" => {
                    if circuit.is_none() {
                        return Err(err(lineno, ".end without .begin"));
                    }
                    ended = true;
                }
                other => return Err(err(lineno, format!("unknown directive .{other}"))),
            }
            continue;
        }

        let circuit = circuit
            .as_mut()
            .ok_or_else(|| err(lineno, format!("gate line '{head}' before .begin")))?;
        let mut operands = Vec::with_capacity(rest.len());
        for name in &rest {
            let q = vars
                .get(*name)
                .ok_or_else(|| err(lineno, format!("undeclared variable '{name}'")))?;
            operands.push(*q);
        }
        {
            let mut sorted = operands.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(err(lineno, "duplicate operand"));
            }
        }

        let gate = if let Some(arity) = head.strip_prefix('t') {
            let arity: usize = arity
                .parse()
                .map_err(|_| err(lineno, format!("unknown gate '{head}'")))?;
            if arity == 0 || operands.len() != arity {
                return Err(err(
                    lineno,
                    format!("gate {head} expects {arity} operands, got {}", operands.len()),
                ));
            }
            let target = *operands.last().expect("arity >= 1");
            let controls = operands[..operands.len() - 1].to_vec();
            match arity {
                1 => Gate::single(SingleQubitGate::X, target),
                2 => Gate::cnot(controls[0], target),
                3 => Gate::toffoli(controls[0], controls[1], target),
                _ => Gate::mct(controls, target),
            }
        } else if head == "f3" {
            if operands.len() != 3 {
                return Err(err(
                    lineno,
                    format!("gate f3 expects 3 operands, got {}", operands.len()),
                ));
            }
            Gate::fredkin(operands[0], operands[1], operands[2])
        } else {
            return Err(err(lineno, format!("unknown gate '{head}'")));
        };

        let gate = gate.map_err(|e| err(lineno, e.to_string()))?;
        circuit.push(gate).map_err(|e| err(lineno, e.to_string()))?;
    }

    if circuit.is_none() {
        return Err(err(text.lines().count().max(1), "missing .begin"));
    }
    if !ended {
        return Err(err(text.lines().count().max(1), "missing .end"));
    }
    Ok(circuit.expect("checked above"))
}

/// Writes a circuit in the `.real` subset. Qubit `i` is named `x{i}`.
/// Gates outside the Toffoli/Fredkin family (anything but X, CNOT, Toffoli,
/// MCT, Fredkin) cannot be expressed and produce an error.
pub fn serialize_real(circuit: &Circuit) -> Result<String> {
    let name = |q: QubitId| format!("x{}", q.0);
    let mut out = String::new();
    out.push_str(".version 1.0\n");
    out.push_str(&format!(".numvars {}\n", circuit.n_qubits));
    let vars: Vec<String> = (0..circuit.n_qubits).map(|i| name(QubitId(i))).collect();
    out.push_str(&format!(".variables {}\n", vars.join(" ")));
    out.push_str(".begin\n");
    for gate in circuit.gates() {
        match gate.kind {
            GateKind::Single(SingleQubitGate::X) => {
                out.push_str(&format!("t1 {}\n", name(gate.target)));
            }
            GateKind::Single(g) => {
                return Err(Error::NotRepresentable(format!(
                    "gate {} has no .real encoding",
                    g.label()
                )));
            }
            GateKind::Cnot | GateKind::Toffoli | GateKind::Mct => {
                let mut ops: Vec<String> = gate.controls.iter().map(|q| name(*q)).collect();
                ops.push(name(gate.target));
                out.push_str(&format!("t{} {}\n", ops.len(), ops.join(" ")));
            }
            GateKind::Fredkin => {
                out.push_str(&format!(
                    "f3 {} {} {}\n",
                    name(gate.controls[0]),
                    name(gate.controls[1]),
                    name(gate.target)
                ));
            }
        }
    }
    out.push_str(".end\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;

    #[test]
    fn smallest_two_qubit_program() {
        let text = ".numvars 2\n.variables a b\n.begin\nt2 a b\n.end\n";
        let c = parse_real(text).unwrap();
        assert_eq!(c.n_qubits, 2);
        assert_eq!(c.len(), 1);
        let g = &c.gates()[0];
        assert_eq!(g.kind, GateKind::Cnot);
        assert_eq!(g.controls, vec![QubitId(0)]);
        assert_eq!(g.target, QubitId(1));
    }

    #[test]
    fn t1_is_not_gate() {
        let text = ".numvars 1\n.variables a\n.begin\nt1 a\n.end\n";
        let c = parse_real(text).unwrap();
        assert_eq!(c.n_qubits, 1);
        assert_eq!(c.gates()[0].kind, GateKind::Single(SingleQubitGate::X));
        assert_eq!(c.gates()[0].target, QubitId(0));
    }

    #[test]
    fn parity_style_file() {
        let mut text = String::from(".version 1.0\n.numvars 17\n.variables");
        for i in 0..17 {
            text.push_str(&format!(" x{i}"));
        }
        text.push_str("\n.begin\n");
        for i in 1..17 {
            text.push_str(&format!("t2 x{i} x0\n"));
        }
        text.push_str(".end\n");

        let c = parse_real(&text).unwrap();
        assert_eq!(c.n_qubits, 17);
        assert_eq!(c.len(), 16);
        for (i, g) in c.gates().iter().enumerate() {
            assert_eq!(g.kind, GateKind::Cnot);
            assert_eq!(g.controls, vec![QubitId(i + 1)]);
            assert_eq!(g.target, QubitId(0));
        }
    }

    #[test]
    fn toffoli_and_fredkin_lines() {
        let text = ".numvars 4\n.variables a b c d\n.begin\nt3 a b c\nf3 a c d\nt4 a b c d\n.end\n";
        let c = parse_real(text).unwrap();
        assert_eq!(c.gates()[0].kind, GateKind::Toffoli);
        assert_eq!(c.gates()[1].kind, GateKind::Fredkin);
        assert_eq!(c.gates()[1].controls, vec![QubitId(0), QubitId(2)]);
        assert_eq!(c.gates()[1].target, QubitId(3));
        assert_eq!(c.gates()[2].kind, GateKind::Mct);
    }

    #[test]
    fn errors_name_line_numbers() {
        let unknown = ".numvars 1\n.variables a\n.begin\nq1 a\n.end\n";
        match parse_real(unknown).unwrap_err() {
            Error::Parse { line, msg } => {
                assert_eq!(line, 4);
                assert!(msg.contains("unknown gate"));
            }
            other => panic!("unexpected error {other:?}"),
        }

        let undeclared = ".numvars 1\n.variables a\n.begin\nt1 b\n.end\n";
        match parse_real(undeclared).unwrap_err() {
            Error::Parse { line, msg } => {
                assert_eq!(line, 4);
                assert!(msg.contains("undeclared"));
            }
            other => panic!("unexpected error {other:?}"),
        }

        let duplicate = ".numvars 2\n.variables a b\n.begin\nt2 a a\n.end\n";
        match parse_real(duplicate).unwrap_err() {
            Error::Parse { line, msg } => {
                assert_eq!(line, 4);
                assert!(msg.contains("duplicate operand"));
            }
            other => panic!("unexpected error {other:?}"),
        }

        let no_end = ".numvars 1\n.variables a\n.begin\nt1 a\n";
        assert!(matches!(
            parse_real(no_end).unwrap_err(),
            Error::Parse { .. }
        ));

        let no_begin = ".numvars 1\n.variables a\nt1 a\n";
        assert!(matches!(
            parse_real(no_begin).unwrap_err(),
            Error::Parse { .. }
        ));

        let bad_directive = ".numvars 1\n.variables a\n.gates 1\n.begin\nt1 a\n.end\n";
        match parse_real(bad_directive).unwrap_err() {
            Error::Parse { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("unknown directive"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn serialize_cnot_line() {
        let mut c = Circuit::new(2, "one");
        c.push(Gate::cnot(QubitId(0), QubitId(1)).unwrap()).unwrap();
        let text = serialize_real(&c).unwrap();
        assert!(text.lines().any(|l| l == "t2 x0 x1"));
    }

    #[test]
    fn hadamard_not_representable() {
        let mut c = Circuit::new(1, "h");
        c.push(Gate::single(SingleQubitGate::H, QubitId(0)).unwrap())
            .unwrap();
        assert!(matches!(
            serialize_real(&c).unwrap_err(),
            Error::NotRepresentable(_)
        ));
    }

    #[test]
    fn round_trip_preserves_structure() {
        let text = ".numvars 5\n.variables v w x y z\n.begin\nt1 w\nt2 v x\nt3 v w y\nt5 v w x y z\nf3 z v w\n.end\n";
        let c1 = parse_real(text).unwrap();
        let c2 = parse_real(&serialize_real(&c1).unwrap()).unwrap();
        assert!(c1.same_structure(&c2));
    }
}
