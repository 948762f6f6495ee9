//! OpenQASM 2.0 / Quil emission and a reader for the emitted QASM subset.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::gate::Gate;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dialect {
    Qasm2,
    Quil,
}

impl Dialect {
    pub fn extension(self) -> &'static str {
        match self {
            Dialect::Qasm2 => "qasm",
            Dialect::Quil => "quil",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmittedProgram {
    pub dialect: Dialect,
    pub text: String,
    pub gate_count: usize,
    pub qubit_count: usize,
}

/// Shortest-form rendering with 17 significant digits (C's `%.17g`).
pub fn format_angle(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..17).contains(&exp) {
        trim(&format!("{x:.*}", (16 - exp) as usize))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    }
}

/// Emits an expanded circuit followed by a measurement of every qubit.
pub fn emit(circuit: &Circuit, dialect: Dialect) -> Result<EmittedProgram> {
    let n = circuit.num_qubits();
    let mut text = String::new();
    match dialect {
        Dialect::Qasm2 => {
            text.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
            let _ = writeln!(text, "qreg q[{n}];\ncreg c[{n}];");
        }
        Dialect::Quil => {
            let _ = writeln!(text, "DECLARE ro BIT[{n}]");
        }
    }
    let mut gate_count = 0;
    for gate in circuit.gates() {
        gate.validate(n)?;
        let line = match (dialect, *gate) {
            (_, Gate::CompositeU { .. }) => return Err(Error::UnexpandedMacro),
            (Dialect::Qasm2, Gate::Ry { theta, qubit }) => format!("ry({}) q[{qubit}];", format_angle(theta)),
            (Dialect::Qasm2, Gate::Rz { phi, qubit }) => format!("rz({}) q[{qubit}];", format_angle(phi)),
            (Dialect::Qasm2, Gate::Cnot { control, target }) => format!("cx q[{control}],q[{target}];"),
            (Dialect::Quil, Gate::Ry { theta, qubit }) => format!("RY({}) {qubit}", format_angle(theta)),
            (Dialect::Quil, Gate::Rz { phi, qubit }) => format!("RZ({}) {qubit}", format_angle(phi)),
            (Dialect::Quil, Gate::Cnot { control, target }) => format!("CNOT {control} {target}"),
        };
        text.push_str(&line);
        text.push('\n');
        gate_count += 1;
    }
    for q in 0..n {
        let _ = match dialect {
            Dialect::Qasm2 => writeln!(text, "measure q[{q}] -> c[{q}];"),
            Dialect::Quil => writeln!(text, "MEASURE {q} ro[{q}]"),
        };
    }
    Ok(EmittedProgram {
        dialect,
        text,
        gate_count,
        qubit_count: n,
    })
}

/// A `;`-terminated statement with the position of its first character.
struct Statement<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn statements(src: &str) -> Result<Vec<Statement<'_>>> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize, usize)> = None;
    let (mut line, mut column) = (1, 1);
    let mut chars = src.char_indices().peekable();
    while let Some((i, ch)) = chars.next() {
        if ch == '/' && matches!(chars.peek(), Some((_, '/'))) {
            if let Some((s, l, c)) = start {
                return Err(Error::Syntax {
                    line: l,
                    column: c,
                    message: format!("unterminated statement `{}`", src[s..i].trim()),
                });
            }
            // comment: skip to end of line
            for (_, c) in chars.by_ref() {
                if c == '\n' {
                    break;
                }
            }
            line += 1;
            column = 1;
            continue;
        }
        match ch {
            ';' => {
                match start.take() {
                    Some((s, l, c)) => out.push(Statement {
                        text: src[s..i].trim(),
                        line: l,
                        column: c,
                    }),
                    None => {
                        return Err(Error::Syntax {
                            line,
                            column,
                            message: "empty statement".into(),
                        })
                    }
                }
            }
            c if c.is_whitespace() => {}
            _ if start.is_none() => start = Some((i, line, column)),
            _ => {}
        }
        if ch == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    if let Some((s, l, c)) = start {
        return Err(Error::Syntax {
            line: l,
            column: c,
            message: format!("missing `;` after `{}`", src[s..].trim()),
        });
    }
    Ok(out)
}

/// Parses `name[i]` against the declared register.
fn qubit_ref(arg: &str, reg: &Option<(String, usize)>, st: &Statement) -> Result<usize> {
    let syntax = |message: String| Error::Syntax {
        line: st.line,
        column: st.column,
        message,
    };
    let (name, size) = reg
        .as_ref()
        .ok_or_else(|| syntax("gate before qreg declaration".into()))?;
    let arg = arg.trim();
    let inner = arg
        .strip_prefix(name.as_str())
        .and_then(|s| s.trim_start().strip_prefix('['))
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| syntax(format!("expected `{name}[index]`, found `{arg}`")))?;
    let index: usize = inner
        .trim()
        .parse()
        .map_err(|_| syntax(format!("bad qubit index `{inner}`")))?;
    if index >= *size {
        return Err(Error::QubitOutOfRange {
            index,
            num_qubits: *size,
        });
    }
    Ok(index)
}

/// Reads the QASM subset written by [`emit`]: header, one `qreg`, `creg`s,
/// `ry`, `rz`, `cx` and `measure`. Gates are layered as early as possible.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut reg: Option<(String, usize)> = None;
    let mut gates = Vec::new();
    for st in statements(text)? {
        let syntax = |message: String| Error::Syntax {
            line: st.line,
            column: st.column,
            message,
        };
        let split = st
            .text
            .find(|c: char| c.is_whitespace() || c == '(')
            .unwrap_or(st.text.len());
        let (keyword, rest) = st.text.split_at(split);
        let rest = rest.trim();
        match keyword {
            "OPENQASM" => {
                if rest != "2.0" {
                    return Err(syntax(format!("unsupported version `{rest}`")));
                }
            }
            "include" => {}
            "creg" | "measure" => {}
            "qreg" => {
                if reg.is_some() {
                    return Err(Error::UnsupportedStatement {
                        line: st.line,
                        column: st.column,
                        statement: st.text.to_string(),
                    });
                }
                let (name, size) = rest
                    .strip_suffix(']')
                    .and_then(|s| s.split_once('['))
                    .ok_or_else(|| syntax(format!("malformed register `{rest}`")))?;
                let size = size
                    .trim()
                    .parse()
                    .map_err(|_| syntax(format!("bad register size `{size}`")))?;
                reg = Some((name.trim().to_string(), size));
            }
            "ry" | "rz" => {
                let (angle, target) = rest
                    .strip_prefix('(')
                    .and_then(|s| s.split_once(')'))
                    .ok_or_else(|| syntax(format!("expected `{keyword}(angle) qubit`")))?;
                let angle: f64 = angle
                    .trim()
                    .parse()
                    .map_err(|_| syntax(format!("bad angle `{}`", angle.trim())))?;
                let q = qubit_ref(target, &reg, &st)?;
                gates.push(if keyword == "ry" {
                    Gate::ry(angle, q)
                } else {
                    Gate::rz(angle, q)
                });
            }
            "cx" => {
                let (c, t) = rest
                    .split_once(',')
                    .ok_or_else(|| syntax("expected `cx control,target`".into()))?;
                gates.push(Gate::cnot(qubit_ref(c, &reg, &st)?, qubit_ref(t, &reg, &st)?));
            }
            _ => {
                return Err(Error::UnsupportedStatement {
                    line: st.line,
                    column: st.column,
                    statement: st.text.to_string(),
                })
            }
        }
    }
    Circuit::from_gates(reg.map_or(0, |r| r.1), gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angle_formatting_matches_printf_g17() {
        assert_eq!(format_angle(1.5 * PI), "4.7123889803846897");
        assert_eq!(format_angle(-PI / 2.0), "-1.5707963267948966");
        assert_eq!(format_angle(1e-7), "9.9999999999999995e-08");
        assert_eq!(format_angle(0.5), "0.5");
        assert_eq!(format_angle(2.0), "2");
        assert_eq!(format_angle(0.0), "0");
        for x in [0.1, PI, -7.25e-9, 1e20, 123456.789] {
            assert_eq!(format_angle(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn empty_one_qubit_program() {
        let p = emit(&Circuit::new(1), Dialect::Qasm2).unwrap();
        assert_eq!(
            p.text,
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[1];\nmeasure q[0] -> c[0];\n"
        );
        assert_eq!(p.gate_count, 0);
        let q = emit(&Circuit::new(1), Dialect::Quil).unwrap();
        assert_eq!(q.text, "DECLARE ro BIT[1]\nMEASURE 0 ro[0]\n");
    }

    #[test]
    fn composites_must_be_expanded() {
        let c = Circuit::from_gates(2, [Gate::composite(0.3, 0, 1)]).unwrap();
        assert_eq!(emit(&c, Dialect::Quil), Err(Error::UnexpandedMacro));
        assert_eq!(emit(&c.expanded(), Dialect::Quil).unwrap().gate_count, 8);
    }

    #[test]
    fn unsupported_statement_reports_line() {
        let src = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nh q[0];\n";
        assert_eq!(
            parse_qasm(src),
            Err(Error::UnsupportedStatement {
                line: 3,
                column: 1,
                statement: "h q[0]".into()
            })
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        let src = "OPENQASM 2.0;\nqreg q[2];\n  ry(abc) q[0];\n";
        match parse_qasm(src) {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_qasm("qreg q[2];\ncx q[0],q[1]"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(parse_qasm("ry(0.1) q[0];"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn header_only_is_empty_circuit() {
        let c = parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\ncreg c[3];\n// nothing\n").unwrap();
        assert_eq!((c.num_qubits(), c.gate_count()), (3, 0));
    }
}
