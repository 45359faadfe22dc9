//! OpenQASM 2.0 export of protocol circuits, plus a reader for the same
//! subset (`h`, `rz`, `cx`, `measure`).

use std::f64::consts::PI;
use std::fmt::Write;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

const DENOMINATORS: [i64; 12] = [1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 40];

/// Renders an angle, using `pi` forms for small rational multiples of pi.
pub fn format_angle(angle: f64) -> String {
    if angle == 0.0 {
        return "0".to_string();
    }
    let r = angle / PI;
    for d in DENOMINATORS {
        let scaled = r * d as f64;
        let num = scaled.round();
        if num != 0.0 && num.abs() < 1e6 && (scaled - num).abs() < 1e-12 * scaled.abs().max(1.0) {
            let num = num as i64;
            let g = gcd(num.unsigned_abs(), d as u64) as i64;
            let (num, d) = (num / g, d / g);
            let head = match num {
                1 => "pi".to_string(),
                -1 => "-pi".to_string(),
                n => format!("{n}*pi"),
            };
            return if d == 1 { head } else { format!("{head}/{d}") };
        }
    }
    format!("{angle}")
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Parses a plain number or `[-][k][*]pi[/d]`, e.g. `3*pi/2`, `8pi`, `-pi`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let bad = || Error::Angle(text.to_string());
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(pos) = s.find("pi") else {
        return s.parse::<f64>().map_err(|_| bad());
    };
    let (head, tail) = (&s[..pos], &s[pos + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let factor = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let div = match tail {
        "" => 1.0,
        t => t
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .filter(|d| *d != 0.0)
            .ok_or_else(bad)?,
    };
    let v = factor * PI / div;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Serializes a circuit as OpenQASM 2.0, measuring every qubit at the end.
pub fn export_qasm(circuit: &Circuit) -> String {
    let n = circuit.n_qubits();
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    out.push_str("// all-to-all connectivity assumed; no routing applied\n");
    let _ = writeln!(out, "qreg q[{n}];");
    let _ = writeln!(out, "creg c[{n}];");
    for g in circuit.gates() {
        let _ = match *g {
            Gate::Hadamard { qubit } => writeln!(out, "h q[{qubit}];"),
            Gate::RotZ { qubit, angle } => writeln!(out, "rz({}) q[{qubit}];", format_angle(angle)),
            Gate::Cnot { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
        };
    }
    for k in 0..n {
        let _ = writeln!(out, "measure q[{k}] -> c[{k}];");
    }
    out
}

fn qubit_ref(arg: &str, line: usize) -> Result<usize> {
    arg.trim()
        .strip_prefix("q[")
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|i| i.parse().ok())
        .ok_or_else(|| Error::Qasm {
            line,
            msg: format!("bad qubit reference `{}`", arg.trim()),
        })
}

/// Reads back the subset written by [`export_qasm`]. Measurements are
/// accepted and dropped.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stmt = raw.split("//").next().unwrap_or("").trim();
        if stmt.is_empty() {
            continue;
        }
        let err = |msg: &str| Error::Qasm {
            line,
            msg: msg.to_string(),
        };
        let stmt = stmt.strip_suffix(';').ok_or_else(|| err("missing `;`"))?.trim();
        if stmt.starts_with("OPENQASM") || stmt.starts_with("include") || stmt.starts_with("creg") {
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("qreg") {
            let n = rest
                .trim()
                .strip_prefix("q[")
                .and_then(|r| r.strip_suffix(']'))
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| err("bad qreg"))?;
            circuit = Some(Circuit::empty(n));
            continue;
        }
        let c = circuit.as_mut().ok_or_else(|| err("gate before qreg"))?;
        let gate = if stmt.starts_with("measure") {
            continue;
        } else if let Some(arg) = stmt.strip_prefix("h ") {
            Gate::Hadamard {
                qubit: qubit_ref(arg, line)?,
            }
        } else if let Some(rest) = stmt.strip_prefix("rz(") {
            let (angle, arg) = rest.split_once(')').ok_or_else(|| err("unclosed `rz(`"))?;
            Gate::RotZ {
                qubit: qubit_ref(arg, line)?,
                angle: parse_angle(angle)?,
            }
        } else if let Some(args) = stmt.strip_prefix("cx ") {
            let (a, b) = args.split_once(',').ok_or_else(|| err("cx needs two qubits"))?;
            Gate::Cnot {
                control: qubit_ref(a, line)?,
                target: qubit_ref(b, line)?,
            }
        } else {
            return Err(err(&format!("unsupported statement `{stmt}`")));
        };
        c.push(gate).map_err(|e| err(&e.to_string()))?;
    }
    circuit.ok_or(Error::Qasm {
        line: 0,
        msg: "no qreg declaration".into(),
    })
}
