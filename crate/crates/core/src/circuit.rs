//! Gate-level description of the zero-detection protocol.
//!
//! The circuit for a system at inverse temperature `beta` is
//!
//! ```text
//! H on every qubit
//! for each bond (i, j, J):  CX(i, j) . RZ(j, J beta / 2) . CX(i, j)
//! for each qubit, if h != 0: RZ(i, h beta)
//! H on every qubit
//! ```
//!
//! With `RZ(phi) = diag(exp(-i phi/2), exp(i phi/2))` the bond block applies
//! `exp(-i beta J s_i s_j)` and the field rotation applies `exp(-i beta h s_i)`,
//! so the all-zeros amplitude of the final state equals the normalized `Z`.
//! No routing is performed: two-qubit gates may join any pair of qubits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::SpinSystem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gate {
    Hadamard {
        qubit: usize,
    },
    /// `diag(exp(-i angle/2), exp(i angle/2))`.
    RotZ {
        qubit: usize,
        angle: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    fn max_qubit(&self) -> usize {
        match *self {
            Gate::Hadamard { qubit } | Gate::RotZ { qubit, .. } => qubit,
            Gate::Cnot { control, target } => control.max(target),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

/// Gate tallies by kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub hadamard: usize,
    pub rot_z: usize,
    pub cnot: usize,
}

impl Circuit {
    pub fn empty(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::empty(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Gate::Cnot { control, target } = gate {
            if control == target {
                return Err(Error::CnotSameQubit(control));
            }
        }
        let q = gate.max_qubit();
        if q >= self.n_qubits {
            return Err(Error::GateOutOfRange {
                index: self.gates.len(),
                qubit: q,
                n_qubits: self.n_qubits,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn counts(&self) -> GateCounts {
        let mut c = GateCounts::default();
        for g in &self.gates {
            match g {
                Gate::Hadamard { .. } => c.hadamard += 1,
                Gate::RotZ { .. } => c.rot_z += 1,
                Gate::Cnot { .. } => c.cnot += 1,
            }
        }
        c
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }
}

/// Builds the protocol circuit for `system` at inverse temperature `beta`.
pub fn build_protocol_circuit(system: &SpinSystem, beta: f64) -> Circuit {
    let n = system.n_sites();
    let mut gates = Vec::with_capacity(2 * n + 3 * system.bonds().len() + n);
    gates.extend((0..n).map(|qubit| Gate::Hadamard { qubit }));
    for b in system.bonds() {
        let cx = Gate::Cnot {
            control: b.i,
            target: b.j,
        };
        gates.push(cx);
        gates.push(Gate::RotZ {
            qubit: b.j,
            angle: 0.5 * b.coupling * beta,
        });
        gates.push(cx);
    }
    if system.field() != 0.0 {
        gates.extend((0..n).map(|qubit| Gate::RotZ {
            qubit,
            angle: system.field() * beta,
        }));
    }
    gates.extend((0..n).map(|qubit| Gate::Hadamard { qubit }));
    Circuit { n_qubits: n, gates }
}
