//! Dense statevector with bit-indexed gate kernels.
//!
//! Qubit `k` is bit `k` of the amplitude index (qubit 0 is least
//! significant). Kernels touch each amplitude the same way whether or not
//! they are split across threads, so results are bitwise independent of the
//! worker count.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::ising::MAX_SITES;
use crate::par::{self, Execution};

/// Largest register simulated densely.
pub const MAX_QUBITS: usize = MAX_SITES;

/// Below this many qubits the kernels never fan out.
const PARALLEL_MIN_QUBITS: usize = 14;
const CHUNK: usize = 1 << 12;

/// Single-qubit Pauli operators used by the noise channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_index(k: u8) -> Pauli {
        match k & 3 {
            0 => Pauli::I,
            1 => Pauli::X,
            2 => Pauli::Y,
            _ => Pauli::Z,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Amplitudes {
    n_qubits: usize,
    data: Vec<Complex64>,
}

impl Amplitudes {
    /// `|0...0>` on `n_qubits` qubits.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManySites {
                n: n_qubits,
                cap: MAX_QUBITS,
            });
        }
        let mut data = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        data[0] = Complex64::new(1.0, 0.0);
        Ok(Amplitudes { n_qubits, data })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Outcome probabilities `|a_k|^2` in index order.
    pub fn probabilities(&self) -> Vec<f64> {
        self.data.iter().map(|a| a.norm_sqr()).collect()
    }

    fn exec_for(&self, exec: Execution) -> Execution {
        if self.n_qubits >= PARALLEL_MIN_QUBITS {
            exec
        } else {
            Execution::Sequential
        }
    }

    pub fn apply(&mut self, gate: &Gate, exec: Execution) {
        match *gate {
            Gate::Hadamard { qubit } => self.pair_apply(qubit, exec, |_, a, b| {
                let (x, y) = (*a, *b);
                *a = (x + y) * FRAC_1_SQRT_2;
                *b = (x - y) * FRAC_1_SQRT_2;
            }),
            Gate::RotZ { qubit, angle } => {
                let lo = Complex64::from_polar(1.0, -0.5 * angle);
                let hi = lo.conj();
                self.pair_apply(qubit, exec, |_, a, b| {
                    *a *= lo;
                    *b *= hi;
                });
            }
            Gate::Cnot { control, target } => {
                let cmask = 1usize << control;
                self.pair_apply(target, exec, |idx, a, b| {
                    if idx & cmask != 0 {
                        std::mem::swap(a, b);
                    }
                });
            }
        }
    }

    pub fn apply_pauli(&mut self, qubit: usize, pauli: Pauli, exec: Execution) {
        let i = Complex64::new(0.0, 1.0);
        match pauli {
            Pauli::I => {}
            Pauli::X => self.pair_apply(qubit, exec, |_, a, b| std::mem::swap(a, b)),
            Pauli::Y => self.pair_apply(qubit, exec, |_, a, b| {
                let (x, y) = (*a, *b);
                *a = -i * y;
                *b = i * x;
            }),
            Pauli::Z => self.pair_apply(qubit, exec, |_, _, b| *b = -*b),
        }
    }

    /// Calls `f(index_of_lo, lo, hi)` for every amplitude pair differing only
    /// in bit `qubit`.
    fn pair_apply<F>(&mut self, qubit: usize, exec: Execution, f: F)
    where
        F: Fn(usize, &mut Complex64, &mut Complex64) + Sync + Send,
    {
        let exec = self.exec_for(exec);
        let stride = 1usize << qubit;
        let block = stride << 1;
        let len = self.data.len();
        if block <= CHUNK {
            let chunk = CHUNK.min(len);
            par::for_each_chunk_mut(exec, &mut self.data, chunk, |ci, c| {
                let base = ci * chunk;
                for (bi, blk) in c.chunks_mut(block).enumerate() {
                    let (lo, hi) = blk.split_at_mut(stride);
                    let off = base + bi * block;
                    for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                        f(off + k, a, b);
                    }
                }
            });
        } else {
            let half = CHUNK >> 1;
            for (bi, blk) in self.data.chunks_mut(block).enumerate() {
                let (lo, hi) = blk.split_at_mut(stride);
                let off = bi * block;
                par::for_each_zipped_chunk_mut(exec, lo, hi, half, |ci, l, h| {
                    let base = off + ci * half;
                    for (k, (a, b)) in l.iter_mut().zip(h.iter_mut()).enumerate() {
                        f(base + k, a, b);
                    }
                });
            }
        }
    }
}

/// Runs `circuit` on `|0...0>` and returns the final state.
pub fn run_statevector(circuit: &Circuit) -> Result<Amplitudes> {
    run_statevector_with(circuit, Execution::default())
}

pub fn run_statevector_with(circuit: &Circuit, exec: Execution) -> Result<Amplitudes> {
    let mut state = Amplitudes::zero_state(circuit.n_qubits())?;
    for g in circuit.gates() {
        state.apply(g, exec);
    }
    Ok(state)
}

/// `|a_0|^2`, clamped to `[0, 1]`.
pub fn prob_all_zeros(amps: &Amplitudes) -> f64 {
    amps.data[0].norm_sqr().clamp(0.0, 1.0)
}
