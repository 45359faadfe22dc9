//! Monte Carlo trajectories with depolarizing gate errors and readout flips.
//!
//! Each shot draws its error pattern from its own ChaCha8 stream
//! (`seed`, stream = shot index), so counts do not depend on how shots are
//! scheduled. Shots whose pattern has no Pauli insertion reuse the noiseless
//! outcome distribution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::shots::{check_probability, sample_shots, ShotResult};
use super::statevector::{prob_all_zeros, run_statevector_with, Amplitudes, Pauli};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::par::{self, Execution};

const SHOT_BLOCK: usize = 64;

/// Error-channel strengths. The defaults are illustrative, not fitted to any
/// device.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    /// Probability of a uniformly random non-identity two-qubit Pauli after
    /// each CNOT.
    pub depol_2q: f64,
    /// Probability of a uniformly random X, Y or Z after each one-qubit gate.
    pub depol_1q: f64,
    /// Independent bit-flip probability for each measured qubit.
    pub readout_flip: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            depol_2q: 0.01,
            depol_1q: 0.001,
            readout_flip: 0.02,
        }
    }
}

impl NoiseConfig {
    pub fn noiseless() -> Self {
        NoiseConfig {
            depol_2q: 0.0,
            depol_1q: 0.0,
            readout_flip: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_probability(self.depol_2q, "depol_2q")?;
        check_probability(self.depol_1q, "depol_1q")?;
        check_probability(self.readout_flip, "readout_flip")
    }

    pub fn is_noiseless(&self) -> bool {
        self.depol_2q == 0.0 && self.depol_1q == 0.0 && self.readout_flip == 0.0
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, NoiseFileError> {
        let cfg: NoiseConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum NoiseFileError {
    #[error("malformed noise file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] Error),
}

/// A Pauli inserted right after gate `after`.
#[derive(Debug, Clone, Copy)]
struct Fault {
    after: usize,
    qubit: usize,
    pauli: Pauli,
}

fn draw_faults(circuit: &Circuit, noise: &NoiseConfig, rng: &mut ChaCha8Rng) -> Vec<Fault> {
    let mut faults = Vec::new();
    for (k, g) in circuit.gates().iter().enumerate() {
        match *g {
            Gate::Cnot { control, target } => {
                if noise.depol_2q > 0.0 && rng.random::<f64>() < noise.depol_2q {
                    let code: u8 = rng.random_range(1..16);
                    for (qubit, p) in [(control, code >> 2), (target, code & 3)] {
                        if p != 0 {
                            faults.push(Fault {
                                after: k,
                                qubit,
                                pauli: Pauli::from_index(p),
                            });
                        }
                    }
                }
            }
            Gate::Hadamard { qubit } | Gate::RotZ { qubit, .. } => {
                if noise.depol_1q > 0.0 && rng.random::<f64>() < noise.depol_1q {
                    faults.push(Fault {
                        after: k,
                        qubit,
                        pauli: Pauli::from_index(rng.random_range(1..4)),
                    });
                }
            }
        }
    }
    faults
}

fn trajectory(circuit: &Circuit, faults: &[Fault]) -> Amplitudes {
    let mut state = Amplitudes::zero_state(circuit.n_qubits()).expect("cap checked by caller");
    let mut next = faults.iter().peekable();
    for (k, g) in circuit.gates().iter().enumerate() {
        state.apply(g, Execution::Sequential);
        while let Some(f) = next.next_if(|f| f.after == k) {
            state.apply_pauli(f.qubit, f.pauli, Execution::Sequential);
        }
    }
    state
}

/// Index `k` with `cumulative[k-1] <= u < cumulative[k]`.
fn sample_index(cumulative: &[f64], u: f64) -> usize {
    let total = *cumulative.last().unwrap_or(&1.0);
    let k = cumulative.partition_point(|&c| c <= u * total);
    k.min(cumulative.len() - 1)
}

fn cumulative(probs: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .into_iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

/// Estimates the all-zeros probability of `circuit` under `noise`.
///
/// A fully noiseless config delegates to [`sample_shots`] with the same seed.
pub fn run_with_noise(circuit: &Circuit, noise: &NoiseConfig, shots: u64, seed: u64) -> Result<ShotResult> {
    run_with_noise_with(circuit, noise, shots, seed, Execution::default())
}

pub fn run_with_noise_with(
    circuit: &Circuit,
    noise: &NoiseConfig,
    shots: u64,
    seed: u64,
    exec: Execution,
) -> Result<ShotResult> {
    noise.validate()?;
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let ideal = run_statevector_with(circuit, exec)?;
    if noise.is_noiseless() {
        return sample_shots(prob_all_zeros(&ideal), shots, seed);
    }
    let ideal_cdf = cumulative(ideal.probabilities());
    let n_qubits = circuit.n_qubits();
    let blocks = (shots as usize).div_ceil(SHOT_BLOCK);
    let counts = par::map_indexed(exec, blocks, |b| {
        let lo = (b * SHOT_BLOCK) as u64;
        let hi = (lo + SHOT_BLOCK as u64).min(shots);
        let mut zeros = 0u64;
        for shot in lo..hi {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shot);
            let faults = draw_faults(circuit, noise, &mut rng);
            let u = rng.random::<f64>();
            let mut outcome = if faults.is_empty() {
                sample_index(&ideal_cdf, u)
            } else {
                let state = trajectory(circuit, &faults);
                sample_index(&cumulative(state.probabilities()), u)
            };
            for q in 0..n_qubits {
                if rng.random::<f64>() < noise.readout_flip {
                    outcome ^= 1 << q;
                }
            }
            zeros += u64::from(outcome == 0);
        }
        zeros
    });
    Ok(ShotResult::new(shots, counts.into_iter().sum(), seed))
}
