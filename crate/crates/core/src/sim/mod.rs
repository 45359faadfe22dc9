//! Circuit execution: exact statevectors, binomial shot sampling and noisy
//! trajectories.

mod noise;
mod shots;
mod statevector;

pub use noise::{run_with_noise, run_with_noise_with, NoiseConfig, NoiseFileError};
pub use shots::{sample_shots, ShotResult};
pub use statevector::{prob_all_zeros, run_statevector, run_statevector_with, Amplitudes, Pauli, MAX_QUBITS};
