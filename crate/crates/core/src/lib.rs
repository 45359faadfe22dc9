//! Simulated detection of purely imaginary Fisher zeros of Ising systems.
//!
//! Substituting `beta -> i beta` turns the Boltzmann operator of a classical
//! Ising Hamiltonian into a time-evolution operator. The normalized partition
//! function then becomes the all-zeros amplitude of a short circuit
//! (Hadamards, CNOT-RZ-CNOT bond blocks, field rotations, Hadamards), and its
//! zeros show up as vanishing all-zeros probability.
//!
//! * [`ising`] holds the systems and the exact enumeration oracle.
//! * [`circuit`] and [`qasm`] build and export the protocol circuit.
//! * [`sim`] runs it on a statevector, with optional shot and gate noise.
//! * [`zeros`] sweeps, refines and cross-checks against closed-form loci.

pub mod circuit;
pub mod cli;
pub mod error;
pub mod ising;
pub mod par;
pub mod qasm;
pub mod sim;
pub mod zeros;

pub use circuit::{build_protocol_circuit, Circuit, Gate};
pub use error::{Error, Result};
pub use ising::{
    enumerate_spectrum, exact_partition, tree_product_partition, PartitionValue, Preset, SpectrumEntry, SpinSystem,
};
pub use par::Execution;
pub use qasm::export_qasm;
pub use sim::{prob_all_zeros, run_statevector, run_with_noise, sample_shots, Amplitudes, NoiseConfig, ShotResult};
