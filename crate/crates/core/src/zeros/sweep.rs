use std::f64::consts::PI;

use serde::Serialize;

use crate::circuit::build_protocol_circuit;
use crate::error::{Error, Result};
use crate::ising::{exact_partition_with, SpinSystem};
use crate::par::{self, Execution};
use crate::sim::{prob_all_zeros, run_statevector_with, run_with_noise_with, sample_shots, NoiseConfig};

/// How each sweep point is estimated, on top of the exact `|Z|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepMode {
    Exact,
    /// Binomial sampling of the noiseless circuit probability.
    Shots {
        shots: u64,
        seed: u64,
    },
    /// Trajectory simulation under `noise`.
    Noisy {
        noise: NoiseConfig,
        shots: u64,
        seed: u64,
    },
}

/// One grid point. Field order is the CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub jbeta: f64,
    pub p_exact: f64,
    pub p_estimate: Option<f64>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
}

impl SweepRecord {
    /// Binomial standard error of the estimate, when sampled.
    pub fn std_error(&self) -> Option<f64> {
        match (self.p_estimate, self.shots) {
            (Some(p), Some(n)) => Some((p * (1.0 - p) / n as f64).sqrt()),
            _ => None,
        }
    }
}

/// `start, start + step, ...` up to and including `stop` (to within a
/// relative 1e-9 of a step).
pub fn jbeta_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(Error::InvalidGrid("non-finite bound".into()));
    }
    if step <= 0.0 {
        return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
    }
    if stop <= start {
        return Err(Error::InvalidGrid(format!("stop {stop} must exceed start {start}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

/// `0 ..= 8 pi` in steps of `pi / 10`: 81 points.
pub fn default_grid() -> Vec<f64> {
    jbeta_grid(0.0, 8.0 * PI, PI / 10.0).expect("static grid")
}

/// Evaluates `|Z|^2` at every `J beta` of `grid`, with `beta = jbeta / j`.
/// Sampled modes use seed `seed + index` at point `index`.
pub fn sweep(system: &SpinSystem, j: f64, grid: &[f64], mode: SweepMode) -> Result<Vec<SweepRecord>> {
    sweep_with(system, j, grid, mode, Execution::default())
}

pub fn sweep_with(
    system: &SpinSystem,
    j: f64,
    grid: &[f64],
    mode: SweepMode,
    exec: Execution,
) -> Result<Vec<SweepRecord>> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if grid
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    if !(j.is_finite() && j != 0.0) {
        return Err(Error::InvalidGrid(format!(
            "reference coupling must be nonzero, got {j}"
        )));
    }
    let points = par::map_indexed(exec, grid.len(), |idx| -> Result<SweepRecord> {
        let jbeta = grid[idx];
        let beta = jbeta / j;
        let p_exact = exact_partition_with(system, beta, exec)?.norm_sqr().clamp(0.0, 1.0);
        let mut rec = SweepRecord {
            jbeta,
            p_exact,
            p_estimate: None,
            shots: None,
            seed: None,
        };
        let sampled = match mode {
            SweepMode::Exact => None,
            SweepMode::Shots { shots, seed } => {
                let circuit = build_protocol_circuit(system, beta);
                let p = prob_all_zeros(&run_statevector_with(&circuit, exec)?);
                Some(sample_shots(p, shots, seed.wrapping_add(idx as u64))?)
            }
            SweepMode::Noisy { noise, shots, seed } => {
                let circuit = build_protocol_circuit(system, beta);
                Some(run_with_noise_with(
                    &circuit,
                    &noise,
                    shots,
                    seed.wrapping_add(idx as u64),
                    exec,
                )?)
            }
        };
        if let Some(r) = sampled {
            rec.p_estimate = Some(r.estimate);
            rec.shots = Some(r.shots);
            rec.seed = Some(r.seed);
        }
        Ok(rec)
    });
    points.into_iter().collect()
}

/// Writes records as CSV with header `jbeta,p_exact,p_estimate,shots,seed`.
pub fn write_csv<W: std::io::Write>(records: &[SweepRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
