//! Classical Ising systems and their imaginary-temperature partition function.
//!
//! Spins carry `s = +1/2` for bit 0 and `s = -1/2` for bit 1 of a
//! configuration word; site `k` is bit `k`. The energy of a configuration is
//! `sum_bonds J_ij s_i s_j + h sum_i s_i`.
//!
//! The partition function is normalized so that `Z(0) = 1`:
//! `Z(beta) = 2^-N sum_configs exp(-i beta E)`. This is the amplitude the
//! protocol circuit returns on the all-zeros outcome.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// Largest system that is enumerated or simulated densely.
pub const MAX_SITES: usize = 24;

const SUM_BLOCK: usize = 4096;

/// A pairwise coupling `J_ij` between sites `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(usize, usize, f64)", into = "(usize, usize, f64)")]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub coupling: f64,
}

impl From<(usize, usize, f64)> for Bond {
    fn from((i, j, coupling): (usize, usize, f64)) -> Self {
        Bond { i, j, coupling }
    }
}

impl From<Bond> for (usize, usize, f64) {
    fn from(b: Bond) -> Self {
        (b.i, b.j, b.coupling)
    }
}

/// The three cluster geometries studied on the seven-qubit device.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Open chain 0-1-2.
    Chain3,
    /// Closed triangle 0-1-2-0.
    Triangle3,
    /// Seven spins wired like the device coupling map; always field-free.
    Lagos7,
}

/// Coupling map of the seven-qubit device.
pub const LAGOS_EDGES: [(usize, usize); 6] = [(0, 1), (1, 2), (1, 3), (3, 5), (4, 5), (5, 6)];

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Chain3, Preset::Triangle3, Preset::Lagos7];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Chain3 => "chain3",
            Preset::Triangle3 => "triangle3",
            Preset::Lagos7 => "lagos7",
        }
    }

    fn edges(self) -> &'static [(usize, usize)] {
        match self {
            Preset::Chain3 => &[(0, 1), (1, 2)],
            Preset::Triangle3 => &[(0, 1), (1, 2), (0, 2)],
            Preset::Lagos7 => &LAGOS_EDGES,
        }
    }

    fn n_sites(self) -> usize {
        match self {
            Preset::Chain3 | Preset::Triangle3 => 3,
            Preset::Lagos7 => 7,
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain3" => Ok(Preset::Chain3),
            "triangle3" => Ok(Preset::Triangle3),
            "lagos7" => Ok(Preset::Lagos7),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An Ising system: `N` spin-1/2 sites, weighted bonds and a uniform field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinSystem {
    n_sites: usize,
    bonds: Vec<Bond>,
    field: f64,
}

#[derive(Deserialize)]
struct RawSystem {
    n_sites: usize,
    #[serde(default)]
    bonds: Vec<(usize, usize, f64)>,
    #[serde(default)]
    field: f64,
}

impl SpinSystem {
    /// Validates and canonicalizes a system. Bonds given as `(j, i)` are
    /// flipped to `(i, j)`; the bond list is sorted by `(i, j)`.
    pub fn new<B>(n_sites: usize, bonds: B, field: f64) -> Result<Self>
    where
        B: IntoIterator,
        B::Item: Into<Bond>,
    {
        if n_sites == 0 {
            return Err(Error::NoSites);
        }
        if !field.is_finite() {
            return Err(Error::NonFinite("field"));
        }
        let mut canon = Vec::new();
        for b in bonds {
            let Bond { i, j, coupling } = b.into();
            if i >= n_sites || j >= n_sites {
                return Err(Error::BondOutOfRange { i, j, n_sites });
            }
            if i == j {
                return Err(Error::SelfLoop { i, j });
            }
            if !coupling.is_finite() {
                return Err(Error::NonFinite("bond coupling"));
            }
            let (i, j) = if i < j { (i, j) } else { (j, i) };
            canon.push(Bond { i, j, coupling });
        }
        canon.sort_by_key(|b| (b.i, b.j));
        if let Some(w) = canon.windows(2).find(|w| (w[0].i, w[0].j) == (w[1].i, w[1].j)) {
            return Err(Error::DuplicateBond { i: w[0].i, j: w[0].j });
        }
        Ok(SpinSystem {
            n_sites,
            bonds: canon,
            field,
        })
    }

    /// A named cluster with uniform coupling `j`. `Lagos7` ignores `h`.
    pub fn preset(preset: Preset, j: f64, h: f64) -> Result<Self> {
        let field = if preset == Preset::Lagos7 { 0.0 } else { h };
        SpinSystem::new(preset.n_sites(), preset.edges().iter().map(|&(a, b)| (a, b, j)), field)
    }

    /// Parses `{"n_sites": N, "bonds": [[i, j, J], ...], "field": h}`.
    pub fn from_json(text: &str) -> std::result::Result<Self, SystemFileError> {
        let raw: RawSystem = serde_json::from_str(text)?;
        Ok(SpinSystem::new(raw.n_sites, raw.bonds, raw.field)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("system serializes")
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    /// Energy of the configuration whose bit `k` encodes site `k`.
    pub fn energy(&self, config: u64) -> f64 {
        let mut e = 0.0;
        for b in &self.bonds {
            let aligned = ((config >> b.i) ^ (config >> b.j)) & 1 == 0;
            e += if aligned { 0.25 * b.coupling } else { -0.25 * b.coupling };
        }
        if self.field != 0.0 {
            let down = (config & mask(self.n_sites)).count_ones() as f64;
            e += 0.5 * self.field * (self.n_sites as f64 - 2.0 * down);
        }
        e
    }

    /// True when the bond graph has no cycle.
    pub fn is_forest(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n_sites).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for b in &self.bonds {
            let (ri, rj) = (root(&mut parent, b.i), root(&mut parent, b.j));
            if ri == rj {
                return false;
            }
            parent[ri] = rj;
        }
        true
    }

    fn check_cap(&self) -> Result<()> {
        if self.n_sites > MAX_SITES {
            return Err(Error::TooManySites {
                n: self.n_sites,
                cap: MAX_SITES,
            });
        }
        Ok(())
    }
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Failure to load a system description file.
#[derive(Debug, thiserror::Error)]
pub enum SystemFileError {
    #[error("malformed system file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] Error),
}

/// One classical configuration and its energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub config: u64,
    pub energy: f64,
}

impl SpectrumEntry {
    /// Bitstring with site `n - 1` leftmost, so that index order is
    /// lexicographic order.
    pub fn bitstring(&self, n_sites: usize) -> String {
        (0..n_sites)
            .rev()
            .map(|k| if (self.config >> k) & 1 == 0 { '0' } else { '1' })
            .collect()
    }
}

/// All `2^N` configurations in index order.
pub fn enumerate_spectrum(system: &SpinSystem) -> Result<Vec<SpectrumEntry>> {
    system.check_cap()?;
    Ok((0..1u64 << system.n_sites)
        .map(|config| SpectrumEntry {
            config,
            energy: system.energy(config),
        })
        .collect())
}

/// `Z` evaluated at one inverse temperature.
/// Normalized partition function, `Z(0) = 1`: the conventional sum divided by
/// `2^N`, which is exactly the measured all-zeros amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionValue {
    pub z: Complex64,
    pub beta: f64,
}

impl PartitionValue {
    /// `|Z|^2`, the all-zeros outcome probability.
    pub fn norm_sqr(&self) -> f64 {
        self.z.norm_sqr()
    }
}

/// `Z(beta) = 2^-N sum exp(-i beta E)` by direct enumeration.
pub fn exact_partition(system: &SpinSystem, beta: f64) -> Result<PartitionValue> {
    exact_partition_with(system, beta, Execution::default())
}

pub fn exact_partition_with(system: &SpinSystem, beta: f64, exec: Execution) -> Result<PartitionValue> {
    system.check_cap()?;
    let n = 1usize << system.n_sites;
    let sum = par::blocked_sum(
        exec,
        n,
        SUM_BLOCK,
        |r| {
            r.map(|c| Complex64::from_polar(1.0, -beta * system.energy(c as u64)))
                .sum::<Complex64>()
        },
        Complex64::new(0.0, 0.0),
        |a, b| a + b,
    );
    Ok(PartitionValue {
        z: sum / n as f64,
        beta,
    })
}

/// Tabulated energies for repeated evaluation of `Z` and its derivatives.
#[derive(Debug, Clone)]
pub struct Spectrum {
    energies: Vec<f64>,
}

impl Spectrum {
    pub fn new(system: &SpinSystem) -> Result<Self> {
        system.check_cap()?;
        Ok(Spectrum {
            energies: (0..1u64 << system.n_sites).map(|c| system.energy(c)).collect(),
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn partition(&self, beta: f64) -> Complex64 {
        self.derivative(beta, 0)
    }

    /// `d^k Z / d beta^k = 2^-N sum (-i E)^k exp(-i beta E)`.
    pub fn derivative(&self, beta: f64, order: u32) -> Complex64 {
        let scale = 1.0 / self.energies.len() as f64;
        // (-i)^k cycles through 1, -i, -1, i.
        let unit = match order % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
        let sum: Complex64 = self
            .energies
            .chunks(SUM_BLOCK)
            .map(|chunk| {
                chunk
                    .iter()
                    .map(|&e| Complex64::from_polar(e.powi(order as i32), -beta * e))
                    .sum::<Complex64>()
            })
            .sum();
        unit * sum * scale
    }

    /// `2^-N sum |E|^k`, the natural magnitude of the `k`-th derivative.
    pub fn moment(&self, order: u32) -> f64 {
        self.energies.iter().map(|e| e.abs().powi(order as i32)).sum::<f64>() / self.energies.len() as f64
    }
}

/// Zero-field product formula `Z = prod_bonds cos(J_ij beta / 4)`, valid
/// only when the bond graph is a forest. Returns `None` on a cyclic graph.
pub fn tree_product_partition(system: &SpinSystem, beta: f64) -> Result<Option<PartitionValue>> {
    if system.field != 0.0 {
        return Err(Error::NonzeroField(system.field));
    }
    if !system.is_forest() {
        return Ok(None);
    }
    let z = system
        .bonds
        .iter()
        .map(|b| (0.25 * b.coupling * beta).cos())
        .product::<f64>();
    Ok(Some(PartitionValue {
        z: Complex64::new(z, 0.0),
        beta,
    }))
}
