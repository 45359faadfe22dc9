//! Closed-form zero loci in the `(J beta, h beta)` plane for the three-spin
//! chain and triangle.
//!
//! With `A = cos(3 h beta / 2)` and `B = cos(h beta / 2)`:
//!
//! * chain: `|4Z|^2 = 0` is a quadratic in `u = cos(J beta / 2)`,
//!   `4AB u^2 + 4B(B + A) u + A^2 + 5B^2 - 2AB = 0`, with roots
//!   `u = [-B(B + A) +- sqrt(B (B - A)^3)] / (2AB)`;
//! * triangle: `|4Z|^2 = A^2 + 9B^2 + 6AB cos(J beta)`, vanishing at
//!   `cos(J beta) = -(A^2 + 9B^2) / (6AB)`.
//!
//! When `A = B = 0` (`h beta` an odd multiple of pi) `Z` vanishes for every
//! `J beta`. When exactly one of them vanishes neither equation has a real
//! solution.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// `|A|` and `|B|` below this count as zero.
pub const DEGENERATE_TOL: f64 = 1e-9;
/// Roots with `|u| <= 1 + CLAMP_TOL` are clamped onto `[-1, 1]`.
pub const CLAMP_TOL: f64 = 1e-9;
/// Slightly negative discriminants down to this are treated as zero.
pub const DISCRIMINANT_TOL: f64 = 1e-12;

const MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocusKind {
    Roots,
    DegenerateAll,
    None,
}

impl fmt::Display for LocusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LocusKind::Roots => "roots",
            LocusKind::DegenerateAll => "degenerate_all",
            LocusKind::None => "none",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Plus,
    Minus,
    /// Both chain branches gave the same value.
    Merged,
    /// The triangle's single candidate.
    Single,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocusRoot {
    /// `cos(J beta / 2)` for the chain, `cos(J beta)` for the triangle.
    pub cosine: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusSolution {
    pub hbeta: f64,
    pub kind: LocusKind,
    pub roots: Vec<LocusRoot>,
}

impl LocusSolution {
    fn with(hbeta: f64, kind: LocusKind) -> Self {
        LocusSolution {
            hbeta,
            kind,
            roots: Vec::new(),
        }
    }
}

/// The two three-spin geometries with a closed-form locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocusModel {
    Chain3,
    Triangle3,
}

impl FromStr for LocusModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain3" => Ok(LocusModel::Chain3),
            "triangle3" => Ok(LocusModel::Triangle3),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }
}

impl LocusModel {
    pub fn solve(self, hbeta: f64) -> LocusSolution {
        match self {
            LocusModel::Chain3 => chain_locus(hbeta),
            LocusModel::Triangle3 => triangle_locus(hbeta),
        }
    }

    /// `J beta` values in one period (`[0, 4 pi]` for the chain, `[0, 2 pi]`
    /// for the triangle) where `Z` vanishes, in increasing order.
    pub fn jbeta_values(self, solution: &LocusSolution) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for r in &solution.roots {
            let (x, period) = match self {
                LocusModel::Chain3 => (2.0 * r.cosine.acos(), 4.0 * PI),
                LocusModel::Triangle3 => (r.cosine.acos(), 2.0 * PI),
            };
            out.push(x);
            out.push(period - x);
        }
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < MERGE_TOL);
        out
    }
}

fn coefficients(hbeta: f64) -> (f64, f64) {
    ((1.5 * hbeta).cos(), (0.5 * hbeta).cos())
}

fn clamp_root(u: f64) -> Option<f64> {
    (u.is_finite() && u.abs() <= 1.0 + CLAMP_TOL).then(|| u.clamp(-1.0, 1.0))
}

/// Real solutions `cos(J beta / 2)` of the chain locus at fixed `h beta`.
pub fn chain_locus(hbeta: f64) -> LocusSolution {
    let (a, b) = coefficients(hbeta);
    let (a0, b0) = (a.abs() < DEGENERATE_TOL, b.abs() < DEGENERATE_TOL);
    if a0 && b0 {
        return LocusSolution::with(hbeta, LocusKind::DegenerateAll);
    }
    if a0 || b0 {
        return LocusSolution::with(hbeta, LocusKind::None);
    }
    let disc = b * (b - a).powi(3);
    if disc < -DISCRIMINANT_TOL {
        return LocusSolution::with(hbeta, LocusKind::None);
    }
    let sq = disc.max(0.0).sqrt();
    let (num, den) = (-b * (b + a), 2.0 * a * b);
    let plus = clamp_root((num + sq) / den);
    let minus = clamp_root((num - sq) / den);
    let roots = match (plus, minus) {
        (Some(p), Some(m)) if (p - m).abs() < MERGE_TOL => vec![LocusRoot {
            cosine: p,
            branch: Branch::Merged,
        }],
        _ => [(plus, Branch::Plus), (minus, Branch::Minus)]
            .into_iter()
            .filter_map(|(r, branch)| r.map(|cosine| LocusRoot { cosine, branch }))
            .collect(),
    };
    let kind = if roots.is_empty() {
        LocusKind::None
    } else {
        LocusKind::Roots
    };
    LocusSolution { hbeta, kind, roots }
}

/// Real solution `cos(J beta)` of the triangle locus at fixed `h beta`.
pub fn triangle_locus(hbeta: f64) -> LocusSolution {
    let (a, b) = coefficients(hbeta);
    let (a0, b0) = (a.abs() < DEGENERATE_TOL, b.abs() < DEGENERATE_TOL);
    if a0 && b0 {
        return LocusSolution::with(hbeta, LocusKind::DegenerateAll);
    }
    if a0 || b0 {
        return LocusSolution::with(hbeta, LocusKind::None);
    }
    match clamp_root(-(a * a + 9.0 * b * b) / (6.0 * a * b)) {
        Some(cosine) => LocusSolution {
            hbeta,
            kind: LocusKind::Roots,
            roots: vec![LocusRoot {
                cosine,
                branch: Branch::Single,
            }],
        },
        None => LocusSolution::with(hbeta, LocusKind::None),
    }
}

/// `h beta = (2n + 1) pi` for each `n`, where every `J beta` is a zero.
pub fn field_zero_lines(ns: impl IntoIterator<Item = i64>) -> Vec<f64> {
    ns.into_iter().map(|n| (2 * n + 1) as f64 * PI).collect()
}
