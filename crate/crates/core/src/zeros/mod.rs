//! Locating purely imaginary zeros: grid sweeps, minimum refinement and the
//! closed-form loci of the three-spin clusters.

mod locus;
mod refine;
mod sweep;

pub use locus::{
    chain_locus, field_zero_lines, triangle_locus, Branch, LocusKind, LocusModel, LocusRoot, LocusSolution, CLAMP_TOL,
    DEGENERATE_TOL, DISCRIMINANT_TOL,
};
pub use refine::{
    detect_minima, find_zeros, refine_zero, MinimaSource, Minimum, ZeroReport, CERTIFY_THRESHOLD, REFINE_REL_WIDTH,
};
pub use sweep::{default_grid, jbeta_grid, sweep, sweep_with, write_csv, SweepMode, SweepRecord};
