use serde::Serialize;

use super::sweep::{sweep_with, SweepMode, SweepRecord};
use crate::error::{Error, Result};
use crate::ising::{Spectrum, SpinSystem};
use crate::par::{self, Execution};

/// Refined minima below this `|Z|^2` are reported as zeros.
pub const CERTIFY_THRESHOLD: f64 = 1e-10;

/// Golden-section search stops once the bracket is this fraction of its
/// starting width.
pub const REFINE_REL_WIDTH: f64 = 1e-9;

const INV_PHI: f64 = 0.618_033_988_749_894_8;
const POLISH_MAX_ORDER: u32 = 24;
const POLISH_MAX_ITERS: usize = 60;

/// Which column of a sweep to search for minima.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinimaSource {
    Exact,
    Estimate,
}

/// A grid-level local minimum and the neighbouring grid points around it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub index: usize,
    pub bracket: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroReport {
    /// `J beta` of the minimum.
    pub location: f64,
    /// `|Z|^2` at `location` (exact mode) or the shot estimate there.
    pub residual: f64,
    pub certified: bool,
    pub bracket: (f64, f64),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
}

/// Interior strict local minima of the chosen column. A run of equal values
/// counts once, at its leftmost point, when both neighbours of the run are
/// higher.
pub fn detect_minima(records: &[SweepRecord], source: MinimaSource) -> Result<Vec<Minimum>> {
    if records.len() < 3 {
        return Err(Error::TooFewRecords(records.len()));
    }
    let values = records
        .iter()
        .enumerate()
        .map(|(i, r)| match source {
            MinimaSource::Exact => Ok(r.p_exact),
            MinimaSource::Estimate => r.p_estimate.ok_or(Error::MissingEstimate(i)),
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut out = Vec::new();
    let mut start = 1;
    while start < values.len() - 1 {
        let mut end = start;
        while end + 1 < values.len() && values[end + 1] == values[start] {
            end += 1;
        }
        if end + 1 < values.len() && values[start - 1] > values[start] && values[end + 1] > values[start] {
            out.push(Minimum {
                index: start,
                bracket: (records[start - 1].jbeta, records[end + 1].jbeta),
            });
        }
        start = end + 1;
    }
    Ok(out)
}

fn golden_section(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    best
}

/// Locates a zero of multiplicity `m` as the simple zero of `Z^(m-1)`.
///
/// `|Z|^2` is flat to rounding over a neighbourhood of width
/// `eps^(1/m)` around an `m`-fold zero, so the golden-section point alone
/// can sit far from the zero when `m` is large. Gauss-Newton on successive
/// derivatives converges quadratically only at `k = m - 1`, where the next
/// derivative is bounded away from zero.
fn polish(spectrum: &Spectrum, beta0: f64, range: (f64, f64)) -> Option<f64> {
    for order in 0..POLISH_MAX_ORDER {
        let scale = spectrum.moment(order + 1);
        if scale == 0.0 {
            return None;
        }
        let mut b = beta0;
        let mut converged = false;
        for _ in 0..POLISH_MAX_ITERS {
            let g = spectrum.derivative(b, order);
            let dg = spectrum.derivative(b, order + 1);
            let denom = dg.norm_sqr();
            if denom == 0.0 {
                break;
            }
            let step = (dg.conj() * g).re / denom;
            b -= step;
            if !(range.0 < b && b < range.1) {
                break;
            }
            if step.abs() <= 4.0 * f64::EPSILON * b.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if converged && spectrum.derivative(b, order + 1).norm() > 1e-6 * scale {
            return Some(b);
        }
    }
    None
}

/// Minimizes exact `|Z(beta)|^2` over `bracket` (in `J beta`) and certifies
/// the result when it falls below [`CERTIFY_THRESHOLD`] away from the
/// bracket ends.
pub fn refine_zero(system: &SpinSystem, j: f64, bracket: (f64, f64)) -> Result<ZeroReport> {
    refine_with_spectrum(&Spectrum::new(system)?, j, bracket)
}

fn refine_with_spectrum(spectrum: &Spectrum, j: f64, bracket: (f64, f64)) -> Result<ZeroReport> {
    let (lo, hi) = bracket;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) || j == 0.0 || !j.is_finite() {
        return Err(Error::InvalidBracket(lo, hi));
    }
    let objective = |x: f64| spectrum.partition(x / j).norm_sqr();
    let width = hi - lo;
    let (mut location, mut residual) = golden_section(objective, lo, hi, REFINE_REL_WIDTH * width);
    let edge = 2.0 * REFINE_REL_WIDTH * width;
    let at_boundary = location - lo < edge || hi - location < edge;
    if !at_boundary && residual < CERTIFY_THRESHOLD {
        let (b_lo, b_hi) = if j > 0.0 { (lo / j, hi / j) } else { (hi / j, lo / j) };
        if let Some(b) = polish(spectrum, location / j, (b_lo, b_hi)) {
            let x = b * j;
            let r = objective(x);
            if r < CERTIFY_THRESHOLD {
                location = x;
                residual = r;
            }
        }
    }
    Ok(ZeroReport {
        location,
        residual,
        certified: !at_boundary && residual < CERTIFY_THRESHOLD,
        bracket,
        std_error: None,
    })
}

/// Runs `sweep`, finds grid minima and turns them into reports.
///
/// Exact mode refines every minimum of `|Z|^2`; the result holds certified
/// zeros only unless `keep_uncertified` is set. Sampled modes report the
/// grid minima of the estimate, never certified, with binomial error bars.
pub fn find_zeros(
    system: &SpinSystem,
    j: f64,
    grid: &[f64],
    mode: SweepMode,
    keep_uncertified: bool,
    exec: Execution,
) -> Result<Vec<ZeroReport>> {
    let records = sweep_with(system, j, grid, mode, exec)?;
    if records.len() < 3 {
        return Err(Error::TooFewRecords(records.len()));
    }
    if mode == SweepMode::Exact {
        let spectrum = Spectrum::new(system)?;
        let minima = detect_minima(&records, MinimaSource::Exact)?;
        let reports = par::map_indexed(exec, minima.len(), |k| {
            refine_with_spectrum(&spectrum, j, minima[k].bracket)
        });
        let reports: Vec<ZeroReport> = reports.into_iter().collect::<Result<_>>()?;
        Ok(reports
            .into_iter()
            .filter(|r| keep_uncertified || r.certified)
            .collect())
    } else {
        let minima = detect_minima(&records, MinimaSource::Estimate)?;
        Ok(minima
            .iter()
            .map(|m| {
                let r = &records[m.index];
                ZeroReport {
                    location: r.jbeta,
                    residual: r.p_estimate.unwrap_or(f64::NAN),
                    certified: false,
                    bracket: m.bracket,
                    std_error: r.std_error(),
                }
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::Preset;
    use crate::zeros::sweep::default_grid;
    use std::f64::consts::PI;

    fn rec(jbeta: f64, p: f64) -> SweepRecord {
        SweepRecord {
            jbeta,
            p_exact: p,
            p_estimate: None,
            shots: None,
            seed: None,
        }
    }

    fn records(values: &[f64]) -> Vec<SweepRecord> {
        values.iter().enumerate().map(|(i, &p)| rec(i as f64, p)).collect()
    }

    #[test]
    fn minima_basic_and_plateau() {
        let m = detect_minima(&records(&[3.0, 1.0, 2.0, 0.5, 0.5, 0.5, 4.0]), MinimaSource::Exact).unwrap();
        assert_eq!(
            m,
            vec![
                Minimum {
                    index: 1,
                    bracket: (0.0, 2.0)
                },
                Minimum {
                    index: 3,
                    bracket: (2.0, 6.0)
                },
            ]
        );
        // A plateau running into the edge is not interior.
        assert!(detect_minima(&records(&[3.0, 1.0, 1.0]), MinimaSource::Exact)
            .unwrap()
            .is_empty());
        assert!(detect_minima(&records(&[1.0, 2.0, 3.0, 4.0]), MinimaSource::Exact)
            .unwrap()
            .is_empty());
        assert_eq!(
            detect_minima(&records(&[1.0, 2.0]), MinimaSource::Exact),
            Err(Error::TooFewRecords(2))
        );
        assert_eq!(
            detect_minima(&records(&[1.0, 0.0, 2.0]), MinimaSource::Estimate),
            Err(Error::MissingEstimate(0))
        );
    }

    #[test]
    fn golden_section_on_parabola() {
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2), -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx < 1e-18);
    }

    #[test]
    fn chain_zero_field_zero_at_two_pi() {
        let sys = SpinSystem::preset(Preset::Chain3, 1.0, 0.0).unwrap();
        let r = refine_zero(&sys, 1.0, (1.9 * PI, 2.1 * PI)).unwrap();
        assert!(r.certified);
        assert!((r.location - 2.0 * PI).abs() < 1e-8, "{}", r.location - 2.0 * PI);
    }

    #[test]
    fn triangle_zero_field_is_not_a_zero() {
        let sys = SpinSystem::preset(Preset::Triangle3, 1.0, 0.0).unwrap();
        let r = refine_zero(&sys, 1.0, (0.9 * PI, 1.1 * PI)).unwrap();
        assert!(!r.certified);
        assert!(r.residual >= 0.25 - 1e-12);
        assert!((r.residual - 0.25).abs() < 1e-12);
    }

    #[test]
    fn lagos_six_fold_zero() {
        let sys = SpinSystem::preset(Preset::Lagos7, 1.0, 0.0).unwrap();
        let r = refine_zero(&sys, 1.0, (5.5 * PI, 6.5 * PI)).unwrap();
        assert!(r.certified);
        assert!((r.location - 6.0 * PI).abs() < 1e-8, "{}", r.location - 6.0 * PI);
    }

    #[test]
    fn monotone_bracket_hits_boundary() {
        let sys = SpinSystem::preset(Preset::Chain3, 1.0, 0.0).unwrap();
        // cos^4(x/4) decreases on [0, 2 pi], so the search runs into `hi`.
        let r = refine_zero(&sys, 1.0, (0.5, 1.5)).unwrap();
        assert!(!r.certified);
        assert!(1.5 - r.location < 1e-8);
        assert!(refine_zero(&sys, 1.0, (1.0, 1.0)).is_err());
    }

    #[test]
    fn negative_reference_coupling() {
        let sys = SpinSystem::preset(Preset::Chain3, -1.0, -1.0).unwrap();
        let zs = find_zeros(
            &sys,
            -1.0,
            &default_grid(),
            SweepMode::Exact,
            false,
            Execution::Sequential,
        )
        .unwrap();
        let locs: Vec<f64> = zs.iter().map(|z| z.location / PI).collect();
        assert_eq!(locs.len(), 6, "{locs:?}");
    }

    #[test]
    fn shot_mode_reports_are_uncertified() {
        let sys = SpinSystem::preset(Preset::Lagos7, 1.0, 0.0).unwrap();
        let zs = find_zeros(
            &sys,
            1.0,
            &default_grid(),
            SweepMode::Shots { shots: 8192, seed: 1 },
            false,
            Execution::Parallel,
        )
        .unwrap();
        assert!(zs.iter().all(|z| !z.certified && z.std_error.is_some()));
        // The estimate is 0 over a wide plateau around each six-fold zero.
        assert!(zs.iter().any(|z| z.bracket.0 < 2.0 * PI && 2.0 * PI < z.bracket.1));
    }
}
