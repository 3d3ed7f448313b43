//! Micro-level elasticity estimation: the critical rho values where three
//! level lines become concurrent split the parameter domain into intervals
//! on which solvability of the moment problem is constant; each interval is
//! probed once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moment::{moment_solvable, MomentProblemReport};
use crate::series::{validate_series, NormalizedPrices, TimeSeriesRecord};
use crate::tol::{RHO_BISECTION_TOL, RHO_SCAN_CAP, RHO_SCAN_EDGE};

/// A concurrency root: the unique rho at which the three lines of `triple`
/// pass through one point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalRho {
    pub rho: f64,
    /// 0-based record indices, increasing.
    pub triple: (usize, usize, usize),
    /// Sign-change bracket the bisection started from.
    pub bracket: (f64, f64),
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CriticalRhoSet {
    /// Roots sorted by rho.
    pub roots: Vec<CriticalRho>,
    /// Triples whose root sits at the rho = -1 endpoint of the domain.
    pub boundary_critical: Vec<(usize, usize, usize)>,
}

/// The 3x3 determinant whose vanishing marks concurrency of the three lines:
/// rows (1,1,1), (phat1(ti)^-rho), (phat2(ti)^-rho).
///
/// When |rho| times the log-price spread would overflow, the value returned
/// is the determinant with rows divided by their maxima; the sign is
/// preserved, which is all the root scan consumes.
pub fn concurrency_determinant(
    phat: &NormalizedPrices,
    triple: (usize, usize, usize),
    rho: f64,
) -> Result<f64> {
    let (t1, t2, t3) = triple;
    if !(t1 < t2 && t2 < t3 && t3 < phat.len()) {
        return Err(Error::Validation(format!(
            "triple {triple:?} must be increasing and within 0..{}",
            phat.len()
        )));
    }
    if !rho.is_finite() || rho == 0.0 || rho < -1.0 {
        return Err(Error::Validation(format!(
            "rho = {rho} outside [-1,0) u (0,+inf)"
        )));
    }
    let logs = triple_logs(phat, triple);
    let (value, log_scale) = reduced_determinant(&logs, rho);
    // Plain determinant = value * exp(log_scale) when representable.
    let full = value * log_scale.exp();
    if full.is_finite() {
        Ok(full)
    } else {
        Ok(value)
    }
}

/// (ln phat1(ti), ln phat2(ti)) for the triple.
fn triple_logs(phat: &NormalizedPrices, (t1, t2, t3): (usize, usize, usize)) -> [[f64; 2]; 3] {
    let mut out = [[0.0; 2]; 3];
    for (slot, &t) in [t1, t2, t3].iter().enumerate() {
        let p = phat.at(t);
        out[slot] = [p[0].ln(), p[1].ln()];
    }
    out
}

/// Determinant with the positive prefactor exp(-rho (A1+B1)) factored out:
///   expm1(-rho dA2) expm1(-rho dB3) - expm1(-rho dA3) expm1(-rho dB2).
/// Evaluated through expm1 it keeps full relative accuracy near rho = 0 and
/// switches to log-magnitude arithmetic when a term would overflow.
///
/// Returns (value, log_scale) with determinant = value * exp(log_scale);
/// the value is normalized by the dominant product so that it is a clean,
/// scale-free sign carrier for root scanning.
fn reduced_determinant(logs: &[[f64; 2]; 3], rho: f64) -> (f64, f64) {
    let da2 = logs[1][0] - logs[0][0];
    let da3 = logs[2][0] - logs[0][0];
    let db2 = logs[1][1] - logs[0][1];
    let db3 = logs[2][1] - logs[0][1];
    let u = [-rho * da2, -rho * db3, -rho * da3, -rho * db2];
    let log_prefactor = -rho * (logs[0][0] + logs[0][1]);
    // Products pair u[0]u[1] and u[2]u[3]; 250 each keeps both factors and
    // their product well inside f64 range.
    if u.iter().all(|v| v.abs() < 250.0) {
        let t1 = f64::exp_m1(u[0]) * f64::exp_m1(u[1]);
        let t2 = f64::exp_m1(u[2]) * f64::exp_m1(u[3]);
        let norm = t1.abs().max(t2.abs());
        if norm == 0.0 {
            return (0.0, log_prefactor);
        }
        return ((t1 - t2) / norm, log_prefactor + norm.ln());
    }
    // Large exponents: compare the two products by sign and log magnitude.
    let part = |v: f64| -> (f64, f64) {
        // (sign, log|expm1(v)|)
        if v == 0.0 {
            (0.0, f64::NEG_INFINITY)
        } else if v > 0.0 {
            // log(e^v - 1) = v + log(1 - e^-v)
            (1.0, v + f64::ln_1p(-(-v).exp()))
        } else {
            // |e^v - 1| = 1 - e^v
            (-1.0, f64::ln_1p(-v.exp()))
        }
    };
    let (s0, l0) = part(u[0]);
    let (s1, l1) = part(u[1]);
    let (s2, l2) = part(u[2]);
    let (s3, l3) = part(u[3]);
    let sign_a = s0 * s1;
    let sign_b = s2 * s3;
    let la = l0 + l1;
    let lb = l2 + l3;
    let m = la.max(lb);
    if m == f64::NEG_INFINITY {
        return (0.0, log_prefactor);
    }
    let value = sign_a * (la - m).exp() - sign_b * (lb - m).exp();
    (value, log_prefactor + m)
}

/// Sign-stable determinant surrogate for scanning and bisection.
fn scan_value(logs: &[[f64; 2]; 3], rho: f64) -> f64 {
    reduced_determinant(logs, rho).0
}

/// Find every concurrency rho over both branches of the domain.
///
/// Each triple admits at most one root; two sign changes raise a
/// consistency error. Triples whose determinant vanishes identically
/// (parallel transformed lines, e.g. proportional price vectors) have no
/// concurrency point and contribute nothing.
pub fn critical_rhos(phat: &NormalizedPrices) -> Result<CriticalRhoSet> {
    let t_count = phat.len();
    for i in 0..t_count {
        for j in i + 1..t_count {
            if phat.at(i) == phat.at(j) {
                return Err(Error::Validation(format!(
                    "records {} and {} have identical normalized prices",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let mut set = CriticalRhoSet::default();
    for t1 in 0..t_count {
        for t2 in t1 + 1..t_count {
            for t3 in t2 + 1..t_count {
                scan_triple(phat, (t1, t2, t3), &mut set)?;
            }
        }
    }
    set.roots
        .sort_by(|a, b| a.rho.partial_cmp(&b.rho).unwrap());
    Ok(set)
}

/// Normalized determinant values below this are float saturation noise:
/// either the determinant is structurally zero (proportional price rows) or
/// the arrangement is numerically Leontief at that rho. Such grid points
/// carry no sign information.
const SCAN_NOISE_FLOOR: f64 = 1e-11;

fn scan_triple(
    phat: &NormalizedPrices,
    triple: (usize, usize, usize),
    set: &mut CriticalRhoSet,
) -> Result<()> {
    let logs = triple_logs(phat, triple);
    let grid = scan_grid();
    let mut brackets: Vec<(f64, f64)> = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &rho in &grid {
        let v = scan_value(&logs, rho);
        if v.abs() < SCAN_NOISE_FLOOR {
            continue;
        }
        if let Some((prho, pv)) = prev {
            // Same branch only; the domain is disconnected at 0.
            if prho.signum() == rho.signum() && pv.signum() != v.signum() {
                brackets.push((prho, rho));
            }
        }
        prev = Some((rho, v));
    }
    if brackets.len() > 1 {
        return Err(Error::MultipleRoots {
            t1: triple.0 + 1,
            t2: triple.1 + 1,
            t3: triple.2 + 1,
        });
    }
    if let Some(&(mut lo, mut hi)) = brackets.first() {
        let bracket = (lo, hi);
        let mut flo = scan_value(&logs, lo);
        while hi - lo > RHO_BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            let fmid = scan_value(&logs, mid);
            if fmid == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if flo.signum() != fmid.signum() {
                hi = mid;
            } else {
                lo = mid;
                flo = fmid;
            }
        }
        push_root(set, 0.5 * (lo + hi), triple, bracket);
    }
    Ok(())
}

fn push_root(
    set: &mut CriticalRhoSet,
    rho: f64,
    triple: (usize, usize, usize),
    bracket: (f64, f64),
) {
    if (rho + 1.0).abs() <= 1e-9 {
        set.boundary_critical.push(triple);
    } else {
        set.roots.push(CriticalRho {
            rho,
            triple,
            bracket,
        });
    }
}

/// Logarithmic scan grid over [-1, -edge] and [edge, cap].
fn scan_grid() -> Vec<f64> {
    let mut grid = Vec::new();
    let step = 0.05;
    // negative branch: |rho| from 1 down to the edge
    let decades_down = (-RHO_SCAN_EDGE.log10()) as i64 * 20; // 8 / 0.05
    for k in 0..=decades_down {
        grid.push(-(10f64).powf(-step * k as f64));
    }
    // positive branch: from the edge up to the cap
    let lo = RHO_SCAN_EDGE.log10();
    let hi = RHO_SCAN_CAP.log10();
    let steps = ((hi - lo) / step).round() as i64;
    for k in 0..=steps {
        grid.push((10f64).powf(lo + step * k as f64));
    }
    grid
}

/// One maximal interval of the estimator's answer.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElasticityInterval {
    pub lo: f64,
    /// None encodes +infinity.
    pub hi: Option<f64>,
    pub probe_rho: f64,
    pub solvable: bool,
    /// sigma = 1/(1+rho) endpoints (decreasing map); None encodes an
    /// unbounded sigma at rho = -1.
    pub sigma_lo: Option<f64>,
    pub sigma_hi: Option<f64>,
    pub report: MomentProblemReport,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElasticityReport {
    pub intervals: Vec<ElasticityInterval>,
    pub critical: CriticalRhoSet,
}

impl ElasticityReport {
    pub fn solvable_intervals(&self) -> impl Iterator<Item = &ElasticityInterval> {
        self.intervals.iter().filter(|i| i.solvable)
    }

    /// The interval containing a given rho, if any.
    pub fn interval_containing(&self, rho: f64) -> Option<&ElasticityInterval> {
        self.intervals.iter().find(|i| {
            rho >= i.lo
                && match i.hi {
                    Some(hi) => rho < hi,
                    None => true,
                }
        })
    }
}

fn sigma_of(rho: f64) -> Option<f64> {
    if rho == -1.0 {
        None
    } else {
        Some(1.0 / (1.0 + rho))
    }
}

/// Partition the rho domain by the critical values and decide solvability
/// on each piece by probing its interior.
pub fn estimate_elasticity(series: &[TimeSeriesRecord]) -> Result<ElasticityReport> {
    validate_series(series)?;
    let phat = NormalizedPrices::from_records(series)?;
    let critical = critical_rhos(&phat)?;
    let neg: Vec<f64> = critical
        .roots
        .iter()
        .map(|r| r.rho)
        .filter(|&r| r < 0.0)
        .collect();
    let pos: Vec<f64> = critical
        .roots
        .iter()
        .map(|r| r.rho)
        .filter(|&r| r > 0.0)
        .collect();

    let mut pieces: Vec<(f64, Option<f64>, f64)> = Vec::new(); // (lo, hi, probe)
    // Negative branch [-1, 0).
    match neg.as_slice() {
        [] => pieces.push((-1.0, Some(0.0), -0.5)),
        roots => {
            pieces.push((-1.0, Some(roots[0]), -roots[0].abs().sqrt()));
            for w in roots.windows(2) {
                pieces.push((w[0], Some(w[1]), -(w[0] * w[1]).sqrt()));
            }
            let last = *roots.last().unwrap();
            pieces.push((last, Some(0.0), last / 100.0));
        }
    }
    // Positive branch (0, +inf).
    match pos.as_slice() {
        [] => pieces.push((0.0, None, 1.0)),
        roots => {
            pieces.push((0.0, Some(roots[0]), roots[0] / 100.0));
            for w in roots.windows(2) {
                pieces.push((w[0], Some(w[1]), (w[0] * w[1]).sqrt()));
            }
            let last = *roots.last().unwrap();
            pieces.push((last, None, 2.0 * last + 1.0));
        }
    }
    let t_count = series.len();
    let max_intervals = choose3(t_count) + 2;
    if pieces.len() > max_intervals {
        return Err(Error::MultipleRoots {
            t1: 0,
            t2: 0,
            t3: 0,
        });
    }

    let mut intervals = Vec::with_capacity(pieces.len());
    for (lo, hi, probe) in pieces {
        let report = probe_with_retries(series, lo, probe)?;
        // sigma = 1/(1+rho) is decreasing, so the sigma interval flips:
        // its low end comes from hi (0 at rho = +inf), its high end from lo.
        let sigma_lo = match hi {
            Some(h) => sigma_of(h),
            None => Some(0.0),
        };
        intervals.push(ElasticityInterval {
            lo,
            hi,
            probe_rho: report.rho,
            solvable: report.solvable,
            sigma_lo,
            sigma_hi: sigma_of(lo),
            report,
        });
    }
    Ok(ElasticityReport {
        intervals,
        critical,
    })
}

/// A probe can land on a degenerate coincidence (a double root hiding
/// between scan grid points, or float saturation at extreme rho where the
/// lines become numerically indistinguishable). Retry a nudged point, then
/// pull back toward the interval's low end, where coefficients were still
/// resolvable; max 5 attempts.
fn probe_with_retries(
    series: &[TimeSeriesRecord],
    lo: f64,
    probe: f64,
) -> Result<MomentProblemReport> {
    let candidates = [
        probe,
        probe * (1.0 + 1e-3),
        lo + (probe - lo) * 0.3,
        lo + (probe - lo) * 0.06,
        lo + (probe - lo) * 0.012,
    ];
    let mut last_err = None;
    for rho in candidates {
        if rho == 0.0 || rho < -1.0 {
            continue;
        }
        match moment_solvable(series, rho) {
            Ok(report) => return Ok(report),
            Err(e @ Error::DegenerateArrangement { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap())
}

fn choose3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}
