//! The line family induced by a time series at a fixed rho, its angular
//! sweep, the cell spectra, and the formal word of the arrangement.
//!
//! After the change of variables, observation t becomes the line
//! a_t z1 + b_t z2 = 1 with positive coefficients. Lines are renumbered so
//! that a is strictly increasing; that ordering is the same for every rho
//! within a branch, and the original time index of each line is retained.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::series::NormalizedPrices;
use crate::spectrum::Spectrum;
use crate::tol::{ANGLE_TIE_TOL, CONCURRENCY_TOL};

/// Which half of the rho domain produced the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhoBranch {
    NegativeRho,
    PositiveRho,
}

/// Lines a_t z1 + b_t z2 = 1 with positive coefficients, renumbered by
/// increasing a.
#[derive(Clone, Debug)]
pub struct LineFamily {
    coeffs: Vec<(f64, f64)>,
    /// order[k] = original (0-based) record index of renumbered line k.
    order: Vec<usize>,
    rho: f64,
    epsilon: Option<f64>,
    branch: RhoBranch,
}

impl LineFamily {
    pub fn t(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[(f64, f64)] {
        &self.coeffs
    }

    /// Original record index of renumbered line k.
    pub fn original_index(&self, k: usize) -> usize {
        self.order[k]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    pub fn branch(&self) -> RhoBranch {
        self.branch
    }

    /// Permute a vector from original record order into line order.
    pub fn permute_to_line_order(&self, v: &[f64]) -> Vec<f64> {
        self.order.iter().map(|&orig| v[orig]).collect()
    }

    /// Scatter a vector indexed by lines back into original record order.
    pub fn unpermute_from_line_order(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for (k, &orig) in self.order.iter().enumerate() {
            out[orig] = v[k];
        }
        out
    }
}

/// Change of variables sending the CES level sets to straight lines.
///
/// For rho < 0 the coefficients are phat^{-rho} directly. For rho > 0 they
/// are 1/eps - phat^{-rho} with eps = 0.5 / max_t max_i phat_i(t)^{-rho},
/// which keeps every coefficient at least half of 1/(2 eps) away from zero
/// and satisfies both strict inequalities required of eps. The resulting
/// cone does not depend on the particular eps.
pub fn transform_coordinates(rho: f64, phat: &NormalizedPrices) -> Result<LineFamily> {
    if !rho.is_finite() || rho == 0.0 || rho < -1.0 {
        return Err(Error::Validation(format!(
            "rho = {rho} outside [-1,0) u (0,+inf)"
        )));
    }
    if phat.dim() != 2 {
        return Err(Error::Validation(format!(
            "line families need 2 input prices, got {}",
            phat.dim()
        )));
    }
    let t_count = phat.len();
    let pow = |v: f64| -> Result<f64> {
        let w = v.powf(-rho);
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::NumericRange {
                context: "transform_coordinates".into(),
                detail: format!("phat^(-rho) = {w} for phat={v}, rho={rho}"),
            });
        }
        Ok(w)
    };
    let mut coeffs = Vec::with_capacity(t_count);
    let mut epsilon = None;
    match rho {
        r if r < 0.0 => {
            for idx in 0..t_count {
                let p = phat.at(idx);
                coeffs.push((pow(p[0])?, pow(p[1])?));
            }
        }
        _ => {
            let mut max_pow: f64 = 0.0;
            let mut pows = Vec::with_capacity(t_count);
            for idx in 0..t_count {
                let p = phat.at(idx);
                let (w1, w2) = (pow(p[0])?, pow(p[1])?);
                max_pow = max_pow.max(w1).max(w2);
                pows.push((w1, w2));
            }
            let eps = 0.5 / max_pow;
            let inv_eps = 1.0 / eps;
            for (w1, w2) in pows {
                coeffs.push((inv_eps - w1, inv_eps - w2));
            }
            epsilon = Some(eps);
        }
    }
    // Renumber by increasing a (ties broken by b then original index so the
    // ordering is total; exact a-ties only matter for sigma_order).
    let mut order: Vec<usize> = (0..t_count).collect();
    order.sort_by(|&i, &j| {
        (coeffs[i].0, coeffs[i].1, i)
            .partial_cmp(&(coeffs[j].0, coeffs[j].1, j))
            .unwrap()
    });
    let coeffs = order.iter().map(|&i| coeffs[i]).collect();
    Ok(LineFamily {
        coeffs,
        order,
        rho,
        epsilon,
        branch: if rho < 0.0 {
            RhoBranch::NegativeRho
        } else {
            RhoBranch::PositiveRho
        },
    })
}

/// The formal word of an arrangement: a sequence of adjacent-transposition
/// position indices in {1, ..., T-1}.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FormalWord {
    letters: Vec<usize>,
}

impl FormalWord {
    pub fn empty() -> FormalWord {
        FormalWord {
            letters: Vec::new(),
        }
    }

    /// Letters are 1-based positions; each must be in {1,...,t_max}.
    pub fn new(letters: Vec<usize>, t: usize) -> Result<FormalWord> {
        for &l in &letters {
            if l == 0 || l >= t {
                return Err(Error::Validation(format!(
                    "word letter {l} outside 1..={}",
                    t - 1
                )));
            }
        }
        Ok(FormalWord { letters })
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Product of the adjacent transpositions, applied left to right to the
    /// identity: the permutation of the last sweep sector.
    pub fn permutation(&self, t: usize) -> Perm {
        let mut p = Perm::identity(t);
        for &l in &self.letters {
            p = p.swap_positions(l - 1);
        }
        p
    }
}

/// Everything the angular sweep of a line family produces.
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub t: usize,
    /// Critical ray angles, strictly increasing.
    pub angles: Vec<f64>,
    /// Sector permutations, one per sector (angles.len() + 1 of them).
    /// permutations[i].at(k) is the line met (k+1)-th walking inward.
    pub permutations: Vec<Perm>,
    pub word: FormalWord,
    /// For each sector, the T+1 cell spectra met walking inward.
    pub sector_spectra: Vec<Vec<Spectrum>>,
    /// Nonfatal observations (co-angular independent crossings etc).
    pub warnings: Vec<String>,
}

struct Event {
    slope: f64,
    z1: f64,
    lo: usize,
    hi: usize,
}

/// Sweep a ray through the open quadrant and record how the radial order of
/// line crossings evolves.
pub fn sweep(family: &LineFamily) -> Result<SweepResult> {
    let t_count = family.t();
    let coeffs = family.coeffs();
    // Identical lines make strict cell classification impossible.
    for i in 0..t_count {
        for j in i + 1..t_count {
            let (ai, bi) = coeffs[i];
            let (aj, bj) = coeffs[j];
            if (ai - aj).abs() <= CONCURRENCY_TOL * ai.max(aj)
                && (bi - bj).abs() <= CONCURRENCY_TOL * bi.max(bj)
            {
                return Err(Error::Tie(vec![
                    family.original_index(i) + 1,
                    family.original_index(j) + 1,
                ]));
            }
        }
    }
    // Pairwise intersections inside the open quadrant.
    let mut events = Vec::new();
    for i in 0..t_count {
        for j in i + 1..t_count {
            let (ai, bi) = coeffs[i];
            let (aj, bj) = coeffs[j];
            let det = ai * bj - aj * bi;
            if det == 0.0 {
                continue;
            }
            let z1 = (bj - bi) / det;
            let z2 = (ai - aj) / det;
            if !(z1 > 0.0 && z2 > 0.0 && z1.is_finite() && z2.is_finite()) {
                continue;
            }
            // Any third line through this point makes the arrangement
            // degenerate at this rho.
            for (k, &(ak, bk)) in coeffs.iter().enumerate() {
                if k == i || k == j {
                    continue;
                }
                let residual = ak * z1 + bk * z2 - 1.0;
                let scale = (ak * z1).abs() + (bk * z2).abs() + 1.0;
                if residual.abs() <= CONCURRENCY_TOL * scale {
                    return Err(Error::DegenerateArrangement {
                        rho: family.rho(),
                        t1: family.original_index(i) + 1,
                        t2: family.original_index(j) + 1,
                        t3: family.original_index(k) + 1,
                        det: residual.abs(),
                    });
                }
            }
            events.push(Event {
                slope: z2 / z1,
                z1,
                lo: i,
                hi: j,
            });
        }
    }
    events.sort_by(|a, b| {
        (a.slope, a.lo, a.hi)
            .partial_cmp(&(b.slope, b.lo, b.hi))
            .unwrap()
    });

    let mut warnings = Vec::new();
    let mut perm = Perm::identity(t_count);
    let mut permutations = vec![perm.clone()];
    let mut word_letters = Vec::new();
    let mut angles = Vec::new();

    // Process tie groups of (numerically) equal angles together: within a
    // group the crossings must involve disjoint position pairs, and each is
    // applied when its two lines are adjacent in the current order.
    let mut idx = 0;
    while idx < events.len() {
        let mut end = idx + 1;
        while end < events.len()
            && (events[end].slope - events[end - 1].slope).abs()
                <= ANGLE_TIE_TOL * (1.0 + events[end].slope.abs())
        {
            end += 1;
        }
        if end - idx > 1 {
            warnings.push(format!(
                "{} crossings share a ray angle near slope {}; processed in \
                 deterministic order",
                end - idx,
                events[idx].slope
            ));
        }
        let mut pending: Vec<&Event> = events[idx..end].iter().collect();
        while !pending.is_empty() {
            let pos = pending.iter().position(|e| {
                let pi = perm.position_of(e.lo);
                let pj = perm.position_of(e.hi);
                pi.abs_diff(pj) == 1
            });
            let Some(pos) = pos else {
                let e = pending[0];
                return Err(Error::DegenerateArrangement {
                    rho: family.rho(),
                    t1: family.original_index(e.lo) + 1,
                    t2: family.original_index(e.hi) + 1,
                    t3: 0,
                    det: 0.0,
                });
            };
            let e = pending.remove(pos);
            let pi = perm.position_of(e.lo);
            let pj = perm.position_of(e.hi);
            let k = pi.min(pj);
            // Entering the sector past this angle, the line that was nearer
            // the origin moves outward: positions k, k+1 swap.
            perm = perm.swap_positions(k);
            permutations.push(perm.clone());
            word_letters.push(k + 1);
            angles.push(e.slope.atan());
            debug_assert!(e.z1 > 0.0);
        }
        idx = end;
    }

    let word = FormalWord::new(word_letters, t_count.max(2))?;
    let sector_spectra = permutations
        .iter()
        .map(|p| sector_prefix_spectra(p, t_count))
        .collect();
    Ok(SweepResult {
        t: t_count,
        angles,
        permutations,
        word,
        sector_spectra,
        warnings,
    })
}

/// Walking inward along a ray in this sector, the cells met are the prefix
/// sets of the sector permutation: crossing line p_k flips bit p_k to 1.
fn sector_prefix_spectra(perm: &Perm, t: usize) -> Vec<Spectrum> {
    let mut out = Vec::with_capacity(t + 1);
    let mut current = Spectrum::zeros(t);
    out.push(current.clone());
    for k in 0..t {
        current.set(perm.at(k), true);
        out.push(current.clone());
    }
    out
}

/// All distinct cell spectra of the arrangement. Their number is
/// 1 + T + (number of pairwise intersections in the open quadrant).
pub fn enumerate_spectra(family: &LineFamily) -> Result<BTreeSet<Spectrum>> {
    let sweep_result = sweep(family)?;
    let mut set = BTreeSet::new();
    for sector in &sweep_result.sector_spectra {
        for s in sector {
            set.insert(s.clone());
        }
    }
    debug_assert_eq!(set.len(), 1 + family.t() + sweep_result.angles.len());
    Ok(set)
}

/// The permutation ordering lines by increasing second coefficient, given
/// that they are already numbered by increasing first coefficient.
pub fn sigma_order(family: &LineFamily) -> Result<Perm> {
    let coeffs = family.coeffs();
    let t_count = family.t();
    for w in 0..t_count.saturating_sub(1) {
        let (a0, _) = coeffs[w];
        let (a1, _) = coeffs[w + 1];
        if (a1 - a0).abs() <= CONCURRENCY_TOL * a1.abs().max(a0.abs()) {
            return Err(Error::Tie(vec![
                family.original_index(w) + 1,
                family.original_index(w + 1) + 1,
            ]));
        }
    }
    let mut by_b: Vec<usize> = (0..t_count).collect();
    by_b.sort_by(|&i, &j| coeffs[i].1.partial_cmp(&coeffs[j].1).unwrap());
    for w in by_b.windows(2) {
        let b0 = coeffs[w[0]].1;
        let b1 = coeffs[w[1]].1;
        if (b1 - b0).abs() <= CONCURRENCY_TOL * b1.abs().max(b0.abs()) {
            return Err(Error::Tie(vec![
                family.original_index(w[0]) + 1,
                family.original_index(w[1]) + 1,
            ]));
        }
    }
    Ok(Perm::from_seq(by_b))
}
