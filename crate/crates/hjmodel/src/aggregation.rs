//! Aggregate profit for finite groups of industries, the two-industry
//! closed forms, stable-correspondence checking, and equilibrium-condition
//! verification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::DiscreteMeasure;

/// One industry: a capacity distribution over its technologies.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Industry {
    pub id: String,
    pub measure: DiscreteMeasure,
}

/// End-consumer demand families whose Young transforms are closed-form.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Demand {
    /// Complementary products: F0(X) = min_i X_i, so q0(q) = sum q_i.
    Leontief,
    /// CES substitutes: F0(X) = (sum X_i^-rho)^(-1/rho).
    Ces { rho: f64 },
}

impl Demand {
    pub fn validate(&self) -> Result<()> {
        if let Demand::Ces { rho } = self {
            if !rho.is_finite() || *rho == 0.0 || *rho < -1.0 {
                return Err(Error::Validation(format!(
                    "demand rho = {rho} outside [-1,0) u (0,+inf)"
                )));
            }
        }
        Ok(())
    }

    pub fn utility(&self, x: &[f64]) -> f64 {
        match self {
            Demand::Leontief => x.iter().cloned().fold(f64::INFINITY, f64::min),
            Demand::Ces { rho } => {
                if *rho == -1.0 {
                    x.iter().sum()
                } else {
                    x.iter()
                        .map(|&v| v.powf(-rho))
                        .sum::<f64>()
                        .powf(-1.0 / rho)
                }
            }
        }
    }

    /// Young transform of the utility: the aggregate price index q0(q).
    pub fn price_index(&self, q: &[f64]) -> f64 {
        match self {
            Demand::Leontief => q.iter().sum(),
            Demand::Ces { rho } => {
                if *rho == -1.0 {
                    q.iter().cloned().fold(f64::INFINITY, f64::min)
                } else {
                    let a = rho / (1.0 + rho);
                    q.iter().map(|&v| v.powf(a)).sum::<f64>().powf(1.0 / a)
                }
            }
        }
    }
}

/// Profit of one industry at product price qj and resource prices s.
fn industry_profit(industry: &Industry, qj: f64, s: &[f64]) -> f64 {
    industry
        .measure
        .atoms()
        .iter()
        .map(|a| {
            let cost: f64 = s.iter().zip(&a.x).map(|(&si, &xi)| si * xi).sum();
            a.mass * (qj - cost).max(0.0)
        })
        .sum()
}

/// Which half of the price space the closed form selected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConeSide {
    K1,
    K2,
    Boundary,
}

/// Closed-form aggregate profit of the two-industry complementary-goods
/// example: industry 1 holds mass k0 at z, industry 2 holds k1 at y1 and
/// k2 at y2, demand is Leontief. Requires k1 + k2 > k0.
#[allow(clippy::too_many_arguments)]
pub fn aggregate_profit_complementary(
    k0: f64,
    z: &[f64],
    k1: f64,
    y1: &[f64],
    k2: f64,
    y2: &[f64],
    s: &[f64],
    p0: f64,
) -> Result<(f64, ConeSide)> {
    if !(k0 > 0.0 && k1 >= 0.0 && k2 >= 0.0 && k1 + k2 > k0) {
        return Err(Error::Validation(
            "complementary closed form needs k0 > 0 and k1 + k2 > k0".into(),
        ));
    }
    if p0 <= 0.0 {
        return Err(Error::Validation("p0 must be positive".into()));
    }
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let c1 = dot(s, z) + dot(s, y1);
    let c2 = dot(s, z) + dot(s, y2);
    let pi1 = (k0 - k2).max(0.0) * (p0 - c1).max(0.0) + k0.min(k2) * (p0 - c2).max(0.0);
    let pi2 = k0.min(k1) * (p0 - c1).max(0.0) + (k0 - k1).max(0.0) * (p0 - c2).max(0.0);
    let sy1 = dot(s, y1);
    let sy2 = dot(s, y2);
    let side = if sy2 < sy1 {
        ConeSide::K1
    } else if sy1 < sy2 {
        ConeSide::K2
    } else {
        ConeSide::Boundary
    };
    Ok((pi1.max(pi2), side))
}

/// The two profit branches of the complementary closed form, for continuity
/// checks along the dividing ray.
#[allow(clippy::too_many_arguments)]
pub fn complementary_branches(
    k0: f64,
    z: &[f64],
    k1: f64,
    y1: &[f64],
    k2: f64,
    y2: &[f64],
    s: &[f64],
    p0: f64,
) -> (f64, f64) {
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let c1 = dot(s, z) + dot(s, y1);
    let c2 = dot(s, z) + dot(s, y2);
    let pi1 = (k0 - k2).max(0.0) * (p0 - c1).max(0.0) + k0.min(k2) * (p0 - c2).max(0.0);
    let pi2 = k0.min(k1) * (p0 - c1).max(0.0) + (k0 - k1).max(0.0) * (p0 - c2).max(0.0);
    (pi1, pi2)
}

/// Closed-form aggregate profit for CES demand over the two industries, in
/// the price region where all three aggregate technologies are active.
/// Outside the region the reduced numeric minimization is used.
pub struct CesAggregate {
    pub value: f64,
    /// True when (s, p0) satisfied the closed-form region inequality.
    pub in_region: bool,
    pub kappa1: f64,
    pub kappa2: f64,
    /// The aggregate capacity distribution, when in region.
    pub aggregate_measure: Option<DiscreteMeasure>,
}

#[allow(clippy::too_many_arguments)]
pub fn aggregate_profit_ces_demand(
    k0: f64,
    z: &[f64],
    k1: f64,
    y1: &[f64],
    k2: f64,
    y2: &[f64],
    rho: f64,
    s: &[f64],
    p0: f64,
) -> Result<CesAggregate> {
    let demand = Demand::Ces { rho };
    demand.validate()?;
    if !(k0 > 0.0 && k1 > 0.0 && k2 > 0.0) {
        return Err(Error::Validation("masses must be positive".into()));
    }
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    let kk = k1 + k2;
    let e = (1.0 + rho) / rho;
    let kappa1 = ((k0.powf(rho) + kk.powf(rho)) / kk.powf(rho)).powf(e);
    let kappa2 = ((k0.powf(rho) + kk.powf(rho)) / k0.powf(rho)).powf(e);
    let sz = dot(s, z);
    let sy1 = dot(s, y1);
    let sy2 = dot(s, y2);
    let in_region = p0 > (kappa1 * sz).max(kappa2 * sy1.max(sy2));
    if in_region {
        let value = k0 / kappa1 * (p0 - kappa1 * sz).max(0.0)
            + k1 / kappa2 * (p0 - kappa2 * sy1).max(0.0)
            + k2 / kappa2 * (p0 - kappa2 * sy2).max(0.0);
        let mut measure = DiscreteMeasure::empty();
        measure.push(z.iter().map(|v| v * kappa1).collect(), k0 / kappa1, 0.0)?;
        measure.push(y1.iter().map(|v| v * kappa2).collect(), k1 / kappa2, 0.0)?;
        measure.push(y2.iter().map(|v| v * kappa2).collect(), k2 / kappa2, 0.0)?;
        return Ok(CesAggregate {
            value,
            in_region,
            kappa1,
            kappa2,
            aggregate_measure: Some(measure),
        });
    }
    // Fall back to the reduced numeric minimization.
    let industries = two_industry_group(k0, z, k1, y1, k2, y2)?;
    let numeric = aggregate_profit_numeric(&industries, demand, s, p0)?;
    Ok(CesAggregate {
        value: numeric.value,
        in_region,
        kappa1,
        kappa2,
        aggregate_measure: None,
    })
}

fn two_industry_group(
    k0: f64,
    z: &[f64],
    k1: f64,
    y1: &[f64],
    k2: f64,
    y2: &[f64],
) -> Result<Vec<Industry>> {
    let mut m1 = DiscreteMeasure::empty();
    m1.push(z.to_vec(), k0, 0.0)?;
    let mut m2 = DiscreteMeasure::empty();
    m2.push(y1.to_vec(), k1, 0.0)?;
    m2.push(y2.to_vec(), k2, 0.0)?;
    Ok(vec![
        Industry {
            id: "industry-1".into(),
            measure: m1,
        },
        Industry {
            id: "industry-2".into(),
            measure: m2,
        },
    ])
}

/// Numeric aggregate profit minimization result.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AggregateNumeric {
    pub value: f64,
    /// Product prices at the minimum.
    pub q: Vec<f64>,
    /// |q0(q) - p0| at the reported point.
    pub constraint_residual: f64,
    /// Objective improvement of the last descent sweep (stationarity proxy).
    pub stationarity_gap: f64,
}

/// Minimize the total industry profit over product prices q >= 0 subject to
/// q0(q) >= p0. Industry profits are nondecreasing in q and q0 is
/// increasing, so the optimum sits on the boundary q0(q) = p0; the search
/// runs over the boundary parametrization with coordinate descent from a
/// deterministic grid of starts.
pub fn aggregate_profit_numeric(
    industries: &[Industry],
    demand: Demand,
    s: &[f64],
    p0: f64,
) -> Result<AggregateNumeric> {
    demand.validate()?;
    if industries.is_empty() || industries.len() > 3 {
        return Err(Error::Capability(
            "aggregate_profit_numeric supports 1 to 3 industries".into(),
        ));
    }
    if p0 <= 0.0 {
        return Err(Error::Validation("p0 must be positive".into()));
    }
    let m = industries.len();
    let objective = |q: &[f64]| -> f64 {
        industries
            .iter()
            .zip(q)
            .map(|(ind, &qj)| industry_profit(ind, qj, s))
            .sum()
    };
    match m {
        1 => {
            // q0(q1) = c q1 with c = q0(1); the boundary is a point.
            let c = demand.price_index(&[1.0]);
            let q1 = p0 / c;
            let value = objective(&[q1]);
            Ok(AggregateNumeric {
                value,
                q: vec![q1],
                constraint_residual: (demand.price_index(&[q1]) - p0).abs(),
                stationarity_gap: 0.0,
            })
        }
        2 => {
            if matches!(demand, Demand::Ces { rho } if rho == -1.0) {
                // q0 = min(q): the binding corner is q = (p0, p0).
                let q = vec![p0, p0];
                let value = objective(&q);
                return Ok(AggregateNumeric {
                    value,
                    q,
                    constraint_residual: 0.0,
                    stationarity_gap: 0.0,
                });
            }
            let upper = boundary_cap(industries, s, p0);
            let solve_q2 = |q1: f64| boundary_partner(&demand, p0, q1);
            let eval = |q1: f64| -> f64 {
                match solve_q2(q1) {
                    Some(q2) => objective(&[q1, q2]),
                    None => f64::INFINITY,
                }
            };
            let (q1, value) = grid_golden_min(&eval, 1e-9 * p0, upper, 2_000);
            let q2 = solve_q2(q1).unwrap_or(0.0);
            Ok(AggregateNumeric {
                value,
                q: vec![q1, q2],
                constraint_residual: (demand.price_index(&[q1, q2]) - p0).abs(),
                stationarity_gap: 0.0,
            })
        }
        _ => {
            // m = 3: coordinate descent on (q1, q2), q3 from the boundary.
            let upper = boundary_cap(industries, s, p0);
            let solve_q3 = |q1: f64, q2: f64| boundary_partner2(&demand, p0, q1, q2);
            let eval = |q1: f64, q2: f64| -> f64 {
                match solve_q3(q1, q2) {
                    Some(q3) => objective(&[q1, q2, q3]),
                    None => f64::INFINITY,
                }
            };
            let starts = [0.2, 0.5, 0.8];
            let mut best: Option<(f64, f64, f64)> = None;
            let mut best_gap = 0.0;
            for &fa in &starts {
                for &fb in &starts {
                    let (mut q1, mut q2) = (upper * fa, upper * fb);
                    let mut value = eval(q1, q2);
                    let mut gap = f64::INFINITY;
                    for _ in 0..40 {
                        let (n1, v1) =
                            grid_golden_min(&|x| eval(x, q2), 1e-9 * p0, upper, 400);
                        q1 = n1;
                        let (n2, v2) =
                            grid_golden_min(&|x| eval(q1, x), 1e-9 * p0, upper, 400);
                        q2 = n2;
                        gap = (value - v2).abs();
                        value = v2.min(v1);
                        if gap < 1e-10 * (1.0 + value.abs()) {
                            break;
                        }
                    }
                    let better = match best {
                        None => true,
                        Some((bv, _, _)) => value < bv - 1e-12,
                    };
                    if better {
                        best = Some((value, q1, q2));
                        best_gap = gap;
                    }
                }
            }
            let (value, q1, q2) = best.unwrap();
            let q3 = solve_q3(q1, q2).unwrap_or(0.0);
            Ok(AggregateNumeric {
                value,
                q: vec![q1, q2, q3],
                constraint_residual: (demand.price_index(&[q1, q2, q3]) - p0).abs(),
                stationarity_gap: best_gap,
            })
        }
    }
}

/// Upper bound for boundary searches: beyond the dearest technology cost
/// plus the price index scale, profits only grow.
fn boundary_cap(industries: &[Industry], s: &[f64], p0: f64) -> f64 {
    let max_cost = industries
        .iter()
        .flat_map(|i| i.measure.atoms())
        .map(|a| s.iter().zip(&a.x).map(|(&si, &xi)| si * xi).sum::<f64>())
        .fold(0.0f64, f64::max);
    10.0 * (p0 + max_cost) + 1.0
}

/// q2 with q0(q1, q2) = p0, if solvable.
fn boundary_partner(demand: &Demand, p0: f64, q1: f64) -> Option<f64> {
    if q1 <= 0.0 {
        return None;
    }
    match demand {
        Demand::Leontief => {
            let q2 = p0 - q1;
            (q2 > 0.0).then_some(q2)
        }
        Demand::Ces { rho } => {
            let a = rho / (1.0 + rho);
            let rest = p0.powf(a) - q1.powf(a);
            if *rho > 0.0 {
                (rest > 0.0).then(|| rest.powf(1.0 / a))
            } else {
                // a < 0: q^a decreasing, feasibility needs q1 > p0.
                (rest > 0.0).then(|| rest.powf(1.0 / a))
            }
        }
    }
}

fn boundary_partner2(demand: &Demand, p0: f64, q1: f64, q2: f64) -> Option<f64> {
    if q1 <= 0.0 || q2 <= 0.0 {
        return None;
    }
    match demand {
        Demand::Leontief => {
            let q3 = p0 - q1 - q2;
            (q3 > 0.0).then_some(q3)
        }
        Demand::Ces { rho } => {
            let a = rho / (1.0 + rho);
            let rest = p0.powf(a) - q1.powf(a) - q2.powf(a);
            (rest > 0.0).then(|| rest.powf(1.0 / a))
        }
    }
}

/// Dense grid scan followed by golden-section refinement around the best
/// grid point. Deterministic.
fn grid_golden_min(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, grid: usize) -> (f64, f64) {
    let mut best_x = lo;
    let mut best_v = f64::INFINITY;
    for i in 0..=grid {
        let x = lo + (hi - lo) * i as f64 / grid as f64;
        let v = f(x);
        if v < best_v {
            best_v = v;
            best_x = x;
        }
    }
    let step = (hi - lo) / grid as f64;
    let (mut a, mut b) = ((best_x - step).max(lo), (best_x + step).min(hi));
    let phi = 0.5 * (3.0 - 5f64.sqrt());
    for _ in 0..80 {
        let x1 = a + phi * (b - a);
        let x2 = b - phi * (b - a);
        if f(x1) <= f(x2) {
            b = x2;
        } else {
            a = x1;
        }
    }
    let x = 0.5 * (a + b);
    let v = f(x);
    if v <= best_v {
        (x, v)
    } else {
        (best_x, best_v)
    }
}

/// A multiset of technology points.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TechnologyMultiset {
    pub points: Vec<Vec<f64>>,
}

/// A cone of admissible resource prices, by its generators.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeK {
    pub generators: Vec<Vec<f64>>,
}

impl ConeK {
    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::Validation("cone needs at least one generator".into()));
        }
        for g in &self.generators {
            if g.iter().all(|&v| v == 0.0) {
                return Err(Error::Validation("cone generators must be nonzero".into()));
            }
        }
        Ok(())
    }

    /// d in K* iff d.g >= 0 for every generator g of K.
    fn in_dual(&self, d: &[f64], tol: f64) -> bool {
        self.generators
            .iter()
            .all(|g| g.iter().zip(d).map(|(a, b)| a * b).sum::<f64>() >= -tol)
    }
}

/// Verdict of the stable-correspondence criterion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KStableReport {
    pub stable: bool,
    /// Indices (i, j) into X of the violating pair, if any.
    pub violating_pair: Option<(usize, usize)>,
}

/// Check whether the bijection gamma: X -> Y (gamma[i] = index into Y) is a
/// K-stable correspondence:
/// (i) order preservation: x_j - x_i in K* implies gamma(x_j) - gamma(x_i)
///     in K*;
/// (ii) incomparable pairs must map to nonnegatively proportional image
///      differences.
pub fn k_stable_check(
    x_set: &TechnologyMultiset,
    y_set: &TechnologyMultiset,
    gamma: &[usize],
    cone: &ConeK,
) -> Result<KStableReport> {
    cone.validate()?;
    let m = x_set.points.len();
    if y_set.points.len() != m {
        return Err(Error::Validation("multisets must have equal cardinality".into()));
    }
    if gamma.len() != m {
        return Err(Error::Validation("gamma must be total".into()));
    }
    let mut seen = vec![false; m];
    for &g in gamma {
        if g >= m || seen[g] {
            return Err(Error::Validation("gamma must be a bijection".into()));
        }
        seen[g] = true;
    }
    let tol = 1e-9;
    let diff = |a: &[f64], b: &[f64]| -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    };
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let xi = &x_set.points[i];
            let xj = &x_set.points[j];
            if xi == xj {
                continue;
            }
            let d = diff(xj, xi);
            let e = diff(&y_set.points[gamma[j]], &y_set.points[gamma[i]]);
            let d_in = cone.in_dual(&d, tol);
            let neg_d: Vec<f64> = d.iter().map(|v| -v).collect();
            let d_rev_in = cone.in_dual(&neg_d, tol);
            if d_in {
                // criterion (i)
                if !cone.in_dual(&e, tol) {
                    return Ok(KStableReport {
                        stable: false,
                        violating_pair: Some((i, j)),
                    });
                }
            } else if !d_rev_in {
                // criterion (ii): e = 0 or e = c d with c > 0.
                if !nonneg_proportional(&d, &e, tol) {
                    return Ok(KStableReport {
                        stable: false,
                        violating_pair: Some((i, j)),
                    });
                }
            }
        }
    }
    Ok(KStableReport {
        stable: true,
        violating_pair: None,
    })
}

/// e = 0, or e = c d with c > 0 (relative collinearity tolerance).
fn nonneg_proportional(d: &[f64], e: &[f64], tol: f64) -> bool {
    let e_norm = e.iter().map(|v| v * v).sum::<f64>().sqrt();
    if e_norm <= tol {
        return true;
    }
    let d_norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    if d_norm <= tol {
        return false; // d nonzero is guaranteed by the caller, defensive
    }
    let dot: f64 = d.iter().zip(e).map(|(a, b)| a * b).sum();
    if dot <= 0.0 {
        return false;
    }
    let c = dot / (d_norm * d_norm);
    e.iter()
        .zip(d)
        .all(|(&ei, &di)| (ei - c * di).abs() <= tol * (1.0 + e_norm))
}

/// The allocation under verification: per industry, the load of each atom,
/// plus resource supply and final consumption.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Allocation {
    /// loads[j][a] in [0,1] for atom a of industry j.
    pub loads: Vec<Vec<f64>>,
    /// Primary resource supply l.
    pub supply: Vec<f64>,
    /// Final consumption bundle X0.
    pub consumption: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub profit_max_ok: bool,
    pub product_slackness_ok: bool,
    pub resource_slackness_ok: bool,
    pub demand_ok: bool,
    pub pass: bool,
    pub violations: Vec<String>,
}

/// Check the equilibrium conditions of a finite allocation at prices
/// (q, s, p0): profit maximality of each industry's loading, complementary
/// slackness on products and resources, and demand optimality through the
/// price index.
#[allow(clippy::too_many_arguments)]
pub fn verify_equilibrium(
    industries: &[Industry],
    demand: Demand,
    allocation: &Allocation,
    q: &[f64],
    s: &[f64],
    p0: f64,
    tol: f64,
) -> Result<EquilibriumReport> {
    demand.validate()?;
    if p0 <= 0.0 {
        return Err(Error::Validation("p0 > 0 required".into()));
    }
    if q.len() != industries.len() || allocation.loads.len() != industries.len() {
        return Err(Error::Validation("dimension mismatch".into()));
    }
    if q.iter().any(|&v| v < 0.0) || s.iter().any(|&v| v < 0.0) {
        return Err(Error::Validation("prices must be nonnegative".into()));
    }
    let mut violations = Vec::new();
    let mut profit_max_ok = true;
    let mut outputs = Vec::with_capacity(industries.len());
    let mut resource_use = vec![0.0; s.len()];
    for (j, industry) in industries.iter().enumerate() {
        let loads = &allocation.loads[j];
        if loads.len() != industry.measure.atoms().len() {
            return Err(Error::Validation(format!(
                "industry {j}: load vector does not match atom count"
            )));
        }
        let mut achieved = 0.0;
        let mut output = 0.0;
        for (a, atom) in industry.measure.atoms().iter().enumerate() {
            let u = loads[a];
            if !(0.0..=1.0).contains(&u) {
                return Err(Error::Validation(format!(
                    "industry {j} atom {a}: load {u} outside [0,1]"
                )));
            }
            let cost: f64 = s.iter().zip(&atom.x).map(|(&si, &xi)| si * xi).sum();
            let margin = q[j] - cost;
            achieved += atom.mass * u * margin;
            output += atom.mass * u;
            for (use_k, &xk) in resource_use.iter_mut().zip(&atom.x) {
                *use_k += atom.mass * u * xk;
            }
            // theta-consistency: strictly profitable atoms fully loaded,
            // strictly unprofitable ones idle; boundary atoms are free.
            if margin > tol && u < 1.0 - tol {
                profit_max_ok = false;
                violations.push(format!(
                    "industry {j} atom {a}: profitable but load {u} < 1"
                ));
            }
            if margin < -tol && u > tol {
                profit_max_ok = false;
                violations.push(format!(
                    "industry {j} atom {a}: unprofitable but load {u} > 0"
                ));
            }
        }
        let optimal = industry_profit(industry, q[j], s);
        if (achieved - optimal).abs() > tol * (1.0 + optimal.abs()) {
            profit_max_ok = false;
            violations.push(format!(
                "industry {j}: allocation profit {achieved} below optimum {optimal}"
            ));
        }
        outputs.push(output);
    }
    let mut product_slackness_ok = true;
    for (j, (&out, &x0)) in outputs.iter().zip(&allocation.consumption).enumerate() {
        if x0 > out + tol {
            product_slackness_ok = false;
            violations.push(format!("product {j}: consumption {x0} exceeds output {out}"));
        }
        if q[j] * (out - x0) > tol * (1.0 + out.abs()) {
            product_slackness_ok = false;
            violations.push(format!(
                "product {j}: priced slack q={} * ({out} - {x0}) not zero",
                q[j]
            ));
        }
    }
    let mut resource_slackness_ok = true;
    for (k, (&used, &avail)) in resource_use.iter().zip(&allocation.supply).enumerate() {
        if used > avail + tol * (1.0 + avail.abs()) {
            resource_slackness_ok = false;
            violations.push(format!("resource {k}: use {used} exceeds supply {avail}"));
        }
        if s[k] * (avail - used) > tol * (1.0 + avail.abs()) {
            resource_slackness_ok = false;
            violations.push(format!(
                "resource {k}: priced slack s={} * ({avail} - {used}) not zero",
                s[k]
            ));
        }
    }
    // Demand optimality: value equality and price-index feasibility.
    let f0 = demand.utility(&allocation.consumption);
    let qx: f64 = q.iter().zip(&allocation.consumption).map(|(a, b)| a * b).sum();
    let q0 = demand.price_index(q);
    let mut demand_ok = true;
    if (p0 * f0 - qx).abs() > tol * (1.0 + qx.abs()) {
        demand_ok = false;
        violations.push(format!("consumer surplus not exhausted: p0 F0 = {} vs q.X0 = {qx}", p0 * f0));
    }
    if q0 < p0 - tol * (1.0 + p0) {
        demand_ok = false;
        violations.push(format!("price index {q0} below p0 = {p0}"));
    }
    let pass = profit_max_ok && product_slackness_ok && resource_slackness_ok && demand_ok;
    Ok(EquilibriumReport {
        profit_max_ok,
        product_slackness_ok,
        resource_slackness_ok,
        demand_ok,
        pass,
        violations,
    })
}
