//! CES unit-cost evaluation and profitability loading of capacity
//! distributions at given prices.

use crate::error::{Error, Result};
use crate::model::measure::DiscreteMeasure;
use crate::tol::{BOUNDARY_REL_TOL, CES_LOG_SPACE_RHO};

/// Parameters of the CES unit-cost family
/// `h(w) = (w_1^{-rho} + ... + w_n^{-rho})^{-1/rho}`.
///
/// The elasticity of substitution `sigma = 1/(1+rho)` is always derived,
/// never stored. The endpoint `rho = -1` (where h is the linear form) is
/// allowed; `rho = 0` is rejected.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CesParams {
    rho: f64,
    n: usize,
}

impl CesParams {
    pub fn new(rho: f64, n: usize) -> Result<CesParams> {
        if !rho.is_finite() || rho == 0.0 || rho < -1.0 {
            return Err(Error::Validation(format!(
                "rho = {rho} outside [-1,0) u (0,+inf)"
            )));
        }
        if n == 0 {
            return Err(Error::Validation("dimension must be positive".into()));
        }
        Ok(CesParams { rho, n })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Elasticity of substitution 1/(1+rho); +inf at rho = -1.
    pub fn sigma(&self) -> f64 {
        if self.rho == -1.0 {
            f64::INFINITY
        } else {
            1.0 / (1.0 + self.rho)
        }
    }
}

fn check_positive(v: &[f64], what: &str, context: &str) -> Result<()> {
    for (i, &x) in v.iter().enumerate() {
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::NumericRange {
                context: context.to_string(),
                detail: format!("{what}[{i}] = {x} must be finite and positive"),
            });
        }
    }
    Ok(())
}

/// CES unit cost `(sum_i (p_i x_i)^{-rho})^{-1/rho}`.
///
/// Positively homogeneous of degree 1 jointly in `p o x`. For |rho| beyond
/// [`CES_LOG_SPACE_RHO`] the sum is evaluated in log space so that extreme
/// exponents do not overflow (the rho -> +inf limit is the Leontief cost
/// min_i p_i x_i).
pub fn ces_unit_cost(params: CesParams, p: &[f64], x: &[f64]) -> Result<f64> {
    if p.len() != params.n || x.len() != params.n {
        return Err(Error::Validation(format!(
            "dimension mismatch: params n={}, p has {}, x has {}",
            params.n,
            p.len(),
            x.len()
        )));
    }
    check_positive(p, "p", "ces_unit_cost")?;
    check_positive(x, "x", "ces_unit_cost")?;
    let rho = params.rho;
    if rho == -1.0 {
        // Linear form, exact.
        return Ok(p.iter().zip(x).map(|(&pi, &xi)| pi * xi).sum());
    }
    let value = if rho.abs() <= CES_LOG_SPACE_RHO {
        let sum: f64 = p
            .iter()
            .zip(x)
            .map(|(&pi, &xi)| (pi * xi).powf(-rho))
            .sum();
        sum.powf(-1.0 / rho)
    } else {
        // log-sum-exp: h = exp(-(1/rho) * log sum_i exp(-rho * log w_i))
        let logs: Vec<f64> = p.iter().zip(x).map(|(&pi, &xi)| (pi * xi).ln()).collect();
        let scaled: Vec<f64> = logs.iter().map(|&l| -rho * l).collect();
        let m = scaled.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = m + scaled.iter().map(|&s| (s - m).exp()).sum::<f64>().ln();
        (-lse / rho).exp()
    };
    if !value.is_finite() || value <= 0.0 {
        let worst = p
            .iter()
            .zip(x)
            .enumerate()
            .max_by(|a, b| {
                let wa = (a.1 .0 * a.1 .1).ln().abs();
                let wb = (b.1 .0 * b.1 .1).ln().abs();
                wa.partial_cmp(&wb).unwrap()
            })
            .map(|(i, _)| i)
            .unwrap_or(0);
        return Err(Error::NumericRange {
            context: "ces_unit_cost".into(),
            detail: format!(
                "non-finite result {value} for rho={rho}; extreme component index {worst}"
            ),
        });
    }
    Ok(value)
}

/// Result of loading a discrete capacity distribution at prices (p, p0).
#[derive(Clone, Debug)]
pub struct GnpLoad {
    /// 1 for loaded atoms, 0 for idle ones, per atom index.
    pub load: Vec<u8>,
    pub total_output: f64,
    pub resource_use: Vec<f64>,
    /// Atom indices with |p0 - cost| / p0 within boundary tolerance;
    /// these are loaded by the theta(0) = 1 convention.
    pub boundary_atoms: Vec<usize>,
}

/// Load each Leontief technology iff it is weakly profitable: p0 >= p.x.
///
/// Boundary atoms (cost equal to p0 within [`BOUNDARY_REL_TOL`] relative)
/// are loaded and reported.
pub fn gnp_load(measure: &DiscreteMeasure, p: &[f64], p0: f64) -> Result<GnpLoad> {
    if p0 <= 0.0 || !p0.is_finite() {
        return Err(Error::Validation(format!("p0 = {p0} must be positive")));
    }
    check_positive(p, "p", "gnp_load")?;
    let mut load = Vec::with_capacity(measure.atoms().len());
    let mut total_output = 0.0;
    let mut resource_use = vec![0.0; p.len()];
    let mut boundary_atoms = Vec::new();
    for (idx, atom) in measure.atoms().iter().enumerate() {
        if atom.x.len() != p.len() {
            return Err(Error::Validation(format!(
                "atom {idx} has dimension {}, prices have {}",
                atom.x.len(),
                p.len()
            )));
        }
        let cost: f64 = p.iter().zip(&atom.x).map(|(&pi, &xi)| pi * xi).sum();
        if ((p0 - cost) / p0).abs() <= BOUNDARY_REL_TOL {
            boundary_atoms.push(idx);
        }
        if p0 >= cost || ((p0 - cost) / p0).abs() <= BOUNDARY_REL_TOL {
            load.push(1);
            total_output += atom.mass;
            for (ri, &xi) in resource_use.iter_mut().zip(&atom.x) {
                *ri += atom.mass * xi;
            }
        } else {
            load.push(0);
        }
    }
    Ok(GnpLoad {
        load,
        total_output,
        resource_use,
        boundary_atoms,
    })
}

/// Unit-cost evaluators for the generalized loading rule. Each variant knows
/// its cost-minimizing input bundle per unit of output (Shephard demand).
#[derive(Clone, Copy, Debug)]
pub enum UnitCost {
    /// Leontief micro technology: h(p o x) = p.x, demand u = x.
    Linear,
    /// CES unit-cost family with parameter rho (smooth Shephard demand).
    Ces(CesParams),
    /// Perfect substitutes at the micro level: h(p o x) = min_i p_i x_i.
    /// The minimizer is a corner and can tie.
    MinCost,
}

impl UnitCost {
    pub fn cost(&self, p: &[f64], x: &[f64]) -> Result<f64> {
        match self {
            UnitCost::Linear => Ok(p.iter().zip(x).map(|(&pi, &xi)| pi * xi).sum()),
            UnitCost::Ces(params) => ces_unit_cost(*params, p, x),
            UnitCost::MinCost => Ok(p
                .iter()
                .zip(x)
                .map(|(&pi, &xi)| pi * xi)
                .fold(f64::INFINITY, f64::min)),
        }
    }

    /// Cost-minimizing input bundle producing one unit of output on
    /// technology x at prices p. Returns (bundle, tie) where tie marks a
    /// non-unique minimizer resolved lexicographically.
    pub fn unit_demand(&self, p: &[f64], x: &[f64]) -> Result<(Vec<f64>, bool)> {
        match self {
            UnitCost::Linear => Ok((x.to_vec(), false)),
            UnitCost::Ces(params) => {
                let h = ces_unit_cost(*params, p, x)?;
                let rho = params.rho();
                if rho == -1.0 {
                    // h linear in w: micro technology is Leontief, u = x.
                    return Ok((x.to_vec(), false));
                }
                // Shephard: u_i = x_i * dh/dw_i (w = p o x)
                //         = x_i * h^{1+rho} * (p_i x_i)^{-rho-1}.
                let mut u = Vec::with_capacity(x.len());
                for (&pi, &xi) in p.iter().zip(x) {
                    let w = pi * xi;
                    let ui = xi * h.powf(1.0 + rho) * w.powf(-rho - 1.0);
                    if !ui.is_finite() {
                        return Err(Error::NumericRange {
                            context: "unit_demand".into(),
                            detail: format!("non-finite demand for w={w}, rho={rho}"),
                        });
                    }
                    u.push(ui);
                }
                Ok((u, false))
            }
            UnitCost::MinCost => {
                // Corner minimizer: put everything on the cheapest effective
                // input. One unit of output needs u_i = x_i on the chosen i.
                let costs: Vec<f64> = p.iter().zip(x).map(|(&pi, &xi)| pi * xi).collect();
                let min = costs.iter().cloned().fold(f64::INFINITY, f64::min);
                let winners: Vec<usize> = costs
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| (c - min).abs() <= BOUNDARY_REL_TOL * min.max(1.0))
                    .map(|(i, _)| i)
                    .collect();
                let tie = winners.len() > 1;
                // Lexicographically smallest bundle: the winner with the
                // LARGEST index yields zeros in the earliest coordinates.
                let chosen = *winners.last().unwrap();
                let mut u = vec![0.0; x.len()];
                u[chosen] = x[chosen];
                Ok((u, tie))
            }
        }
    }
}

/// Result of the generalized loading rule.
#[derive(Clone, Debug)]
pub struct GnpLoadGeneralized {
    pub load: Vec<u8>,
    pub total_output: f64,
    /// Resource demand: sum of mass * unit_demand over loaded atoms.
    pub resource_use: Vec<f64>,
    pub boundary_atoms: Vec<usize>,
    /// Atoms whose cost minimizer was non-unique.
    pub tie_atoms: Vec<usize>,
}

/// Load technologies by the generalized rule: atom x is used iff
/// p0 >= h(p o x), and a used atom demands its cost-minimizing bundle.
pub fn gnp_load_generalized(
    measure: &DiscreteMeasure,
    h: UnitCost,
    p: &[f64],
    p0: f64,
) -> Result<GnpLoadGeneralized> {
    if p0 <= 0.0 || !p0.is_finite() {
        return Err(Error::Validation(format!("p0 = {p0} must be positive")));
    }
    check_positive(p, "p", "gnp_load_generalized")?;
    let mut load = Vec::with_capacity(measure.atoms().len());
    let mut total_output = 0.0;
    let mut resource_use = vec![0.0; p.len()];
    let mut boundary_atoms = Vec::new();
    let mut tie_atoms = Vec::new();
    for (idx, atom) in measure.atoms().iter().enumerate() {
        let cost = h.cost(p, &atom.x)?;
        let boundary = ((p0 - cost) / p0).abs() <= BOUNDARY_REL_TOL;
        if boundary {
            boundary_atoms.push(idx);
        }
        if p0 >= cost || boundary {
            load.push(1);
            total_output += atom.mass;
            let (u, tie) = h.unit_demand(p, &atom.x)?;
            if tie {
                tie_atoms.push(idx);
            }
            for (ri, &ui) in resource_use.iter_mut().zip(&u) {
                *ri += atom.mass * ui;
            }
        } else {
            load.push(0);
        }
    }
    Ok(GnpLoadGeneralized {
        load,
        total_output,
        resource_use,
        boundary_atoms,
        tie_atoms,
    })
}
