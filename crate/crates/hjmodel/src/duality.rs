//! Closed-form production/profit pairs (Cobb-Douglas, CES), their capacity
//! densities, the quadrature route through the profit integral, 2D Laplace
//! transforms, and the diagnostic checks tying them together.

use crate::error::{Error, Result};
use crate::model::DiscreteMeasure;
use crate::quad::{integrate, integrate2d};
use crate::special::{beta, ln_gamma};

/// Cobb-Douglas production function parameters:
/// F(l1,l2) = C l1^(a1/(a1+a2+1)) l2^(a2/(a1+a2+1)), C > 0, a_i >= 1.
#[derive(Clone, Copy, Debug)]
pub struct CobbDouglasParams {
    pub c: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl CobbDouglasParams {
    pub fn new(c: f64, alpha1: f64, alpha2: f64) -> Result<CobbDouglasParams> {
        if !(c > 0.0 && alpha1 >= 1.0 && alpha2 >= 1.0) {
            return Err(Error::Validation(format!(
                "Cobb-Douglas needs C > 0 and alpha_i >= 1, got ({c}, {alpha1}, {alpha2})"
            )));
        }
        Ok(CobbDouglasParams { c, alpha1, alpha2 })
    }

    /// The density scale A of the classical capacity distribution
    /// mu(dx) = A x1^(a1-1) x2^(a2-1) dx.
    pub fn coefficient_a(&self) -> f64 {
        let (a1, a2) = (self.alpha1, self.alpha2);
        let s = a1 + a2;
        self.c.powf(s + 1.0) * s * a1.powf(a1) * a2.powf(a2) / (s + 1.0).powf(s)
            / beta(a1, a2)
    }

    pub fn production(&self, l1: f64, l2: f64) -> f64 {
        let s = self.alpha1 + self.alpha2 + 1.0;
        self.c * l1.powf(self.alpha1 / s) * l2.powf(self.alpha2 / s)
    }

    /// Classical capacity density A x1^(a1-1) x2^(a2-1).
    pub fn classical_density(&self, x1: f64, x2: f64) -> f64 {
        self.coefficient_a() * x1.powf(self.alpha1 - 1.0) * x2.powf(self.alpha2 - 1.0)
    }
}

/// Closed-form Cobb-Douglas profit function.
pub fn profit_cobb_douglas(params: &CobbDouglasParams, p1: f64, p2: f64, p0: f64) -> f64 {
    let (a1, a2) = (params.alpha1, params.alpha2);
    let s = a1 + a2;
    params.coefficient_a() * beta(a1, a2) / (s * (s + 1.0))
        * p0.powf(s + 1.0)
        * p1.powf(-a1)
        * p2.powf(-a2)
}

/// Capacity density of the Cobb-Douglas profit under micro-level
/// substitution r in [-1, 0):
/// phi(x) = (-r) A B(a1,a2)/B(-a1/r, -a2/r) x1^(a1-1) x2^(a2-1).
pub fn capacity_density_cd(
    params: &CobbDouglasParams,
    r: f64,
    x1: f64,
    x2: f64,
) -> Result<f64> {
    check_r(r)?;
    let (a1, a2) = (params.alpha1, params.alpha2);
    let scale = (-r) * params.coefficient_a() * beta(a1, a2) / beta(-a1 / r, -a2 / r);
    Ok(scale * x1.powf(a1 - 1.0) * x2.powf(a2 - 1.0))
}

/// The Laplace-side density of the Cobb-Douglas chain:
/// d2Pi/dp0^2 (p^(-1/r), 1) is the 2D Laplace transform of this function.
pub fn laplace_density_cd(params: &CobbDouglasParams, r: f64, x1: f64, x2: f64) -> Result<f64> {
    check_r(r)?;
    let (a1, a2) = (params.alpha1, params.alpha2);
    let log_coef = (params.coefficient_a() * beta(a1, a2)).ln()
        - ln_gamma(-a1 / r)
        - ln_gamma(-a2 / r);
    Ok((log_coef + (-a1 / r - 1.0) * x1.ln() + (-a2 / r - 1.0) * x2.ln()).exp())
}

fn check_r(r: f64) -> Result<()> {
    if !(-1.0..0.0).contains(&r) {
        return Err(Error::Validation(format!(
            "substitution parameter r = {r} outside [-1, 0)"
        )));
    }
    Ok(())
}

/// CES production function parameters:
/// F(l1,l2) = (a1 l1^-rho + a2 l2^-rho)^(-gamma/rho), 0 < gamma < 1.
#[derive(Clone, Copy, Debug)]
pub struct CesProductionParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub rho: f64,
    pub gamma: f64,
}

impl CesProductionParams {
    pub fn new(alpha1: f64, alpha2: f64, rho: f64, gamma: f64) -> Result<CesProductionParams> {
        if !(alpha1 > 0.0 && alpha2 > 0.0) {
            return Err(Error::Validation("CES needs positive alpha".into()));
        }
        if !(0.0 < gamma && gamma < 1.0) {
            return Err(Error::Validation(format!("gamma = {gamma} outside (0,1)")));
        }
        if !rho.is_finite() || rho == 0.0 || rho < -1.0 {
            return Err(Error::Validation(format!(
                "rho = {rho} outside [-1,0) u (0,+inf)"
            )));
        }
        Ok(CesProductionParams {
            alpha1,
            alpha2,
            rho,
            gamma,
        })
    }

    pub fn production(&self, l1: f64, l2: f64) -> f64 {
        (self.alpha1 * l1.powf(-self.rho) + self.alpha2 * l2.powf(-self.rho))
            .powf(-self.gamma / self.rho)
    }

    /// Derived constants (beta1, beta2, r, b) of the half-power rewrite of
    /// the profit function.
    pub fn consts(&self) -> (f64, f64, f64, f64) {
        let rho = self.rho;
        let beta1 = self.alpha1.powf(1.0 / (1.0 + rho));
        let beta2 = self.alpha2.powf(1.0 / (1.0 + rho));
        let r = -2.0 * rho / (1.0 + rho);
        let b = self.gamma / (1.0 - self.gamma) * (1.0 + rho) / rho;
        (beta1, beta2, r, b)
    }
}

/// Closed-form CES profit function. The rho = -1 endpoint (perfect
/// substitutes) is served by its limit form with the min() aggregate.
pub fn profit_ces(params: &CesProductionParams, p1: f64, p2: f64, p0: f64) -> f64 {
    let g = params.gamma;
    let lead = g.powf(g / (1.0 - g)) * (1.0 - g) * p0.powf(1.0 / (1.0 - g));
    if params.rho == -1.0 {
        let c = (p1 / params.alpha1).min(p2 / params.alpha2);
        return lead * c.powf(-g / (1.0 - g));
    }
    let rho = params.rho;
    let e = rho / (1.0 + rho);
    let bracket = params.alpha1.powf(1.0 / (1.0 + rho)) * p1.powf(e)
        + params.alpha2.powf(1.0 / (1.0 + rho)) * p2.powf(e);
    lead * bracket.powf(-g * (1.0 + rho) / (rho * (1.0 - g)))
}

/// Capacity density of the CES profit under micro-level substitution:
/// defined for rho in (0, 1], where the derived r lands in [-1, 0).
///
/// The leading (-r) factor comes from the general density construction;
/// dropping it leaves a profit off by 1/(-r), which the quadrature check
/// in the tests would catch.
pub fn capacity_density_ces(params: &CesProductionParams, x1: f64, x2: f64) -> Result<f64> {
    let (beta1, beta2, r, b) = params.consts();
    check_r(r)?;
    let g = params.gamma;
    let lead = (-r) * g.powf(1.0 / (1.0 - g)) / (1.0 - g);
    let log_gammas = ln_gamma(b / 2.0 + 1.0) + ln_gamma(b / 2.0) - ln_gamma(b);
    let coef = lead * 2f64.powf(b - 1.0) / std::f64::consts::PI * beta1 * beta2 * log_gammas.exp();
    Ok(coef
        * (x1 * x2).powf(r / 2.0 - 1.0)
        * (beta1 * beta1 * x1.powf(r) + beta2 * beta2 * x2.powf(r)).powf(-b / 2.0 - 1.0))
}

/// Laplace-side density of the CES chain.
pub fn laplace_density_ces(params: &CesProductionParams, x1: f64, x2: f64) -> Result<f64> {
    let (beta1, beta2, r, b) = params.consts();
    check_r(r)?;
    let g = params.gamma;
    let lead = g.powf(1.0 / (1.0 - g)) / (1.0 - g);
    let log_gammas = ln_gamma(b / 2.0 + 1.0) - ln_gamma(b);
    let coef = lead * 2f64.powf(b - 1.0) / std::f64::consts::PI * beta1 * beta2 * log_gammas.exp();
    Ok(coef
        * (x1 * x2).powf(-1.5)
        * (beta1 * beta1 / x1 + beta2 * beta2 / x2).powf(-b / 2.0 - 1.0))
}

/// Unit cost with bounded level sets: h(p o x) = (sum (p_i x_i)^-r)^(-1/r),
/// r in [-1, 0); r = -1 is the classical inner product.
pub fn bounded_unit_cost(r: f64, p: &[f64; 2], x: &[f64; 2]) -> f64 {
    ((p[0] * x[0]).powf(-r) + (p[1] * x[1]).powf(-r)).powf(-1.0 / r)
}

/// Profit integral of a capacity density over the profitable region
/// {h(p o x) <= p0}, by the level-set parametrization mapping the region to
/// the rectangle (c, t) in [0,p0] x [0,1].
pub fn numeric_profit_density(
    f: &mut dyn FnMut(f64, f64) -> f64,
    r: f64,
    p: &[f64; 2],
    p0: f64,
    rel_tol: f64,
) -> Result<f64> {
    check_r(r)?;
    if p[0] <= 0.0 || p[1] <= 0.0 || p0 <= 0.0 {
        return Err(Error::Validation("prices must be positive".into()));
    }
    let q = -r; // in (0, 1]
    let (p1, p2) = (p[0], p[1]);
    let mut integrand = |c: f64, t: f64| {
        if c <= 0.0 || t <= 0.0 || t >= 1.0 {
            return 0.0;
        }
        let w1 = t.powf(1.0 / q);
        let w2 = (1.0 - t).powf(1.0 / q);
        let x1 = c * w1 / p1;
        let x2 = c * w2 / p2;
        if x1 <= 0.0 || x2 <= 0.0 {
            return 0.0;
        }
        let jac = c * (t * (1.0 - t)).powf(1.0 / q - 1.0) / (q * p1 * p2);
        let v = (p0 - c) * f(x1, x2) * jac;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let result = integrate2d(&mut integrand, 0.0, p0, &mut |_| (0.0, 1.0), rel_tol);
    Ok(result.value)
}

/// Profit of a discrete capacity measure: sum of mass * (p0 - h)_+.
pub fn numeric_profit_measure(
    measure: &DiscreteMeasure,
    r: f64,
    p: &[f64; 2],
    p0: f64,
) -> Result<f64> {
    check_r(r)?;
    let mut total = 0.0;
    for atom in measure.atoms() {
        if atom.x.len() != 2 {
            return Err(Error::Validation("profit integral expects 2D atoms".into()));
        }
        let h = bounded_unit_cost(r, p, &[atom.x[0], atom.x[1]]);
        total += atom.mass * (p0 - h).max(0.0);
    }
    Ok(total)
}

/// 2D Laplace transform of a density, with exponential tail truncation.
pub fn laplace2d(f: &mut dyn FnMut(f64, f64) -> f64, p: &[f64; 2], rel_tol: f64) -> Result<f64> {
    if p[0] <= 0.0 || p[1] <= 0.0 {
        return Err(Error::Validation(
            "laplace2d needs strictly positive arguments".into(),
        ));
    }
    let reach = crate::tol::TAIL_EXPONENT.max(-rel_tol.ln() + 10.0);
    let (x1_max, x2_max) = (reach / p[0], reach / p[1]);
    let mut integrand = |x1: f64, x2: f64| {
        if x1 <= 0.0 || x2 <= 0.0 {
            return 0.0;
        }
        let v = (-p[0] * x1 - p[1] * x2).exp() * f(x1, x2);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let result = integrate2d(&mut integrand, 0.0, x1_max, &mut |_| (0.0, x2_max), rel_tol);
    Ok(result.value)
}

/// Left side, right side and relative gap of the half-power Laplace
/// identity: (b1 sqrt(p1) + b2 sqrt(p2))^-b against the quadrature of its
/// closed-form preimage density.
pub fn lapsqrt2_identity(
    beta1: f64,
    beta2: f64,
    b: f64,
    p1: f64,
    p2: f64,
    rel_tol: f64,
) -> Result<(f64, f64, f64)> {
    if !(beta1 > 0.0 && beta2 > 0.0 && b > 0.0 && p1 > 0.0 && p2 > 0.0) {
        return Err(Error::Validation(
            "lapsqrt2_identity needs positive parameters".into(),
        ));
    }
    let lhs = (beta1 * p1.sqrt() + beta2 * p2.sqrt()).powf(-b);
    let log_coef = (b - 1.0) * 2f64.ln() - std::f64::consts::PI.ln()
        + (beta1 * beta2).ln()
        + ln_gamma(b / 2.0 + 1.0)
        - ln_gamma(b);
    let mut h = |x1: f64, x2: f64| {
        (log_coef
            - 1.5 * (x1 * x2).ln()
            + (-b / 2.0 - 1.0) * (beta1 * beta1 / x1 + beta2 * beta2 / x2).ln())
        .exp()
    };
    let rhs = laplace2d(&mut h, &[p1, p2], rel_tol)?;
    let gap = ((lhs - rhs) / lhs).abs();
    Ok((lhs, rhs, gap))
}

/// The Laplace transform of the capacity measure recovered from a profit
/// evaluator: a Stieltjes integral realized by parts as
/// -m(delta) + int e^-tau m(tau) dtau with m = dPi/dtau by central
/// differences. The small step keeps the smear of jump points (atoms of the
/// tau-measure) below the tolerance.
pub fn g_from_pi(
    pi: &mut dyn FnMut(&[f64], f64) -> f64,
    s: &[f64],
    rel_tol: f64,
) -> Result<f64> {
    if s.iter().any(|&v| v <= 0.0) {
        return Err(Error::Validation("g_from_pi needs positive s".into()));
    }
    let fd_step = 1e-7;
    let mut m = |tau: f64| -> f64 {
        let h = fd_step * tau.max(1.0);
        (pi(s, tau + h) - pi(s, (tau - h).max(1e-12))) / (2.0 * h)
    };
    let delta = 1e-6f64;
    let tau_max = 60.0;
    // Integration by parts: int e^-tau dm = -e^-delta m(delta) + int e^-tau m.
    let boundary = (-delta).exp() * m(delta);
    let tail = integrate(&mut |tau| (-tau).exp() * m(tau), delta, tau_max, rel_tol);
    Ok(tail.value - boundary)
}

/// Report of the representability conditions for a profit/density pair.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct PropcharReport {
    /// Pi(p, +0) and dPi/dp0(p, +0) vanish.
    pub limits_ok: bool,
    /// Degree-1 homogeneity in (p, p0) at random scalings.
    pub homogeneity_ok: bool,
    /// Worst relative error of d2Pi/dp0^2(p^(-1/r), 1) against the Laplace
    /// transform of f over the price grid.
    pub laplace_gap: f64,
    pub laplace_ok: bool,
    /// Relative error of the profit rebuilt from the constructed density.
    pub phi_profit_gap: f64,
    pub phi_profit_ok: bool,
    pub pass: bool,
}

/// Verify the three representability conditions of a profit function with
/// respect to a Laplace density f, and rebuild the capacity density phi
/// from f to reproduce the profit by quadrature.
pub fn check_propchar(
    pi: &mut dyn FnMut(&[f64], f64) -> f64,
    f: &mut dyn FnMut(f64, f64) -> f64,
    r: f64,
    price_grid: &[(f64, f64)],
    tol: f64,
) -> Result<PropcharReport> {
    check_r(r)?;
    // (a) limits at p0 -> +0.
    let mut limits_ok = true;
    for &(p1, p2) in price_grid {
        let scale = pi(&[p1, p2], 1.0).abs().max(1.0);
        let delta = 1e-4;
        let v = pi(&[p1, p2], delta).abs();
        let d = ((pi(&[p1, p2], 1.5 * delta) - pi(&[p1, p2], 0.5 * delta)) / delta).abs();
        if v > tol * scale || d > tol * scale {
            limits_ok = false;
        }
    }
    // (b) homogeneity of degree one.
    let mut homogeneity_ok = true;
    for &(p1, p2) in price_grid {
        for lambda in [0.5, 2.0, 3.7] {
            let direct = pi(&[lambda * p1, lambda * p2], lambda);
            let scaled = lambda * pi(&[p1, p2], 1.0);
            if (direct - scaled).abs() > tol * scaled.abs().max(1e-12) {
                homogeneity_ok = false;
            }
        }
    }
    // (c) d2Pi/dp0^2 at (p^(-1/r), 1) equals the Laplace transform of f.
    let mut laplace_gap: f64 = 0.0;
    let fd_h = f64::EPSILON.powf(1.0 / 3.0); // cube-root-of-epsilon rule
    for &(p1, p2) in price_grid {
        let q = [p1.powf(-1.0 / r), p2.powf(-1.0 / r)];
        let d2 = (pi(&q, 1.0 + fd_h) - 2.0 * pi(&q, 1.0) + pi(&q, 1.0 - fd_h)) / (fd_h * fd_h);
        let lap = laplace2d(f, &[p1, p2], (tol * 1e-2).max(1e-9))?;
        let gap = ((d2 - lap) / lap.abs().max(1e-300)).abs();
        laplace_gap = laplace_gap.max(gap);
    }
    let laplace_ok = laplace_gap <= tol;
    // Rebuild phi from f and push it through the profit integral.
    let mut phi = |x1: f64, x2: f64| -> f64 {
        let mut integrand = |t: f64| {
            if t <= 0.0 {
                return 0.0;
            }
            let v = t * (-t).exp() * f(t * x1.powf(-r), t * x2.powf(-r));
            if v.is_finite() {
                v
            } else {
                0.0
            }
        };
        let inner = integrate(&mut integrand, 0.0, 80.0, (tol * 0.1).max(1e-8));
        (-r) * (x1 * x2).powf(-r - 1.0) * inner.value
    };
    let (p1, p2, p0) = (1.0, 1.0, 1.0);
    let direct = pi(&[p1, p2], p0);
    let rebuilt = numeric_profit_density(&mut phi, r, &[p1, p2], p0, (tol * 0.1).max(1e-6))?;
    let phi_profit_gap = ((rebuilt - direct) / direct.abs().max(1e-300)).abs();
    let phi_profit_ok = phi_profit_gap <= tol;
    Ok(PropcharReport {
        limits_ok,
        homogeneity_ok,
        laplace_gap,
        laplace_ok,
        phi_profit_gap,
        phi_profit_ok,
        pass: limits_ok && homogeneity_ok && laplace_ok && phi_profit_ok,
    })
}

/// Worst case found by the completely-monotone sampling diagnostic.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct CmReport {
    /// Most negative normalized margin of (-1)^k D^k G over the samples.
    pub worst_margin: f64,
    pub worst_order: usize,
    pub worst_lambda: f64,
    /// Sample count actually evaluated.
    pub samples: usize,
}

/// Mixed directional finite differences of alternating sign: a sampling
/// diagnostic for complete monotonicity. It can refute (a clearly negative
/// margin) but never certify.
pub fn completely_monotone_check(
    g: &mut dyn FnMut(&[f64]) -> f64,
    s0: &[f64],
    cone_dirs: &[Vec<f64>],
    k_max: usize,
) -> Result<CmReport> {
    if k_max == 0 || k_max > 4 {
        return Err(Error::Validation(
            "k_max must be between 1 and 4 (finite-difference noise beyond)".into(),
        ));
    }
    if cone_dirs.is_empty() {
        return Err(Error::Validation("need at least one direction".into()));
    }
    let n = s0.len();
    for d in cone_dirs {
        if d.len() != n {
            return Err(Error::Validation("direction dimension mismatch".into()));
        }
    }
    let step = 0.05;
    let lambdas = [0.5, 1.0, 2.0];
    let mut report = CmReport {
        worst_margin: f64::INFINITY,
        worst_order: 0,
        worst_lambda: 0.0,
        samples: 0,
    };
    // Signed difference (-1)^k D_{d1} ... D_{dk} G at base, by recursion on
    // the direction list.
    fn diff(
        g: &mut dyn FnMut(&[f64]) -> f64,
        base: &[f64],
        dirs: &[&[f64]],
        step: f64,
    ) -> f64 {
        match dirs.split_first() {
            None => g(base),
            Some((d, rest)) => {
                let shifted: Vec<f64> = base.iter().zip(*d).map(|(b, v)| b + step * v).collect();
                diff(g, &shifted, rest, step) - diff(g, base, rest, step)
            }
        }
    }
    for k in 1..=k_max {
        let mut tuple = vec![0usize; k];
        loop {
            for &lambda in &lambdas {
                let base: Vec<f64> = s0.iter().map(|v| v * lambda).collect();
                let dirs: Vec<&[f64]> = tuple.iter().map(|&i| cone_dirs[i].as_slice()).collect();
                let raw = diff(g, &base, &dirs, step);
                let signed = if k % 2 == 0 { raw } else { -raw };
                let scale = g(&base).abs().max(1.0);
                let margin = signed / scale;
                report.samples += 1;
                if margin < report.worst_margin {
                    report.worst_margin = margin;
                    report.worst_order = k;
                    report.worst_lambda = lambda;
                }
            }
            // next tuple with repetition
            let mut i = 0;
            loop {
                if i == k {
                    break;
                }
                tuple[i] += 1;
                if tuple[i] < cone_dirs.len() {
                    break;
                }
                tuple[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }
    Ok(report)
}
