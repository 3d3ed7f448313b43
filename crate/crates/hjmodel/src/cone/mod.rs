//! The moment cone spanned by cell spectra: LP membership with witness or
//! Farkas certificate, facet enumeration, discrete convexity, and the
//! combinatorial necessary condition.

mod facets;

pub use facets::{facet_normals, FacetNormal, FacetReport};

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lp::{solve_standard, LpOutcome, LpScalar, StandardLp};
use crate::spectrum::Spectrum;
use crate::tol::{LP_EXACT_TRIGGER, LP_FLOAT_TOL};

/// A finitely generated cone in R^T whose generators are 0/1 spectra.
#[derive(Clone, Debug)]
pub struct PolyhedralCone {
    generators: Vec<Spectrum>,
    ambient_dim: usize,
}

impl PolyhedralCone {
    pub fn generators(&self) -> &[Spectrum] {
        &self.generators
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Build the cone from a spectra set: the zero vector is dropped (it spans
/// nothing) and generators are kept in lexicographic order.
pub fn cone_from_spectra(spectra: &BTreeSet<Spectrum>) -> PolyhedralCone {
    let ambient_dim = spectra.iter().next().map_or(0, Spectrum::len);
    let generators: Vec<Spectrum> = spectra.iter().filter(|s| !s.is_zero()).cloned().collect();
    PolyhedralCone {
        generators,
        ambient_dim,
    }
}

/// Nonnegative combination writing y in terms of the generators.
#[derive(Clone, Debug)]
pub struct MembershipWitness {
    /// One coefficient per generator, in generator order.
    pub coefficients: Vec<f64>,
    /// max-norm of (sum lambda_G Z(G)) - y.
    pub residual: f64,
    /// True when the verdict came from the exact rational solve.
    pub exact: bool,
}

/// Separating functional: nu.Z(G) >= 0 for every generator, nu.y < 0.
#[derive(Clone, Debug)]
pub struct FarkasCertificate {
    pub nu: Vec<f64>,
    /// nu.y (negative).
    pub margin: f64,
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub enum Membership {
    Inside(MembershipWitness),
    Outside(FarkasCertificate),
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside(_))
    }
}

/// Decide y in cone, with a witness or a Farkas certificate.
///
/// Floating-point phase-1 simplex first; when the phase-1 optimum lands
/// within [`LP_EXACT_TRIGGER`] of zero, or the returned witness/certificate
/// fails its own sanity margin, the solve is repeated in exact rational
/// arithmetic (spectra are 0/1, so exact arithmetic is cheap).
pub fn cone_contains(cone: &PolyhedralCone, y: &[f64]) -> Result<Membership> {
    let t = cone.ambient_dim;
    if y.len() != t {
        return Err(Error::Validation(format!(
            "y has dimension {}, cone lives in R^{t}",
            y.len()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Validation("y must be finite".into()));
    }
    let scale = 1.0 + y.iter().map(|v| f64::abs(*v)).fold(0.0, f64::max);
    if cone.generators.is_empty() {
        // The zero cone.
        let norm = y.iter().map(|v| f64::abs(*v)).fold(0.0, f64::max);
        return Ok(if norm <= LP_FLOAT_TOL * scale {
            Membership::Inside(MembershipWitness {
                coefficients: Vec::new(),
                residual: norm,
                exact: false,
            })
        } else {
            Membership::Outside(FarkasCertificate {
                nu: y.iter().map(|v| -v).collect(),
                margin: -y.iter().map(|v| v * v).sum::<f64>(),
                exact: false,
            })
        });
    }

    match float_membership(cone, y, scale) {
        Some(m) => Ok(m),
        None => exact_membership(cone, y),
    }
}

/// Reference path: decide membership entirely in exact rational arithmetic
/// (y is converted from f64 exactly). Slower than [`cone_contains`] but
/// free of float tolerances; used to audit borderline verdicts.
pub fn cone_contains_exact(cone: &PolyhedralCone, y: &[f64]) -> Result<Membership> {
    if y.len() != cone.ambient_dim {
        return Err(Error::Validation(format!(
            "y has dimension {}, cone lives in R^{}",
            y.len(),
            cone.ambient_dim
        )));
    }
    if cone.generators.is_empty() {
        let zero = y.iter().all(|&v| v == 0.0);
        return Ok(if zero {
            Membership::Inside(MembershipWitness {
                coefficients: Vec::new(),
                residual: 0.0,
                exact: true,
            })
        } else {
            Membership::Outside(FarkasCertificate {
                nu: y.iter().map(|v| -v).collect(),
                margin: -y.iter().map(|v| v * v).sum::<f64>(),
                exact: true,
            })
        });
    }
    exact_membership(cone, y)
}

/// Float solve; None means borderline, caller escalates to exact.
fn float_membership(cone: &PolyhedralCone, y: &[f64], scale: f64) -> Option<Membership> {
    let t = cone.ambient_dim;
    let g = cone.generators.len();
    // Rows flipped where y is negative so the standard form has b >= 0.
    let signs: Vec<f64> = y.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
    let mut a = vec![vec![0.0f64; g]; t];
    for (j, gen) in cone.generators.iter().enumerate() {
        for i in 0..t {
            a[i][j] = signs[i] * if gen.get(i) { 1.0 } else { 0.0 };
        }
    }
    let b: Vec<f64> = y.iter().zip(&signs).map(|(&v, &s)| s * v).collect();
    let lp = StandardLp {
        a,
        b,
        c: vec![0.0; g],
    };
    match solve_standard(&lp).ok()? {
        LpOutcome::Optimal { mut x, .. } => {
            // A clean witness is nonnegative and reconstructs y to machine
            // precision; anything worse is borderline and the exact solve
            // decides. Phase-1 roundoff can leave coefficients at -1e-16.
            if x.iter().any(|&v| v < -1e-12 * scale) {
                return None;
            }
            for v in x.iter_mut() {
                *v = v.max(0.0);
            }
            let residual = witness_residual(cone, &x, y);
            if residual > 1e-12 * scale {
                return None;
            }
            Some(Membership::Inside(MembershipWitness {
                coefficients: x,
                residual,
                exact: false,
            }))
        }
        LpOutcome::Infeasible { dual, phase1 } => {
            if phase1 < LP_EXACT_TRIGGER * scale {
                return None;
            }
            // nu = -(signs o dual) separates in the original orientation.
            let nu: Vec<f64> = dual.iter().zip(&signs).map(|(&d, &s)| -d * s).collect();
            let margin: f64 = nu.iter().zip(y).map(|(n, v)| n * v).sum();
            let min_gen = cone
                .generators
                .iter()
                .map(|gen| gen.ones().map(|i| nu[i]).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            if margin > -LP_EXACT_TRIGGER * scale || min_gen < -LP_FLOAT_TOL {
                return None;
            }
            Some(Membership::Outside(FarkasCertificate {
                nu,
                margin,
                exact: false,
            }))
        }
        LpOutcome::Unbounded => None,
    }
}

fn witness_residual(cone: &PolyhedralCone, lambda: &[f64], y: &[f64]) -> f64 {
    let t = cone.ambient_dim;
    let mut recon = vec![0.0f64; t];
    for (j, gen) in cone.generators.iter().enumerate() {
        if lambda[j] != 0.0 {
            for i in gen.ones() {
                recon[i] += lambda[j];
            }
        }
    }
    recon
        .iter()
        .zip(y)
        .map(|(r, v)| (r - v).abs())
        .fold(0.0, f64::max)
}

fn exact_membership(cone: &PolyhedralCone, y: &[f64]) -> Result<Membership> {
    let t = cone.ambient_dim;
    let g = cone.generators.len();
    let yq: Vec<BigRational> = y.iter().map(|&v| BigRational::from_f64(v)).collect();
    let signs: Vec<bool> = yq.iter().map(|v| v.is_negative()).collect();
    let mut a = vec![vec![<BigRational as LpScalar>::zero(); g]; t];
    for (j, gen) in cone.generators.iter().enumerate() {
        for i in 0..t {
            if gen.get(i) {
                a[i][j] = if signs[i] {
                    <BigRational as LpScalar>::one().neg()
                } else {
                    <BigRational as LpScalar>::one()
                };
            }
        }
    }
    let b: Vec<BigRational> = yq
        .iter()
        .zip(&signs)
        .map(|(v, &s)| if s { -v.clone() } else { v.clone() })
        .collect();
    let lp = StandardLp {
        a,
        b,
        c: vec![<BigRational as LpScalar>::zero(); g],
    };
    match solve_standard(&lp)? {
        LpOutcome::Optimal { x, .. } => {
            let coefficients: Vec<f64> = x.iter().map(|v| v.to_f64()).collect();
            let residual = witness_residual(cone, &coefficients, y);
            Ok(Membership::Inside(MembershipWitness {
                coefficients,
                residual,
                exact: true,
            }))
        }
        LpOutcome::Infeasible { dual, .. } => {
            let nu_q: Vec<BigRational> = dual
                .iter()
                .zip(&signs)
                .map(|(d, &s)| if s { d.clone() } else { -d.clone() })
                .collect();
            // Exact verification of the certificate.
            for gen in &cone.generators {
                let dot: BigRational = gen.ones().map(|i| nu_q[i].clone()).sum();
                if dot.is_negative() {
                    return Err(Error::LpFailure(
                        "exact Farkas certificate fails nu.Z >= 0".into(),
                    ));
                }
            }
            let margin_q: BigRational = nu_q
                .iter()
                .zip(&yq)
                .map(|(n, v)| n * v)
                .sum();
            if !margin_q.is_negative() {
                return Err(Error::LpFailure(
                    "exact Farkas certificate fails nu.y < 0".into(),
                ));
            }
            let nu: Vec<f64> = nu_q.iter().map(|v| v.to_f64()).collect();
            let margin = margin_q.to_f64();
            Ok(Membership::Outside(FarkasCertificate {
                nu,
                margin,
                exact: true,
            }))
        }
        LpOutcome::Unbounded => Err(Error::LpFailure("membership LP unbounded".into())),
    }
}

/// Verdict of the discrete-convexity test.
#[derive(Clone, Debug)]
pub struct DiscreteConvexity {
    pub convex: bool,
    pub violating_facet: Option<FacetNormal>,
}

/// A 0/1-generated cone is discretely convex iff every facet admits a
/// nonzero normal with coordinates in {-1,0,1}. For a full-dimensional cone
/// the primitive facet normal is unique up to sign, so the test is
/// entrywise; otherwise a small {-1,0,1} feasibility search runs per facet.
pub fn is_discretely_convex(cone: &PolyhedralCone) -> Result<DiscreteConvexity> {
    let report = facet_normals(cone)?;
    if report.full_dimensional {
        for f in &report.facets {
            if f.nu.iter().any(|&v| v.abs() > 1) {
                return Ok(DiscreteConvexity {
                    convex: false,
                    violating_facet: Some(f.clone()),
                });
            }
        }
        return Ok(DiscreteConvexity {
            convex: true,
            violating_facet: None,
        });
    }
    // Low-dimensional cone: search a {-1,0,1} vector vanishing on the facet
    // and nonnegative on all generators.
    let t = cone.ambient_dim;
    if t > 12 {
        return Err(Error::Capability(
            "discrete-convexity search supports T <= 12 for low-dimensional cones".into(),
        ));
    }
    let gens: Vec<Vec<i64>> = cone.generators.iter().map(Spectrum::to_i64_vec).collect();
    for f in &report.facets {
        let tight: Vec<&Vec<i64>> = f.tight_generators.iter().map(|&i| &gens[i]).collect();
        if !exists_sign_normal(t, &gens, &tight) {
            return Ok(DiscreteConvexity {
                convex: false,
                violating_facet: Some(f.clone()),
            });
        }
    }
    Ok(DiscreteConvexity {
        convex: true,
        violating_facet: None,
    })
}

fn exists_sign_normal(t: usize, gens: &[Vec<i64>], tight: &[&Vec<i64>]) -> bool {
    let mut nu = vec![-1i64; t];
    loop {
        if nu.iter().any(|&v| v != 0) {
            let vanishes = tight
                .iter()
                .all(|g| g.iter().zip(&nu).map(|(a, b)| a * b).sum::<i64>() == 0);
            if vanishes {
                let valid = gens
                    .iter()
                    .all(|g| g.iter().zip(&nu).map(|(a, b)| a * b).sum::<i64>() >= 0);
                if valid {
                    return true;
                }
            }
        }
        // next vector in {-1,0,1}^t
        let mut i = 0;
        loop {
            if i == t {
                return false;
            }
            if nu[i] < 1 {
                nu[i] += 1;
                break;
            }
            nu[i] = -1;
            i += 1;
        }
    }
}

/// How to run the combinatorial necessary condition.
pub enum NecessaryMode<'a> {
    /// All 3^T sign vectors; supported for T <= 12.
    Exhaustive,
    /// Only the {-1,0,1} facet normals (equivalent when the cone is
    /// discretely convex).
    Facets(&'a FacetReport),
}

/// Report of the necessary condition; a violation names the index pair
/// (Omega1, Omega2) whose cell-wise weight inequality is not matched by y.
#[derive(Clone, Debug)]
pub struct NecessaryConditionReport {
    pub holds: bool,
    /// 0-based index sets (Omega1, Omega2).
    pub violating_pair: Option<(Vec<usize>, Vec<usize>)>,
}

/// Check: whenever sum_{t in O1} w(t) >= sum_{t in O2} w(t) holds cell-wise,
/// sum_{t in O1} y(t) >= sum_{t in O2} y(t) must hold too. Each disjoint
/// pair (O1, O2) is the sign vector nu = 1_{O1} - 1_{O2}; the cell-wise
/// premise is nu.Z(G) >= 0 for all spectra.
pub fn necessary_condition(
    y: &[f64],
    spectra: &BTreeSet<Spectrum>,
    mode: NecessaryMode<'_>,
) -> Result<NecessaryConditionReport> {
    let t = y.len();
    let tol = LP_FLOAT_TOL * (1.0 + y.iter().map(|v| f64::abs(*v)).sum::<f64>());
    let split = |nu: &[i64]| -> (Vec<usize>, Vec<usize>) {
        let o1 = nu
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 1)
            .map(|(i, _)| i)
            .collect();
        let o2 = nu
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == -1)
            .map(|(i, _)| i)
            .collect();
        (o1, o2)
    };
    match mode {
        NecessaryMode::Exhaustive => {
            if t > 12 {
                return Err(Error::Capability(format!(
                    "exhaustive necessary condition scans 3^T sign patterns; T = {t} > 12. \
                     Use LP membership (cone_contains) instead"
                )));
            }
            let gens: Vec<Vec<i64>> = spectra.iter().map(Spectrum::to_i64_vec).collect();
            let mut nu = vec![-1i64; t];
            loop {
                if nu.iter().any(|&v| v != 0) {
                    let premise = gens
                        .iter()
                        .all(|g| g.iter().zip(&nu).map(|(a, b)| a * b).sum::<i64>() >= 0);
                    if premise {
                        let ydot: f64 = nu.iter().zip(y).map(|(&n, &v)| n as f64 * v).sum();
                        if ydot < -tol {
                            return Ok(NecessaryConditionReport {
                                holds: false,
                                violating_pair: Some(split(&nu)),
                            });
                        }
                    }
                }
                let mut i = 0;
                loop {
                    if i == t {
                        return Ok(NecessaryConditionReport {
                            holds: true,
                            violating_pair: None,
                        });
                    }
                    if nu[i] < 1 {
                        nu[i] += 1;
                        break;
                    }
                    nu[i] = -1;
                    i += 1;
                }
            }
        }
        NecessaryMode::Facets(report) => {
            for f in &report.facets {
                if f.nu.iter().any(|&v| v.abs() > 1) {
                    continue;
                }
                let ydot: f64 = f.nu.iter().zip(y).map(|(&n, &v)| n as f64 * v).sum();
                if ydot < -tol {
                    return Ok(NecessaryConditionReport {
                        holds: false,
                        violating_pair: Some(split(&f.nu)),
                    });
                }
            }
            Ok(NecessaryConditionReport {
                holds: true,
                violating_pair: None,
            })
        }
    }
}
