//! End-to-end moment problem: is a time series compatible with a CES cost
//! structure at a given rho, and if so, which capacity distribution shows it?
//!
//! Pipeline: normalize prices -> straighten level sets -> enumerate cell
//! spectra -> cone membership. A feasible combination of spectra is turned
//! into an absolutely continuous witness by placing a smoothed atom at the
//! Chebyshev center of each cell carrying mass.

use serde::{Deserialize, Serialize};

use crate::arrangement::{enumerate_spectra, transform_coordinates, LineFamily, RhoBranch};
use crate::cone::{cone_contains, cone_from_spectra, Membership};
use crate::error::{Error, Result};
use crate::lp::solve_inequality_max;
use crate::model::{ces_unit_cost, CesParams, DiscreteMeasure};
use crate::series::{output_vector, validate_series, NormalizedPrices, TimeSeriesRecord};
use crate::spectrum::Spectrum;
use crate::tol::BOUNDARY_REL_TOL;

/// Outcome of a solvability query at one rho.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentProblemReport {
    pub rho: f64,
    pub solvable: bool,
    /// Witness capacity distribution in the original technology coordinates.
    pub witness: Option<DiscreteMeasure>,
    /// Per-cell masses behind the witness, keyed by cell bitstring in
    /// original record order.
    pub witness_masses: Option<Vec<(String, f64)>>,
    /// Separating functional in original record order when not solvable.
    pub certificate: Option<Vec<f64>>,
    /// max |residual| of the witness against the observed outputs.
    pub max_residual: Option<f64>,
    pub cone_size: usize,
    pub spectra_count: usize,
    pub warnings: Vec<String>,
}

/// Decide solvability of the moment problem at `rho` and construct whichever
/// certificate applies.
pub fn moment_solvable(series: &[TimeSeriesRecord], rho: f64) -> Result<MomentProblemReport> {
    validate_series(series)?;
    let phat = NormalizedPrices::from_records(series)?;
    let family = transform_coordinates(rho, &phat)?;
    let spectra = enumerate_spectra(&family)?;
    let cone = cone_from_spectra(&spectra);
    let y = output_vector(series);
    let y_line = family.permute_to_line_order(&y);
    let mut warnings = Vec::new();
    match cone_contains(&cone, &y_line)? {
        Membership::Inside(witness) => {
            let mut pairs: Vec<(Spectrum, f64)> = Vec::new();
            let mut dropped = 0.0;
            let scale = 1.0 + y.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            for (gen, &lambda) in cone.generators().iter().zip(&witness.coefficients) {
                if lambda > 1e-13 * scale {
                    pairs.push((gen.clone(), lambda));
                } else if lambda > 0.0 {
                    dropped += lambda;
                }
            }
            if dropped > 0.0 {
                warnings.push(format!(
                    "dropped {dropped:.3e} of witness mass below threshold"
                ));
            }
            // Near rho = 0 the inverse change of variables can leave the
            // f64 range (exponent -1/rho); solvability stands either way,
            // the witness is then reported through its cell masses only.
            let (witness, max_residual) = match witness_from_cell_masses(&family, &pairs) {
                Ok(measure) => {
                    let residuals = verify_measure(&measure, series, rho)?;
                    let max_residual = residuals.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
                    (Some(measure), Some(max_residual))
                }
                Err(Error::NumericRange { context, detail }) => {
                    warnings.push(format!(
                        "witness atoms not representable at rho={rho}: {context}: {detail}"
                    ));
                    (None, None)
                }
                Err(e) => return Err(e),
            };
            let witness_masses = pairs
                .iter()
                .map(|(s, l)| (original_order_bitstring(&family, s), *l))
                .collect();
            Ok(MomentProblemReport {
                rho,
                solvable: true,
                witness,
                witness_masses: Some(witness_masses),
                certificate: None,
                max_residual,
                cone_size: cone.len(),
                spectra_count: spectra.len(),
                warnings,
            })
        }
        Membership::Outside(cert) => Ok(MomentProblemReport {
            rho,
            solvable: false,
            witness: None,
            witness_masses: None,
            certificate: Some(family.unpermute_from_line_order(&cert.nu)),
            max_residual: None,
            cone_size: cone.len(),
            spectra_count: spectra.len(),
            warnings,
        }),
    }
}

fn original_order_bitstring(family: &LineFamily, s: &Spectrum) -> String {
    let line_bits = s.to_f64_vec();
    let orig = family.unpermute_from_line_order(&line_bits);
    orig.iter()
        .map(|&v| if v > 0.5 { '1' } else { '0' })
        .collect()
}

/// Build the witness measure for given per-cell masses. Spectra are in line
/// order (the order used by `enumerate_spectra` on this family).
pub fn construct_witness_measure(
    series: &[TimeSeriesRecord],
    rho: f64,
    cell_masses: &[(Spectrum, f64)],
) -> Result<DiscreteMeasure> {
    validate_series(series)?;
    let phat = NormalizedPrices::from_records(series)?;
    let family = transform_coordinates(rho, &phat)?;
    witness_from_cell_masses(&family, cell_masses)
}

fn witness_from_cell_masses(
    family: &LineFamily,
    cell_masses: &[(Spectrum, f64)],
) -> Result<DiscreteMeasure> {
    let mut measure = DiscreteMeasure::empty();
    for (spectrum, mass) in cell_masses {
        if *mass < 0.0 {
            return Err(Error::Validation(format!(
                "negative cell mass {mass} for spectrum {}",
                spectrum.bitstring()
            )));
        }
        if *mass == 0.0 {
            continue;
        }
        let (center_z, _radius_z) = chebyshev_center(family, spectrum)?;
        let x = map_to_technology(family, center_z)?;
        let r = inscribed_radius(family, spectrum, &x)?;
        measure.push(x, *mass, r)?;
    }
    Ok(measure)
}

/// Deepest interior point of a cell in the straightened coordinates, with
/// its in-cell radius.
pub fn cell_center(family: &LineFamily, spectrum: &Spectrum) -> Result<([f64; 2], f64)> {
    chebyshev_center(family, spectrum)
}

/// Deepest interior point of the cell with the given spectrum, as an LP over
/// the cell's inequalities plus quadrant bounds. Unbounded cells are cut by
/// a box at twice the outermost line intercepts.
fn chebyshev_center(family: &LineFamily, spectrum: &Spectrum) -> Result<([f64; 2], f64)> {
    let t = family.t();
    if spectrum.len() != t {
        return Err(Error::Validation(format!(
            "spectrum length {} does not match family size {t}",
            spectrum.len()
        )));
    }
    let coeffs = family.coeffs();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    for (k, &(a, b)) in coeffs.iter().enumerate() {
        let norm = a.hypot(b);
        if spectrum.get(k) {
            // below line k: a z1 + b z2 + r |(a,b)| <= 1
            rows.push(vec![a, b, norm]);
            rhs.push(1.0);
        } else {
            // above line k: -a z1 - b z2 + r |(a,b)| <= -1
            rows.push(vec![-a, -b, norm]);
            rhs.push(-1.0);
        }
    }
    // Quadrant: z_i - r >= 0.
    rows.push(vec![-1.0, 0.0, 1.0]);
    rhs.push(0.0);
    rows.push(vec![0.0, -1.0, 1.0]);
    rhs.push(0.0);
    // Bounding box for unbounded cells.
    let reach = coeffs
        .iter()
        .flat_map(|&(a, b)| [1.0 / a, 1.0 / b])
        .fold(0.0f64, f64::max)
        * 2.0;
    rows.push(vec![1.0, 0.0, 1.0]);
    rhs.push(reach);
    rows.push(vec![0.0, 1.0, 1.0]);
    rhs.push(reach);
    // Positive-rho branch: stay inside the image of the change of variables.
    if family.branch() == RhoBranch::PositiveRho {
        let eps = family.epsilon().unwrap();
        rows.push(vec![-1.0, -1.0, std::f64::consts::SQRT_2]);
        rhs.push(-eps);
    }
    let solution = solve_inequality_max(&rows, &rhs, &[0.0, 0.0, 1.0])?;
    let Some((zr, radius)) = solution else {
        return Err(Error::Validation(format!(
            "spectrum {} does not describe a nonempty cell",
            spectrum.bitstring()
        )));
    };
    if radius <= 1e-12 {
        return Err(Error::NumericRange {
            context: "chebyshev_center".into(),
            detail: format!(
                "cell {} has no interior (radius {radius:.3e})",
                spectrum.bitstring()
            ),
        });
    }
    Ok(([zr[0], zr[1]], radius))
}

/// Invert the change of variables at a single point.
fn map_to_technology(family: &LineFamily, z: [f64; 2]) -> Result<Vec<f64>> {
    let rho = family.rho();
    let x = match family.branch() {
        RhoBranch::NegativeRho => {
            vec![z[0].powf(-1.0 / rho), z[1].powf(-1.0 / rho)]
        }
        RhoBranch::PositiveRho => {
            let eps = family.epsilon().unwrap();
            let denom = z[0] + z[1] - eps;
            if denom <= 0.0 {
                return Err(Error::NumericRange {
                    context: "map_to_technology".into(),
                    detail: format!("point {z:?} outside the image region (eps = {eps})"),
                });
            }
            vec![
                (z[0] * eps / denom).powf(-1.0 / rho),
                (z[1] * eps / denom).powf(-1.0 / rho),
            ]
        }
    };
    for &xi in &x {
        if !xi.is_finite() || xi <= 0.0 {
            return Err(Error::NumericRange {
                context: "map_to_technology".into(),
                detail: format!("technology coordinate {xi} from z = {z:?}"),
            });
        }
    }
    Ok(x)
}

/// Largest verified smoothing radius: the unit cost is increasing in each
/// coordinate, so checking the two extreme corners of the box around x
/// bounds it over the whole disk. Halve until every level-set constraint
/// holds strictly.
fn inscribed_radius(family: &LineFamily, spectrum: &Spectrum, x: &[f64]) -> Result<f64> {
    let params = CesParams::new(family.rho(), 2)?;
    let mut r = 0.45 * x.iter().cloned().fold(f64::INFINITY, f64::min);
    for _ in 0..200 {
        if disk_inside_cell(family, &params, spectrum, x, r)? {
            return Ok(r);
        }
        r *= 0.5;
    }
    Err(Error::NumericRange {
        context: "inscribed_radius".into(),
        detail: format!("no positive radius verified around {x:?}"),
    })
}

fn disk_inside_cell(
    family: &LineFamily,
    params: &CesParams,
    spectrum: &Spectrum,
    x: &[f64],
    r: f64,
) -> Result<bool> {
    let hi = [x[0] + r, x[1] + r];
    let lo = [x[0] - r, x[1] - r];
    if lo[0] <= 0.0 || lo[1] <= 0.0 {
        return Ok(false);
    }
    for k in 0..family.t() {
        let phat = family.phat_of_line(k);
        if spectrum.get(k) {
            let worst = ces_unit_cost(*params, &phat, &hi)?;
            if worst >= 1.0 {
                return Ok(false);
            }
        } else {
            let best = ces_unit_cost(*params, &phat, &lo)?;
            if best <= 1.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Loading residuals of a measure against the series, evaluated in the
/// original technology coordinates through the unit cost function (not the
/// straightened lines), for each observation in record order.
pub fn verify_measure(
    measure: &DiscreteMeasure,
    series: &[TimeSeriesRecord],
    rho: f64,
) -> Result<Vec<f64>> {
    validate_series(series)?;
    let phat = NormalizedPrices::from_records(series)?;
    let params = CesParams::new(rho, 2)?;
    let mut residuals = Vec::with_capacity(series.len());
    for (idx, record) in series.iter().enumerate() {
        let prices = phat.at(idx);
        let mut loaded_mass = 0.0;
        for atom in measure.atoms().iter() {
            let h = ces_unit_cost(params, prices, &atom.x)?;
            if (h - 1.0).abs() <= BOUNDARY_REL_TOL {
                return Err(Error::AmbiguousTheta {
                    atom: atom.x.clone(),
                    t: record.t,
                });
            }
            if h < 1.0 {
                loaded_mass += atom.mass;
            }
        }
        residuals.push(loaded_mass - record.y);
    }
    Ok(residuals)
}

/// Forward simulation: overwrite outputs with the ones generated by a known
/// capacity distribution at the given prices and rho. This is the
/// independent oracle for the identification pipeline.
pub fn simulate_outputs(
    measure: &DiscreteMeasure,
    records: &mut [TimeSeriesRecord],
    rho: f64,
) -> Result<()> {
    let phat = NormalizedPrices::from_records(records)?;
    let params = CesParams::new(rho, 2)?;
    for (idx, record) in records.iter_mut().enumerate() {
        let prices = phat.at(idx).to_vec();
        let mut y = 0.0;
        for atom in measure.atoms() {
            let h = ces_unit_cost(params, &prices, &atom.x)?;
            if h <= 1.0 {
                y += atom.mass;
            }
        }
        record.y = y;
    }
    Ok(())
}

impl LineFamily {
    /// Normalized prices of renumbered line k, recovered from the line
    /// coefficients (inverse of the coefficient transform).
    pub fn phat_of_line(&self, k: usize) -> Vec<f64> {
        let (a, b) = self.coeffs()[k];
        let rho = self.rho();
        match self.branch() {
            RhoBranch::NegativeRho => vec![a.powf(-1.0 / rho), b.powf(-1.0 / rho)],
            RhoBranch::PositiveRho => {
                let inv_eps = 1.0 / self.epsilon().unwrap();
                vec![
                    (inv_eps - a).powf(-1.0 / rho),
                    (inv_eps - b).powf(-1.0 / rho),
                ]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series_of(rows: &[(f64, [f64; 2])]) -> Vec<TimeSeriesRecord> {
        rows.iter()
            .enumerate()
            .map(|(i, &(y, p))| TimeSeriesRecord::new(i + 1, y, 1.0, p.to_vec()).unwrap())
            .collect()
    }

    #[test]
    fn single_observation_always_solvable() {
        let series = series_of(&[(5.0, [1.0, 1.0])]);
        let report = moment_solvable(&series, -1.0).unwrap();
        assert!(report.solvable);
        assert_eq!(report.spectra_count, 2);
        let witness = report.witness.unwrap();
        assert!((witness.total_mass() - 5.0).abs() < 1e-9);
        assert!(report.max_residual.unwrap() < 1e-9);
    }

    #[test]
    fn nested_pair_needs_nonincreasing_outputs() {
        // phat(2) = (2,2) cuts a smaller profitable region than (1,1), so
        // y(2) <= y(1) is required.
        let bad = series_of(&[(1.0, [1.0, 1.0]), (2.0, [2.0, 2.0])]);
        let report = moment_solvable(&bad, -1.0).unwrap();
        assert!(!report.solvable);
        let cert = report.certificate.unwrap();
        assert!(cert[0] > 0.0 && cert[1] < 0.0, "certificate {cert:?}");

        let good = series_of(&[(2.0, [1.0, 1.0]), (1.0, [2.0, 2.0])]);
        let report = moment_solvable(&good, -1.0).unwrap();
        assert!(report.solvable);
        assert!(report.max_residual.unwrap() < 1e-9);
    }

    #[test]
    fn nested_witness_masses_match_prefix_differences() {
        let series = series_of(&[(3.0, [1.0, 1.0]), (1.0, [2.0, 2.0])]);
        let report = moment_solvable(&series, -1.0).unwrap();
        assert!(report.solvable);
        let mut masses = report.witness_masses.unwrap();
        masses.sort_by(|a, b| a.0.cmp(&b.0));
        // Cell loaded only at t=1 gets 2, cell loaded at both gets 1.
        assert_eq!(masses.len(), 2);
        assert_eq!(masses[0].0, "10");
        assert!((masses[0].1 - 2.0).abs() < 1e-9);
        assert_eq!(masses[1].0, "11");
        assert!((masses[1].1 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn forward_simulation_round_trip_both_branches() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for trial in 0..30 {
            let rho = if trial % 2 == 0 {
                rng.random_range(-0.95..-0.05)
            } else {
                rng.random_range(0.1..3.0)
            };
            let t_count = rng.random_range(2..=5);
            let mut series: Vec<TimeSeriesRecord> = (0..t_count)
                .map(|i| {
                    TimeSeriesRecord::new(
                        i + 1,
                        0.0,
                        1.0,
                        vec![rng.random_range(0.4..2.5), rng.random_range(0.4..2.5)],
                    )
                    .unwrap()
                })
                .collect();
            let mut measure = DiscreteMeasure::empty();
            for _ in 0..rng.random_range(1..=3usize) {
                measure
                    .push(
                        vec![rng.random_range(0.2..3.0), rng.random_range(0.2..3.0)],
                        rng.random_range(0.5..4.0),
                        0.0,
                    )
                    .unwrap();
            }
            simulate_outputs(&measure, &mut series, rho).unwrap();
            match moment_solvable(&series, rho) {
                Ok(report) => {
                    assert!(
                        report.solvable,
                        "forward-simulated instance must be solvable: rho={rho}, trial={trial}"
                    );
                    assert!(report.max_residual.unwrap() < 1e-9);
                }
                Err(Error::DegenerateArrangement { .. }) => {} // unlucky draw
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }

    #[test]
    fn witness_disks_stay_inside_cells() {
        let series = series_of(&[(3.0, [1.0, 0.5]), (2.0, [0.7, 1.4]), (1.0, [1.5, 1.5])]);
        for rho in [-0.7, 0.8] {
            let Ok(report) = moment_solvable(&series, rho) else {
                continue;
            };
            if !report.solvable {
                continue;
            }
            let witness = report.witness.unwrap();
            let params = CesParams::new(rho, 2).unwrap();
            let phat = NormalizedPrices::from_records(&series).unwrap();
            for atom in witness.atoms() {
                assert!(atom.smoothing_radius > 0.0);
                for t in 0..series.len() {
                    let h_mid = ces_unit_cost(params, phat.at(t), &atom.x).unwrap();
                    for d in [-1.0, 1.0] {
                        let corner = vec![
                            atom.x[0] + d * atom.smoothing_radius,
                            atom.x[1] + d * atom.smoothing_radius,
                        ];
                        let h = ces_unit_cost(params, phat.at(t), &corner).unwrap();
                        assert_eq!(h < 1.0, h_mid < 1.0, "disk crosses level set {t}");
                    }
                }
            }
        }
    }

    #[test]
    fn verify_rejects_boundary_atoms() {
        let series = series_of(&[(1.0, [1.0, 1.0])]);
        let mut measure = DiscreteMeasure::empty();
        // h((1,1) o (0.5, 0.5)) = 1 at rho = -1: exactly on the level set.
        measure.push(vec![0.5, 0.5], 1.0, 0.0).unwrap();
        assert!(matches!(
            verify_measure(&measure, &series, -1.0),
            Err(Error::AmbiguousTheta { .. })
        ));
    }

    #[test]
    fn empty_measure_matches_zero_outputs() {
        let series = series_of(&[(0.0, [1.0, 2.0]), (0.0, [2.0, 1.0])]);
        let residuals = verify_measure(&DiscreteMeasure::empty(), &series, -0.5).unwrap();
        assert_eq!(residuals, vec![0.0, 0.0]);
        let report = moment_solvable(&series, -0.5).unwrap();
        assert!(report.solvable);
        assert!(report.witness.unwrap().is_empty());
    }

    #[test]
    fn residuals_stable_across_rho_within_interval() {
        let series = series_of(&[(2.0, [1.0, 0.6]), (1.0, [0.8, 1.3])]);
        let report = moment_solvable(&series, -0.5).unwrap();
        assert!(report.solvable);
        let witness = report.witness.unwrap();
        let r1 = verify_measure(&witness, &series, -0.5).unwrap();
        let r2 = verify_measure(&witness, &series, -0.45).unwrap();
        for (a, b) in r1.iter().zip(&r2) {
            assert_eq!(a, b, "loading pattern changed within the interval");
        }
    }
}
