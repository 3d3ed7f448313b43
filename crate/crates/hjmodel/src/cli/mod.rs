//! Command-line front end: ingest CSV time series and model configs, run
//! analyses, emit JSON reports and SVG diagrams.
//!
//! Reports are deterministic given (inputs, seed, tolerances); timing goes
//! to stderr so the JSON stays byte-identical across runs.

mod csv;
pub mod svg;

pub use csv::{ingest_csv, parse_series_csv};

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::aggregation::{
    aggregate_profit_numeric, k_stable_check, verify_equilibrium, Allocation, ConeK, Demand,
    Industry, TechnologyMultiset,
};
use crate::arrangement::{enumerate_spectra, sweep, transform_coordinates};
use crate::duality::{
    check_propchar, completely_monotone_check, laplace_density_cd, laplace_density_ces,
    profit_cobb_douglas, profit_ces, CesProductionParams, CobbDouglasParams,
};
use crate::elasticity::estimate_elasticity;
use crate::error::{Error, Result};
use crate::moment::moment_solvable;
use crate::series::output_vector;
use crate::tiling::{build_tiling, output_order, snake_in_region, snake_in_tiling, Snake};

/// Which analysis to run.
#[derive(Clone, Debug)]
pub enum Command {
    EstimateElasticity { input: PathBuf },
    CheckMoment { input: PathBuf, rho: f64 },
    Tiling { input: PathBuf, rho: f64 },
    DualityVerify { case: DualityCase },
    Aggregate { config: PathBuf },
    KStable { config: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualityCase {
    CobbDouglas,
    Ces,
    All,
}

impl std::str::FromStr for DualityCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<DualityCase> {
        match s {
            "cd" | "cobb-douglas" => Ok(DualityCase::CobbDouglas),
            "ces" => Ok(DualityCase::Ces),
            "all" => Ok(DualityCase::All),
            other => Err(Error::Validation(format!(
                "unknown duality case `{other}` (expected cd, ces or all)"
            ))),
        }
    }
}

/// One run: a command plus the global knobs.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    /// Override of the default check tolerance.
    pub tol: Option<f64>,
    /// Seed for sampled diagnostics.
    pub seed: u64,
    /// JSON report destination; stdout only when absent.
    pub out: Option<PathBuf>,
    /// SVG destination for the commands that draw.
    pub svg: Option<PathBuf>,
}

/// The JSON report envelope.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub inputs_digest: String,
    pub version: String,
    pub results: serde_json::Value,
    pub warnings: Vec<String>,
}

fn fnv1a64(bytes: &[u8], state: u64) -> u64 {
    let mut hash = if state == 0 { 0xcbf29ce484222325 } else { state };
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Write a file atomically: temp file in the same directory, then rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(Deserialize)]
struct AggregateConfig {
    industries: Vec<Industry>,
    demand: Demand,
    s: Vec<f64>,
    p0: f64,
    /// Optional: verify this allocation as an equilibrium at prices q.
    #[serde(default)]
    equilibrium: Option<EquilibriumConfig>,
}

#[derive(Deserialize)]
struct EquilibriumConfig {
    allocation: Allocation,
    q: Vec<f64>,
}

#[derive(Deserialize)]
struct KStableConfig {
    x: Vec<Vec<f64>>,
    y: Vec<Vec<f64>>,
    gamma: Vec<usize>,
    cone_generators: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct TilingArtifact {
    t: usize,
    rho: f64,
    word: Vec<usize>,
    snake_count: usize,
    rhombus_count: usize,
    lambda_one_based: Vec<usize>,
    lambda_tie: bool,
    lambda_snake_in_tiling: bool,
    lambda_snake_in_region: bool,
}

/// Run one command, write the report (and SVG) files, and return the report.
pub fn run(config: &RunConfig) -> Result<Report> {
    let started = std::time::Instant::now();
    let mut digest = 0u64;
    let mut warnings: Vec<String> = Vec::new();
    let tol = config.tol.unwrap_or(1e-3);
    digest = fnv1a64(format!("tol={tol};seed={}", config.seed).as_bytes(), digest);

    let (name, results, mut svg_payload): (&str, serde_json::Value, Option<String>) =
        match &config.command {
            Command::EstimateElasticity { input } => {
                let content = std::fs::read_to_string(input)?;
                digest = fnv1a64(content.as_bytes(), digest);
                let series = parse_series_csv(&content)?;
                let report = estimate_elasticity(&series)?;
                ("estimate-elasticity", serde_json::to_value(&report)?, None)
            }
            Command::CheckMoment { input, rho } => {
                let content = std::fs::read_to_string(input)?;
                digest = fnv1a64(content.as_bytes(), digest);
                digest = fnv1a64(format!("rho={rho}").as_bytes(), digest);
                let series = parse_series_csv(&content)?;
                let report = moment_solvable(&series, *rho)?;
                let svg_out = if config.svg.is_some() {
                    let phat = crate::series::NormalizedPrices::from_records(&series)?;
                    let family = transform_coordinates(*rho, &phat)?;
                    let spectra: Vec<_> = enumerate_spectra(&family)?.into_iter().collect();
                    let swept = sweep(&family)?;
                    let tiling = build_tiling(&swept)?;
                    let y_line = family.permute_to_line_order(&output_vector(&series));
                    let (lambda, _) = output_order(&y_line);
                    let snake = Snake::of_permutation(&lambda, family.t());
                    let arrangement = svg::arrangement_panel(&family, &spectra)?;
                    let tiles = svg::tiling_panel(&tiling, Some(&snake));
                    Some(svg::combined_panel(&arrangement, &tiles))
                } else {
                    None
                };
                warnings.extend(report.warnings.iter().cloned());
                ("check-moment", serde_json::to_value(&report)?, svg_out)
            }
            Command::Tiling { input, rho } => {
                let content = std::fs::read_to_string(input)?;
                digest = fnv1a64(content.as_bytes(), digest);
                digest = fnv1a64(format!("rho={rho}").as_bytes(), digest);
                let series = parse_series_csv(&content)?;
                let phat = crate::series::NormalizedPrices::from_records(&series)?;
                let family = transform_coordinates(*rho, &phat)?;
                let swept = sweep(&family)?;
                warnings.extend(swept.warnings.iter().cloned());
                let tiling = build_tiling(&swept)?;
                let y_line = family.permute_to_line_order(&output_vector(&series));
                let (lambda, tie) = output_order(&y_line);
                if tie {
                    warnings.push("output ties broken by smaller time index".into());
                }
                let snake = Snake::of_permutation(&lambda, family.t());
                let artifact = TilingArtifact {
                    t: family.t(),
                    rho: *rho,
                    word: tiling.word().letters().to_vec(),
                    snake_count: tiling.snakes().len(),
                    rhombus_count: tiling.rhombi().len(),
                    lambda_one_based: lambda.one_based(),
                    lambda_tie: tie,
                    lambda_snake_in_tiling: snake_in_tiling(&tiling, &snake),
                    lambda_snake_in_region: snake_in_region(&tiling, &snake)?,
                };
                let svg_out = if config.svg.is_some() {
                    let spectra: Vec<_> = enumerate_spectra(&family)?.into_iter().collect();
                    let arrangement = svg::arrangement_panel(&family, &spectra)?;
                    let tiles = svg::tiling_panel(&tiling, Some(&snake));
                    Some(svg::combined_panel(&arrangement, &tiles))
                } else {
                    None
                };
                ("tiling", serde_json::to_value(&artifact)?, svg_out)
            }
            Command::DualityVerify { case } => {
                let value = duality_verify(*case, tol, config.seed)?;
                ("duality-verify", value, None)
            }
            Command::Aggregate { config: path } => {
                let content = std::fs::read_to_string(path)?;
                digest = fnv1a64(content.as_bytes(), digest);
                let parsed: AggregateConfig = serde_json::from_str(&content)?;
                for industry in &parsed.industries {
                    industry.measure.validate()?;
                }
                let numeric = aggregate_profit_numeric(
                    &parsed.industries,
                    parsed.demand,
                    &parsed.s,
                    parsed.p0,
                )?;
                let mut value = serde_json::json!({ "aggregate_profit": numeric });
                if let Some(eq) = &parsed.equilibrium {
                    let report = verify_equilibrium(
                        &parsed.industries,
                        parsed.demand,
                        &eq.allocation,
                        &eq.q,
                        &parsed.s,
                        parsed.p0,
                        config.tol.unwrap_or(1e-9),
                    )?;
                    value["equilibrium"] = serde_json::to_value(&report)?;
                }
                ("aggregate", value, None)
            }
            Command::KStable { config: path } => {
                let content = std::fs::read_to_string(path)?;
                digest = fnv1a64(content.as_bytes(), digest);
                let parsed: KStableConfig = serde_json::from_str(&content)?;
                let report = k_stable_check(
                    &TechnologyMultiset { points: parsed.x },
                    &TechnologyMultiset { points: parsed.y },
                    &parsed.gamma,
                    &ConeK {
                        generators: parsed.cone_generators,
                    },
                )?;
                ("k-stable", serde_json::to_value(&report)?, None)
            }
        };

    let report = Report {
        schema: 1,
        command: name.to_string(),
        inputs_digest: format!("{digest:016x}"),
        version: env!("CARGO_PKG_VERSION").to_string(),
        results,
        warnings,
    };
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(out) = &config.out {
        write_atomic(out, json.as_bytes())?;
    }
    if let (Some(svg_path), Some(payload)) = (&config.svg, svg_payload.take()) {
        write_atomic(svg_path, payload.as_bytes())?;
    }
    eprintln!(
        "hjmodel: {name} finished in {:.1} ms",
        started.elapsed().as_secs_f64() * 1e3
    );
    Ok(report)
}

/// The duality verification bundle: both worked closed-form chains plus the
/// completely-monotone diagnostic.
fn duality_verify(case: DualityCase, tol: f64, seed: u64) -> Result<serde_json::Value> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let grid = [(1.0, 1.0), (2.0, 0.7), (0.8, 1.6)];
    let mut out = serde_json::Map::new();
    if matches!(case, DualityCase::CobbDouglas | DualityCase::All) {
        let params = CobbDouglasParams::new(1.0, 1.0, 1.0)?;
        let r = -0.5;
        let mut pi = |p: &[f64], p0: f64| profit_cobb_douglas(&params, p[0], p[1], p0);
        let mut f = |x1: f64, x2: f64| laplace_density_cd(&params, r, x1, x2).unwrap();
        let report = check_propchar(&mut pi, &mut f, r, &grid, tol)?;
        out.insert(
            "cobb_douglas".into(),
            serde_json::json!({
                "spot_profit_111": profit_cobb_douglas(&params, 1.0, 1.0, 1.0),
                "propchar": report,
            }),
        );
    }
    if matches!(case, DualityCase::Ces | DualityCase::All) {
        let params = CesProductionParams::new(1.0, 1.0, 0.5, 0.5)?;
        let (_, _, r, _) = params.consts();
        let mut pi = |p: &[f64], p0: f64| profit_ces(&params, p[0], p[1], p0);
        let mut f = |x1: f64, x2: f64| laplace_density_ces(&params, x1, x2).unwrap();
        let report = check_propchar(&mut pi, &mut f, r, &grid, tol)?;
        // Completely-monotone diagnostic: a smooth transform passes, the
        // perfect-substitutes endpoint is refuted.
        let mut dirs = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        for _ in 0..2 {
            dirs.push(vec![rng.random_range(0.2..1.0), rng.random_range(0.2..1.0)]);
        }
        let x0 = [0.7, 1.3];
        let mut smooth = |s: &[f64]| (-s[0] * x0[0] - s[1] * x0[1]).exp();
        let cm_smooth = completely_monotone_check(&mut smooth, &[1.0, 1.0], &dirs, 4)?;
        let endpoint = CesProductionParams::new(1.0, 1.0, -1.0, 0.5)?;
        let mut g_endpoint = |s: &[f64]| {
            crate::duality::g_from_pi(
                &mut |p: &[f64], p0: f64| profit_ces(&endpoint, p[0], p[1], p0),
                s,
                1e-6,
            )
            .unwrap_or(f64::NAN)
        };
        let cm_endpoint = completely_monotone_check(&mut g_endpoint, &[1.0, 1.0], &dirs, 2)?;
        out.insert(
            "ces".into(),
            serde_json::json!({
                "spot_profit_111":
                    profit_ces(&CesProductionParams::new(1.0, 1.0, 1.0, 0.5)?, 1.0, 1.0, 1.0),
                "propchar": report,
                "cm_smooth_margin": cm_smooth.worst_margin,
                "cm_perfect_substitutes_margin": cm_endpoint.worst_margin,
            }),
        );
    }
    Ok(serde_json::Value::Object(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_dir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("hjmodel-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn check_moment_writes_deterministic_report() {
        let dir = temp_dir("moment");
        let input = dir.join("series.csv");
        std::fs::write(&input, "t,y,p0,p1,p2\n1,2.0,1.0,1.0,0.6\n2,1.0,1.0,0.8,1.3\n").unwrap();
        let out = dir.join("report.json");
        let svg = dir.join("arrangement.svg");
        let config = RunConfig {
            command: Command::CheckMoment {
                input: input.clone(),
                rho: -0.5,
            },
            tol: None,
            seed: 7,
            out: Some(out.clone()),
            svg: Some(svg.clone()),
        };
        let r1 = run(&config).unwrap();
        let j1 = std::fs::read_to_string(&out).unwrap();
        let r2 = run(&config).unwrap();
        let j2 = std::fs::read_to_string(&out).unwrap();
        assert_eq!(j1, j2, "byte-identical reports");
        assert_eq!(r1.inputs_digest, r2.inputs_digest);
        assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
        assert_eq!(r1.schema, 1);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn tiling_command_reports_counts() {
        let dir = temp_dir("tiling");
        let input = dir.join("series.csv");
        std::fs::write(
            &input,
            "t,y,p0,p1,p2\n1,3.0,1.0,1.0,0.5\n2,2.0,1.0,0.7,1.4\n3,1.0,1.0,1.5,1.5\n",
        )
        .unwrap();
        let config = RunConfig {
            command: Command::Tiling { input, rho: -0.5 },
            tol: None,
            seed: 0,
            out: None,
            svg: None,
        };
        let report = run(&config).unwrap();
        assert_eq!(report.results["t"].as_u64().unwrap(), 3);
        let snakes = report.results["snake_count"].as_u64().unwrap();
        let rhombi = report.results["rhombus_count"].as_u64().unwrap();
        assert_eq!(snakes, rhombi + 1);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn degenerate_rho_maps_to_exit_code_3() {
        let dir = temp_dir("degen");
        let input = dir.join("series.csv");
        // Three concurrent lines at rho = -1: coefficients sum to 3.
        std::fs::write(
            &input,
            "t,y,p0,p1,p2\n1,1.0,1.0,1.0,2.0\n2,1.0,1.0,1.5,1.5\n3,1.0,1.0,2.0,1.0\n",
        )
        .unwrap();
        let config = RunConfig {
            command: Command::CheckMoment { input, rho: -1.0 },
            tol: None,
            seed: 0,
            out: None,
            svg: None,
        };
        let err = run(&config).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        std::fs::remove_dir_all(&dir).ok();
    }
}
