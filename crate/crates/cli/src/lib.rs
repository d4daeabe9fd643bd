//! Experiment driver behind the `nlevy` binary: reads a JSON run
//! configuration, runs one subcommand and writes its outputs.

pub mod config;

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use nuclear_levy::levy_measure::{LevyMeasure, Region, ValidationReport};
use nuclear_levy::simulate::PathSkeleton;
use nuclear_levy::verify::{self, TestReport};
use nuclear_levy::{lk_exponent, CharTriplet, LevySimulator, SeminormIndex, SimConfig};
use rayon::prelude::*;
use serde::Serialize;

pub use config::{Experiment, PhiSpec, RunConfig, TestSpec};

/// Environment variable naming the default output directory.
pub const OUTPUT_ENV: &str = "NUCLEAR_LEVY_OUT";
/// Exit status for unreadable, malformed or unusable configurations.
pub const EXIT_USAGE: i32 = 64;

const CHUNK: usize = 1024;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot parse configuration: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Domain(#[from] nuclear_levy::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_USAGE
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    RunConfig::parse(&text)
}

/// Output directory: the command-line flag, then `output_dir` from the
/// configuration, then [`OUTPUT_ENV`], then `./out`.
pub fn output_dir(flag: Option<&Path>, config: &RunConfig) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| config.output_dir.clone())
        .or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serialisable output");
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

/// Seventeen significant digits, locale independent.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationOutput {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<ValidationReport>,
}

/// Checks the Lévy measure of the configured triplet and writes
/// `validation.json`. Exit status 0 iff the measure is valid.
pub fn cmd_validate(config_path: &Path, out: Option<&Path>) -> Result<i32, CliError> {
    let cfg = load_config(config_path)?;
    let dir = output_dir(out, &cfg);
    let r = SeminormIndex::reference(cfg.triplet.r)?;
    let output = match LevyMeasure::from_spec(&cfg.triplet.levy, cfg.triplet.mean.len()).and_then(|m| m.validate(r)) {
        Ok(report) => ValidationOutput { valid: report.valid, error: None, report: Some(report) },
        Err(e) => ValidationOutput { valid: false, error: Some(e.to_string()), report: None },
    };
    prepare_dir(&dir)?;
    write_json(&dir.join("validation.json"), &output)?;
    Ok(if output.valid { 0 } else { 1 })
}

/// Writes `cf.csv` with rows `t, phi_id, Re η, Im η, Re cf, Im cf` over the
/// configured grid, where `cf = e^{tη}`.
pub fn cmd_cf(config_path: &Path, out: Option<&Path>) -> Result<i32, CliError> {
    let cfg = load_config(config_path)?;
    let exp = cfg.experiment()?;
    let grid = exp.cf.as_ref().ok_or_else(|| CliError::Config("missing `cf` section".into()))?;
    if let Some(t) = grid.times.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
        return Err(CliError::Config(format!("times must be finite and >= 0, got {t}")));
    }
    let phis = grid.phis.resolve(exp.triplet.dim())?;
    let etas = phis.par_iter().map(|phi| lk_exponent(&exp.triplet, phi)).collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from("t,phi_id,re_eta,im_eta,re_cf,im_cf\n");
    for &t in &grid.times {
        for (id, eta) in etas.iter().enumerate() {
            let cf = (eta * t).exp();
            writeln!(csv, "{},{id},{},{},{},{}", fmt_f64(t), fmt_f64(eta.re), fmt_f64(eta.im), fmt_f64(cf.re), fmt_f64(cf.im)).unwrap();
        }
    }
    let dir = output_dir(out, &cfg);
    prepare_dir(&dir)?;
    let path = dir.join("cf.csv");
    fs::write(&path, csv).map_err(io_err(&path))?;
    Ok(0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JumpCounts {
    pub total: usize,
    pub large: usize,
    pub small: usize,
    pub per_replica: Vec<usize>,
}

/// Metadata of a simulation run, written as `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationSummary {
    pub sim: SimConfig,
    pub dim: usize,
    pub r: f64,
    /// `∫_{ρ′ <= 2^-K} ρ′(f)² ν(df)`
    pub residual: f64,
    /// Total jump intensity above the truncation level.
    pub jump_rate: f64,
    pub drift: Vec<f64>,
    pub compensators: Vec<Vec<f64>>,
    pub grid: Vec<f64>,
    pub jumps: JumpCounts,
}

/// Simulates every replica and writes `summary.json`, `jumps.csv`
/// (`replica, time, tag, x0, …`) and, when an `export` section is given,
/// `grid.csv` (`replica, t, phi_id, value`). Replicas are generated in
/// parallel and written in order by this thread alone.
pub fn cmd_simulate(config_path: &Path, out: Option<&Path>) -> Result<i32, CliError> {
    let cfg = load_config(config_path)?;
    let exp = cfg.experiment()?;
    let sim_cfg = exp.sim.clone().ok_or_else(|| CliError::Config("missing `sim` section".into()))?;
    let dim = exp.triplet.dim();
    let sim = LevySimulator::new(&exp.triplet, &sim_cfg)?;
    let phis = match &exp.export {
        Some(e) => e.phis.resolve(dim)?,
        None => Vec::new(),
    };
    let grid = sim_cfg.grid();
    let dir = output_dir(out, &cfg);
    prepare_dir(&dir)?;

    let jumps_path = dir.join("jumps.csv");
    let mut jumps_out = BufWriter::new(fs::File::create(&jumps_path).map_err(io_err(&jumps_path))?);
    let header: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
    writeln!(jumps_out, "replica,time,tag,{}", header.join(",")).map_err(io_err(&jumps_path))?;
    let grid_path = dir.join("grid.csv");
    let mut grid_out = if phis.is_empty() {
        None
    } else {
        let mut w = BufWriter::new(fs::File::create(&grid_path).map_err(io_err(&grid_path))?);
        writeln!(w, "replica,t,phi_id,value").map_err(io_err(&grid_path))?;
        Some(w)
    };

    let mut counts = JumpCounts { total: 0, large: 0, small: 0, per_replica: Vec::with_capacity(sim_cfg.replicas) };
    let render = |replica: usize, path: &PathSkeleton| -> (String, String) {
        let mut j = String::new();
        for rec in &path.jumps {
            write!(j, "{replica},{},{}", fmt_f64(rec.time), rec.tag).unwrap();
            for x in rec.mark.coords() {
                write!(j, ",{}", fmt_f64(*x)).unwrap();
            }
            j.push('\n');
        }
        let mut g = String::new();
        for &t in &grid {
            for (id, phi) in phis.iter().enumerate() {
                let v = path.evaluate(t, phi).expect("dimension checked");
                writeln!(g, "{replica},{},{id},{}", fmt_f64(t), fmt_f64(v)).unwrap();
            }
        }
        (j, g)
    };
    for start in (0..sim_cfg.replicas).step_by(CHUNK) {
        let end = (start + CHUNK).min(sim_cfg.replicas);
        let chunk: Vec<(usize, usize, String, String)> = (start..end)
            .into_par_iter()
            .map(|i| {
                let path = sim.path(0, i as u32);
                let large = path.jump_count(|t| t == nuclear_levy::simulate::JumpTag::Large);
                let (j, g) = render(i, &path);
                (path.jumps.len(), large, j, g)
            })
            .collect();
        for (n, large, j, g) in chunk {
            counts.total += n;
            counts.large += large;
            counts.small += n - large;
            counts.per_replica.push(n);
            jumps_out.write_all(j.as_bytes()).map_err(io_err(&jumps_path))?;
            if let Some(w) = grid_out.as_mut() {
                w.write_all(g.as_bytes()).map_err(io_err(&grid_path))?;
            }
        }
    }
    jumps_out.flush().map_err(io_err(&jumps_path))?;
    if let Some(mut w) = grid_out {
        w.flush().map_err(io_err(&grid_path))?;
    }

    let summary = SimulationSummary {
        sim: sim_cfg,
        dim,
        r: exp.triplet.r.0,
        residual: sim.residual(),
        jump_rate: sim.jump_rate(),
        drift: exp.triplet.mean.coords().to_vec(),
        compensators: sim.compensators().iter().map(|c| c.coords().to_vec()).collect(),
        grid,
        jumps: counts,
    };
    write_json(&dir.join("summary.json"), &summary)?;
    Ok(0)
}

fn resolve_phis(spec: &PhiSpec, triplet: &CharTriplet) -> Result<Vec<nuclear_levy::TestFunction>, CliError> {
    spec.resolve(triplet.dim())
}

/// Runs one selector against the experiment's triplet.
pub fn run_test(exp: &Experiment, test: &TestSpec) -> Result<TestReport, CliError> {
    let t3 = &exp.triplet;
    let sim = || exp.sim.as_ref().ok_or_else(|| CliError::Config("missing `sim` section".into()));
    let phi_of = |v: &[f64]| -> Result<nuclear_levy::TestFunction, CliError> {
        PhiSpec::List { values: vec![v.to_vec()] }.resolve(t3.dim()).map(|mut p| p.remove(0))
    };
    let report = match test {
        TestSpec::Ecf { t, phis, exponent_scale } => verify::ecf_test(t3, *t, &resolve_phis(phis, t3)?, sim()?, *exponent_scale)?,
        TestSpec::Moments { t, phis, variance_scale } => verify::moment_tests(t3, *t, &resolve_phis(phis, t3)?, sim()?, *variance_scale)?,
        TestSpec::Independence { phi, psi, pairs, shared_substream } => {
            let family = if *shared_substream { 0 } else { 1 };
            verify::independence_test(t3, pairs, &phi_of(phi)?, &phi_of(psi)?, sim()?, family)?
        }
        TestSpec::Semigroup { s, t, phis, time_scale } => verify::semigroup_test(t3, *s, *t, &resolve_phis(phis, t3)?, sim()?, *time_scale)?,
        TestSpec::Infdiv { n, phis, horizon_scale } => verify::infdiv_test(t3, *n, &resolve_phis(phis, t3)?, sim()?, *horizon_scale)?,
        TestSpec::JumpCount { region, t, rate_scale } => {
            let region = Region::checked(*region, t3.r)?;
            verify::jump_count_test(t3, &region, *t, sim()?, *rate_scale)?
        }
        TestSpec::Factorization { t, phis } => verify::factorization_test(t3, *t, &resolve_phis(phis, t3)?)?,
        TestSpec::Fernique { p, eps, n_list, phis } => {
            verify::fernique_check(t3, SeminormIndex::new(*p)?, *eps, n_list, &resolve_phis(phis, t3)?)?
        }
        TestSpec::Minlos { measure, p, q, eps } => {
            let mu = LevyMeasure::from_spec(measure, t3.dim())?;
            verify::minlos_check(&mu, SeminormIndex::new(*p)?, SeminormIndex::new(*q)?, *eps)?
        }
    };
    Ok(report)
}

/// Runs the configured tests in order and writes `report.json`, a JSON
/// array of reports. Exit status 0 if all pass, 1 on any failure, 2 if
/// some are inconclusive and none fail.
pub fn cmd_verify(config_path: &Path, out: Option<&Path>) -> Result<i32, CliError> {
    let cfg = load_config(config_path)?;
    let exp = cfg.experiment()?;
    let reports = exp.tests.iter().map(|t| run_test(&exp, t)).collect::<Result<Vec<_>, _>>()?;
    let dir = output_dir(out, &cfg);
    prepare_dir(&dir)?;
    write_json(&dir.join("report.json"), &reports)?;
    Ok(verify::exit_code(&reports))
}
