use std::path::PathBuf;

use nuclear_levy::levy_measure::RegionKind;
use nuclear_levy::stats::halton;
use nuclear_levy::verify::IndepComponent;
use nuclear_levy::{CharTriplet, LevyMeasureSpec, SimConfig, TestFunction, TripletSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// One experiment, as read from a JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub triplet: TripletSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimConfig>,
    #[serde(default)]
    pub tests: Vec<TestSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cf: Option<CfGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub export: Option<ExportSpec>,
}

/// Test functions, either listed or drawn from a Halton sequence with
/// coordinates uniform in `[-scale, scale)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiSpec {
    List { values: Vec<Vec<f64>> },
    Halton { count: usize, scale: f64 },
}

impl PhiSpec {
    pub fn resolve(&self, dim: usize) -> Result<Vec<TestFunction>, CliError> {
        let raw: Vec<Vec<f64>> = match self {
            PhiSpec::List { values } => values.clone(),
            PhiSpec::Halton { count, scale } => {
                (0..*count as u64).map(|i| halton(i, dim).into_iter().map(|u| scale * (2.0 * u - 1.0)).collect()).collect()
            }
        };
        raw.into_iter()
            .map(|v| {
                if v.len() != dim {
                    return Err(CliError::Config(format!("test function has {} coordinates, expected {dim}", v.len())));
                }
                Ok(TestFunction::new(v)?)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfGrid {
    pub phis: PhiSpec,
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportSpec {
    pub phis: PhiSpec,
}

fn one() -> f64 {
    1.0
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

fn standard_pairs() -> Vec<(IndepComponent, IndepComponent)> {
    use IndepComponent::*;
    vec![(Wiener, Small), (Wiener, Large), (Small, Large), (WithoutLarge, Large), (Wiener, CopyWiener), (Large, CopyLarge)]
}

/// A test selector. The `*_scale` fields default to 1 (the true law);
/// other values turn the test into a negative control.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "test", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestSpec {
    Ecf {
        t: f64,
        phis: PhiSpec,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        exponent_scale: f64,
    },
    Moments {
        t: f64,
        phis: PhiSpec,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        variance_scale: f64,
    },
    Independence {
        phi: Vec<f64>,
        psi: Vec<f64>,
        #[serde(default = "standard_pairs")]
        pairs: Vec<(IndepComponent, IndepComponent)>,
        #[serde(default)]
        shared_substream: bool,
    },
    Semigroup {
        s: f64,
        t: f64,
        phis: PhiSpec,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        time_scale: f64,
    },
    Infdiv {
        n: u32,
        phis: PhiSpec,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        horizon_scale: f64,
    },
    JumpCount {
        region: RegionKind,
        t: f64,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        rate_scale: f64,
    },
    Factorization {
        t: f64,
        phis: PhiSpec,
    },
    Fernique {
        p: f64,
        eps: f64,
        n_list: Vec<u32>,
        phis: PhiSpec,
    },
    Minlos {
        measure: LevyMeasureSpec,
        p: f64,
        q: f64,
        eps: f64,
    },
}

impl TestSpec {
    pub fn needs_simulation(&self) -> bool {
        !matches!(self, TestSpec::Factorization { .. } | TestSpec::Fernique { .. } | TestSpec::Minlos { .. })
    }
}

/// A parsed configuration with its triplet and simulation settings
/// checked.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub triplet: CharTriplet,
    pub sim: Option<SimConfig>,
    pub tests: Vec<TestSpec>,
    pub output_dir: Option<PathBuf>,
    pub cf: Option<CfGrid>,
    pub export: Option<ExportSpec>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn experiment(&self) -> Result<Experiment, CliError> {
        let triplet = CharTriplet::from_spec(&self.triplet)?;
        if let Some(sim) = &self.sim {
            sim.validate()?;
            if sim.truncation != triplet.dim() {
                return Err(CliError::Config(format!(
                    "sim.truncation = {} but the triplet has dimension {}",
                    sim.truncation,
                    triplet.dim()
                )));
            }
        }
        if self.sim.is_none() && self.tests.iter().any(TestSpec::needs_simulation) {
            return Err(CliError::Config("statistical tests need a `sim` section".into()));
        }
        Ok(Experiment {
            triplet,
            sim: self.sim.clone(),
            tests: self.tests.clone(),
            output_dir: self.output_dir.clone(),
            cf: self.cf.clone(),
            export: self.export.clone(),
        })
    }
}

impl Experiment {
    pub fn to_config(&self) -> RunConfig {
        RunConfig {
            triplet: self.triplet.to_spec(),
            sim: self.sim.clone(),
            tests: self.tests.clone(),
            output_dir: self.output_dir.clone(),
            cf: self.cf.clone(),
            export: self.export.clone(),
        }
    }
}
