//! Shared fixtures for the benchmarks.

use nuclear_levy::levy_measure::{AtomSpec, AxisSpec};
use nuclear_levy::{CharTriplet, LevyMeasureSpec, SimConfig, TestFunction, TripletSpec};

/// Drift `e₀`, covariance `diag((1+n)^-2)`, a power law of index 1/2 on
/// axis 0 and one atom outside the unit ball.
pub fn reference_triplet(dim: usize) -> CharTriplet {
    let mut mean = vec![0.0; dim];
    mean[0] = 1.0;
    let cov = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { ((1 + i) as f64).powi(-2) } else { 0.0 }).collect())
        .collect();
    let mut point = vec![0.0; dim];
    point[0] = 0.5;
    point[1 % dim] = 1.5;
    let levy = LevyMeasureSpec {
        atoms: vec![AtomSpec { point, mass: 2.0 }],
        axes: vec![AxisSpec::Power { n: 0, c: 1.0, alpha: 0.5, xmax: 1.0 }],
    };
    CharTriplet::from_spec(&TripletSpec { mean, cov, levy, r: 0.0 }).expect("reference triplet is valid")
}

pub fn sim_config(dim: usize, shells: usize, replicas: usize) -> SimConfig {
    SimConfig { horizon: 1.0, grid_dt: 0.1, shells, truncation: dim, master_seed: 7, replicas }
}

pub fn test_function(dim: usize) -> TestFunction {
    TestFunction::new((0..dim).map(|i| 1.0 / (1 + i) as f64).collect()).expect("finite")
}
