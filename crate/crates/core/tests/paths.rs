use nuclear_levy::levy_measure::{AtomSpec, AxisSpec, Region};
use nuclear_levy::sequence_space::dual_norm;
use nuclear_levy::simulate::JumpTag;
use nuclear_levy::stats::{correlation, ks_two_sample, Summary};
use nuclear_levy::{CharTriplet, LevyMeasureSpec, LevySimulator, SeminormIndex, SimConfig, TestFunction, TripletSpec};
use rayon::prelude::*;

fn triplet(levy: LevyMeasureSpec, r: f64) -> CharTriplet {
    let cov = vec![vec![0.8, 0.1, 0.0], vec![0.1, 0.4, 0.0], vec![0.0, 0.0, 0.2]];
    CharTriplet::from_spec(&TripletSpec { mean: vec![0.2, -0.1, 0.0], cov, levy, r }).unwrap()
}

fn mixed(r: f64) -> CharTriplet {
    triplet(
        LevyMeasureSpec {
            atoms: vec![AtomSpec { point: vec![1.0, 0.8, -0.5], mass: 1.2 }, AtomSpec { point: vec![0.0, 0.3, 0.0], mass: 0.7 }],
            axes: vec![
                AxisSpec::Power { n: 0, c: 0.8, alpha: 0.9, xmax: 2.5 },
                AxisSpec::Atoms { n: 2, atoms: vec![[-0.4, 0.5], [3.0, 0.2]] },
            ],
        },
        r,
    )
}

/// Grid step 0.05, so every time used below is a grid node.
fn cfg(horizon: f64, shells: usize, replicas: usize, seed: u64) -> SimConfig {
    SimConfig { horizon, grid_dt: 0.05f64.min(horizon), shells, truncation: 3, master_seed: seed, replicas }
}

fn phi(v: [f64; 3]) -> TestFunction {
    TestFunction::new(v.to_vec()).unwrap()
}

#[test]
fn jumps_stay_in_their_shells() {
    for r in [0.0, 0.7] {
        let t = mixed(r);
        let sim = LevySimulator::new(&t, &cfg(1.0, 8, 200, 5)).unwrap();
        let idx = SeminormIndex(r);
        let mut seen = (0, 0);
        for i in 0..200 {
            for j in sim.path(0, i).jumps {
                let rho = dual_norm(&j.mark, idx);
                match j.tag {
                    JumpTag::Large => {
                        assert!(rho > 1.0, "large jump with rho' = {rho}");
                        seen.0 += 1;
                    }
                    JumpTag::Shell(k) => {
                        assert!(Region::dyadic_shell(k, idx).contains_radius(rho), "shell {k} jump with rho' = {rho}");
                        assert!(rho <= 1.0);
                        seen.1 += 1;
                    }
                }
            }
        }
        assert!(seen.0 > 0 && seen.1 > 0);
    }
}

#[test]
fn jumps_of_the_path_are_its_records() {
    let t = mixed(0.0);
    let sim = LevySimulator::new(&t, &cfg(1.0, 6, 1, 11)).unwrap();
    let path = sim.path(0, 0);
    let f = phi([0.7, -1.1, 0.4]);
    assert!(!path.jumps.is_empty());
    for j in &path.jumps {
        let delta = path.evaluate(j.time, &f).unwrap() - path.evaluate_left(j.time, &f).unwrap();
        let expected: f64 = j.mark.coords().iter().zip(f.coords()).map(|(a, b)| a * b).sum();
        assert!((delta - expected).abs() < 1e-9, "{delta} vs {expected}");
    }
    assert_eq!(path.evaluate(0.0, &f).unwrap(), 0.0);
}

fn values_at(sim: &LevySimulator, family: u8, times: &[f64], f: &TestFunction) -> Vec<Vec<f64>> {
    (0..sim.config().replicas as u32)
        .into_par_iter()
        .map(|i| {
            let p = sim.path(family, i);
            times.iter().map(|&t| p.evaluate(t, f).unwrap()).collect()
        })
        .collect()
}

#[test]
fn increments_are_stationary() {
    let t = mixed(0.0);
    let n = 100_000;
    let cases = [(0.25, 0.5, [1.0, 0.0, 0.0]), (0.5, 0.5, [0.3, -0.8, 0.5]), (0.1, 0.9, [-1.2, 0.4, 2.0])];
    for (start, delta, v) in cases {
        let f = phi(v);
        let long = LevySimulator::new(&t, &cfg(1.0, 8, n, 17)).unwrap();
        let short = LevySimulator::new(&t, &cfg(delta, 8, n, 17)).unwrap();
        let incr: Vec<f64> = values_at(&long, 0, &[start, start + delta], &f).iter().map(|x| x[1] - x[0]).collect();
        let direct: Vec<f64> = values_at(&short, 1, &[delta], &f).iter().map(|x| x[0]).collect();
        let ks = ks_two_sample(&incr, &direct, 0.01);
        assert!(ks.p_value >= 0.01, "t = {start}, delta = {delta}: {ks:?}");
    }
}

#[test]
fn increments_are_uncorrelated() {
    let t = mixed(0.0);
    let n = 100_000;
    let sim = LevySimulator::new(&t, &cfg(1.0, 8, n, 23)).unwrap();
    for (s, v) in [(0.3, [1.0, 0.5, 0.0]), (0.5, [0.0, 0.0, 1.0])] {
        let f = phi(v);
        let vals = values_at(&sim, 0, &[s, 1.0], &f);
        let first: Vec<f64> = vals.iter().map(|x| x[0]).collect();
        let incr: Vec<f64> = vals.iter().map(|x| x[1] - x[0]).collect();
        let c = correlation(&first, &incr).unwrap();
        assert!(c.abs() <= 4.0 / (n as f64).sqrt(), "s = {s}: corr {c}");
    }
}

#[test]
fn truncation_gap_follows_the_residual() {
    // heavy small-jump activity: ∫ x² ν(dx) over (0, h] is 2c·h^{1/2}
    let c = 2.0;
    let t = triplet(LevyMeasureSpec { atoms: vec![], axes: vec![AxisSpec::Power { n: 0, c, alpha: 1.5, xmax: 1.0 }] }, 0.0);
    let f = phi([1.0, 0.0, 0.0]);
    let n = 5000;
    let full = 2.0 * c;
    let mut gaps = Vec::new();
    for k in [1usize, 2, 4, 6] {
        let sim = LevySimulator::new(&t, &cfg(1.0, k, n, 31)).unwrap();
        let small: Vec<f64> = (0..n as u32).into_par_iter().map(|i| sim.path(0, i).components_at(1.0, &f).unwrap().small).collect();
        let s = Summary::of(&small);
        let gap = 2.0 * c * 0.5f64.powi(k as i32).sqrt();
        assert!((s.variance - (full - gap)).abs() <= 4.0 * s.variance_se(), "K = {k}: var {} vs {}", s.variance, full - gap);
        assert!((s.mean).abs() <= 4.0 * s.mean_se());
        gaps.push(full - s.variance);
    }
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn wiener_part_has_covariance_t_sigma() {
    let t = mixed(0.0);
    let n = 50_000;
    let sim = LevySimulator::new(&t, &cfg(1.0, 4, n, 41)).unwrap();
    let (f, g) = (phi([1.0, 0.0, 0.0]), phi([0.0, 1.0, 0.0]));
    let pairs: Vec<(f64, f64, f64)> = (0..n as u32)
        .into_par_iter()
        .map(|i| {
            let p = sim.path(0, i);
            let a = p.components_at(0.6, &f).unwrap().wiener;
            let b = p.components_at(0.6, &g).unwrap().wiener;
            let a1 = p.components_at(1.0, &f).unwrap().wiener;
            (a, b, a1)
        })
        .collect();
    let cov_ab: f64 = pairs.iter().map(|x| x.0 * x.1).sum::<f64>() / n as f64;
    let cov_st: f64 = pairs.iter().map(|x| x.0 * x.2).sum::<f64>() / n as f64;
    // E W_s[φ]W_s[ψ] = s·𝒬(φ,ψ) and E W_s[φ]W_t[φ] = (s ∧ t)·𝒬(φ,φ)
    assert!((cov_ab - 0.6 * 0.1).abs() < 4.0 * (0.6 * 0.6 * (0.8 * 0.4 + 0.01) / n as f64).sqrt());
    assert!((cov_st - 0.6 * 0.8).abs() < 4.0 * (0.6 * 0.8 * 1.0 * 0.8 * 2.0 / n as f64).sqrt());
}
