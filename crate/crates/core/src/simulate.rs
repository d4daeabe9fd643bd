//! Path simulation through the Lévy–Itô decomposition
//! `L_t = t𝔪 + W_t + M_t + J_t`.
//!
//! `W` is a mean-zero Wiener process sampled on a time grid, `J` the
//! compound-Poisson sum of jumps with `ρ′ > 1`, and `M` the compensated sum
//! of jumps inside the unit ball, truncated to the dyadic shells
//! `2^{-(k+1)} < ρ′ <= 2^{-k}`, `k < K`. Dropping the jumps below `2^{-K}`
//! costs at most `t·p_r(φ)²·res(K)` in mean square.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::char_func::{CharTriplet, CovarianceForm};
use crate::error::{Error, Result};
use crate::levy_measure::{LevyMeasure, Region, RegionSampler};
use crate::rng::{substream, StreamComponent, StreamKey};
use crate::sequence_space::{dual_norm, pairing_unchecked, DualPoint, SeminormIndex, TestFunction};

pub const MAX_SHELLS: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub horizon: f64,
    pub grid_dt: f64,
    pub shells: usize,
    pub truncation: usize,
    pub master_seed: u64,
    pub replicas: usize,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!("horizon must be > 0, got {}", self.horizon)));
        }
        if !(self.grid_dt > 0.0 && self.grid_dt <= self.horizon) {
            return Err(Error::InvalidParameter(format!("grid_dt must lie in (0, horizon], got {}", self.grid_dt)));
        }
        if self.shells == 0 || self.shells > MAX_SHELLS {
            return Err(Error::InvalidParameter(format!("shell count must lie in 1..={MAX_SHELLS}, got {}", self.shells)));
        }
        if self.truncation == 0 {
            return Err(Error::InvalidParameter("truncation must be >= 1".into()));
        }
        if self.replicas == 0 || self.replicas > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!("replica count out of range: {}", self.replicas)));
        }
        Ok(())
    }

    /// Grid nodes `0 = t_0 < t_1 < … < t_m = T` with step `grid_dt`; the
    /// final cell is shortened when `T` is not a multiple of the step.
    pub fn grid(&self) -> Vec<f64> {
        let ratio = self.horizon / self.grid_dt;
        let cells = ((ratio - 1e-9).ceil() as usize).max(1);
        let mut g: Vec<f64> = (0..cells).map(|i| i as f64 * self.grid_dt).collect();
        g.push(self.horizon);
        g
    }
}

/// Which part of the decomposition a jump belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JumpTag {
    Shell(usize),
    Large,
}

impl fmt::Display for JumpTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JumpTag::Shell(k) => write!(f, "shell:{k}"),
            JumpTag::Large => write!(f, "large"),
        }
    }
}

impl FromStr for JumpTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "large" {
            return Ok(JumpTag::Large);
        }
        s.strip_prefix("shell:")
            .and_then(|k| k.parse().ok())
            .map(JumpTag::Shell)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown jump tag {s:?}")))
    }
}

impl Serialize for JumpTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for JumpTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpRecord {
    pub time: f64,
    pub mark: DualPoint,
    pub tag: JumpTag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathComponent {
    Drift,
    Wiener,
    SmallJumps,
    LargeJumps,
}

/// Gaussian increments of `W` over the grid cells.
#[derive(Debug, Clone, PartialEq)]
pub struct WienerComponent {
    pub increments: Vec<DualPoint>,
}

/// Compensated small-jump part: shell jumps and per-shell compensators.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallJumpComponent {
    pub jumps: Vec<JumpRecord>,
    pub compensators: Vec<DualPoint>,
    pub residual: f64,
}

/// One simulated path of `L` on `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSkeleton {
    pub grid: Vec<f64>,
    pub wiener: Vec<DualPoint>,
    /// All jumps sorted by time.
    pub jumps: Vec<JumpRecord>,
    pub drift: DualPoint,
    pub compensators: Vec<DualPoint>,
    pub residual: f64,
    pub r: SeminormIndex,
}

fn poisson_count<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> u64 {
    if rate <= 0.0 {
        return 0;
    }
    Poisson::new(rate).expect("finite positive rate").sample(rng) as u64
}

/// Sorted uniform jump times on `(0, T]` given a count.
fn jump_times<R: Rng + ?Sized>(count: u64, horizon: f64, rng: &mut R) -> Vec<f64> {
    let mut t: Vec<f64> = (0..count).map(|_| horizon * (1.0 - rng.random::<f64>())).collect();
    t.sort_by(f64::total_cmp);
    t
}

fn compound_poisson<R: Rng + ?Sized>(
    sampler: Option<&RegionSampler>,
    horizon: f64,
    tag: JumpTag,
    rng: &mut R,
) -> Vec<JumpRecord> {
    let Some(sampler) = sampler else { return Vec::new() };
    let count = poisson_count(horizon * sampler.total_mass(), rng);
    let times = jump_times(count, horizon, rng);
    times.into_iter().map(|time| JumpRecord { time, mark: sampler.sample(rng), tag }).collect()
}

fn optional_sampler(levy: &LevyMeasure, region: &Region) -> Result<Option<RegionSampler>> {
    match levy.sampler(region) {
        Ok(s) => Ok(Some(s)),
        Err(Error::EmptyRegion) => Ok(None),
        Err(e) => Err(e),
    }
}

fn wiener_from_factor<R: Rng + ?Sized>(factor: Option<&DMatrix<f64>>, dim: usize, grid: &[f64], rng: &mut R) -> WienerComponent {
    let increments = grid
        .windows(2)
        .map(|w| match factor {
            None => DualPoint::zeros(dim),
            Some(l) => {
                let z = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
                let x = l * z * (w[1] - w[0]).sqrt();
                DualPoint::new(x.iter().copied().collect()).expect("finite Gaussian draw")
            }
        })
        .collect();
    WienerComponent { increments }
}

/// Mean-zero Wiener increments with covariance `Δt·Σ` per grid cell, where
/// `Σ` is the matrix of `𝒬`.
pub fn sample_wiener<R: Rng + ?Sized>(cov: &CovarianceForm, cfg: &SimConfig, rng: &mut R) -> Result<WienerComponent> {
    cfg.validate()?;
    let factor = if cov.is_zero() { None } else { Some(cov.factor()?) };
    Ok(wiener_from_factor(factor.as_ref(), cov.dim(), &cfg.grid(), rng))
}

/// Compound-Poisson jumps of `ν` restricted to `ρ′ > 1` on `(0, T]`.
pub fn sample_large_jumps<R: Rng + ?Sized>(levy: &LevyMeasure, r: SeminormIndex, cfg: &SimConfig, rng: &mut R) -> Result<Vec<JumpRecord>> {
    cfg.validate()?;
    let sampler = optional_sampler(levy, &Region::unit_complement(r))?;
    Ok(compound_poisson(sampler.as_ref(), cfg.horizon, JumpTag::Large, rng))
}

/// Jumps in the `K` dyadic shells of the unit ball with their compensators.
/// All shells draw from the one supplied generator; [`LevySimulator`] gives
/// each shell its own substream instead.
pub fn sample_small_jumps<R: Rng + ?Sized>(levy: &LevyMeasure, r: SeminormIndex, cfg: &SimConfig, rng: &mut R) -> Result<SmallJumpComponent> {
    cfg.validate()?;
    let dec = levy.shell_decomposition(r, cfg.shells)?;
    let mut jumps = Vec::new();
    for shell in &dec.shells {
        let sampler = optional_sampler(levy, &shell.region)?;
        jumps.extend(compound_poisson(sampler.as_ref(), cfg.horizon, JumpTag::Shell(shell.k), rng));
    }
    jumps.sort_by(|a, b| a.time.total_cmp(&b.time));
    Ok(SmallJumpComponent {
        jumps,
        compensators: dec.shells.into_iter().map(|s| s.compensator).collect(),
        residual: dec.residual,
    })
}

/// Precomputed samplers for repeated simulation of one triplet.
#[derive(Debug, Clone)]
pub struct LevySimulator {
    triplet: CharTriplet,
    cfg: SimConfig,
    grid: Vec<f64>,
    factor: Option<DMatrix<f64>>,
    large: Option<RegionSampler>,
    shells: Vec<Option<RegionSampler>>,
    compensators: Vec<DualPoint>,
    residual: f64,
}

impl LevySimulator {
    pub fn new(triplet: &CharTriplet, cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        if cfg.truncation != triplet.dim() {
            return Err(Error::Dimension { expected: cfg.truncation, got: triplet.dim() });
        }
        triplet.validate()?;
        let factor = if triplet.cov.is_zero() { None } else { Some(triplet.cov.factor()?) };
        let large = optional_sampler(&triplet.levy, &Region::unit_complement(triplet.r))?;
        let dec = triplet.levy.shell_decomposition(triplet.r, cfg.shells)?;
        let shells = dec
            .shells
            .iter()
            .map(|s| optional_sampler(&triplet.levy, &s.region))
            .collect::<Result<Vec<_>>>()?;
        let compensators: Vec<DualPoint> = dec.shells.into_iter().map(|s| s.compensator).collect();
        Ok(Self {
            triplet: triplet.clone(),
            cfg: cfg.clone(),
            grid: cfg.grid(),
            factor,
            large,
            shells,
            compensators,
            residual: dec.residual,
        })
    }

    pub fn triplet(&self) -> &CharTriplet {
        &self.triplet
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    /// `res(K) = ∫_{ρ′ <= 2^{-K}} ρ′(f)² ν(df)`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn compensators(&self) -> &[DualPoint] {
        &self.compensators
    }

    /// Mean number of recorded jumps per unit time.
    pub fn jump_rate(&self) -> f64 {
        self.large.as_ref().map_or(0.0, |s| s.total_mass()) + self.shells.iter().flatten().map(|s| s.total_mass()).sum::<f64>()
    }

    fn key(&self, family: u8, replica: u32, component: StreamComponent, shell: u16) -> StreamKey {
        StreamKey::new(family, replica, component, shell)
    }

    pub fn wiener(&self, family: u8, replica: u32) -> WienerComponent {
        let mut rng = substream(self.cfg.master_seed, self.key(family, replica, StreamComponent::Wiener, 0));
        wiener_from_factor(self.factor.as_ref(), self.triplet.dim(), &self.grid, &mut rng)
    }

    pub fn large_jumps(&self, family: u8, replica: u32) -> Vec<JumpRecord> {
        let mut rng = substream(self.cfg.master_seed, self.key(family, replica, StreamComponent::LargeJumps, 0));
        compound_poisson(self.large.as_ref(), self.cfg.horizon, JumpTag::Large, &mut rng)
    }

    pub fn small_jumps(&self, family: u8, replica: u32) -> Vec<JumpRecord> {
        let mut out = Vec::new();
        for (k, sampler) in self.shells.iter().enumerate() {
            let mut rng = substream(self.cfg.master_seed, self.key(family, replica, StreamComponent::SmallJumps, k as u16));
            out.extend(compound_poisson(sampler.as_ref(), self.cfg.horizon, JumpTag::Shell(k), &mut rng));
        }
        out
    }

    /// Simulates replica `replica` of experiment `family`. Each component
    /// (and each shell) draws from its own substream.
    pub fn path(&self, family: u8, replica: u32) -> PathSkeleton {
        let wiener = self.wiener(family, replica);
        let mut jumps = self.small_jumps(family, replica);
        jumps.extend(self.large_jumps(family, replica));
        jumps.sort_by(|a, b| a.time.total_cmp(&b.time));
        PathSkeleton {
            grid: self.grid.clone(),
            wiener: wiener.increments,
            jumps,
            drift: self.triplet.mean.clone(),
            compensators: self.compensators.clone(),
            residual: self.residual,
            r: self.triplet.r,
        }
    }

    /// Values of every component at grid-node or off-grid time `t` along one
    /// path, for each test function in `phis`.
    pub fn component_values(&self, path: &PathSkeleton, t: f64, phis: &[TestFunction]) -> Result<Vec<ComponentValues>> {
        phis.iter().map(|phi| path.components_at(t, phi)).collect()
    }
}

/// `L_t = t𝔪 + W_t + M_t + J_t` for one replica, with independent
/// substreams derived from `cfg.master_seed`.
pub fn assemble_levy(triplet: &CharTriplet, cfg: &SimConfig, family: u8, replica: u32) -> Result<PathSkeleton> {
    Ok(LevySimulator::new(triplet, cfg)?.path(family, replica))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentValues {
    pub drift: f64,
    pub wiener: f64,
    pub small: f64,
    pub large: f64,
}

impl ComponentValues {
    pub fn total(&self) -> f64 {
        self.drift + self.wiener + self.small + self.large
    }

    pub fn get(&self, c: PathComponent) -> f64 {
        match c {
            PathComponent::Drift => self.drift,
            PathComponent::Wiener => self.wiener,
            PathComponent::SmallJumps => self.small,
            PathComponent::LargeJumps => self.large,
        }
    }
}

impl PathSkeleton {
    pub fn horizon(&self) -> f64 {
        *self.grid.last().expect("non-empty grid")
    }

    pub fn dim(&self) -> usize {
        self.drift.dim()
    }

    fn check(&self, t: f64, phi: &TestFunction) -> Result<()> {
        if phi.dim() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: phi.dim() });
        }
        if !(t >= 0.0 && t <= self.horizon()) {
            return Err(Error::Domain(format!("time {t} outside [0, {}]", self.horizon())));
        }
        Ok(())
    }

    fn wiener_at(&self, t: f64, phi: &[f64]) -> f64 {
        let cells = self.wiener.len();
        // nodes are snapped so that e.g. t = 0.3 on a 0.1 grid hits node 3
        let j = self.grid.partition_point(|&g| g <= t);
        let mut acc = 0.0;
        let full = j.saturating_sub(1).min(cells);
        for inc in &self.wiener[..full] {
            acc += pairing_unchecked(inc.coords(), phi);
        }
        if full < cells {
            let (a, b) = (self.grid[full], self.grid[full + 1]);
            let tol = 1e-9 * (b - a);
            let frac = if t - a <= tol {
                0.0
            } else if b - t <= tol {
                1.0
            } else {
                (t - a) / (b - a)
            };
            if frac > 0.0 {
                acc += frac * pairing_unchecked(self.wiener[full].coords(), phi);
            }
        }
        acc
    }

    fn jumps_at(&self, t: f64, phi: &[f64], include_t: bool) -> (f64, f64) {
        let mut small = 0.0;
        let mut large = 0.0;
        for j in &self.jumps {
            if j.time > t || (!include_t && j.time == t) {
                break;
            }
            let v = pairing_unchecked(j.mark.coords(), phi);
            match j.tag {
                JumpTag::Large => large += v,
                JumpTag::Shell(_) => small += v,
            }
        }
        (small, large)
    }

    fn compensation(&self, t: f64, phi: &[f64]) -> f64 {
        t * self.compensators.iter().map(|b| pairing_unchecked(b.coords(), phi)).sum::<f64>()
    }

    pub fn components_at(&self, t: f64, phi: &TestFunction) -> Result<ComponentValues> {
        self.check(t, phi)?;
        let p = phi.coords();
        let (small, large) = self.jumps_at(t, p, true);
        Ok(ComponentValues {
            drift: t * pairing_unchecked(self.drift.coords(), p),
            wiener: self.wiener_at(t, p),
            small: small - self.compensation(t, p),
            large,
        })
    }

    pub fn evaluate_component(&self, component: PathComponent, t: f64, phi: &TestFunction) -> Result<f64> {
        Ok(self.components_at(t, phi)?.get(component))
    }

    /// `L_t[φ]`, right-continuous in `t`.
    pub fn evaluate(&self, t: f64, phi: &TestFunction) -> Result<f64> {
        Ok(self.components_at(t, phi)?.total())
    }

    /// Left limit `L_{t−}[φ]`.
    pub fn evaluate_left(&self, t: f64, phi: &TestFunction) -> Result<f64> {
        self.check(t, phi)?;
        let p = phi.coords();
        let (small, large) = self.jumps_at(t, p, false);
        Ok(t * pairing_unchecked(self.drift.coords(), p) + self.wiener_at(t, p) + small - self.compensation(t, p) + large)
    }

    /// `N(t, A) = #{s <= t : ΔL_s ∈ A}` over recorded jumps.
    pub fn count_jumps(&self, region: &Region, t: f64) -> Result<usize> {
        if !region.is_bounded_below() {
            return Err(Error::NotBoundedBelow);
        }
        if !(t >= 0.0 && t <= self.horizon()) {
            return Err(Error::Domain(format!("time {t} outside [0, {}]", self.horizon())));
        }
        Ok(self
            .jumps
            .iter()
            .take_while(|j| j.time <= t)
            .filter(|j| region.contains_radius(dual_norm(&j.mark, region.r)))
            .count())
    }

    pub fn jump_count(&self, tag: impl Fn(JumpTag) -> bool) -> usize {
        self.jumps.iter().filter(|j| tag(j.tag)).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char_func::TripletSpec;
    use crate::levy_measure::{AtomSpec, AxisSpec, LevyMeasureSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(d: usize, n: usize) -> SimConfig {
        SimConfig { horizon: 1.0, grid_dt: 0.1, shells: 6, truncation: d, master_seed: 17, replicas: n }
    }

    fn triplet(mean: &[f64], cov_diag: &[f64], levy: LevyMeasureSpec, r: f64) -> CharTriplet {
        let d = mean.len();
        let cov = (0..d).map(|i| (0..d).map(|j| if i == j { cov_diag[i] } else { 0.0 }).collect()).collect();
        CharTriplet::from_spec(&TripletSpec { mean: mean.to_vec(), cov, levy, r }).unwrap()
    }

    fn mixed() -> CharTriplet {
        triplet(
            &[0.5, -1.0],
            &[1.0, 0.25],
            LevyMeasureSpec {
                atoms: vec![AtomSpec { point: vec![1.5, 0.5], mass: 2.0 }, AtomSpec { point: vec![0.3, 0.0], mass: 1.0 }],
                axes: vec![AxisSpec::Power { n: 1, c: 1.0, alpha: 0.8, xmax: 3.0 }],
            },
            0.0,
        )
    }

    fn mean_se(xs: &[f64]) -> (f64, f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        (m, v, (v / n).sqrt())
    }

    #[test]
    fn config_validation() {
        let mut c = cfg(2, 1);
        assert!(c.validate().is_ok());
        c.grid_dt = 2.0;
        assert!(c.validate().is_err());
        let c = SimConfig { shells: 0, ..cfg(2, 1) };
        assert!(c.validate().is_err());
        let c = SimConfig { horizon: 0.0, ..cfg(2, 1) };
        assert!(c.validate().is_err());
        let g = SimConfig { horizon: 1.0, grid_dt: 0.3, ..cfg(2, 1) }.grid();
        assert_eq!(g.len(), 5);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert_eq!(cfg(1, 1).grid().len(), 11);
    }

    #[test]
    fn zero_wiener_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = sample_wiener(&CovarianceForm::zeros(3), &cfg(3, 1), &mut rng).unwrap();
        assert_eq!(w.increments.len(), 10);
        assert!(w.increments.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn wiener_variance_and_covariance() {
        let t = triplet(&[0.0], &[1.0], LevyMeasureSpec::default(), 0.0);
        let n = 100_000;
        let sim = LevySimulator::new(&t, &cfg(1, n)).unwrap();
        let phi = TestFunction::new(vec![1.0]).unwrap();
        let mut w1 = Vec::with_capacity(n);
        let mut prod = Vec::with_capacity(n);
        for i in 0..n {
            let p = sim.path(0, i as u32);
            let a = p.evaluate_component(PathComponent::Wiener, 0.3, &phi).unwrap();
            let b = p.evaluate_component(PathComponent::Wiener, 1.0, &phi).unwrap();
            w1.push(b);
            prod.push(a * b);
        }
        let (m, v, _) = mean_se(&w1);
        // Var of sample variance for N(0,1) is 2/(n-1)
        let se_v = (2.0 / (n as f64 - 1.0)).sqrt();
        assert!(m.abs() <= 4.0 / (n as f64).sqrt());
        assert!((v - 1.0).abs() <= 4.0 * se_v, "var {v}");
        let (c, _, se) = mean_se(&prod);
        assert!((c - 0.3).abs() <= 4.0 * se, "cov {c}");
    }

    #[test]
    fn large_jump_counts() {
        let empty = LevyMeasure::from_spec(
            &LevyMeasureSpec { atoms: vec![AtomSpec { point: vec![0.5], mass: 1.0 }], axes: vec![] },
            1,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(sample_large_jumps(&empty, SeminormIndex(0.0), &cfg(1, 1), &mut rng).unwrap().is_empty());

        let tail = LevyMeasure::from_spec(
            &LevyMeasureSpec { atoms: vec![AtomSpec { point: vec![1.5, 2.0], mass: 2.0 }], axes: vec![] },
            2,
        )
        .unwrap();
        let n = 20_000;
        let mut total = 0usize;
        for _ in 0..n {
            let jumps = sample_large_jumps(&tail, SeminormIndex(0.0), &cfg(2, n), &mut rng).unwrap();
            assert!(jumps.iter().all(|j| dual_norm(&j.mark, SeminormIndex(0.0)) > 1.0));
            assert!(jumps.windows(2).all(|w| w[0].time <= w[1].time));
            assert!(jumps.iter().all(|j| j.time > 0.0 && j.time <= 1.0));
            total += jumps.len();
        }
        let mean = total as f64 / n as f64;
        assert!((mean - 2.0).abs() <= 4.0 * (2.0 / n as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn small_jumps_compensated() {
        let nothing = LevyMeasure::from_spec(
            &LevyMeasureSpec { atoms: vec![AtomSpec { point: vec![3.0], mass: 1.0 }], axes: vec![] },
            1,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = sample_small_jumps(&nothing, SeminormIndex(0.0), &cfg(1, 1), &mut rng).unwrap();
        assert!(c.jumps.is_empty());
        assert!(c.compensators.iter().all(|b| b.is_zero()));

        // single in-ball atom: zero mean, variance = t·c·g[φ]²
        let t = triplet(&[0.0], &[0.0], LevyMeasureSpec { atoms: vec![AtomSpec { point: vec![0.6], mass: 3.0 }], axes: vec![] }, 0.0);
        let n = 50_000;
        let sim = LevySimulator::new(&t, &cfg(1, n)).unwrap();
        let phi = TestFunction::new(vec![2.0]).unwrap();
        let xs: Vec<f64> = (0..n as u32)
            .map(|i| sim.path(0, i).evaluate_component(PathComponent::SmallJumps, 1.0, &phi).unwrap())
            .collect();
        let (m, v, se) = mean_se(&xs);
        assert!(m.abs() <= 4.0 * se, "mean {m}");
        let theory = 3.0 * 1.2 * 1.2;
        let m4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n as f64;
        let se_v = ((m4 - v * v) / n as f64).sqrt();
        assert!((v - theory).abs() <= 4.0 * se_v, "var {v} vs {theory}");
    }

    #[test]
    fn zero_and_drift_paths() {
        let z = CharTriplet::zero(3);
        let p = assemble_levy(&z, &cfg(3, 1), 0, 0).unwrap();
        let phi = TestFunction::new(vec![1.0, -2.0, 0.5]).unwrap();
        for t in [0.0, 0.25, 1.0] {
            assert_eq!(p.evaluate(t, &phi).unwrap(), 0.0);
        }
        let d = triplet(&[0.5, 1.0, -1.0], &[0.0; 3], LevyMeasureSpec::default(), 0.0);
        let p = assemble_levy(&d, &cfg(3, 1), 0, 0).unwrap();
        let m = 0.5 - 2.0 - 0.5;
        for t in [0.0, 0.3, 0.77, 1.0] {
            assert_eq!(p.evaluate(t, &phi).unwrap(), t * m);
        }
        assert!(matches!(p.evaluate(1.5, &phi), Err(Error::Domain(_))));
        assert!(matches!(p.evaluate(-0.1, &phi), Err(Error::Domain(_))));
    }

    #[test]
    fn cadlag_and_linear() {
        let t = mixed();
        let sim = LevySimulator::new(&t, &cfg(2, 1)).unwrap();
        let phi = TestFunction::new(vec![0.7, -0.3]).unwrap();
        let psi = TestFunction::new(vec![-1.1, 2.0]).unwrap();
        let mut checked = 0;
        for rep in 0..20 {
            let p = sim.path(0, rep);
            assert_eq!(p.evaluate(0.0, &phi).unwrap(), 0.0);
            for j in &p.jumps {
                let jump = p.evaluate(j.time, &phi).unwrap() - p.evaluate_left(j.time, &phi).unwrap();
                let expect = pairing_unchecked(j.mark.coords(), phi.coords());
                assert!((jump - expect).abs() <= 1e-9, "{jump} vs {expect}");
                checked += 1;
                match j.tag {
                    JumpTag::Large => assert!(dual_norm(&j.mark, t.r) > 1.0),
                    JumpTag::Shell(k) => {
                        let rho = dual_norm(&j.mark, t.r);
                        assert!(rho <= 0.5f64.powi(k as i32) && rho > 0.5f64.powi(k as i32 + 1));
                    }
                }
            }
            for time in [0.1, 0.35, 0.9] {
                let a = p.evaluate(time, &phi).unwrap();
                let b = p.evaluate(time, &psi).unwrap();
                let combo = TestFunction::new(vec![2.0 * 0.7 - 3.0 * -1.1, 2.0 * -0.3 - 3.0 * 2.0]).unwrap();
                let c = p.evaluate(time, &combo).unwrap();
                assert!((c - (2.0 * a - 3.0 * b)).abs() <= 1e-12 * (1.0 + c.abs()));
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn count_jumps_contract() {
        let t = mixed();
        let sim = LevySimulator::new(&t, &cfg(2, 1)).unwrap();
        let ball = Region::unit_ball(t.r);
        let a = Region::shell(0.25, 1.0, t.r).unwrap();
        let b = Region::complement(1.0, t.r).unwrap();
        let ab = Region::complement(0.25, t.r).unwrap();
        for rep in 0..50 {
            let p = sim.path(0, rep);
            assert!(matches!(p.count_jumps(&ball, 1.0), Err(Error::NotBoundedBelow)));
            let mut prev = 0;
            for time in [0.0, 0.2, 0.5, 1.0] {
                let n = p.count_jumps(&ab, time).unwrap();
                assert!(n >= prev);
                prev = n;
                assert_eq!(n, p.count_jumps(&a, time).unwrap() + p.count_jumps(&b, time).unwrap());
            }
        }
        let empty = assemble_levy(&CharTriplet::zero(2), &cfg(2, 1), 0, 0).unwrap();
        assert_eq!(empty.count_jumps(&b, 1.0).unwrap(), 0);
    }

    #[test]
    fn mean_count_matches_intensity() {
        let t = mixed();
        let n = 20_000;
        let sim = LevySimulator::new(&t, &cfg(2, n)).unwrap();
        let region = Region::shell(0.25, 2.0, t.r).unwrap();
        let rate = t.levy.region_mass(&region).unwrap();
        let counts: Vec<f64> = (0..n as u32).map(|i| sim.path(0, i).count_jumps(&region, 0.5).unwrap() as f64).collect();
        let (m, _, _) = mean_se(&counts);
        let se = (0.5 * rate / n as f64).sqrt();
        assert!((m - 0.5 * rate).abs() <= 4.0 * se, "{m} vs {}", 0.5 * rate);
    }

    #[test]
    fn reproducible_paths() {
        let t = mixed();
        let sim = LevySimulator::new(&t, &cfg(2, 1)).unwrap();
        assert_eq!(sim.path(0, 5), sim.path(0, 5));
        assert_ne!(sim.path(0, 5), sim.path(0, 6));
        assert_ne!(sim.path(0, 5), sim.path(1, 5));
        let other = LevySimulator::new(&t, &SimConfig { master_seed: 18, ..cfg(2, 1) }).unwrap();
        assert_ne!(sim.path(0, 5), other.path(0, 5));
    }

    #[test]
    fn truncation_mismatch() {
        assert!(matches!(LevySimulator::new(&mixed(), &cfg(3, 1)), Err(Error::Dimension { .. })));
    }

    #[test]
    fn tags_round_trip() {
        for tag in [JumpTag::Large, JumpTag::Shell(0), JumpTag::Shell(11)] {
            assert_eq!(tag.to_string().parse::<JumpTag>().unwrap(), tag);
        }
        assert!("shell:x".parse::<JumpTag>().is_err());
    }
}
