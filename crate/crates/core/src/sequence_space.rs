//! Weighted sequence model of a nuclear space and its dual.
//!
//! Elements of the space are truncated coefficient vectors of length `D`.
//! The Hilbertian seminorm of index `r` is
//! `p_r(φ)² = Σ_{n<D} (1+n)^{2r} φ_n²`; its dual norm on the coordinate dual
//! uses the reciprocal weights. The canonical inclusion `Φ_{p_s} → Φ_{p_r}` is
//! diagonal with entries `(1+n)^{r-s}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weight `(1+n)^r` of coordinate `n` for seminorm index `r`.
#[inline]
pub fn weight(n: usize, r: f64) -> f64 {
    (1.0 + n as f64).powf(r)
}

fn check_finite(coords: &[f64]) -> Result<()> {
    if coords.is_empty() {
        return Err(Error::InvalidParameter("vector must have length >= 1".into()));
    }
    if let Some(i) = coords.iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("coordinate {i} is not finite")));
    }
    Ok(())
}

/// A test function: truncated Hermite-coefficient vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TestFunction(Vec<f64>);

impl TestFunction {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_finite(&coords)?;
        Ok(Self(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim.max(1)])
    }

    /// Unit coordinate vector `e_n` in dimension `dim`.
    pub fn basis(dim: usize, n: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[n] = 1.0;
        Self(v)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self(self.0.iter().map(|x| a * x).collect())
    }

    pub fn neg(&self) -> Self {
        self.scaled(-1.0)
    }
}

/// A point of the truncated dual, acting on test functions by the
/// coordinate pairing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DualPoint(Vec<f64>);

impl DualPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_finite(&coords)?;
        Ok(Self(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim.max(1)])
    }

    pub fn basis(dim: usize, n: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[n] = 1.0;
        Self(v)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self(self.0.iter().map(|x| a * x).collect())
    }

    /// `self += a * other`, coordinatewise.
    pub fn axpy(&mut self, a: f64, other: &DualPoint) {
        for (x, y) in self.0.iter_mut().zip(&other.0) {
            *x += a * y;
        }
    }
}

/// Index `r` of the seminorm `p_r`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeminormIndex(pub f64);

impl SeminormIndex {
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() {
            return Err(Error::InvalidParameter(format!("seminorm index {r} is not finite")));
        }
        Ok(Self(r))
    }

    /// Index usable as the reference seminorm ρ, which must be nonnegative.
    pub fn reference(r: f64) -> Result<Self> {
        let idx = Self::new(r)?;
        if r < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "reference seminorm index must be >= 0, got {r}"
            )));
        }
        Ok(idx)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn seminorm(phi: &TestFunction, r: SeminormIndex) -> f64 {
    phi.0
        .iter()
        .enumerate()
        .map(|(n, x)| {
            let w = weight(n, r.0);
            (w * x) * (w * x)
        })
        .sum::<f64>()
        .sqrt()
}

pub fn dual_norm(f: &DualPoint, r: SeminormIndex) -> f64 {
    dual_norm_coords(&f.0, r)
}

pub(crate) fn dual_norm_coords(f: &[f64], r: SeminormIndex) -> f64 {
    f.iter()
        .enumerate()
        .map(|(n, x)| {
            let w = weight(n, -r.0);
            (w * x) * (w * x)
        })
        .sum::<f64>()
        .sqrt()
}

pub fn pairing(f: &DualPoint, phi: &TestFunction) -> Result<f64> {
    if f.dim() != phi.dim() {
        return Err(Error::Dimension { expected: f.dim(), got: phi.dim() });
    }
    Ok(pairing_unchecked(&f.0, &phi.0))
}

#[inline]
pub(crate) fn pairing_unchecked(f: &[f64], phi: &[f64]) -> f64 {
    f.iter().zip(phi).map(|(a, b)| a * b).sum()
}

/// Squared Hilbert–Schmidt norm of the truncated inclusion `i_{p_r, p_s}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HsNorm {
    pub norm_sq: f64,
    /// Whether the untruncated series converges, i.e. `2(s - r) > 1`.
    pub converges: bool,
}

pub fn hs_norm_sq(r: SeminormIndex, s: SeminormIndex, dim: usize) -> Result<HsNorm> {
    if s.0 < r.0 {
        return Err(Error::SeminormOrder { r: r.0, s: s.0 });
    }
    let e = 2.0 * (r.0 - s.0);
    let norm_sq = (0..dim).map(|n| (1.0 + n as f64).powf(e)).sum();
    Ok(HsNorm { norm_sq, converges: 2.0 * (s.0 - r.0) > 1.0 })
}

/// Operator norm of the diagonal inclusion `i_{p_r, p_s}`, `s >= r`.
pub fn inclusion_op_norm(r: SeminormIndex, s: SeminormIndex, dim: usize) -> Result<f64> {
    if s.0 < r.0 {
        return Err(Error::SeminormOrder { r: r.0, s: s.0 });
    }
    Ok((0..dim)
        .map(|n| weight(n, r.0 - s.0))
        .fold(0.0, f64::max))
}
