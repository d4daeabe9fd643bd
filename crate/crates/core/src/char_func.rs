//! Characteristic functionals, Lévy–Khintchine exponents and moment
//! formulas for a characteristic triplet.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy_measure::{LevyMeasure, LevyMeasureSpec, Region, ValidationReport};
use crate::sequence_space::{pairing, DualPoint, SeminormIndex, TestFunction};

/// Smallest eigenvalue tolerated in a covariance matrix.
pub const PSD_FLOOR: f64 = -1e-10;

/// Symmetric positive semidefinite form `𝒬(φ)² = φᵀ M φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceForm {
    matrix: DMatrix<f64>,
}

impl CovarianceForm {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::Matrix("covariance matrix is empty".into()));
        }
        if let Some(row) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::Dimension { expected: d, got: row.len() });
        }
        let matrix = DMatrix::from_fn(d, d, |i, j| rows[i][j]);
        Self::from_matrix(matrix)
    }

    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Matrix("covariance matrix is not square".into()));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::Matrix("covariance matrix has non-finite entries".into()));
        }
        let scale = matrix.amax().max(1.0);
        for i in 0..matrix.nrows() {
            for j in 0..i {
                if (matrix[(i, j)] - matrix[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::Matrix(format!("covariance matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        let min_eig = SymmetricEigen::new(matrix.clone()).eigenvalues.min();
        if min_eig < PSD_FLOOR {
            return Err(Error::Matrix(format!("covariance matrix is not positive semidefinite (eigenvalue {min_eig:e})")));
        }
        Ok(Self { matrix })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: DMatrix::zeros(dim, dim) }
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        Self::from_matrix(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|&x| x == 0.0)
    }

    /// `𝒬(φ)²`
    pub fn quadratic(&self, phi: &TestFunction) -> Result<f64> {
        if phi.dim() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: phi.dim() });
        }
        let v = DVector::from_column_slice(phi.coords());
        Ok(v.dot(&(&self.matrix * &v)))
    }

    /// Bilinear form `𝒬(φ, ψ)`.
    pub fn bilinear(&self, phi: &TestFunction, psi: &TestFunction) -> Result<f64> {
        if phi.dim() != self.dim() || psi.dim() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: phi.dim().max(psi.dim()) });
        }
        let a = DVector::from_column_slice(phi.coords());
        let b = DVector::from_column_slice(psi.coords());
        Ok(a.dot(&(&self.matrix * &b)))
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self { matrix: &self.matrix * a }
    }

    /// A square root `L` with `L Lᵀ = M`, from the eigendecomposition with
    /// eigenvalues above the PSD floor clamped to zero.
    pub fn factor(&self) -> Result<DMatrix<f64>> {
        let eig = SymmetricEigen::new(self.matrix.clone());
        if eig.eigenvalues.min() < PSD_FLOOR {
            return Err(Error::Matrix("covariance matrix lost positive semidefiniteness".into()));
        }
        let sqrt = eig.eigenvalues.map(|l| l.max(0.0).sqrt());
        Ok(&eig.eigenvectors * DMatrix::from_diagonal(&sqrt))
    }
}

/// JSON form of a triplet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripletSpec {
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
    #[serde(default)]
    pub levy: LevyMeasureSpec,
    pub r: f64,
}

/// Characteristics `(𝔪, 𝒬, ν, ρ)` of a Lévy process.
#[derive(Debug, Clone, PartialEq)]
pub struct CharTriplet {
    pub mean: DualPoint,
    pub cov: CovarianceForm,
    pub levy: LevyMeasure,
    pub r: SeminormIndex,
}

impl CharTriplet {
    pub fn new(mean: DualPoint, cov: CovarianceForm, levy: LevyMeasure, r: SeminormIndex) -> Result<Self> {
        let d = mean.dim();
        if cov.dim() != d {
            return Err(Error::Dimension { expected: d, got: cov.dim() });
        }
        if levy.dim() != d {
            return Err(Error::Dimension { expected: d, got: levy.dim() });
        }
        let t = Self { mean, cov, levy, r };
        t.validate()?;
        Ok(t)
    }

    pub fn from_spec(spec: &TripletSpec) -> Result<Self> {
        let mean = DualPoint::new(spec.mean.clone())?;
        let cov = CovarianceForm::new(&spec.cov)?;
        let levy = LevyMeasure::from_spec(&spec.levy, mean.dim())?;
        let r = SeminormIndex::reference(spec.r)?;
        Self::new(mean, cov, levy, r)
    }

    pub fn to_spec(&self) -> TripletSpec {
        TripletSpec {
            mean: self.mean.coords().to_vec(),
            cov: self.cov.rows(),
            levy: self.levy.to_spec(),
            r: self.r.0,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            mean: DualPoint::zeros(dim),
            cov: CovarianceForm::zeros(dim),
            levy: LevyMeasure::empty(dim),
            r: SeminormIndex(0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.dim()
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        let rep = self.levy.validate(self.r)?;
        if !rep.valid {
            return Err(Error::InvalidMeasure(format!("Levy measure fails the integrability conditions at r = {}", self.r.0)));
        }
        Ok(rep)
    }

    fn check_dim(&self, phi: &TestFunction) -> Result<()> {
        if phi.dim() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: phi.dim() });
        }
        Ok(())
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// Lévy–Khintchine exponent
/// `η(φ) = i𝔪[φ] − ½𝒬(φ)² + ∫ (e^{if[φ]} − 1 − if[φ]·1{ρ′(f) <= 1}) ν(df)`.
pub fn lk_exponent(triplet: &CharTriplet, phi: &TestFunction) -> Result<Complex64> {
    let parts = exponent_parts(triplet, phi)?;
    Ok(parts.drift + parts.gaussian + parts.small + parts.large)
}

/// Additive pieces of the exponent, one per component of the decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentParts {
    pub drift: Complex64,
    pub gaussian: Complex64,
    /// Compensated integral over the closed unit ball of `ρ′`.
    pub small: Complex64,
    /// Uncompensated integral over its complement.
    pub large: Complex64,
    pub quadrature_abs_error: f64,
}

pub fn exponent_parts(triplet: &CharTriplet, phi: &TestFunction) -> Result<ExponentParts> {
    triplet.check_dim(phi)?;
    let drift = Complex64::new(0.0, pairing(&triplet.mean, phi)?);
    let gaussian = Complex64::new(-0.5 * triplet.cov.quadratic(phi)?, 0.0);
    let small = triplet.levy.cf_integral(&Region::unit_ball(triplet.r), phi, true)?;
    let large = triplet.levy.cf_integral(&Region::unit_complement(triplet.r), phi, false)?;
    Ok(ExponentParts {
        drift,
        gaussian,
        small: small.value,
        large: large.value,
        quadrature_abs_error: small.abs_error + large.abs_error,
    })
}

/// `E e^{i L_t[φ]} = e^{t η(φ)}`.
pub fn cf_levy(triplet: &CharTriplet, t: f64, phi: &TestFunction) -> Result<Complex64> {
    check_time(t)?;
    Ok((lk_exponent(triplet, phi)? * t).exp())
}

/// `exp(i t 𝔪[φ] − (t/2) 𝒬(φ)²)`.
pub fn cf_wiener(mean: &DualPoint, cov: &CovarianceForm, t: f64, phi: &TestFunction) -> Result<Complex64> {
    check_time(t)?;
    let m = pairing(mean, phi)?;
    let q = cov.quadratic(phi)?;
    Ok(Complex64::new(-0.5 * t * q, t * m).exp())
}

/// `exp{ t ∫_A (e^{if[φ]} − 1) ν(df) }`, requiring `ν(A) < ∞`.
pub fn cf_poisson_integral(levy: &LevyMeasure, region: &Region, t: f64, phi: &TestFunction) -> Result<Complex64> {
    check_time(t)?;
    levy.region_mass(region)?;
    Ok((levy.cf_integral(region, phi, false)?.value * t).exp())
}

/// `exp{ t ∫_A (e^{if[φ]} − 1 − if[φ]) ν(df) }`.
///
/// Only square integrability near the origin is needed, so `A` may be the
/// unit ball of an infinite-mass measure.
pub fn cf_compensated(levy: &LevyMeasure, region: &Region, t: f64, phi: &TestFunction) -> Result<Complex64> {
    check_time(t)?;
    Ok((levy.cf_integral(region, phi, true)?.value * t).exp())
}

/// Characteristic function `exp[−(μ̂(0) − μ̂(φ))]` of the Poisson measure
/// with finite exponent `μ`.
pub fn cf_poisson_measure(mu: &LevyMeasure, phi: &TestFunction) -> Result<Complex64> {
    let total = mu.total_mass()?;
    let hat = mu_hat(mu, phi)?;
    Ok((hat - total).exp())
}

/// `μ̂(φ) = ∫ e^{if[φ]} μ(df)` for a finite measure.
pub fn mu_hat(mu: &LevyMeasure, phi: &TestFunction) -> Result<Complex64> {
    let all = Region { kind: crate::levy_measure::RegionKind::Shell { lo: 0.0, hi: f64::INFINITY }, r: SeminormIndex(0.0) };
    let total = mu.total_mass()?;
    Ok(mu.cf_integral(&all, phi, false)?.value + total)
}

/// `(𝔪/n, 𝒬²/n, ν/n, ρ)`, the triplet of the n-th convolution root.
pub fn nth_root_triplet(triplet: &CharTriplet, n: u32) -> Result<CharTriplet> {
    if n == 0 {
        return Err(Error::Domain("root order must be >= 1".into()));
    }
    if n == 1 {
        return Ok(triplet.clone());
    }
    let a = 1.0 / n as f64;
    Ok(CharTriplet {
        mean: triplet.mean.scaled(a),
        cov: triplet.cov.scaled(a),
        levy: triplet.levy.scaled(a),
        r: triplet.r,
    })
}

/// `(t ∫_A f[φ] ν(df), t ∫_A f[φ]² ν(df))`.
pub fn moments_poisson_integral(levy: &LevyMeasure, region: &Region, t: f64, phi: &TestFunction) -> Result<(f64, f64)> {
    check_time(t)?;
    let m1 = levy.pairing_moment(region, phi, 1)?.value;
    let m2 = levy.pairing_moment(region, phi, 2)?.value;
    Ok((t * m1, t * m2))
}

/// `t ∫_{ρ′ <= 1} f[φ]² ν(df)`.
pub fn second_moment_small_jumps(levy: &LevyMeasure, r: SeminormIndex, t: f64, phi: &TestFunction) -> Result<f64> {
    check_time(t)?;
    Ok(t * levy.pairing_moment(&Region::unit_ball(r), phi, 2)?.value)
}

/// `t ∫_{ρ′ <= 1} q′(f)² ν(df)`.
pub fn hilbert_second_moment(levy: &LevyMeasure, r: SeminormIndex, q: SeminormIndex, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(t * levy.radial_second_moment_at(&Region::unit_ball(r), q).value)
}
