//! Lévy measures on the truncated dual.
//!
//! A measure is a finite list of atoms plus one-dimensional parts carried by
//! coordinate axes. An axis part is either a power-law density
//! `c·x^{-1-α}` on `0 < x <= x_max` along `e_n`, or a list of atoms on that
//! axis. All integrals reduce to closed forms over atoms and one-dimensional
//! quadrature over the power-law parts.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{power_law_integral, QuadOptions, QuadValue};
use crate::sequence_space::{dual_norm, pairing_unchecked, weight, DualPoint, SeminormIndex, TestFunction};

/// JSON form of a measure, as read from configuration files.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevyMeasureSpec {
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
    #[serde(default)]
    pub axes: Vec<AxisSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub point: Vec<f64>,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AxisSpec {
    Power { n: usize, c: f64, alpha: f64, xmax: f64 },
    Atoms { n: usize, atoms: Vec<[f64; 2]> },
}

impl AxisSpec {
    fn axis(&self) -> usize {
        match self {
            AxisSpec::Power { n, .. } | AxisSpec::Atoms { n, .. } => *n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub point: DualPoint,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AxisLaw {
    /// Density `c·x^{-1-α}` on `(0, xmax]`.
    Power { c: f64, alpha: f64, xmax: f64 },
    /// Atoms `(x_j, c_j)` at `x_j·e_n`.
    Atoms(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisPart {
    pub n: usize,
    pub law: AxisLaw,
}

/// A structurally valid Lévy measure on the dual of dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyMeasure {
    dim: usize,
    atoms: Vec<Atom>,
    axes: Vec<AxisPart>,
}

/// The radial band `lo < ρ′(f) <= hi` of a region; `hi` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RegionKind {
    /// Closed ball `ρ′(f) <= radius`.
    Ball { radius: f64 },
    /// Complement of the closed ball, `ρ′(f) > radius`.
    Complement { radius: f64 },
    /// Shell `lo < ρ′(f) <= hi`.
    Shell { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    #[serde(flatten)]
    pub kind: RegionKind,
    pub r: SeminormIndex,
}

impl Region {
    pub fn ball(radius: f64, r: SeminormIndex) -> Result<Self> {
        Self::checked(RegionKind::Ball { radius }, r)
    }

    pub fn complement(radius: f64, r: SeminormIndex) -> Result<Self> {
        Self::checked(RegionKind::Complement { radius }, r)
    }

    pub fn shell(lo: f64, hi: f64, r: SeminormIndex) -> Result<Self> {
        Self::checked(RegionKind::Shell { lo, hi }, r)
    }

    /// Unit ball of the dual norm `ρ′`.
    pub fn unit_ball(r: SeminormIndex) -> Self {
        Self { kind: RegionKind::Ball { radius: 1.0 }, r }
    }

    pub fn unit_complement(r: SeminormIndex) -> Self {
        Self { kind: RegionKind::Complement { radius: 1.0 }, r }
    }

    /// Dyadic shell `2^{-(k+1)} < ρ′ <= 2^{-k}`.
    pub fn dyadic_shell(k: usize, r: SeminormIndex) -> Self {
        let hi = 0.5f64.powi(k as i32);
        Self { kind: RegionKind::Shell { lo: 0.5 * hi, hi }, r }
    }

    pub fn checked(kind: RegionKind, r: SeminormIndex) -> Result<Self> {
        let ok = match kind {
            RegionKind::Ball { radius } | RegionKind::Complement { radius } => radius > 0.0 && radius.is_finite(),
            RegionKind::Shell { lo, hi } => lo >= 0.0 && lo < hi && lo.is_finite(),
        };
        if !ok {
            return Err(Error::InvalidParameter(format!("malformed region {kind:?}")));
        }
        Ok(Self { kind, r })
    }

    /// Radial band `(lo, hi]` in terms of `ρ′`.
    pub fn band(&self) -> (f64, f64) {
        match self.kind {
            RegionKind::Ball { radius } => (0.0, radius),
            RegionKind::Complement { radius } => (radius, f64::INFINITY),
            RegionKind::Shell { lo, hi } => (lo, hi),
        }
    }

    /// Whether the closure of the region avoids the origin.
    pub fn is_bounded_below(&self) -> bool {
        self.band().0 > 0.0
    }

    pub fn contains_radius(&self, rho: f64) -> bool {
        let (lo, hi) = self.band();
        rho > lo && rho <= hi
    }

    pub fn contains(&self, f: &DualPoint) -> bool {
        !f.is_zero() && self.contains_radius(dual_norm(f, self.r))
    }
}

/// A value with an accumulated quadrature error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub abs_error: f64,
}

impl<T: QuadValue> Integral<T> {
    fn zero() -> Self {
        Self { value: T::zero(), abs_error: 0.0 }
    }

    fn add(&mut self, value: T, abs_error: f64) {
        self.value = self.value + value;
        self.abs_error += abs_error;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub r: f64,
    pub dim: usize,
    pub origin_mass_zero: bool,
    /// `∫_{ρ′ <= 1} ρ′(f)² ν(df)`
    pub small_ball_moment: f64,
    /// `ν(ρ′ > 1)`
    pub tail_mass: f64,
    /// `∫ (ρ′(f)² ∧ 1) ν(df)`
    pub integrability: f64,
    pub quadrature_abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shell {
    pub k: usize,
    pub region: Region,
    pub mass: f64,
    pub compensator: DualPoint,
    pub second_moment: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShellDecomposition {
    pub shells: Vec<Shell>,
    /// `∫_{ρ′ <= 2^{-K}} ρ′(f)² ν(df)`
    pub residual: f64,
}

fn quad_opts() -> QuadOptions {
    QuadOptions::default()
}

/// `e^{iz} - 1`
#[inline]
pub(crate) fn expm1_i(z: f64) -> Complex64 {
    let s = (0.5 * z).sin();
    Complex64::new(-2.0 * s * s, z.sin())
}

/// `e^{iz} - 1 - iz`
#[inline]
pub(crate) fn expm1_i_comp(z: f64) -> Complex64 {
    let s = (0.5 * z).sin();
    let im = if z.abs() < 0.1 {
        let z2 = z * z;
        -z * z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0 * (1.0 - z2 / 72.0)))
    } else {
        z.sin() - z
    };
    Complex64::new(-2.0 * s * s, im)
}

impl LevyMeasure {
    pub fn from_spec(spec: &LevyMeasureSpec, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        let mut atoms = Vec::with_capacity(spec.atoms.len());
        for (i, a) in spec.atoms.iter().enumerate() {
            if a.point.len() != dim {
                return Err(Error::Dimension { expected: dim, got: a.point.len() });
            }
            let point = DualPoint::new(a.point.clone())?;
            if point.is_zero() {
                return Err(Error::InvalidMeasure(format!("atom {i} sits at the origin")));
            }
            if !(a.mass > 0.0 && a.mass.is_finite()) {
                return Err(Error::InvalidMeasure(format!("atom {i} has non-positive mass {}", a.mass)));
            }
            atoms.push(Atom { point, mass: a.mass });
        }
        let mut axes = Vec::with_capacity(spec.axes.len());
        let mut seen = vec![false; dim];
        for ax in &spec.axes {
            let n = ax.axis();
            if n >= dim {
                return Err(Error::InvalidParameter(format!("axis index {n} out of range for dimension {dim}")));
            }
            if std::mem::replace(&mut seen[n], true) {
                return Err(Error::InvalidParameter(format!("axis index {n} listed twice")));
            }
            let law = match ax {
                AxisSpec::Power { c, alpha, xmax, .. } => {
                    if !(*alpha > 0.0 && *alpha < 2.0) {
                        return Err(Error::InvalidParameter(format!("power-law exponent alpha = {alpha} outside (0, 2)")));
                    }
                    if !(*c > 0.0 && c.is_finite()) {
                        return Err(Error::InvalidMeasure(format!("power-law intensity c = {c} must be positive")));
                    }
                    if !(*xmax > 0.0 && xmax.is_finite()) {
                        return Err(Error::InvalidParameter(format!("power-law cutoff xmax = {xmax} must be positive")));
                    }
                    AxisLaw::Power { c: *c, alpha: *alpha, xmax: *xmax }
                }
                AxisSpec::Atoms { atoms, .. } => {
                    for [x, c] in atoms {
                        if *x == 0.0 || !x.is_finite() {
                            return Err(Error::InvalidMeasure(format!("axis {n} atom at x = {x}")));
                        }
                        if !(*c > 0.0 && c.is_finite()) {
                            return Err(Error::InvalidMeasure(format!("axis {n} atom has non-positive mass {c}")));
                        }
                    }
                    AxisLaw::Atoms(atoms.iter().map(|[x, c]| (*x, *c)).collect())
                }
            };
            axes.push(AxisPart { n, law });
        }
        Ok(Self { dim, atoms, axes })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, atoms: Vec::new(), axes: Vec::new() }
    }

    pub fn to_spec(&self) -> LevyMeasureSpec {
        LevyMeasureSpec {
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomSpec { point: a.point.coords().to_vec(), mass: a.mass })
                .collect(),
            axes: self
                .axes
                .iter()
                .map(|p| match &p.law {
                    AxisLaw::Power { c, alpha, xmax } => AxisSpec::Power { n: p.n, c: *c, alpha: *alpha, xmax: *xmax },
                    AxisLaw::Atoms(v) => AxisSpec::Atoms { n: p.n, atoms: v.iter().map(|&(x, c)| [x, c]).collect() },
                })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn axes(&self) -> &[AxisPart] {
        &self.axes
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.axes.is_empty()
    }

    /// The measure `a·ν`, `a > 0`.
    pub fn scaled(&self, a: f64) -> Self {
        Self {
            dim: self.dim,
            atoms: self.atoms.iter().map(|x| Atom { point: x.point.clone(), mass: a * x.mass }).collect(),
            axes: self
                .axes
                .iter()
                .map(|p| AxisPart {
                    n: p.n,
                    law: match &p.law {
                        AxisLaw::Power { c, alpha, xmax } => AxisLaw::Power { c: a * c, alpha: *alpha, xmax: *xmax },
                        AxisLaw::Atoms(v) => AxisLaw::Atoms(v.iter().map(|&(x, c)| (x, a * c)).collect()),
                    },
                })
                .collect(),
        }
    }

    /// Visits every point mass `(point, mass)` lying in `region`, including
    /// atoms carried by axes.
    fn for_each_point_mass(&self, region: &Region, mut visit: impl FnMut(PointRef<'_>, f64)) {
        for a in &self.atoms {
            if region.contains(&a.point) {
                visit(PointRef::Full(a.point.coords()), a.mass);
            }
        }
        for p in &self.axes {
            if let AxisLaw::Atoms(v) = &p.law {
                let w = weight(p.n, -region.r.0);
                for &(x, c) in v {
                    if region.contains_radius(x.abs() * w) {
                        visit(PointRef::Axis(p.n, x), c);
                    }
                }
            }
        }
    }

    /// Power-law parts intersected with the region, as `(n, c, α, a, b)` with
    /// `x ∈ (a, b]`.
    fn power_bands(&self, region: &Region) -> Vec<PowerBand> {
        let (lo, hi) = region.band();
        self.axes
            .iter()
            .filter_map(|p| match p.law {
                AxisLaw::Power { c, alpha, xmax } => {
                    let w = weight(p.n, -region.r.0);
                    let a = lo / w;
                    let b = (hi / w).min(xmax);
                    (b > a).then_some(PowerBand { n: p.n, c, alpha, a, b })
                }
                AxisLaw::Atoms(_) => None,
            })
            .collect()
    }

    /// `ν(A)`. Errors with an infinite-mass signal when a power-law part
    /// reaches the origin inside the region.
    pub fn region_mass(&self, region: &Region) -> Result<f64> {
        let mut total = 0.0;
        self.for_each_point_mass(region, |_, m| total += m);
        for band in self.power_bands(region) {
            total += band.mass()?;
        }
        Ok(total)
    }

    /// `ν(Φ′)`, finite only without power-law parts.
    pub fn total_mass(&self) -> Result<f64> {
        let everything = Region { kind: RegionKind::Shell { lo: 0.0, hi: f64::INFINITY }, r: SeminormIndex(0.0) };
        self.region_mass(&everything)
    }

    /// `∫_A ρ′(f)² ν(df)` with `ρ′` the dual norm of the region's index.
    pub fn radial_second_moment(&self, region: &Region) -> Integral<f64> {
        self.radial_second_moment_at(region, region.r)
    }

    /// `∫_A q′(f)² ν(df)` for a dual norm `q′` other than the region's.
    pub fn radial_second_moment_at(&self, region: &Region, q: SeminormIndex) -> Integral<f64> {
        let mut out = Integral::zero();
        self.for_each_point_mass(region, |pt, m| {
            let rho = pt.dual_norm(self.dim, q);
            out.add(m * rho * rho, 0.0);
        });
        for band in self.power_bands(region) {
            let w = weight(band.n, -q.0);
            let r = power_law_integral(|_x: f64| 1.0, 2.0, band.alpha, band.a, band.b, quad_opts());
            out.add(band.c * w * w * r.value, band.c * w * w * r.abs_error);
        }
        out
    }

    /// `∫_A f ν(df)`, coordinatewise.
    pub fn first_moment(&self, region: &Region) -> Result<Integral<DualPoint>> {
        let mut v = DualPoint::zeros(self.dim);
        let mut err = 0.0;
        self.for_each_point_mass(region, |pt, m| pt.add_scaled_to(v.coords_mut(), m));
        for band in self.power_bands(region) {
            if band.a == 0.0 && band.alpha >= 1.0 {
                return Err(Error::InfiniteMass(format!(
                    "first moment of axis {} power law with alpha = {} diverges at the origin",
                    band.n, band.alpha
                )));
            }
            let r = power_law_integral(|_x: f64| 1.0, 1.0, band.alpha, band.a, band.b, quad_opts());
            v.coords_mut()[band.n] += band.c * r.value;
            err += band.c * r.abs_error;
        }
        Ok(Integral { value: v, abs_error: err })
    }

    /// `∫_A f[φ]^k ν(df)` for `k ∈ {1, 2}`.
    pub fn pairing_moment(&self, region: &Region, phi: &TestFunction, k: u32) -> Result<Integral<f64>> {
        self.check_dim(phi)?;
        if !(k == 1 || k == 2) {
            return Err(Error::InvalidParameter(format!("pairing moment order {k} not supported")));
        }
        let mut out = Integral::zero();
        self.for_each_point_mass(region, |pt, m| out.add(m * pt.pair(phi.coords()).powi(k as i32), 0.0));
        for band in self.power_bands(region) {
            let u = phi.coords()[band.n];
            if u == 0.0 {
                continue;
            }
            if band.a == 0.0 && (k as f64) <= band.alpha {
                return Err(Error::InfiniteMass(format!(
                    "moment of order {k} of axis {} power law with alpha = {} diverges",
                    band.n, band.alpha
                )));
            }
            let r = power_law_integral(|_x: f64| 1.0, k as f64, band.alpha, band.a, band.b, quad_opts());
            let s = band.c * u.powi(k as i32);
            out.add(s * r.value, s.abs() * r.abs_error);
        }
        Ok(out)
    }

    /// `∫_A (e^{i f[φ]} - 1 - i f[φ]·1[compensate]) ν(df)`.
    ///
    /// Without compensation the region must carry finite mass.
    pub fn cf_integral(&self, region: &Region, phi: &TestFunction, compensate: bool) -> Result<Integral<Complex64>> {
        self.check_dim(phi)?;
        let kernel = if compensate { expm1_i_comp } else { expm1_i };
        let mut out = Integral::zero();
        self.for_each_point_mass(region, |pt, m| out.add(kernel(pt.pair(phi.coords())) * m, 0.0));
        for band in self.power_bands(region) {
            let u = phi.coords()[band.n];
            if band.a == 0.0 && !compensate {
                return Err(Error::InfiniteMass(format!("axis {} power law reaches the origin", band.n)));
            }
            if u == 0.0 {
                continue;
            }
            let r = if band.a == 0.0 {
                // (e^{iux} - 1 - iux)/x², bounded with limit -u²/2 at 0
                power_law_integral(
                    |x: f64| {
                        if x == 0.0 {
                            Complex64::new(-0.5 * u * u, 0.0)
                        } else {
                            kernel(u * x) / (x * x)
                        }
                    },
                    2.0,
                    band.alpha,
                    0.0,
                    band.b,
                    quad_opts(),
                )
            } else {
                power_law_integral(|x: f64| kernel(u * x), 0.0, band.alpha, band.a, band.b, quad_opts())
            };
            out.add(r.value * band.c, band.c * r.abs_error);
        }
        Ok(out)
    }

    /// `∫ (ρ′(f)² ∧ 1) ν(df)`.
    pub fn integrability_functional(&self, r: SeminormIndex) -> Result<Integral<f64>> {
        let small = self.radial_second_moment(&Region::unit_ball(r));
        let tail = self.region_mass(&Region::unit_complement(r))?;
        Ok(Integral { value: small.value + tail, abs_error: small.abs_error })
    }

    /// Checks the three defining conditions of a Lévy measure at index `r`.
    pub fn validate(&self, r: SeminormIndex) -> Result<ValidationReport> {
        if r.0 < 0.0 || !r.0.is_finite() {
            return Err(Error::InvalidParameter(format!("reference seminorm index must be finite and >= 0, got {}", r.0)));
        }
        let small = self.radial_second_moment(&Region::unit_ball(r));
        let tail_mass = self.region_mass(&Region::unit_complement(r))?;
        let valid = small.value.is_finite() && tail_mass.is_finite();
        Ok(ValidationReport {
            valid,
            r: r.0,
            dim: self.dim,
            origin_mass_zero: true,
            small_ball_moment: small.value,
            tail_mass,
            integrability: small.value + tail_mass,
            quadrature_abs_error: small.abs_error,
        })
    }

    /// Dyadic shells `2^{-(k+1)} < ρ′ <= 2^{-k}`, `k < shells`, covering the
    /// unit ball down to the residual band `ρ′ <= 2^{-K}`.
    pub fn shell_decomposition(&self, r: SeminormIndex, shells: usize) -> Result<ShellDecomposition> {
        if shells == 0 {
            return Err(Error::InvalidParameter("shell count must be >= 1".into()));
        }
        let mut out = Vec::with_capacity(shells);
        for k in 0..shells {
            let region = Region::dyadic_shell(k, r);
            out.push(Shell {
                k,
                region,
                mass: self.region_mass(&region)?,
                compensator: self.first_moment(&region)?.value,
                second_moment: self.radial_second_moment(&region).value,
            });
        }
        let inner = Region::ball(0.5f64.powi(shells as i32), r)?;
        Ok(ShellDecomposition { shells: out, residual: self.radial_second_moment(&inner).value })
    }

    /// Precomputes a sampler for `ν|_A / ν(A)`.
    pub fn sampler(&self, region: &Region) -> Result<RegionSampler> {
        let mut comps = Vec::new();
        self.for_each_point_mass(region, |pt, m| {
            comps.push((m, SamplerComponent::Point(pt.to_dual(self.dim))));
        });
        for band in self.power_bands(region) {
            let m = band.mass()?;
            if m > 0.0 {
                comps.push((m, SamplerComponent::Power(band)));
            }
        }
        let mut cumulative = Vec::with_capacity(comps.len());
        let mut acc = 0.0;
        for (m, _) in &comps {
            acc += m;
            cumulative.push(acc);
        }
        if acc <= 0.0 {
            return Err(Error::EmptyRegion);
        }
        Ok(RegionSampler {
            dim: self.dim,
            total: acc,
            cumulative,
            components: comps.into_iter().map(|(_, c)| c).collect(),
        })
    }

    pub fn sample_jump<R: Rng + ?Sized>(&self, region: &Region, rng: &mut R) -> Result<DualPoint> {
        Ok(self.sampler(region)?.sample(rng))
    }

    fn check_dim(&self, phi: &TestFunction) -> Result<()> {
        if phi.dim() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: phi.dim() });
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum PointRef<'a> {
    Full(&'a [f64]),
    Axis(usize, f64),
}

impl PointRef<'_> {
    fn pair(&self, phi: &[f64]) -> f64 {
        match *self {
            PointRef::Full(p) => pairing_unchecked(p, phi),
            PointRef::Axis(n, x) => x * phi[n],
        }
    }

    fn dual_norm(&self, dim: usize, r: SeminormIndex) -> f64 {
        match *self {
            PointRef::Full(p) => crate::sequence_space::dual_norm_coords(p, r),
            PointRef::Axis(n, x) => {
                debug_assert!(n < dim);
                x.abs() * weight(n, -r.0)
            }
        }
    }

    fn add_scaled_to(&self, out: &mut [f64], m: f64) {
        match *self {
            PointRef::Full(p) => out.iter_mut().zip(p).for_each(|(o, x)| *o += m * x),
            PointRef::Axis(n, x) => out[n] += m * x,
        }
    }

    fn to_dual(self, dim: usize) -> DualPoint {
        match self {
            PointRef::Full(p) => DualPoint::new(p.to_vec()).expect("validated atom"),
            PointRef::Axis(n, x) => DualPoint::basis(dim, n).scaled(x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBand {
    pub n: usize,
    pub c: f64,
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
}

impl PowerBand {
    /// `c ∫_a^b x^{-1-α} dx`.
    fn mass(&self) -> Result<f64> {
        if self.a <= 0.0 {
            return Err(Error::InfiniteMass(format!("axis {} power law reaches the origin", self.n)));
        }
        Ok(self.c / self.alpha * (self.a.powf(-self.alpha) - self.b.powf(-self.alpha)))
    }

    /// Inverse CDF of the normalized density on `(a, b]`.
    fn quantile(&self, u: f64) -> f64 {
        let lo = self.a.powf(-self.alpha);
        let hi = self.b.powf(-self.alpha);
        let x = (lo - u * (lo - hi)).powf(-1.0 / self.alpha);
        x.clamp(self.a, self.b)
    }
}

#[derive(Debug, Clone)]
enum SamplerComponent {
    Point(DualPoint),
    Power(PowerBand),
}

/// Draws from a Lévy measure restricted to a finite-mass region.
#[derive(Debug, Clone)]
pub struct RegionSampler {
    dim: usize,
    total: f64,
    cumulative: Vec<f64>,
    components: Vec<SamplerComponent>,
}

impl RegionSampler {
    pub fn total_mass(&self) -> f64 {
        self.total
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DualPoint {
        let u: f64 = rng.random::<f64>() * self.total;
        let idx = self.cumulative.partition_point(|&c| c <= u).min(self.components.len() - 1);
        match &self.components[idx] {
            SamplerComponent::Point(p) => p.clone(),
            SamplerComponent::Power(band) => {
                // 1 - U lies in (0, 1], keeping the draw inside (a, b]
                let v = 1.0 - rng.random::<f64>();
                DualPoint::basis(self.dim, band.n).scaled(band.quantile(v))
            }
        }
    }
}
