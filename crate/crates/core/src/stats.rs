//! Sample statistics and classical tests used by the verification suite.

use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, DiscreteCDF, Poisson};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Fourth central moment (biased).
    pub m4: f64,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len();
        let nf = n as f64;
        let mean = xs.iter().sum::<f64>() / nf;
        let (mut s2, mut s4) = (0.0, 0.0);
        for x in xs {
            let d = (x - mean) * (x - mean);
            s2 += d;
            s4 += d * d;
        }
        let variance = if n > 1 { s2 / (nf - 1.0) } else { 0.0 };
        Self { n, mean, variance, m4: s4 / nf }
    }

    pub fn mean_se(&self) -> f64 {
        (self.variance / self.n as f64).sqrt()
    }

    /// Standard error of the sample variance, `sqrt((μ₄ − σ⁴)/n)`.
    pub fn variance_se(&self) -> f64 {
        ((self.m4 - self.variance * self.variance).max(0.0) / self.n as f64).sqrt()
    }
}

/// Pearson correlation; `None` when either sample has zero variance.
pub fn correlation(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    let scale = 1e-24 * n * (1.0 + mx * mx + my * my);
    if sxx <= scale || syy <= scale {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// `Q_KS(λ) = 2 Σ_{k>=1} (−1)^{k−1} e^{−2k²λ²}`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn stephens(ne: f64) -> f64 {
    let s = ne.sqrt();
    s + 0.12 + 0.11 / s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    /// Critical statistic at the requested level.
    pub critical: f64,
}

/// Two-sample Kolmogorov–Smirnov test with the Stephens small-sample
/// correction of the asymptotic distribution. Ties are handled by advancing
/// both samples past equal values.
pub fn ks_two_sample(a: &[f64], b: &[f64], level: f64) -> KsResult {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let x = a[i].min(b[j]);
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    KsResult { statistic: d, p_value: kolmogorov_survival(stephens(ne) * d), critical: ks_critical(n, m, level) }
}

/// Smallest `D` with `P(D_KS >= D) <= level` under the same approximation.
pub fn ks_critical(n: usize, m: usize, level: f64) -> f64 {
    let (mut lo, mut hi) = (0.2, 5.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_survival(mid) > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let ne = (n * m) as f64 / (n + m) as f64;
    hi / stephens(ne)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// Bins as `(first count, last count or None for the open tail)`.
    pub bins: Vec<(u64, Option<u64>)>,
}

/// Pearson goodness-of-fit of nonnegative counts against `Poisson(rate)`,
/// merging cells until each expected frequency is at least 5.
/// Returns `None` when fewer than two cells can be formed.
pub fn chi_square_poisson(counts: &[u64], rate: f64) -> Option<ChiSquareResult> {
    if rate <= 0.0 || counts.is_empty() {
        return None;
    }
    let n = counts.len() as f64;
    let pois = Poisson::new(rate).ok()?;
    // cells [lo, hi]; the last one is open-ended
    let mut bins: Vec<(u64, u64, f64)> = Vec::new();
    let mut lo = 0u64;
    let mut acc = 0.0;
    let mut k = 0u64;
    loop {
        acc += pois.pmf(k);
        let tail = 1.0 - pois.cdf(k);
        if acc * n >= 5.0 && tail * n >= 5.0 {
            bins.push((lo, k, acc));
            lo = k + 1;
            acc = 0.0;
        }
        if tail * n < 5.0 {
            break;
        }
        k += 1;
    }
    let tail_p = if lo == 0 { 1.0 } else { 1.0 - pois.cdf(lo - 1) };
    bins.push((lo, u64::MAX, tail_p));
    if bins.len() < 2 {
        return None;
    }
    let mut observed = vec![0u64; bins.len()];
    for &c in counts {
        let idx = bins.iter().position(|&(a, b, _)| c >= a && c <= b).expect("cells cover all counts");
        observed[idx] += 1;
    }
    let statistic = bins
        .iter()
        .zip(&observed)
        .map(|(&(_, _, p), &o)| {
            let e = p * n;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let df = bins.len() - 1;
    let p_value = 1.0 - ChiSquared::new(df as f64).ok()?.cdf(statistic);
    Some(ChiSquareResult {
        statistic,
        df,
        p_value,
        bins: bins.iter().map(|&(a, b, _)| (a, (b != u64::MAX).then_some(b))).collect(),
    })
}

/// The first `count` primes.
pub fn primes(count: usize) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::with_capacity(count);
    let mut k = 2u32;
    while out.len() < count {
        if out.iter().take_while(|&&p| p * p <= k).all(|&p| !k.is_multiple_of(p)) {
            out.push(k);
        }
        k += 1;
    }
    out
}

/// Radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u32) -> f64 {
    let b = b as u64;
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut x = 0.0;
    while i > 0 {
        x += (i % b) as f64 * f;
        i /= b;
        f *= inv;
    }
    x
}

/// `i`-th point (1-based internally) of the Halton sequence in `[0, 1)^dim`.
pub fn halton(i: u64, dim: usize) -> Vec<f64> {
    primes(dim).into_iter().map(|b| radical_inverse(i + 1, b)).collect()
}
