//! Moment accumulation, normal-CDF comparison, and small fitting helpers.

use serde::Serialize;

/// One-pass central-moment accumulator (up to the fourth moment), using the
/// standard stable update formulas; safe for long streamed runs.
#[derive(Clone, Copy, Debug, Default)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_slice(xs: &[f64]) -> Self {
        let mut m = Self::new();
        for &x in xs {
            m.push(x);
        }
        m
    }

    pub fn push(&mut self, x: f64) {
        let n1 = self.n as f64;
        self.n += 1;
        let n = self.n as f64;
        let delta = x - self.mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * n1;
        self.mean += delta_n;
        self.m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * self.m2
            - 4.0 * delta_n * self.m3;
        self.m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term1;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance (n-1 divisor).
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n as f64 - 1.0)
        }
    }

    /// Population variance (n divisor).
    pub fn variance_population(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.m2 / self.n as f64
        }
    }

    /// Moment skewness g1 = m3 / m2^(3/2) with population central moments.
    pub fn skewness(&self) -> f64 {
        let n = self.n as f64;
        (n.sqrt() * self.m3) / self.m2.powf(1.5)
    }

    /// Excess kurtosis g2 = m4 / m2^2 - 3.
    pub fn excess_kurtosis(&self) -> f64 {
        let n = self.n as f64;
        n * self.m4 / (self.m2 * self.m2) - 3.0
    }

    /// Fourth central moment (population).
    pub fn central4(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.m4 / self.n as f64
        }
    }

    /// Standard error of the sample variance,
    /// Var(s^2) ~= (mu4 - sigma^4 (n-3)/(n-1)) / n, without normality
    /// assumptions.
    pub fn variance_standard_error(&self) -> f64 {
        let n = self.n as f64;
        if self.n < 4 {
            return f64::INFINITY;
        }
        let s2 = self.variance();
        let mu4 = self.central4();
        ((mu4 - s2 * s2 * (n - 3.0) / (n - 1.0)) / n).max(0.0).sqrt()
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Exact one-sample Kolmogorov-Smirnov distance of a sample against the
/// standard normal CDF. The input must already be standardized; it is sorted
/// internally.
pub fn ks_distance_normal(sample: &[f64]) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).expect("no NaN in KS input"));
    let n = xs.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let phi = normal_cdf(x);
        let lo = phi - i as f64 / n;
        let hi = (i + 1) as f64 / n - phi;
        sup = sup.max(lo).max(hi);
    }
    sup
}

/// Geometric-decay fit of a size histogram: ordinary least squares of
/// ln(count) against the size j over `j_min..=j_max`, using only bins with at
/// least `min_count` observations. `base` is exp(slope).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DecayFit {
    pub base: f64,
    pub slope: f64,
    pub j_lo: usize,
    pub j_hi: usize,
    pub points: usize,
}

pub fn fit_log_decay(
    hist: &[(usize, u64)],
    j_min: usize,
    j_max: usize,
    min_count: u64,
) -> Option<DecayFit> {
    let pts: Vec<(f64, f64)> = hist
        .iter()
        .filter(|&&(j, c)| j >= j_min && j <= j_max && c >= min_count)
        .map(|&(j, c)| (j as f64, (c as f64).ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom <= 0.0 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / denom;
    Some(DecayFit {
        base: slope.exp(),
        slope,
        j_lo: pts.first().map(|p| p.0 as usize).unwrap_or(j_min),
        j_hi: pts.last().map(|p| p.0 as usize).unwrap_or(j_max),
        points: pts.len(),
    })
}
