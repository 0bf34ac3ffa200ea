//! Numerics for the mean-degree threshold c_hat(k): the unique root x > k of
//! x * P[Poisson(x) <= k-1] = 1/e.

use serde::Serialize;

use crate::error::{Error, Result};

/// P[Poisson(x) <= m], summed with the stable recurrence
/// term_{i+1} = term_i * x / (i+1) starting from term_0 = exp(-x).
///
/// Absolute error stays below 1e-14 for m <= 200, x <= 500 (every term is
/// nonnegative and the recurrence loses no precision to cancellation).
pub fn poisson_cdf(x: f64, m: u64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidParameter(format!("Poisson rate {x} must be > 0")));
    }
    let mut term = (-x).exp();
    let mut sum = term;
    for i in 1..=m {
        term *= x / i as f64;
        sum += term;
    }
    Ok(sum)
}

/// f(x) = x * P[Poisson(x) <= k-1]; strictly decreasing for x > k.
pub fn f_k(x: f64, k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    Ok(x * poisson_cdf(x, k - 1)?)
}

/// Solver output for c_hat(k).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ThresholdResult {
    pub k: u64,
    pub c_hat: f64,
    /// |f(c_hat) - 1/e| at the returned point.
    pub residual: f64,
    pub iterations: u32,
    /// First-order expansion k + sqrt(2 k ln k).
    pub asymptotic: f64,
}

/// k + sqrt(2 k ln k), natural log.
pub fn asymptotic_c_hat(k: u64) -> f64 {
    let kf = k as f64;
    kf + (2.0 * kf * kf.ln()).sqrt()
}

/// Bisection for the unique root of f(x) = 1/e on (k, inf).
///
/// The bracket is grown by doubling from k+1 until f changes sign; strict
/// monotonicity of f beyond k makes the root unique, so plain bisection is
/// unconditionally safe. Newton would be faster but nothing here is hot.
pub fn solve_c_hat(k: u64, tol: f64) -> Result<ThresholdResult> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k={k} must be >= 2")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol={tol} must be > 0")));
    }
    let target = (-1.0f64).exp();
    let mut lo = k as f64;
    if f_k(lo, k)? <= target {
        return Err(Error::Numerical(format!(
            "f({lo}) <= 1/e at the left bracket for k={k}; no root beyond k"
        )));
    }
    let mut width = 1.0f64;
    let mut hi = lo + width;
    while f_k(hi, k)? >= target {
        width *= 2.0;
        hi = lo + width;
        if hi > 1e6 * k as f64 {
            return Err(Error::Numerical(format!(
                "no sign change found up to {hi} for k={k}"
            )));
        }
    }
    let mut iterations = 0u32;
    while hi - lo >= tol {
        let mid = 0.5 * (lo + hi);
        if f_k(mid, k)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
        if iterations > 500 {
            break;
        }
    }
    let c_hat = 0.5 * (lo + hi);
    let residual = (f_k(c_hat, k)? - target).abs();
    Ok(ThresholdResult {
        k,
        c_hat,
        residual,
        iterations,
        asymptotic: asymptotic_c_hat(k),
    })
}
