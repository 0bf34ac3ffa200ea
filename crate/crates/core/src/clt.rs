//! Monte Carlo verification harness: sample the order of the giant component
//! or the k-core, standardize, and measure how normal the result looks.

use rayon::prelude::*;
use serde::Serialize;

use crate::approx::{core_counts, default_truncation_bound, giant_counts, Scratch};
use crate::decomp::{components, kcore, log4_threshold, remainder};
use crate::error::{Error, Result};
use crate::probe::Mode;
use crate::sample::{sample_gnp_with, RngStream};
use crate::stats::{fit_log_decay, ks_distance_normal, DecayFit, Moments};
use crate::threshold::solve_c_hat;

#[derive(Clone, Debug, Serialize)]
pub struct CltConfig {
    pub mode: Mode,
    pub n_grid: Vec<usize>,
    /// Mean-degree parameter; p = c/n.
    pub c: f64,
    /// Core order; ignored in giant mode.
    pub k: usize,
    /// When set, also evaluate the localized and truncated counts per trial.
    pub ell: Option<usize>,
    /// Truncation size bound override; defaults to t(c, ell) capped at
    /// ceil((ln n)^4).
    pub trunc: Option<usize>,
    pub trials: u64,
    pub seed: u64,
    /// Skip the theorem-hypothesis guard for exploratory runs.
    pub force: bool,
}

/// One sampled functional value, with the optional local approximations.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CltTrial {
    pub trial: u64,
    pub n: usize,
    pub z: u64,
    pub z_tilde: Option<u64>,
    pub z_hat: Option<u64>,
}

/// Verifies the theorem hypothesis for the requested mode: c > 1 for the
/// giant component, c > c_hat(k) for the k-core.
pub fn check_hypothesis(mode: Mode, c: f64, k: usize) -> Result<()> {
    match mode {
        Mode::Giant => {
            if c <= 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "giant-mode CLT requires supercritical c > 1, got c = {c}; \
                     pass force for an exploratory run"
                )));
            }
        }
        Mode::Core => {
            if k < 2 {
                return Err(Error::InvalidParameter("core mode needs k >= 2".into()));
            }
            let thr = solve_c_hat(k as u64, 1e-12)?;
            if c <= thr.c_hat {
                return Err(Error::InvalidParameter(format!(
                    "core-mode CLT requires c > c_hat({k}) = {:.6}, got c = {c}; \
                     pass force for an exploratory run",
                    thr.c_hat
                )));
            }
        }
    }
    Ok(())
}

/// Runs `config.trials` independent samples at size `n` (grid position
/// `n_index`); trial t of grid slot i draws from stream i * 2^32 + t.
pub fn run_clt_for_n(config: &CltConfig, n_index: usize, n: usize) -> Result<Vec<CltTrial>> {
    let p = config.c / n as f64;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p = c/n = {p} outside (0,1)")));
    }
    (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let stream = RngStream::new(config.seed, ((n_index as u64) << 32) | trial);
            let mut rng = stream.rng();
            let g = sample_gnp_with(n, p, &mut rng)?;
            let mut record = CltTrial { trial, n, z: 0, z_tilde: None, z_hat: None };
            match config.mode {
                Mode::Giant => {
                    let labeling = components(&g);
                    record.z = labeling.largest_size() as u64;
                    if let Some(ell) = config.ell {
                        let t = config
                            .trunc
                            .unwrap_or_else(|| default_truncation_bound(config.c, ell, n));
                        let mut scratch = Scratch::new(n);
                        let (zt, zh, diff) = giant_counts(&g, &labeling, ell, t, &mut scratch);
                        // |Z - Z_tilde| <= #{v: phi != phi_l}, exactly.
                        assert!(record.z.abs_diff(zt) <= diff);
                        record.z_tilde = Some(zt);
                        record.z_hat = Some(zh);
                    }
                }
                Mode::Core => {
                    let core = kcore(&g, config.k);
                    record.z = core.core_size() as u64;
                    if let Some(ell) = config.ell {
                        let t = config
                            .trunc
                            .unwrap_or_else(|| default_truncation_bound(config.c, ell, n));
                        let mut scratch = Scratch::new(n);
                        let (yt, yh, diff) = core_counts(&g, &core, ell, t, &mut scratch);
                        assert!(record.z.abs_diff(yt) <= diff);
                        record.z_tilde = Some(yt);
                        record.z_hat = Some(yh);
                    }
                }
            }
            Ok(record)
        })
        .collect()
}

/// Runs the whole n-grid. Refuses configurations outside the theorems'
/// hypotheses unless `force` is set.
pub fn run_clt(config: &CltConfig) -> Result<Vec<(usize, Vec<CltTrial>)>> {
    if !config.force {
        check_hypothesis(config.mode, config.c, config.k)?;
        if config.trials < 100 {
            return Err(Error::InvalidParameter(
                "CLT runs need at least 100 trials (or force for exploration)".into(),
            ));
        }
    }
    if config.n_grid.is_empty() {
        return Err(Error::InvalidParameter("empty n grid".into()));
    }
    let mut out = Vec::new();
    for (i, &n) in config.n_grid.iter().enumerate() {
        out.push((n, run_clt_for_n(config, i, n)?));
    }
    Ok(out)
}

/// Finite-n normality proxy of a sample.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NormalityReport {
    pub count: u64,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    /// Sup distance between the empirical CDF of the standardized sample and
    /// the standard normal CDF.
    pub ks_distance: f64,
}

/// Standardizes by the sample mean and sample standard deviation, then
/// reports moment statistics and the exact one-sample KS distance against
/// the standard normal.
pub fn normality(values: &[f64]) -> Result<NormalityReport> {
    if values.len() < 100 {
        return Err(Error::InvalidParameter(format!(
            "normality needs at least 100 samples, got {}",
            values.len()
        )));
    }
    let moments = Moments::from_slice(values);
    let variance = moments.variance();
    if variance <= 0.0 {
        return Err(Error::DegenerateInput(
            "sample variance is zero; nothing to standardize".into(),
        ));
    }
    let sd = variance.sqrt();
    let standardized: Vec<f64> = values.iter().map(|x| (x - moments.mean()) / sd).collect();
    // Standardization identity: mean 0, variance 1 up to rounding.
    let check = Moments::from_slice(&standardized);
    debug_assert!(check.mean().abs() < 1e-12);
    debug_assert!((check.variance() - 1.0).abs() < 1e-12);
    Ok(NormalityReport {
        count: values.len() as u64,
        mean: moments.mean(),
        variance,
        skewness: moments.skewness(),
        excess_kurtosis: moments.excess_kurtosis(),
        ks_distance: ks_distance_normal(&standardized),
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VarianceRow {
    pub n: usize,
    pub variance: f64,
    pub var_over_n: f64,
    pub zero_variance: bool,
}

/// Var(Z)/n across the n-grid with pairwise-ratio diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct VarianceScaling {
    pub rows: Vec<VarianceRow>,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    /// Every ordered pairwise ratio of Var/n lies inside the bracket.
    pub pairwise_within: bool,
    /// Rows with exactly zero variance (a deterministic functional).
    pub flagged_zero: Vec<usize>,
}

pub fn variance_scaling(per_n: &[(usize, f64)], bracket_lo: f64, bracket_hi: f64) -> VarianceScaling {
    let rows: Vec<VarianceRow> = per_n
        .iter()
        .map(|&(n, variance)| VarianceRow {
            n,
            variance,
            var_over_n: variance / n as f64,
            zero_variance: variance == 0.0,
        })
        .collect();
    let mut pairwise_within = true;
    for a in &rows {
        for b in &rows {
            if a.n == b.n || a.var_over_n == 0.0 {
                continue;
            }
            let ratio = b.var_over_n / a.var_over_n;
            if !(bracket_lo..=bracket_hi).contains(&ratio) {
                pairwise_within = false;
            }
        }
    }
    let flagged_zero = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.zero_variance)
        .map(|(i, _)| i)
        .collect();
    VarianceScaling { rows, bracket_lo, bracket_hi, pairwise_within, flagged_zero }
}

/// Per-n digest combining the normality report with the approximation
/// variances, when the run evaluated them.
#[derive(Clone, Debug, Serialize)]
pub struct CltNReport {
    pub n: usize,
    pub trials: u64,
    pub z: NormalityReport,
    pub var_over_n: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub var_z_tilde: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub var_z_hat: Option<f64>,
    /// Var(Z_hat)/Var(Z).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub var_ratio_hat_over_z: Option<f64>,
    /// Var(Z - Z_tilde)/n.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub var_local_err_over_n: Option<f64>,
    /// Var(Z_tilde - Z_hat)/n.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub var_trunc_err_over_n: Option<f64>,
    /// Var(Z_hat)/n^(2/3); the truncation CLT needs this to be large.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub var_z_hat_over_n23: Option<f64>,
}

pub fn summarize_clt_n(n: usize, trials: &[CltTrial]) -> Result<CltNReport> {
    let zs: Vec<f64> = trials.iter().map(|t| t.z as f64).collect();
    let z = normality(&zs)?;
    let mut report = CltNReport {
        n,
        trials: trials.len() as u64,
        z,
        var_over_n: z.variance / n as f64,
        var_z_tilde: None,
        var_z_hat: None,
        var_ratio_hat_over_z: None,
        var_local_err_over_n: None,
        var_trunc_err_over_n: None,
        var_z_hat_over_n23: None,
    };
    if trials.iter().all(|t| t.z_tilde.is_some() && t.z_hat.is_some()) {
        let mut tilde = Moments::new();
        let mut hat = Moments::new();
        let mut local_err = Moments::new();
        let mut trunc_err = Moments::new();
        for t in trials {
            let zt = t.z_tilde.unwrap() as f64;
            let zh = t.z_hat.unwrap() as f64;
            tilde.push(zt);
            hat.push(zh);
            local_err.push(t.z as f64 - zt);
            trunc_err.push(zt - zh);
        }
        report.var_z_tilde = Some(tilde.variance());
        report.var_z_hat = Some(hat.variance());
        report.var_ratio_hat_over_z = Some(hat.variance() / z.variance);
        report.var_local_err_over_n = Some(local_err.variance() / n as f64);
        report.var_trunc_err_over_n = Some(trunc_err.variance() / n as f64);
        report.var_z_hat_over_n23 = Some(hat.variance() / (n as f64).powf(2.0 / 3.0));
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct MantleConfig {
    pub mode: Mode,
    pub n: usize,
    pub c: f64,
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
}

/// Component-size profile of the remainder (G minus the largest component)
/// or the mantle (G minus the k-core).
#[derive(Clone, Debug, Serialize)]
pub struct MantleReport {
    /// The smallness line ceil((ln n)^4).
    pub threshold: usize,
    pub trials: u64,
    /// Trials whose largest remainder/mantle component stays below the line.
    pub trials_below_threshold: u64,
    pub frac_below_threshold: f64,
    pub max_sizes: Vec<usize>,
    /// Aggregated component-size histogram across trials.
    pub histogram: Vec<(usize, u64)>,
    pub decay: Option<DecayFit>,
}

pub fn mantle_profile(config: &MantleConfig) -> Result<MantleReport> {
    if config.trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let p = config.c / config.n as f64;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParameter(format!("p = c/n = {p} outside (0,1)")));
    }
    let per_trial: Vec<(usize, Vec<(usize, u64)>)> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let stream = RngStream::new(config.seed, trial);
            let mut rng = stream.rng();
            let g = sample_gnp_with(config.n, p, &mut rng)?;
            let labeling = match config.mode {
                Mode::Giant => {
                    let comps = components(&g);
                    let largest = match comps.largest() {
                        Some(c) => comps.members(c).to_vec(),
                        None => Vec::new(),
                    };
                    remainder(&g, &largest)
                }
                Mode::Core => kcore(&g, config.k).mantle,
            };
            Ok((labeling.max_size(), labeling.size_histogram()))
        })
        .collect::<Result<_>>()?;
    let threshold = log4_threshold(config.n);
    let mut histogram: std::collections::BTreeMap<usize, u64> = Default::default();
    let mut max_sizes = Vec::with_capacity(per_trial.len());
    for (max_size, hist) in per_trial {
        max_sizes.push(max_size);
        for (size, count) in hist {
            *histogram.entry(size).or_insert(0) += count;
        }
    }
    let below = max_sizes.iter().filter(|&&m| m < threshold).count() as u64;
    let histogram: Vec<(usize, u64)> = histogram.into_iter().collect();
    Ok(MantleReport {
        threshold,
        trials: config.trials,
        trials_below_threshold: below,
        frac_below_threshold: below as f64 / config.trials as f64,
        max_sizes,
        histogram: histogram.clone(),
        decay: fit_log_decay(&histogram, 3, 30, 5),
    })
}
