//! The edge-resampling experiment: per trial, sample G, couple (G-, G+) on
//! the designated pair f, compute the disagreement set D of the localization
//! error and the witness set W, check the structural containment claims
//! exactly, and accumulate the variance-bound statistics.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::approx::{core_phi_local_fast, phi_giant_local_fast, Scratch};
use crate::decomp::{
    components, event_e_giant, event_e_mantle, kcore, log4_threshold, remainder,
};
use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::sample::{make_coupled_pair_at, sample_gnp_with, uniform_pair, CoupledPair, RngStream};
use crate::stats::{fit_log_decay, DecayFit, Moments};

/// Which global object the indicators track.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Giant,
    Core,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Giant => "giant",
            Mode::Core => "core",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "giant" => Ok(Mode::Giant),
            "core" => Ok(Mode::Core),
            other => Err(Error::InvalidParameter(format!(
                "mode must be `giant` or `core`, got `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeConfig {
    pub mode: Mode,
    pub n: usize,
    /// Mean-degree parameter; p = c/n.
    pub c: f64,
    pub ell: usize,
    /// Core order; ignored in giant mode.
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
    /// Resample a uniformly random pair per trial instead of the fixed {0,1}.
    pub random_f: bool,
}

impl ProbeConfig {
    pub fn p(&self) -> f64 {
        self.c / self.n as f64
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter("probe needs n >= 2".into()));
        }
        if self.ell < 1 {
            return Err(Error::InvalidParameter("probe needs ell >= 1".into()));
        }
        if !(self.p() > 0.0 && self.p() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "p = c/n = {} outside (0,1)",
                self.p()
            )));
        }
        if self.mode == Mode::Core && self.k < 2 {
            return Err(Error::InvalidParameter("core mode needs k >= 2".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be >= 1".into()));
        }
        Ok(())
    }
}

/// Everything observed in one resampling trial.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ResampleTrialRecord {
    pub trial: u64,
    pub f_u: Vertex,
    pub f_v: Vertex,
    pub f_was_edge: bool,
    pub event_e: bool,
    pub d_size: usize,
    pub w_size: usize,
    pub claim_subset: bool,
    pub claim_small: bool,
    /// Sum of psi = phi - phi_l over V(G-).
    pub err_minus: i64,
    /// Sum of psi over V(G+).
    pub err_plus: i64,
}

impl ResampleTrialRecord {
    /// Sum of psi on the originally sampled graph (G- or G+ according to
    /// whether f was present), i.e. the per-trial value of Z - Z_tilde_l.
    pub fn err_on_sampled(&self) -> i64 {
        if self.f_was_edge {
            self.err_plus
        } else {
            self.err_minus
        }
    }
}

/// Everything the analysis extracts from one coupled pair.
pub struct PairEvaluation {
    pub event_e: bool,
    pub d: Vec<Vertex>,
    pub w: Vec<Vertex>,
    pub claim_subset: bool,
    pub claim_small: bool,
    pub err_minus: i64,
    pub err_plus: i64,
    violation: Option<String>,
}

impl PairEvaluation {
    /// First hard-check failure, meaningful only under event E.
    pub fn violation(&self) -> Option<&str> {
        self.violation.as_deref()
    }
}

/// The disagreement set D: vertices where phi - phi_l changes between G- and
/// G+. Full recomputation on both graphs; nothing is shared between them.
pub fn compute_d(pair: &CoupledPair, mode: Mode, ell: usize, k: usize) -> Vec<Vertex> {
    evaluate_pair(pair, mode, ell, k).d
}

/// The witness set W = C_u union C_v: components of f's endpoints in the
/// remainder (giant mode) or mantle (core mode) of G-, empty components for
/// endpoints inside the giant / core.
pub fn compute_w(pair: &CoupledPair, mode: Mode, k: usize) -> Vec<Vertex> {
    // ell is irrelevant for W.
    evaluate_pair(pair, mode, 1, k).w
}

/// Full single-pair analysis: D, W, event E, both claims, and the psi sums.
pub fn evaluate_pair(pair: &CoupledPair, mode: Mode, ell: usize, k: usize) -> PairEvaluation {
    let n = pair.g_minus().n();
    let mut scratch = Scratch::new(n);
    match mode {
        Mode::Giant => eval_giant(pair, ell, &mut scratch),
        Mode::Core => eval_core(pair, ell, k, &mut scratch),
    }
}

fn witness_union(
    labeling: &crate::decomp::ComponentLabeling,
    u: Vertex,
    v: Vertex,
) -> Vec<Vertex> {
    let mut w: Vec<Vertex> = Vec::new();
    match (labeling.comp_id(u), labeling.comp_id(v)) {
        (Some(cu), Some(cv)) if cu == cv => w.extend_from_slice(labeling.members(cu)),
        (a, b) => {
            if let Some(cu) = a {
                w.extend_from_slice(labeling.members(cu));
            }
            if let Some(cv) = b {
                w.extend_from_slice(labeling.members(cv));
            }
        }
    }
    w.sort_unstable();
    w
}

fn eval_giant(pair: &CoupledPair, ell: usize, scratch: &mut Scratch) -> PairEvaluation {
    let gm = pair.g_minus();
    let gp = pair.g_plus();
    let n = gm.n();
    let thr = log4_threshold(n);
    let cm = components(gm);
    let cp = components(gp);
    let event_e = event_e_giant(&[&cm, &cp], n);

    let largest_members = match cm.largest() {
        Some(c) => cm.members(c).to_vec(),
        None => Vec::new(),
    };
    let rem_minus = remainder(gm, &largest_members);
    let (u, v) = pair.f();
    let w = witness_union(&rem_minus, u, v);
    let mut in_w = vec![false; n];
    for &x in &w {
        in_w[x as usize] = true;
    }

    let big_minus = cm.largest_size() > thr;
    let big_plus = cp.largest_size() > thr;
    let small_cut = ell.min(thr);

    let mut d: Vec<Vertex> = Vec::new();
    let mut err_minus = 0i64;
    let mut err_plus = 0i64;
    let mut violation: Option<String> = None;

    for x in 0..n as Vertex {
        let phi_m = cm.in_largest(x);
        let phi_p = cp.in_largest(x);
        // phi_l = 1 on a giant exceeding the threshold: the ball either meets
        // radius ell or swallows the whole component, which is > thr.
        let phil_m = if phi_m && big_minus {
            true
        } else if cm.comp_size_of_vertex(x) <= small_cut {
            false
        } else {
            phi_giant_local_fast(gm, x, ell, thr, scratch)
        };
        let phil_p = if phi_p && big_plus {
            true
        } else if cp.comp_size_of_vertex(x) <= small_cut {
            false
        } else {
            phi_giant_local_fast(gp, x, ell, thr, scratch)
        };
        let psi_m = phi_m as i64 - phil_m as i64;
        let psi_p = phi_p as i64 - phil_p as i64;
        err_minus += psi_m;
        err_plus += psi_p;
        if psi_m != psi_p {
            d.push(x);
        }
        if event_e && !in_w[x as usize] && violation.is_none() {
            // Outside W the resampled edge cannot reach x's remainder
            // component, so neither membership nor its localization may move.
            if phi_m != phi_p {
                violation = Some(format!(
                    "locality: phi changed at vertex {x} outside W (|W|={})",
                    w.len()
                ));
            } else if phil_m != phil_p {
                violation = Some(format!(
                    "locality: phi_l changed at vertex {x} outside W (|W|={})",
                    w.len()
                ));
            }
        }
        // One-sided error on the event: a giant vertex is never missed by
        // the local rule once the giant exceeds the threshold.
        if event_e && violation.is_none() {
            if (phi_m && big_minus && !phil_m) || (phi_p && big_plus && !phil_p) {
                violation = Some(format!("one-sidedness: phi=1, phi_l=0 at vertex {x}"));
            }
        }
    }

    let claim_subset = d.iter().all(|&x| in_w[x as usize]);
    let claim_small = w.len() >= ell || d.is_empty();
    if event_e && violation.is_none() {
        if !claim_subset {
            let bad = d.iter().find(|&&x| !in_w[x as usize]).unwrap();
            violation = Some(format!(
                "claim D subset of W failed: vertex {bad} in D not in W (|D|={}, |W|={})",
                d.len(),
                w.len()
            ));
        } else if !claim_small {
            violation = Some(format!(
                "claim |W| < ell => D empty failed: |W|={} < ell={} but |D|={}",
                w.len(),
                ell,
                d.len()
            ));
        }
    }

    PairEvaluation {
        event_e,
        d,
        w,
        claim_subset,
        claim_small,
        err_minus,
        err_plus,
        violation,
    }
}

fn eval_core(pair: &CoupledPair, ell: usize, k: usize, scratch: &mut Scratch) -> PairEvaluation {
    let gm = pair.g_minus();
    let gp = pair.g_plus();
    let n = gm.n();
    let km = kcore(gm, k);
    let kp = kcore(gp, k);
    let event_e = event_e_mantle(&[&km.mantle, &kp.mantle], n);

    let (u, v) = pair.f();
    let w = witness_union(&km.mantle, u, v);
    let mut in_w = vec![false; n];
    for &x in &w {
        in_w[x as usize] = true;
    }

    let mut d: Vec<Vertex> = Vec::new();
    let mut err_minus = 0i64;
    let mut err_plus = 0i64;
    let mut violation: Option<String> = None;
    // Memo per mantle(-) component: does it survive unchanged into the
    // mantle of G+? (Vertex set equal; the induced subgraphs and edge
    // boundaries then agree automatically, since f avoids the component.)
    let mut comp_same: Vec<Option<bool>> = vec![None; km.mantle.num_components()];

    for x in 0..n as Vertex {
        if km.in_core(x) {
            // The core only grows when an edge is added, so psi = 0 on both
            // sides; verified wholesale in tests.
            debug_assert!(kp.in_core(x));
            continue;
        }
        let phi_m = false;
        let phil_m = core_phi_local_fast(gm, x, ell, k, &km, scratch);
        let phi_p = kp.in_core(x);
        let phil_p = if phi_p {
            true
        } else {
            core_phi_local_fast(gp, x, ell, k, &kp, scratch)
        };
        let psi_m = phi_m as i64 - phil_m as i64;
        let psi_p = phi_p as i64 - phil_p as i64;
        err_minus += psi_m;
        err_plus += psi_p;
        if psi_m != psi_p {
            d.push(x);
        }
        if event_e && !in_w[x as usize] && violation.is_none() {
            if phi_m != phi_p {
                violation = Some(format!(
                    "locality: vertex {x} outside W entered the core when f was added"
                ));
            } else {
                let cid = km.mantle.comp_id(x).expect("x is a mantle(-) vertex");
                let same = *comp_same[cid as usize].get_or_insert_with(|| {
                    let members = km.mantle.members(cid);
                    let target = kp.mantle.comp_id(x);
                    target.is_some()
                        && target.map(|t| kp.mantle.size_of(t)) == Some(members.len())
                        && members.iter().all(|&y| kp.mantle.comp_id(y) == target)
                });
                // With identical components (and f disjoint from them) the
                // induced subgraph and edge boundary agree across G-/G+, so
                // the localization may not move.
                if same && phil_m != phil_p {
                    violation = Some(format!(
                        "locality: phi_l changed at vertex {x} outside W with identical mantle component"
                    ));
                }
            }
        }
    }

    let claim_subset = d.iter().all(|&x| in_w[x as usize]);
    let claim_small = w.len() >= ell || d.is_empty();
    if event_e && violation.is_none() {
        if !claim_subset {
            let bad = d.iter().find(|&&x| !in_w[x as usize]).unwrap();
            violation = Some(format!(
                "claim D subset of W failed: vertex {bad} in D not in W (|D|={}, |W|={})",
                d.len(),
                w.len()
            ));
        } else if !claim_small {
            violation = Some(format!(
                "claim |W| < ell => D empty failed: |W|={} < ell={} but |D|={}",
                w.len(),
                ell,
                d.len()
            ));
        }
    }

    PairEvaluation {
        event_e,
        d,
        w,
        claim_subset,
        claim_small,
        err_minus,
        err_plus,
        violation,
    }
}

fn run_trial(config: &ProbeConfig, trial: u64) -> Result<ResampleTrialRecord> {
    let stream = RngStream::new(config.seed, trial);
    let mut rng = stream.rng();
    let g = sample_gnp_with(config.n, config.p(), &mut rng)?;
    let (u, v) = if config.random_f {
        uniform_pair(config.n, &mut rng)
    } else {
        (0, 1)
    };
    let pair = make_coupled_pair_at(&g, u, v)?;
    let mut scratch = Scratch::new(config.n);
    let eval = match config.mode {
        Mode::Giant => eval_giant(&pair, config.ell, &mut scratch),
        Mode::Core => eval_core(&pair, config.ell, config.k, &mut scratch),
    };
    if eval.event_e {
        if let Some(detail) = eval.violation {
            // A theorem conditional on event E failed: abort loudly with the
            // reproduction coordinates, never average it away.
            return Err(Error::ClaimViolation {
                mode: config.mode.as_str(),
                trial,
                seed: config.seed,
                detail,
            });
        }
    }
    Ok(ResampleTrialRecord {
        trial,
        f_u: pair.f().0,
        f_v: pair.f().1,
        f_was_edge: pair.f_was_edge(),
        event_e: eval.event_e,
        d_size: eval.d.len(),
        w_size: eval.w.len(),
        claim_subset: eval.claim_subset,
        claim_small: eval.claim_small,
        err_minus: eval.err_minus,
        err_plus: eval.err_plus,
    })
}

/// Runs all trials (in parallel, one RNG stream per trial) and returns the
/// records in trial order. Any hard-check violation under event E aborts the
/// whole run.
pub fn run_probe(config: &ProbeConfig) -> Result<Vec<ResampleTrialRecord>> {
    config.validate()?;
    (0..config.trials)
        .into_par_iter()
        .map(|trial| run_trial(config, trial))
        .collect()
}

/// The Efron-Stein upper bound 2 M^2 p (1-p) n^2 E[|D|^2], estimated by the
/// sample mean of |D|^2. Valid with M = 1 here since |phi - phi_l| <= 1.
pub fn es_bound(records: &[ResampleTrialRecord], p: f64, n: usize, m_bound: f64) -> f64 {
    assert!(!records.is_empty(), "es_bound needs at least one record");
    let mean_d2 = records
        .iter()
        .map(|r| (r.d_size as f64) * (r.d_size as f64))
        .sum::<f64>()
        / records.len() as f64;
    2.0 * m_bound * m_bound * p * (1.0 - p) * (n as f64) * (n as f64) * mean_d2
}

/// One row of the witness tail table: E[|W|^2 1{|W| >= ell} 1_E].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TailRow {
    pub ell: usize,
    pub expectation: f64,
}

pub fn tail_profile(records: &[ResampleTrialRecord], ell_grid: &[usize]) -> Vec<TailRow> {
    let n = records.len().max(1) as f64;
    ell_grid
        .iter()
        .map(|&ell| {
            let sum: f64 = records
                .iter()
                .filter(|r| r.event_e && r.w_size >= ell)
                .map(|r| (r.w_size as f64) * (r.w_size as f64))
                .sum();
            TailRow { ell, expectation: sum / n }
        })
        .collect()
}

/// Histogram of |W| over all trials.
pub fn w_histogram(records: &[ResampleTrialRecord]) -> Vec<(usize, u64)> {
    let mut hist: std::collections::BTreeMap<usize, u64> = Default::default();
    for r in records {
        *hist.entry(r.w_size).or_insert(0) += 1;
    }
    hist.into_iter().collect()
}

/// Aggregated probe output for the JSON summary.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeSummary {
    pub trials: u64,
    pub event_e_trials: u64,
    pub event_e_failures: u64,
    pub claim_subset_holds_on_e: bool,
    pub claim_small_holds_on_e: bool,
    pub mean_d2: f64,
    pub es_bound: f64,
    /// Sample variance of Z - Z_tilde_l on the sampled graph.
    pub var_err_sampled: f64,
    pub var_err_standard_error: f64,
    pub tail: Vec<TailRow>,
    pub w_histogram: Vec<(usize, u64)>,
    pub w_decay: Option<DecayFit>,
}

pub fn summarize_probe(config: &ProbeConfig, records: &[ResampleTrialRecord]) -> ProbeSummary {
    let event_e_trials = records.iter().filter(|r| r.event_e).count() as u64;
    let mut err_moments = Moments::new();
    for r in records {
        err_moments.push(r.err_on_sampled() as f64);
    }
    let mean_d2 = records
        .iter()
        .map(|r| (r.d_size as f64) * (r.d_size as f64))
        .sum::<f64>()
        / records.len().max(1) as f64;
    let ell_grid: Vec<usize> = (1..=16).collect();
    let hist = w_histogram(records);
    ProbeSummary {
        trials: records.len() as u64,
        event_e_trials,
        event_e_failures: records.len() as u64 - event_e_trials,
        claim_subset_holds_on_e: records.iter().all(|r| !r.event_e || r.claim_subset),
        claim_small_holds_on_e: records.iter().all(|r| !r.event_e || r.claim_small),
        mean_d2,
        es_bound: es_bound(records, config.p(), config.n, 1.0),
        var_err_sampled: err_moments.variance(),
        var_err_standard_error: err_moments.variance_standard_error(),
        tail: tail_profile(records, &ell_grid),
        w_histogram: hist.clone(),
        w_decay: fit_log_decay(&hist, 3, 30, 5),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::sample::make_coupled_pair;

    #[test]
    fn modes_parse() {
        assert_eq!("giant".parse::<Mode>().unwrap(), Mode::Giant);
        assert_eq!("core".parse::<Mode>().unwrap(), Mode::Core);
        assert!("big".parse::<Mode>().is_err());
    }

    #[test]
    fn d_empty_when_core_unchanged() {
        // K5 minus one edge: the 3-core is all of K5 both with and without
        // f = {0,1}, so psi is identically zero and D = {}.
        let g = Graph::complete(5);
        let pair = make_coupled_pair(&g).unwrap();
        assert_eq!(pair.g_minus().m(), 9);
        for ell in 1..=3 {
            let d = compute_d(&pair, Mode::Core, ell, 3);
            assert!(d.is_empty(), "ell={ell}: D={d:?}");
        }
    }

    #[test]
    fn d_on_empty_base_graph() {
        // Oracle walk-through (giant mode, n=3, ell=1, thr=2):
        //   G-: all isolated; the designated largest is {0}, so
        //       phi-(0)=1, phi_l-(0)=0 (no boundary, |B|=1 <= 2): psi-(0)=1.
        //   G+: edge {0,1}; phi+(0)=1 and the ball of 0 reaches distance 1,
        //       so phi_l+(0)=1: psi+(0)=0.
        //   Vertices 1, 2 have psi = 0 on both sides.
        // Hence D = {0} exactly.
        let g = Graph::empty(3);
        let pair = make_coupled_pair(&g).unwrap();
        let d = compute_d(&pair, Mode::Giant, 1, 0);
        assert_eq!(d, vec![0]);
    }

    #[test]
    fn w_conventions() {
        // Endpoints inside the giant of G-: W is empty. The cycle keeps
        // {0..6} connected after f = {0,1} is removed.
        let cycle7: Vec<(Vertex, Vertex)> =
            (0..7).map(|i| (i, ((i as usize + 1) % 7) as Vertex)).collect();
        let g = Graph::from_edges(10, cycle7).unwrap();
        // component {0..6} is largest; 7, 8, 9 are singletons
        let pair = make_coupled_pair(&g).unwrap(); // f = {0,1} inside largest
        let w = compute_w(&pair, Mode::Giant, 0);
        assert!(w.is_empty());

        // u isolated outside the giant, v inside: W = {u}.
        let edges: Vec<(Vertex, Vertex)> = (1..7).map(|i| (i, i + 1)).collect();
        let g = Graph::from_edges(8, edges).unwrap();
        let pair = make_coupled_pair(&g).unwrap(); // f = {0,1}; 0 isolated
        let w = compute_w(&pair, Mode::Giant, 0);
        assert_eq!(w, vec![0]);

        // u, v in one small component of size s: |W| = s.
        let g = Graph::from_edges(12, vec![(0, 1), (1, 2), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)])
            .unwrap();
        // largest is {3..8}; f = {0,1} lies in the 3-vertex component {0,1,2}
        let pair = make_coupled_pair(&g).unwrap();
        let w = compute_w(&pair, Mode::Giant, 0);
        assert_eq!(w, vec![0, 1, 2]);
    }

    #[test]
    fn probe_runs_and_claims_hold_small_scale() {
        let config = ProbeConfig {
            mode: Mode::Giant,
            n: 400,
            c: 2.0,
            ell: 3,
            k: 0,
            trials: 200,
            seed: 7,
            random_f: false,
        };
        let records = run_probe(&config).unwrap();
        assert_eq!(records.len(), 200);
        for r in &records {
            if r.event_e {
                assert!(r.claim_subset);
                assert!(r.claim_small);
            }
            assert!(r.d_size <= r.w_size || !r.claim_subset || !r.event_e);
        }
        let summary = summarize_probe(&config, &records);
        assert!(summary.es_bound >= 0.0);
        assert!(summary.claim_subset_holds_on_e);
    }

    #[test]
    fn probe_core_mode_small_scale() {
        let config = ProbeConfig {
            mode: Mode::Core,
            n: 300,
            c: 8.0,
            ell: 3,
            k: 3,
            trials: 100,
            seed: 11,
            random_f: false,
        };
        let records = run_probe(&config).unwrap();
        for r in &records {
            if r.event_e {
                assert!(r.claim_subset && r.claim_small);
            }
        }
    }

    #[test]
    fn probe_random_f_mode() {
        let config = ProbeConfig {
            mode: Mode::Giant,
            n: 200,
            c: 1.5,
            ell: 2,
            k: 0,
            trials: 60,
            seed: 3,
            random_f: true,
        };
        let records = run_probe(&config).unwrap();
        assert!(records.iter().any(|r| (r.f_u, r.f_v) != (0, 1)));
    }

    #[test]
    fn probe_is_deterministic() {
        let config = ProbeConfig {
            mode: Mode::Giant,
            n: 150,
            c: 2.0,
            ell: 2,
            k: 0,
            trials: 40,
            seed: 99,
            random_f: false,
        };
        let a = run_probe(&config).unwrap();
        let b = run_probe(&config).unwrap();
        let fmt = |rs: &[ResampleTrialRecord]| {
            rs.iter()
                .map(|r| format!("{:?}", r))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(fmt(&a), fmt(&b));
    }

    #[test]
    fn es_bound_zero_when_d_always_empty() {
        let r = ResampleTrialRecord {
            trial: 0,
            f_u: 0,
            f_v: 1,
            f_was_edge: false,
            event_e: true,
            d_size: 0,
            w_size: 2,
            claim_subset: true,
            claim_small: true,
            err_minus: 0,
            err_plus: 0,
        };
        let records = vec![r; 10];
        assert_eq!(es_bound(&records, 0.01, 100, 1.0), 0.0);
    }

    #[test]
    fn tail_profile_ell_one_includes_all_nonzero_w() {
        let mk = |w_size: usize, event_e: bool| ResampleTrialRecord {
            trial: 0,
            f_u: 0,
            f_v: 1,
            f_was_edge: false,
            event_e,
            d_size: 0,
            w_size,
            claim_subset: true,
            claim_small: true,
            err_minus: 0,
            err_plus: 0,
        };
        let records = vec![mk(0, true), mk(2, true), mk(3, true), mk(5, false)];
        let rows = tail_profile(&records, &[1, 3]);
        // ell = 1: every nonzero |W| with event E contributes.
        assert_eq!(rows[0].expectation, (4.0 + 9.0) / 4.0);
        // ell = 3: only |W| >= 3.
        assert_eq!(rows[1].expectation, 9.0 / 4.0);
        // Tail is decreasing in ell.
        assert!(rows[1].expectation <= rows[0].expectation);
    }
}
