//! gnplab command line: sample G(n,p), solve the Poisson threshold equation,
//! run the edge-resampling probe, the CLT harness, per-vertex censuses, and
//! remainder/mantle profiles.
//!
//! Exit codes: 0 success, 1 usage error, 2 claim-violation abort, 3 I/O
//! error.

mod out;

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use gnplab::approx::{default_truncation_bound, phi_core_local, phi_giant_local};
use gnplab::clt::{
    mantle_profile, run_clt, summarize_clt_n, variance_scaling, CltConfig, MantleConfig,
};
use gnplab::decomp::{components, kcore, log4_threshold};
use gnplab::probe::{
    evaluate_pair, run_probe, summarize_probe, Mode, ProbeConfig, ResampleTrialRecord,
};
use gnplab::sample::uniform_pair;
use gnplab::threshold::solve_c_hat;
use gnplab::{ball, make_coupled_pair, make_coupled_pair_at, Error, Graph, RngStream};

use out::{fmt_f64, io_err, CsvWriter, Meta};

#[derive(Parser)]
#[command(name = "gnplab", version, about = "Monte Carlo laboratory for giant components and k-cores of sparse random graphs")]
struct Cli {
    /// Worker threads for trial parallelism (default: GNPLAB_THREADS or all
    /// cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample one G(n, c/n) and write it as an edge list.
    Sample(SampleArgs),
    /// Solve x P[Poisson(x) <= k-1] = 1/e for the threshold c_hat(k).
    Threshold(ThresholdArgs),
    /// Edge-resampling probe: D, W, event E, and the containment claims.
    Probe(ProbeArgs),
    /// Monte Carlo CLT harness for |L| or |V(K)| across an n grid.
    Clt(CltArgs),
    /// Per-vertex ball census (size, boundary, tree shape, phi, phi_l).
    Census(CensusArgs),
    /// Component-size profile of the remainder / mantle.
    Mantle(MantleArgs),
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    /// Mean degree; p = c/n.
    #[arg(long, conflicts_with = "p")]
    c: Option<f64>,
    /// Edge probability (alternative to --c).
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    k: u64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long)]
    mode: String,
    #[arg(long, required_unless_present = "input")]
    n: Option<usize>,
    #[arg(long, required_unless_present = "input")]
    c: Option<f64>,
    #[arg(long)]
    ell: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Resample a uniformly random pair f per trial instead of the fixed {0,1}.
    #[arg(long)]
    random_f: bool,
    /// Run on a fixed input graph instead of sampling per trial.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CltArgs {
    #[arg(long)]
    mode: String,
    /// One or more sizes, comma separated.
    #[arg(long, value_delimiter = ',', required_unless_present = "input")]
    n: Vec<usize>,
    #[arg(long, required_unless_present = "input")]
    c: Option<f64>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Evaluate the localized counts Z_tilde / Z_hat at this radius.
    #[arg(long)]
    ell: Option<usize>,
    /// Truncation size bound override.
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, default_value_t = 2000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip the theorem-hypothesis guard (exploratory runs).
    #[arg(long)]
    force: bool,
    /// Evaluate the functional once on a fixed input graph.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    mode: String,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, required_unless_present = "input")]
    n: Option<usize>,
    #[arg(long, required_unless_present = "input")]
    c: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    ell: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MantleArgs {
    #[arg(long)]
    mode: String,
    #[arg(long, required_unless_present = "input")]
    n: Option<usize>,
    #[arg(long, required_unless_present = "input")]
    c: Option<f64>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Profile a fixed input graph instead of sampling.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit 2 on its own; the contract says usage errors are 1.
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let threads = cli
        .threads
        .or_else(|| std::env::var("GNPLAB_THREADS").ok().and_then(|s| s.parse().ok()));
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match dispatch(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::ClaimViolation { .. } => 2,
                Error::Io { .. } => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<(), Error> {
    match cmd {
        Cmd::Sample(args) => run_sample(args),
        Cmd::Threshold(args) => run_threshold(args),
        Cmd::Probe(args) => run_probe_cmd(args),
        Cmd::Clt(args) => run_clt_cmd(args),
        Cmd::Census(args) => run_census(args),
        Cmd::Mantle(args) => run_mantle(args),
    }
}

fn read_graph(path: &Path) -> Result<Graph, Error> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    Graph::read_edge_list(&mut BufReader::new(file))
}

fn effective_p(n: usize, c: Option<f64>, p: Option<f64>) -> Result<f64, Error> {
    match (c, p) {
        (Some(_), Some(_)) => Err(Error::InvalidParameter("pass --c or --p, not both".into())),
        (Some(c), None) => Ok(c / n as f64),
        (None, Some(p)) => Ok(p),
        (None, None) => Err(Error::InvalidParameter("one of --c / --p is required".into())),
    }
}

fn run_sample(args: SampleArgs) -> Result<(), Error> {
    let p = effective_p(args.n, args.c, args.p)?;
    let g = gnplab::sample_gnp(args.n, p, &RngStream::new(args.seed, 0))?;
    let meta = Meta::new(
        "sample",
        args.seed,
        json!({ "n": args.n, "p": p, "c": args.c, "seed": args.seed }),
    );
    let mut w = out::create_file(&args.out)?;
    use std::io::Write;
    writeln!(w, "{}", meta.comment_line()).map_err(|e| io_err(&args.out, e))?;
    g.write_edge_list(&mut w).map_err(|e| io_err(&args.out, e))?;
    eprintln!("wrote {} (n={}, m={})", args.out.display(), g.n(), g.m());
    Ok(())
}

fn run_threshold(args: ThresholdArgs) -> Result<(), Error> {
    let r = solve_c_hat(args.k, args.tol)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "k": r.k,
            "c_hat": r.c_hat,
            "residual": r.residual,
            "asymptotic": r.asymptotic,
        }))
        .expect("threshold result serializes")
    );
    Ok(())
}

const PROBE_HEADER: &str =
    "trial,n,c,ell,k,mode,f_u,f_v,f_was_edge,event_e,d_size,w_size,claim_subset,claim_small,err_minus,err_plus";

fn probe_row(r: &ResampleTrialRecord, n: usize, c: f64, ell: usize, k: usize, mode: Mode) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.trial,
        n,
        fmt_f64(c),
        ell,
        k,
        mode,
        r.f_u,
        r.f_v,
        r.f_was_edge,
        r.event_e,
        r.d_size,
        r.w_size,
        r.claim_subset,
        r.claim_small,
        r.err_minus,
        r.err_plus
    )
}

fn run_probe_cmd(args: ProbeArgs) -> Result<(), Error> {
    let mode: Mode = args.mode.parse()?;
    let records;
    let (n, c);
    if let Some(path) = &args.input {
        let g = read_graph(path)?;
        n = g.n();
        c = args.c.unwrap_or(2.0 * g.m() as f64 / g.n() as f64);
        if args.trials > 1 && !args.random_f {
            return Err(Error::InvalidParameter(
                "probing a fixed graph with fixed f repeats one trial; pass --random-f or --trials 1"
                    .into(),
            ));
        }
        records = probe_fixed_graph(&g, mode, &args)?;
    } else {
        n = args.n.unwrap();
        c = args.c.unwrap();
        let config = ProbeConfig {
            mode,
            n,
            c,
            ell: args.ell,
            k: args.k,
            trials: args.trials,
            seed: args.seed,
            random_f: args.random_f,
        };
        records = run_probe(&config)?;
    }
    let config_json = json!({
        "mode": mode, "n": n, "c": c, "ell": args.ell, "k": args.k,
        "trials": args.trials, "seed": args.seed, "random_f": args.random_f,
        "input": args.input.as_ref().map(|p| p.display().to_string()),
    });
    let meta = Meta::new("probe", args.seed, config_json);
    let mut csv = CsvWriter::new(&args.out.join("probe_trials.csv"), &meta, PROBE_HEADER)?;
    for r in &records {
        csv.row(&probe_row(r, n, c, args.ell, args.k, mode))?;
    }
    csv.finish()?;
    let summary_config = ProbeConfig {
        mode,
        n,
        c,
        ell: args.ell,
        k: args.k,
        trials: records.len() as u64,
        seed: args.seed,
        random_f: args.random_f,
    };
    let summary = summarize_probe(&summary_config, &records);
    out::write_json_report(&args.out.join("probe_summary.json"), &meta, &summary)?;
    eprintln!(
        "probe done: {} trials, event E in {}, es_bound {:.6e}",
        summary.trials, summary.event_e_trials, summary.es_bound
    );
    Ok(())
}

/// Resampling trials on a fixed input graph: only f varies per trial.
fn probe_fixed_graph(
    g: &Graph,
    mode: Mode,
    args: &ProbeArgs,
) -> Result<Vec<ResampleTrialRecord>, Error> {
    let mut records = Vec::with_capacity(args.trials as usize);
    for trial in 0..args.trials {
        let mut rng = RngStream::new(args.seed, trial).rng();
        let pair = if args.random_f {
            let (u, v) = uniform_pair(g.n(), &mut rng);
            make_coupled_pair_at(g, u, v)?
        } else {
            make_coupled_pair(g)?
        };
        let eval = evaluate_pair(&pair, mode, args.ell, args.k);
        if eval.event_e {
            if let Some(detail) = eval.violation() {
                return Err(Error::ClaimViolation {
                    mode: mode.as_str(),
                    trial,
                    seed: args.seed,
                    detail: detail.to_string(),
                });
            }
        }
        records.push(ResampleTrialRecord {
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
        });
    }
    Ok(records)
}

const CLT_HEADER: &str = "trial,n,z,z_tilde,z_hat";

fn clt_row(t: &gnplab::clt::CltTrial) -> String {
    format!(
        "{},{},{},{},{}",
        t.trial,
        t.n,
        t.z,
        t.z_tilde.map_or(String::new(), |v| v.to_string()),
        t.z_hat.map_or(String::new(), |v| v.to_string())
    )
}

fn run_clt_cmd(args: CltArgs) -> Result<(), Error> {
    let mode: Mode = args.mode.parse()?;
    if let Some(path) = &args.input {
        return clt_fixed_graph(&args, mode, path);
    }
    let c = args.c.unwrap();
    let config = CltConfig {
        mode,
        n_grid: args.n.clone(),
        c,
        k: args.k,
        ell: args.ell,
        trunc: args.t,
        trials: args.trials,
        seed: args.seed,
        force: args.force,
    };
    let meta = Meta::new(
        "clt",
        args.seed,
        serde_json::to_value(&config).expect("config serializes"),
    );
    let runs = run_clt(&config)?;
    let mut per_n = Vec::new();
    let mut var_rows = Vec::new();
    let mut ks_by_n = Vec::new();
    for (n, trials) in &runs {
        let mut csv = CsvWriter::new(
            &args.out.join(format!("trials_{n}.csv")),
            &meta,
            CLT_HEADER,
        )?;
        for t in trials {
            csv.row(&clt_row(t))?;
        }
        csv.finish()?;
        let report = summarize_clt_n(*n, trials)?;
        ks_by_n.push(json!({ "n": n, "ks_distance": report.z.ks_distance }));
        var_rows.push((*n, report.z.variance));
        per_n.push(report);
    }
    let scaling = variance_scaling(&var_rows, 0.7, 1.4);
    let payload = json!({
        "per_n": per_n,
        "variance_scaling": scaling,
        "ks_by_n": ks_by_n,
    });
    out::write_json_report(&args.out.join("report.json"), &meta, &payload)?;
    eprintln!("clt done: {} sizes x {} trials", runs.len(), args.trials);
    Ok(())
}

/// One-shot functional evaluation on a fixed graph.
fn clt_fixed_graph(args: &CltArgs, mode: Mode, path: &Path) -> Result<(), Error> {
    let g = read_graph(path)?;
    let n = g.n();
    let meta = Meta::new(
        "clt",
        args.seed,
        json!({ "mode": mode, "input": path.display().to_string(), "ell": args.ell, "k": args.k }),
    );
    let (z, z_tilde, z_hat) = match mode {
        Mode::Giant => {
            let labeling = components(&g);
            let z = labeling.largest_size() as u64;
            match args.ell {
                Some(ell) => {
                    let t = args.t.unwrap_or_else(|| {
                        default_truncation_bound(2.0 * g.m() as f64 / n as f64, ell, n)
                    });
                    let pair = gnplab::approx::truncated_giant(&g, ell, t);
                    (z, Some(pair.x as u64), Some(pair.y as u64))
                }
                None => (z, None, None),
            }
        }
        Mode::Core => {
            let core = kcore(&g, args.k);
            let z = core.core_size() as u64;
            match args.ell {
                Some(ell) => {
                    let t = args.t.unwrap_or_else(|| {
                        default_truncation_bound(2.0 * g.m() as f64 / n as f64, ell, n)
                    });
                    let pair = gnplab::approx::truncated_core(&g, ell, t, args.k);
                    (z, Some(pair.x as u64), Some(pair.y as u64))
                }
                None => (z, None, None),
            }
        }
    };
    let trial = gnplab::clt::CltTrial { trial: 0, n, z, z_tilde, z_hat };
    let mut csv = CsvWriter::new(&args.out.join(format!("trials_{n}.csv")), &meta, CLT_HEADER)?;
    csv.row(&clt_row(&trial))?;
    csv.finish()?;
    let payload = json!({
        "n": n, "z": z, "z_tilde": z_tilde, "z_hat": z_hat,
        "note": "single-graph evaluation; no normality statistics",
    });
    out::write_json_report(&args.out.join("report.json"), &meta, &payload)?;
    Ok(())
}

const CENSUS_HEADER: &str = "v,ball_size,boundary_size,is_tree,phi,phi_ell";

fn run_census(args: CensusArgs) -> Result<(), Error> {
    let mode: Mode = args.mode.parse()?;
    let g = match &args.input {
        Some(path) => read_graph(path)?,
        None => {
            let n = args.n.unwrap();
            let p = args.c.unwrap() / n as f64;
            gnplab::sample_gnp(n, p, &RngStream::new(args.seed, 0))?
        }
    };
    let n = g.n();
    let meta = Meta::new(
        "census",
        args.seed,
        json!({
            "mode": mode, "n": n, "c": args.c, "ell": args.ell, "k": args.k,
            "seed": args.seed,
            "input": args.input.as_ref().map(|p| p.display().to_string()),
        }),
    );
    let mut csv = CsvWriter::new(&args.out, &meta, CENSUS_HEADER)?;
    match mode {
        Mode::Giant => {
            let labeling = components(&g);
            for v in 0..n as u32 {
                let b = ball(&g, v, args.ell);
                csv.row(&format!(
                    "{},{},{},{},{},{}",
                    v,
                    b.size(),
                    b.boundary_size(),
                    b.is_tree(),
                    labeling.in_largest(v) as u8,
                    phi_giant_local(&b, n) as u8
                ))?;
            }
        }
        Mode::Core => {
            let core = kcore(&g, args.k);
            for v in 0..n as u32 {
                let b = ball(&g, v, args.ell);
                csv.row(&format!(
                    "{},{},{},{},{},{}",
                    v,
                    b.size(),
                    b.boundary_size(),
                    b.is_tree(),
                    core.in_core(v) as u8,
                    phi_core_local(&b, args.k) as u8
                ))?;
            }
        }
    }
    csv.finish()?;
    eprintln!("census done: {n} vertices -> {}", args.out.display());
    Ok(())
}

fn run_mantle(args: MantleArgs) -> Result<(), Error> {
    let mode: Mode = args.mode.parse()?;
    let report;
    let (n, c);
    if let Some(path) = &args.input {
        let g = read_graph(path)?;
        n = g.n();
        c = 2.0 * g.m() as f64 / n as f64;
        let labeling = match mode {
            Mode::Giant => {
                let comps = components(&g);
                let largest = match comps.largest() {
                    Some(id) => comps.members(id).to_vec(),
                    None => Vec::new(),
                };
                gnplab::decomp::remainder(&g, &largest)
            }
            Mode::Core => kcore(&g, args.k).mantle,
        };
        let hist = labeling.size_histogram();
        let below = (labeling.max_size() < log4_threshold(n)) as u64;
        report = gnplab::clt::MantleReport {
            threshold: log4_threshold(n),
            trials: 1,
            trials_below_threshold: below,
            frac_below_threshold: below as f64,
            max_sizes: vec![labeling.max_size()],
            histogram: hist.clone(),
            decay: gnplab::stats::fit_log_decay(&hist, 3, 30, 5),
        };
    } else {
        n = args.n.unwrap();
        c = args.c.unwrap();
        let config = MantleConfig {
            mode,
            n,
            c,
            k: args.k,
            trials: args.trials,
            seed: args.seed,
        };
        report = mantle_profile(&config)?;
    }
    let meta = Meta::new(
        "mantle",
        args.seed,
        json!({
            "mode": mode, "n": n, "c": c, "k": args.k, "trials": args.trials,
            "seed": args.seed,
            "input": args.input.as_ref().map(|p| p.display().to_string()),
        }),
    );
    let mut csv = CsvWriter::new(&args.out.join("histogram.csv"), &meta, "size,count")?;
    for (size, count) in &report.histogram {
        csv.row(&format!("{size},{count}"))?;
    }
    csv.finish()?;
    out::write_json_report(&args.out.join("report.json"), &meta, &report)?;
    eprintln!(
        "mantle done: {} trials, {} below threshold {}",
        report.trials, report.trials_below_threshold, report.threshold
    );
    Ok(())
}
