//! Subcommand pipelines: simulate -> estimate -> gate -> persist.

use crate::config::{ConfigError, ExperimentConfig};
use crate::output::{fmt_g17, CsvTable, RunWriter};
use crate::svg;
use asiplab_core::dynamics::BilliardTable;
use asiplab_core::limitlaws::{
    asclt_ks, block_schedule, clt_ks, epsilon_budget, green_kubo, moment_checkpoints,
    moment_scaling_fit, shrinking_target_report, simulate_process, simulate_series,
    variance_curve, wip_covariance_check, AscltOptions, ObservableSeq, ProcessSpec,
    SeriesEnsemble,
};
use asiplab_core::measure::{alpha_mixing_profile, MixingOptions, SrbMeasure};
use asiplab_core::observables::Observable;
use asiplab_core::rng::orbit_rng;
use asiplab_core::stats;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Runtime(String),
    #[error("missing input: {0}")]
    MissingInput(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Runtime(_) | AppError::MissingInput(_) => 3,
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> AppError {
    AppError::Runtime(e.to_string())
}

#[derive(Debug, Clone)]
pub struct CommonOpts {
    pub out_dir: PathBuf,
    pub strict: bool,
    pub workers: usize,
}

/// Run `f` inside a dedicated worker pool so `--workers` is honored
/// without touching the global pool; results stay byte-identical across
/// worker counts by construction.
fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T, AppError> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(runtime)?;
    Ok(pool.install(f))
}

enum SystemChoice {
    Billiard(Box<BilliardTable>),
    Cat,
}

struct Prepared {
    system: SystemChoice,
    seq: ObservableSeq,
    n_max: usize,
    ensemble: usize,
    seed: u64,
}

fn prepare(cfg: &ExperimentConfig, seed_override: Option<u64>) -> Result<Prepared, AppError> {
    let run = cfg.run.clone().unwrap_or(crate::config::RunConfig {
        mode: "stationary".into(),
        n_max: 10_000,
        ensemble: 2_000,
        master_seed: 42,
    });
    let seed = seed_override.unwrap_or(run.master_seed);
    let system = match cfg.system.kind.as_str() {
        "catmap" => SystemChoice::Cat,
        _ => SystemChoice::Billiard(Box::new(cfg.build_table()?)),
    };
    let seq = match run.mode.as_str() {
        "targets" => ObservableSeq::Targets { family: cfg.build_family(run.n_max)?, centered: false },
        "modulated" => {
            let base = resolve_observable(cfg, &system)?;
            ObservableSeq::Modulated { base, exponent: cfg.modulated_exponent.unwrap_or(0.5) }
        }
        _ => ObservableSeq::Stationary(resolve_observable(cfg, &system)?),
    };
    Ok(Prepared { system, seq, n_max: run.n_max, ensemble: run.ensemble, seed })
}

/// Build the configured observable; when centering is requested for an
/// observable without a closed-form mean, the mean comes from SRB
/// quadrature.
fn resolve_observable(
    cfg: &ExperimentConfig,
    system: &SystemChoice,
) -> Result<Observable, AppError> {
    let obs = cfg.build_observable()?;
    if cfg.centered && !obs.centered {
        if let SystemChoice::Billiard(table) = system {
            let measure = SrbMeasure::new(table);
            let raw = Observable::new(obs.spec.clone()).map_err(runtime)?;
            let mean = measure.expectation(
                |p| raw.eval_billiard(table, p).unwrap_or(0.0),
                1,
            );
            return Observable::centered_with_mean(obs.spec, mean).map_err(runtime);
        }
    }
    Ok(obs)
}

fn make_process<'a>(system: &'a SystemChoice, seq: &'a ObservableSeq) -> ProcessSpec<'a> {
    match system {
        SystemChoice::Billiard(t) => ProcessSpec::Billiard { table: t, seq },
        SystemChoice::Cat => ProcessSpec::CatMap { seq },
    }
}

fn run_ensemble(
    prep: &Prepared,
    checkpoints: &[usize],
    workers: usize,
) -> Result<SeriesEnsemble, AppError> {
    let process = make_process(&prep.system, &prep.seq);
    with_pool(workers, || {
        simulate_process(process, prep.n_max, prep.ensemble, prep.seed, checkpoints)
    })?
    .map_err(runtime)
}

fn variance_table(ens: &SeriesEnsemble, grid: &[usize]) -> Result<CsvTable, AppError> {
    let vc = variance_curve(ens, grid).map_err(runtime)?;
    let mut t = CsvTable::new("variance.csv", &["n", "value", "stderr"]);
    for i in 0..vc.ns.len() {
        t.push_numeric(&[vc.ns[i] as f64, vc.variances[i], vc.stderrs[i]]);
    }
    Ok(t)
}

/// `simulate`: ensemble run, variance curve, moment-scaling fits, WIP
/// covariances.
pub fn cmd_simulate(cfg: &ExperimentConfig, opts: &CommonOpts, seed: Option<u64>) -> Result<i32, AppError> {
    let prep = prepare(cfg, seed)?;
    let grid = cfg.geometric_grid(prep.n_max);
    let fit_grid: Vec<usize> = grid.iter().copied().filter(|&n| n <= prep.n_max / 5).collect();
    let mut cps = moment_checkpoints(&fit_grid, prep.n_max);
    cps.extend_from_slice(&grid);
    let wip_times = [(0.25, 1.0), (0.5, 1.0), (0.5, 0.75), (1.0, 1.0)];
    for &(s, t) in &wip_times {
        cps.push(((prep.n_max as f64) * s).floor() as usize);
        cps.push(((prep.n_max as f64) * t).floor() as usize);
    }
    let ens = run_ensemble(&prep, &cps, opts.workers)?;

    let mut w = RunWriter::new(&opts.out_dir, cfg.canonical_json());
    w.truncated_orbits = ens.truncated;
    w.add_table(variance_table(&ens, &grid)?);

    if !fit_grid.is_empty() {
        let ms = moment_scaling_fit(&ens, &fit_grid, 4.0).map_err(runtime)?;
        let mut mt = CsvTable::new("moments.csv", &["n", "l2_norm", "lp_sup"]);
        for i in 0..ms.grid.len() {
            mt.push_numeric(&[ms.grid[i] as f64, ms.l2_norms[i], ms.lp_sups[i]]);
        }
        w.add_table(mt);
        w.add_estimate("kappa2", ms.kappa2, Some(ms.kappa2_se), "ols log L2 vs log n", ens.size(), prep.seed);
        w.add_estimate("kappa_p", ms.kappa_p, Some(ms.kappa_p_se), "ols log sup-Lp vs log n", ens.size(), prep.seed);
        if matches!(prep.seq, ObservableSeq::Stationary(_)) {
            let ok = ms.kappa2 >= cfg.tests.kappa2_lo && ms.kappa2 <= cfg.tests.kappa2_hi;
            w.add_gate(
                "kappa2_range",
                ok,
                false,
                format!("kappa2 = {:.4} in [{}, {}]", ms.kappa2, cfg.tests.kappa2_lo, cfg.tests.kappa2_hi),
            );
        }
    }

    let wip = wip_covariance_check(&ens, prep.n_max, &wip_times).map_err(runtime)?;
    let mut wt = CsvTable::new("wip.csv", &["s", "t", "covariance", "brownian"]);
    for p in &wip {
        wt.push_numeric(&[p.s, p.t, p.covariance, p.brownian]);
    }
    w.add_table(wt);

    if ens.flagged {
        w.add_gate(
            "truncation_fraction",
            false,
            false,
            format!("{} of {} orbits truncated", ens.truncated, prep.ensemble),
        );
    }
    finish(w, opts)
}

/// `greenkubo`: autocovariances and the Green-Kubo sum from one long
/// orbit, with the variance-slope cross-check in stationary mode.
pub fn cmd_greenkubo(cfg: &ExperimentConfig, opts: &CommonOpts, seed: Option<u64>) -> Result<i32, AppError> {
    let prep = prepare(cfg, seed)?;
    let process = make_process(&prep.system, &prep.seq);
    let n = cfg.tests.gk_orbit_len;
    let series = with_pool(opts.workers, || simulate_series(process, n, prep.seed, 0))?
        .map_err(runtime)?;
    let est = green_kubo(&series, Some(cfg.tests.gk_lag)).map_err(runtime)?;

    let mut w = RunWriter::new(&opts.out_dir, cfg.canonical_json());
    let mut t = CsvTable::new("greenkubo.csv", &["n", "value", "stderr"]);
    for (k, &c) in est.autocov.iter().enumerate() {
        t.push_numeric(&[k as f64, c, est.autocov_se]);
    }
    w.add_table(t);
    w.add_estimate("sigma2_f", est.sigma2, Some(est.sigma2_se), "green-kubo truncated sum", n, prep.seed);
    w.add_estimate("autocorr_first_moment", est.first_moment_sum, None, "sum k|C(k)|", n, prep.seed);

    if let Some(expect) = cfg.tests.gk_sigma2_expect {
        let ok = (est.sigma2 - expect).abs() <= cfg.tests.gk_sigma2_tol;
        w.add_gate(
            "gk_sigma2",
            ok,
            false,
            format!("sigma2 = {:.5} vs {expect} +- {}", est.sigma2, cfg.tests.gk_sigma2_tol),
        );
    }
    if matches!(prep.seq, ObservableSeq::Stationary(_)) && cfg.run.is_some() {
        let grid = cfg.geometric_grid(prep.n_max);
        let ens = run_ensemble(&prep, &grid, opts.workers)?;
        let vc = variance_curve(&ens, &[prep.n_max]).map_err(runtime)?;
        let slope = vc.variances[0] / prep.n_max as f64;
        let rel = ((est.sigma2 - slope) / est.sigma2).abs();
        w.add_estimate("variance_slope", slope, Some(vc.stderrs[0] / prep.n_max as f64), "ensemble var / n", ens.size(), prep.seed);
        let ok = rel <= cfg.tests.gk_cross_check_rel;
        w.add_gate(
            "gk_cross_check",
            ok,
            false,
            format!("|sigma2_f - var/n|/sigma2_f = {rel:.4} (limit {})", cfg.tests.gk_cross_check_rel),
        );
        w.add_table(variance_table(&ens, &grid)?);
    }
    finish(w, opts)
}

/// `clt`: KS of the normalized partial sums against N(0,1) along the
/// grid, gated at the configured n.
pub fn cmd_clt(cfg: &ExperimentConfig, opts: &CommonOpts, seed: Option<u64>) -> Result<i32, AppError> {
    let prep = prepare(cfg, seed)?;
    let gate_n = cfg.tests.clt_n.min(prep.n_max);
    let mut grid = cfg.geometric_grid(prep.n_max);
    grid.push(gate_n);
    grid.sort_unstable();
    grid.dedup();
    let ens = run_ensemble(&prep, &grid, opts.workers)?;

    let mut w = RunWriter::new(&opts.out_dir, cfg.canonical_json());
    w.truncated_orbits = ens.truncated;
    w.add_table(variance_table(&ens, &grid)?);
    let mut ct = CsvTable::new("clt.csv", &["n", "value", "stderr"]);
    // KS statistics carry their 1%-level reference band as stderr column
    let band = 1.63 / (ens.size() as f64).sqrt();
    let mut gate_d = f64::NAN;
    for &n in &grid {
        if n < 2 {
            continue;
        }
        let ks = clt_ks(&ens, n).map_err(runtime)?;
        if n == gate_n {
            gate_d = ks.statistic;
        }
        ct.push_numeric(&[n as f64, ks.statistic, band]);
    }
    w.add_table(ct);
    w.add_estimate("clt_ks", gate_d, None, "two-sided KS vs N(0,1)", ens.size(), prep.seed);
    w.add_gate(
        "clt_ks",
        gate_d < cfg.tests.clt_ks_max,
        false,
        format!("KS(n = {gate_n}) = {gate_d:.5} (limit {})", cfg.tests.clt_ks_max),
    );
    finish(w, opts)
}

/// `asclt`: log-weighted occupation measure of one long orbit.
pub fn cmd_asclt(cfg: &ExperimentConfig, opts: &CommonOpts, seed: Option<u64>) -> Result<i32, AppError> {
    let prep = prepare(cfg, seed)?;
    let process = make_process(&prep.system, &prep.seq);
    let n = cfg.tests.asclt_n_max;
    let series = with_pool(opts.workers, || simulate_series(process, n, prep.seed, 0))?
        .map_err(runtime)?;
    let gk = green_kubo(&series, None).map_err(runtime)?;
    if !(gk.sigma2 > 0.0) {
        return Err(AppError::Runtime(format!(
            "degenerate variance sigma2_f = {} for the ASCLT normalization",
            gk.sigma2
        )));
    }
    let opts_a = AscltOptions::default();
    let ks = asclt_ks(series.iter().copied(), gk.sigma2, opts_a);

    // histogram CDF for the report plot
    let mut hist = stats::WeightedHistogram::new(opts_a.zmax, opts_a.bins);
    let mut sum = 0.0;
    for (k, &x) in series.iter().enumerate() {
        sum += x;
        let var_k = (k + 1) as f64 * gk.sigma2;
        hist.add(sum / var_k.sqrt(), 1.0 / var_k);
    }
    let mut at = CsvTable::new("asclt.csv", &["n", "value", "stderr"]);
    for (z, cdf) in hist.cdf_samples(40) {
        at.push_numeric(&[z, cdf, stats::std_normal_cdf(z)]);
    }

    let mut w = RunWriter::new(&opts.out_dir, cfg.canonical_json());
    w.add_table(at);
    w.add_estimate("asclt_ks", ks.statistic, None, "KS of log-weighted occupation measure", n, prep.seed);
    w.add_estimate("sigma2_f", gk.sigma2, Some(gk.sigma2_se), "green-kubo auto lag", n, prep.seed);
    w.add_gate(
        "asclt_ks",
        ks.statistic < cfg.tests.asclt_ks_max,
        false,
        format!("KS = {:.4} (limit {})", ks.statistic, cfg.tests.asclt_ks_max),
    );
    finish(w, opts)
}

/// `lil`: running law-of-iterated-logarithm statistic, soft-gated by the
/// diagnostic band against an i.i.d. oracle at the same horizon.
pub fn cmd_lil(cfg: &ExperimentConfig, opts: &CommonOpts, seed: Option<u64>) -> Result<i32, AppError> {
    let prep = prepare(cfg, seed)?;
    let process = make_process(&prep.system, &prep.seq);
    let n = cfg.tests.lil_n_max;
    let series = with_pool(opts.workers, || simulate_series(process, n, prep.seed, 0))?
        .map_err(runtime)?;
    let gk = green_kubo(&series, None).map_err(runtime)?;
    if !(gk.sigma2 > 0.0) {
        return Err(AppError::Runtime("degenerate variance for the LIL normalization".into()));
    }

    let n_start = 1_000u64;
    let mut lt = CsvTable::new("lil.csv", &["n", "value", "stderr"]);
    let mut sum = 0.0f64;
    let mut running = f64::NEG_INFINITY;
    let mut next_dump = n_start;
    for (k, &x) in series.iter().enumerate() {
        let kk = (k + 1) as u64;
        sum += x;
        if kk < n_start {
            continue;
        }
        let var_n = kk as f64 * gk.sigma2;
        let stat = sum / (2.0 * var_n * var_n.ln().ln()).sqrt();
        running = running.max(stat);
        if kk >= next_dump {
            lt.push_numeric(&[kk as f64, stat, running]);
            next_dump = (next_dump as f64 * 1.25).ceil() as u64;
        }
    }

    // i.i.d. oracle at the identical horizon decides whether the band is
    // trustworthy for this seed
    let oracle_series = simulate_series(ProcessSpec::IidNormal, n, prep.seed ^ 0x5EED, 0)
        .map_err(runtime)?;
    let oracle = asiplab_core::limitlaws::lil_running_stat(oracle_series, 1.0, n_start);

    let mut w = RunWriter::new(&opts.out_dir, cfg.canonical_json());
    w.add_table(lt);
    w.add_estimate("lil_running_max", running, None, "max_n S_n / sqrt(2 sigma_n^2 loglog sigma_n^2)", n, prep.seed);
    w.add_estimate("lil_oracle_max", oracle.running_max, None, "iid normal oracle at identical n", n, prep.seed ^ 0x5EED);
    let in_band = running >= cfg.tests.lil_lo && running <= cfg.tests.lil_hi;
    let oracle_in_band =
        oracle.running_max >= cfg.tests.lil_lo && oracle.running_max <= cfg.tests.lil_hi;
    // soft gate when the oracle itself leaves the band
    w.add_gate(
        "lil_band",
        in_band || !oracle_in_band,
        !oracle_in_band,
        format!(
            "running max {running:.3} in [{}, {}]; oracle {:.3}",
            cfg.tests.lil_lo, cfg.tests.lil_hi, oracle.running_max
        ),
    );
    finish(w, opts)
}

/// `targets`: hit-count ensemble against the analytic anchors.
pub fn cmd_targets(cfg: &ExperimentConfig, opts: &CommonOpts, seed: Option<u64>) -> Result<i32, AppError> {
    let mut cfg = cfg.clone();
    if let Some(run) = cfg.run.as_mut() {
        run.mode = "targets".into();
    } else {
        cfg.run = Some(crate::config::RunConfig {
            mode: "targets".into(),
            n_max: 10_000,
            ensemble: 2_000,
            master_seed: 42,
        });
    }
    let prep = prepare(&cfg, seed)?;
    let ObservableSeq::Targets { family, .. } = prep.seq.clone() else { unreachable!() };
    let grid = cfg.geometric_grid(prep.n_max);
    let ens = run_ensemble(&prep, &grid, opts.workers)?;
    let report = shrinking_target_report(&ens, &family, &grid, prep.n_max).map_err(runtime)?;

    let mut w = RunWriter::new(&opts.out_dir, cfg.canonical_json());
    w.truncated_orbits = ens.truncated;
    let mut tt = CsvTable::new(
        "targets.csv",
        &["n", "value", "stderr", "analytic_mean", "variance"],
    );
    for i in 0..report.grid.len() {
        tt.push_numeric(&[
            report.grid[i] as f64,
            report.mean_emp[i],
            report.mean_se[i],
            report.mean_analytic[i],
            report.variance[i],
        ]);
    }
    w.add_table(tt);
    w.add_estimate("target_var_slope", report.var_slope, Some(report.var_slope_se), "ols log var vs log n", report.ensemble_size, prep.seed);
    w.add_estimate("target_ks", report.ks.statistic, None, "KS of (N - EN)/sigma vs N(0,1)", report.ensemble_size, prep.seed);
    w.add_estimate(
        "target_ks_continuity_corrected",
        report.ks_continuity_corrected,
        None,
        "lattice CDF vs Phi at half-integers",
        report.ensemble_size,
        prep.seed,
    );
    w.add_estimate("min_final_hits", report.min_final_count, None, "min over ensemble of N_{n_max}", report.ensemble_size, prep.seed);

    // mean matches the invariance identity at the tail of the grid
    let tail = report.grid.len().saturating_sub(2);
    let mut mean_ok = true;
    let mut detail = String::new();
    for i in tail..report.grid.len() {
        let gap = (report.mean_emp[i] - report.mean_analytic[i]).abs();
        let lim = 3.0 * report.mean_se[i];
        if gap > lim {
            mean_ok = false;
        }
        detail.push_str(&format!(
            "n={}: |{:.4}-{:.4}|<={:.4}; ",
            report.grid[i], report.mean_emp[i], report.mean_analytic[i], lim
        ));
    }
    w.add_gate("target_mean", mean_ok, false, detail);
    w.add_gate(
        "target_var_slope",
        report.var_slope >= cfg.tests.target_slope_lo && report.var_slope <= cfg.tests.target_slope_hi,
        false,
        format!(
            "slope {:.4} in [{}, {}]",
            report.var_slope, cfg.tests.target_slope_lo, cfg.tests.target_slope_hi
        ),
    );
    w.add_gate(
        "target_ks",
        report.ks.statistic < cfg.tests.target_ks_max,
        false,
        format!("KS = {:.4} (limit {})", report.ks.statistic, cfg.tests.target_ks_max),
    );
    w.add_gate(
        "borel_cantelli",
        report.borel_cantelli,
        false,
        format!("min N = {}", report.min_final_count),
    );
    finish(w, opts)
}

/// `mixing`: empirical alpha coefficients over a gap range, averaged
/// across seeds, with the decay-slope gate.
pub fn cmd_mixing(cfg: &ExperimentConfig, opts: &CommonOpts, seed: Option<u64>) -> Result<i32, AppError> {
    let table = cfg.build_table()?;
    let measure = SrbMeasure::new(&table);
    let base_seed = seed
        .or(cfg.run.as_ref().map(|r| r.master_seed))
        .unwrap_or(42);
    let depth = cfg.tests.mixing_depth;
    let gaps: Vec<usize> = (1..=cfg.tests.mixing_gap_max).collect();
    let n_seeds = cfg.tests.mixing_seeds.max(1);

    let mut per_seed_slopes = Vec::with_capacity(n_seeds);
    let mut alpha_by_gap: Vec<Vec<f64>> = vec![Vec::new(); gaps.len()];
    for s in 0..n_seeds {
        let mut rng = orbit_rng(base_seed, s as u64);
        let ests = alpha_mixing_profile(
            &table,
            &measure,
            depth,
            &gaps,
            cfg.tests.mixing_orbit_len,
            &mut rng,
            MixingOptions::default(),
        )
        .map_err(runtime)?;
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (i, est) in ests.iter().enumerate() {
            alpha_by_gap[i].push(est.alpha);
            xs.push(est.gap as f64);
            ys.push(est.alpha.max(f64::MIN_POSITIVE).ln());
        }
        per_seed_slopes.push(stats::ols(&xs, &ys).0);
    }

    let mut w = RunWriter::new(&opts.out_dir, cfg.canonical_json());
    let mut mt = CsvTable::new("mixing.csv", &["n", "value", "stderr"]);
    for (i, &gap) in gaps.iter().enumerate() {
        let (m, se) = stats::mean_and_se(&alpha_by_gap[i]);
        mt.push_numeric(&[gap as f64, m, se]);
    }
    w.add_table(mt);
    let (slope_mean, slope_se) = stats::mean_and_se(&per_seed_slopes);
    w.add_estimate("mixing_decay_slope", slope_mean, Some(slope_se), "per-seed ols of log alpha vs gap", n_seeds, base_seed);
    let upper = slope_mean + t_crit_95(n_seeds - 1) * slope_se;
    w.add_gate(
        "mixing_slope_negative",
        upper < 0.0,
        false,
        format!("slope {slope_mean:.4} + t*se {upper:.4} < 0 across {n_seeds} seeds"),
    );
    finish(w, opts)
}

/// One-sided 95% Student-t critical values.
fn t_crit_95(df: usize) -> f64 {
    const TABLE: [f64; 10] =
        [6.314, 2.920, 2.353, 2.132, 2.015, 1.943, 1.895, 1.860, 1.833, 1.812];
    if df == 0 {
        f64::INFINITY
    } else if df <= 10 {
        TABLE[df - 1]
    } else {
        1.75
    }
}

/// `blocks`: print the exact schedule.
pub fn cmd_blocks(eps: f64, jmax: usize) -> Result<i32, AppError> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(AppError::Config(ConfigError::Field {
            field: "--eps".into(),
            message: "must lie in (0, 1]".into(),
        }));
    }
    let s = block_schedule(eps, jmax);
    let taus: Vec<String> = s.tau[..=jmax].iter().map(|t| t.to_string()).collect();
    println!("tau = {}", taus.join(", "));
    for j in 1..=jmax.min(8) {
        let (a, b) = s.block(j);
        println!("block {j}: [{a}, {b}) length {}", s.block_len(j));
    }
    Ok(0)
}

/// `budget`: print the feasible epsilon.
pub fn cmd_budget(k2: f64, kp: f64, lambda: f64) -> Result<i32, AppError> {
    let b = epsilon_budget(k2, kp, lambda).map_err(|e| {
        AppError::Config(ConfigError::Field { field: "--lambda/--k2/--kp".into(), message: e.to_string() })
    })?;
    match b.epsilon {
        Some(eps) => {
            println!("eps* = {eps:.4}");
            println!(
                "constraint 1: 2 eps kp + 1/(4-eps) = {:.6} < {:.6}",
                2.0 * eps * kp + 1.0 / (4.0 - eps),
                2.0 * k2 * lambda
            );
            println!(
                "constraint 2: eps kp / k2 = {:.6} < {:.6}",
                eps * kp / k2,
                4.0 * lambda - 1.0
            );
        }
        None => println!("eps* = infeasible"),
    }
    Ok(0)
}

struct PlotSpec {
    csv: &'static str,
    svg: &'static str,
    title: &'static str,
    ylab: &'static str,
    log_x: bool,
    log_y: bool,
    /// 1-based data column index (after the leading n column).
    ycol: usize,
    /// Optional second column plotted as the analytic reference.
    extra: Option<usize>,
}

const PLOTS: [PlotSpec; 4] = [
    PlotSpec { csv: "variance.csv", svg: "variance.svg", title: "partial-sum variance", ylab: "sigma_n^2", log_x: true, log_y: true, ycol: 1, extra: None },
    PlotSpec { csv: "clt.csv", svg: "clt_ks.svg", title: "KS distance vs n", ylab: "KS", log_x: true, log_y: false, ycol: 1, extra: None },
    PlotSpec { csv: "mixing.csv", svg: "mixing.svg", title: "alpha-mixing decay", ylab: "alpha(n)", log_x: false, log_y: true, ycol: 1, extra: None },
    PlotSpec { csv: "targets.csv", svg: "targets.svg", title: "hit counts vs analytic mean", ylab: "N_n", log_x: true, log_y: true, ycol: 1, extra: Some(3) },
];

/// `report`: render SVG plots from previously emitted CSVs.
pub fn cmd_report(opts: &CommonOpts) -> Result<i32, AppError> {
    let dir = &opts.out_dir;
    let mut rendered = 0;
    let mut w = RunWriter::new(dir, String::from("{\"command\":\"report\"}"));

    for plot in &PLOTS {
        let path = dir.join(plot.csv);
        let Ok(text) = std::fs::read_to_string(&path) else { continue };
        let (xs, cols) = parse_csv_columns(&text);
        if xs.is_empty() {
            continue;
        }
        let digest = crate::output::hex_digest(text.as_bytes());
        let mut series = vec![svg::Series {
            label: plot.ylab,
            color: "steelblue",
            xs: &xs,
            ys: &cols[plot.ycol - 1],
        }];
        if let Some(ec) = plot.extra {
            series.push(svg::Series {
                label: "analytic",
                color: "firebrick",
                xs: &xs,
                ys: &cols[ec - 1],
            });
        }
        let body = svg::line_plot(
            plot.title,
            "n",
            plot.ylab,
            plot.log_x,
            plot.log_y,
            &series,
            &format!("{} sha256:{digest}", plot.csv),
        );
        w.add_svg(plot.svg, body);
        rendered += 1;
    }
    if rendered == 0 {
        return Err(AppError::MissingInput(format!(
            "no input CSVs (variance/clt/mixing/targets) under {}",
            dir.display()
        )));
    }
    finish(w, opts)
}

/// Parse our own numeric CSVs: first column x, remaining columns y.
fn parse_csv_columns(text: &str) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let Some(header) = lines.next() else { return (Vec::new(), Vec::new()) };
    let width = header.split(',').count();
    let mut xs = Vec::new();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); width - 1];
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != width {
            continue;
        }
        let Ok(x) = fields[0].parse::<f64>() else { continue };
        xs.push(x);
        for (i, f) in fields[1..].iter().enumerate() {
            cols[i].push(f.parse::<f64>().unwrap_or(f64::NAN));
        }
    }
    (xs, cols)
}

fn finish(w: RunWriter, opts: &CommonOpts) -> Result<i32, AppError> {
    for g in &w.gates {
        let status = if g.passed {
            "PASS"
        } else if g.soft && !opts.strict {
            "WARN"
        } else {
            "FAIL"
        };
        eprintln!("gate {:24} {} - {}", g.name, status, g.detail);
    }
    for e in &w.estimates {
        eprintln!("estimate {:20} = {} (n = {})", e.name, fmt_g17(e.value), e.sample_size);
    }
    let failed = w.gates_failed(opts.strict);
    w.finish().map_err(runtime)?;
    Ok(if failed { 1 } else { 0 })
}

/// Resolve worker count: CLI flag, then env, then config.
pub fn resolve_workers(flag: Option<usize>, cfg_workers: usize) -> usize {
    if let Some(w) = flag {
        return w;
    }
    if let Ok(env) = std::env::var("ASIPLAB_WORKERS") {
        if let Ok(w) = env.parse::<usize>() {
            return w;
        }
    }
    cfg_workers
}

/// Resolve the output directory: CLI flag, then config, then "out".
pub fn resolve_out_dir(flag: Option<PathBuf>, cfg: &ExperimentConfig) -> PathBuf {
    flag.unwrap_or_else(|| {
        cfg.out_dir.as_ref().map(|s| Path::new(s).to_path_buf()).unwrap_or_else(|| "out".into())
    })
}
