use std::path::{Path as FsPath, PathBuf};

use rayon::prelude::*;

use cheshire_core::pointer::{self, sweep, DEFAULT_HALF_WIDTH, DEFAULT_POINTS};
use cheshire_core::sampling::{Moments, SamplingPlan, STARVATION_PROB};
use cheshire_core::tsvf::SINGULAR_TOL;
use cheshire_core::{
    weak_limit_extrapolate, CouplingConfig, Observable, PointerReadout, PointerState, Scenario,
    TwoStateVector,
};

use crate::error::CliError;
use crate::report::{
    fmt_complex, fmt_sig, Estimate, Metadata, MonteCarloRun, PointerGrid, PointerRun, Report, TableRow, Tolerances,
};
use crate::scenario_file::parse_scenario;

/// Directory searched for scenario names that are not found as given.
pub const SCENARIO_DIR_ENV: &str = "CHESHIRE_SCENARIO_DIR";
/// Weak values this close to `0`, `±1`, `±i` print in short form.
pub const SHORT_FORM_TOL: f64 = 1e-10;

pub const DEFAULT_SIGMA: f64 = 1.0;
pub const DEFAULT_SWEEP: [f64; 3] = [0.001, 0.002, 0.004];
pub const DEFAULT_MC_G: f64 = 0.01;
pub const DEFAULT_MC_N: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug)]
pub struct Loaded {
    pub name: String,
    pub path: PathBuf,
    pub scenario: Scenario,
}

/// Candidate files for a scenario argument: as given, with `.scn`, then the
/// same two under `$CHESHIRE_SCENARIO_DIR` for relative names.
pub fn scenario_candidates(arg: &str) -> Vec<PathBuf> {
    let mut out = vec![PathBuf::from(arg), PathBuf::from(format!("{arg}.scn"))];
    if FsPath::new(arg).is_relative() {
        if let Some(dir) = std::env::var_os(SCENARIO_DIR_ENV) {
            let dir = PathBuf::from(dir);
            out.push(dir.join(arg));
            out.push(dir.join(format!("{arg}.scn")));
        }
    }
    out
}

pub fn load_scenario(arg: &str) -> Result<Loaded, CliError> {
    let path = scenario_candidates(arg).into_iter().find(|p| p.is_file()).ok_or_else(|| CliError::Io {
        path: arg.to_string(),
        source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such scenario file"),
    })?;
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let scenario =
        parse_scenario(&text).map_err(|source| CliError::Parse { path: path.display().to_string(), source })?;
    let name = path.file_stem().map_or_else(|| arg.to_string(), |s| s.to_string_lossy().into_owned());
    Ok(Loaded { name, path, scenario })
}

fn metadata(seed: Option<u64>, sigma: Option<f64>) -> Metadata {
    Metadata {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        tolerances: Tolerances {
            singular_denominator: SINGULAR_TOL,
            short_form: SHORT_FORM_TOL,
            weak_ratio: pointer::WEAK_RATIO,
            grid_boundary: pointer::BOUNDARY_TOL,
            starvation: STARVATION_PROB,
        },
        pointer: sigma.map(|sigma| PointerGrid { sigma, points: DEFAULT_POINTS, half_width_sigmas: DEFAULT_HALF_WIDTH }),
    }
}

fn tsv_cache<'a>(sc: &Scenario, cache: &'a mut Vec<(String, TwoStateVector)>, marker: &str) -> Result<&'a TwoStateVector, CliError> {
    if let Some(i) = cache.iter().position(|(m, _)| m == marker) {
        return Ok(&cache[i].1);
    }
    cache.push((marker.to_string(), sc.tsv_at(marker)?));
    Ok(&cache.last().expect("just pushed").1)
}

/// Weak value of every probe.
pub fn table_rows(sc: &Scenario) -> Result<Vec<TableRow>, CliError> {
    let mut cache = Vec::new();
    let space = sc.system_space();
    let mut rows = Vec::new();
    for p in &sc.probes {
        let tsv = tsv_cache(sc, &mut cache, &p.marker)?;
        let w = tsv.weak_value(&p.observable.operator(space)?)?.value;
        rows.push(TableRow {
            marker: p.marker.clone(),
            arm: p.observable.arm().map_or_else(|| "both".to_string(), |a| a.to_string()),
            observable: p.observable.to_string(),
            re: w.re,
            im: w.im,
            value: fmt_complex(w),
        });
    }
    Ok(rows)
}

fn postselect_probability(sc: &Scenario) -> Result<f64, CliError> {
    let input = sc.input.normalized();
    Ok(sc.circuit.postselection_probability(&input, &sc.postselect)?)
}

pub fn cmd_table(arg: &str) -> Result<Report, CliError> {
    let l = load_scenario(arg)?;
    Ok(Report {
        scenario_name: l.name,
        command: "table".into(),
        postselect_probability: postselect_probability(&l.scenario)?,
        table: table_rows(&l.scenario)?,
        pointer_runs: None,
        estimate: None,
        montecarlo: None,
        metadata: metadata(None, None),
    })
}

/// The probed observable named `obs`, with the marker it is probed at.
fn probed(sc: &Scenario, obs: &str) -> Result<(Observable, String), CliError> {
    let o: Observable = obs.parse().map_err(|_| CliError::Usage(format!("unknown observable `{obs}`")))?;
    let p = sc
        .probes
        .iter()
        .find(|p| p.observable == o)
        .ok_or_else(|| CliError::Usage(format!("observable `{obs}` is not probed by this scenario")))?;
    Ok((o, p.marker.clone()))
}

fn pointer_run(g: f64, sigma: f64, r: &PointerReadout) -> PointerRun {
    PointerRun {
        g,
        sigma,
        mean_position: r.mean_position,
        mean_momentum: r.mean_momentum,
        momentum_variance: r.momentum_variance,
        real_channel: r.real_channel(g),
        imag_channel: r.imag_channel(g),
        postselect_prob: r.postselect_prob,
        n_samples: r.n_samples,
        stderr: r.stderr,
    }
}

pub fn cmd_pointer_sweep(arg: &str, obs: &str, gs: &[f64], sigma: f64) -> Result<Report, CliError> {
    let l = load_scenario(arg)?;
    let sc = &l.scenario;
    let (o, marker) = probed(sc, obs)?;
    let mut distinct: Vec<f64> = gs.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(cheshire_core::Error::InsufficientSamples { needed: 3, got: distinct.len() }.into());
    }
    for &g in gs {
        let cfg = CouplingConfig::new(g, sigma)?;
        if !cfg.is_weak() {
            return Err(cheshire_core::Error::NotWeak { g, ratio: cfg.ratio() }.into());
        }
    }
    let tsv = sc.tsv_at(&marker)?;
    let op = o.operator(sc.system_space())?;
    let exact = tsv.weak_value(&op)?.value;
    let p0 = PointerState::default_for(sigma)?;
    let readouts = sweep(&tsv, &op, sigma, gs, &p0)?;
    let est = weak_limit_extrapolate(&readouts)?;
    Ok(Report {
        scenario_name: l.name,
        command: "pointer-sweep".into(),
        postselect_probability: postselect_probability(sc)?,
        table: table_rows(sc)?,
        pointer_runs: Some(readouts.iter().map(|(g, r)| pointer_run(*g, sigma, r)).collect()),
        estimate: Some(Estimate {
            observable: o.to_string(),
            marker,
            method: "weak_limit_extrapolation".into(),
            re: est.re,
            im: Some(est.im),
            value: fmt_complex(est),
            stderr: None,
            exact_re: exact.re,
            exact_im: exact.im,
            exact_value: fmt_complex(exact),
        }),
        montecarlo: None,
        metadata: metadata(None, Some(sigma)),
    })
}

/// Run the sampling blocks on the rayon pool and merge them in block order.
pub fn run_plan(plan: &SamplingPlan) -> Moments {
    let per_block: Vec<Moments> = (0..plan.blocks()).into_par_iter().map(|b| plan.run_block(b)).collect();
    per_block.into_iter().fold(Moments::default(), Moments::merge)
}

pub fn cmd_montecarlo(arg: &str, obs: &str, g: f64, sigma: f64, n: u64, seed: u64) -> Result<Report, CliError> {
    let l = load_scenario(arg)?;
    let sc = &l.scenario;
    let (o, marker) = probed(sc, obs)?;
    let cfg = CouplingConfig::new(g, sigma)?;
    if g == 0.0 {
        return Err(cheshire_core::Error::InvalidCoupling("g must be positive to read a displacement").into());
    }
    let tsv = sc.tsv_at(&marker)?;
    let op = o.operator(sc.system_space())?;
    let exact = tsv.weak_value(&op)?.value;
    let p0 = PointerState::default_for(sigma)?;
    let plan = SamplingPlan::new(&tsv, &op, &cfg, &p0, n, seed)?;
    let mc = plan.finish(run_plan(&plan))?;
    let r = mc.readout;
    let re = r.mean_position / g;
    Ok(Report {
        scenario_name: l.name,
        command: "montecarlo".into(),
        postselect_probability: postselect_probability(sc)?,
        table: table_rows(sc)?,
        pointer_runs: Some(vec![pointer_run(g, sigma, &r)]),
        estimate: Some(Estimate {
            observable: o.to_string(),
            marker,
            method: "monte_carlo".into(),
            re,
            im: None,
            value: fmt_sig(re, 12),
            stderr: r.stderr.map(|s| s / g),
            exact_re: exact.re,
            exact_im: exact.im,
            exact_value: fmt_complex(exact),
        }),
        montecarlo: Some(MonteCarloRun {
            n,
            seed,
            accepted: mc.moments.accepted,
            postselect_rate: mc.moments.acceptance_rate(),
            exact_postselect_prob: mc.exact.postselect_prob,
            exact_mean_position: mc.exact.mean_position,
        }),
        metadata: metadata(Some(seed), Some(sigma)),
    })
}

/// Parse and cross-check a scenario; returns a one-line summary.
pub fn cmd_validate(arg: &str) -> Result<String, CliError> {
    let l = load_scenario(arg)?;
    let sc = &l.scenario;
    sc.validate()?;
    let c = &sc.circuit;
    Ok(format!(
        "{}: ok ({} elements, {} markers, {} detectors, {} probes, post-selection {})\n",
        l.name,
        c.stages().len(),
        c.markers().len(),
        c.detectors().len(),
        sc.probes.len(),
        sc.postselect.join(" & ")
    ))
}
