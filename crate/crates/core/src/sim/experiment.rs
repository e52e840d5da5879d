//! The experiments behind each CLI subcommand.

use rayon::prelude::*;

use crate::baselines::{channel_inversion_compute_only, constant_quality, joint_grid_oracle, GRID_ORACLE_MAX_MOBILES};
use crate::cost::{Scenario, Solution};
use crate::error::{Error, Result};
use crate::solver::alternate;

use super::channels::{sample_channels, trial_seed};
use super::config::{ExperimentConfig, Mode, REFERENCE_GAINS_DOWN, REFERENCE_GAINS_UP};
use super::table::{sort_rows, Method, ResultRow, RowKind};

const BENCHMARKED: [Method; 3] = [Method::Fhei, Method::ConstantQuality, Method::ChannelInversion];

pub fn solve(method: Method, scenario: &Scenario, grid_resolution: usize) -> Result<Solution> {
    match method {
        Method::Fhei => alternate(scenario),
        Method::ConstantQuality => constant_quality(scenario),
        Method::ChannelInversion => channel_inversion_compute_only(scenario),
        Method::GridOracle => joint_grid_oracle(scenario, grid_resolution),
    }
    .map_err(|e| Error::Method {
        method: method.name(),
        source: Box::new(e),
    })
}

/// Like [`solve`], but a draw with no feasible point yields `Ok(None)`.
fn solve_draw(method: Method, scenario: &Scenario, grid_resolution: usize) -> Result<Option<Solution>> {
    match solve(method, scenario, grid_resolution) {
        Ok(s) => Ok(Some(s)),
        Err(Error::Method { source, .. })
            if matches!(
                *source,
                Error::InitialInfeasible(_)
                    | Error::LatencyInfeasible { .. }
                    | Error::EnergyInfeasible { .. }
                    | Error::NoBracket { .. }
            ) =>
        {
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn is_feasible(scenario: &Scenario, solution: &Solution) -> bool {
    scenario.within_budgets(solution.mean_latency(), solution.mean_energy())
}

/// Channel gains for draw `trial` with `mobiles` mobiles.
pub fn draw_gains(config: &ExperimentConfig, mobiles: usize, trial: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    sample_channels(
        trial_seed(config.seed, mobiles, trial),
        mobiles,
        config.gamma_shape,
        config.gamma_scale,
    )
}

fn per_mobile_rows(config: &ExperimentConfig, gains: (Vec<f64>, Vec<f64>), verbose: bool) -> Result<Vec<ResultRow>> {
    let scenario = config.scenario(&gains.0, &gains.1)?;
    let mut methods = BENCHMARKED.to_vec();
    if scenario.mobiles() <= GRID_ORACLE_MAX_MOBILES {
        methods.push(Method::GridOracle);
    }
    let mut rows = Vec::new();
    for method in methods {
        let sol = solve(method, &scenario, config.oracle_resolution)?;
        rows.extend(ResultRow::per_mobile(&sol, method, None, is_feasible(&scenario, &sol), verbose));
    }
    sort_rows(&mut rows);
    Ok(rows)
}

/// Per-mobile feature sizes and qualities of every method on one channel
/// draw: the configured gains, or the reference five-mobile draw.
pub fn run_fig4a(config: &ExperimentConfig, verbose: bool) -> Result<Vec<ResultRow>> {
    let gains = match config.fixed_gains() {
        Some(g) => g,
        None if config.mobiles == REFERENCE_GAINS_UP.len() => (REFERENCE_GAINS_UP.to_vec(), REFERENCE_GAINS_DOWN.to_vec()),
        None => {
            return Err(Error::validation(format!(
                "fig4a without explicit gains needs mobiles = {}",
                REFERENCE_GAINS_UP.len()
            )))
        }
    };
    per_mobile_rows(config, gains, verbose)
}

/// Every method on one instance: the configured gains, or draw 0.
pub fn run_single(config: &ExperimentConfig, verbose: bool) -> Result<Vec<ResultRow>> {
    let gains = match config.fixed_gains() {
        Some(g) => g,
        None => draw_gains(config, config.mobiles, 0)?,
    };
    per_mobile_rows(config, gains, verbose)
}

fn trial_rows(
    config: &ExperimentConfig,
    methods: &[Method],
    mobiles: usize,
    trial: usize,
    gains: (Vec<f64>, Vec<f64>),
    verbose: bool,
) -> Result<Vec<ResultRow>> {
    let scenario = config.scenario(&gains.0, &gains.1)?;
    methods
        .iter()
        .map(|&method| {
            let sol = solve_draw(method, &scenario, config.oracle_resolution)?;
            let feasible = sol.as_ref().is_some_and(|s| is_feasible(&scenario, s));
            Ok(ResultRow::trial(sol.as_ref(), mobiles, method, trial, feasible, verbose))
        })
        .collect()
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Mean rows over the draws where every method was feasible.
fn mean_rows(trials: &[ResultRow], methods: &[Method]) -> Vec<ResultRow> {
    let mut out = Vec::new();
    let mut counts: Vec<usize> = trials.iter().map(|r| r.mobiles).collect();
    counts.dedup();
    for m in counts {
        let at_m: Vec<&ResultRow> = trials.iter().filter(|r| r.mobiles == m).collect();
        let complete = |t: Option<usize>| at_m.iter().filter(|r| r.trial == t).all(|r| r.feasible);
        let kept: Vec<&&ResultRow> = at_m.iter().filter(|r| complete(r.trial)).collect();
        for &method in methods {
            let rows: Vec<&ResultRow> = kept.iter().filter(|r| r.method == method).map(|r| **r).collect();
            out.push(ResultRow {
                kind: RowKind::Mean,
                mobiles: m,
                trial: None,
                method,
                mobile: None,
                d_bytes: None,
                quality: None,
                sum_quality: mean(rows.iter().filter_map(|r| r.sum_quality)),
                mean_latency_s: mean(rows.iter().filter_map(|r| r.mean_latency_s)),
                mean_energy_j: mean(rows.iter().filter_map(|r| r.mean_energy_j)),
                feasible: !rows.is_empty(),
                count: Some(rows.len()),
                dump: None,
            });
        }
    }
    out
}

/// Sum quality of every method over `trials` random draws per mobile count
/// in `mobiles_range`, with per-count means.
pub fn run_fig4b(config: &ExperimentConfig, verbose: bool) -> Result<Vec<ResultRow>> {
    let [lo, hi] = config.mobiles_range;
    let jobs: Vec<(usize, usize)> = (lo..=hi)
        .flat_map(|m| (0..config.trials).map(move |t| (m, t)))
        .collect();
    let per_job = jobs
        .into_par_iter()
        .map(|(m, t)| {
            let gains = draw_gains(config, m, t)?;
            trial_rows(config, &BENCHMARKED, m, t, gains, verbose)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<ResultRow> = per_job.into_iter().flatten().collect();
    sort_rows(&mut rows);
    let means = mean_rows(&rows, &BENCHMARKED);
    rows.extend(means);
    sort_rows(&mut rows);
    Ok(rows)
}

/// The joint solver against the brute-force grid on `trials` draws.
pub fn run_oracle(config: &ExperimentConfig, verbose: bool) -> Result<Vec<ResultRow>> {
    if config.mobiles > GRID_ORACLE_MAX_MOBILES {
        return Err(Error::TooLarge {
            mobiles: config.mobiles,
            limit: GRID_ORACLE_MAX_MOBILES,
        });
    }
    let methods = [Method::Fhei, Method::GridOracle];
    let trials = if config.fixed_gains().is_some() { 1 } else { config.trials };
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| {
            let gains = match config.fixed_gains() {
                Some(g) => g,
                None => draw_gains(config, config.mobiles, t)?,
            };
            trial_rows(config, &methods, config.mobiles, t, gains, verbose)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<ResultRow> = per_trial.into_iter().flatten().collect();
    sort_rows(&mut rows);
    let means = mean_rows(&rows, &methods);
    rows.extend(means);
    sort_rows(&mut rows);
    Ok(rows)
}

pub fn run(config: &ExperimentConfig, verbose: bool) -> Result<Vec<ResultRow>> {
    match config.mode {
        Mode::Fig4a => run_fig4a(config, verbose),
        Mode::Fig4b => run_fig4b(config, verbose),
        Mode::Single => run_single(config, verbose),
        Mode::Oracle => run_oracle(config, verbose),
    }
}

/// The resolved config as written above the CSV header; the output path
/// is left out so it cannot change the emitted bytes.
pub fn preamble(config: &ExperimentConfig) -> String {
    let mut echoed = config.clone();
    echoed.output = None;
    echoed.to_toml_string()
}
