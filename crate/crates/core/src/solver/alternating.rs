//! The alternating loop between the resource step and the quality step.
//!
//! Round 1 evaluates `d = d_min·1`. Round `k ≥ 2` re-solves the quality step
//! with the previous round's allocation and the round-`k` sum cap, then
//! re-solves the resource step for the new feature sizes. A round is
//! feasible when the resource step succeeds and the resulting mean energy is
//! within budget; the loop stops at the first infeasible round, when `Σd`
//! stops moving, or at the round cap.
//!
//! Stopping at the first infeasible round can leave up to one increment
//! (a factor `η` on `Σd`) on the table. The last increment is therefore
//! shortened by bisection along the segment from the last feasible point
//! towards the infeasible one, keeping the furthest feasible point.

use crate::cost::{RoundRecord, Scenario, Solution};
use crate::error::{Error, Result};

use super::quality::solve_sizes;
use super::resource::{solve_resources_with, RadioRule, ResourceSolution};

fn record(scenario: &Scenario, round: usize, d: &[f64], step: Option<&ResourceSolution>, shortened: bool) -> RoundRecord {
    let (feasible, mean_energy, mean_latency) = match step {
        Some(s) => (s.mean_energy <= scenario.energy_budget, s.mean_energy, s.mean_latency),
        None => (false, f64::NAN, f64::NAN),
    };
    RoundRecord {
        round,
        d: d.to_vec(),
        sum_quality: scenario.net.quality_slope * d.iter().sum::<f64>(),
        feasible,
        mean_energy,
        mean_latency,
        shortened,
    }
}

/// Resource step that counts any latency or energy violation as infeasible.
fn feasible_step(d: &[f64], scenario: &Scenario, rule: RadioRule) -> Result<Option<ResourceSolution>> {
    match solve_resources_with(d, scenario, rule) {
        Ok(step) => Ok(Some(step)),
        Err(Error::LatencyInfeasible { .. } | Error::NoBracket { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Joint optimization of feature sizes and resources.
pub fn alternate(scenario: &Scenario) -> Result<Solution> {
    alternate_with(scenario, RadioRule::KktOptimal)
}

/// [`alternate`] with the radio shares fixed by `rule`.
pub fn alternate_with(scenario: &Scenario, rule: RadioRule) -> Result<Solution> {
    scenario.validate()?;
    let m = scenario.mobiles();
    let settings = scenario.settings;
    let mut d = vec![scenario.d_min; m];
    let mut step = match feasible_step(&d, scenario, rule) {
        Ok(Some(step)) => step,
        Ok(None) => {
            return Err(Error::InitialInfeasible(
                "latency budget cannot be met at the minimum feature size".into(),
            ))
        }
        Err(e) => return Err(Error::InitialInfeasible(e.to_string())),
    };
    if step.mean_energy > scenario.energy_budget {
        return Err(Error::InitialInfeasible(
            Error::EnergyInfeasible {
                mean_energy: step.mean_energy,
                budget: scenario.energy_budget,
            }
            .to_string(),
        ));
    }
    let mut rounds = vec![record(scenario, 1, &d, Some(&step), false)];
    let stagnation = settings.stagnation_tol * m as f64 * scenario.d_min;

    for round in 2..=settings.max_rounds.max(1) {
        let next = solve_sizes(&step.alloc, scenario, round)?;
        let grew = next.iter().sum::<f64>() - d.iter().sum::<f64>();
        if grew < stagnation {
            break;
        }
        let next_step = feasible_step(&next, scenario, rule)?;
        rounds.push(record(scenario, round, &next, next_step.as_ref(), false));
        match next_step {
            Some(s) if s.mean_energy <= scenario.energy_budget => {
                d = next;
                step = s;
            }
            _ => {
                if let Some((d_short, s_short)) = shorten_last_step(scenario, rule, &d, &next)? {
                    rounds.push(record(scenario, round, &d_short, Some(&s_short), true));
                    d = d_short;
                    step = s_short;
                }
                break;
            }
        }
    }
    Solution::evaluate(scenario, d, step.alloc, rounds)
}

/// Furthest feasible point on the segment `from → to` found by bisection,
/// or `None` when nothing beyond `from` is feasible.
fn shorten_last_step(
    scenario: &Scenario,
    rule: RadioRule,
    from: &[f64],
    to: &[f64],
) -> Result<Option<(Vec<f64>, ResourceSolution)>> {
    let point = |t: f64| -> Vec<f64> {
        from.iter()
            .zip(to)
            .map(|(a, b)| (a + t * (b - a)).clamp(scenario.d_min, scenario.d_max))
            .collect()
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = None;
    for _ in 0..scenario.settings.final_step_iters {
        let t = 0.5 * (lo + hi);
        let d = point(t);
        match feasible_step(&d, scenario, rule)? {
            Some(s) if s.mean_energy <= scenario.energy_budget => {
                lo = t;
                best = Some((d, s));
            }
            _ => hi = t,
        }
    }
    Ok(best)
}
