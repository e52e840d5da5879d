//! Benchmarks the joint solver is compared against, and a brute-force grid
//! oracle for small instances.

use rayon::prelude::*;

use crate::cost::{in_load, fn_load, ResourceAllocation, Scenario, Solution, BITS_PER_BYTE};
use crate::error::{Error, Result};
use crate::link::TimeShares;
use crate::solver::{alternate_with, solve_resources, RadioRule, ResourceSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaselineKind {
    ConstantQuality,
    ChannelInversionComputeOnly,
    JointGridOracle,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 3] = [
        BaselineKind::ConstantQuality,
        BaselineKind::ChannelInversionComputeOnly,
        BaselineKind::JointGridOracle,
    ];

    pub fn run(self, scenario: &Scenario, grid_resolution: usize) -> Result<Solution> {
        match self {
            BaselineKind::ConstantQuality => constant_quality(scenario),
            BaselineKind::ChannelInversionComputeOnly => channel_inversion_compute_only(scenario),
            BaselineKind::JointGridOracle => joint_grid_oracle(scenario, grid_resolution),
        }
    }
}

fn uniform_step(scenario: &Scenario, size: f64) -> Result<Option<ResourceSolution>> {
    match solve_resources(&vec![size; scenario.mobiles()], scenario) {
        Ok(s) if s.mean_energy <= scenario.energy_budget => Ok(Some(s)),
        Ok(_) | Err(Error::LatencyInfeasible { .. } | Error::NoBracket { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Best common feature size: every mobile gets the same `d̄`, the largest
/// one for which the optimal resources meet both budgets.
///
/// Loads and energies grow with `d̄`, so feasibility is monotone and `d̄` is
/// found by bisection.
pub fn constant_quality(scenario: &Scenario) -> Result<Solution> {
    scenario.validate()?;
    let Some(mut best) = uniform_step(scenario, scenario.d_min)? else {
        return Err(Error::InitialInfeasible(
            "a common minimum feature size violates a budget".into(),
        ));
    };
    let mut size = scenario.d_min;
    if let Some(top) = uniform_step(scenario, scenario.d_max)? {
        size = scenario.d_max;
        best = top;
    } else {
        let (mut lo, mut hi) = (scenario.d_min, scenario.d_max);
        for _ in 0..scenario.settings.bisection_max_iter {
            if hi - lo <= 1e-12 * scenario.d_max {
                break;
            }
            let mid = 0.5 * (lo + hi);
            match uniform_step(scenario, mid)? {
                Some(s) => {
                    lo = mid;
                    size = mid;
                    best = s;
                }
                None => hi = mid,
            }
        }
    }
    Solution::evaluate(scenario, vec![size; scenario.mobiles()], best.alloc, Vec::new())
}

/// Equal-throughput radio shares with compute and feature sizes optimized by
/// the same alternating loop as the joint solver.
pub fn channel_inversion_compute_only(scenario: &Scenario) -> Result<Solution> {
    alternate_with(scenario, RadioRule::ChannelInversion)
}

pub const GRID_ORACLE_MAX_MOBILES: usize = 2;

/// Grid axes at resolution `n`. Doubling `n` refines every axis in place, so
/// the optimum over a finer grid is never worse.
struct Axes {
    /// First mobile's share of a two-way split: `j/n`, `j = 1..n`.
    split: Vec<f64>,
    /// `d_min + (d_max − d_min)·j/n`, `j = 0..=n`.
    sizes: Vec<f64>,
    /// `Q_m·j/n`, `j = 1..=n`.
    speeds: Vec<Vec<f64>>,
}

impl Axes {
    fn new(scenario: &Scenario, n: usize) -> Self {
        let split = if scenario.mobiles() == 1 {
            vec![1.0]
        } else {
            (1..n).map(|j| j as f64 / n as f64).collect()
        };
        let span = scenario.d_max - scenario.d_min;
        let mut sizes: Vec<f64> = (0..=n)
            .map(|j| scenario.d_min + span * j as f64 / n as f64)
            .collect();
        sizes.dedup();
        let speeds = scenario
            .local_caps
            .iter()
            .map(|&q| (1..=n).map(|j| q * j as f64 / n as f64).collect())
            .collect();
        Axes { split, sizes, speeds }
    }

    fn shares(&self, i: usize, m: usize) -> Vec<f64> {
        if m == 1 {
            vec![1.0]
        } else {
            vec![self.split[i], 1.0 - self.split[i]]
        }
    }
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
struct GridPoint {
    energy: f64,
    alpha: usize,
    beta: usize,
    edge: usize,
    speeds: [usize; 2],
}

/// Lowest-energy grid point meeting the latency budget for fixed `d`.
fn best_resources(scenario: &Scenario, axes: &Axes, d: &[f64]) -> Option<GridPoint> {
    let m = d.len();
    let k = axes.split.len();
    let net = &scenario.net;
    let up_time: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let a = axes.shares(i, m);
            (0..m)
                .map(|j| BITS_PER_BYTE * scenario.raw_bytes / (a[j] * scenario.links[j].uplink_rate))
                .collect()
        })
        .collect();
    let down_time: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let b = axes.shares(i, m);
            (0..m)
                .map(|j| BITS_PER_BYTE * d[j] / (b[j] * scenario.links[j].downlink_rate))
                .collect()
        })
        .collect();
    let edge_time: Vec<f64> = (0..k)
        .map(|i| {
            let f = axes.shares(i, m);
            (0..m)
                .map(|j| fn_load(net, d[j]) / (f[j] * scenario.edge_capacity))
                .sum()
        })
        .collect();
    // Per mobile: local time falls and local energy rises along the axis.
    let local_time: Vec<Vec<f64>> = (0..m)
        .map(|j| axes.speeds[j].iter().map(|q| in_load(net, d[j]) / q).collect())
        .collect();
    let local_energy: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            axes.speeds[j]
                .iter()
                .map(|q| scenario.psi * q * q * in_load(net, d[j]))
                .collect()
        })
        .collect();
    let budget = m as f64 * scenario.latency_budget;
    // Smallest speed index of mobile `j` whose local time fits in `slack`.
    let first_fit = |j: usize, slack: f64| -> Option<usize> {
        let idx = local_time[j].partition_point(|&t| t > slack);
        (idx < local_time[j].len()).then_some(idx)
    };

    (0..k)
        .into_par_iter()
        .filter_map(|ia| {
            let mut best: Option<GridPoint> = None;
            let up_t: f64 = up_time[ia].iter().sum();
            let up_e = scenario.radio.uplink_power * up_t;
            for (ib, down) in down_time.iter().enumerate() {
                let down_t: f64 = down.iter().sum();
                let comm_e = up_e + scenario.rx_power * down_t;
                for (ie, edge_t) in edge_time.iter().enumerate() {
                    let slack = budget - up_t - down_t - edge_t;
                    if slack <= 0.0 {
                        continue;
                    }
                    let candidate = if m == 1 {
                        first_fit(0, slack).map(|q| (local_energy[0][q], [q, 0]))
                    } else {
                        (0..axes.speeds[0].len())
                            .filter_map(|q0| {
                                let rest = slack - local_time[0][q0];
                                let q1 = first_fit(1, rest)?;
                                Some((local_energy[0][q0] + local_energy[1][q1], [q0, q1]))
                            })
                            .min_by(|a, b| a.0.total_cmp(&b.0))
                    };
                    if let Some((local_e, speeds)) = candidate {
                        let point = GridPoint {
                            energy: (comm_e + local_e) / m as f64,
                            alpha: ia,
                            beta: ib,
                            edge: ie,
                            speeds,
                        };
                        if best.is_none_or(|b| point.energy < b.energy) {
                            best = Some(point);
                        }
                    }
                }
            }
            best
        })
        .reduce_with(|a, b| {
            if b.energy < a.energy || (b.energy == a.energy && (b.alpha, b.beta, b.edge) < (a.alpha, a.beta, a.edge)) {
                b
            } else {
                a
            }
        })
}

/// Exhaustive search over simplex grids for the radio shares and edge
/// compute and box grids for local speeds and feature sizes (M ≤ 2).
///
/// Feature-size tuples are visited in decreasing `Σd`; for each, the
/// minimum-energy resource point meeting the latency budget is found exactly
/// over the grid, so the first tuple meeting the energy budget is the grid
/// optimum.
pub fn joint_grid_oracle(scenario: &Scenario, resolution: usize) -> Result<Solution> {
    scenario.validate()?;
    let m = scenario.mobiles();
    if m > GRID_ORACLE_MAX_MOBILES {
        return Err(Error::TooLarge {
            mobiles: m,
            limit: GRID_ORACLE_MAX_MOBILES,
        });
    }
    if resolution < 2 {
        return Err(Error::validation("grid resolution must be at least 2"));
    }
    let axes = Axes::new(scenario, resolution);
    let mut tuples: Vec<Vec<f64>> = if m == 1 {
        axes.sizes.iter().map(|&x| vec![x]).collect()
    } else {
        axes.sizes
            .iter()
            .flat_map(|&a| axes.sizes.iter().map(move |&b| vec![a, b]))
            .collect()
    };
    tuples.sort_by(|a, b| b.iter().sum::<f64>().total_cmp(&a.iter().sum::<f64>()));

    for d in tuples {
        let Some(point) = best_resources(scenario, &axes, &d) else {
            continue;
        };
        if point.energy > scenario.energy_budget {
            continue;
        }
        let alloc = ResourceAllocation {
            shares: TimeShares {
                alpha: axes.shares(point.alpha, m),
                beta: axes.shares(point.beta, m),
            },
            edge: axes
                .shares(point.edge, m)
                .into_iter()
                .map(|f| f * scenario.edge_capacity)
                .collect(),
            local: (0..m).map(|j| axes.speeds[j][point.speeds[j]]).collect(),
        };
        return Solution::evaluate(scenario, d, alloc, Vec::new());
    }
    Err(Error::InitialInfeasible("no grid point meets both budgets".into()))
}
