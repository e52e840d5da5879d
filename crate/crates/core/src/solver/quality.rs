//! Quality-maximal feature sizes for a fixed allocation.
//!
//! With resources fixed, each mobile's energy is affine in its feature size
//! and the objective is `δs·Σd`, so the problem is a fractional knapsack:
//! every byte is worth the same, and the cheapest bytes (lowest marginal
//! energy) are bought first. The per-round cap on `Σd` only truncates the
//! greedy fill, so the greedy stays optimal.

use crate::cost::{mobile_energy, ResourceAllocation, Scenario, BITS_PER_BYTE};
use crate::error::{Error, Result};

/// Marginal energy per feature byte of mobile `m`: `σ·8/Γ_m + ψ·q_m²·c2`.
pub fn energy_slope(scenario: &Scenario, m: usize, alloc: &ResourceAllocation) -> Result<f64> {
    let link = scenario.links.get(m).ok_or(Error::LengthMismatch {
        expected: m + 1,
        got: scenario.mobiles(),
    })?;
    let down = alloc.shares.beta[m] * link.downlink_rate;
    if !(down > 0.0) {
        return Err(Error::ZeroResource {
            mobile: m,
            resource: "downlink rate",
        });
    }
    let q = alloc.local[m];
    if !(q > 0.0) {
        return Err(Error::ZeroResource {
            mobile: m,
            resource: "local compute",
        });
    }
    Ok(scenario.rx_power * BITS_PER_BYTE / down + scenario.psi * q * q * scenario.net.in_slope)
}

/// Upper bound on `Σd` in round `round` (1-based): `M·min(d_min·η^(k−1), d_max)`.
pub fn round_sum_cap(scenario: &Scenario, round: usize) -> f64 {
    let exponent = i32::try_from(round.saturating_sub(1)).unwrap_or(i32::MAX);
    let per_mobile = (scenario.d_min * scenario.eta.powi(exponent)).min(scenario.d_max);
    scenario.mobiles() as f64 * per_mobile
}

/// Greedy fill from `d_min·1`: spend the remaining energy budget on the
/// mobiles with the lowest [`energy_slope`] first (ties by index), each up
/// to `d_max`, never letting `Σd` exceed [`round_sum_cap`].
pub fn solve_sizes(alloc: &ResourceAllocation, scenario: &Scenario, round: usize) -> Result<Vec<f64>> {
    if round == 0 {
        return Err(Error::validation("rounds are numbered from 1"));
    }
    alloc.validate(scenario)?;
    let m = scenario.mobiles();
    let mut d = vec![scenario.d_min; m];
    let mut base_energy = 0.0;
    for (i, &x) in d.iter().enumerate() {
        base_energy += mobile_energy(scenario, i, x, alloc)?;
    }
    let total_budget = m as f64 * scenario.energy_budget;
    if base_energy > total_budget * (1.0 + scenario.settings.constraint_tol) {
        return Err(Error::EnergyInfeasible {
            mean_energy: base_energy / m as f64,
            budget: scenario.energy_budget,
        });
    }
    let mut budget = (total_budget - base_energy).max(0.0);
    let mut sum_room = (round_sum_cap(scenario, round) - m as f64 * scenario.d_min).max(0.0);

    let slopes = (0..m)
        .map(|i| energy_slope(scenario, i, alloc))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| slopes[a].total_cmp(&slopes[b]).then(a.cmp(&b)));

    let box_room = scenario.d_max - scenario.d_min;
    for i in order {
        if sum_room <= 0.0 {
            break;
        }
        let affordable = if slopes[i] > 0.0 {
            budget / slopes[i]
        } else {
            f64::INFINITY
        };
        let step = box_room.min(sum_room).min(affordable);
        if step <= 0.0 {
            break;
        }
        d[i] = (scenario.d_min + step).min(scenario.d_max);
        sum_room -= step;
        budget = (budget - step * slopes[i]).max(0.0);
    }
    Ok(d)
}
