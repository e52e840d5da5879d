//! Independent oracles and instance generators shared by the integration
//! tests. Nothing here calls the solver; costs are recomputed from the
//! scenario fields directly.

#![allow(dead_code)]

use fhei::cost::{Scenario, ScenarioParams};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

/// Uniform on a log scale between `lo` and `hi`.
pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn jitter(rng: &mut ChaCha8Rng, x: f64) -> f64 {
    x * log_uniform(rng, 0.5, 2.0)
}

/// Default parameters with every scalar scaled by an independent factor in
/// `[0.5, 2]`.
pub fn perturbed_params(rng: &mut ChaCha8Rng) -> ScenarioParams {
    let mut p = ScenarioParams::default();
    p.uplink_bandwidth_hz = jitter(rng, p.uplink_bandwidth_hz);
    p.downlink_bandwidth_hz = jitter(rng, p.downlink_bandwidth_hz);
    p.uplink_power_w = jitter(rng, p.uplink_power_w);
    p.downlink_power_w = jitter(rng, p.downlink_power_w);
    p.receive_power_w = jitter(rng, p.receive_power_w);
    p.raw_data_bytes = jitter(rng, p.raw_data_bytes);
    p.edge_flops = jitter(rng, p.edge_flops);
    p.local_flops_min = jitter(rng, p.local_flops_min);
    p.local_flops_max = p.local_flops_min * jitter(rng, 3.0).max(1.0);
    p.feature_min_bytes = jitter(rng, p.feature_min_bytes);
    p.feature_max_bytes = p.feature_min_bytes * jitter(rng, 6.0 / 2.8).max(1.05);
    p.energy_budget_j = jitter(rng, p.energy_budget_j);
    p.latency_budget_s = jitter(rng, p.latency_budget_s);
    p.energy_coefficient = jitter(rng, p.energy_coefficient);
    p.net.base_load = jitter(rng, p.net.base_load);
    p.net.fn_slope = jitter(rng, p.net.fn_slope);
    p.net.in_slope = jitter(rng, p.net.in_slope);
    p
}

pub fn unit_gamma_gains(rng: &mut ChaCha8Rng, m: usize) -> (Vec<f64>, Vec<f64>) {
    let g = Gamma::new(3.0, 1.0 / 3.0).unwrap();
    let up = (0..m).map(|_| g.sample(rng)).collect();
    let down = (0..m).map(|_| g.sample(rng)).collect();
    (up, down)
}

/// A perturbed scenario with gamma gains and random local caps.
pub fn random_scenario(rng: &mut ChaCha8Rng, m: usize) -> Scenario {
    let p = perturbed_params(rng);
    let (up, down) = unit_gamma_gains(rng, m);
    let caps: Vec<f64> = (0..m)
        .map(|_| rng.random_range(p.local_flops_min..=p.local_flops_max))
        .collect();
    p.build(&up, &down, Some(&caps)).expect("perturbed scenario is valid")
}

pub fn random_sizes(rng: &mut ChaCha8Rng, s: &Scenario) -> Vec<f64> {
    (0..s.mobiles())
        .map(|_| rng.random_range(s.d_min..=s.d_max))
        .collect()
}

/// Minimum mean energy over a full grid of the two-mobile resource space:
/// the first mobile's uplink, downlink and edge shares on `j/(n+1)`,
/// `j = 1..=n`, and each local speed on `Q_m·j/n`, `j = 1..=n`. Returns
/// `None` when no grid point meets the mean latency budget.
pub fn resource_grid_min_energy(s: &Scenario, d: &[f64], n: usize) -> Option<f64> {
    assert_eq!(d.len(), 2);
    let shares: Vec<f64> = (1..=n).map(|j| j as f64 / (n + 1) as f64).collect();
    let speeds: Vec<Vec<f64>> = (0..2)
        .map(|m| (1..=n).map(|j| s.local_caps[m] * j as f64 / n as f64).collect())
        .collect();
    let up_bits = 8.0 * s.raw_bytes;
    let down_bits: Vec<f64> = d.iter().map(|x| 8.0 * x).collect();
    let edge_load: Vec<f64> = d.iter().map(|x| s.net.base_load + s.net.fn_slope * x).collect();
    let local_load: Vec<f64> = d.iter().map(|x| s.net.in_slope * x).collect();
    let budget = 2.0 * s.latency_budget;

    shares
        .par_iter()
        .filter_map(|&a| {
            let mut best = f64::INFINITY;
            let up_t = [
                up_bits / (a * s.links[0].uplink_rate),
                up_bits / ((1.0 - a) * s.links[1].uplink_rate),
            ];
            for &b in &shares {
                let down_t = [
                    down_bits[0] / (b * s.links[0].downlink_rate),
                    down_bits[1] / ((1.0 - b) * s.links[1].downlink_rate),
                ];
                let radio_e = s.radio.uplink_power * (up_t[0] + up_t[1]) + s.rx_power * (down_t[0] + down_t[1]);
                for &f in &shares {
                    let edge_t = edge_load[0] / (f * s.edge_capacity) + edge_load[1] / ((1.0 - f) * s.edge_capacity);
                    let fixed_t = up_t[0] + up_t[1] + down_t[0] + down_t[1] + edge_t;
                    if fixed_t >= budget {
                        continue;
                    }
                    for &q0 in &speeds[0] {
                        for &q1 in &speeds[1] {
                            let t = fixed_t + local_load[0] / q0 + local_load[1] / q1;
                            if t > budget {
                                continue;
                            }
                            let e = radio_e + s.psi * (q0 * q0 * local_load[0] + q1 * q1 * local_load[1]);
                            best = best.min(e);
                        }
                    }
                }
            }
            best.is_finite().then_some(best / 2.0)
        })
        .reduce_with(f64::min)
}

/// Maximum of `Σx` over `{lower ≤ x ≤ upper, weights·x ≤ budget, Σx ≤ cap}`
/// by enumerating every vertex of the polytope. `None` when it is empty.
pub fn lp_vertex_max(lower: &[f64], upper: &[f64], weights: &[f64], budget: f64, cap: f64) -> Option<f64> {
    let m = lower.len();
    // Rows a·x ≤ b.
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..m {
        let mut e = vec![0.0; m];
        e[i] = 1.0;
        rows.push((e.clone(), upper[i]));
        e[i] = -1.0;
        rows.push((e, -lower[i]));
    }
    rows.push((weights.to_vec(), budget));
    rows.push((vec![1.0; m], cap));

    let mut best: Option<f64> = None;
    for subset in combinations(rows.len(), m) {
        let a = DMatrix::from_fn(m, m, |r, c| rows[subset[r]].0[c]);
        let b = DVector::from_fn(m, |r, _| rows[subset[r]].1);
        let Some(x) = a.lu().solve(&b) else { continue };
        if x.iter().any(|v| !v.is_finite()) {
            continue;
        }
        let feasible = rows.iter().all(|(a, b)| {
            let terms = a.iter().zip(x.iter()).map(|(p, q)| p * q);
            let (lhs, mag) = terms.fold((0.0, b.abs()), |(s, g), t| (s + t, g + t.abs()));
            lhs <= b + 1e-12 * mag
        });
        if feasible {
            let v = x.sum();
            best = Some(best.map_or(v, |b: f64| b.max(v)));
        }
    }
    best
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
