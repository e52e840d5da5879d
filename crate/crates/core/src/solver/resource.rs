//! Energy-minimal radio and compute allocation for fixed feature sizes.
//!
//! Stationarity of the Lagrangian fixes the *shape* of the uplink, downlink
//! and edge allocations independently of the latency multiplier, and the
//! slackness of the three sum constraints fixes their scale. What remains is
//! the single latency multiplier `λ`, which sets every uncapped local speed to
//! `(λ/2ψ)^(1/3)`; it is found by bisection on the tight latency constraint.

use crate::cost::{fn_load, in_load, ResourceAllocation, Scenario, BITS_PER_BYTE};
use crate::error::{Error, Result};
use crate::link::{inversion_shares, TimeShares};
use crate::profile::NetCostModel;

/// How uplink/downlink time is split before compute is optimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RadioRule {
    /// Closed-form KKT optimum.
    #[default]
    KktOptimal,
    /// Equal-throughput (channel inversion) shares.
    ChannelInversion,
}

/// Radio shares and edge compute: everything that acts before local
/// inference starts.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSideAllocation {
    pub shares: TimeShares,
    pub edge: Vec<f64>,
}

fn normalized(weights: Vec<f64>, total: f64) -> Vec<f64> {
    let sum: f64 = weights.iter().sum();
    weights.into_iter().map(|w| total * w / sum).collect()
}

pub(crate) fn shares_from_rates(
    uplink: &[f64],
    downlink: &[f64],
    d: &[f64],
    net: &NetCostModel,
    edge_capacity: f64,
) -> Result<EdgeSideAllocation> {
    if let Some(m) = uplink
        .iter()
        .zip(downlink)
        .position(|(&u, &v)| u <= 0.0 || v <= 0.0)
    {
        return Err(Error::ZeroRate(m));
    }
    if let Some(m) = d.iter().position(|&x| !(x > 0.0)) {
        return Err(Error::validation(format!("feature size of mobile {m} must be positive")));
    }
    let alpha = normalized(uplink.iter().map(|u| 1.0 / u.sqrt()).collect(), 1.0);
    let beta = normalized(d.iter().zip(downlink).map(|(x, v)| (x / v).sqrt()).collect(), 1.0);
    Ok(EdgeSideAllocation {
        shares: TimeShares { alpha, beta },
        edge: edge_split(d, net, edge_capacity),
    })
}

fn edge_split(d: &[f64], net: &NetCostModel, edge_capacity: f64) -> Vec<f64> {
    normalized(d.iter().map(|&x| fn_load(net, x).sqrt()).collect(), edge_capacity)
}

/// Optimal uplink shares (∝ `1/√U_m`), downlink shares (∝ `√(d_m/D_m)`) and
/// edge compute (∝ `√(L0 + c1·d_m)`). None of them depends on local speeds.
pub fn closed_form_shares(d: &[f64], scenario: &Scenario) -> Result<EdgeSideAllocation> {
    scenario.check_len(d)?;
    let up: Vec<f64> = scenario.links.iter().map(|l| l.uplink_rate).collect();
    let down: Vec<f64> = scenario.links.iter().map(|l| l.downlink_rate).collect();
    shares_from_rates(&up, &down, d, &scenario.net, scenario.edge_capacity)
}

/// Radio shares according to `rule`, with the optimal edge split either way
/// (the edge split does not depend on the radio shares).
pub fn edge_side_allocation(d: &[f64], scenario: &Scenario, rule: RadioRule) -> Result<EdgeSideAllocation> {
    match rule {
        RadioRule::KktOptimal => closed_form_shares(d, scenario),
        RadioRule::ChannelInversion => {
            scenario.check_len(d)?;
            if let Some(m) = d.iter().position(|&x| !(x > 0.0)) {
                return Err(Error::validation(format!("feature size of mobile {m} must be positive")));
            }
            Ok(EdgeSideAllocation {
                shares: inversion_shares(&scenario.links)?,
                edge: edge_split(d, &scenario.net, scenario.edge_capacity),
            })
        }
    }
}

/// Total uplink + downlink + edge time over all mobiles: the part of the
/// latency budget not available to local inference.
pub fn min_pre_compute_time(d: &[f64], scenario: &Scenario, alloc: &EdgeSideAllocation) -> Result<f64> {
    scenario.check_len(d)?;
    let mut total = 0.0;
    for (m, link) in scenario.links.iter().enumerate() {
        let up = alloc.shares.alpha[m] * link.uplink_rate;
        let down = alloc.shares.beta[m] * link.downlink_rate;
        let edge = alloc.edge[m];
        for (v, resource) in [(up, "uplink rate"), (down, "downlink rate"), (edge, "edge compute")] {
            if !(v > 0.0) {
                return Err(Error::ZeroResource { mobile: m, resource });
            }
        }
        total += BITS_PER_BYTE * scenario.raw_bytes / up
            + BITS_PER_BYTE * d[m] / down
            + fn_load(&scenario.net, d[m]) / edge;
    }
    Ok(total)
}

/// Local speeds for a latency multiplier: `min((λ/2ψ)^(1/3), Q_m)`.
pub fn local_speeds(lambda: f64, scenario: &Scenario) -> Vec<f64> {
    if scenario.psi == 0.0 {
        // Local speed is free energy-wise.
        return scenario.local_caps.clone();
    }
    let uncapped = (lambda / (2.0 * scenario.psi)).cbrt();
    scenario.local_caps.iter().map(|&cap| uncapped.min(cap)).collect()
}

fn local_time(d: &[f64], net: &NetCostModel, speeds: &[f64]) -> f64 {
    d.iter().zip(speeds).map(|(&x, q)| in_load(net, x) / q).sum()
}

/// Latency multiplier making the mean latency constraint tight.
///
/// The residual `Σ c2·d_m / q_m(λ) − (M·T̄ − pre)` decreases in `λ`. The
/// bracket starts at the multiplier that gives 1 FLOP/s and doubles until the
/// residual turns non-positive; the returned multiplier is always on the
/// feasible (non-positive residual) side.
pub fn solve_lambda(d: &[f64], scenario: &Scenario, alloc: &EdgeSideAllocation) -> Result<f64> {
    let settings = &scenario.settings;
    let m = scenario.mobiles() as f64;
    let budget = m * scenario.latency_budget;
    let pre = min_pre_compute_time(d, scenario, alloc)?;
    let available = budget - pre;
    let at_caps = local_time(d, &scenario.net, &scenario.local_caps);
    if available <= 0.0 || at_caps > available {
        return Err(Error::LatencyInfeasible {
            required: pre + at_caps,
            available: budget,
        });
    }
    let tol = settings.bisection_tol * budget;
    let max_cap = scenario.local_caps.iter().copied().fold(0.0, f64::max);
    let all_capped = 2.0 * scenario.psi * max_cap.powi(3);
    if scenario.psi == 0.0 || available - at_caps <= tol {
        // Every mobile at its cap exactly uses the remaining time.
        return Ok(all_capped);
    }

    let residual = |lambda: f64| local_time(d, &scenario.net, &local_speeds(lambda, scenario)) - available;
    let mut lo = 2.0 * scenario.psi;
    let mut doublings = 0;
    while residual(lo) <= 0.0 {
        lo *= 0.5;
        doublings += 1;
        if doublings > settings.max_doublings || lo == 0.0 {
            return Err(Error::NoBracket { doublings });
        }
    }
    let mut hi = lo;
    while residual(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > settings.max_doublings || !hi.is_finite() {
            return Err(Error::NoBracket { doublings });
        }
    }
    for _ in 0..settings.bisection_max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let r = residual(mid);
        if r > 0.0 {
            lo = mid;
        } else {
            hi = mid;
            if -r <= tol {
                break;
            }
        }
    }
    Ok(hi)
}

/// Output of the resource step.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceSolution {
    pub alloc: ResourceAllocation,
    pub lambda: f64,
    pub mean_energy: f64,
    pub mean_latency: f64,
}

fn check_feature_box(d: &[f64], scenario: &Scenario) -> Result<()> {
    scenario.check_len(d)?;
    let slack = 1e-9 * scenario.d_max;
    if let Some(m) = d
        .iter()
        .position(|&x| !(x >= scenario.d_min - slack && x <= scenario.d_max + slack))
    {
        return Err(Error::validation(format!(
            "feature size {} of mobile {m} is outside [{}, {}]",
            d[m], scenario.d_min, scenario.d_max
        )));
    }
    Ok(())
}

/// Minimizes mean energy for fixed feature sizes subject to the mean latency
/// budget and the radio/compute capacities.
pub fn solve_resources(d: &[f64], scenario: &Scenario) -> Result<ResourceSolution> {
    solve_resources_with(d, scenario, RadioRule::KktOptimal)
}

/// Same as [`solve_resources`] with the radio shares chosen by `rule`.
pub fn solve_resources_with(d: &[f64], scenario: &Scenario, rule: RadioRule) -> Result<ResourceSolution> {
    check_feature_box(d, scenario)?;
    let edge_side = edge_side_allocation(d, scenario, rule)?;
    let lambda = solve_lambda(d, scenario, &edge_side)?;
    let alloc = ResourceAllocation {
        shares: edge_side.shares,
        edge: edge_side.edge,
        local: local_speeds(lambda, scenario),
    };
    let mean_energy = scenario.mean_energy(d, &alloc)?;
    let mean_latency = scenario.mean_latency(d, &alloc)?;
    Ok(ResourceSolution {
        alloc,
        lambda,
        mean_energy,
        mean_latency,
    })
}

/// Multipliers implied by an allocation through the stationarity conditions.
///
/// Each of `mu`, `gamma`, `theta` is computed per mobile and averaged;
/// `stationarity_gap` is the largest relative spread among the per-mobile
/// values, which is zero at a KKT point. `zeta` follows the local-speed
/// condition `2ψ·q·c2·d + ζ − λ·c2·d/q² = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeState {
    pub lambda: f64,
    pub mu: f64,
    pub gamma: f64,
    pub theta: f64,
    pub zeta: Vec<f64>,
    /// Complementary slackness: which local-speed caps are active.
    pub capped: Vec<bool>,
    pub stationarity_gap: f64,
}

impl LagrangeState {
    pub fn recover(scenario: &Scenario, d: &[f64], solution: &ResourceSolution) -> Result<Self> {
        scenario.check_len(d)?;
        let m = scenario.mobiles() as f64;
        let lambda = solution.lambda;
        let a = &solution.alloc;
        let net = &scenario.net;
        let mut mus = Vec::new();
        let mut gammas = Vec::new();
        let mut thetas = Vec::new();
        for (i, link) in scenario.links.iter().enumerate() {
            let alpha = a.shares.alpha[i];
            let beta = a.shares.beta[i];
            mus.push(
                (scenario.radio.uplink_power + lambda) * BITS_PER_BYTE * scenario.raw_bytes
                    / (m * link.uplink_rate * alpha * alpha),
            );
            gammas.push(
                (scenario.rx_power + lambda) * BITS_PER_BYTE * d[i] / (m * link.downlink_rate * beta * beta),
            );
            thetas.push(lambda * fn_load(net, d[i]) / (m * a.edge[i] * a.edge[i]));
        }
        let zeta: Vec<f64> = d
            .iter()
            .zip(&a.local)
            .map(|(&x, &q)| lambda * in_load(net, x) / (q * q) - 2.0 * scenario.psi * q * in_load(net, x))
            .collect();
        let capped = a
            .local
            .iter()
            .zip(&scenario.local_caps)
            .map(|(q, cap)| q >= cap)
            .collect();
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let spread = |v: &[f64]| {
            let c = mean(v);
            v.iter().map(|x| ((x - c) / c).abs()).fold(0.0, f64::max)
        };
        let stationarity_gap = spread(&mus).max(spread(&gammas)).max(spread(&thetas));
        Ok(LagrangeState {
            lambda,
            mu: mean(&mus),
            gamma: mean(&gammas),
            theta: mean(&thetas),
            zeta,
            capped,
            stationarity_gap,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::ScenarioParams;
    use crate::link::MobileLink;
    use proptest::prelude::*;

    fn scenario(gu: &[f64], gd: &[f64]) -> Scenario {
        ScenarioParams::default().build(gu, gd, None).unwrap()
    }

    fn reference_draw() -> Scenario {
        scenario(&[0.05, 1.32, 1.95, 4.63, 3.43], &[5.17, 1.66, 1.51, 0.62, 1.14])
    }

    #[test]
    fn single_mobile_takes_everything() {
        let s = scenario(&[0.7], &[1.3]);
        let a = closed_form_shares(&[3e6], &s).unwrap();
        assert_eq!(a.shares.alpha, vec![1.0]);
        assert_eq!(a.shares.beta, vec![1.0]);
        assert_eq!(a.edge, vec![s.edge_capacity]);
    }

    #[test]
    fn uplink_shares_follow_inverse_sqrt_rate() {
        let net = NetCostModel::reference();
        let a = shares_from_rates(&[4.0, 1.0], &[1.0, 1.0], &[3e6, 5e6], &net, 1.0).unwrap();
        assert!((a.shares.alpha[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((a.shares.alpha[1] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_instance_is_uniform() {
        let s = scenario(&[1.0; 4], &[2.0; 4]);
        let a = closed_form_shares(&[3e6; 4], &s).unwrap();
        for m in 0..4 {
            assert!((a.shares.beta[m] - 0.25).abs() < 1e-15);
            assert!((a.edge[m] / s.edge_capacity - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_rate_rejected() {
        let s = scenario(&[0.0, 1.0], &[1.0, 1.0]);
        assert_eq!(closed_form_shares(&[3e6, 3e6], &s), Err(Error::ZeroRate(0)));
    }

    #[test]
    fn pre_compute_time_downlink_only() {
        let mut s = scenario(&[1.0, 2.0], &[0.5, 3.0]);
        s.raw_bytes = 0.0;
        s.net.base_load = 0.0;
        s.net.fn_slope = 1e-300;
        let d = [3e6, 4e6];
        let a = closed_form_shares(&d, &s).unwrap();
        let t = min_pre_compute_time(&d, &s, &a).unwrap();
        let expected: f64 = (0..2)
            .map(|m| 8.0 * d[m] / (a.shares.beta[m] * s.links[m].downlink_rate))
            .sum();
        assert!(((t - expected) / expected).abs() < 1e-9);
    }

    #[test]
    fn pre_compute_time_edge_term_scales_with_capacity() {
        let mut s = reference_draw();
        s.raw_bytes = 0.0;
        let d = [3e6; 5];
        let edge_time = |s: &Scenario| {
            let a = closed_form_shares(&d, s).unwrap();
            let comm: f64 = (0..5)
                .map(|m| 8.0 * d[m] / (a.shares.beta[m] * s.links[m].downlink_rate))
                .sum();
            min_pre_compute_time(&d, s, &a).unwrap() - comm
        };
        let t1 = edge_time(&s);
        s.edge_capacity *= 2.0;
        let t2 = edge_time(&s);
        assert!((t1 / t2 - 2.0).abs() < 1e-9);
    }

    #[test]
    fn pre_compute_time_reference_regression() {
        let s = reference_draw();
        let d = [s.d_min; 5];
        let a = closed_form_shares(&d, &s).unwrap();
        let t = min_pre_compute_time(&d, &s, &a).unwrap();
        // Term-by-term: Σ 8I/Λ + Σ 8d/Γ + (Σ √L)²/F with equal d.
        let l = fn_load(&s.net, s.d_min);
        let up: f64 = s.links.iter().map(|k| 1.0 / k.uplink_rate.sqrt()).sum::<f64>();
        let down: f64 = s.links.iter().map(|k| (s.d_min / k.downlink_rate).sqrt()).sum::<f64>();
        let expected = 8.0 * s.raw_bytes * up * up + 8.0 * down * down + 25.0 * l / s.edge_capacity;
        assert!(((t - expected) / expected).abs() < 1e-12);
        assert!(((t - 0.172_130_277_017_144_45) / t).abs() < 1e-12, "{t}");
    }

    #[test]
    fn lambda_closed_form_single_mobile() {
        let mut s = scenario(&[1.0], &[1.0]);
        s.local_caps = vec![1e15];
        let d = [3e6];
        let a = closed_form_shares(&d, &s).unwrap();
        let t = s.latency_budget - min_pre_compute_time(&d, &s, &a).unwrap();
        let lambda = solve_lambda(&d, &s, &a).unwrap();
        let expected = 2.0 * s.psi * (in_load(&s.net, 3e6) / t).powi(3);
        assert!(((lambda - expected) / expected).abs() < 1e-9);
    }

    #[test]
    fn lambda_cap_saturated_boundary() {
        let mut s = scenario(&[1.0, 1.0], &[1.0, 1.0]);
        let d = [3e6, 3e6];
        let a = closed_form_shares(&d, &s).unwrap();
        let pre = min_pre_compute_time(&d, &s, &a).unwrap();
        let at_caps: f64 = (0..2).map(|m| in_load(&s.net, d[m]) / s.local_caps[m]).sum();
        s.latency_budget = (pre + at_caps) / 2.0;
        let lambda = solve_lambda(&d, &s, &a).unwrap();
        let q = local_speeds(lambda, &s);
        assert_eq!(q, s.local_caps);
        assert!((lambda - 2.0 * s.psi * 4.5e9f64.powi(3)).abs() <= 1e-12 * lambda);

        s.latency_budget *= 0.999;
        assert!(matches!(solve_lambda(&d, &s, &a), Err(Error::LatencyInfeasible { .. })));
    }

    #[test]
    fn local_speed_examples() {
        let mut s = scenario(&[1.0, 1.0], &[1.0, 1.0]);
        s.local_caps = vec![0.5, 10.0];
        assert_eq!(local_speeds(2.0 * s.psi, &s), vec![0.5, 1.0]);
        assert_eq!(local_speeds(1e300, &s), s.local_caps);
    }

    #[test]
    fn kkt_residuals_vanish() {
        let s = reference_draw();
        let d = [5.5e6, 3.1e6, 2.9e6, 2.8e6, 4.0e6];
        let sol = solve_resources(&d, &s).unwrap();
        let state = LagrangeState::recover(&s, &d, &sol).unwrap();
        assert!(state.stationarity_gap < 1e-12, "{}", state.stationarity_gap);
        for m in 0..5 {
            let (q, c2d) = (sol.alloc.local[m], in_load(&s.net, d[m]));
            let stationarity = 2.0 * s.psi * q * c2d + state.zeta[m] - state.lambda * c2d / (q * q);
            assert!(stationarity.abs() <= 1e-9 * state.lambda * c2d / (q * q));
            if !state.capped[m] {
                assert!(state.zeta[m].abs() <= 1e-9 * state.lambda * c2d / (q * q));
            } else {
                assert!(state.zeta[m] > 0.0);
            }
        }
    }

    #[test]
    fn resources_tight_and_symmetric() {
        let mut s = scenario(&[1.2, 1.2], &[0.8, 0.8]);
        s.local_caps = vec![3e9; 2];
        let sol = solve_resources(&[4e6, 4e6], &s).unwrap();
        let a = &sol.alloc;
        assert_eq!(a.shares.alpha[0], a.shares.alpha[1]);
        assert_eq!(a.shares.beta[0], a.shares.beta[1]);
        assert_eq!(a.local[0], a.local[1]);
        assert!(((sol.mean_latency - s.latency_budget) / s.latency_budget).abs() < 1e-6);
        a.validate(&s).unwrap();
    }

    #[test]
    fn resources_rejects_out_of_box() {
        let s = scenario(&[1.0], &[1.0]);
        assert!(matches!(solve_resources(&[1e6], &s), Err(Error::Validation(_))));
        assert!(matches!(solve_resources(&[1e6, 2e6], &s), Err(Error::LengthMismatch { .. })));
    }

    fn random_feasible(s: &Scenario, d: &[f64], seed: u64) -> Option<ResourceAllocation> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = s.mobiles();
        let simplex = |rng: &mut rand_chacha::ChaCha8Rng| {
            let w: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..1.0)).collect();
            let t: f64 = w.iter().sum();
            w.into_iter().map(|x| x / t).collect::<Vec<_>>()
        };
        let alpha = simplex(&mut rng);
        let beta = simplex(&mut rng);
        let edge: Vec<f64> = simplex(&mut rng).into_iter().map(|x| x * s.edge_capacity).collect();
        let local: Vec<f64> = s.local_caps.iter().map(|&q| q * rng.random_range(0.2..1.0)).collect();
        let a = ResourceAllocation {
            shares: TimeShares { alpha, beta },
            edge,
            local,
        };
        (s.mean_latency(d, &a).ok()? <= s.latency_budget).then_some(a)
    }

    #[test]
    fn resources_beats_random_feasible_allocations() {
        let s = scenario(&[0.4, 2.1, 1.0], &[1.7, 0.3, 0.9]);
        let d = [3.3e6, 4.4e6, 2.9e6];
        let best = solve_resources(&d, &s).unwrap().mean_energy;
        let mut found = 0;
        for seed in 0..2000 {
            if let Some(a) = random_feasible(&s, &d, seed) {
                assert!(best <= s.mean_energy(&d, &a).unwrap());
                found += 1;
                if found == 20 {
                    break;
                }
            }
        }
        assert_eq!(found, 20);
    }

    #[test]
    fn inversion_rule_equalizes_throughput() {
        let s = reference_draw();
        let d = [3e6; 5];
        let a = edge_side_allocation(&d, &s, RadioRule::ChannelInversion).unwrap();
        let t: Vec<f64> = (0..5).map(|m| a.shares.alpha[m] * s.links[m].uplink_rate).collect();
        assert!(t.iter().all(|x| ((x - t[0]) / t[0]).abs() < 1e-12));
    }

    #[test]
    fn inversion_matches_optimum_only_for_equal_rates() {
        let s = scenario(&[1.5; 3], &[0.7; 3]);
        let d = [3e6; 3];
        let a = edge_side_allocation(&d, &s, RadioRule::ChannelInversion).unwrap();
        let b = closed_form_shares(&d, &s).unwrap();
        for m in 0..3 {
            assert!((a.shares.alpha[m] - b.shares.alpha[m]).abs() < 1e-15);
            assert!((a.shares.beta[m] - b.shares.beta[m]).abs() < 1e-15);
        }
        let s = scenario(&[0.5, 3.0, 1.0], &[0.7; 3]);
        let a = edge_side_allocation(&d, &s, RadioRule::ChannelInversion).unwrap();
        let b = closed_form_shares(&d, &s).unwrap();
        assert!((a.shares.alpha[0] - b.shares.alpha[0]).abs() > 1e-3);
    }

    #[test]
    fn mobile_link_rates_feed_shares() {
        let radio = crate::link::RadioParams::reference();
        let l = MobileLink::new(1.0, 1.0, &radio).unwrap();
        assert!(l.uplink_rate > 0.0 && l.downlink_rate > l.uplink_rate);
    }

    proptest! {
        #[test]
        fn shares_normalize(gu in proptest::collection::vec(0.01f64..10.0, 1..8), seed in 0u64..1000) {
            let m = gu.len();
            let gd: Vec<f64> = gu.iter().map(|g| 1.0 / g).collect();
            let s = scenario(&gu, &gd);
            let d: Vec<f64> = (0..m).map(|i| 2.8e6 + ((seed as f64 + i as f64 * 7.3) % 3.2) * 1e6).collect();
            let a = closed_form_shares(&d, &s).unwrap();
            prop_assert!((a.shares.alpha.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!((a.shares.beta.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!((a.edge.iter().sum::<f64>() / s.edge_capacity - 1.0).abs() < 1e-12);
        }

        #[test]
        fn beta_scale_invariant(d in proptest::collection::vec(2.8e6f64..6e6, 2..6), c in 0.1f64..10.0) {
            let m = d.len();
            let s = scenario(&vec![1.0; m], &(0..m).map(|i| 0.3 + i as f64).collect::<Vec<_>>());
            let a = closed_form_shares(&d, &s).unwrap();
            let scaled: Vec<f64> = d.iter().map(|x| x * c).collect();
            let b = closed_form_shares(&scaled, &s).unwrap();
            for i in 0..m {
                prop_assert!((a.shares.beta[i] - b.shares.beta[i]).abs() < 1e-12);
            }
            prop_assert_eq!(a.shares.alpha, b.shares.alpha);
        }
    }
}
