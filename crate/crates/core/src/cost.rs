//! Problem instances and the latency/energy/quality evaluation of any
//! candidate allocation.
//!
//! Payload sizes are bytes and rates are bits/s, so every payload-over-rate
//! term carries a factor of 8.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::link::{dbm_per_hz_to_watts, MobileLink, RadioParams, TimeShares};
use crate::profile::NetCostModel;

pub const BITS_PER_BYTE: f64 = 8.0;

/// Numerical knobs of the solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    /// Relative slack accepted on the mean latency/energy budgets.
    pub constraint_tol: f64,
    /// Latency-multiplier bisection stops once the residual is below this
    /// fraction of `M·T̄`.
    pub bisection_tol: f64,
    pub bisection_max_iter: usize,
    /// Bracket doublings allowed before giving up on the latency multiplier.
    pub max_doublings: usize,
    /// Hard cap on alternating rounds.
    pub max_rounds: usize,
    /// The loop has converged when `Σd` moves by less than this fraction of
    /// `M·d_min` between rounds.
    pub stagnation_tol: f64,
    /// Bisection steps used to shorten the final, infeasible increment.
    pub final_step_iters: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            constraint_tol: 1e-6,
            bisection_tol: 1e-12,
            bisection_max_iter: 200,
            max_doublings: 1100,
            max_rounds: 10_000,
            stagnation_tol: 1e-6,
            final_step_iters: 60,
        }
    }
}

/// A full problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub links: Vec<MobileLink>,
    pub radio: RadioParams,
    pub net: NetCostModel,
    /// Raw input size `I` (bytes) every mobile uploads.
    pub raw_bytes: f64,
    /// Edge server capacity `F` (FLOPs/s).
    pub edge_capacity: f64,
    /// Per-mobile local compute caps `Q_m` (FLOPs/s).
    pub local_caps: Vec<f64>,
    pub d_min: f64,
    pub d_max: f64,
    /// Mean energy budget `Ē` (J).
    pub energy_budget: f64,
    /// Mean latency budget `T̄` (s).
    pub latency_budget: f64,
    /// Receive power `σ` (W).
    pub rx_power: f64,
    /// Computing-energy coefficient `ψ` (J·s²/FLOPs³).
    pub psi: f64,
    /// Per-round increment ratio `η` of the feature-size sum cap.
    pub eta: f64,
    pub settings: SolverSettings,
}

impl Scenario {
    pub fn mobiles(&self) -> usize {
        self.links.len()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.mobiles();
        if m == 0 {
            return Err(Error::validation("scenario needs at least one mobile"));
        }
        if self.local_caps.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                got: self.local_caps.len(),
            });
        }
        self.radio.validate()?;
        self.net.validate()?;
        let positive = [
            ("edge_capacity", self.edge_capacity),
            ("d_min", self.d_min),
            ("energy_budget", self.energy_budget),
            ("latency_budget", self.latency_budget),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(format!("{name} must be finite and positive")));
            }
        }
        for (name, v) in [
            ("raw_bytes", self.raw_bytes),
            ("rx_power", self.rx_power),
            ("psi", self.psi),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::validation(format!("{name} must be finite and non-negative")));
            }
        }
        if !(self.d_max.is_finite() && self.d_min <= self.d_max) {
            return Err(Error::validation(format!(
                "d_min ({}) must not exceed d_max ({})",
                self.d_min, self.d_max
            )));
        }
        if !(self.eta.is_finite() && self.eta > 1.0) {
            return Err(Error::validation("increment ratio eta must exceed 1"));
        }
        if self.local_caps.iter().any(|&q| !(q.is_finite() && q > 0.0)) {
            return Err(Error::validation("local compute caps must be finite and positive"));
        }
        Ok(())
    }

    /// Mean E2E latency over all mobiles.
    pub fn mean_latency(&self, d: &[f64], alloc: &ResourceAllocation) -> Result<f64> {
        self.check_len(d)?;
        let mut total = 0.0;
        for (m, &dm) in d.iter().enumerate() {
            total += e2e_latency(self, m, dm, alloc)?;
        }
        Ok(total / self.mobiles() as f64)
    }

    /// Mean mobile energy over all mobiles.
    pub fn mean_energy(&self, d: &[f64], alloc: &ResourceAllocation) -> Result<f64> {
        self.check_len(d)?;
        let mut total = 0.0;
        for (m, &dm) in d.iter().enumerate() {
            total += mobile_energy(self, m, dm, alloc)?;
        }
        Ok(total / self.mobiles() as f64)
    }

    pub(crate) fn check_len(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.mobiles() {
            return Err(Error::LengthMismatch {
                expected: self.mobiles(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// True when both means sit within the budgets up to `constraint_tol`.
    pub fn within_budgets(&self, mean_latency: f64, mean_energy: f64) -> bool {
        let tol = 1.0 + self.settings.constraint_tol;
        mean_latency <= self.latency_budget * tol && mean_energy <= self.energy_budget * tol
    }
}

/// Scenario template in configuration units, defaulting to the reference
/// detector settings. Gains and local caps are supplied per instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioParams {
    pub uplink_bandwidth_hz: f64,
    pub downlink_bandwidth_hz: f64,
    pub uplink_power_w: f64,
    pub downlink_power_w: f64,
    pub noise_density_dbm_hz: f64,
    pub receive_power_w: f64,
    pub raw_data_bytes: f64,
    pub edge_flops: f64,
    /// Local caps are spread evenly over `[local_flops_min, local_flops_max]`
    /// by mobile index unless a config lists them explicitly.
    pub local_flops_min: f64,
    pub local_flops_max: f64,
    pub feature_min_bytes: f64,
    pub feature_max_bytes: f64,
    pub energy_budget_j: f64,
    pub latency_budget_s: f64,
    pub energy_coefficient: f64,
    pub increment_ratio: f64,
    pub net: NetCostModel,
    pub settings: SolverSettings,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        ScenarioParams {
            uplink_bandwidth_hz: 20e6,
            downlink_bandwidth_hz: 160e6,
            uplink_power_w: 0.1,
            downlink_power_w: 1.0,
            noise_density_dbm_hz: -174.0,
            receive_power_w: 0.01,
            raw_data_bytes: 100e3,
            edge_flops: 20e12,
            local_flops_min: 1.5e9,
            local_flops_max: 4.5e9,
            feature_min_bytes: 2.8e6,
            feature_max_bytes: 6e6,
            energy_budget_j: 5.0,
            latency_budget_s: 15.0,
            energy_coefficient: 1e-28,
            increment_ratio: 1.01,
            net: NetCostModel::reference(),
            settings: SolverSettings::default(),
        }
    }
}

impl ScenarioParams {
    pub fn radio(&self) -> RadioParams {
        RadioParams {
            uplink_bandwidth: self.uplink_bandwidth_hz,
            downlink_bandwidth: self.downlink_bandwidth_hz,
            uplink_power: self.uplink_power_w,
            downlink_power: self.downlink_power_w,
            noise_density: dbm_per_hz_to_watts(self.noise_density_dbm_hz),
        }
    }

    /// Evenly spread caps over the configured range (midpoint for M = 1).
    pub fn spread_local_caps(&self, mobiles: usize) -> Vec<f64> {
        let (lo, hi) = (self.local_flops_min, self.local_flops_max);
        if mobiles == 1 {
            return vec![0.5 * (lo + hi)];
        }
        (0..mobiles)
            .map(|m| lo + (hi - lo) * m as f64 / (mobiles - 1) as f64)
            .collect()
    }

    /// Builds and validates a scenario. `local_caps = None` spreads them.
    pub fn build(&self, gains_up: &[f64], gains_down: &[f64], local_caps: Option<&[f64]>) -> Result<Scenario> {
        if gains_up.len() != gains_down.len() {
            return Err(Error::LengthMismatch {
                expected: gains_up.len(),
                got: gains_down.len(),
            });
        }
        if !(self.local_flops_min > 0.0 && self.local_flops_min <= self.local_flops_max) {
            return Err(Error::validation("local_flops_min must be positive and not exceed local_flops_max"));
        }
        let radio = self.radio();
        radio.validate()?;
        let links = gains_up
            .iter()
            .zip(gains_down)
            .map(|(&u, &d)| MobileLink::new(u, d, &radio))
            .collect::<Result<Vec<_>>>()?;
        let local_caps = match local_caps {
            Some(q) => q.to_vec(),
            None => self.spread_local_caps(links.len()),
        };
        let scenario = Scenario {
            links,
            radio,
            net: self.net.clone(),
            raw_bytes: self.raw_data_bytes,
            edge_capacity: self.edge_flops,
            local_caps,
            d_min: self.feature_min_bytes,
            d_max: self.feature_max_bytes,
            energy_budget: self.energy_budget_j,
            latency_budget: self.latency_budget_s,
            rx_power: self.receive_power_w,
            psi: self.energy_coefficient,
            eta: self.increment_ratio,
            settings: self.settings,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

/// Radio shares plus edge (`f`) and local (`q`) compute speeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceAllocation {
    pub shares: TimeShares,
    /// Edge compute granted to each mobile (FLOPs/s).
    pub edge: Vec<f64>,
    /// Each mobile's local compute speed (FLOPs/s).
    pub local: Vec<f64>,
}

impl ResourceAllocation {
    pub fn len(&self) -> usize {
        self.edge.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge.is_empty()
    }

    /// Checks the radio and compute constraints against `scenario`.
    pub fn validate(&self, scenario: &Scenario) -> Result<()> {
        let m = scenario.mobiles();
        for got in [self.shares.len(), self.shares.beta.len(), self.edge.len(), self.local.len()] {
            if got != m {
                return Err(Error::LengthMismatch { expected: m, got });
            }
        }
        let slack = 1e-12;
        self.shares.validate(slack)?;
        if self.edge.iter().any(|&f| !(f.is_finite() && f >= 0.0)) {
            return Err(Error::validation("edge compute must be non-negative"));
        }
        if self.edge.iter().sum::<f64>() > scenario.edge_capacity * (1.0 + slack) {
            return Err(Error::validation("edge compute exceeds capacity"));
        }
        for (q, cap) in self.local.iter().zip(&scenario.local_caps) {
            if !(*q > 0.0 && *q <= cap * (1.0 + slack)) {
                return Err(Error::validation("local compute must lie in (0, Q_m]"));
            }
        }
        Ok(())
    }
}

/// Feature-network load `L0 + c1·d` (FLOPs).
pub fn fn_load(net: &NetCostModel, d: f64) -> f64 {
    net.base_load + net.fn_slope * d
}

/// Inference-network load `c2·d` (FLOPs).
pub fn in_load(net: &NetCostModel, d: f64) -> f64 {
    net.in_slope * d
}

/// Quality `δs·d`.
pub fn quality(net: &NetCostModel, d: f64) -> f64 {
    net.quality_slope * d
}

struct MobileRates {
    up: f64,
    down: f64,
    edge: f64,
    local: f64,
}

fn mobile_rates(scenario: &Scenario, m: usize, alloc: &ResourceAllocation) -> Result<MobileRates> {
    let link = scenario
        .links
        .get(m)
        .ok_or(Error::LengthMismatch {
            expected: m + 1,
            got: scenario.mobiles(),
        })?;
    let get = |v: &[f64]| {
        v.get(m).copied().ok_or(Error::LengthMismatch {
            expected: scenario.mobiles(),
            got: v.len(),
        })
    };
    Ok(MobileRates {
        up: get(&alloc.shares.alpha)? * link.uplink_rate,
        down: get(&alloc.shares.beta)? * link.downlink_rate,
        edge: get(&alloc.edge)?,
        local: get(&alloc.local)?,
    })
}

fn nonzero(value: f64, mobile: usize, resource: &'static str) -> Result<f64> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::ZeroResource { mobile, resource })
    }
}

/// E2E latency of mobile `m`: uplink, downlink, edge feature extraction and
/// local inference.
pub fn e2e_latency(scenario: &Scenario, m: usize, d_m: f64, alloc: &ResourceAllocation) -> Result<f64> {
    let r = mobile_rates(scenario, m, alloc)?;
    let up = nonzero(r.up, m, "uplink rate")?;
    let down = nonzero(r.down, m, "downlink rate")?;
    let edge = nonzero(r.edge, m, "edge compute")?;
    let local = nonzero(r.local, m, "local compute")?;
    Ok(BITS_PER_BYTE * scenario.raw_bytes / up
        + BITS_PER_BYTE * d_m / down
        + fn_load(&scenario.net, d_m) / edge
        + in_load(&scenario.net, d_m) / local)
}

/// Energy of mobile `m`: uplink transmission, downlink reception and local
/// inference (`ψ·q²·L_IN`).
pub fn mobile_energy(scenario: &Scenario, m: usize, d_m: f64, alloc: &ResourceAllocation) -> Result<f64> {
    let r = mobile_rates(scenario, m, alloc)?;
    let up = nonzero(r.up, m, "uplink rate")?;
    let down = nonzero(r.down, m, "downlink rate")?;
    Ok(scenario.radio.uplink_power * BITS_PER_BYTE * scenario.raw_bytes / up
        + scenario.rx_power * BITS_PER_BYTE * d_m / down
        + scenario.psi * r.local * r.local * in_load(&scenario.net, d_m))
}

/// One round of the alternating loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub d: Vec<f64>,
    pub sum_quality: f64,
    /// The resource step succeeded and the point meets both budgets.
    pub feasible: bool,
    pub mean_energy: f64,
    pub mean_latency: f64,
    /// The point was found by shortening the last increment rather than by
    /// a full round.
    pub shortened: bool,
}

/// Feature sizes, allocation and the resulting per-mobile KPIs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub d: Vec<f64>,
    pub alloc: ResourceAllocation,
    pub latency: Vec<f64>,
    pub energy: Vec<f64>,
    pub quality: Vec<f64>,
    pub sum_quality: f64,
    pub rounds: Vec<RoundRecord>,
}

impl Solution {
    pub fn evaluate(scenario: &Scenario, d: Vec<f64>, alloc: ResourceAllocation, rounds: Vec<RoundRecord>) -> Result<Self> {
        scenario.check_len(&d)?;
        let latency = (0..d.len())
            .map(|m| e2e_latency(scenario, m, d[m], &alloc))
            .collect::<Result<Vec<_>>>()?;
        let energy = (0..d.len())
            .map(|m| mobile_energy(scenario, m, d[m], &alloc))
            .collect::<Result<Vec<_>>>()?;
        let quality: Vec<f64> = d.iter().map(|&x| quality(&scenario.net, x)).collect();
        let sum_quality = scenario.net.quality_slope * d.iter().sum::<f64>();
        Ok(Solution {
            d,
            alloc,
            latency,
            energy,
            quality,
            sum_quality,
            rounds,
        })
    }

    pub fn mean_latency(&self) -> f64 {
        self.latency.iter().sum::<f64>() / self.latency.len() as f64
    }

    pub fn mean_energy(&self) -> f64 {
        self.energy.iter().sum::<f64>() / self.energy.len() as f64
    }

    pub fn total_bytes(&self) -> f64 {
        self.d.iter().sum()
    }
}
