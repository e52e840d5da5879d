//! Shannon rates and TDMA time sharing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Converts a noise density in dBm/Hz to W/Hz.
pub fn dbm_per_hz_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Band and power parameters shared by every mobile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioParams {
    /// Uplink bandwidth `W_U` (Hz).
    pub uplink_bandwidth: f64,
    /// Downlink bandwidth `W_D` (Hz).
    pub downlink_bandwidth: f64,
    /// Mobile transmit power `P_U` (W).
    pub uplink_power: f64,
    /// Access-point transmit power `P_D` (W).
    pub downlink_power: f64,
    /// Noise spectral density `N0` (W/Hz).
    pub noise_density: f64,
}

impl RadioParams {
    /// 20 MHz / 160 MHz bands, 0.1 W uplink, 1 W downlink, -174 dBm/Hz noise.
    pub fn reference() -> Self {
        RadioParams {
            uplink_bandwidth: 20e6,
            downlink_bandwidth: 160e6,
            uplink_power: 0.1,
            downlink_power: 1.0,
            noise_density: dbm_per_hz_to_watts(-174.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("uplink_bandwidth", self.uplink_bandwidth),
            ("downlink_bandwidth", self.downlink_bandwidth),
            ("uplink_power", self.uplink_power),
            ("downlink_power", self.downlink_power),
            ("noise_density", self.noise_density),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(format!("{name} must be finite and positive")));
            }
        }
        Ok(())
    }
}

/// `W · log2(1 + g·P / (N0·W))` in bits/s.
pub fn shannon_rate(bandwidth: f64, gain: f64, power: f64, noise_density: f64) -> f64 {
    bandwidth * (gain * power / (noise_density * bandwidth)).ln_1p() / std::f64::consts::LN_2
}

/// One mobile's channel gains and the full-band rates they yield.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobileLink {
    pub gain_up: f64,
    pub gain_down: f64,
    /// Full-band uplink rate `U_m` (bits/s).
    pub uplink_rate: f64,
    /// Full-band downlink rate `D_m` (bits/s).
    pub downlink_rate: f64,
}

impl MobileLink {
    pub fn new(gain_up: f64, gain_down: f64, radio: &RadioParams) -> Result<Self> {
        if !(gain_up.is_finite() && gain_up >= 0.0 && gain_down.is_finite() && gain_down >= 0.0) {
            return Err(Error::validation("channel gains must be finite and non-negative"));
        }
        Ok(MobileLink {
            gain_up,
            gain_down,
            uplink_rate: shannon_rate(
                radio.uplink_bandwidth,
                gain_up,
                radio.uplink_power,
                radio.noise_density,
            ),
            downlink_rate: shannon_rate(
                radio.downlink_bandwidth,
                gain_down,
                radio.downlink_power,
                radio.noise_density,
            ),
        })
    }
}

/// Per-mobile uplink (`alpha`) and downlink (`beta`) time fractions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeShares {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl TimeShares {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Checks non-negativity and that each direction sums to at most one
    /// (with `slack` relative tolerance for normalized floating-point sums).
    pub fn validate(&self, slack: f64) -> Result<()> {
        if self.alpha.len() != self.beta.len() {
            return Err(Error::LengthMismatch {
                expected: self.alpha.len(),
                got: self.beta.len(),
            });
        }
        for (name, v) in [("alpha", &self.alpha), ("beta", &self.beta)] {
            if v.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
                return Err(Error::validation(format!("{name} entries must be non-negative")));
            }
            if v.iter().sum::<f64>() > 1.0 + slack {
                return Err(Error::validation(format!("{name} sums above one")));
            }
        }
        Ok(())
    }
}

/// Uplink and downlink achievable rates `(Λ, Γ)` under TDMA sharing.
pub fn achievable_rates(shares: &TimeShares, links: &[MobileLink]) -> Result<(Vec<f64>, Vec<f64>)> {
    for got in [shares.alpha.len(), shares.beta.len()] {
        if got != links.len() {
            return Err(Error::LengthMismatch {
                expected: links.len(),
                got,
            });
        }
    }
    let up = shares
        .alpha
        .iter()
        .zip(links)
        .map(|(a, l)| a * l.uplink_rate)
        .collect();
    let down = shares
        .beta
        .iter()
        .zip(links)
        .map(|(b, l)| b * l.downlink_rate)
        .collect();
    Ok((up, down))
}

/// Equal-throughput shares: each direction's time is split in proportion to
/// the inverse full-band rate, so every mobile gets the same achievable rate.
pub fn inversion_shares(links: &[MobileLink]) -> Result<TimeShares> {
    if let Some(m) = links
        .iter()
        .position(|l| l.uplink_rate <= 0.0 || l.downlink_rate <= 0.0)
    {
        return Err(Error::ZeroRate(m));
    }
    let normalize = |v: Vec<f64>| {
        let total: f64 = v.iter().sum();
        v.into_iter().map(|x| x / total).collect::<Vec<_>>()
    };
    Ok(TimeShares {
        alpha: normalize(links.iter().map(|l| 1.0 / l.uplink_rate).collect()),
        beta: normalize(links.iter().map(|l| 1.0 / l.downlink_rate).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_gain_zero_rate() {
        assert_eq!(shannon_rate(20e6, 0.0, 0.1, 1e-20), 0.0);
        let link = MobileLink::new(0.0, 1.0, &RadioParams::reference()).unwrap();
        assert_eq!(link.uplink_rate, 0.0);
        assert!(link.downlink_rate > 0.0);
    }

    #[test]
    fn unit_snr_gives_bandwidth() {
        // g·P/(N0·W) = 1.
        let w = 10e6;
        let n0 = 1e-18;
        let r = shannon_rate(w, n0 * w / 0.5, 0.5, n0);
        assert!((r - w).abs() <= 1e-9 * w);
    }

    #[test]
    fn reference_uplink_rate_matches_high_precision() {
        // Evaluated with 50-digit arithmetic.
        let expected = 803_838_167.532_088_8;
        let r = shannon_rate(20e6, 1.0, 0.1, dbm_per_hz_to_watts(-174.0));
        assert!(((r - expected) / expected).abs() < 1e-13, "{r}");
    }

    #[test]
    fn rates_examples() {
        let links: Vec<_> = [8.0, 4.0]
            .iter()
            .map(|&u| MobileLink {
                gain_up: 1.0,
                gain_down: 1.0,
                uplink_rate: u,
                downlink_rate: 1.0,
            })
            .collect();
        let shares = TimeShares {
            alpha: vec![0.25, 0.75],
            beta: vec![0.0, 1.0],
        };
        let (up, down) = achievable_rates(&shares, &links).unwrap();
        assert_eq!(up, vec![2.0, 3.0]);
        assert_eq!(down, vec![0.0, 1.0]);

        let full = TimeShares {
            alpha: vec![1.0],
            beta: vec![1.0],
        };
        let (up, down) = achievable_rates(&full, &links[..1]).unwrap();
        assert_eq!((up[0], down[0]), (8.0, 1.0));

        assert!(matches!(
            achievable_rates(&full, &links),
            Err(Error::LengthMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn share_validation() {
        let bad = TimeShares {
            alpha: vec![0.6, 0.6],
            beta: vec![0.5, 0.5],
        };
        assert!(bad.validate(1e-12).is_err());
    }

    #[test]
    fn inversion_equalizes_throughput() {
        let radio = RadioParams::reference();
        let links = [
            MobileLink::new(0.3, 2.0, &radio).unwrap(),
            MobileLink::new(1.7, 0.4, &radio).unwrap(),
        ];
        let s = inversion_shares(&links).unwrap();
        let (up, down) = achievable_rates(&s, &links).unwrap();
        assert!(((up[0] - up[1]) / up[0]).abs() < 1e-12);
        assert!(((down[0] - down[1]) / down[0]).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn rate_increasing_in_gain_and_power(g in 1e-3f64..10.0, p in 1e-3f64..10.0, bump in 1.01f64..4.0) {
            let n0 = dbm_per_hz_to_watts(-174.0);
            let r = shannon_rate(20e6, g, p, n0);
            prop_assert!(shannon_rate(20e6, g * bump, p, n0) > r);
            prop_assert!(shannon_rate(20e6, g, p * bump, n0) > r);
        }

        #[test]
        fn rate_invariant_to_gain_power_tradeoff(g in 1e-3f64..10.0, p in 1e-3f64..10.0, c in 1e-3f64..1e3) {
            let n0 = dbm_per_hz_to_watts(-174.0);
            let a = shannon_rate(160e6, g, p, n0);
            let b = shannon_rate(160e6, c * g, p / c, n0);
            prop_assert!(((a - b) / a).abs() < 1e-12);
        }

        #[test]
        fn rates_linear_in_shares(a in 0.0f64..0.5, b in 0.0f64..0.5, k in 0.0f64..2.0) {
            let links = [MobileLink { gain_up: 1.0, gain_down: 1.0, uplink_rate: 3e8, downlink_rate: 7e8 }];
            let s1 = TimeShares { alpha: vec![a], beta: vec![b] };
            let s2 = TimeShares { alpha: vec![k * a], beta: vec![k * b] };
            let (u1, d1) = achievable_rates(&s1, &links).unwrap();
            let (u2, d2) = achievable_rates(&s2, &links).unwrap();
            prop_assert!((u2[0] - k * u1[0]).abs() <= 1e-6 * u1[0].max(1.0));
            prop_assert!((d2[0] - k * d1[0]).abs() <= 1e-6 * d1[0].max(1.0));
        }
    }
}
