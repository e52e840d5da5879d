//! Seeded gamma-fading channel draws.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Gamma;

use crate::error::{Error, Result};

/// `M` uplink gains followed by `M` downlink gains, all independent
/// `Gamma(shape, scale)` draws from a generator seeded by `seed`.
pub fn sample_channels(seed: u64, mobiles: usize, shape: f64, scale: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let gamma = Gamma::new(shape, scale)
        .map_err(|e| Error::validation(format!("gamma(shape = {shape}, scale = {scale}): {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let up = (&mut rng).sample_iter(gamma).take(mobiles).collect();
    let down = (&mut rng).sample_iter(gamma).take(mobiles).collect();
    Ok((up, down))
}

/// Seed of one Monte-Carlo draw, independent across `(mobiles, trial)`.
pub fn trial_seed(seed: u64, mobiles: usize, trial: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((mobiles as u64) << 32) | trial as u64);
    rng.next_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn deterministic() {
        assert_eq!(
            sample_channels(42, 6, 3.0, 1.0 / 3.0).unwrap(),
            sample_channels(42, 6, 3.0, 1.0 / 3.0).unwrap()
        );
        assert_ne!(
            sample_channels(42, 6, 3.0, 1.0 / 3.0).unwrap(),
            sample_channels(43, 6, 3.0, 1.0 / 3.0).unwrap()
        );
    }

    #[test]
    fn unit_mean_moments() {
        let (up, down) = sample_channels(2024, 50_000, 3.0, 1.0 / 3.0).unwrap();
        let all: Vec<f64> = up.into_iter().chain(down).collect();
        let n = all.len() as f64;
        let mean = all.iter().sum::<f64>() / n;
        let var = all.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
        assert!((var - 1.0 / 3.0).abs() < 0.01, "variance {var}");
    }

    #[test]
    fn bad_parameters_rejected() {
        assert!(sample_channels(1, 2, 0.0, 1.0).is_err());
        assert!(sample_channels(1, 2, 1.0, -1.0).is_err());
    }

    #[test]
    fn trial_seeds_differ() {
        let mut seen = std::collections::HashSet::new();
        for m in 2..=10 {
            for t in 0..50 {
                assert!(seen.insert(trial_seed(9, m, t)));
            }
        }
    }

    proptest! {
        #[test]
        fn draws_positive_and_sized(seed in any::<u64>(), m in 1usize..20, shape in 0.5f64..10.0, scale in 0.05f64..5.0) {
            let (up, down) = sample_channels(seed, m, shape, scale).unwrap();
            prop_assert_eq!(up.len(), m);
            prop_assert_eq!(down.len(), m);
            prop_assert!(up.iter().chain(&down).all(|&g| g > 0.0 && g.is_finite()));
        }
    }
}
