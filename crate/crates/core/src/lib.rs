//! Joint radio, compute and feature-size allocation for feature-hierarchical
//! edge inference.
//!
//! An edge server runs the feature network of a feature-hierarchy DNN for
//! every mobile and returns `d_m` bytes of multi-scale features; each mobile
//! runs a small inference network on them. Larger `d_m` means better quality
//! but more downlink, edge and local work. This crate picks `d`, the TDMA
//! time shares and the edge/local compute speeds to maximize total quality
//! under mean latency and mean energy budgets.
//!
//! * [`profile`]: per-layer FLOPs, class loads and the fitted linear model.
//! * [`link`]: Shannon rates and TDMA sharing.
//! * [`cost`]: scenarios and latency/energy/quality evaluation.
//! * [`solver`]: the closed-form resource step, the greedy quality step and
//!   the alternating loop.
//! * [`baselines`]: constant-quality and channel-inversion benchmarks and a
//!   brute-force grid oracle.
//! * [`sim`]: configuration, channel sampling, experiments and CSV output.
//!
//! ```
//! use fhei::cost::ScenarioParams;
//! use fhei::solver::alternate;
//!
//! let scenario = ScenarioParams::default()
//!     .build(&[0.05, 1.32, 1.95, 4.63, 3.43], &[5.17, 1.66, 1.51, 0.62, 1.14], None)
//!     .unwrap();
//! let solution = alternate(&scenario).unwrap();
//! assert!(solution.mean_energy() <= scenario.energy_budget * (1.0 + 1e-6));
//! ```

pub mod baselines;
pub mod cost;
pub mod error;
pub mod link;
pub mod profile;
pub mod sim;
pub mod solver;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/profiling.md")]
    mod profiling {}
    #[doc = include_str!("../../../book/src/system-model.md")]
    mod system_model {}
    #[doc = include_str!("../../../book/src/resource-step.md")]
    mod resource_step {}
    #[doc = include_str!("../../../book/src/quality-step.md")]
    mod quality_step {}
    #[doc = include_str!("../../../book/src/alternating.md")]
    mod alternating {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
}
