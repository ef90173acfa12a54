//! Exact Bayesian inference for the size of a population whose members
//! carry serial numbers `1..=n`, from a sample of serials captured uniformly
//! without replacement (the German tank problem).
//!
//! ```
//! use tankpost::{compute_posterior, high_mass_subset, posterior_median, validate_sample, PriorSpec};
//!
//! let sample = validate_sample(&[15, 14, 3]).unwrap();
//! let prior = PriorSpec::truncated_uniform(35).unwrap();
//! let post = compute_posterior(&sample, &prior).unwrap();
//! assert_eq!(posterior_median(&post), 19);
//! let h = high_mass_subset(&post, 0.2).unwrap();
//! assert_eq!((h.min(), h.max()), (Some(15), Some(25)));
//! ```

pub mod error;
pub mod estimators;
pub mod likelihood;
pub mod model;
pub mod posterior;
pub mod simulation;

pub use error::{Error, Result};
pub use estimators::{mle, mvue, mvue_ratio};
pub use likelihood::{
    likelihood_full, likelihood_full_ln, likelihood_max, likelihood_max_ln,
    likelihood_sequential, likelihood_sequential_ln, max_statistic_count,
};
pub use model::{
    falling_factorial_exact, falling_factorial_log, falling_factorial_vanishes, log_sum_exp,
    validate_sample, MassFunction, PriorEntry, PriorKind, PriorSpec, SerialSample,
};
pub use posterior::{
    compute_posterior, high_mass_subset, high_mass_subset_with_horizon, improper_posterior_mean,
    median_interval, posterior_from_statistics, posterior_mean, posterior_median,
    posterior_predictive_capture, posterior_predictive_curve, tail_probability, CredibleSubset,
    DEFAULT_HORIZON,
};
pub use simulation::{
    capture_sample, enumerate_sample_space, enumerate_sample_space_with_cap, for_each_sample,
    run_calibration, trial_rng, CalibrationConfig, CalibrationReport, FeasiblePrior, SampleSpace,
    DEFAULT_ENUMERATION_CAP,
};
