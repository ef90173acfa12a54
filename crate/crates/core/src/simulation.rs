//! The capture process, exhaustive enumeration of its sample space, and
//! Monte Carlo calibration of credible subsets.

use std::collections::{BTreeMap, HashMap};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{mle, mvue};
use crate::model::{falling_factorial_exact, PriorKind, PriorSpec, SerialSample};
use crate::posterior::{compute_posterior, high_mass_subset};

/// Default limit on the number of ordered tuples an enumeration may yield.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Captures `k` tanks from `{1..n}` one at a time, each uniformly from
/// those not yet taken.
pub fn capture_sample<R: Rng + ?Sized>(n: u64, k: u64, rng: &mut R) -> Result<SerialSample> {
    if k > n {
        return Err(Error::SampleExceedsPopulation { n, k });
    }
    if k == 0 {
        return Err(Error::EmptySample);
    }
    // Partial Fisher-Yates over the virtual array [1, 2, ..., n]; only
    // displaced slots are stored.
    let mut displaced: HashMap<u64, u64> = HashMap::with_capacity(2 * k as usize);
    let mut serials = Vec::with_capacity(k as usize);
    for i in 0..k {
        let j = rng.random_range(i..n);
        let at_j = displaced.get(&j).copied().unwrap_or(j + 1);
        let at_i = displaced.get(&i).copied().unwrap_or(i + 1);
        displaced.insert(j, at_i);
        serials.push(at_j);
    }
    SerialSample::from_serials(serials)
}

/// Independent generator for one trial, derived from the run seed and the
/// trial index so results do not depend on execution order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Every ordered `k`-tuple of distinct values from `{1..n}`, in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct SampleSpace {
    n: u64,
    current: Vec<u64>,
    used: Vec<bool>,
    started: bool,
    done: bool,
}

/// Sample space iterator with the default cap.
pub fn enumerate_sample_space(n: u64, k: u64) -> Result<SampleSpace> {
    enumerate_sample_space_with_cap(n, k, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_sample_space_with_cap(n: u64, k: u64, cap: u128) -> Result<SampleSpace> {
    if k > n {
        return Err(Error::SampleExceedsPopulation { n, k });
    }
    match falling_factorial_exact(n, k) {
        Some(size) if size <= cap => {}
        Some(size) => return Err(Error::EnumerationTooLarge { size, cap }),
        None => return Err(Error::EnumerationTooLarge { size: u128::MAX, cap }),
    }
    Ok(SampleSpace {
        n,
        current: (1..=k).collect(),
        used: vec![false; n as usize + 1],
        started: false,
        done: false,
    })
}

/// Calls `visit` on every ordered tuple without allocating per tuple.
pub fn for_each_sample(n: u64, k: u64, mut visit: impl FnMut(&[u64])) -> Result<()> {
    let mut space = enumerate_sample_space(n, k)?;
    while let Some(t) = space.advance() {
        visit(t);
    }
    Ok(())
}

impl SampleSpace {
    /// Moves to the next tuple and borrows it.
    pub fn advance(&mut self) -> Option<&[u64]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            for &v in &self.current {
                self.used[v as usize] = true;
            }
            return Some(&self.current);
        }
        if self.step() {
            Some(&self.current)
        } else {
            self.done = true;
            None
        }
    }

    fn step(&mut self) -> bool {
        let n = self.n as usize;
        let k = self.current.len();
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            let old = self.current[pos] as usize;
            self.used[old] = false;
            let mut v = old + 1;
            while v <= n && self.used[v] {
                v += 1;
            }
            if v <= n {
                self.current[pos] = v as u64;
                self.used[v] = true;
                let mut u = 1;
                for p in pos + 1..k {
                    while self.used[u] {
                        u += 1;
                    }
                    self.current[p] = u as u64;
                    self.used[u] = true;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for SampleSpace {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        self.advance().map(<[u64]>::to_vec)
    }
}

/// A finite prior restricted to sizes that can produce a size-`k` sample,
/// renormalized, ready to draw from.
#[derive(Debug, Clone)]
pub enum FeasiblePrior {
    Uniform { lo: u64, hi: u64 },
    Table { sizes: Vec<u64>, index: WeightedIndex<f64> },
}

impl FeasiblePrior {
    pub fn new(prior: &PriorSpec, k: u64) -> Result<Self> {
        match prior.kind() {
            PriorKind::TruncatedUniform { n_max } => {
                if *n_max < k {
                    return Err(Error::SampleExceedsPopulation { n: *n_max, k });
                }
                Ok(FeasiblePrior::Uniform { lo: k, hi: *n_max })
            }
            PriorKind::CustomTable(entries) => {
                let (sizes, weights): (Vec<u64>, Vec<f64>) = entries
                    .iter()
                    .filter(|e| e.n >= k && e.weight > 0.0)
                    .map(|e| (e.n, e.weight))
                    .unzip();
                if sizes.is_empty() {
                    let n = prior.upper_bound().unwrap_or(0);
                    return Err(Error::SampleExceedsPopulation { n, k });
                }
                let index = WeightedIndex::new(&weights)
                    .map_err(|e| Error::InvalidPrior(e.to_string()))?;
                Ok(FeasiblePrior::Table { sizes, index })
            }
            PriorKind::ImproperUniform => Err(Error::InvalidPrior(
                "calibration needs a finite prior to draw population sizes from".into(),
            )),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            FeasiblePrior::Uniform { lo, hi } => rng.random_range(*lo..=*hi),
            FeasiblePrior::Table { sizes, index } => sizes[index.sample(rng)],
        }
    }
}

/// Settings for [`run_calibration`].
#[derive(Debug, Clone)]
pub struct CalibrationConfig {
    pub prior: PriorSpec,
    pub k: u64,
    pub alpha: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Aggregate results of repeated simulated captures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationReport {
    pub trials: u64,
    pub k: u64,
    pub alpha: f64,
    /// Fraction of trials whose true size fell inside the high-mass subset.
    pub coverage: f64,
    /// Binomial standard error of `coverage` at the nominal level `1 - alpha`.
    pub coverage_std_error: f64,
    pub mean_subset_size: f64,
    /// Mean of `estimate - true n`, keyed by estimator name.
    pub estimator_bias: BTreeMap<String, f64>,
    /// Standard error of each bias; present when `trials >= 2`.
    pub estimator_bias_std_error: BTreeMap<String, f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
struct TrialOutcome {
    covered: bool,
    subset_size: usize,
    mle_error: f64,
    mvue_error: f64,
}

/// Running mean and variance (Welford).
#[derive(Debug, Default, Clone, Copy)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn std_error(&self) -> Option<f64> {
        (self.count >= 2).then(|| (self.m2 / (self.count - 1) as f64 / self.count as f64).sqrt())
    }
}

const TRIAL_CHUNK: u64 = 1 << 16;

fn run_trial(config: &CalibrationConfig, prior: &FeasiblePrior, trial: u64) -> Result<TrialOutcome> {
    let mut rng = trial_rng(config.seed, trial);
    let n = prior.sample(&mut rng);
    let sample = capture_sample(n, config.k, &mut rng)?;
    let post = compute_posterior(&sample, &config.prior)?;
    let subset = high_mass_subset(&post, config.alpha)?;
    Ok(TrialOutcome {
        covered: subset.contains(n),
        subset_size: subset.len(),
        mle_error: mle(&sample) as f64 - n as f64,
        mvue_error: mvue(&sample) - n as f64,
    })
}

/// Draws a true size from the prior (restricted to sizes `>= k`), captures
/// `k` tanks, and checks whether the posterior's high-mass subset covers the
/// truth, once per trial. Trials run in parallel; aggregation follows trial
/// order, so a given config and seed always give the same report.
pub fn run_calibration(config: &CalibrationConfig) -> Result<CalibrationReport> {
    if config.trials == 0 {
        return Err(Error::NoTrials);
    }
    if config.k == 0 {
        return Err(Error::EmptySample);
    }
    if !(0.0..1.0).contains(&config.alpha) {
        return Err(Error::InvalidAlpha(config.alpha));
    }
    let prior = FeasiblePrior::new(&config.prior, config.k)?;

    let mut covered = 0u64;
    let mut subset_total = 0u64;
    let mut mle_moments = Moments::default();
    let mut mvue_moments = Moments::default();

    let mut start = 0;
    while start < config.trials {
        let end = (start + TRIAL_CHUNK).min(config.trials);
        let outcomes: Vec<TrialOutcome> = (start..end)
            .into_par_iter()
            .map(|t| run_trial(config, &prior, t))
            .collect::<Result<_>>()?;
        for o in outcomes {
            covered += o.covered as u64;
            subset_total += o.subset_size as u64;
            mle_moments.push(o.mle_error);
            mvue_moments.push(o.mvue_error);
        }
        start = end;
    }

    let trials = config.trials as f64;
    let nominal = 1.0 - config.alpha;
    let mut estimator_bias = BTreeMap::new();
    estimator_bias.insert("mle".to_string(), mle_moments.mean);
    estimator_bias.insert("mvue".to_string(), mvue_moments.mean);
    let mut estimator_bias_std_error = BTreeMap::new();
    for (name, m) in [("mle", mle_moments), ("mvue", mvue_moments)] {
        if let Some(se) = m.std_error() {
            estimator_bias_std_error.insert(name.to_string(), se);
        }
    }

    Ok(CalibrationReport {
        trials: config.trials,
        k: config.k,
        alpha: config.alpha,
        coverage: covered as f64 / trials,
        coverage_std_error: (nominal * config.alpha / trials).sqrt(),
        mean_subset_size: subset_total as f64 / trials,
        estimator_bias,
        estimator_bias_std_error,
        seed: config.seed,
    })
}
