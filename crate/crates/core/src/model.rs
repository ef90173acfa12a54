//! Domain types shared by every inference routine: the validated sample of
//! serial numbers, prior descriptions, and discrete mass functions over
//! population sizes.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated sample of captured serial numbers.
///
/// Serials are distinct positive integers kept in capture order. `k` and the
/// maximum serial are cached because they are the sufficient statistics for
/// every posterior computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SerialSample {
    serials: Vec<u64>,
    k: u64,
    #[serde(rename = "max")]
    max_serial: u64,
}

impl SerialSample {
    /// Validates raw integers, rejecting empty input, non-positive entries
    /// and repeated serials.
    pub fn new(raw: &[i64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut serials = Vec::with_capacity(raw.len());
        for &s in raw {
            if s < 1 {
                return Err(Error::NonPositiveSerial(s));
            }
            serials.push(s as u64);
        }
        Self::from_serials(serials)
    }

    /// Same as [`SerialSample::new`] for input that is already unsigned.
    pub fn from_serials(serials: Vec<u64>) -> Result<Self> {
        if serials.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut seen = HashSet::with_capacity(serials.len());
        for &s in &serials {
            if s == 0 {
                return Err(Error::NonPositiveSerial(0));
            }
            if !seen.insert(s) {
                return Err(Error::DuplicateSerial(s));
            }
        }
        let max_serial = *serials.iter().max().expect("nonempty");
        let k = serials.len() as u64;
        debug_assert!(max_serial >= k);
        Ok(Self {
            serials,
            k,
            max_serial,
        })
    }

    pub fn serials(&self) -> &[u64] {
        &self.serials
    }

    /// Number of captured tanks.
    pub fn k(&self) -> u64 {
        self.k
    }

    /// Largest observed serial number.
    pub fn max_serial(&self) -> u64 {
        self.max_serial
    }
}

/// Free-function form of [`SerialSample::new`].
pub fn validate_sample(raw: &[i64]) -> Result<SerialSample> {
    SerialSample::new(raw)
}

/// Natural log of the falling factorial `(n)_k = n (n-1) ... (n-k+1)`.
///
/// Returns 0 for `k = 0`. `k > n` makes the product zero, which has no
/// finite logarithm, so it is reported as [`Error::DomainError`]; use
/// [`falling_factorial_vanishes`] to test for that case up front.
pub fn falling_factorial_log(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::DomainError { n, k });
    }
    Ok((0..k).map(|i| ((n - i) as f64).ln()).sum())
}

/// True when `(n)_k = 0`, i.e. `k > n`.
pub fn falling_factorial_vanishes(n: u64, k: u64) -> bool {
    k > n
}

/// Exact `(n)_k` as an integer, or `None` if it overflows `u128`.
pub fn falling_factorial_exact(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    (0..k).try_fold(1u128, |acc, i| acc.checked_mul((n - i) as u128))
}

/// `ln(sum(exp(x)))` without overflow. Empty or all `-inf` input gives `-inf`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    if max == f64::INFINITY {
        return max;
    }
    let sum: f64 = values.iter().map(|&v| (v - max).exp()).sum();
    max + sum.ln()
}

/// One row of a tabulated prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorEntry {
    pub n: u64,
    pub weight: f64,
}

/// The shape of a prior over population sizes.
#[derive(Debug, Clone, PartialEq)]
pub enum PriorKind {
    /// Equal mass on every size in `{0, ..., n_max}`.
    TruncatedUniform { n_max: u64 },
    /// Arbitrary nonnegative weights, sorted by `n`; normalized on use.
    CustomTable(Vec<PriorEntry>),
    /// Flat, non-normalizable mass over all naturals.
    ImproperUniform,
}

/// A validated prior. Construct through the named
/// constructors, which enforce the invariants of each kind.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorSpec {
    kind: PriorKind,
}

impl PriorSpec {
    pub fn truncated_uniform(n_max: u64) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidPrior("n_max must be at least 1".into()));
        }
        Ok(Self {
            kind: PriorKind::TruncatedUniform { n_max },
        })
    }

    pub fn table(mut entries: Vec<PriorEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidPrior("prior table is empty".into()));
        }
        for e in &entries {
            if !e.weight.is_finite() || e.weight < 0.0 {
                return Err(Error::InvalidPrior(format!(
                    "weight for n = {} must be finite and nonnegative, got {}",
                    e.n, e.weight
                )));
            }
        }
        entries.sort_by_key(|e| e.n);
        if let Some(w) = entries.windows(2).find(|w| w[0].n == w[1].n) {
            return Err(Error::InvalidPrior(format!(
                "population size {} listed more than once",
                w[0].n
            )));
        }
        if entries.iter().all(|e| e.weight == 0.0) {
            return Err(Error::InvalidPrior("all prior weights are zero".into()));
        }
        Ok(Self {
            kind: PriorKind::CustomTable(entries),
        })
    }

    /// A prior putting all its mass on a single population size.
    pub fn point_mass(n: u64) -> Self {
        Self {
            kind: PriorKind::CustomTable(vec![PriorEntry { n, weight: 1.0 }]),
        }
    }

    pub fn improper_uniform() -> Self {
        Self {
            kind: PriorKind::ImproperUniform,
        }
    }

    pub fn kind(&self) -> &PriorKind {
        &self.kind
    }

    /// Whether the prior has finite support (and so is normalizable).
    pub fn is_finite(&self) -> bool {
        !matches!(self.kind, PriorKind::ImproperUniform)
    }

    /// Unnormalized prior weight at `n`.
    pub fn weight(&self, n: u64) -> f64 {
        match &self.kind {
            PriorKind::TruncatedUniform { n_max } => {
                if n <= *n_max {
                    1.0
                } else {
                    0.0
                }
            }
            PriorKind::CustomTable(entries) => entries
                .binary_search_by_key(&n, |e| e.n)
                .map(|i| entries[i].weight)
                .unwrap_or(0.0),
            PriorKind::ImproperUniform => 1.0,
        }
    }

    /// Largest size with positive weight; `None` for the improper prior.
    pub fn upper_bound(&self) -> Option<u64> {
        match &self.kind {
            PriorKind::TruncatedUniform { n_max } => Some(*n_max),
            PriorKind::CustomTable(entries) => {
                entries.iter().rev().find(|e| e.weight > 0.0).map(|e| e.n)
            }
            PriorKind::ImproperUniform => None,
        }
    }
}

/// Posterior under a flat prior on all naturals:
/// `mass(n) = 1 / ((n)_k * Z)` for `n >= support_min`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct PowerTail {
    k: u64,
    ln_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Masses {
    Table(Vec<f64>),
    Tail(PowerTail),
}

/// A normalized probability mass function over a contiguous run of
/// population sizes starting at `support_min`.
///
/// Finite mass functions store their masses explicitly. The posterior under
/// an improper flat prior is unbounded above; it keeps the closed-form
/// normalizer and evaluates masses and tails on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    support_min: u64,
    masses: Masses,
}

/// Relative tolerance on the sum of a finite mass function.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

impl MassFunction {
    /// Builds a mass function from already-normalized masses.
    pub fn from_masses(support_min: u64, masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidMass("no masses".into()));
        }
        if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidMass(
                "masses must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidMass(format!("masses sum to {total}, not 1")));
        }
        Ok(Self {
            support_min,
            masses: Masses::Table(masses),
        })
    }

    /// Normalizes nonnegative weights into a mass function.
    pub fn from_weights(support_min: u64, weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMass(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let logs: Vec<f64> = weights.iter().map(|w| w.ln()).collect();
        Self::from_log_weights(support_min, &logs)
    }

    /// Normalizes log-weights with log-sum-exp. Zero-weight (`-inf`) entries
    /// at either end are trimmed, so the stored support starts and ends on
    /// positive mass.
    pub fn from_log_weights(support_min: u64, log_weights: &[f64]) -> Result<Self> {
        if log_weights.iter().any(|w| w.is_nan() || *w == f64::INFINITY) {
            return Err(Error::InvalidMass("log-weights must be finite or -inf".into()));
        }
        let first = log_weights.iter().position(|w| w.is_finite());
        let last = log_weights.iter().rposition(|w| w.is_finite());
        let (first, last) = match (first, last) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(Error::InvalidMass("all weights are zero".into())),
        };
        let trimmed = &log_weights[first..=last];
        let norm = log_sum_exp(trimmed);
        let masses = trimmed.iter().map(|w| (w - norm).exp()).collect();
        Ok(Self {
            support_min: support_min + first as u64,
            masses: Masses::Table(masses),
        })
    }

    /// The proper posterior under a flat prior on all naturals, given `k`
    /// captures with maximum serial `max_serial`. Normalized by the
    /// telescoping identity `sum_{n>=m} 1/(n)_k = 1/((k-1) (m-1)_{k-1})`.
    pub fn improper_power_tail(max_serial: u64, k: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InsufficientDataForImproperPrior { k });
        }
        if max_serial < k {
            return Err(Error::InvalidMass(format!(
                "maximum serial {max_serial} below sample size {k}"
            )));
        }
        let ln_norm = -((k - 1) as f64).ln() - falling_factorial_log(max_serial - 1, k - 1)?;
        Ok(Self {
            support_min: max_serial,
            masses: Masses::Tail(PowerTail { k, ln_norm }),
        })
    }

    pub fn support_min(&self) -> u64 {
        self.support_min
    }

    /// Last size of the support; `None` when the support is unbounded.
    pub fn support_max(&self) -> Option<u64> {
        match &self.masses {
            Masses::Table(m) => Some(self.support_min + m.len() as u64 - 1),
            Masses::Tail(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.masses, Masses::Table(_))
    }

    /// Stored masses, aligned to `support_min..`. `None` for an unbounded
    /// support.
    pub fn masses(&self) -> Option<&[f64]> {
        match &self.masses {
            Masses::Table(m) => Some(m),
            Masses::Tail(_) => None,
        }
    }

    /// Sample size `k` of an analytic-tail mass function.
    pub fn tail_order(&self) -> Option<u64> {
        match &self.masses {
            Masses::Table(_) => None,
            Masses::Tail(t) => Some(t.k),
        }
    }

    /// Log of the closed-form normalizer `Z` of an analytic-tail mass
    /// function.
    pub fn tail_log_normalizer(&self) -> Option<f64> {
        match &self.masses {
            Masses::Table(_) => None,
            Masses::Tail(t) => Some(t.ln_norm),
        }
    }

    pub fn mass(&self, n: u64) -> f64 {
        if n < self.support_min {
            return 0.0;
        }
        match &self.masses {
            Masses::Table(m) => m
                .get((n - self.support_min) as usize)
                .copied()
                .unwrap_or(0.0),
            Masses::Tail(_) => self.ln_mass(n).exp(),
        }
    }

    pub fn ln_mass(&self, n: u64) -> f64 {
        if n < self.support_min {
            return f64::NEG_INFINITY;
        }
        match &self.masses {
            Masses::Table(_) => self.mass(n).ln(),
            Masses::Tail(t) => {
                -falling_factorial_log(n, t.k).expect("n >= m >= k") - t.ln_norm
            }
        }
    }

    /// `P(N > n)`.
    pub fn tail(&self, n: u64) -> f64 {
        if n < self.support_min {
            return 1.0;
        }
        match &self.masses {
            Masses::Table(m) => {
                let start = (n - self.support_min + 1) as usize;
                m.get(start..).map_or(0.0, |rest| rest.iter().sum())
            }
            Masses::Tail(t) => {
                // P(N > n) = (m-1)_{k-1} / (n)_{k-1}
                let m = self.support_min;
                (0..t.k - 1)
                    .map(|i| (m - 1 - i) as f64 / (n - i) as f64)
                    .product()
            }
        }
    }

    /// `P(N <= n)`.
    pub fn cdf(&self, n: u64) -> f64 {
        if n < self.support_min {
            return 0.0;
        }
        match &self.masses {
            Masses::Table(m) => {
                let end = ((n - self.support_min + 1) as usize).min(m.len());
                m[..end].iter().sum()
            }
            Masses::Tail(_) => 1.0 - self.tail(n),
        }
    }

    /// `(n, mass)` pairs over a finite support; empty for an unbounded one.
    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        let start = self.support_min;
        self.masses()
            .unwrap_or(&[])
            .iter()
            .enumerate()
            .map(move |(i, &m)| (start + i as u64, m))
    }
}
