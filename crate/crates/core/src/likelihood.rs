//! Capture-model likelihoods. Capturing `k` tanks uniformly without
//! replacement from `{1..n}` makes every ordered sample equally likely with
//! probability `1/(n)_k`.
//!
//! Each likelihood comes in a linear and a log form. Out-of-support inputs
//! give probability 0 (log `-inf`) rather than an error.

use crate::model::{falling_factorial_exact, falling_factorial_log, SerialSample};

/// Integers up to 2^53 convert to `f64` exactly.
const EXACT_F64_INT: u128 = 1 << 53;

/// `a / b` with a single rounding when both are exactly representable.
fn exact_ratio(a: u128, b: u128) -> Option<f64> {
    (a <= EXACT_F64_INT && b <= EXACT_F64_INT && b > 0).then(|| a as f64 / b as f64)
}

/// Probability of the full ordered sample given population size `n`.
pub fn likelihood_full(sample: &SerialSample, n: u64) -> f64 {
    if sample.max_serial() > n {
        return 0.0;
    }
    match falling_factorial_exact(n, sample.k()).and_then(|d| exact_ratio(1, d)) {
        Some(p) => p,
        None => likelihood_full_ln(sample, n).exp(),
    }
}

pub fn likelihood_full_ln(sample: &SerialSample, n: u64) -> f64 {
    if sample.max_serial() > n {
        return f64::NEG_INFINITY;
    }
    // max_serial >= k, so n >= k here
    -falling_factorial_log(n, sample.k()).expect("n >= k")
}

/// Probability of the sample built up one capture at a time: the `i`-th
/// capture is uniform over the `n - i + 1` tanks still in the population.
pub fn likelihood_sequential(sample: &SerialSample, n: u64) -> f64 {
    let mut p = 1.0;
    for step in sequential_steps(sample, n) {
        match step {
            Some(remaining) => p *= 1.0 / remaining as f64,
            None => return 0.0,
        }
    }
    p
}

pub fn likelihood_sequential_ln(sample: &SerialSample, n: u64) -> f64 {
    let mut ln_p = 0.0;
    for step in sequential_steps(sample, n) {
        match step {
            Some(remaining) => ln_p -= (remaining as f64).ln(),
            None => return f64::NEG_INFINITY,
        }
    }
    ln_p
}

/// For each capture in order: `Some(tanks remaining)` when the serial is a
/// not-yet-captured member of `{1..n}`, `None` otherwise.
fn sequential_steps(sample: &SerialSample, n: u64) -> impl Iterator<Item = Option<u64>> + '_ {
    let serials = sample.serials();
    serials.iter().enumerate().map(move |(i, &s)| {
        let fresh = !serials[..i].contains(&s);
        (s >= 1 && s <= n && fresh && (i as u64) < n).then(|| n - i as u64)
    })
}

/// Number of ordered `k`-samples whose maximum is exactly `m`:
/// `k (m-1)_{k-1}`. `None` on `u128` overflow.
pub fn max_statistic_count(m: u64, k: u64) -> Option<u128> {
    if k == 0 || m < k {
        return Some(0);
    }
    falling_factorial_exact(m - 1, k - 1)?.checked_mul(k as u128)
}

/// Probability that the largest of `k` captured serials equals `m`, given
/// population size `n`: `k (m-1)_{k-1} / (n)_k` when `k <= m <= n`.
pub fn likelihood_max(m: u64, k: u64, n: u64) -> f64 {
    if k == 0 || m < k || m > n {
        return 0.0;
    }
    let exact = max_statistic_count(m, k)
        .zip(falling_factorial_exact(n, k))
        .and_then(|(num, den)| exact_ratio(num, den));
    match exact {
        Some(p) => p,
        None => likelihood_max_ln(m, k, n).exp(),
    }
}

pub fn likelihood_max_ln(m: u64, k: u64, n: u64) -> f64 {
    if k == 0 || m < k || m > n {
        return f64::NEG_INFINITY;
    }
    (k as f64).ln() + falling_factorial_log(m - 1, k - 1).expect("m >= k")
        - falling_factorial_log(n, k).expect("n >= m >= k")
}
