//! Frequentist point estimates reported next to the posterior.

use crate::model::SerialSample;

/// Maximum-likelihood estimate: the largest observed serial.
pub fn mle(sample: &SerialSample) -> u64 {
    sample.max_serial()
}

/// Minimum-variance unbiased estimate `m + m/k - 1`, the maximum corrected
/// by the average gap between sorted serials.
pub fn mvue(sample: &SerialSample) -> f64 {
    let (num, den) = mvue_ratio(sample);
    num as f64 / den as f64
}

/// [`mvue`] as an exact fraction `((k + 1) m - k) / k`, not reduced.
pub fn mvue_ratio(sample: &SerialSample) -> (u128, u128) {
    let m = sample.max_serial() as u128;
    let k = sample.k() as u128;
    ((k + 1) * m - k, k)
}
