//! Bayes update over population sizes and the summaries read off the
//! resulting posterior.
//!
//! The posterior depends on the data only through the sample size `k` and
//! the largest serial `m`: `P(N = n | m, k) ∝ prior(n) / (n)_k` for
//! `n >= m`. Every summary here works from a [`MassFunction`], never from the
//! raw sample.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{falling_factorial_log, MassFunction, PriorKind, PriorSpec, SerialSample};

/// Default upper limit on population sizes examined when a summary of an
/// unbounded posterior needs explicit enumeration.
pub const DEFAULT_HORIZON: u64 = 1_000_000;

/// Relative tolerance for treating two masses as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Slack on the 0.5 cumulative-mass comparisons behind the median.
pub const MEDIAN_TOLERANCE: f64 = 1e-12;

/// Number of terms summed per serial when evaluating the predictive check on
/// an unbounded posterior. The neglected remainder is at most
/// `k / (start + PREDICTIVE_TERMS) * P(N > start + PREDICTIVE_TERMS)`.
pub const PREDICTIVE_TERMS: u64 = 1_000_000;

/// Rebuild `ln (n)_k` from scratch this often when stepping it along `n`.
const RESYNC_INTERVAL: u64 = 256;

/// Posterior over population sizes given a sample and a prior.
pub fn compute_posterior(sample: &SerialSample, prior: &PriorSpec) -> Result<MassFunction> {
    posterior_from_statistics(sample.max_serial(), sample.k(), prior)
}

/// Posterior from the sufficient statistics alone: the largest serial
/// `max_serial` among `k` distinct captures.
pub fn posterior_from_statistics(max_serial: u64, k: u64, prior: &PriorSpec) -> Result<MassFunction> {
    if k == 0 {
        return Err(Error::EmptySample);
    }
    if max_serial < k {
        return Err(Error::DomainError { n: max_serial, k });
    }
    if let PriorKind::ImproperUniform = prior.kind() {
        return MassFunction::improper_power_tail(max_serial, k);
    }

    let upper = prior.upper_bound().expect("finite prior has an upper bound");
    if upper < max_serial {
        return Err(Error::EmptyPosterior { max_serial });
    }

    let mut log_weights = Vec::with_capacity((upper - max_serial + 1) as usize);
    let mut ln_ff = 0.0;
    for n in max_serial..=upper {
        let step = n - max_serial;
        if step % RESYNC_INTERVAL == 0 {
            ln_ff = falling_factorial_log(n, k)?;
        } else {
            // (n)_k = (n-1)_k * n / (n-k)
            ln_ff += (n as f64).ln() - ((n - k) as f64).ln();
        }
        let w = prior.weight(n);
        log_weights.push(if w > 0.0 { w.ln() - ln_ff } else { f64::NEG_INFINITY });
    }

    MassFunction::from_log_weights(max_serial, &log_weights).map_err(|e| match e {
        Error::InvalidMass(_) => Error::EmptyPosterior { max_serial },
        other => other,
    })
}

/// Smallest `n` whose cumulative posterior mass reaches 0.5: the left end
/// of the median interval.
pub fn posterior_median(post: &MassFunction) -> u64 {
    median_interval(post).0
}

/// All medians `(lo, hi)`: every `n` in `lo..=hi` has at least half the mass
/// at or below it and at least half at or above it. Usually `lo == hi`.
pub fn median_interval(post: &MassFunction) -> (u64, u64) {
    let half = 0.5 - MEDIAN_TOLERANCE;
    let start = post.support_min();
    match post.masses() {
        Some(masses) => {
            let mut cum = 0.0;
            let mut lo = start + masses.len() as u64 - 1;
            for (i, &m) in masses.iter().enumerate() {
                cum += m;
                if cum >= half {
                    lo = start + i as u64;
                    break;
                }
            }
            let mut upper_mass = 0.0;
            let mut hi = start;
            for (i, &m) in masses.iter().enumerate().rev() {
                upper_mass += m;
                if upper_mass >= half {
                    hi = start + i as u64;
                    break;
                }
            }
            (lo, hi)
        }
        None => {
            let lo = first_where(start, |n| post.tail(n) <= 0.5 + MEDIAN_TOLERANCE);
            // P(N >= n) = tail(n - 1); hi is the last n where that is >= 0.5
            let hi = first_where(start - 1, |j| post.tail(j) < half);
            (lo, hi)
        }
    }
}

/// Smallest `n >= lo` satisfying a predicate that is monotone (false, then
/// true forever). The predicate must eventually hold.
fn first_where(lo: u64, pred: impl Fn(u64) -> bool) -> u64 {
    if pred(lo) {
        return lo;
    }
    let mut step = 1u64;
    let mut bad = lo;
    let mut good = lo.saturating_add(step);
    while !pred(good) {
        bad = good;
        step = step.saturating_mul(2);
        good = lo.saturating_add(step);
        assert!(bad != u64::MAX, "predicate never holds");
    }
    while good - bad > 1 {
        let mid = bad + (good - bad) / 2;
        if pred(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// An α-high-mass subset: the fewest population sizes holding at least
/// `1 - alpha` of the posterior mass, every member at least as probable as
/// every non-member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CredibleSubset {
    pub alpha: f64,
    /// Members in increasing order.
    pub members: Vec<u64>,
    pub attained_mass: f64,
    /// Mass of the least probable member.
    pub threshold_mass: f64,
}

impl CredibleSubset {
    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.members.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.members.last().copied()
    }

    /// Whether the members form a single run of consecutive sizes.
    pub fn is_contiguous(&self) -> bool {
        self.members.windows(2).all(|w| w[1] == w[0] + 1)
    }
}

/// α-high-mass subset with the default horizon for unbounded posteriors.
pub fn high_mass_subset(post: &MassFunction, alpha: f64) -> Result<CredibleSubset> {
    high_mass_subset_with_horizon(post, alpha, DEFAULT_HORIZON)
}

/// α-high-mass subset. For an unbounded posterior the subset is a prefix of
/// the support (mass is strictly decreasing there); it is refused with
/// [`Error::HorizonExceeded`] if that prefix runs past `horizon`.
pub fn high_mass_subset_with_horizon(
    post: &MassFunction,
    alpha: f64,
    horizon: u64,
) -> Result<CredibleSubset> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let target = (1.0 - alpha) * (1.0 - TIE_TOLERANCE);
    let start = post.support_min();

    let Some(masses) = post.masses() else {
        if horizon < start || post.tail(horizon) > 1.0 - target {
            return Err(Error::HorizonExceeded { horizon });
        }
        let upper = first_where(start, |n| post.tail(n) <= 1.0 - target);
        return Ok(CredibleSubset {
            alpha,
            members: (start..=upper).collect(),
            attained_mass: post.cdf(upper),
            threshold_mass: post.mass(upper),
        });
    };

    let mut order: Vec<usize> = (0..masses.len()).filter(|&i| masses[i] > 0.0).collect();
    // descending mass, ascending n among equal masses
    order.sort_by(|&a, &b| masses[b].total_cmp(&masses[a]).then(a.cmp(&b)));

    let mut cum = 0.0;
    let mut admitted = 0;
    for &i in &order {
        cum += masses[i];
        admitted += 1;
        if cum >= target {
            break;
        }
    }
    let threshold = masses[order[admitted - 1]];
    // sizes tied with the last admitted one go in together
    while admitted < order.len()
        && masses[order[admitted]] >= threshold * (1.0 - TIE_TOLERANCE)
    {
        cum += masses[order[admitted]];
        admitted += 1;
    }
    let threshold = masses[order[admitted - 1]];

    let mut members: Vec<u64> = order[..admitted].iter().map(|&i| start + i as u64).collect();
    members.sort_unstable();
    Ok(CredibleSubset {
        alpha,
        members,
        attained_mass: cum,
        threshold_mass: threshold,
    })
}

/// `P(N > n_prime)`.
pub fn tail_probability(post: &MassFunction, n_prime: u64) -> f64 {
    post.tail(n_prime)
}

/// Probability that serial `s_tilde` shows up in a fresh capture of `k`
/// tanks, averaging the per-size capture chance `k / n` over the posterior.
pub fn posterior_predictive_capture(post: &MassFunction, k: u64, s_tilde: u64) -> f64 {
    let first = k.max(s_tilde).max(post.support_min()).max(1);
    let last = match post.support_max() {
        Some(last) => last,
        None => first.saturating_add(PREDICTIVE_TERMS),
    };
    (first..=last).map(|n| capture_term(post, k, n)).sum()
}

/// Predictive capture probabilities for serials `1..=upto`, computed with
/// one pass of suffix sums.
pub fn posterior_predictive_curve(post: &MassFunction, k: u64, upto: u64) -> Vec<f64> {
    if upto == 0 {
        return Vec::new();
    }
    let first = k.max(post.support_min()).max(1);
    let last = match post.support_max() {
        Some(last) => last,
        None => first.max(upto).saturating_add(PREDICTIVE_TERMS),
    };
    // suffix[i] = sum over n >= first + i
    let len = last.saturating_sub(first) as usize + 1;
    let mut suffix = vec![0.0; len + 1];
    for i in (0..len).rev() {
        suffix[i] = suffix[i + 1] + capture_term(post, k, first + i as u64);
    }
    (1..=upto)
        .map(|s| {
            let from = s.max(first);
            if from > last {
                0.0
            } else {
                suffix[(from - first) as usize]
            }
        })
        .collect()
}

fn capture_term(post: &MassFunction, k: u64, n: u64) -> f64 {
    if n < k {
        return 0.0;
    }
    k as f64 / n as f64 * post.mass(n)
}

/// Closed-form posterior mean under the improper flat prior:
/// `(m - 1)(k - 1) / (k - 2)`, finite only for `k >= 3`.
pub fn improper_posterior_mean(max_serial: u64, k: u64) -> Result<f64> {
    if k <= 2 {
        return Err(Error::MeanDivergent { k });
    }
    if max_serial < k {
        return Err(Error::DomainError { n: max_serial, k });
    }
    Ok((max_serial - 1) as f64 * (k - 1) as f64 / (k - 2) as f64)
}

/// Posterior mean of `N`.
pub fn posterior_mean(post: &MassFunction) -> Result<f64> {
    match post.tail_order() {
        Some(k) => improper_posterior_mean(post.support_min(), k),
        None => Ok(post.iter().map(|(n, m)| n as f64 * m).sum()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_sample, PriorEntry};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn worked_example_posterior(n_max: u64) -> MassFunction {
        let s = validate_sample(&[15, 14, 3]).unwrap();
        compute_posterior(&s, &PriorSpec::truncated_uniform(n_max).unwrap()).unwrap()
    }

    /// sum_{n=a}^{b} 1/(n)_3 by telescoping:
    /// 1/(n)_3 = 1/2 [1/((n-1)(n-2)) - 1/(n(n-1))]
    fn telescoped_k3(a: u64, b: u64) -> f64 {
        let f = |n: u64| 1.0 / ((n * (n - 1)) as f64);
        0.5 * (f(a - 1) - f(b))
    }

    #[test]
    fn worked_example_mass_at_mode() {
        let post = worked_example_posterior(35);
        let z = telescoped_k3(15, 35);
        let direct: f64 = (15..=35u64).map(|n| 1.0 / (n * (n - 1) * (n - 2)) as f64).sum();
        assert_relative_eq!(z, direct, max_relative = 1e-13);
        assert_relative_eq!(post.mass(15), (1.0 / 2730.0) / z, max_relative = 1e-12);
        assert_relative_eq!(post.mass(15), 0.15741, epsilon = 5e-6);
        assert_eq!(post.support_min(), 15);
        assert_eq!(post.support_max(), Some(35));
        assert_eq!(post.mass(14), 0.0);
    }

    #[test]
    fn prior_below_max_is_empty_posterior() {
        let s = validate_sample(&[15, 14, 3]).unwrap();
        assert_eq!(
            compute_posterior(&s, &PriorSpec::truncated_uniform(14).unwrap()),
            Err(Error::EmptyPosterior { max_serial: 15 })
        );
        let table = PriorSpec::table(vec![
            PriorEntry { n: 10, weight: 1.0 },
            PriorEntry { n: 20, weight: 0.0 },
        ])
        .unwrap();
        assert_eq!(
            compute_posterior(&s, &table),
            Err(Error::EmptyPosterior { max_serial: 15 })
        );
    }

    #[test]
    fn single_feasible_size_is_point_mass() {
        let s = validate_sample(&[1, 2, 3, 4]).unwrap();
        let post = compute_posterior(&s, &PriorSpec::truncated_uniform(4).unwrap()).unwrap();
        assert_eq!(post.masses().unwrap(), &[1.0]);
        assert_eq!(posterior_median(&post), 4);
    }

    #[test]
    fn improper_needs_two_captures() {
        let s = validate_sample(&[7]).unwrap();
        assert_eq!(
            compute_posterior(&s, &PriorSpec::improper_uniform()),
            Err(Error::InsufficientDataForImproperPrior { k: 1 })
        );
    }

    #[test]
    fn medians_match_worked_example() {
        assert_eq!(posterior_median(&worked_example_posterior(35)), 19);
        assert_eq!(posterior_median(&worked_example_posterior(60)), 20);
        assert_eq!(posterior_median(&worked_example_posterior(70)), 20);
        assert_eq!(median_interval(&worked_example_posterior(35)), (19, 19));
    }

    #[test]
    fn median_interval_on_exact_half() {
        let mf = MassFunction::from_masses(3, vec![0.25, 0.25, 0.25, 0.25]).unwrap();
        assert_eq!(median_interval(&mf), (4, 5));
        let point = MassFunction::from_masses(9, vec![1.0]).unwrap();
        assert_eq!(median_interval(&point), (9, 9));
    }

    #[test]
    fn high_mass_subset_worked_example() {
        let h = high_mass_subset(&worked_example_posterior(35), 0.2).unwrap();
        assert_eq!(h.members, (15..=25).collect::<Vec<_>>());
        assert!(h.attained_mass >= 0.8);
        let h70 = high_mass_subset(&worked_example_posterior(70), 0.2).unwrap();
        assert_eq!(h70.max(), Some(29));
    }

    #[test]
    fn alpha_zero_takes_whole_support() {
        let post = worked_example_posterior(35);
        let h = high_mass_subset(&post, 0.0).unwrap();
        assert_eq!(h.members, (15..=35).collect::<Vec<_>>());
        assert_relative_eq!(h.attained_mass, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn invalid_alpha_rejected() {
        let post = worked_example_posterior(35);
        assert!(matches!(high_mass_subset(&post, 1.0), Err(Error::InvalidAlpha(_))));
        assert!(matches!(high_mass_subset(&post, -0.1), Err(Error::InvalidAlpha(_))));
        assert!(matches!(high_mass_subset(&post, f64::NAN), Err(Error::InvalidAlpha(_))));
    }

    #[test]
    fn ties_are_admitted_together() {
        let mf = MassFunction::from_masses(1, vec![0.3, 0.2, 0.2, 0.2, 0.1]).unwrap();
        // 0.3 + 0.2 reaches 0.5, and the other two 0.2 sizes tie
        let h = high_mass_subset(&mf, 0.5).unwrap();
        assert_eq!(h.members, vec![1, 2, 3, 4]);
        assert_relative_eq!(h.attained_mass, 0.9);
        assert_eq!(h.threshold_mass, 0.2);
    }

    #[test]
    fn nonmonotone_posterior_gives_noncontiguous_subset() {
        let s = validate_sample(&[3, 1]).unwrap();
        let prior = PriorSpec::table(vec![
            PriorEntry { n: 3, weight: 1.0 },
            PriorEntry { n: 4, weight: 0.01 },
            PriorEntry { n: 5, weight: 10.0 },
        ])
        .unwrap();
        let post = compute_posterior(&s, &prior).unwrap();
        let h = high_mass_subset(&post, 0.1).unwrap();
        assert_eq!(h.members, vec![3, 5]);
        assert!(!h.is_contiguous());
    }

    #[test]
    fn tail_queries() {
        let post = worked_example_posterior(35);
        let oracle = telescoped_k3(31, 35) / telescoped_k3(15, 35);
        assert_relative_eq!(tail_probability(&post, 30), oracle, max_relative = 1e-12);
        assert!((tail_probability(&post, 30) - 0.066).abs() < 1e-3);
        assert_relative_eq!(tail_probability(&post, 14), 1.0, max_relative = 1e-12);
        assert_eq!(tail_probability(&post, 35), 0.0);
    }

    #[test]
    fn predictive_check_shape() {
        let post = worked_example_posterior(35);
        let at_one = posterior_predictive_capture(&post, 3, 1);
        for s in 1..=15 {
            assert_eq!(posterior_predictive_capture(&post, 3, s), at_one);
        }
        assert_eq!(posterior_predictive_capture(&post, 3, 36), 0.0);
        let direct: f64 = (15..=35u64).map(|n| 3.0 / n as f64 * post.mass(n)).sum();
        assert_relative_eq!(posterior_predictive_capture(&post, 3, 15), direct, max_relative = 1e-14);

        let curve = posterior_predictive_curve(&post, 3, 40);
        for (i, v) in curve.iter().enumerate() {
            let s = i as u64 + 1;
            assert_relative_eq!(*v, posterior_predictive_capture(&post, 3, s), max_relative = 1e-12, epsilon = 1e-300);
        }
        let total: f64 = curve.iter().sum();
        assert_relative_eq!(total, 3.0, max_relative = 1e-12);
    }

    #[test]
    fn improper_mean_values() {
        assert_eq!(improper_posterior_mean(15, 3).unwrap(), 28.0);
        for k in 3..20u64 {
            let expected = ((k - 1) * (k - 1)) as f64 / (k - 2) as f64;
            assert_relative_eq!(improper_posterior_mean(k, k).unwrap(), expected);
        }
        assert_eq!(improper_posterior_mean(15, 2), Err(Error::MeanDivergent { k: 2 }));
    }

    #[test]
    fn improper_mean_matches_truncated_sum() {
        let post = MassFunction::improper_power_tail(15, 3).unwrap();
        let partial: f64 = (15..=10_000_000u64).map(|n| n as f64 * post.mass(n)).sum();
        assert_relative_eq!(partial, 28.0, max_relative = 1e-4);
        assert_eq!(posterior_mean(&post).unwrap(), 28.0);
    }

    #[test]
    fn improper_summaries() {
        let s = validate_sample(&[15, 14, 3]).unwrap();
        let post = compute_posterior(&s, &PriorSpec::improper_uniform()).unwrap();
        // tail(n) = 182 / (n (n-1)); first n with tail <= 0.5 is 20
        assert_eq!(median_interval(&post), (20, 20));
        assert_relative_eq!(tail_probability(&post, 30), 182.0 / 870.0, max_relative = 1e-14);
        let h = high_mass_subset(&post, 0.2).unwrap();
        // 182 / (u (u-1)) <= 0.2  ->  u = 31
        assert_eq!((h.min(), h.max()), (Some(15), Some(31)));
        assert!(h.attained_mass >= 0.8);
        assert!(matches!(
            high_mass_subset_with_horizon(&post, 0.2, 30),
            Err(Error::HorizonExceeded { horizon: 30 })
        ));
        assert!(matches!(
            high_mass_subset(&post, 0.0),
            Err(Error::HorizonExceeded { .. })
        ));
    }

    #[test]
    fn improper_median_interval_on_exact_half() {
        // k = 2, m = 15: tail(n) = 14 / n hits exactly 0.5 at n = 28
        let post = MassFunction::improper_power_tail(15, 2).unwrap();
        assert_eq!(median_interval(&post), (28, 29));
    }

    #[test]
    fn improper_predictive_balance() {
        let post = MassFunction::improper_power_tail(15, 3).unwrap();
        let curve = posterior_predictive_curve(&post, 3, 200_000);
        let total: f64 = curve.iter().sum();
        // mass beyond serial 200000 is O(1e-5)
        assert_relative_eq!(total, 3.0, max_relative = 1e-3);
        assert_relative_eq!(
            curve[0],
            posterior_predictive_capture(&post, 3, 1),
            max_relative = 1e-9
        );
    }

    #[test]
    fn k12_update_has_a_two_point_subset() {
        // true n = 20 under a uniform prior up to 35
        let prior = PriorSpec::truncated_uniform(35).unwrap();
        let hits: Vec<u64> = (15..=20)
            .filter(|&m| {
                let post = posterior_from_statistics(m, 12, &prior).unwrap();
                high_mass_subset(&post, 0.2).unwrap().members == vec![19, 20]
            })
            .collect();
        assert_eq!(hits, vec![19]);
    }

    #[test]
    fn large_prior_bound_is_stable() {
        let post = posterior_from_statistics(15, 3, &PriorSpec::truncated_uniform(2_000_000).unwrap()).unwrap();
        let improper = MassFunction::improper_power_tail(15, 3).unwrap();
        for n in [15, 16, 100, 10_000, 1_000_000, 1_999_999] {
            assert_relative_eq!(post.mass(n), improper.mass(n), max_relative = 1e-6);
        }
    }

    fn arb_prior() -> impl Strategy<Value = PriorSpec> {
        prop_oneof![
            (1u64..200).prop_map(|n| PriorSpec::truncated_uniform(n).unwrap()),
            proptest::collection::btree_map(0u64..200, 0.0f64..5.0, 1..30).prop_filter_map(
                "needs positive weight",
                |m| PriorSpec::table(m.into_iter().map(|(n, weight)| PriorEntry { n, weight }).collect()).ok()
            ),
        ]
    }

    proptest! {
        #[test]
        fn posterior_invariants(prior in arb_prior(), k in 1u64..6, m_off in 0u64..120, alpha in 0.0f64..0.99) {
            let m = k + m_off;
            let Ok(post) = posterior_from_statistics(m, k, &prior) else {
                return Ok(());
            };
            let masses = post.masses().unwrap();
            let total: f64 = masses.iter().sum();
            prop_assert!((total - 1.0).abs() <= 1e-10);
            prop_assert!(masses.iter().all(|&x| x >= 0.0));
            prop_assert!(post.support_min() >= m);
            if prior.weight(m) > 0.0 {
                prop_assert!(post.mass(m) > 0.0);
            }

            let h = high_mass_subset(&post, alpha).unwrap();
            prop_assert!(h.attained_mass >= (1.0 - alpha) * (1.0 - TIE_TOLERANCE));
            for (n, mass) in post.iter() {
                if h.contains(n) {
                    prop_assert!(mass >= h.threshold_mass);
                } else {
                    prop_assert!(mass < h.threshold_mass);
                }
            }

            let (lo, hi) = median_interval(&post);
            prop_assert!(lo <= hi);
            prop_assert!(post.cdf(lo) >= 0.5 - 1e-9);
            prop_assert!(post.tail(hi - 1) >= 0.5 - 1e-9);

            let upto = post.support_max().unwrap();
            let balance: f64 = (1..=upto).map(|s| posterior_predictive_capture(&post, k, s)).sum();
            prop_assert!((balance - k as f64).abs() <= 1e-8);
        }

        #[test]
        fn uniform_posterior_strictly_decreasing(n_max in 2u64..300, k in 1u64..6, m_off in 0u64..100, alpha in 0.0f64..0.99) {
            let m = k + m_off;
            prop_assume!(m <= n_max);
            let post = posterior_from_statistics(m, k, &PriorSpec::truncated_uniform(n_max).unwrap()).unwrap();
            let masses = post.masses().unwrap();
            prop_assert!(masses.windows(2).all(|w| w[1] < w[0]));
            let h = high_mass_subset(&post, alpha).unwrap();
            prop_assert_eq!(h.min(), Some(m));
            prop_assert!(h.is_contiguous());
        }

        #[test]
        fn posterior_depends_only_on_k_and_max(
            set in proptest::collection::btree_set(1u64..60, 1..6),
            n_max in 60u64..120,
        ) {
            let a = SerialSample::from_serials(set.iter().rev().copied().collect()).unwrap();
            // same k and max, other entries packed at the bottom
            let mut other = vec![a.max_serial()];
            other.extend(1..a.k());
            let b = SerialSample::from_serials(other).unwrap();
            prop_assert_eq!((b.k(), b.max_serial()), (a.k(), a.max_serial()));
            let prior = PriorSpec::truncated_uniform(n_max).unwrap();
            prop_assert_eq!(compute_posterior(&a, &prior).unwrap(), compute_posterior(&b, &prior).unwrap());
        }
    }

    #[test]
    fn telescoping_normalizer_matches_direct_sum() {
        for k in 2..=6u64 {
            for m in k..=30u64 {
                for big_n in [m, m + 1, m + 7, 100, 1_000, 10_000] {
                    if big_n < m {
                        continue;
                    }
                    let direct: f64 = (m..=big_n)
                        .map(|n| (-falling_factorial_log(n, k).unwrap()).exp())
                        .sum();
                    let closed = ((-falling_factorial_log(m - 1, k - 1).unwrap()).exp()
                        - (-falling_factorial_log(big_n, k - 1).unwrap()).exp())
                        / (k - 1) as f64;
                    assert_relative_eq!(direct, closed, max_relative = 1e-12);
                    // the implementation's normalizer, read off the mode
                    let post = posterior_from_statistics(m, k, &PriorSpec::truncated_uniform(big_n).unwrap()).unwrap();
                    let mode_weight = (-falling_factorial_log(m, k).unwrap()).exp();
                    assert_relative_eq!(mode_weight / post.mass(m), closed, max_relative = 1e-12);
                }
            }
        }
    }
}
