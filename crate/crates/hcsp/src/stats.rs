//! Summary statistics and the Wilcoxon matched-pairs signed-ranks test
//! used to compare two solvers across a set of benchmark instances.

use thiserror::Error;

/// Errors raised by the statistics operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("paired samples need equal nonzero lengths: {labels} labels, {a} and {b} values")]
    LengthMismatch { labels: usize, a: usize, b: usize },
    #[error("all paired differences are zero; the test is undefined")]
    AllDifferencesZero,
    #[error("cannot compute a coefficient of variation: mean {0} is not positive")]
    NonPositiveMean(f64),
    #[error("lower bound {0} is not positive")]
    NonPositiveLowerBound(f64),
    #[error("empty sample")]
    EmptySample,
}

/// Two result vectors matched by index (typically per-instance makespans of
/// two solvers).
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSamples {
    labels: Vec<String>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl PairedSamples {
    pub fn new(labels: Vec<String>, a: Vec<f64>, b: Vec<f64>) -> Result<Self, StatsError> {
        if a.is_empty() || a.len() != b.len() || labels.len() != a.len() {
            return Err(StatsError::LengthMismatch {
                labels: labels.len(),
                a: a.len(),
                b: b.len(),
            });
        }
        Ok(Self { labels, a, b })
    }

    /// Pairs two vectors with generated labels `pair-0`, `pair-1`, ...
    pub fn from_values(a: Vec<f64>, b: Vec<f64>) -> Result<Self, StatsError> {
        let labels = (0..a.len()).map(|i| format!("pair-{i}")).collect();
        Self::new(labels, a, b)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// How a Wilcoxon p-value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PValueMethod {
    /// Full enumeration of sign assignments (used for n up to 25).
    Exact,
    /// Normal approximation with continuity correction and tie-corrected
    /// variance (larger n).
    NormalApproximation,
}

/// Result of the Wilcoxon matched-pairs signed-ranks test.
#[derive(Debug, Clone, PartialEq)]
pub struct WilcoxonResult {
    /// Rank sum of the positive differences `a - b`.
    pub w_plus: f64,
    /// Rank sum of the negative differences.
    pub w_minus: f64,
    /// Pairs remaining after zero differences are dropped.
    pub n_effective: usize,
    /// Zero differences dropped before ranking.
    pub zeros_dropped: usize,
    /// Two-sided p-value.
    pub p_two_sided: f64,
    pub method: PValueMethod,
}

const EXACT_LIMIT: usize = 25;

/// Wilcoxon matched-pairs signed-ranks test on `a - b`.
///
/// Zero differences are dropped (their count is reported); absolute
/// differences are ranked ascending with average ranks for ties. For up to
/// 25 effective pairs the two-sided p-value counts all `2^n` sign
/// assignments whose smaller rank sum is at most the observed one;
/// otherwise a normal approximation with continuity correction and
/// tie-corrected variance is used.
pub fn wilcoxon_signed_rank(samples: &PairedSamples) -> Result<WilcoxonResult, StatsError> {
    let diffs: Vec<f64> = samples
        .a
        .iter()
        .zip(&samples.b)
        .map(|(&a, &b)| a - b)
        .filter(|&d| d != 0.0)
        .collect();
    let zeros_dropped = samples.len() - diffs.len();
    if diffs.is_empty() {
        return Err(StatsError::AllDifferencesZero);
    }
    let n = diffs.len();
    let (ranks, tie_sizes) = rank_absolute(&diffs);
    // + 0.0 turns the empty sum's -0.0 into 0.0 so reports print "0".
    let w_plus: f64 = ranks
        .iter()
        .zip(&diffs)
        .filter(|(_, &d)| d > 0.0)
        .map(|(&r, _)| r)
        .sum::<f64>()
        + 0.0;
    let w_minus: f64 = ranks
        .iter()
        .zip(&diffs)
        .filter(|(_, &d)| d < 0.0)
        .map(|(&r, _)| r)
        .sum::<f64>()
        + 0.0;
    let w_observed = w_plus.min(w_minus);

    let (p_two_sided, method) = if n <= EXACT_LIMIT {
        (exact_p(&ranks, w_observed), PValueMethod::Exact)
    } else {
        (
            normal_approximation_p(n, &tie_sizes, w_observed),
            PValueMethod::NormalApproximation,
        )
    };
    Ok(WilcoxonResult {
        w_plus,
        w_minus,
        n_effective: n,
        zeros_dropped,
        p_two_sided,
        method,
    })
}

/// Ascending ranks of `|diffs|` with average ranks for ties, plus the size
/// of each tie group.
fn rank_absolute(diffs: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let n = diffs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diffs[i].abs().total_cmp(&diffs[j].abs()));
    let mut ranks = vec![0.0; n];
    let mut tie_sizes = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && diffs[order[end + 1]].abs() == diffs[order[start]].abs() {
            end += 1;
        }
        // Positions start..=end hold ranks start+1..=end+1; share the mean.
        let average = (start + end + 2) as f64 / 2.0;
        for &index in &order[start..=end] {
            ranks[index] = average;
        }
        tie_sizes.push(end - start + 1);
        start = end + 1;
    }
    (ranks, tie_sizes)
}

/// Exact two-sided p-value: the fraction of the `2^n` sign assignments
/// whose rank sum in one tail is at most `w_observed`, doubled and clamped
/// to 1. Ranks are half-integers, so the distribution is tabulated over
/// doubled, integer-valued rank sums.
fn exact_p(ranks: &[f64], w_observed: f64) -> f64 {
    let n = ranks.len();
    let doubled: Vec<usize> = ranks.iter().map(|&r| (2.0 * r).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut counts = vec![0u64; total + 1];
    counts[0] = 1;
    for &rank in &doubled {
        for sum in (rank..=total).rev() {
            counts[sum] += counts[sum - rank];
        }
    }
    let threshold = (2.0 * w_observed).round() as usize;
    let at_most: u64 = counts[..=threshold.min(total)].iter().sum();
    (2.0 * at_most as f64 / 2f64.powi(n as i32)).min(1.0)
}

/// Normal approximation with continuity correction; the variance subtracts
/// `sum(t^3 - t) / 48` over tie groups of size `t`.
fn normal_approximation_p(n: usize, tie_sizes: &[usize], w_observed: f64) -> f64 {
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let tie_correction: f64 = tie_sizes
        .iter()
        .map(|&t| {
            let t = t as f64;
            (t * t * t - t) / 48.0
        })
        .sum();
    let variance = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_correction;
    let z = (w_observed - mean + 0.5) / variance.sqrt();
    (2.0 * standard_normal_cdf(z)).min(1.0)
}

fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Complementary error function via the classic Chebyshev fit; absolute
/// error below 1.2e-7 everywhere.
fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let poly = -z * z - 1.26551223
        + t * (1.00002368
            + t * (0.37409196
                + t * (0.09678418
                    + t * (-0.18628806
                        + t * (0.27886807
                            + t * (-1.13520398
                                + t * (1.48851587 + t * (-0.82215223 + t * 0.17087277))))))));
    let value = t * poly.exp();
    if x >= 0.0 {
        value
    } else {
        2.0 - value
    }
}

/// Mean and coefficient of variation of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation as a percentage of the mean.
    pub cv_percent: f64,
}

/// Arithmetic mean and CV (sample standard deviation over mean, in percent)
/// of a nonempty sample with positive mean.
pub fn summarize(values: &[f64]) -> Result<Summary, StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if mean <= 0.0 {
        return Err(StatsError::NonPositiveMean(mean));
    }
    let cv_percent = if values.len() == 1 {
        0.0
    } else {
        let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        variance.sqrt() / mean * 100.0
    };
    Ok(Summary { mean, cv_percent })
}

/// Relative excess of `solution` over a positive lower bound, in percent.
/// A negative result means the solution beat the bound, which would
/// falsify the bound; callers should flag it.
pub fn gap_to_lower_bound(solution: f64, lower_bound: f64) -> Result<f64, StatsError> {
    if lower_bound <= 0.0 {
        return Err(StatsError::NonPositiveLowerBound(lower_bound));
    }
    Ok((solution - lower_bound) / lower_bound * 100.0)
}

/// Two-decimal percentage rendering used by reports, e.g. `0.07%`.
pub fn format_percent(value: f64) -> String {
    format!("{value:.2}%")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Literal enumeration of all sign assignments, the independent check
    /// for `exact_p`.
    fn enumeration_p(ranks: &[f64], w_observed: f64) -> f64 {
        let n = ranks.len();
        assert!(n <= 25);
        let mut at_most = 0u64;
        for pattern in 0u64..(1 << n) {
            let w: f64 = ranks
                .iter()
                .enumerate()
                .filter(|(i, _)| pattern & (1 << i) != 0)
                .map(|(_, &r)| r)
                .sum();
            if w <= w_observed {
                at_most += 1;
            }
        }
        (2.0 * at_most as f64 / 2f64.powi(n as i32)).min(1.0)
    }

    fn pair(a: Vec<f64>, b: Vec<f64>) -> PairedSamples {
        PairedSamples::from_values(a, b).unwrap()
    }

    #[test]
    fn rejects_mismatched_lengths() {
        assert!(matches!(
            PairedSamples::from_values(vec![1.0], vec![1.0, 2.0]),
            Err(StatsError::LengthMismatch { .. })
        ));
        assert!(matches!(
            PairedSamples::from_values(vec![], vec![]),
            Err(StatsError::LengthMismatch { .. })
        ));
        assert!(matches!(
            PairedSamples::new(vec!["x".into()], vec![1.0, 2.0], vec![1.0, 2.0]),
            Err(StatsError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn all_zero_differences_is_an_error() {
        let s = pair(vec![3.0, 4.0, 5.0], vec![3.0, 4.0, 5.0]);
        assert_eq!(
            wilcoxon_signed_rank(&s).unwrap_err(),
            StatsError::AllDifferencesZero
        );
    }

    #[test]
    fn five_positive_differences() {
        let s = pair(
            vec![2.0, 4.0, 7.0, 11.0, 16.0],
            vec![1.0, 2.0, 4.0, 7.0, 11.0],
        );
        let r = wilcoxon_signed_rank(&s).unwrap();
        assert_eq!(r.w_minus, 0.0);
        assert_eq!(r.w_plus, 15.0);
        assert_eq!(r.n_effective, 5);
        assert_eq!(r.zeros_dropped, 0);
        assert_eq!(r.method, PValueMethod::Exact);
        assert_eq!(r.p_two_sided, 0.0625);
    }

    #[test]
    fn tied_magnitudes_share_average_ranks() {
        // Differences 1, -1, 2: the two unit magnitudes share rank 1.5.
        let s = pair(vec![2.0, 1.0, 5.0], vec![1.0, 2.0, 3.0]);
        let r = wilcoxon_signed_rank(&s).unwrap();
        assert_eq!(r.w_plus, 4.5);
        assert_eq!(r.w_minus, 1.5);
        assert_eq!(r.p_two_sided, 0.75);
    }

    #[test]
    fn zero_differences_are_dropped_and_counted() {
        let s = pair(vec![5.0, 3.0, 1.0], vec![5.0, 1.0, 2.0]);
        let r = wilcoxon_signed_rank(&s).unwrap();
        assert_eq!(r.zeros_dropped, 1);
        assert_eq!(r.n_effective, 2);
        assert_eq!(r.w_plus, 2.0);
        assert_eq!(r.w_minus, 1.0);
        assert_eq!(r.p_two_sided, 1.0);
    }

    #[test]
    fn rank_sum_identity_holds() {
        let s = pair(
            vec![4.0, 9.0, 2.0, 8.0, 12.0, 1.5],
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
        );
        let r = wilcoxon_signed_rank(&s).unwrap();
        let n = r.n_effective as f64;
        assert_eq!(r.w_plus + r.w_minus, n * (n + 1.0) / 2.0);
    }

    #[test]
    fn swapping_samples_swaps_rank_sums() {
        let a = vec![4.0, 9.0, 2.0, 8.0, 12.0];
        let b = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let forward = wilcoxon_signed_rank(&pair(a.clone(), b.clone())).unwrap();
        let backward = wilcoxon_signed_rank(&pair(b, a)).unwrap();
        assert_eq!(forward.w_plus, backward.w_minus);
        assert_eq!(forward.w_minus, backward.w_plus);
        assert_eq!(
            forward.p_two_sided.to_bits(),
            backward.p_two_sided.to_bits()
        );
    }

    #[test]
    fn exact_p_matches_enumeration_exactly() {
        for (a, b) in [
            (vec![2.0, 4.0, 7.0], vec![1.0, 2.0, 4.0]),
            (vec![2.0, 1.0, 7.0, 3.0], vec![1.0, 2.0, 4.0, 9.0]),
            (
                vec![10.0, 2.0, 33.0, 4.5, 5.0, 6.25, 7.0],
                vec![9.0, 3.0, 30.0, 4.0, 5.5, 6.0, 8.0],
            ),
        ] {
            let s = pair(a, b);
            let r = wilcoxon_signed_rank(&s).unwrap();
            let diffs: Vec<f64> = s
                .a()
                .iter()
                .zip(s.b())
                .map(|(&x, &y)| x - y)
                .filter(|&d| d != 0.0)
                .collect();
            let (ranks, _) = rank_absolute(&diffs);
            let oracle = enumeration_p(&ranks, r.w_plus.min(r.w_minus));
            assert_eq!(r.p_two_sided.to_bits(), oracle.to_bits());
        }
    }

    #[test]
    fn switches_to_normal_approximation_above_the_exact_limit() {
        let n = 26;
        let a: Vec<f64> = (0..n).map(|i| (i * i % 37) as f64 + 20.0).collect();
        let b: Vec<f64> = (0..n).map(|i| (i * 7 % 31) as f64 + 21.0).collect();
        let r = wilcoxon_signed_rank(&pair(a, b)).unwrap();
        assert_eq!(r.method, PValueMethod::NormalApproximation);
        assert!(r.p_two_sided > 0.0 && r.p_two_sided <= 1.0);
    }

    #[test]
    fn normal_cdf_hits_reference_points() {
        assert!((standard_normal_cdf(0.0) - 0.5).abs() < 1e-7);
        assert!((standard_normal_cdf(-1.959964) - 0.025).abs() < 1e-6);
        assert!((standard_normal_cdf(1.0) - 0.8413447460685429).abs() < 1e-7);
        assert!((standard_normal_cdf(-3.0) - 0.0013498980316300933).abs() < 1e-9);
    }

    #[test]
    fn summarize_constant_sample() {
        let s = summarize(&[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.cv_percent, 0.0);
        assert_eq!(format_percent(s.cv_percent), "0.00%");
    }

    #[test]
    fn summarize_two_points() {
        let s = summarize(&[1.0, 3.0]).unwrap();
        assert_eq!(s.mean, 2.0);
        assert!((s.cv_percent - 70.71067811865476).abs() < 1e-9);
        assert_eq!(format_percent(s.cv_percent), "70.71%");
    }

    #[test]
    fn summarize_rejects_degenerate_input() {
        assert_eq!(summarize(&[]).unwrap_err(), StatsError::EmptySample);
        assert!(matches!(
            summarize(&[1.0, -5.0]).unwrap_err(),
            StatsError::NonPositiveMean(_)
        ));
        let single = summarize(&[7.5]).unwrap();
        assert_eq!(single.mean, 7.5);
        assert_eq!(single.cv_percent, 0.0);
    }

    #[test]
    fn gap_examples() {
        let gap = gap_to_lower_bound(7360142.1, 7346524.2).unwrap();
        assert_eq!(format_percent(gap), "0.19%");
        let gap = gap_to_lower_bound(2930069.0, 2909326.6).unwrap();
        assert_eq!(format_percent(gap), "0.71%");
        assert_eq!(
            format_percent(gap_to_lower_bound(5.0, 5.0).unwrap()),
            "0.00%"
        );
        assert!(gap_to_lower_bound(4.0, 5.0).unwrap() < 0.0);
        assert!(matches!(
            gap_to_lower_bound(4.0, 0.0).unwrap_err(),
            StatsError::NonPositiveLowerBound(_)
        ));
    }

    #[test]
    fn gap_is_monotone_in_the_solution() {
        let mut last = f64::NEG_INFINITY;
        for step in 0..50 {
            let solution = 100.0 + step as f64 * 3.7;
            let gap = gap_to_lower_bound(solution, 100.0).unwrap();
            assert!(gap > last);
            last = gap;
        }
    }
}
