//! Goodness-of-fit helpers for the Monte Carlo checks.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::dist::DiscreteDist;

/// Sample mean and its standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let m = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (m, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Kolmogorov-Smirnov distance between the empirical law of `xs` and a
/// continuous CDF.
pub fn ks_continuous(xs: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Largest CDF gap between the empirical law of `xs` and `d`, over the
/// union of both supports. Exact for discrete laws.
pub fn ks_discrete(xs: &[f64], d: &DiscreteDist) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let emp_cdf = |t: f64| v.partition_point(|&x| x <= t) as f64 / n;
    d.support()
        .chain(v.iter().copied())
        .map(|t| (emp_cdf(t) - d.cdf(t)).abs())
        .fold(0.0, f64::max)
}

/// Pearson chi-square p-value of observed counts against cell probabilities.
pub fn chi_square_pvalue(observed: &[u64], probs: &[f64]) -> f64 {
    assert_eq!(observed.len(), probs.len());
    let n: u64 = observed.iter().sum();
    let stat: f64 = observed
        .iter()
        .zip(probs)
        .filter(|(_, &p)| p > 0.0)
        .map(|(&o, &p)| {
            let e = n as f64 * p;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let df = probs.iter().filter(|&&p| p > 0.0).count().saturating_sub(1);
    if df == 0 {
        return 1.0;
    }
    1.0 - ChiSquared::new(df as f64).expect("df >= 1").cdf(stat)
}
