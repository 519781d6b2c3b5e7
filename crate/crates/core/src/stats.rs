//! Small statistics toolkit for the Monte-Carlo checks.

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, DiscreteCDF};

use crate::rng::{substream, Purpose};

/// Pairwise (cascade) summation; deterministic for a fixed input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    pairwise_sum(xs) / xs.len() as f64
}

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

pub fn variance(xs: &[f64]) -> f64 {
    let mu = mean(xs);
    let sq: Vec<f64> = xs.iter().map(|x| (x - mu) * (x - mu)).collect();
    pairwise_sum(&sq) / (xs.len().max(2) - 1) as f64
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let (mx, my) = (mean(xs), mean(ys));
    let sxy: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    let sxx: Vec<f64> = xs.iter().map(|x| (x - mx) * (x - mx)).collect();
    let syy: Vec<f64> = ys.iter().map(|y| (y - my) * (y - my)).collect();
    pairwise_sum(&sxy) / (pairwise_sum(&sxx) * pairwise_sum(&syy)).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    /// 95% percentile-bootstrap interval for the mean.
    pub ci_low: f64,
    pub ci_high: f64,
}

pub fn summarize(xs: &[f64], seed: u64) -> Summary {
    let (ci_low, ci_high) = bootstrap_mean_ci(xs, 1000, 0.95, seed);
    Summary {
        count: xs.len(),
        mean: mean(xs),
        median: median(xs),
        ci_low,
        ci_high,
    }
}

pub fn bootstrap_mean_ci(xs: &[f64], resamples: usize, level: f64, seed: u64) -> (f64, f64) {
    if xs.len() < 2 {
        let m = mean(xs);
        return (m, m);
    }
    let mut rng = substream(seed, 0, Purpose::Bootstrap);
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| {
            let draw: Vec<f64> = (0..xs.len()).map(|_| xs[rng.random_range(0..xs.len())]).collect();
            mean(&draw)
        })
        .collect();
    means.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    let lo = ((tail * resamples as f64).floor() as usize).min(resamples - 1);
    let hi = (((1.0 - tail) * resamples as f64).ceil() as usize).clamp(1, resamples) - 1;
    (means[lo], means[hi])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Kolmogorov survival function `Q(λ) = 2 Σ_{k≥1} (-1)^{k-1} exp(-2 k² λ²)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=200 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov–Smirnov test (asymptotic p-value with the
/// Stephens small-sample correction).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> TestResult {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len(), y.len());
    let (mut i, mut j, mut dmax) = (0usize, 0usize, 0.0f64);
    while i < n && j < m {
        let t = x[i].min(y[j]);
        while i < n && x[i] <= t {
            i += 1;
        }
        while j < m && y[j] <= t {
            j += 1;
        }
        dmax = dmax.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let en = ((n * m) as f64 / (n + m) as f64).sqrt();
    TestResult {
        statistic: dmax,
        p_value: kolmogorov_sf((en + 0.12 + 0.11 / en) * dmax),
    }
}

/// One-sample KS distance `sup |F_n - F|` against a continuous CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut x = samples.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = cdf(v);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Pearson chi-square goodness of fit against equal cell probabilities.
pub fn chi_square_uniform(counts: &[u64]) -> TestResult {
    let k = counts.len();
    let total: u64 = counts.iter().sum();
    let expect = total as f64 / k as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expect).powi(2) / expect)
        .sum();
    let dist = ChiSquared::new((k - 1) as f64).expect("k >= 2 cells");
    TestResult {
        statistic: stat,
        p_value: dist.sf(stat),
    }
}

/// Two-sided exact sign test on paired differences (zeros dropped).
pub fn sign_test(diffs: &[f64]) -> TestResult {
    let pos = diffs.iter().filter(|&&x| x > 0.0).count() as u64;
    let neg = diffs.iter().filter(|&&x| x < 0.0).count() as u64;
    let n = pos + neg;
    if n == 0 {
        return TestResult {
            statistic: 0.0,
            p_value: 1.0,
        };
    }
    let k = pos.min(neg);
    let dist = Binomial::new(0.5, n).expect("valid binomial");
    TestResult {
        statistic: pos as f64 - neg as f64,
        p_value: (2.0 * dist.cdf(k)).min(1.0),
    }
}

/// Least-squares slope of `y` on `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    let num: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).collect();
    let den: Vec<f64> = x.iter().map(|a| (a - mx) * (a - mx)).collect();
    pairwise_sum(&num) / pairwise_sum(&den)
}
