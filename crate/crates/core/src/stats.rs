//! Small statistical helpers for empirical checks and Monte Carlo reports.

use statrs::distribution::{Beta, ChiSquared, ContinuousCDF};

/// Pearson chi-squared p-value for the hypothesis that `counts` were drawn
/// from the uniform distribution over its cells.
pub fn chi_squared_uniform_pvalue(counts: &[u64]) -> f64 {
    assert!(counts.len() >= 2, "need at least two cells");
    let n: u64 = counts.iter().sum();
    assert!(n > 0, "need at least one observation");
    let expected = n as f64 / counts.len() as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let dist = ChiSquared::new((counts.len() - 1) as f64).expect("valid dof");
    1.0 - dist.cdf(stat)
}

/// Two-sided Clopper-Pearson interval for a binomial proportion.
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    assert!(confidence > 0.0 && confidence < 1.0);
    let alpha = 1.0 - confidence;
    let k = successes as f64;
    let n = trials as f64;
    let low = if successes == 0 {
        0.0
    } else {
        Beta::new(k, n - k + 1.0)
            .expect("valid beta")
            .inverse_cdf(alpha / 2.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k)
            .expect("valid beta")
            .inverse_cdf(1.0 - alpha / 2.0)
    };
    (low, high)
}

/// Standard error of a binomial frequency estimate at probability `p`.
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}
