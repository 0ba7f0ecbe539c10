use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Half the L1 distance between the normalised `counts` and `pmf`.
pub fn total_variation(counts: &[u64], pmf: &[f64]) -> f64 {
    assert_eq!(counts.len(), pmf.len());
    let total: u64 = counts.iter().sum();
    let total = total as f64;
    0.5 * counts
        .iter()
        .zip(pmf)
        .map(|(&c, &p)| (c as f64 / total - p).abs())
        .sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Pearson goodness of fit. Cells with expected count below 5 are pooled.
pub fn chi_square_test(counts: &[u64], pmf: &[f64]) -> ChiSquareResult {
    assert_eq!(counts.len(), pmf.len());
    let total = counts.iter().sum::<u64>() as f64;
    let mut stat = 0.0;
    let mut cells = 0usize;
    let (mut pooled_obs, mut pooled_exp) = (0.0, 0.0);
    for (&c, &p) in counts.iter().zip(pmf) {
        let e = p * total;
        if e < 5.0 {
            pooled_obs += c as f64;
            pooled_exp += e;
        } else {
            stat += (c as f64 - e).powi(2) / e;
            cells += 1;
        }
    }
    if pooled_exp > 0.0 {
        stat += (pooled_obs - pooled_exp).powi(2) / pooled_exp;
        cells += 1;
    }
    let df = cells.saturating_sub(1);
    let p_value = if df == 0 {
        1.0
    } else {
        ChiSquared::new(df as f64).expect("df > 0").sf(stat)
    };
    ChiSquareResult {
        statistic: stat,
        df,
        p_value,
    }
}

/// Kolmogorov–Smirnov distance between the empirical law of `samples` and a
/// continuous `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let below = i as f64 / n;
        while i < xs.len() && xs[i] == x {
            i += 1;
        }
        let at = i as f64 / n;
        let f = cdf(x);
        d = d.max((f - below).abs()).max((at - f).abs());
    }
    d
}
