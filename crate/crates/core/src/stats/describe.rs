use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub n: usize,
    pub min: f64,
    pub max: f64,
    pub median: f64,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator); 0 when `n == 1`.
    pub sample_std: f64,
    /// Set when `n == 1` and the spread is undefined.
    pub degenerate: bool,
}

pub fn describe(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);

    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let sample_std = if n > 1 {
        let ss: f64 = sorted.iter().map(|v| (v - mean).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    } else {
        0.0
    };

    Ok(Summary {
        n,
        min: sorted[0],
        max: sorted[n - 1],
        median,
        mean,
        sample_std,
        degenerate: n == 1,
    })
}

/// Sample standard deviation, 0 for fewer than two values.
pub(crate) fn sample_std(values: &[f64]) -> f64 {
    describe(values).map(|s| s.sample_std).unwrap_or(0.0)
}
