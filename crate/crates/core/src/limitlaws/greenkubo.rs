//! Green-Kubo variance from empirical autocovariances of one long orbit:
//! `sigma_f^2 = C(0) + 2 sum_{k=1}^L C(k)`.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GkError {
    #[error("series mean {mean:.3e} exceeds 3 standard errors ({se:.3e}); center the observable")]
    NonCentered { mean: f64, se: f64 },
    #[error("series of length {0} too short for lag {1}")]
    TooShort(usize, usize),
}

/// Autocovariances, the Green-Kubo sum and its diagnostics.
#[derive(Debug, Clone)]
pub struct GkEstimate {
    /// `C(k)` for `k = 0..=lag`.
    pub autocov: Vec<f64>,
    pub sigma2: f64,
    pub lag: usize,
    /// `sum_{k<=lag} k |C(k)|`, the first-moment condition of the
    /// autocorrelations.
    pub first_moment_sum: f64,
    /// Bartlett-style standard error for individual `C(k)`, `k >= 1`.
    pub autocov_se: f64,
    /// Standard error of `sigma2`.
    pub sigma2_se: f64,
    pub mean: f64,
    pub n: usize,
}

/// Estimate the Green-Kubo variance of a centered stationary series.
///
/// With `lag = None` the truncation point is the first `k` whose
/// autocovariance stays below two standard errors for three consecutive
/// lags (exponential decay makes the tail bias negligible past the noise
/// floor).
pub fn green_kubo(series: &[f64], lag: Option<usize>) -> Result<GkEstimate, GkError> {
    let n = series.len();
    let max_lag = lag.unwrap_or(200.min(n / 10));
    if n < 10 * (max_lag + 1) {
        return Err(GkError::TooShort(n, max_lag));
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let c: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let mut autocov = Vec::with_capacity(max_lag + 1);
    for k in 0..=max_lag {
        let s: f64 = c[..n - k].iter().zip(&c[k..]).map(|(a, b)| a * b).sum();
        autocov.push(s / n as f64);
    }
    let bartlett_se =
        ((autocov[0] * autocov[0] + 2.0 * autocov[1..].iter().map(|v| v * v).sum::<f64>())
            / n as f64)
            .sqrt();

    let chosen = match lag {
        Some(l) => l,
        None => {
            let mut quiet = 0;
            let mut l = max_lag;
            for (k, &v) in autocov.iter().enumerate().skip(1) {
                if v.abs() < 2.0 * bartlett_se {
                    quiet += 1;
                    if quiet == 3 {
                        l = k;
                        break;
                    }
                } else {
                    quiet = 0;
                }
            }
            l
        }
    };
    autocov.truncate(chosen + 1);

    let sigma2 = autocov[0] + 2.0 * autocov[1..].iter().sum::<f64>();
    let first_moment_sum =
        autocov.iter().enumerate().skip(1).map(|(k, v)| k as f64 * v.abs()).sum();
    let sigma2_se = sigma2.abs() * (2.0 * (2.0 * chosen as f64 + 1.0) / n as f64).sqrt();
    let mean_se = (sigma2.max(autocov[0]).max(0.0) / n as f64).sqrt();
    if mean.abs() > 3.0 * mean_se && mean_se > 0.0 {
        return Err(GkError::NonCentered { mean, se: mean_se });
    }
    Ok(GkEstimate {
        autocov,
        sigma2,
        lag: chosen,
        first_moment_sum,
        autocov_se: bartlett_se,
        sigma2_se,
        mean,
        n,
    })
}
