//! Shared statistical helpers: moments, regressions and KS distances.

use statrs::function::erf::erf;

/// Standard normal CDF.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
}

/// Sample mean.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Mean together with its standard error (i.i.d. assumption).
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let m = mean(xs);
    let se = (variance(xs) / xs.len() as f64).sqrt();
    (m, se)
}

/// Mean of a long correlated series with a batch-means standard error.
pub fn batch_means(series: &[f64], n_batches: usize) -> (f64, f64) {
    assert!(n_batches >= 2 && series.len() >= 2 * n_batches);
    let b = series.len() / n_batches;
    let ms: Vec<f64> = (0..n_batches).map(|i| mean(&series[i * b..(i + 1) * b])).collect();
    let m = mean(&ms);
    let se = (variance(&ms) / n_batches as f64).sqrt();
    (m, se)
}

/// Ordinary least squares of `y` on `x`.
///
/// Returns `(slope, intercept, se_slope)` with the usual homoskedastic
/// standard error for the slope.
pub fn ols(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = mean(x);
    let my = mean(y);
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let dof = (n - 2.0).max(1.0);
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    let se = (sse / dof / sxx).sqrt();
    (slope, intercept, se)
}

/// Two-sided one-sample KS statistic against a continuous CDF.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &z) in samples.iter().enumerate() {
        let c = cdf(z);
        d = d.max((c - i as f64 / n).abs());
        d = d.max(((i as f64 + 1.0) / n - c).abs());
    }
    d
}

/// KS result carrying its sample size and the comparison law tag.
#[derive(Debug, Clone)]
pub struct KsResult {
    pub statistic: f64,
    pub sample_size: usize,
    pub law: &'static str,
}

/// Streaming weighted histogram on `[-zmax, zmax]` for KS distances of
/// weighted empirical measures (atoms never sort-stored).
///
/// Bin resolution adds at most `phi'(0) * 2 zmax / bins` to the reported
/// distance; the defaults keep that below 2e-3.
#[derive(Debug, Clone)]
pub struct WeightedHistogram {
    zmax: f64,
    bins: usize,
    weights: Vec<f64>,
    below: f64,
    above: f64,
    total: f64,
    atoms: usize,
}

impl WeightedHistogram {
    pub fn new(zmax: f64, bins: usize) -> Self {
        Self { zmax, bins, weights: vec![0.0; bins], below: 0.0, above: 0.0, total: 0.0, atoms: 0 }
    }

    pub fn add(&mut self, z: f64, w: f64) {
        self.total += w;
        self.atoms += 1;
        if z < -self.zmax {
            self.below += w;
        } else if z >= self.zmax {
            self.above += w;
        } else {
            let idx = ((z + self.zmax) / (2.0 * self.zmax) * self.bins as f64) as usize;
            self.weights[idx.min(self.bins - 1)] += w;
        }
    }

    /// Subsampled CDF points `(bin edge, cumulative mass)` for plotting.
    pub fn cdf_samples(&self, stride: usize) -> Vec<(f64, f64)> {
        let width = 2.0 * self.zmax / self.bins as f64;
        let mut out = Vec::new();
        let mut cum = self.below;
        for (i, w) in self.weights.iter().enumerate() {
            cum += w;
            if i % stride.max(1) == 0 {
                out.push((-self.zmax + (i as f64 + 1.0) * width, cum / self.total));
            }
        }
        out
    }

    /// KS distance of the accumulated (normalized) measure from N(0,1).
    pub fn ks_vs_std_normal(&self) -> KsResult {
        let mut cum = self.below;
        let mut d = (self.below / self.total - std_normal_cdf(-self.zmax)).abs();
        let width = 2.0 * self.zmax / self.bins as f64;
        for (i, w) in self.weights.iter().enumerate() {
            cum += w;
            let edge = -self.zmax + (i as f64 + 1.0) * width;
            d = d.max((cum / self.total - std_normal_cdf(edge)).abs());
        }
        KsResult { statistic: d, sample_size: self.atoms, law: "N(0,1)" }
    }
}
