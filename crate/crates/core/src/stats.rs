//! Histograms, least squares and a few small descriptive helpers.

use crate::error::{Error, Result};

/// Uniform-width histogram over `[lo, hi)` with right-open bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) || bins == 0 {
            return Err(Error::InvalidRange { lo, hi, bins });
        }
        let width = (hi - lo) / bins as f64;
        let mut edges: Vec<f64> = (0..bins).map(|k| lo + k as f64 * width).collect();
        edges.push(hi);
        Ok(Histogram {
            edges,
            counts: vec![0; bins],
            underflow: 0,
            overflow: 0,
        })
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn lo(&self) -> f64 {
        self.edges[0]
    }

    pub fn hi(&self) -> f64 {
        self.edges[self.bins()]
    }

    pub fn add(&mut self, v: f64) {
        let (lo, hi) = (self.lo(), self.hi());
        if v < lo || v.is_nan() {
            self.underflow += 1;
        } else if v >= hi {
            self.overflow += 1;
        } else {
            let b = self.bins();
            let mut k = (((v - lo) / (hi - lo)) * b as f64) as usize;
            // Guard against rounding at interior edges.
            k = k.min(b - 1);
            if v < self.edges[k] {
                k -= 1;
            } else if k + 1 < b && v >= self.edges[k + 1] {
                k += 1;
            }
            self.counts[k] += 1;
        }
    }

    pub fn extend<I: IntoIterator<Item = f64>>(&mut self, values: I) {
        values.into_iter().for_each(|v| self.add(v));
    }

    /// Adds another histogram's counts; edges must match.
    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.edges != other.edges {
            return Err(Error::MismatchedEdges);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.underflow += other.underflow;
        self.overflow += other.overflow;
        Ok(())
    }

    pub fn in_range(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.in_range() + self.underflow + self.overflow
    }

    /// Counts normalized to unit area over the in-range values; all zeros when
    /// the histogram is empty.
    pub fn densities(&self) -> Vec<f64> {
        let total = self.in_range();
        if total == 0 {
            return vec![0.0; self.bins()];
        }
        self.counts
            .iter()
            .zip(self.edges.windows(2))
            .map(|(&c, w)| c as f64 / (total as f64 * (w[1] - w[0])))
            .collect()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }
}

pub fn histogram(values: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Histogram> {
    let mut h = Histogram::new(lo, hi, bins)?;
    h.extend(values.iter().copied());
    Ok(h)
}

/// Per-bin `100 (d_strategic - d_baseline) / d_baseline`, `None` where the
/// baseline density is zero.
pub fn percent_difference(strategic: &Histogram, baseline: &Histogram) -> Result<Vec<Option<f64>>> {
    if strategic.edges != baseline.edges {
        return Err(Error::MismatchedEdges);
    }
    Ok(strategic
        .densities()
        .into_iter()
        .zip(baseline.densities())
        .map(|(s, b)| (b != 0.0).then(|| 100.0 * (s - b) / b))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub residuals: Vec<f64>,
    pub n_points: usize,
}

/// Ordinary least squares line `y = intercept + slope x`.
pub fn ols_fit(x: &[f64], y: &[f64]) -> Result<RegressionResult> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter(format!(
            "x has {} points, y has {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let mean_x = x.iter().sum::<f64>() / n as f64;
    let mean_y = y.iter().sum::<f64>() / n as f64;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        let (dx, dy) = (xi - mean_x, yi - mean_y);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateX);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residuals: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| yi - (intercept + slope * xi))
        .collect();
    let ss_res: f64 = residuals.iter().map(|e| e * e).sum();
    let r_squared = if syy == 0.0 {
        if ss_res == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(RegressionResult {
        slope,
        intercept,
        r_squared,
        residuals,
        n_points: n,
    })
}

/// One `(x, mean y)` point per distinct `x`, sorted by `x`.
pub fn binned_mean(x: &[f64], y: &[f64]) -> Vec<(f64, f64)> {
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let key = pairs[i].0;
        let mut j = i;
        let mut sum = 0.0;
        while j < pairs.len() && pairs[j].0 == key {
            sum += pairs[j].1;
            j += 1;
        }
        out.push((key, sum / (j - i) as f64));
        i = j;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub center: f64,
    pub density: f64,
}

/// Local maxima of the 3-bin moving average of a histogram's densities.
///
/// A run of equal smoothed values counts as one mode, reported at its leftmost
/// bin, when it is strictly higher than the bins on both sides of the run. The
/// histogram ends count as lower than everything. Modes come back sorted by
/// smoothed density, highest first.
pub fn detect_modes(h: &Histogram) -> Vec<Mode> {
    let dens = h.densities();
    let b = dens.len();
    let smooth: Vec<f64> = (0..b)
        .map(|k| {
            let lo = k.saturating_sub(1);
            let hi = (k + 1).min(b - 1);
            dens[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect();
    let centers = h.centers();
    let mut modes = Vec::new();
    let mut k = 0;
    while k < b {
        let mut end = k;
        while end + 1 < b && smooth[end + 1] == smooth[k] {
            end += 1;
        }
        let left_ok = k == 0 || smooth[k - 1] < smooth[k];
        let right_ok = end + 1 == b || smooth[end + 1] < smooth[k];
        if left_ok && right_ok && smooth[k] > 0.0 {
            modes.push(Mode {
                center: centers[k],
                density: smooth[k],
            });
        }
        k = end + 1;
    }
    modes.sort_by(|a, b| b.density.total_cmp(&a.density).then(a.center.total_cmp(&b.center)));
    modes
}

/// Single-pass mean and population variance (Welford).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Divide-by-N variance.
    pub fn variance(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.m2 / self.count as f64
        }
    }
}

/// Gaussian maximum-likelihood fit: sample mean and divide-by-N variance.
pub fn gaussian_mle(values: &[f64]) -> Result<(f64, f64)> {
    if values.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: values.len(),
        });
    }
    let n = values.len() as f64;
    let mu = values.iter().sum::<f64>() / n;
    let sigma2 = values.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / n;
    Ok((mu, sigma2))
}
