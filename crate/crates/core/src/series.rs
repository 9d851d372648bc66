//! Raw sequences and preprocessing.

use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised while building or preprocessing a [`TimeSeries`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("series is empty")]
    Empty,
    #[error("sample {index} is not finite")]
    NonFinite { index: usize },
    #[error("series has {len} samples, at least 2 are required")]
    TooShort { len: usize },
    #[error("all samples are equal, variance is zero")]
    DegenerateVariance,
    #[error("window {window} must be odd and within 1..={len}")]
    BadWindow { window: usize, len: usize },
    #[error("normalization std must be finite and positive, got {std}")]
    InvalidParams { mean: f64, std: f64 },
}

/// An ordered run of finite samples; sample `k` sits at time index `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    id: String,
    samples: Vec<f64>,
}

impl TimeSeries {
    pub fn new(id: impl Into<String>, samples: Vec<f64>) -> Result<Self, SeriesError> {
        if samples.is_empty() {
            return Err(SeriesError::Empty);
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(SeriesError::NonFinite { index });
        }
        Ok(Self {
            id: id.into(),
            samples,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; kept for the `len`/`is_empty` pairing.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// Same samples under a different id.
    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    /// Applies `f` to every sample, rejecting non-finite results.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self, SeriesError> {
        Self::new(
            self.id.clone(),
            self.samples.iter().map(|&v| f(v)).collect(),
        )
    }
}

/// Mean and standard deviation used to map a series to zero mean and unit variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationParams {
    mean: f64,
    std: f64,
}

impl NormalizationParams {
    pub fn new(mean: f64, std: f64) -> Result<Self, SeriesError> {
        if !mean.is_finite() || !std.is_finite() || std <= 0.0 {
            return Err(SeriesError::InvalidParams { mean, std });
        }
        Ok(Self { mean, std })
    }

    pub fn identity() -> Self {
        Self {
            mean: 0.0,
            std: 1.0,
        }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn std(&self) -> f64 {
        self.std
    }

    /// `(x - mean) / std`
    pub fn apply(&self, x: f64) -> f64 {
        (x - self.mean) / self.std
    }

    /// `x * std + mean`
    pub fn invert(&self, x: f64) -> f64 {
        x * self.std + self.mean
    }

    /// Re-applies the forward map to a raw series.
    pub fn apply_series(&self, series: &TimeSeries) -> Result<TimeSeries, SeriesError> {
        series.map(|v| self.apply(v))
    }
}

/// Rescales `series` to population mean 0 and population variance 1.
///
/// Constant series are rejected rather than mapped to zeros.
pub fn normalize(series: &TimeSeries) -> Result<(TimeSeries, NormalizationParams), SeriesError> {
    let samples = series.samples();
    if samples.len() < 2 {
        return Err(SeriesError::TooShort { len: samples.len() });
    }
    if samples.iter().all(|&v| v == samples[0]) {
        return Err(SeriesError::DegenerateVariance);
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples
        .iter()
        .map(|&v| (v - mean) * (v - mean))
        .sum::<f64>()
        / n;
    let std = libm::sqrt(var);
    if !(std > 0.0) || !std.is_finite() {
        return Err(SeriesError::DegenerateVariance);
    }
    let params = NormalizationParams { mean, std };
    Ok((params.apply_series(series)?, params))
}

/// Inverse of [`normalize`] for the given parameters.
pub fn denormalize(series: &TimeSeries, params: &NormalizationParams) -> TimeSeries {
    let samples = series.samples().iter().map(|&v| params.invert(v)).collect();
    TimeSeries {
        id: series.id.clone(),
        samples,
    }
}

/// Centered moving average over an odd `window`; edge windows are truncated.
///
/// Every output value is clamped to the min/max of its own window so that
/// rounding can never push it outside the input range.
pub fn smooth(series: &TimeSeries, window: usize) -> Result<TimeSeries, SeriesError> {
    let samples = series.samples();
    let len = samples.len();
    if window == 0 || window.is_multiple_of(2) || window > len {
        return Err(SeriesError::BadWindow { window, len });
    }
    if window == 1 {
        return Ok(series.clone());
    }
    let half = window / 2;
    let smoothed = (0..len)
        .map(|k| {
            let lo = k.saturating_sub(half);
            let hi = (k + half).min(len - 1);
            let part = &samples[lo..=hi];
            let (min, max) = part
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                    (a.min(v), b.max(v))
                });
            let mean = part.iter().sum::<f64>() / part.len() as f64;
            mean.clamp(min, max)
        })
        .collect();
    Ok(TimeSeries {
        id: series.id.clone(),
        samples: smoothed,
    })
}
