//! Breaking sequences into contiguous linearly-approximated segments.
//!
//! Two segmentation strategies are provided:
//!
//! * [`segment_recursive`]: the top-down template. Fit a line to the current
//!   range, find the sample with the largest vertical deviation, stop when that
//!   deviation is below `epsilon`, otherwise split there. The split sample is
//!   attached to whichever neighbouring side's own line predicts it better
//!   (ties go left), so a breakpoint never belongs to two segments.
//! * [`segment_dp`]: exact minimization of `a·(#segments) + b·Σ max_dev` over
//!   all contiguous segmentations, O(n³).
//!
//! Both work over any [`Sampled`] source. A [`TimeSeries`](crate::TimeSeries)
//! places sample `k` at position `k`; [`PointSeries`] allows arbitrary strictly
//! increasing positions, which is what a sample inserted between two existing
//! ones needs.

mod dp;
mod line;
mod recursive;
mod repr;

use alloc::string::String;
use alloc::vec::Vec;

use crate::series::TimeSeries;

pub use dp::{segment_dp, segment_dp_with, DpConfig};
pub use line::{fit_interpolation, fit_regression, max_deviation, LinearFunction};
pub use recursive::{segment_recursive, segment_recursive_with};
pub use repr::{compression_ratio, cost, reconstruct, RepresentedSequence, Segment};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SegmentError {
    #[error("sequence is empty")]
    Empty,
    #[error("range {start}..={end} is invalid for a sequence of length {len}")]
    BadRange {
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("epsilon must be finite and positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("cost weights must be finite, non-negative and not both zero (a = {a}, b = {b})")]
    InvalidCost { a: f64, b: f64 },
    #[error("positions and values differ in length ({positions} vs {values})")]
    LengthMismatch { positions: usize, values: usize },
    #[error("point {index} is not finite")]
    NonFinite { index: usize },
    #[error("positions must be strictly increasing (at index {index})")]
    NotIncreasing { index: usize },
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
}

/// Which line family drives the splitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FitKind {
    /// Line through the first and last sample of the range.
    Interpolation,
    /// Ordinary least-squares line over the range.
    Regression,
}

impl FitKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FitKind::Interpolation => "INTERPOLATION",
            FitKind::Regression => "REGRESSION",
        }
    }
}

impl core::fmt::Display for FitKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for FitKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "INTERPOLATION" | "interp" | "interpolation" => Ok(FitKind::Interpolation),
            "REGRESSION" | "regress" | "regression" => Ok(FitKind::Regression),
            other => Err(alloc::format!("unknown fit kind `{other}`")),
        }
    }
}

/// Which line is stored as a segment's representing function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RepLine {
    /// Least-squares line of the final segment.
    #[default]
    Regression,
    /// The line the splitting used; carries the `epsilon` reconstruction bound.
    BreakLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentConfig {
    pub fit_kind: FitKind,
    pub rep_line: RepLine,
}

impl SegmentConfig {
    pub fn new(fit_kind: FitKind) -> Self {
        Self {
            fit_kind,
            rep_line: RepLine::default(),
        }
    }

    pub fn with_rep_line(mut self, rep_line: RepLine) -> Self {
        self.rep_line = rep_line;
        self
    }
}

impl Default for SegmentConfig {
    fn default() -> Self {
        Self::new(FitKind::Interpolation)
    }
}

/// A finite run of `(position, value)` samples.
pub trait Sampled {
    fn len(&self) -> usize;

    fn position(&self, k: usize) -> f64;

    fn value(&self, k: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn source_id(&self) -> &str {
        ""
    }
}

impl Sampled for TimeSeries {
    fn len(&self) -> usize {
        self.samples().len()
    }

    fn position(&self, k: usize) -> f64 {
        k as f64
    }

    fn value(&self, k: usize) -> f64 {
        self.samples()[k]
    }

    fn source_id(&self) -> &str {
        self.id()
    }
}

impl Sampled for [f64] {
    fn len(&self) -> usize {
        <[f64]>::len(self)
    }

    fn position(&self, k: usize) -> f64 {
        k as f64
    }

    fn value(&self, k: usize) -> f64 {
        self[k]
    }
}

/// Samples at explicit, strictly increasing positions.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSeries {
    id: String,
    positions: Vec<f64>,
    values: Vec<f64>,
}

impl PointSeries {
    pub fn new(
        id: impl Into<String>,
        positions: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<Self, SegmentError> {
        if positions.len() != values.len() {
            return Err(SegmentError::LengthMismatch {
                positions: positions.len(),
                values: values.len(),
            });
        }
        if values.is_empty() {
            return Err(SegmentError::Empty);
        }
        for (index, (p, v)) in positions.iter().zip(&values).enumerate() {
            if !p.is_finite() || !v.is_finite() {
                return Err(SegmentError::NonFinite { index });
            }
            if index > 0 && positions[index - 1] >= *p {
                return Err(SegmentError::NotIncreasing { index });
            }
        }
        Ok(Self {
            id: id.into(),
            positions,
            values,
        })
    }

    pub fn from_series(series: &TimeSeries) -> Self {
        Self {
            id: series.id().into(),
            positions: (0..series.len()).map(|k| k as f64).collect(),
            values: series.samples().to_vec(),
        }
    }

    /// Inserts a sample so that it lands at array index `index`.
    pub fn insert(&mut self, index: usize, position: f64, value: f64) -> Result<(), SegmentError> {
        let mut positions = self.positions.clone();
        let mut values = self.values.clone();
        if index > positions.len() {
            return Err(SegmentError::BadRange {
                start: index,
                end: index,
                len: positions.len(),
            });
        }
        positions.insert(index, position);
        values.insert(index, value);
        *self = Self::new(core::mem::take(&mut self.id), positions, values)?;
        Ok(())
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl Sampled for PointSeries {
    fn len(&self) -> usize {
        self.values.len()
    }

    fn position(&self, k: usize) -> f64 {
        self.positions[k]
    }

    fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    fn source_id(&self) -> &str {
        &self.id
    }
}

pub(crate) fn check_range<S: Sampled + ?Sized>(
    series: &S,
    start: usize,
    end: usize,
) -> Result<(), SegmentError> {
    let len = series.len();
    if start > end || end >= len {
        return Err(SegmentError::BadRange { start, end, len });
    }
    Ok(())
}

/// Line of the given family over `start..=end`.
pub(crate) fn fit<S: Sampled + ?Sized>(
    series: &S,
    kind: FitKind,
    start: usize,
    end: usize,
) -> LinearFunction {
    match kind {
        FitKind::Interpolation => line::interpolation_unchecked(series, start, end),
        FitKind::Regression => line::regression_unchecked(series, start, end),
    }
}

pub(crate) fn build_segment<S: Sampled + ?Sized>(
    series: &S,
    start: usize,
    end: usize,
    cfg: SegmentConfig,
) -> Segment {
    let break_line = fit(series, cfg.fit_kind, start, end);
    let (_, max_dev) = line::max_deviation_unchecked(series, start, end, &break_line);
    let rep_line = match cfg.rep_line {
        RepLine::Regression if cfg.fit_kind == FitKind::Regression => break_line,
        RepLine::Regression => line::regression_unchecked(series, start, end),
        RepLine::BreakLine => break_line,
    };
    Segment {
        start,
        end,
        break_line,
        rep_line,
        max_dev,
        fit_kind: cfg.fit_kind,
    }
}
