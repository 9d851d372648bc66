use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{DpConfig, FitKind, LinearFunction, SegmentError};
use crate::series::{NormalizationParams, TimeSeries};

/// One contiguous piece of a segmented sequence, `start..=end` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    /// Line used while splitting; `max_dev` is measured against it.
    pub break_line: LinearFunction,
    /// Stored representing function.
    pub rep_line: LinearFunction,
    pub max_dev: f64,
    pub fit_kind: FitKind,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, index: usize) -> bool {
        self.start <= index && index <= self.end
    }
}

/// The compact form of a sequence: segments tiling `0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentedSequence {
    source_id: String,
    len: usize,
    epsilon: f64,
    fit_kind: FitKind,
    segments: Vec<Segment>,
    norm: Option<NormalizationParams>,
}

impl RepresentedSequence {
    /// Validates the tiling, the per-segment numbers and the epsilon contract.
    pub fn new(
        source_id: impl Into<String>,
        len: usize,
        epsilon: f64,
        fit_kind: FitKind,
        segments: Vec<Segment>,
        norm: Option<NormalizationParams>,
    ) -> Result<Self, SegmentError> {
        let rep = Self {
            source_id: source_id.into(),
            len,
            epsilon,
            fit_kind,
            segments,
            norm,
        };
        rep.validate()?;
        Ok(rep)
    }

    fn validate(&self) -> Result<(), SegmentError> {
        let bad = |msg: String| Err(SegmentError::InvalidRepresentation(msg));
        if self.len == 0 {
            return bad("length is zero".into());
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return bad(format!(
                "epsilon {} is not finite and positive",
                self.epsilon
            ));
        }
        let mut next = 0;
        for (k, seg) in self.segments.iter().enumerate() {
            if seg.start != next || seg.start > seg.end {
                return bad(format!(
                    "segment {k} spans {}..={} but should start at {next}",
                    seg.start, seg.end
                ));
            }
            if !seg.break_line.is_finite() || !seg.rep_line.is_finite() {
                return bad(format!("segment {k} has a non-finite line"));
            }
            if !(seg.max_dev.is_finite() && seg.max_dev >= 0.0) {
                return bad(format!("segment {k} has invalid max_dev {}", seg.max_dev));
            }
            if seg.fit_kind == FitKind::Interpolation
                && seg.len() >= 3
                && seg.max_dev >= self.epsilon
            {
                return bad(format!(
                    "segment {k} deviates by {} which is not below epsilon {}",
                    seg.max_dev, self.epsilon
                ));
            }
            next = seg.end + 1;
        }
        if next != self.len {
            return bad(format!(
                "segments cover 0..{next} instead of 0..{}",
                self.len
            ));
        }
        Ok(())
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn fit_kind(&self) -> FitKind {
        self.fit_kind
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn norm(&self) -> Option<&NormalizationParams> {
        self.norm.as_ref()
    }

    pub fn with_norm(mut self, norm: Option<NormalizationParams>) -> Self {
        self.norm = norm;
        self
    }

    /// Start index of every segment but the first.
    pub fn breakpoints(&self) -> Vec<usize> {
        self.segments.iter().skip(1).map(|s| s.start).collect()
    }

    /// Largest `max_dev` over all segments.
    pub fn max_deviation(&self) -> f64 {
        self.segments.iter().map(|s| s.max_dev).fold(0.0, f64::max)
    }

    /// Index of the segment covering sample `index`.
    pub fn segment_at(&self, index: usize) -> Option<usize> {
        if index >= self.len {
            return None;
        }
        Some(self.segments.partition_point(|s| s.end < index))
    }
}

/// `a·(#segments) + b·Σ max_dev`, summing deviations in segment order.
pub fn cost(rep: &RepresentedSequence, cfg: &DpConfig) -> f64 {
    let total_dev: f64 = rep.segments.iter().map(|s| s.max_dev).sum();
    cfg.a() * rep.segments.len() as f64 + cfg.b() * total_dev
}

/// Evaluates each segment's representing line at the integer positions it covers.
///
/// Values are in the units the sequence was segmented in.
pub fn reconstruct(rep: &RepresentedSequence) -> TimeSeries {
    let samples = rep
        .segments
        .iter()
        .flat_map(|seg| (seg.start..=seg.end).map(move |t| seg.rep_line.eval(t as f64)))
        .collect();
    TimeSeries::new(rep.source_id.clone(), samples)
        .expect("finite representing lines evaluate to finite samples")
}

/// `len / (params_per_segment · #segments)`.
///
/// # Panics
///
/// When `params_per_segment` is zero.
pub fn compression_ratio(rep: &RepresentedSequence, params_per_segment: usize) -> f64 {
    assert!(
        params_per_segment >= 1,
        "params_per_segment must be at least 1"
    );
    rep.len as f64 / (params_per_segment * rep.segments.len()) as f64
}
