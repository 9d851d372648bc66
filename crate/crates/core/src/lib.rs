//! Break numeric sequences into piecewise-linear representations and query them.
//!
//! The crate is `no_std` and only needs `alloc`. It is organised around four
//! stages:
//!
//! * [`series`] holds raw sequences and their preprocessing (normalization and
//!   an optional moving-average filter).
//! * [`segment`] breaks a sequence into contiguous segments with the recursive
//!   max-deviation template, instantiated with interpolation or regression
//!   lines, plus an exact dynamic-programming segmentation used as an
//!   optimality reference.
//! * [`slope`] quantizes segment slopes into a `P`/`N`/`Z` signature and runs
//!   regular-expression shape queries against signatures.
//! * [`peaks`] extracts rise/descent peak records, peak-to-peak intervals and an
//!   inverted file answering `n ± δ` interval queries.
//!
//! File formats, the catalog and the command-line tool live in the companion
//! `seqbreak` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod peaks;
pub mod segment;
pub mod series;
pub mod slope;

pub use crate::peaks::{
    find_peaks, intervals, IntervalIndex, IntervalIndexError, PeakRecord, SamplePoint,
    DEFAULT_INTERVAL_BOUNDS,
};
pub use crate::segment::{
    compression_ratio, cost, fit_interpolation, fit_regression, max_deviation, reconstruct,
    segment_dp, segment_recursive, segment_recursive_with, DpConfig, FitKind, LinearFunction,
    PointSeries, RepLine, RepresentedSequence, Sampled, Segment, SegmentConfig, SegmentError,
};
pub use crate::series::{
    denormalize, normalize, smooth, NormalizationParams, SeriesError, TimeSeries,
};
pub use crate::slope::{
    find_occurrences, full_match, parse_pattern, signature, CompiledPattern, MatchCursor,
    Occurrence, Pattern, PatternError, SlopeConfig, SlopeSignature, Symbol, DEFAULT_PHI,
};
