//! Peak records, peak-to-peak intervals and the interval inverted file.
//!
//! A peak is a rising segment immediately followed by a falling one. Of the two
//! samples at the junction (end of the rise, start of the descent) the higher
//! one marks the peak. Successive peak times give the interval list of a
//! sequence, and the [`IntervalIndex`] maps each interval length to the ids of
//! the sequences containing it.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::segment::{RepresentedSequence, Segment};
use crate::series::TimeSeries;
use crate::slope::{signature, SlopeConfig, Symbol};

/// Admissible interval lengths when none are configured.
pub const DEFAULT_INTERVAL_BOUNDS: (u64, u64) = (20, 2000);

/// A `(time, amplitude)` pair read from the source samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub time: usize,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakRecord {
    /// Index of the rising segment; the descent is the next one.
    pub segment_index: usize,
    pub rising: Segment,
    pub descending: Segment,
    pub r_start: SamplePoint,
    pub r_end: SamplePoint,
    pub d_start: SamplePoint,
    pub d_end: SamplePoint,
    pub peak_time: usize,
    pub peak_amplitude: f64,
}

/// One record per `P` symbol directly followed by `N`.
///
/// Boundary amplitudes come from `series`, which must be the sequence `rep`
/// was built from (in the same units). When the two junction samples are
/// equal the end of the rise is taken.
///
/// # Panics
///
/// When `series` is shorter than `rep`.
pub fn find_peaks(
    rep: &RepresentedSequence,
    series: &TimeSeries,
    cfg: &SlopeConfig,
) -> Vec<PeakRecord> {
    assert!(
        series.len() >= rep.len(),
        "series does not cover the representation"
    );
    let samples = series.samples();
    let point = |time: usize| SamplePoint {
        time,
        amplitude: samples[time],
    };
    let sig = signature(rep, cfg);
    let segments = rep.segments();

    sig.symbols()
        .windows(2)
        .enumerate()
        .filter(|(_, pair)| pair == &[Symbol::P, Symbol::N])
        .map(|(k, _)| {
            let (rising, descending) = (segments[k], segments[k + 1]);
            let r_end = point(rising.end);
            let d_start = point(descending.start);
            let top = if d_start.amplitude > r_end.amplitude {
                d_start
            } else {
                r_end
            };
            PeakRecord {
                segment_index: k,
                rising,
                descending,
                r_start: point(rising.start),
                r_end,
                d_start,
                d_end: point(descending.end),
                peak_time: top.time,
                peak_amplitude: top.amplitude,
            }
        })
        .collect()
}

/// Differences between successive peak times.
pub fn intervals(peaks: &[PeakRecord]) -> Vec<u64> {
    peaks
        .windows(2)
        .map(|w| (w[1].peak_time - w[0].peak_time) as u64)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalIndexError {
    #[error("sequence `{id}` has interval {value} outside {min}..={max}")]
    IntervalOutOfBounds {
        id: String,
        value: u64,
        min: u64,
        max: u64,
    },
    #[error("invalid interval bounds {min}..={max}")]
    InvalidBounds { min: u64, max: u64 },
}

/// Inverted file from interval length to the sorted ids having that interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalIndex {
    bounds: (u64, u64),
    postings: BTreeMap<u64, Vec<String>>,
}

impl IntervalIndex {
    /// Empty index accepting intervals in `min..=max`.
    pub fn new(bounds: (u64, u64)) -> Result<Self, IntervalIndexError> {
        let (min, max) = bounds;
        if min == 0 || min > max {
            return Err(IntervalIndexError::InvalidBounds { min, max });
        }
        Ok(Self {
            bounds,
            postings: BTreeMap::new(),
        })
    }

    /// Builds the index for `(id, intervals)` pairs.
    pub fn build<I, S>(db: I, bounds: (u64, u64)) -> Result<Self, IntervalIndexError>
    where
        I: IntoIterator<Item = (S, Vec<u64>)>,
        S: Into<String>,
    {
        let mut index = Self::new(bounds)?;
        for (id, lengths) in db {
            index.add(id.into(), &lengths)?;
        }
        Ok(index)
    }

    /// Rebuilds an index from stored postings, checking bounds and ordering.
    pub fn from_postings(
        bounds: (u64, u64),
        postings: BTreeMap<u64, Vec<String>>,
    ) -> Result<Self, IntervalIndexError> {
        let mut index = Self::new(bounds)?;
        for (length, ids) in postings {
            for id in ids {
                index.add(id, &[length])?;
            }
        }
        Ok(index)
    }

    fn add(&mut self, id: String, lengths: &[u64]) -> Result<(), IntervalIndexError> {
        let (min, max) = self.bounds;
        if let Some(&value) = lengths.iter().find(|&&l| l < min || l > max) {
            return Err(IntervalIndexError::IntervalOutOfBounds {
                id,
                value,
                min,
                max,
            });
        }
        for &length in lengths {
            let ids = self.postings.entry(length).or_default();
            if let Err(at) = ids.binary_search(&id) {
                ids.insert(at, id.clone());
            }
        }
        Ok(())
    }

    pub fn bounds(&self) -> (u64, u64) {
        self.bounds
    }

    pub fn postings(&self) -> &BTreeMap<u64, Vec<String>> {
        &self.postings
    }

    pub fn is_empty(&self) -> bool {
        self.postings.is_empty()
    }

    /// Sorted, duplicate-free ids having an interval in `n - delta ..= n + delta`.
    pub fn query(&self, n: u64, delta: u64) -> Vec<String> {
        let lo = n.saturating_sub(delta);
        let hi = n.saturating_add(delta);
        let mut ids: Vec<String> = self
            .postings
            .range(lo..=hi)
            .flat_map(|(_, ids)| ids.iter().cloned())
            .collect();
        ids.sort();
        ids.dedup();
        ids
    }
}
