use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::line::{interpolation_unchecked, max_deviation_unchecked};
use super::{
    build_segment, FitKind, RepLine, RepresentedSequence, Sampled, SegmentConfig, SegmentError,
};

/// Weights of the segmentation cost `a·(#segments) + b·Σ max_dev`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpConfig {
    a: f64,
    b: f64,
}

impl DpConfig {
    pub fn new(a: f64, b: f64) -> Result<Self, SegmentError> {
        let ok = |w: f64| w.is_finite() && w >= 0.0;
        if !ok(a) || !ok(b) || a + b <= 0.0 {
            return Err(SegmentError::InvalidCost { a, b });
        }
        Ok(Self { a, b })
    }

    /// Weight per segment.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Weight per unit of deviation.
    pub fn b(&self) -> f64 {
        self.b
    }
}

/// Globally cost-minimal segmentation, with regression representing lines.
pub fn segment_dp<S: Sampled + ?Sized>(
    series: &S,
    cfg: &DpConfig,
) -> Result<RepresentedSequence, SegmentError> {
    segment_dp_with(series, cfg, RepLine::default())
}

/// Globally cost-minimal segmentation under [`cost`](super::cost).
///
/// Each candidate segment is charged the maximum deviation from the line
/// through its end samples, the same quantity interpolation splitting records.
/// Equal costs prefer fewer segments, then the lexicographically smallest
/// breakpoint list among paths built from optimal prefixes.
///
/// The deviation sums are minimized per segment count and accumulated in
/// segment order, so the returned cost is bit-identical to the minimum of
/// [`cost`](super::cost) over every contiguous segmentation.
///
/// The representation's epsilon is the smallest value above every segment
/// deviation, i.e. the tightest tolerance the result satisfies.
pub fn segment_dp_with<S: Sampled + ?Sized>(
    series: &S,
    cfg: &DpConfig,
    rep_line: RepLine,
) -> Result<RepresentedSequence, SegmentError> {
    let n = series.len();
    if n == 0 {
        return Err(SegmentError::Empty);
    }

    let devs = DeviationTable::build(series);
    let (a, b) = (cfg.a, cfg.b);

    // layer[j]: least deviation sum covering samples 0..j with `k` segments
    let mut layer: Vec<f64> = (0..=n)
        .map(|j| {
            if j == 0 {
                f64::INFINITY
            } else {
                devs.get(0, j - 1)
            }
        })
        .collect();
    // parents[k - 1][j]: start of the last segment in the best k-segment cover of 0..j
    let mut parents: Vec<Vec<usize>> = vec![vec![0; n + 1]];
    let mut best = (a + b * layer[n], 1);

    for k in 2..=n {
        if best.0 == 0.0 || best.0 <= a * k as f64 {
            break;
        }
        let mut next = vec![f64::INFINITY; n + 1];
        let mut parent = vec![0; n + 1];
        for j in k..=n {
            for i in (k - 1)..j {
                let candidate = layer[i] + devs.get(i, j - 1);
                let better = match candidate.partial_cmp(&next[j]) {
                    Some(Ordering::Less) => true,
                    Some(Ordering::Equal) => {
                        extended(&parents, k - 1, i) < extended(&parents, k - 1, parent[j])
                    }
                    _ => false,
                };
                if better {
                    next[j] = candidate;
                    parent[j] = i;
                }
            }
        }
        parents.push(parent);
        layer = next;
        let total = a * k as f64 + b * layer[n];
        if total < best.0 {
            best = (total, k);
        }
    }

    let starts = breakpoints(&parents, best.1, n);
    let seg_cfg = SegmentConfig::new(FitKind::Interpolation).with_rep_line(rep_line);
    let mut segments = Vec::with_capacity(starts.len() + 1);
    let mut start = 0;
    for end in starts.iter().copied().chain(core::iter::once(n)) {
        let seg = build_segment(series, start, end - 1, seg_cfg);
        debug_assert_eq!(seg.max_dev.to_bits(), devs.get(start, end - 1).to_bits());
        segments.push(seg);
        start = end;
    }
    let epsilon = segments
        .iter()
        .map(|s| s.max_dev)
        .fold(0.0, f64::max)
        .next_up();

    RepresentedSequence::new(
        series.source_id(),
        n,
        epsilon,
        FitKind::Interpolation,
        segments,
        None,
    )
}

/// Breakpoints (segment starts after 0) of the best `k`-segment cover of `0..j`.
fn breakpoints(parents: &[Vec<usize>], k: usize, j: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let (mut k, mut j) = (k, j);
    while k > 1 {
        let i = parents[k - 1][j];
        out.push(i);
        j = i;
        k -= 1;
    }
    out.reverse();
    out
}

/// Breakpoints of the best `k`-segment cover of `0..i` followed by `i`.
fn extended(parents: &[Vec<usize>], k: usize, i: usize) -> Vec<usize> {
    let mut out = breakpoints(parents, k, i);
    out.push(i);
    out
}

/// Interpolation max deviation for every range `i..=j`, row-major upper triangle.
struct DeviationTable {
    n: usize,
    values: Vec<f64>,
}

impl DeviationTable {
    fn build<S: Sampled + ?Sized>(series: &S) -> Self {
        let n = series.len();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let line = interpolation_unchecked(series, i, j);
                values[i * n + j] = max_deviation_unchecked(series, i, j, &line).1;
            }
        }
        Self { n, values }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segment::{cost, segment_recursive};
    use crate::TimeSeries;

    fn ts(values: &[f64]) -> TimeSeries {
        TimeSeries::new("t", values.to_vec()).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(DpConfig::new(0.0, 0.0).is_err());
        assert!(DpConfig::new(-1.0, 1.0).is_err());
        assert!(DpConfig::new(1.0, f64::NAN).is_err());
        assert!(DpConfig::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn constant_series_is_one_segment() {
        let cfg = DpConfig::new(1.0, 1.0).unwrap();
        let rep = segment_dp(&ts(&[2.0; 9]), &cfg).unwrap();
        assert_eq!(rep.segments().len(), 1);
        assert_eq!(cost(&rep, &cfg), 1.0);
    }

    #[test]
    fn tent_beats_single_segment() {
        let s = ts(&[0.0, 1.0, 2.0, 1.0, 0.0]);
        let cfg = DpConfig::new(1.0, 10.0).unwrap();
        let rep = segment_dp(&s, &cfg).unwrap();
        assert!(cost(&rep, &cfg) < 1.0 + 10.0 * 2.0);
        // [0..1][2..4] and [0..2][3..4] are both collinear halves; earliest wins
        assert_eq!(cost(&rep, &cfg), 2.0);
        assert_eq!(rep.breakpoints(), vec![2]);
    }

    #[test]
    fn zero_segment_weight_still_prefers_fewer_segments() {
        let s = ts(&[0.0, 1.0, 2.0, 1.0, 0.0]);
        let cfg = DpConfig::new(0.0, 1.0).unwrap();
        let rep = segment_dp(&s, &cfg).unwrap();
        assert_eq!(cost(&rep, &cfg), 0.0);
        assert_eq!(rep.segments().len(), 2);
    }

    #[test]
    fn never_worse_than_recursive() {
        let s = ts(&[0.0, 3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0, 5.0]);
        let cfg = DpConfig::new(1.5, 0.7).unwrap();
        let dp = segment_dp(&s, &cfg).unwrap();
        for eps in [0.5, 1.0, 2.0, 4.0] {
            let greedy = segment_recursive(&s, eps, FitKind::Interpolation).unwrap();
            assert!(cost(&dp, &cfg) <= cost(&greedy, &cfg));
        }
    }

    #[test]
    fn epsilon_is_tight() {
        let s = ts(&[0.0, 3.0, 1.0, 4.0, 1.0]);
        let rep = segment_dp(&s, &DpConfig::new(1.0, 0.1).unwrap()).unwrap();
        assert!(rep.epsilon() > rep.max_deviation());
        assert_eq!(rep.epsilon(), rep.max_deviation().next_up());
    }
}
