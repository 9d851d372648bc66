use alloc::vec;
use alloc::vec::Vec;

use super::line::max_deviation_unchecked;
use super::{
    build_segment, fit, FitKind, RepresentedSequence, Sampled, SegmentConfig, SegmentError,
};

/// Top-down segmentation with the default configuration for `fit_kind`
/// (regression lines stored as representing functions).
pub fn segment_recursive<S: Sampled + ?Sized>(
    series: &S,
    epsilon: f64,
    fit_kind: FitKind,
) -> Result<RepresentedSequence, SegmentError> {
    segment_recursive_with(series, epsilon, SegmentConfig::new(fit_kind))
}

/// Top-down segmentation.
///
/// For each range: fit a line, locate the sample with maximum deviation
/// (smallest index on ties) and accept the range when that deviation is
/// strictly below `epsilon`. Otherwise fit lines to the part ending just
/// before the split sample and the part starting just after it, give the split
/// sample to the side whose line is closer to it (left on ties) and continue
/// on both sides. Ranges of one or two samples are always accepted.
///
/// Regression lines can peak at a range endpoint; the split then moves to the
/// interior sample with maximum deviation so neither side is empty.
pub fn segment_recursive_with<S: Sampled + ?Sized>(
    series: &S,
    epsilon: f64,
    cfg: SegmentConfig,
) -> Result<RepresentedSequence, SegmentError> {
    if series.is_empty() {
        return Err(SegmentError::Empty);
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(SegmentError::InvalidEpsilon(epsilon));
    }

    let mut segments = Vec::new();
    // explicit stack, left part pushed last so segments come out in order
    let mut pending = vec![(0, series.len() - 1)];
    while let Some((start, end)) = pending.pop() {
        match split(series, start, end, epsilon, cfg.fit_kind) {
            None => segments.push(build_segment(series, start, end, cfg)),
            Some(left_end) => {
                pending.push((left_end + 1, end));
                pending.push((start, left_end));
            }
        }
    }

    RepresentedSequence::new(
        series.source_id(),
        series.len(),
        epsilon,
        cfg.fit_kind,
        segments,
        None,
    )
}

/// Last index of the left part, or `None` when `start..=end` is accepted whole.
fn split<S: Sampled + ?Sized>(
    series: &S,
    start: usize,
    end: usize,
    epsilon: f64,
    kind: FitKind,
) -> Option<usize> {
    if end - start < 2 {
        return None;
    }
    let line = fit(series, kind, start, end);
    let (mut at, dev) = max_deviation_unchecked(series, start, end, &line);
    if dev < epsilon {
        return None;
    }
    if at == start || at == end {
        at = max_deviation_unchecked(series, start + 1, end - 1, &line).0;
    }

    let left = fit(series, kind, start, at - 1);
    let right = fit(series, kind, at + 1, end);
    let (x, y) = (series.position(at), series.value(at));
    let to_left = (left.eval(x) - y).abs();
    let to_right = (right.eval(x) - y).abs();
    if to_left <= to_right {
        Some(at)
    } else {
        Some(at - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segment::{LinearFunction, RepLine};
    use crate::TimeSeries;

    fn ts(values: &[f64]) -> TimeSeries {
        TimeSeries::new("t", values.to_vec()).unwrap()
    }

    fn spans(rep: &RepresentedSequence) -> Vec<(usize, usize)> {
        rep.segments().iter().map(|s| (s.start, s.end)).collect()
    }

    #[test]
    fn linear_series_is_one_segment() {
        let s = ts(&[1.0, 1.5, 2.0, 2.5, 3.0, 3.5]);
        for eps in [1e-6, 0.1, 10.0] {
            let rep = segment_recursive(&s, eps, FitKind::Interpolation).unwrap();
            assert_eq!(spans(&rep), vec![(0, 5)]);
            let rep = segment_recursive(&s, eps, FitKind::Regression).unwrap();
            assert_eq!(spans(&rep), vec![(0, 5)]);
        }
    }

    #[test]
    fn tent_splits_and_peak_goes_left() {
        // root line y=0, peak at 2 with deviation 2; both side lines predict 2 at t=2
        let s = ts(&[0.0, 1.0, 2.0, 1.0, 0.0]);
        let rep = segment_recursive(&s, 0.5, FitKind::Interpolation).unwrap();
        assert_eq!(spans(&rep), vec![(0, 2), (3, 4)]);
        assert_eq!(rep.segments()[0].break_line, LinearFunction::new(1.0, 0.0));
        assert_eq!(rep.segments()[0].max_dev, 0.0);
    }

    #[test]
    fn split_point_joins_the_closer_side() {
        // the drop at index 3 sits on the right-hand line, not the left one
        let s = ts(&[0.0, 1.0, 2.0, 10.0, 9.0, 8.0, 7.0]);
        let rep = segment_recursive(&s, 0.5, FitKind::Interpolation).unwrap();
        assert_eq!(rep.breakpoints(), vec![3]);
    }

    #[test]
    fn deviation_equal_to_epsilon_splits() {
        let s = ts(&[0.0, 1.0, 0.0]);
        let rep = segment_recursive(&s, 1.0, FitKind::Interpolation).unwrap();
        assert_eq!(rep.segments().len(), 2);
        let rep = segment_recursive(&s, 1.0 + 1e-12, FitKind::Interpolation).unwrap();
        assert_eq!(rep.segments().len(), 1);
    }

    #[test]
    fn short_series_are_accepted() {
        let rep = segment_recursive(&ts(&[3.0]), 0.1, FitKind::Interpolation).unwrap();
        assert_eq!(spans(&rep), vec![(0, 0)]);
        let rep = segment_recursive(&ts(&[3.0, -9.0]), 0.1, FitKind::Regression).unwrap();
        assert_eq!(spans(&rep), vec![(0, 1)]);
    }

    #[test]
    fn invalid_epsilon() {
        let s = ts(&[0.0, 1.0]);
        for eps in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                segment_recursive(&s, eps, FitKind::Interpolation),
                Err(SegmentError::InvalidEpsilon(_))
            ));
        }
    }

    #[test]
    fn regression_never_splits_at_an_endpoint() {
        // regression line of a step deviates most at the ends
        let s = ts(&[0.0, 0.0, 0.0, 0.0, 5.0, 5.0, 5.0, 5.0, 5.0, 20.0]);
        let rep = segment_recursive(&s, 0.5, FitKind::Regression).unwrap();
        for seg in rep.segments() {
            assert!(seg.len() <= 2 || seg.max_dev < 0.5);
        }
        assert_eq!(rep.segments().last().unwrap().end, 9);
    }

    #[test]
    fn rep_line_choice() {
        let s = ts(&[0.0, 1.0, 3.0, 2.0, 4.0, 5.0]);
        let eps = 10.0;
        let reg = segment_recursive(&s, eps, FitKind::Interpolation).unwrap();
        let seg = reg.segments()[0];
        assert_eq!(seg.break_line, LinearFunction::new(1.0, 0.0));
        assert_ne!(seg.rep_line, seg.break_line);
        let cfg = SegmentConfig::new(FitKind::Interpolation).with_rep_line(RepLine::BreakLine);
        let brk = segment_recursive_with(&s, eps, cfg).unwrap();
        assert_eq!(brk.segments()[0].rep_line, brk.segments()[0].break_line);
    }
}
