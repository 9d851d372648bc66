use proptest::prelude::*;
use seqbreak_core::*;

fn series(values: Vec<f64>) -> TimeSeries {
    TimeSeries::new("p", values).unwrap()
}

fn values(min_len: usize, max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0..50.0f64, min_len..max_len)
}

fn spans(rep: &RepresentedSequence) -> Vec<(usize, usize)> {
    rep.segments().iter().map(|s| (s.start, s.end)).collect()
}

fn assert_tiles(rep: &RepresentedSequence, n: usize) {
    let segs = rep.segments();
    assert_eq!(segs[0].start, 0);
    assert_eq!(segs.last().unwrap().end, n - 1);
    for w in segs.windows(2) {
        assert_eq!(w[1].start, w[0].end + 1);
    }
}

proptest! {
    #[test]
    fn normalize_canonicalizes_shift_and_scale(
        v in values(2, 60),
        a in 0.1..20.0f64,
        c in -100.0..100.0f64,
    ) {
        prop_assume!(v.iter().any(|&x| (x - v[0]).abs() > 1e-3));
        let (base, _) = normalize(&series(v.clone())).unwrap();
        let moved = series(v.iter().map(|x| a * x + c).collect());
        let (out, _) = normalize(&moved).unwrap();
        for (x, y) in base.samples().iter().zip(out.samples()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        let n = out.len() as f64;
        let mean = out.samples().iter().sum::<f64>() / n;
        let var = out.samples().iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        prop_assert!(mean.abs() < 1e-9);
        prop_assert!((var - 1.0).abs() < 1e-9);
    }

    #[test]
    fn denormalize_inverts_normalize(v in values(2, 80)) {
        prop_assume!(v.iter().any(|&x| x != v[0]));
        let s = series(v);
        let (n, p) = normalize(&s).unwrap();
        for (x, y) in denormalize(&n, &p).samples().iter().zip(s.samples()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn smooth_keeps_length_and_range(v in values(1, 60), w in 0usize..30) {
        let window = 2 * w + 1;
        prop_assume!(window <= v.len());
        let s = series(v.clone());
        let out = smooth(&s, window).unwrap();
        prop_assert_eq!(out.len(), v.len());
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(out.samples().iter().all(|&x| lo <= x && x <= hi));
    }

    #[test]
    fn recursive_output_is_a_valid_tiling(v in values(1, 120), eps in 0.05..30.0f64, regress in any::<bool>()) {
        let kind = if regress { FitKind::Regression } else { FitKind::Interpolation };
        let s = series(v.clone());
        let rep = segment_recursive(&s, eps, kind).unwrap();
        assert_tiles(&rep, v.len());
        for seg in rep.segments() {
            prop_assert!(seg.len() <= 2 || seg.max_dev < eps);
            let line = if regress {
                fit_regression(&s, seg.start, seg.end).unwrap()
            } else {
                fit_interpolation(&s, seg.start, seg.end).unwrap()
            };
            prop_assert_eq!(seg.break_line, line);
            if !regress {
                prop_assert!((seg.break_line.eval(seg.start as f64) - v[seg.start]).abs() < 1e-9);
                prop_assert!((seg.break_line.eval(seg.end as f64) - v[seg.end]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn break_line_reconstruction_is_within_epsilon(v in values(1, 120), eps in 0.05..30.0f64) {
        let s = series(v.clone());
        let cfg = SegmentConfig::new(FitKind::Interpolation).with_rep_line(RepLine::BreakLine);
        let rep = segment_recursive_with(&s, eps, cfg).unwrap();
        let back = reconstruct(&rep);
        for (x, y) in back.samples().iter().zip(&v) {
            prop_assert!((x - y).abs() < eps);
        }
    }

    #[test]
    fn amplitude_shift_keeps_breakpoints_and_signature(
        v in values(3, 100),
        eps in 0.5..20.0f64,
        c in -500.0..500.0f64,
    ) {
        let base = segment_recursive(&series(v.clone()), eps, FitKind::Interpolation).unwrap();
        let moved = series(v.iter().map(|x| x + c).collect());
        let shifted = segment_recursive(&moved, eps, FitKind::Interpolation).unwrap();
        prop_assert_eq!(spans(&base), spans(&shifted));
        let cfg = SlopeConfig::default();
        prop_assert_eq!(signature(&base, &cfg).to_string(), signature(&shifted, &cfg).to_string());
    }

    #[test]
    fn amplitude_scale_keeps_breakpoints_and_signature(
        v in values(3, 100),
        eps in 0.5..20.0f64,
        a in 0.05..40.0f64,
        phi in 0.0..3.0f64,
    ) {
        let base = segment_recursive(&series(v.clone()), eps, FitKind::Interpolation).unwrap();
        let scaled = series(v.iter().map(|x| a * x).collect());
        let out = segment_recursive(&scaled, a * eps, FitKind::Interpolation).unwrap();
        prop_assert_eq!(spans(&base), spans(&out));
        let sig = signature(&base, &SlopeConfig::new(phi).unwrap());
        let sig_scaled = signature(&out, &SlopeConfig::new(a * phi).unwrap());
        prop_assert_eq!(sig.to_string(), sig_scaled.to_string());
    }

    #[test]
    fn time_reversal_mirrors_breakpoints(v in values(3, 100), eps in 0.5..20.0f64) {
        let n = v.len();
        let base = segment_recursive(&series(v.clone()), eps, FitKind::Interpolation).unwrap();
        let reversed: Vec<f64> = v.iter().rev().cloned().collect();
        let rev = segment_recursive(&series(reversed), eps, FitKind::Interpolation).unwrap();
        let mut mirrored: Vec<(usize, usize)> =
            spans(&rev).iter().map(|&(a, b)| (n - 1 - b, n - 1 - a)).collect();
        mirrored.reverse();
        prop_assert_eq!(spans(&base), mirrored);
    }

    #[test]
    fn time_shift_keeps_breakpoints(v in values(3, 80), eps in 0.5..20.0f64, k in 1usize..500) {
        let n = v.len();
        let at = |offset: usize| {
            PointSeries::new("p", (0..n).map(|t| (t + offset) as f64).collect(), v.clone()).unwrap()
        };
        let base = segment_recursive(&at(0), eps, FitKind::Interpolation).unwrap();
        let moved = segment_recursive(&at(k), eps, FitKind::Interpolation).unwrap();
        prop_assert_eq!(spans(&base), spans(&moved));
    }

    #[test]
    fn dp_dominates_recursive(v in values(1, 60), eps in 0.1..20.0f64, a in 0.0..5.0f64, b in 0.01..5.0f64) {
        let s = series(v.clone());
        let cfg = DpConfig::new(a, b).unwrap();
        let dp = segment_dp(&s, &cfg).unwrap();
        assert_tiles(&dp, v.len());
        let greedy = segment_recursive(&s, eps, FitKind::Interpolation).unwrap();
        prop_assert!(cost(&dp, &cfg) <= cost(&greedy, &cfg));
    }

    #[test]
    fn signature_has_one_symbol_per_segment(v in values(1, 100), eps in 0.1..20.0f64, phi in 0.0..2.0f64) {
        let rep = segment_recursive(&series(v), eps, FitKind::Interpolation).unwrap();
        let sig = signature(&rep, &SlopeConfig::new(phi).unwrap());
        prop_assert_eq!(sig.len(), rep.segments().len());
        for (sym, seg) in sig.symbols().iter().zip(rep.segments()) {
            let slope = seg.rep_line.slope;
            let expect = if slope > phi { Symbol::P } else if slope < -phi { Symbol::N } else { Symbol::Z };
            prop_assert_eq!(*sym, expect);
        }
        let spans: Vec<(usize, usize)> = rep.segments().iter().map(|s| (s.start, s.end)).collect();
        prop_assert_eq!(sig.spans(), &spans[..]);
    }
}
