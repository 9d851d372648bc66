use super::{check_range, Sampled, SegmentError};

/// `value = slope * position + intercept`, with positions in absolute sample units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFunction {
    pub slope: f64,
    pub intercept: f64,
}

impl LinearFunction {
    pub const fn new(slope: f64, intercept: f64) -> Self {
        Self { slope, intercept }
    }

    pub const fn constant(value: f64) -> Self {
        Self::new(0.0, value)
    }

    /// Line through `(x0, y0)` and `(x1, y1)`; constant `y0` when `x0 == x1`.
    pub fn through(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        if x0 == x1 {
            return Self::constant(y0);
        }
        let slope = (y1 - y0) / (x1 - x0);
        Self::new(slope, y0 - slope * x0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    pub fn is_finite(&self) -> bool {
        self.slope.is_finite() && self.intercept.is_finite()
    }
}

/// Line through the samples at `start` and `end`.
pub fn fit_interpolation<S: Sampled + ?Sized>(
    series: &S,
    start: usize,
    end: usize,
) -> Result<LinearFunction, SegmentError> {
    check_range(series, start, end)?;
    Ok(interpolation_unchecked(series, start, end))
}

/// Least-squares line over `start..=end`. A single sample yields a constant line.
pub fn fit_regression<S: Sampled + ?Sized>(
    series: &S,
    start: usize,
    end: usize,
) -> Result<LinearFunction, SegmentError> {
    check_range(series, start, end)?;
    Ok(regression_unchecked(series, start, end))
}

/// Index and size of the largest `|line(x_t) - y_t|` over `start..=end`.
///
/// Ties resolve to the smallest index.
pub fn max_deviation<S: Sampled + ?Sized>(
    series: &S,
    start: usize,
    end: usize,
    line: &LinearFunction,
) -> Result<(usize, f64), SegmentError> {
    check_range(series, start, end)?;
    Ok(max_deviation_unchecked(series, start, end, line))
}

pub(crate) fn interpolation_unchecked<S: Sampled + ?Sized>(
    series: &S,
    start: usize,
    end: usize,
) -> LinearFunction {
    if start == end {
        return LinearFunction::constant(series.value(start));
    }
    LinearFunction::through(
        series.position(start),
        series.value(start),
        series.position(end),
        series.value(end),
    )
}

pub(crate) fn regression_unchecked<S: Sampled + ?Sized>(
    series: &S,
    start: usize,
    end: usize,
) -> LinearFunction {
    let count = (end - start + 1) as f64;
    let (sum_x, sum_y) = (start..=end).fold((0.0, 0.0), |(sx, sy), t| {
        (sx + series.position(t), sy + series.value(t))
    });
    let mean_x = sum_x / count;
    let mean_y = sum_y / count;
    let (sxx, sxy) = (start..=end).fold((0.0, 0.0), |(sxx, sxy), t| {
        let dx = series.position(t) - mean_x;
        (sxx + dx * dx, sxy + dx * (series.value(t) - mean_y))
    });
    if sxx == 0.0 {
        return LinearFunction::constant(mean_y);
    }
    let slope = sxy / sxx;
    LinearFunction::new(slope, mean_y - slope * mean_x)
}

pub(crate) fn max_deviation_unchecked<S: Sampled + ?Sized>(
    series: &S,
    start: usize,
    end: usize,
    line: &LinearFunction,
) -> (usize, f64) {
    let mut best = (start, f64::NEG_INFINITY);
    for t in start..=end {
        let dev = (line.eval(series.position(t)) - series.value(t)).abs();
        if dev > best.1 {
            best = (t, dev);
        }
    }
    best
}
