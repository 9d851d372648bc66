//! Seeded synthetic sequences for fixtures and demos.
//!
//! Identical specs (seed included) always produce identical samples; the RNG
//! is ChaCha8, whose output is stable across platforms and crate releases.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seqbreak_core::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    /// Flat baseline with `peaks` triangular bumps spread evenly.
    Goalpost,
    /// Sharp asymmetric spikes (quick rise, slower fall, undershoot,
    /// recovery) at `first`, then at each cumulative `spacing`.
    EcgLike,
    /// Uniform noise in `baseline ± amplitude`.
    Noise,
    /// `baseline + amplitude * t`.
    Ramp,
}

impl GeneratorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorKind::Goalpost => "goalpost",
            GeneratorKind::EcgLike => "ecg_like",
            GeneratorKind::Noise => "noise",
            GeneratorKind::Ramp => "ramp",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "goalpost" => Ok(GeneratorKind::Goalpost),
            "ecg_like" | "ecg-like" | "ecg" => Ok(GeneratorKind::EcgLike),
            "noise" => Ok(GeneratorKind::Noise),
            "ramp" => Ok(GeneratorKind::Ramp),
            _ => Err(format!(
                "unknown generator `{s}` (expected goalpost, ecg_like, noise or ramp)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("bad generator spec: {0}")]
pub struct BadSpec(pub String);

/// Parameters of one generated sequence. Start from [`GeneratorSpec::new`],
/// which fills in the defaults for the kind, and override fields as needed.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub length: usize,
    /// Resting level (goalpost, ecg_like, noise) or intercept (ramp).
    pub baseline: f64,
    /// Bump height (goalpost), spike height above baseline (ecg_like),
    /// noise half-range (noise) or slope (ramp).
    pub amplitude: f64,
    /// Half-range of uniform noise added on top of the shape.
    pub noise: f64,
    /// Number of bumps (goalpost).
    pub peaks: usize,
    /// Samples from baseline to the top of a bump (goalpost).
    pub half_width: usize,
    /// Time of the first spike top (ecg_like).
    pub first: usize,
    /// Distances between successive spike tops (ecg_like).
    pub spacing: Vec<usize>,
    pub seed: u64,
}

// ecg_like spike outline, in samples relative to the top and fractions of
// the amplitude: rise, a slightly lower sample after the top, the fall to an
// undershoot, and the recovery to baseline.
const SPIKE_RISE: usize = 6;
const SPIKE_SHOULDER: f64 = 0.94;
const SPIKE_FALL_END: usize = 11;
const SPIKE_UNDERSHOOT: f64 = -0.15;
const SPIKE_RECOVERY_END: usize = 26;

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind) -> Self {
        let base = Self {
            kind,
            length: 0,
            baseline: 0.0,
            amplitude: 0.0,
            noise: 0.0,
            peaks: 0,
            half_width: 0,
            first: 0,
            spacing: Vec::new(),
            seed: 0,
        };
        match kind {
            GeneratorKind::Goalpost => Self {
                length: 144,
                baseline: 37.0,
                amplitude: 5.0,
                noise: 0.1,
                peaks: 2,
                half_width: 6,
                ..base
            },
            GeneratorKind::EcgLike => Self {
                length: 512,
                baseline: -50.0,
                amplitude: 135.0,
                noise: 2.0,
                first: 132,
                spacing: vec![137, 133],
                ..base
            },
            GeneratorKind::Noise => Self {
                length: 256,
                amplitude: 1.0,
                ..base
            },
            GeneratorKind::Ramp => Self {
                length: 100,
                amplitude: 0.5,
                ..base
            },
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Times of the bump or spike tops this spec places.
    pub fn peak_times(&self) -> Vec<usize> {
        match self.kind {
            GeneratorKind::Goalpost => (0..self.peaks)
                .map(|k| (2 * k + 1) * self.length / (2 * self.peaks))
                .collect(),
            GeneratorKind::EcgLike => std::iter::once(self.first)
                .chain(self.spacing.iter().scan(self.first, |t, &d| {
                    *t += d;
                    Some(*t)
                }))
                .collect(),
            GeneratorKind::Noise | GeneratorKind::Ramp => Vec::new(),
        }
    }

    fn validate(&self) -> Result<(), BadSpec> {
        let bad = |m: String| Err(BadSpec(m));
        if self.length == 0 {
            return bad("length must be at least 1".into());
        }
        for (name, x) in [
            ("baseline", self.baseline),
            ("amplitude", self.amplitude),
            ("noise", self.noise),
        ] {
            if !x.is_finite() {
                return bad(format!("{name} must be finite"));
            }
        }
        if self.noise < 0.0 {
            return bad("noise must be non-negative".into());
        }
        match self.kind {
            GeneratorKind::Goalpost => {
                if self.amplitude <= 0.0 || self.half_width == 0 {
                    return bad("goalpost needs a positive amplitude and half-width".into());
                }
                let tops = self.peak_times();
                let w = self.half_width;
                // each bump needs its full width plus one flat sample on both sides
                let fits = tops.first().is_none_or(|&t| t > w)
                    && tops.last().is_none_or(|&t| t + w + 1 < self.length)
                    && tops.windows(2).all(|p| p[1] - p[0] > 2 * w + 1);
                if !fits {
                    return bad(format!(
                        "{} bumps of half-width {w} do not fit in length {}",
                        self.peaks, self.length
                    ));
                }
            }
            GeneratorKind::EcgLike => {
                if self.amplitude <= 0.0 {
                    return bad("ecg_like needs a positive amplitude".into());
                }
                if self
                    .spacing
                    .iter()
                    .any(|&d| d <= SPIKE_RECOVERY_END + SPIKE_RISE)
                {
                    return bad(format!(
                        "spike spacing must exceed {} samples",
                        SPIKE_RECOVERY_END + SPIKE_RISE
                    ));
                }
                let tops = self.peak_times();
                if self.first < SPIKE_RISE
                    || tops.last().unwrap() + SPIKE_RECOVERY_END >= self.length
                {
                    return bad(format!(
                        "spikes at {tops:?} do not fit in length {}",
                        self.length
                    ));
                }
            }
            GeneratorKind::Noise => {
                if self.amplitude < 0.0 {
                    return bad("noise amplitude must be non-negative".into());
                }
            }
            GeneratorKind::Ramp => {}
        }
        Ok(())
    }
}

pub fn generate(spec: &GeneratorSpec, id: &str) -> Result<TimeSeries, BadSpec> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.length;
    let mut samples = match spec.kind {
        GeneratorKind::Goalpost => goalpost(spec),
        GeneratorKind::EcgLike => ecg_like(spec),
        GeneratorKind::Noise => (0..n)
            .map(|_| spec.baseline + uniform(&mut rng, spec.amplitude))
            .collect(),
        GeneratorKind::Ramp => (0..n)
            .map(|t| spec.baseline + spec.amplitude * t as f64)
            .collect(),
    };
    for x in &mut samples {
        *x += uniform(&mut rng, spec.noise);
    }
    TimeSeries::new(id, samples).map_err(|e| BadSpec(e.to_string()))
}

fn uniform(rng: &mut ChaCha8Rng, half_range: f64) -> f64 {
    if half_range == 0.0 {
        0.0
    } else {
        rng.gen_range(-half_range..=half_range)
    }
}

fn goalpost(spec: &GeneratorSpec) -> Vec<f64> {
    let w = spec.half_width as f64;
    let tops = spec.peak_times();
    (0..spec.length)
        .map(|t| {
            let bump = tops
                .iter()
                .map(|&top| (w - (t as f64 - top as f64).abs()).max(0.0) / w)
                .fold(0.0, f64::max);
            spec.baseline + spec.amplitude * bump
        })
        .collect()
}

fn ecg_like(spec: &GeneratorSpec) -> Vec<f64> {
    let a = spec.amplitude;
    // (offset from top, level as a fraction of amplitude) knots, joined linearly
    let knots = [
        (-(SPIKE_RISE as f64), 0.0),
        (0.0, 1.0),
        (1.0, SPIKE_SHOULDER),
        (SPIKE_FALL_END as f64, SPIKE_UNDERSHOOT),
        (SPIKE_RECOVERY_END as f64, 0.0),
    ];
    let mut samples = vec![spec.baseline; spec.length];
    for top in spec.peak_times() {
        for pair in knots.windows(2) {
            let ((d0, y0), (d1, y1)) = (pair[0], pair[1]);
            let (t0, t1) = ((top as f64 + d0) as usize, (top as f64 + d1) as usize);
            for t in t0..=t1 {
                let u = (t - t0) as f64 / (t1 - t0) as f64;
                samples[t] = spec.baseline + a * (y0 + u * (y1 - y0));
            }
        }
    }
    samples
}
