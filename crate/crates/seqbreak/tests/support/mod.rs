//! Fixtures and independent oracles shared by the integration tests.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqbreak_core::*;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ----------------------------------------------------------- random series

/// Random piecewise-linear walk with uniform noise, and a tolerance that
/// breaks it into a handful of segments.
pub fn wavy_series(rng: &mut ChaCha8Rng, id: &str) -> (TimeSeries, f64) {
    let n = rng.gen_range(30..150);
    let noise = rng.gen_range(0.0..1.0);
    let mut values = Vec::with_capacity(n);
    let mut y: f64 = rng.gen_range(-20.0..20.0);
    while values.len() < n {
        let len = rng.gen_range(4..30);
        let slope = rng.gen_range(-3.0..3.0);
        for _ in 0..len {
            values.push(y + rng.gen_range(-noise..=noise));
            y += slope;
        }
    }
    values.truncate(n);
    let eps = rng.gen_range(0.5..4.0);
    (TimeSeries::new(id, values).unwrap(), eps)
}

pub fn uniform_series(rng: &mut ChaCha8Rng, n: usize, id: &str) -> TimeSeries {
    TimeSeries::new(id, (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect()).unwrap()
}

pub fn spans(rep: &RepresentedSequence) -> Vec<(usize, usize)> {
    rep.segments().iter().map(|s| (s.start, s.end)).collect()
}

// ------------------------------------------------------------- table fixture

/// Printed boundary points and lines of three rise/descent pairs:
/// `(rise slope, rise intercept, r_start, r_end, descent slope, descent
/// intercept, d_start, d_end)` with points as `(time, amplitude)`.
pub type TableRow = (
    f64,
    f64,
    (usize, f64),
    (usize, f64),
    f64,
    f64,
    (usize, f64),
    (usize, f64),
);

pub const TABLE: [TableRow; 3] = [
    (
        21.333,
        -2731.0,
        (126, -43.0),
        (132, 85.0),
        -14.8,
        2045.4,
        (133, 77.0),
        (143, -71.0),
    ),
    (
        22.0,
        -5839.0,
        (263, -53.0),
        (268, 57.0),
        -15.0,
        4114.0,
        (269, 79.0),
        (279, -71.0),
    ),
    (
        26.0,
        -10373.0,
        (397, -51.0),
        (401, 53.0),
        -14.8,
        6028.6,
        (402, 79.0),
        (412, -69.0),
    ),
];

pub const TABLE_LEN: usize = 450;

/// A sequence and representation built from the table rows: each rise and
/// descent is a segment carrying the printed line, with flat stretches in
/// between joining the printed boundary points.
pub fn table_fixture() -> (TimeSeries, RepresentedSequence) {
    let mut samples = vec![f64::NAN; TABLE_LEN];
    let mut knots: Vec<(usize, f64)> = Vec::new();
    let mut slopes: Vec<(usize, usize, LinearFunction)> = Vec::new();
    for &(rs, ri, r0, r1, ds, di, d0, d1) in &TABLE {
        for (a, b, line) in [
            (r0, r1, LinearFunction::new(rs, ri)),
            (d0, d1, LinearFunction::new(ds, di)),
        ] {
            for t in a.0..=b.0 {
                samples[t] = line.eval(t as f64);
            }
            samples[a.0] = a.1;
            samples[b.0] = b.1;
            slopes.push((a.0, b.0, line));
        }
        knots.extend([r0, d1]);
    }
    // flat stretches: constant before the first rise and after the last
    // descent, straight joins in between
    let first = knots[0];
    let last = *knots.last().unwrap();
    knots.insert(0, (0, first.1));
    knots.push((TABLE_LEN - 1, last.1));
    let mut segments_at = Vec::new();
    for pair in knots.chunks(2) {
        let ((t0, y0), (t1, y1)) = (pair[0], pair[1]);
        let a = if t0 == 0 { 0 } else { t0 + 1 };
        let b = if t1 == TABLE_LEN - 1 { t1 } else { t1 - 1 };
        let line = LinearFunction::through(t0 as f64, y0, t1 as f64, y1);
        for t in a..=b {
            samples[t] = line.eval(t as f64);
        }
        segments_at.push((a, b, None));
    }
    segments_at.extend(slopes.iter().map(|&(a, b, l)| (a, b, Some(l))));
    segments_at.sort_by_key(|s| s.0);

    let series = TimeSeries::new("table", samples).unwrap();
    let segments = segments_at
        .into_iter()
        .map(|(a, b, printed)| {
            let break_line = fit_interpolation(&series, a, b).unwrap();
            Segment {
                start: a,
                end: b,
                break_line,
                rep_line: printed.unwrap_or(break_line),
                max_dev: max_deviation(&series, a, b, &break_line).unwrap().1,
                fit_kind: FitKind::Interpolation,
            }
        })
        .collect();
    let rep = RepresentedSequence::new(
        "table",
        TABLE_LEN,
        60.0,
        FitKind::Interpolation,
        segments,
        None,
    )
    .unwrap();
    (series, rep)
}

// ------------------------------------------------------------- dp oracle

/// Minimum `cost` over every contiguous segmentation, by enumeration.
pub fn enumerate_min_cost(s: &TimeSeries, cfg: &DpConfig) -> f64 {
    let n = s.len();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << (n - 1)) {
        let (mut start, mut count, mut total) = (0, 0, 0.0);
        for end in 0..n {
            if end == n - 1 || mask & (1 << end) != 0 {
                let line = fit_interpolation(s, start, end).unwrap();
                total += max_deviation(s, start, end, &line).unwrap().1;
                count += 1;
                start = end + 1;
            }
        }
        best = best.min(cfg.a() * count as f64 + cfg.b() * total);
    }
    best
}

// ------------------------------------------------------- robustness trial

/// Inserts one sample between two neighbours `l`, `l + 1` of the same
/// segment, within `epsilon` of that segment's break line at a random time
/// strictly between them, and reports whether the breakpoints survive
/// (shifted by one past the insertion).
pub fn insertion_keeps_breakpoints(
    rng: &mut ChaCha8Rng,
    series: &TimeSeries,
    eps: f64,
) -> Option<bool> {
    let kind = FitKind::Interpolation;
    let base = segment_recursive(series, eps, kind).unwrap();
    let candidates: Vec<&Segment> = base.segments().iter().filter(|s| s.len() >= 2).collect();
    if candidates.is_empty() {
        return None;
    }
    let seg = candidates[rng.gen_range(0..candidates.len())];
    let l = rng.gen_range(seg.start..seg.end);
    let t = l as f64 + rng.gen_range(0.0..1.0f64).max(1e-6);
    let u = rng.gen_range(-eps..eps) * 0.999;
    let value = seg.break_line.eval(t) + u;

    let mut points = PointSeries::from_series(series);
    points.insert(l + 1, t, value).unwrap();
    let after = segment_recursive(&points, eps, kind).unwrap();
    let expect: Vec<usize> = base
        .breakpoints()
        .into_iter()
        .map(|b| if b > l { b + 1 } else { b })
        .collect();
    Some(after.breakpoints() == expect)
}

// -------------------------------------------------------- language oracle

pub const MAX_WORD: usize = 10;

/// Base-3 code of a word (first symbol most significant).
pub fn code(word: &[Symbol]) -> u32 {
    word.iter().fold(0, |c, s| 3 * c + digit(*s))
}

fn digit(s: Symbol) -> u32 {
    match s {
        Symbol::P => 0,
        Symbol::N => 1,
        Symbol::Z => 2,
    }
}

pub const POW3: [u32; MAX_WORD + 1] = {
    let mut p = [1u32; MAX_WORD + 1];
    let mut k = 1;
    while k <= MAX_WORD {
        p[k] = p[k - 1] * 3;
        k += 1;
    }
    p
};

/// Finite language restricted to words of length <= MAX_WORD, as a sorted
/// list of codes per length plus a membership bitmap per length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Language {
    pub words: Vec<Vec<u32>>,
    pub member: Vec<Vec<bool>>,
}

impl Language {
    fn empty() -> Self {
        Self {
            words: vec![Vec::new(); MAX_WORD + 1],
            member: (0..=MAX_WORD)
                .map(|k| vec![false; POW3[k] as usize])
                .collect(),
        }
    }

    fn insert(&mut self, len: usize, c: u32) {
        if !self.member[len][c as usize] {
            self.member[len][c as usize] = true;
            self.words[len].push(c);
        }
    }

    fn finish(mut self) -> Self {
        for w in &mut self.words {
            w.sort_unstable();
        }
        self
    }

    pub fn contains(&self, word: &[Symbol]) -> bool {
        word.len() <= MAX_WORD && self.member[word.len()][code(word) as usize]
    }

    pub fn literal(s: Symbol) -> Self {
        let mut l = Self::empty();
        l.insert(1, digit(s));
        l.finish()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut l = Self::empty();
        for (len, (a, b)) in self.words.iter().zip(&other.words).enumerate() {
            for &c in a.iter().chain(b) {
                l.insert(len, c);
            }
        }
        l.finish()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut l = Self::empty();
        for a in 0..=MAX_WORD {
            for b in 0..=MAX_WORD - a {
                for &u in &self.words[a] {
                    for &v in &other.words[b] {
                        l.insert(a + b, u * POW3[b] + v);
                    }
                }
            }
        }
        l.finish()
    }

    /// Words that split into one or more non-empty words of `self`, plus the
    /// empty word; built by increasing length.
    pub fn star(&self) -> Self {
        let mut l = Self::empty();
        l.insert(0, 0);
        for m in 1..=MAX_WORD {
            for a in 1..=m {
                let rest = l.words[m - a].clone();
                for &u in &self.words[a] {
                    for &v in &rest {
                        l.insert(m, u * POW3[m - a] + v);
                    }
                }
            }
        }
        l.finish()
    }

    pub fn optional(&self) -> Self {
        let mut l = self.clone();
        if !l.member[0][0] {
            l.member[0][0] = true;
            l.words[0].push(0);
        }
        l
    }

    /// `alive[len][code]`: some word of the language starts with this prefix.
    pub fn prefixes(&self) -> Vec<Vec<bool>> {
        let mut alive = self.member.clone();
        for len in (0..MAX_WORD).rev() {
            for c in 0..POW3[len] as usize {
                if (0..3).any(|d| alive[len + 1][3 * c + d]) {
                    alive[len][c] = true;
                }
            }
        }
        alive
    }
}

/// Every binary-shaped pattern of depth exactly `d` over children of
/// smaller depth, paired with its language. `by_depth[k]` holds depth k+1.
pub fn patterns_by_depth(max_depth: usize) -> Vec<Vec<(Pattern, Language)>> {
    let mut by_depth: Vec<Vec<(Pattern, Language)>> = vec![Symbol::ALL
        .iter()
        .map(|&s| (Pattern::Literal(s), Language::literal(s)))
        .collect()];
    for d in 2..=max_depth {
        let shallower: Vec<&(Pattern, Language)> = by_depth.iter().flatten().collect();
        let top = &by_depth[d - 2];
        let mut next = Vec::new();
        for (p, l) in top {
            next.push((Pattern::star(p.clone()), l.star()));
            next.push((Pattern::optional(p.clone()), l.optional()));
        }
        for a in &shallower {
            for b in &shallower {
                if a.0.depth() != d - 1 && b.0.depth() != d - 1 {
                    continue;
                }
                next.push((
                    Pattern::Concat(vec![a.0.clone(), b.0.clone()]),
                    a.1.concat(&b.1),
                ));
                next.push((
                    Pattern::Alt(vec![a.0.clone(), b.0.clone()]),
                    a.1.union(&b.1),
                ));
            }
        }
        by_depth.push(next);
    }
    by_depth
}

/// Walks the trie of all words up to MAX_WORD with the implementation's
/// cursor and compares acceptance with the oracle at every node. A dead
/// cursor prunes the subtree, after checking that the oracle has no word
/// with that prefix. Returns the first disagreeing word, if any.
pub fn check_against_language(pattern: &Pattern, lang: &Language) -> Result<usize, Vec<Symbol>> {
    let compiled = CompiledPattern::new(pattern);
    let alive = lang.prefixes();
    let mut cursors = vec![compiled.cursor(); MAX_WORD + 1];
    let mut word: Vec<Symbol> = Vec::with_capacity(MAX_WORD);
    let mut visited = 0;

    fn walk(
        cursors: &mut [seqbreak_core::MatchCursor<'_>],
        word: &mut Vec<Symbol>,
        lang: &Language,
        alive: &[Vec<bool>],
        visited: &mut usize,
    ) -> Result<(), Vec<Symbol>> {
        let len = word.len();
        let c = code(word) as usize;
        *visited += 1;
        if cursors[len].is_accepting() != lang.member[len][c] {
            return Err(word.clone());
        }
        if cursors[len].is_dead() {
            return if alive[len][c] {
                Err(word.clone())
            } else {
                Ok(())
            };
        }
        if len == MAX_WORD {
            return Ok(());
        }
        for s in Symbol::ALL {
            let (head, tail) = cursors.split_at_mut(len + 1);
            tail[0].clone_from(&head[len]);
            tail[0].step(s);
            word.push(s);
            walk(cursors, word, lang, alive, visited)?;
            word.pop();
        }
        Ok(())
    }

    walk(&mut cursors, &mut word, lang, &alive, &mut visited)?;
    Ok(visited)
}
