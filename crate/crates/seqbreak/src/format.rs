//! Line-oriented text formats: raw series, representations, interval lists,
//! the interval index and plot data.
//!
//! Reals in representation files are written with 17 significant digits,
//! which is enough for every `f64` to read back bit-for-bit.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::{FromStr, SplitWhitespace};

use seqbreak_core::{
    FitKind, IntervalIndex, LinearFunction, NormalizationParams, RepresentedSequence, Segment,
    TimeSeries,
};

/// A malformed line. Line numbers are 1-based; 0 means the input as a whole.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Non-empty lines that are not `#` comments, with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Whitespace-separated fields of one line, with typed accessors.
struct Fields<'a> {
    line: usize,
    iter: SplitWhitespace<'a>,
}

impl<'a> Fields<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        Self {
            line,
            iter: text.split_whitespace(),
        }
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, message)
    }

    fn word(&mut self, what: &str) -> Result<&'a str, ParseError> {
        self.iter
            .next()
            .ok_or_else(|| self.err(format!("missing {what}")))
    }

    fn keyword(&mut self, expected: &str) -> Result<(), ParseError> {
        match self.word(expected)? {
            w if w == expected => Ok(()),
            w => Err(self.err(format!("expected `{expected}`, found `{w}`"))),
        }
    }

    fn parse<T: FromStr>(&mut self, what: &str) -> Result<T, ParseError> {
        let w = self.word(what)?;
        w.parse()
            .map_err(|_| self.err(format!("invalid {what} `{w}`")))
    }

    fn real(&mut self, what: &str) -> Result<f64, ParseError> {
        let x: f64 = self.parse(what)?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(self.err(format!("{what} is not finite")))
        }
    }

    fn finish(mut self) -> Result<(), ParseError> {
        match self.iter.next() {
            None => Ok(()),
            Some(w) => Err(self.err(format!("unexpected trailing `{w}`"))),
        }
    }
}

// ------------------------------------------------------------------ series

/// One decimal sample per line; blank lines and `#` lines are skipped.
pub fn parse_series(text: &str, id: &str) -> Result<TimeSeries, ParseError> {
    let samples = content_lines(text)
        .map(|(line, l)| {
            let mut f = Fields::new(line, l);
            let x = f.real("sample")?;
            f.finish()?;
            Ok(x)
        })
        .collect::<Result<Vec<f64>, ParseError>>()?;
    if samples.is_empty() {
        return Err(ParseError::new(0, "no samples"));
    }
    TimeSeries::new(id, samples).map_err(|e| ParseError::new(0, e.to_string()))
}

pub fn write_series(series: &TimeSeries) -> String {
    let mut out = format!("# {}\n", series.id());
    for x in series.samples() {
        writeln!(out, "{x}").unwrap();
    }
    out
}

// ---------------------------------------------------------- representation

/// A stored representation and the slope threshold it was made for, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct RepFile {
    pub rep: RepresentedSequence,
    pub phi: Option<f64>,
}

/// ```text
/// REP <source_id> <n> <epsilon> <fit_kind> <phi|->
/// NORM <mean> <std>                  (only for normalized input)
/// SEG <start> <end> <rep_slope> <rep_intercept> <break_slope> <break_intercept> <max_dev>
/// ```
pub fn write_rep(rep: &RepresentedSequence, phi: Option<f64>) -> String {
    let phi = phi.map_or_else(|| "-".to_string(), real);
    let mut out = format!(
        "REP {} {} {} {} {phi}\n",
        rep.source_id(),
        rep.len(),
        real(rep.epsilon()),
        rep.fit_kind()
    );
    if let Some(norm) = rep.norm() {
        writeln!(out, "NORM {} {}", real(norm.mean()), real(norm.std())).unwrap();
    }
    for s in rep.segments() {
        writeln!(
            out,
            "SEG {} {} {} {} {} {} {}",
            s.start,
            s.end,
            real(s.rep_line.slope),
            real(s.rep_line.intercept),
            real(s.break_line.slope),
            real(s.break_line.intercept),
            real(s.max_dev)
        )
        .unwrap();
    }
    out
}

pub fn parse_rep(text: &str) -> Result<RepFile, ParseError> {
    let mut lines = content_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(0, "missing REP header"))?;
    let mut f = Fields::new(line, header);
    f.keyword("REP")?;
    let id = f.word("source id")?.to_string();
    let len: usize = f.parse("length")?;
    let epsilon = f.real("epsilon")?;
    let fit_kind: FitKind = f.parse("fit kind")?;
    let phi = match f.word("phi")? {
        "-" => None,
        w => Some(
            w.parse::<f64>()
                .ok()
                .filter(|p| p.is_finite() && *p >= 0.0)
                .ok_or_else(|| f.err(format!("invalid phi `{w}`")))?,
        ),
    };
    f.finish()?;

    let mut norm = None;
    let mut segments = Vec::new();
    let mut last = line;
    for (line, l) in lines {
        last = line;
        let mut f = Fields::new(line, l);
        match f.word("record")? {
            "NORM" if norm.is_none() && segments.is_empty() => {
                let mean = f.real("mean")?;
                let std = f.real("std")?;
                f.finish()?;
                norm = Some(
                    NormalizationParams::new(mean, std)
                        .map_err(|e| ParseError::new(line, e.to_string()))?,
                );
            }
            "SEG" => {
                let start = f.parse("start")?;
                let end = f.parse("end")?;
                let rep_line = LinearFunction::new(f.real("rep slope")?, f.real("rep intercept")?);
                let break_line =
                    LinearFunction::new(f.real("break slope")?, f.real("break intercept")?);
                let max_dev = f.real("max deviation")?;
                f.finish()?;
                segments.push(Segment {
                    start,
                    end,
                    break_line,
                    rep_line,
                    max_dev,
                    fit_kind,
                });
            }
            w => return Err(f.err(format!("unexpected record `{w}`"))),
        }
    }
    let rep = RepresentedSequence::new(id, len, epsilon, fit_kind, segments, norm)
        .map_err(|e| ParseError::new(last, e.to_string()))?;
    Ok(RepFile { rep, phi })
}

// --------------------------------------------------------------- intervals

/// Peak-to-peak intervals of one sequence, with the slope threshold used.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalFile {
    pub id: String,
    pub phi: f64,
    pub intervals: Vec<u64>,
}

/// `IV <id> <phi>` followed by one line of space-separated interval lengths.
pub fn write_intervals(file: &IntervalFile) -> String {
    let list: Vec<String> = file.intervals.iter().map(u64::to_string).collect();
    format!("IV {} {}\n{}\n", file.id, real(file.phi), list.join(" "))
}

pub fn parse_intervals(text: &str) -> Result<IntervalFile, ParseError> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (line, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(0, "missing IV header"))?;
    let mut f = Fields::new(line, header);
    f.keyword("IV")?;
    let id = f.word("id")?.to_string();
    let phi = f.real("phi")?;
    f.finish()?;
    let mut intervals = Vec::new();
    for (line, l) in lines {
        let mut f = Fields::new(line, l);
        while let Some(w) = f.iter.next() {
            intervals.push(
                w.parse()
                    .map_err(|_| f.err(format!("invalid interval `{w}`")))?,
            );
        }
    }
    Ok(IntervalFile { id, phi, intervals })
}

// ------------------------------------------------------------------- index

/// `IDX <min> <max>`, then `<length> <id>...` lines in increasing length.
pub fn write_index(index: &IntervalIndex) -> String {
    let (min, max) = index.bounds();
    let mut out = format!("IDX {min} {max}\n");
    for (length, ids) in index.postings() {
        writeln!(out, "{length} {}", ids.join(" ")).unwrap();
    }
    out
}

pub fn parse_index(text: &str) -> Result<IntervalIndex, ParseError> {
    let mut lines = content_lines(text);
    let (line, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(0, "missing IDX header"))?;
    let mut f = Fields::new(line, header);
    f.keyword("IDX")?;
    let bounds = (f.parse("minimum")?, f.parse("maximum")?);
    f.finish()?;

    let mut postings = BTreeMap::new();
    let mut previous: Option<u64> = None;
    for (line, l) in lines {
        let mut f = Fields::new(line, l);
        let length: u64 = f.parse("interval length")?;
        if previous.is_some_and(|p| p >= length) {
            return Err(f.err("interval lengths must be strictly increasing"));
        }
        previous = Some(length);
        let ids: Vec<String> = f.iter.by_ref().map(str::to_string).collect();
        if ids.is_empty() {
            return Err(f.err("posting without ids"));
        }
        if ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(f.err("ids must be sorted and unique"));
        }
        postings.insert(length, ids);
    }
    IntervalIndex::from_postings(bounds, postings).map_err(|e| ParseError::new(0, e.to_string()))
}

// -------------------------------------------------------------------- plot

/// Two whitespace-separated blocks for external plotting: the raw samples as
/// `index value`, then one `segment start end slope intercept` row per
/// representing line.
pub fn write_plot(series: &TimeSeries, rep: &RepresentedSequence) -> String {
    let mut out = format!("# raw {} {}\n# index value\n", series.id(), series.len());
    for (t, x) in series.samples().iter().enumerate() {
        writeln!(out, "{t} {x}").unwrap();
    }
    let segs = rep.segments();
    write!(
        out,
        "\n\n# segments {}\n# segment start end slope intercept\n",
        segs.len()
    )
    .unwrap();
    for (k, s) in segs.iter().enumerate() {
        writeln!(
            out,
            "{k} {} {} {} {}",
            s.start, s.end, s.rep_line.slope, s.rep_line.intercept
        )
        .unwrap();
    }
    out
}
