//! The `seqbreak` command line.
//!
//! Exit status: 0 when the command produced results, 1 when it ran but found
//! nothing (no matches, no peaks, empty catalog), 2 on any error.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use seqbreak_core::{
    compression_ratio, find_peaks, intervals, normalize, parse_pattern, segment_recursive_with,
    signature, CompiledPattern, FitKind, IntervalIndex, IntervalIndexError, LinearFunction,
    NormalizationParams, PatternError, PeakRecord, RepLine, RepresentedSequence, SegmentConfig,
    SegmentError, SeriesError, SlopeConfig, TimeSeries, DEFAULT_PHI,
};

use crate::catalog::{resolve_root, Catalog, CatalogError};
use crate::format::{self, IntervalFile, ParseError};
use crate::generate::{generate, BadSpec, GeneratorKind, GeneratorSpec};

#[derive(Debug, Parser)]
#[command(
    name = "seqbreak",
    version,
    about = "Piecewise-linear sequence representations with shape and interval queries"
)]
pub struct Cli {
    /// Catalog directory [default: $SEQBREAK_HOME, else ./.seqbreak]
    #[arg(long, global = true, value_name = "DIR")]
    pub home: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Store a text file of samples (one number per line) in the catalog
    Ingest {
        path: PathBuf,
        /// Catalog id [default: the file stem]
        #[arg(long)]
        id: Option<String>,
    },
    /// Generate a synthetic sequence into the catalog or a file
    Generate(GenerateArgs),
    /// Break sequences into linear segments and store the representation
    Segment(SegmentArgs),
    /// Print (and store) slope signatures over P, N, Z
    Signature {
        #[command(flatten)]
        select: Selection,
        #[arg(long, default_value_t = DEFAULT_PHI)]
        phi: f64,
    },
    /// List rise/descent peak records and store peak-to-peak intervals
    Peaks {
        #[command(flatten)]
        select: Selection,
        #[arg(long, default_value_t = DEFAULT_PHI)]
        phi: f64,
    },
    /// Build the interval index over every segmented sequence
    Index {
        #[arg(long, default_value_t = DEFAULT_PHI)]
        phi: f64,
        /// Admissible interval lengths
        #[arg(long, value_name = "MIN:MAX", value_parser = parse_bounds,
              default_value = "20:2000")]
        bounds: (u64, u64),
    },
    /// Ids whose whole signature matches a pattern such as `0*(+)(-)0*(+)(-)0*`
    QueryPattern {
        pattern: String,
        #[arg(long, default_value_t = DEFAULT_PHI)]
        phi: f64,
        /// List every substring occurrence (symbol and sample ranges) instead
        #[arg(long)]
        spans: bool,
    },
    /// Ids having a peak-to-peak interval within N ± DELTA
    QueryInterval {
        n: u64,
        #[arg(long, default_value_t = 0)]
        delta: u64,
    },
    /// Raw samples and segment lines as plot data
    Plot {
        id: String,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-sequence summary and manifest check
    Stats,
}

#[derive(Debug, Args)]
pub struct Selection {
    /// Sequence ids
    pub ids: Vec<String>,
    /// Every applicable id in the catalog
    #[arg(long, conflicts_with = "ids")]
    pub all: bool,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// goalpost, ecg_like, noise or ramp
    pub kind: GeneratorKind,
    /// Catalog id [default: the kind]
    #[arg(long)]
    pub id: Option<String>,
    /// Write a sample file here instead of storing in the catalog
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub length: Option<usize>,
    #[arg(long)]
    pub baseline: Option<f64>,
    #[arg(long)]
    pub amplitude: Option<f64>,
    #[arg(long)]
    pub noise: Option<f64>,
    /// Number of bumps (goalpost)
    #[arg(long)]
    pub peaks: Option<usize>,
    /// Samples from baseline to bump top (goalpost)
    #[arg(long)]
    pub half_width: Option<usize>,
    /// Time of the first spike (ecg_like)
    #[arg(long)]
    pub first: Option<usize>,
    /// Comma-separated distances between spikes (ecg_like)
    #[arg(long, value_delimiter = ',')]
    pub spacing: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    #[command(flatten)]
    pub select: Selection,
    /// Error tolerance, in the units of the series as segmented
    #[arg(long)]
    pub epsilon: f64,
    /// Line family used for splitting: interp or regress
    #[arg(long, default_value = "interp")]
    pub fit: FitKind,
    /// Segment the series rescaled to mean 0 and variance 1
    #[arg(long)]
    pub normalize: bool,
    /// Store the splitting line instead of the regression line
    #[arg(long)]
    pub store_break_line: bool,
    /// Parameters per segment for the reported compression ratios
    #[arg(long, value_delimiter = ',', default_value = "4,6")]
    pub params_per_segment: Vec<usize>,
    /// Slope threshold recorded with the representation
    #[arg(long, default_value_t = DEFAULT_PHI)]
    pub phi: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: ParseError },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{id}: {source}")]
    Series { id: String, source: SeriesError },
    #[error("{id}: {source}")]
    Segment { id: String, source: SegmentError },
    #[error("{source}\n  {pattern}\n  {caret:>width$}", caret = "^", width = source.offset + 1)]
    Pattern {
        pattern: String,
        source: PatternError,
    },
    #[error(transparent)]
    Index(#[from] IntervalIndexError),
    #[error(transparent)]
    Generate(#[from] BadSpec),
    #[error("{0}")]
    Usage(String),
}

/// Whether a command that ran successfully had anything to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Found,
    Nothing,
}

impl Outcome {
    fn from_any(found: bool) -> Self {
        if found {
            Outcome::Found
        } else {
            Outcome::Nothing
        }
    }

    pub fn exit_code(self) -> ExitCode {
        match self {
            Outcome::Found => ExitCode::SUCCESS,
            Outcome::Nothing => ExitCode::from(1),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Parses the process arguments, runs, and maps the result to an exit code.
pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    let root = resolve_root(cli.home.as_deref());
    let mut out = Output { inner: out };
    match &cli.command {
        Command::Ingest { path, id } => ingest(&root, path, id.as_deref(), &mut out),
        Command::Generate(args) => generate_cmd(&root, args, &mut out),
        Command::Segment(args) => segment_cmd(&root, args, &mut out),
        Command::Signature { select, phi } => signature_cmd(&root, select, *phi, &mut out),
        Command::Peaks { select, phi } => peaks_cmd(&root, select, *phi, &mut out),
        Command::Index { phi, bounds } => index_cmd(&root, *phi, *bounds, &mut out),
        Command::QueryPattern {
            pattern,
            phi,
            spans,
        } => query_pattern(&root, pattern, *phi, *spans, &mut out),
        Command::QueryInterval { n, delta } => query_interval(&root, *n, *delta, &mut out),
        Command::Plot { id, out: file } => plot(&root, id, file.as_deref(), &mut out),
        Command::Stats => stats(&root, &mut out),
    }
}

/// Stdout with errors mapped into [`CliError`].
struct Output<'a> {
    inner: &'a mut dyn Write,
}

impl Output<'_> {
    fn line(&mut self, text: impl AsRef<str>) -> Result<()> {
        writeln!(self.inner, "{}", text.as_ref()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
    }

    fn raw(&mut self, text: &str) -> Result<()> {
        self.inner
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })
    }
}

fn join_or_dash(values: &[u64]) -> String {
    if values.is_empty() {
        return "-".into();
    }
    let list: Vec<String> = values.iter().map(u64::to_string).collect();
    list.join(",")
}

pub fn parse_bounds(text: &str) -> std::result::Result<(u64, u64), String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("expected MIN:MAX, got `{text}`"))?;
    let parse = |s: &str| s.trim().parse::<u64>().map_err(|e| format!("`{s}`: {e}"));
    let bounds = (parse(lo)?, parse(hi)?);
    if bounds.0 == 0 || bounds.0 > bounds.1 {
        return Err(format!(
            "need 0 < MIN <= MAX, got {}:{}",
            bounds.0, bounds.1
        ));
    }
    Ok(bounds)
}

fn slope_config(phi: f64) -> Result<SlopeConfig> {
    SlopeConfig::new(phi)
        .ok_or_else(|| CliError::Usage(format!("phi must be finite and >= 0, got {phi}")))
}

fn selected(select: &Selection, available: Vec<String>) -> Result<Vec<String>> {
    match (select.all, select.ids.is_empty()) {
        (true, _) => Ok(available),
        (false, false) => Ok(select.ids.clone()),
        (false, true) => Err(CliError::Usage(
            "name at least one id, or pass --all".into(),
        )),
    }
}

// ------------------------------------------------------------------ commands

fn ingest(root: &Path, path: &Path, id: Option<&str>, out: &mut Output) -> Result<Outcome> {
    let id = match id {
        Some(id) => id.to_string(),
        None => path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| CliError::Usage(format!("cannot derive an id from {}", path.display())))?
            .to_string(),
    };
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let series = format::parse_series(&text, &id).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })?;
    Catalog::open_writer(root)?.ingest(&series)?;
    out.line(format!("ingested {id} n={}", series.len()))?;
    Ok(Outcome::Found)
}

fn generate_cmd(root: &Path, args: &GenerateArgs, out: &mut Output) -> Result<Outcome> {
    let mut spec = GeneratorSpec::new(args.kind).with_seed(args.seed);
    spec.length = args.length.unwrap_or(spec.length);
    spec.baseline = args.baseline.unwrap_or(spec.baseline);
    spec.amplitude = args.amplitude.unwrap_or(spec.amplitude);
    spec.noise = args.noise.unwrap_or(spec.noise);
    spec.peaks = args.peaks.unwrap_or(spec.peaks);
    spec.half_width = args.half_width.unwrap_or(spec.half_width);
    spec.first = args.first.unwrap_or(spec.first);
    if let Some(spacing) = &args.spacing {
        spec.spacing = spacing.clone();
    }
    let id = args.id.clone().unwrap_or_else(|| args.kind.to_string());
    let series = generate(&spec, &id)?;
    match &args.out {
        Some(path) => {
            std::fs::write(path, format::write_series(&series)).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            out.line(format!("wrote {} n={}", path.display(), series.len()))?;
        }
        None => {
            Catalog::open_writer(root)?.ingest(&series)?;
            out.line(format!(
                "generated {id} kind={} n={} seed={}",
                args.kind,
                series.len(),
                args.seed
            ))?;
        }
    }
    Ok(Outcome::Found)
}

/// Segments one series as the CLI does: optional normalization, then the
/// recursive breaking algorithm.
pub fn segment_series(
    series: &TimeSeries,
    epsilon: f64,
    fit: FitKind,
    rep_line: RepLine,
    normalized: bool,
) -> std::result::Result<RepresentedSequence, CliError> {
    let id = series.id().to_string();
    let cfg = SegmentConfig::new(fit).with_rep_line(rep_line);
    if normalized {
        let (scaled, params) = normalize(series).map_err(|source| CliError::Series {
            id: id.clone(),
            source,
        })?;
        let rep = segment_recursive_with(&scaled, epsilon, cfg)
            .map_err(|source| CliError::Segment { id, source })?;
        Ok(rep.with_norm(Some(params)))
    } else {
        segment_recursive_with(series, epsilon, cfg)
            .map_err(|source| CliError::Segment { id, source })
    }
}

fn segment_cmd(root: &Path, args: &SegmentArgs, out: &mut Output) -> Result<Outcome> {
    slope_config(args.phi)?;
    if args.params_per_segment.contains(&0) {
        return Err(CliError::Usage(
            "--params-per-segment values must be >= 1".into(),
        ));
    }
    let mut catalog = Catalog::open_writer(root)?;
    let ids = selected(&args.select, catalog.ids())?;
    let rep_line = if args.store_break_line {
        RepLine::BreakLine
    } else {
        RepLine::Regression
    };
    for id in &ids {
        let series = catalog.series(id)?;
        let rep = segment_series(&series, args.epsilon, args.fit, rep_line, args.normalize)?;
        catalog.put_rep(&rep, Some(args.phi))?;
        let mut line = format!(
            "{id} segments={} max_dev={:.6}",
            rep.segments().len(),
            rep.max_deviation()
        );
        for &p in &args.params_per_segment {
            line.push_str(&format!(
                " compression@{p}={:.2}",
                compression_ratio(&rep, p)
            ));
        }
        out.line(line)?;
    }
    Ok(Outcome::from_any(!ids.is_empty()))
}

fn signature_cmd(root: &Path, select: &Selection, phi: f64, out: &mut Output) -> Result<Outcome> {
    let cfg = slope_config(phi)?;
    let mut catalog = Catalog::open_writer(root)?;
    let ids = selected(select, catalog.represented_ids())?;
    for id in &ids {
        let sig = signature(&catalog.rep(id)?.rep, &cfg);
        catalog.put_signature(id, &sig)?;
        out.line(format!("{id} {sig}"))?;
    }
    Ok(Outcome::from_any(!ids.is_empty()))
}

/// The series in the units its representation was built in.
fn series_in_rep_units(
    catalog: &Catalog,
    id: &str,
    norm: Option<&NormalizationParams>,
) -> Result<TimeSeries> {
    let raw = catalog.series(id)?;
    match norm {
        None => Ok(raw),
        Some(p) => p.apply_series(&raw).map_err(|source| CliError::Series {
            id: id.into(),
            source,
        }),
    }
}

/// Peaks of one stored sequence.
fn stored_peaks(
    catalog: &Catalog,
    id: &str,
    cfg: &SlopeConfig,
) -> Result<(Vec<PeakRecord>, Option<NormalizationParams>)> {
    let rep = catalog.rep(id)?.rep;
    let norm = rep.norm().copied();
    let series = series_in_rep_units(catalog, id, norm.as_ref())?;
    Ok((find_peaks(&rep, &series, cfg), norm))
}

fn show_line(line: LinearFunction, norm: Option<&NormalizationParams>) -> String {
    let (slope, intercept) = match norm {
        None => (line.slope, line.intercept),
        Some(p) => (line.slope * p.std(), p.invert(line.intercept)),
    };
    format!("{slope:.3}x{intercept:+.3}")
}

fn show_point(time: usize, amplitude: f64, norm: Option<&NormalizationParams>) -> String {
    let a = norm.map_or(amplitude, |p| p.invert(amplitude));
    format!("({time},{a})")
}

fn peaks_cmd(root: &Path, select: &Selection, phi: f64, out: &mut Output) -> Result<Outcome> {
    let cfg = slope_config(phi)?;
    let mut catalog = Catalog::open_writer(root)?;
    let ids = selected(select, catalog.represented_ids())?;
    let mut any = false;
    for id in &ids {
        let (peaks, norm) = stored_peaks(&catalog, id, &cfg)?;
        let lengths = intervals(&peaks);
        out.line(format!(
            "# {id} peaks={} intervals={}",
            peaks.len(),
            join_or_dash(&lengths)
        ))?;
        out.line("# peak rising r_start r_end descending d_start d_end peak_time")?;
        let n = norm.as_ref();
        for (k, p) in peaks.iter().enumerate() {
            out.line(format!(
                "{} {} {} {} {} {} {} {}",
                k + 1,
                show_line(p.rising.rep_line, n),
                show_point(p.r_start.time, p.r_start.amplitude, n),
                show_point(p.r_end.time, p.r_end.amplitude, n),
                show_line(p.descending.rep_line, n),
                show_point(p.d_start.time, p.d_start.amplitude, n),
                show_point(p.d_end.time, p.d_end.amplitude, n),
                p.peak_time
            ))?;
        }
        any |= !peaks.is_empty();
        catalog.put_intervals(&IntervalFile {
            id: id.clone(),
            phi,
            intervals: lengths,
        })?;
    }
    Ok(Outcome::from_any(any))
}

fn index_cmd(root: &Path, phi: f64, bounds: (u64, u64), out: &mut Output) -> Result<Outcome> {
    let cfg = slope_config(phi)?;
    let mut catalog = Catalog::open_writer(root)?;
    let mut db = Vec::new();
    for id in catalog.represented_ids() {
        let lengths = intervals(&stored_peaks(&catalog, &id, &cfg)?.0);
        catalog.put_intervals(&IntervalFile {
            id: id.clone(),
            phi,
            intervals: lengths.clone(),
        })?;
        db.push((id, lengths));
    }
    let index = IntervalIndex::build(db.iter().cloned(), bounds)?;
    catalog.put_index(&index)?;
    out.line(format!(
        "indexed sequences={} lengths={} bounds={}:{}",
        db.len(),
        index.postings().len(),
        bounds.0,
        bounds.1
    ))?;
    Ok(Outcome::from_any(!index.is_empty()))
}

fn query_pattern(
    root: &Path,
    text: &str,
    phi: f64,
    spans: bool,
    out: &mut Output,
) -> Result<Outcome> {
    let cfg = slope_config(phi)?;
    let pattern = parse_pattern(text).map_err(|source| CliError::Pattern {
        pattern: text.to_string(),
        source,
    })?;
    let compiled = CompiledPattern::new(&pattern);
    let catalog = Catalog::open(root)?;
    let mut any = false;
    for id in catalog.represented_ids() {
        let sig = signature(&catalog.rep(&id)?.rep, &cfg);
        if spans {
            for o in compiled.occurrences(&sig) {
                any = true;
                out.line(format!(
                    "{id} symbols={}..{} samples={}..{}",
                    o.start_symbol, o.end_symbol, o.series_start, o.series_end
                ))?;
            }
        } else if compiled.is_full_match(sig.symbols()) {
            any = true;
            out.line(&id)?;
        }
    }
    Ok(Outcome::from_any(any))
}

fn query_interval(root: &Path, n: u64, delta: u64, out: &mut Output) -> Result<Outcome> {
    let ids = Catalog::open(root)?.index()?.query(n, delta);
    for id in &ids {
        out.line(id)?;
    }
    Ok(Outcome::from_any(!ids.is_empty()))
}

fn plot(root: &Path, id: &str, file: Option<&Path>, out: &mut Output) -> Result<Outcome> {
    let catalog = Catalog::open(root)?;
    let rep = catalog.rep(id)?.rep;
    let series = series_in_rep_units(&catalog, id, rep.norm())?;
    let text = format::write_plot(&series, &rep);
    match file {
        Some(path) => {
            std::fs::write(path, text).map_err(|source| CliError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            out.line(format!("wrote {}", path.display()))?;
        }
        None => out.raw(&text)?,
    }
    Ok(Outcome::Found)
}

fn stats(root: &Path, out: &mut Output) -> Result<Outcome> {
    let catalog = Catalog::open(root)?;
    let ids = catalog.ids();
    for id in &ids {
        let n = catalog.series(id)?.len();
        let mut line = format!("{id} n={n}");
        match catalog.rep(id) {
            Ok(file) => {
                let rep = &file.rep;
                line.push_str(&format!(
                    " segments={} epsilon={} fit={} normalized={} compression@4={:.2}",
                    rep.segments().len(),
                    rep.epsilon(),
                    rep.fit_kind(),
                    rep.norm().is_some(),
                    compression_ratio(rep, 4)
                ));
            }
            Err(CatalogError::MissingRep(_)) => line.push_str(" segments=-"),
            Err(e) => return Err(e.into()),
        }
        if let Some(iv) = catalog.intervals(id)? {
            line.push_str(&format!(" intervals={}", join_or_dash(&iv.intervals)));
        }
        out.line(line)?;
    }
    let problems = catalog.verify()?;
    for p in &problems {
        out.line(format!("manifest problem: {}: {}", p.path, p.message))?;
    }
    if !problems.is_empty() {
        return Err(CliError::Usage(format!(
            "{} manifest problem(s)",
            problems.len()
        )));
    }
    if !ids.is_empty() {
        out.line(format!("manifest ok ({} sequences)", ids.len()))?;
    }
    Ok(Outcome::from_any(!ids.is_empty()))
}
