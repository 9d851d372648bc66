//! On-disk catalog of sequences and their derived artifacts.
//!
//! ```text
//! <root>/
//!   manifest.txt      "<sha256>  <relative path>" per stored file, sorted by path
//!   raw/<id>.txt      ingested samples
//!   rep/<id>.rep      representation
//!   sig/<id>.sig      slope signature
//!   peaks/<id>.iv     peak-to-peak intervals
//!   index.idx         interval index
//!   .lock             present while a writer holds the catalog
//! ```
//!
//! Any number of readers may open a catalog; writers take the lock file with
//! an exclusive create, so a second writer fails fast instead of waiting.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use seqbreak_core::{IntervalIndex, RepresentedSequence, SlopeSignature, TimeSeries};

use crate::format::{self, IntervalFile, ParseError, RepFile};

pub const HOME_VAR: &str = "SEQBREAK_HOME";
const MANIFEST: &str = "manifest.txt";
const INDEX: &str = "index.idx";
const LOCK: &str = ".lock";

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("id `{0}` is already in the catalog")]
    DuplicateId(String),
    #[error("unknown id `{0}`")]
    UnknownId(String),
    #[error("`{0}` has no representation yet; run `segment` first")]
    MissingRep(String),
    #[error("no interval index yet; run `index` first")]
    MissingIndex,
    #[error("invalid id `{0}`: use letters, digits, `_`, `-` or `.` and do not start with `.`")]
    InvalidId(String),
    #[error("catalog is locked by another writer (remove {} if stale)", .0.display())]
    Locked(PathBuf),
    #[error("catalog was opened read-only")]
    ReadOnly,
}

type Result<T> = std::result::Result<T, CatalogError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CatalogError + '_ {
    move |source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn validate_id(id: &str) -> Result<()> {
    let ok = !id.is_empty()
        && !id.starts_with('.')
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
    if ok {
        Ok(())
    } else {
        Err(CatalogError::InvalidId(id.to_string()))
    }
}

/// Catalog root from an explicit path, then `SEQBREAK_HOME`, then `./.seqbreak`.
pub fn resolve_root(explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(HOME_VAR).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(".seqbreak"))
}

#[derive(Debug)]
struct WriteLock {
    path: PathBuf,
}

impl WriteLock {
    fn acquire(root: &Path) -> Result<Self> {
        let path = root.join(LOCK);
        match fs::OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
        {
            Ok(mut f) => {
                writeln!(f, "{}", std::process::id()).map_err(io_err(&path))?;
                Ok(Self { path })
            }
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => Err(CatalogError::Locked(path)),
            Err(e) => Err(io_err(&path)(e)),
        }
    }
}

impl Drop for WriteLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

/// One manifest line that does not check out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub path: String,
    pub message: String,
}

#[derive(Debug)]
pub struct Catalog {
    root: PathBuf,
    manifest: BTreeMap<String, String>,
    lock: Option<WriteLock>,
}

impl Catalog {
    /// Opens for reading. A missing root reads as an empty catalog.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        let manifest = read_manifest(&root)?;
        Ok(Self {
            root,
            manifest,
            lock: None,
        })
    }

    /// Opens for writing, creating the layout and taking the writer lock.
    pub fn open_writer(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        for dir in ["raw", "rep", "sig", "peaks"] {
            let d = root.join(dir);
            fs::create_dir_all(&d).map_err(io_err(&d))?;
        }
        let lock = WriteLock::acquire(&root)?;
        let manifest = read_manifest(&root)?;
        Ok(Self {
            root,
            manifest,
            lock: Some(lock),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Ingested ids in sorted order.
    pub fn ids(&self) -> Vec<String> {
        self.stored("raw/", ".txt")
    }

    /// Ids with a stored representation, sorted.
    pub fn represented_ids(&self) -> Vec<String> {
        self.stored("rep/", ".rep")
    }

    pub fn contains(&self, id: &str) -> bool {
        self.manifest.contains_key(&raw_path(id))
    }

    fn stored(&self, dir: &str, ext: &str) -> Vec<String> {
        self.manifest
            .keys()
            .filter_map(|p| p.strip_prefix(dir)?.strip_suffix(ext))
            .map(str::to_string)
            .collect()
    }

    pub fn ingest(&mut self, series: &TimeSeries) -> Result<()> {
        validate_id(series.id())?;
        if self.contains(series.id()) {
            return Err(CatalogError::DuplicateId(series.id().to_string()));
        }
        self.store(&raw_path(series.id()), &format::write_series(series))
    }

    pub fn series(&self, id: &str) -> Result<TimeSeries> {
        if !self.contains(id) {
            return Err(CatalogError::UnknownId(id.to_string()));
        }
        self.load(&raw_path(id), |t| format::parse_series(t, id))
    }

    pub fn put_rep(&mut self, rep: &RepresentedSequence, phi: Option<f64>) -> Result<()> {
        self.require(rep.source_id())?;
        self.store(&rep_path(rep.source_id()), &format::write_rep(rep, phi))
    }

    pub fn rep(&self, id: &str) -> Result<RepFile> {
        self.require(id)?;
        let path = rep_path(id);
        if !self.manifest.contains_key(&path) {
            return Err(CatalogError::MissingRep(id.to_string()));
        }
        self.load(&path, format::parse_rep)
    }

    pub fn put_signature(&mut self, id: &str, sig: &SlopeSignature) -> Result<()> {
        self.require(id)?;
        self.store(&format!("sig/{id}.sig"), &format!("{sig}\n"))
    }

    pub fn put_intervals(&mut self, file: &IntervalFile) -> Result<()> {
        self.require(&file.id)?;
        self.store(
            &format!("peaks/{}.iv", file.id),
            &format::write_intervals(file),
        )
    }

    pub fn intervals(&self, id: &str) -> Result<Option<IntervalFile>> {
        self.require(id)?;
        let path = format!("peaks/{id}.iv");
        if !self.manifest.contains_key(&path) {
            return Ok(None);
        }
        self.load(&path, format::parse_intervals).map(Some)
    }

    pub fn put_index(&mut self, index: &IntervalIndex) -> Result<()> {
        self.store(INDEX, &format::write_index(index))
    }

    pub fn index(&self) -> Result<IntervalIndex> {
        if !self.manifest.contains_key(INDEX) {
            return Err(CatalogError::MissingIndex);
        }
        self.load(INDEX, format::parse_index)
    }

    /// Checks every manifest entry: present, checksum intact, parses.
    pub fn verify(&self) -> Result<Vec<Problem>> {
        let mut problems = Vec::new();
        for (rel, sum) in &self.manifest {
            let problem = |message: String| Problem {
                path: rel.clone(),
                message,
            };
            let text = match fs::read_to_string(self.root.join(rel)) {
                Ok(t) => t,
                Err(e) => {
                    problems.push(problem(e.to_string()));
                    continue;
                }
            };
            if &checksum(&text) != sum {
                problems.push(problem("checksum mismatch".into()));
                continue;
            }
            if let Err(e) = parse_any(rel, &text) {
                problems.push(problem(e.to_string()));
            }
        }
        Ok(problems)
    }

    fn require(&self, id: &str) -> Result<()> {
        if self.contains(id) {
            Ok(())
        } else {
            Err(CatalogError::UnknownId(id.to_string()))
        }
    }

    fn load<T>(
        &self,
        rel: &str,
        parse: impl FnOnce(&str) -> std::result::Result<T, ParseError>,
    ) -> Result<T> {
        let path = self.root.join(rel);
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        parse(&text).map_err(|source| CatalogError::Parse { path, source })
    }

    fn store(&mut self, rel: &str, text: &str) -> Result<()> {
        if self.lock.is_none() {
            return Err(CatalogError::ReadOnly);
        }
        write_atomic(&self.root.join(rel), text)?;
        self.manifest.insert(rel.to_string(), checksum(text));
        let listing: String = self
            .manifest
            .iter()
            .map(|(p, sum)| format!("{sum}  {p}\n"))
            .collect();
        write_atomic(&self.root.join(MANIFEST), &listing)
    }
}

fn raw_path(id: &str) -> String {
    format!("raw/{id}.txt")
}

fn rep_path(id: &str) -> String {
    format!("rep/{id}.rep")
}

fn checksum(text: &str) -> String {
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

fn parse_any(rel: &str, text: &str) -> std::result::Result<(), ParseError> {
    let stem = Path::new(rel)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default();
    match rel.split('/').next() {
        Some("raw") => format::parse_series(text, stem).map(drop),
        Some("rep") => format::parse_rep(text).map(drop),
        Some("peaks") => format::parse_intervals(text).map(drop),
        Some("sig") => text
            .trim_end()
            .parse::<SlopeSignature>()
            .map(drop)
            .map_err(|message| ParseError { line: 1, message }),
        _ if rel == INDEX => format::parse_index(text).map(drop),
        _ => Ok(()),
    }
}

fn read_manifest(root: &Path) -> Result<BTreeMap<String, String>> {
    let path = root.join(MANIFEST);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
        Err(e) => return Err(io_err(&path)(e)),
    };
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| {
            l.split_once("  ")
                .map(|(sum, rel)| (rel.to_string(), sum.to_string()))
                .ok_or_else(|| CatalogError::Parse {
                    path: path.clone(),
                    source: ParseError {
                        line: k + 1,
                        message: "expected `<sha256>  <path>`".into(),
                    },
                })
        })
        .collect()
}

/// Writes through a sibling temporary file so readers never see a torn file.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}
