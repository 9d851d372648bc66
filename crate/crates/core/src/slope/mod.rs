//! Slope signatures and shape queries over them.
//!
//! Every segment's representing slope is quantized against a threshold `phi`
//! into `P` (rising, slope > phi), `N` (falling, slope < -phi) or `Z`.
//! Shape queries are regular expressions over that alphabet; `+`, `-` and `0`
//! are accepted as aliases for `P`, `N` and `Z`, so `0*(+)(-)0*(+)(-)0*`
//! asks for exactly two peaks.

mod nfa;
mod pattern;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::segment::RepresentedSequence;

pub use nfa::{find_occurrences, full_match, CompiledPattern, MatchCursor, Occurrence};
pub use pattern::{parse_pattern, Pattern, PatternError};

/// Slope threshold used when none is given.
pub const DEFAULT_PHI: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// slope > phi
    P,
    /// slope < -phi
    N,
    /// |slope| <= phi
    Z,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::P, Symbol::N, Symbol::Z];

    pub fn classify(slope: f64, phi: f64) -> Self {
        if slope > phi {
            Symbol::P
        } else if slope < -phi {
            Symbol::N
        } else {
            Symbol::Z
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::P => 'P',
            Symbol::N => 'N',
            Symbol::Z => 'Z',
        }
    }

    /// Canonical letters plus the `+`, `-`, `0` aliases.
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'P' | '+' => Some(Symbol::P),
            'N' | '-' => Some(Symbol::N),
            'Z' | '0' => Some(Symbol::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeConfig {
    phi: f64,
}

impl SlopeConfig {
    /// `None` unless `phi` is finite and non-negative.
    pub fn new(phi: f64) -> Option<Self> {
        (phi.is_finite() && phi >= 0.0).then_some(Self { phi })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

impl Default for SlopeConfig {
    fn default() -> Self {
        Self { phi: DEFAULT_PHI }
    }
}

/// One symbol per segment plus the sample range each symbol came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeSignature {
    symbols: Vec<Symbol>,
    spans: Vec<(usize, usize)>,
}

impl SlopeSignature {
    /// Pairs symbols with their `(start, end)` sample ranges.
    ///
    /// # Panics
    ///
    /// When the two lists differ in length.
    pub fn new(symbols: Vec<Symbol>, spans: Vec<(usize, usize)>) -> Self {
        assert_eq!(symbols.len(), spans.len(), "one span per symbol");
        Self { symbols, spans }
    }

    /// A signature without meaningful spans; each symbol spans its own index.
    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        let spans = (0..symbols.len()).map(|k| (k, k)).collect();
        Self { symbols, spans }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn spans(&self) -> &[(usize, usize)] {
        &self.spans
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl fmt::Display for SlopeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbols.iter().try_for_each(|s| write!(f, "{s}"))
    }
}

impl core::str::FromStr for SlopeSignature {
    type Err = String;

    /// Parses canonical `P`/`N`/`Z` text (aliases accepted).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let symbols = s
            .chars()
            .map(|c| Symbol::from_char(c).ok_or_else(|| alloc::format!("invalid symbol `{c}`")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_symbols(symbols))
    }
}

/// Quantizes each segment's representing slope.
pub fn signature(rep: &RepresentedSequence, cfg: &SlopeConfig) -> SlopeSignature {
    let (symbols, spans) = rep
        .segments()
        .iter()
        .map(|seg| {
            (
                Symbol::classify(seg.rep_line.slope, cfg.phi),
                (seg.start, seg.end),
            )
        })
        .unzip();
    SlopeSignature { symbols, spans }
}
