//! Entropy stage: canonical Huffman coding over coefficient symbols, optionally
//! after grouping consecutive coefficients into composite symbols.
//!
//! Both alphabets go through the same [`CodeBook`]; the only difference is
//! the symbol type. Scalar mode codes `i16` coefficients directly, reduced
//! mode codes [`CompositeSymbol`]s built by [`reduce_symbols`].

mod bits;
mod huffman;
mod reduce;
mod wire;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

pub use bits::{BitBuf, BitReader, BitWriter};
pub use huffman::{build_codebook, decode, encode, CodeBook, MAX_CODE_LEN};
pub use reduce::{expand_symbols, reduce_symbols, DEFAULT_GROUP_SIZE};
pub use wire::{deserialize_codebook, serialize_codebook};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EntropyError {
    #[error("empty symbol sequence")]
    EmptyInput,
    #[error("group size {0} out of range (2..=255)")]
    BadGroupSize(usize),
    #[error("pad count {pad} not below group size {group}")]
    BadPadCount { pad: usize, group: usize },
    #[error("symbol has {found} parts, expected {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("symbol {0} not present in codebook")]
    MissingSymbol(String),
    #[error("bits exhausted after {decoded} of {expected} symbols")]
    BitsExhausted { decoded: usize, expected: usize },
    #[error("no codeword matches bits at offset {at_bit}")]
    InvalidCode { at_bit: u64 },
    #[error("{count} dangling bits after the last symbol")]
    DanglingBits { count: u64 },
    #[error("code length {0} outside 1..=64")]
    BadCodeLength(u8),
    #[error("code lengths violate the Kraft equality")]
    KraftViolation,
    #[error("codebook entries are not in canonical (length, symbol) order")]
    NonCanonical,
    #[error("codebook data truncated")]
    Truncated,
}

/// A codable symbol: one or more signed 16-bit coefficient values.
///
/// The derived `Ord` is the canonical symbol order used for tie-breaking and
/// canonical code assignment.
pub trait CodeSymbol: Clone + Ord + Hash + Debug + Send + Sync {
    fn parts(&self) -> &[i16];
    /// Rebuilds a symbol from its parts, or `None` if the arity is wrong.
    fn from_parts(parts: &[i16]) -> Option<Self>;
}

impl CodeSymbol for i16 {
    fn parts(&self) -> &[i16] {
        std::slice::from_ref(self)
    }

    fn from_parts(parts: &[i16]) -> Option<Self> {
        match parts {
            [v] => Some(*v),
            _ => None,
        }
    }
}

/// Ordered tuple of consecutive coefficients, compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompositeSymbol(Box<[i16]>);

impl CompositeSymbol {
    pub fn new(parts: impl Into<Box<[i16]>>) -> Self {
        CompositeSymbol(parts.into())
    }

    pub fn group_size(&self) -> usize {
        self.0.len()
    }
}

impl CodeSymbol for CompositeSymbol {
    fn parts(&self) -> &[i16] {
        &self.0
    }

    fn from_parts(parts: &[i16]) -> Option<Self> {
        (!parts.is_empty()).then(|| CompositeSymbol::new(parts))
    }
}

/// Occurrence counts of each distinct symbol, in canonical symbol order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyTable<S: Ord> {
    counts: BTreeMap<S, u64>,
    total: u64,
}

impl<S: CodeSymbol> FrequencyTable<S> {
    /// Builds a table from explicit counts; zero counts are dropped.
    pub fn from_counts(counts: impl IntoIterator<Item = (S, u64)>) -> Result<Self, EntropyError> {
        let mut map = BTreeMap::new();
        for (s, c) in counts.into_iter().filter(|&(_, c)| c > 0) {
            *map.entry(s).or_insert(0) += c;
        }
        if map.is_empty() {
            return Err(EntropyError::EmptyInput);
        }
        let total = map.values().sum();
        Ok(FrequencyTable { counts: map, total })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct symbols.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count(&self, s: &S) -> u64 {
        self.counts.get(s).copied().unwrap_or(0)
    }

    pub fn probability(&self, s: &S) -> f64 {
        self.count(s) as f64 / self.total as f64
    }

    /// `(symbol, count)` pairs in canonical symbol order.
    pub fn iter(&self) -> impl Iterator<Item = (&S, u64)> + '_ {
        self.counts.iter().map(|(s, &c)| (s, c))
    }
}

/// Exact occurrence counts of `seq`.
pub fn build_frequency_table<S: CodeSymbol>(seq: &[S]) -> Result<FrequencyTable<S>, EntropyError> {
    if seq.is_empty() {
        return Err(EntropyError::EmptyInput);
    }
    let mut counts: HashMap<&S, u64> = HashMap::new();
    for s in seq {
        *counts.entry(s).or_insert(0) += 1;
    }
    FrequencyTable::from_counts(counts.into_iter().map(|(s, c)| (s.clone(), c)))
}
