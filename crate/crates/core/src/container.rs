//! Self-describing compressed file.
//!
//! Layout (all multi-byte fields big-endian):
//!
//! | bytes | field                                                    |
//! |-------|----------------------------------------------------------|
//! | 4     | magic `HJPG`                                             |
//! | 1     | version (1)                                              |
//! | 1     | flags: bit 0 symbol-reduced, bit 1 DC differential       |
//! | 1     | group size (1 for scalar Huffman)                        |
//! | 2+2   | original width, height                                   |
//! | 2+2   | padded width, height                                     |
//! | 1     | pad count of the last composite symbol                   |
//! | 4     | coded symbol count                                       |
//! | 64    | quantization table, row-major                            |
//! | var   | codebook (see [`crate::entropy::serialize_codebook`])    |
//! | 4     | payload length in bits                                   |
//! | var   | payload, `ceil(bits / 8)` bytes, last byte zero-padded   |

use thiserror::Error;

use crate::entropy::{
    deserialize_codebook, serialize_codebook, BitBuf, CodeBook, CompositeSymbol, EntropyError,
};
use crate::quantize::QuantTable;
use crate::transform::{BLOCK, BLOCK_AREA};

pub const MAGIC: [u8; 4] = *b"HJPG";
pub const VERSION: u8 = 1;
/// Bytes taken by the fixed-width fields, excluding table, codebook and payload.
pub const FIXED_OVERHEAD: usize = 24;

const FLAG_REDUCED: u8 = 0b01;
const FLAG_DC_DIFF: u8 = 0b10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContainerError {
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported version {0}")]
    UnsupportedVersion(u8),
    #[error("truncated {0}")]
    Truncated(&'static str),
    #[error("{0} trailing bytes after payload")]
    TrailingData(usize),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("codebook: {0}")]
    Codebook(EntropyError),
}

impl From<EntropyError> for ContainerError {
    fn from(e: EntropyError) -> Self {
        match e {
            EntropyError::Truncated => ContainerError::Truncated("codebook"),
            other => ContainerError::Codebook(other),
        }
    }
}

/// The codebook together with the symbol alphabet it codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StreamCodeBook {
    Scalar(CodeBook<i16>),
    Reduced {
        group_size: u8,
        book: CodeBook<CompositeSymbol>,
    },
}

impl StreamCodeBook {
    /// 1 for scalar streams.
    pub fn group_size(&self) -> u8 {
        match self {
            StreamCodeBook::Scalar(_) => 1,
            StreamCodeBook::Reduced { group_size, .. } => *group_size,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            StreamCodeBook::Scalar(b) => b.len(),
            StreamCodeBook::Reduced { book, .. } => book.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kraft_sum(&self) -> f64 {
        match self {
            StreamCodeBook::Scalar(b) => b.kraft_sum(),
            StreamCodeBook::Reduced { book, .. } => book.kraft_sum(),
        }
    }

    pub fn length_histogram(&self) -> Vec<(u8, usize)> {
        match self {
            StreamCodeBook::Scalar(b) => b.length_histogram(),
            StreamCodeBook::Reduced { book, .. } => book.length_histogram(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedFile {
    pub dc_diff: bool,
    pub orig_width: u16,
    pub orig_height: u16,
    pub padded_width: u16,
    pub padded_height: u16,
    pub pad_count: u8,
    pub symbol_count: u32,
    pub quant_table: QuantTable,
    pub codebook: StreamCodeBook,
    pub payload: BitBuf,
}

fn invariant(msg: impl Into<String>) -> ContainerError {
    ContainerError::Invariant(msg.into())
}

impl CompressedFile {
    pub fn flags(&self) -> u8 {
        let mut f = 0;
        if matches!(self.codebook, StreamCodeBook::Reduced { .. }) {
            f |= FLAG_REDUCED;
        }
        if self.dc_diff {
            f |= FLAG_DC_DIFF;
        }
        f
    }

    pub fn group_size(&self) -> u8 {
        self.codebook.group_size()
    }

    /// Number of quantized coefficients carried by the payload.
    pub fn coefficient_count(&self) -> usize {
        usize::from(self.padded_width) * usize::from(self.padded_height)
    }

    pub fn payload_bit_length(&self) -> u64 {
        self.payload.bit_len()
    }

    pub fn validate(&self) -> Result<(), ContainerError> {
        let (ow, oh, pw, ph) = (
            self.orig_width,
            self.orig_height,
            self.padded_width,
            self.padded_height,
        );
        if ow == 0 || oh == 0 {
            return Err(invariant("zero original dimension"));
        }
        if !(pw as usize).is_multiple_of(BLOCK) || !(ph as usize).is_multiple_of(BLOCK) {
            return Err(invariant("padded dimensions not multiples of 8"));
        }
        if pw < ow || ph < oh {
            return Err(invariant("padded dimensions smaller than original"));
        }
        if self.payload.bit_len() > u64::from(u32::MAX) {
            return Err(invariant("payload longer than 2^32-1 bits"));
        }
        let g = usize::from(self.group_size());
        match &self.codebook {
            StreamCodeBook::Scalar(_) => {}
            StreamCodeBook::Reduced { group_size, book } => {
                if *group_size < 2 {
                    return Err(invariant("reduced stream with group size < 2"));
                }
                if book.iter().any(|(s, _, _)| s.group_size() != g) {
                    return Err(invariant("composite symbol arity differs from group size"));
                }
            }
        }
        if usize::from(self.pad_count) >= g {
            return Err(invariant("pad count not below group size"));
        }
        let coded = (self.symbol_count as usize)
            .checked_mul(g)
            .and_then(|n| n.checked_sub(self.pad_count.into()));
        if coded != Some(self.coefficient_count()) {
            return Err(invariant(format!(
                "symbol count {} × group {} − pad {} does not cover {} coefficients",
                self.symbol_count,
                g,
                self.pad_count,
                self.coefficient_count()
            )));
        }
        debug_assert_eq!(self.coefficient_count() % BLOCK_AREA, 0);
        Ok(())
    }

    pub fn serialize(&self) -> Result<Vec<u8>, ContainerError> {
        self.validate()?;
        let g = usize::from(self.group_size());
        let book = match &self.codebook {
            StreamCodeBook::Scalar(b) => serialize_codebook(b, 1)?,
            StreamCodeBook::Reduced { book, .. } => serialize_codebook(book, g)?,
        };
        let mut out = Vec::with_capacity(
            FIXED_OVERHEAD + BLOCK_AREA + book.len() + self.payload.bytes().len(),
        );
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(self.flags());
        out.push(self.group_size());
        for v in [
            self.orig_width,
            self.orig_height,
            self.padded_width,
            self.padded_height,
        ] {
            out.extend_from_slice(&v.to_be_bytes());
        }
        out.push(self.pad_count);
        out.extend_from_slice(&self.symbol_count.to_be_bytes());
        out.extend_from_slice(self.quant_table.steps());
        out.extend_from_slice(&book);
        out.extend_from_slice(&(self.payload.bit_len() as u32).to_be_bytes());
        out.extend_from_slice(self.payload.bytes());
        Ok(out)
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Self, ContainerError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4, "header")? != MAGIC {
            return Err(ContainerError::BadMagic);
        }
        let version = r.u8("header")?;
        if version != VERSION {
            return Err(ContainerError::UnsupportedVersion(version));
        }
        let flags = r.u8("header")?;
        let group_size = r.u8("header")?;
        let orig_width = r.u16("header")?;
        let orig_height = r.u16("header")?;
        let padded_width = r.u16("header")?;
        let padded_height = r.u16("header")?;
        let pad_count = r.u8("header")?;
        let symbol_count = r.u32("header")?;

        if flags & !(FLAG_REDUCED | FLAG_DC_DIFF) != 0 {
            return Err(invariant(format!("reserved flag bits set: {flags:#04x}")));
        }
        let reduced = flags & FLAG_REDUCED != 0;
        if reduced != (group_size > 1) {
            return Err(invariant(format!(
                "reduced flag {} inconsistent with group size {group_size}",
                u8::from(reduced)
            )));
        }
        if group_size == 0 {
            return Err(invariant("group size 0"));
        }

        let quant_table = QuantTable::from_bytes(r.take(BLOCK_AREA, "quantization table")?)
            .map_err(|e| invariant(e.to_string()))?;

        let rest = &bytes[r.pos..];
        let codebook = if reduced {
            let (book, used) = deserialize_codebook::<CompositeSymbol>(rest, group_size.into())?;
            r.pos += used;
            StreamCodeBook::Reduced { group_size, book }
        } else {
            let (book, used) = deserialize_codebook::<i16>(rest, 1)?;
            r.pos += used;
            StreamCodeBook::Scalar(book)
        };

        let bit_len = u64::from(r.u32("payload length")?);
        let byte_len = bit_len.div_ceil(8) as usize;
        let payload = r.take(byte_len, "payload")?.to_vec();
        if r.pos != bytes.len() {
            return Err(ContainerError::TrailingData(bytes.len() - r.pos));
        }
        let file = CompressedFile {
            dc_diff: flags & FLAG_DC_DIFF != 0,
            orig_width,
            orig_height,
            padded_width,
            padded_height,
            pad_count,
            symbol_count,
            quant_table,
            codebook,
            payload: BitBuf::from_parts(payload, bit_len).expect("length checked above"),
        };
        file.validate()?;
        Ok(file)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &'static str) -> Result<&'a [u8], ContainerError> {
        let s = self
            .bytes
            .get(self.pos..self.pos + n)
            .ok_or(ContainerError::Truncated(what))?;
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self, what: &'static str) -> Result<u8, ContainerError> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &'static str) -> Result<u16, ContainerError> {
        let b = self.take(2, what)?;
        Ok(u16::from_be_bytes([b[0], b[1]]))
    }

    fn u32(&mut self, what: &'static str) -> Result<u32, ContainerError> {
        let b = self.take(4, what)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }
}
