//! Uniform quantization, zigzag scan and DC differential coding.

use thiserror::Error;

use crate::transform::{CoefficientBlock, BLOCK_AREA};

/// Largest quantized magnitude a block may hold.
pub const MAX_LEVEL: i16 = 2047;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantizeError {
    #[error("quantization step {0} at index {1} outside 1..=255")]
    BadStep(u8, usize),
    #[error("quantized level {value} at index {index} exceeds ±{MAX_LEVEL}")]
    LevelOutOfRange { value: f64, index: usize },
    #[error("expected {expected} coefficients, got {found}")]
    WrongLength { expected: usize, found: usize },
}

/// Row-major 8×8 quantization step sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuantTable([u8; BLOCK_AREA]);

/// The baseline luminance table from the ISO/ITU JPEG standard.
const STANDARD_LUMINANCE: [u8; BLOCK_AREA] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

impl QuantTable {
    pub fn new(steps: [u8; BLOCK_AREA]) -> Result<Self, QuantizeError> {
        match steps.iter().position(|&s| s == 0) {
            Some(i) => Err(QuantizeError::BadStep(0, i)),
            None => Ok(QuantTable(steps)),
        }
    }

    /// Parses the 64-byte row-major wire form.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, QuantizeError> {
        let steps: [u8; BLOCK_AREA] = bytes.try_into().map_err(|_| QuantizeError::WrongLength {
            expected: BLOCK_AREA,
            found: bytes.len(),
        })?;
        Self::new(steps)
    }

    pub fn steps(&self) -> &[u8; BLOCK_AREA] {
        &self.0
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.0[row * 8 + col]
    }
}

impl Default for QuantTable {
    fn default() -> Self {
        default_quant_table()
    }
}

pub fn default_quant_table() -> QuantTable {
    QuantTable(STANDARD_LUMINANCE)
}

/// Quantized levels, row-major like [`CoefficientBlock`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuantizedBlock(pub [i16; BLOCK_AREA]);

/// `round(F / q)` with ties away from zero.
pub fn quantize(
    coeffs: &CoefficientBlock,
    q: &QuantTable,
) -> Result<QuantizedBlock, QuantizeError> {
    let mut out = [0i16; BLOCK_AREA];
    for (k, (&f, &step)) in coeffs.0.iter().zip(q.0.iter()).enumerate() {
        let level = (f / f64::from(step)).round();
        if level.is_nan() || level.abs() > f64::from(MAX_LEVEL) {
            return Err(QuantizeError::LevelOutOfRange {
                value: level,
                index: k,
            });
        }
        out[k] = level as i16;
    }
    Ok(QuantizedBlock(out))
}

pub fn dequantize(levels: &QuantizedBlock, q: &QuantTable) -> CoefficientBlock {
    CoefficientBlock(std::array::from_fn(|k| {
        f64::from(levels.0[k]) * f64::from(q.0[k])
    }))
}

/// `ZIGZAG[s]` is the row-major index visited at scan position `s`.
pub const ZIGZAG: [usize; BLOCK_AREA] = [
    0, 1, 8, 16, 9, 2, 3, 10, //
    17, 24, 32, 25, 18, 11, 4, 5, //
    12, 19, 26, 33, 40, 48, 41, 34, //
    27, 20, 13, 6, 7, 14, 21, 28, //
    35, 42, 49, 56, 57, 50, 43, 36, //
    29, 22, 15, 23, 30, 37, 44, 51, //
    58, 59, 52, 45, 38, 31, 39, 46, //
    53, 60, 61, 54, 47, 55, 62, 63,
];

pub fn zigzag(block: &QuantizedBlock) -> [i16; BLOCK_AREA] {
    ZIGZAG.map(|idx| block.0[idx])
}

pub fn inverse_zigzag(seq: &[i16]) -> Result<QuantizedBlock, QuantizeError> {
    if seq.len() != BLOCK_AREA {
        return Err(QuantizeError::WrongLength {
            expected: BLOCK_AREA,
            found: seq.len(),
        });
    }
    let mut out = [0i16; BLOCK_AREA];
    for (&idx, &v) in ZIGZAG.iter().zip(seq) {
        out[idx] = v;
    }
    Ok(QuantizedBlock(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DcDirection {
    Encode,
    Decode,
}

/// Rewrites scan position 0 of each 64-coefficient block in place.
///
/// Encoding replaces every DC after the first with its difference from the
/// previous block's DC; decoding takes the running sum. Arithmetic wraps in
/// 16 bits, so the pair is an exact inverse for any input.
pub fn dc_differential(stream: &mut [i16], direction: DcDirection) -> Result<(), QuantizeError> {
    if !stream.len().is_multiple_of(BLOCK_AREA) {
        return Err(QuantizeError::WrongLength {
            expected: stream.len().div_ceil(BLOCK_AREA) * BLOCK_AREA,
            found: stream.len(),
        });
    }
    let mut prev = 0i16;
    for block in stream.chunks_exact_mut(BLOCK_AREA) {
        let dc = block[0];
        match direction {
            DcDirection::Encode => {
                block[0] = dc.wrapping_sub(prev);
                prev = dc;
            }
            DcDirection::Decode => {
                prev = prev.wrapping_add(dc);
                block[0] = prev;
            }
        }
    }
    Ok(())
}
