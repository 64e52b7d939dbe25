//! End-to-end pipeline.
//!
//! Encoding: pad to 8×8 blocks, then per block level shift, DCT, quantize and
//! zigzag; optionally difference the DC terms; then entropy-code the whole
//! coefficient stream with one per-image codebook. Decoding runs the same
//! stages in reverse and crops to the original size.

use crate::container::{CompressedFile, StreamCodeBook};
use crate::entropy::{
    self, build_codebook, build_frequency_table, expand_symbols, reduce_symbols, CodeBook,
    CodeSymbol, DEFAULT_GROUP_SIZE,
};
use crate::error::{Error, Result};
use crate::image_io::{pad_to_blocks, Image};
use crate::metrics;
use crate::par::{self, Execution};
use crate::quantize::{
    self, dc_differential, default_quant_table, dequantize, inverse_zigzag, zigzag, DcDirection,
    QuantTable,
};
use crate::transform::{self, fdct, idct, inverse_level_shift, PixelBlock, BLOCK, BLOCK_AREA};

/// Largest dimension whose padded size still fits the container's `u16`.
pub const MAX_DIMENSION: usize = 65528;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EntropyMode {
    /// One Huffman symbol per coefficient.
    Scalar,
    /// One Huffman symbol per run of `group_size` coefficients.
    Reduced,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodecConfig {
    pub entropy_mode: EntropyMode,
    /// Must be 1 for [`EntropyMode::Scalar`] and 2..=255 for
    /// [`EntropyMode::Reduced`].
    pub group_size: usize,
    pub dc_diff: bool,
    pub quant_table: QuantTable,
    pub execution: Execution,
}

impl Default for CodecConfig {
    fn default() -> Self {
        CodecConfig::reduced(DEFAULT_GROUP_SIZE)
    }
}

impl CodecConfig {
    pub fn scalar() -> Self {
        CodecConfig {
            entropy_mode: EntropyMode::Scalar,
            group_size: 1,
            dc_diff: false,
            quant_table: default_quant_table(),
            execution: Execution::default(),
        }
    }

    pub fn reduced(group_size: usize) -> Self {
        CodecConfig {
            entropy_mode: EntropyMode::Reduced,
            group_size,
            ..CodecConfig::scalar()
        }
    }

    pub fn with_dc_diff(mut self, on: bool) -> Self {
        self.dc_diff = on;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match (self.entropy_mode, self.group_size) {
            (EntropyMode::Scalar, 1) | (EntropyMode::Reduced, 2..=255) => Ok(()),
            (EntropyMode::Scalar, g) => Err(Error::Config(format!(
                "scalar mode requires group size 1, got {g}"
            ))),
            (EntropyMode::Reduced, g) => Err(Error::Config(format!(
                "reduced mode requires group size in 2..=255, got {g}"
            ))),
        }
    }
}

/// Transforms and quantizes a block-aligned image into the concatenated
/// zigzag stream, blocks in row-major grid order.
///
/// `level_shift = false` feeds raw samples to the DCT; the pipeline always
/// shifts.
pub fn quantize_image(
    img: &Image,
    table: &QuantTable,
    level_shift: bool,
    exec: Execution,
) -> Result<Vec<i16>> {
    if !img.width().is_multiple_of(BLOCK) || !img.height().is_multiple_of(BLOCK) {
        return Err(Error::Invariant(format!(
            "image {}x{} is not block aligned",
            img.width(),
            img.height()
        )));
    }
    let blocks_x = img.width() / BLOCK;
    let blocks = par::map_range(exec, blocks_x * (img.height() / BLOCK), |b| {
        let (bx, by) = (b % blocks_x, b / blocks_x);
        let mut samples = [0u8; BLOCK_AREA];
        for (r, row) in samples.chunks_exact_mut(BLOCK).enumerate() {
            let start = (by * BLOCK + r) * img.width() + bx * BLOCK;
            row.copy_from_slice(&img.samples()[start..start + BLOCK]);
        }
        let pixels = if level_shift {
            transform::level_shift(&samples)
        } else {
            PixelBlock::from_samples(&samples)
        };
        quantize::quantize(&fdct(&pixels), table).map(|q| zigzag(&q))
    });
    let mut out = Vec::with_capacity(blocks.len() * BLOCK_AREA);
    for b in blocks {
        out.extend_from_slice(&b?);
    }
    Ok(out)
}

/// Inverse of [`quantize_image`] (with level shift): dequantize, inverse DCT,
/// round and clamp every block of a `width`×`height` block-aligned image.
pub fn reconstruct_image(
    levels: &[i16],
    width: usize,
    height: usize,
    table: &QuantTable,
    exec: Execution,
) -> Result<Image> {
    if levels.len() != width * height
        || !width.is_multiple_of(BLOCK)
        || !height.is_multiple_of(BLOCK)
    {
        return Err(Error::Invariant(format!(
            "{} levels cannot fill a {width}x{height} block-aligned image",
            levels.len()
        )));
    }
    let blocks_x = width / BLOCK;
    let chunks: Vec<&[i16]> = levels.chunks_exact(BLOCK_AREA).collect();
    let blocks = par::map(exec, &chunks, |seq| {
        inverse_zigzag(seq).map(|q| inverse_level_shift(&idct(&dequantize(&q, table))))
    });
    let mut samples = vec![0u8; width * height];
    for (b, block) in blocks.into_iter().enumerate() {
        let block = block?;
        let (bx, by) = (b % blocks_x, b / blocks_x);
        for (r, row) in block.chunks_exact(BLOCK).enumerate() {
            let start = (by * BLOCK + r) * width + bx * BLOCK;
            samples[start..start + BLOCK].copy_from_slice(row);
        }
    }
    Ok(Image::new(width, height, samples)?)
}

struct CodedStream {
    codebook: StreamCodeBook,
    payload: entropy::BitBuf,
    symbol_count: usize,
    pad_count: usize,
}

fn code_with_book<S: CodeSymbol>(symbols: &[S]) -> Result<(CodeBook<S>, entropy::BitBuf)> {
    let book = build_codebook(&build_frequency_table(symbols)?)?;
    let bits = entropy::encode(symbols, &book)?;
    Ok((book, bits))
}

fn entropy_code(levels: &[i16], cfg: &CodecConfig) -> Result<CodedStream> {
    match cfg.entropy_mode {
        EntropyMode::Scalar => {
            let (book, payload) = code_with_book(levels)?;
            Ok(CodedStream {
                codebook: StreamCodeBook::Scalar(book),
                payload,
                symbol_count: levels.len(),
                pad_count: 0,
            })
        }
        EntropyMode::Reduced => {
            let (composites, pad_count) = reduce_symbols(levels, cfg.group_size)?;
            let (book, payload) = code_with_book(&composites)?;
            Ok(CodedStream {
                codebook: StreamCodeBook::Reduced {
                    group_size: cfg.group_size as u8,
                    book,
                },
                payload,
                symbol_count: composites.len(),
                pad_count,
            })
        }
    }
}

pub fn compress(img: &Image, cfg: &CodecConfig) -> Result<CompressedFile> {
    cfg.validate()?;
    if img.width() > MAX_DIMENSION || img.height() > MAX_DIMENSION {
        return Err(Error::Config(format!(
            "image {}x{} exceeds the {MAX_DIMENSION} pixel limit",
            img.width(),
            img.height()
        )));
    }
    let padded = pad_to_blocks(img);
    let mut levels = quantize_image(&padded, &cfg.quant_table, true, cfg.execution)?;
    if cfg.dc_diff {
        dc_differential(&mut levels, DcDirection::Encode)?;
    }
    let coded = entropy_code(&levels, cfg)?;
    let symbol_count = u32::try_from(coded.symbol_count)
        .map_err(|_| Error::Config("too many symbols for the container".into()))?;
    let file = CompressedFile {
        dc_diff: cfg.dc_diff,
        orig_width: img.width() as u16,
        orig_height: img.height() as u16,
        padded_width: padded.width() as u16,
        padded_height: padded.height() as u16,
        pad_count: coded.pad_count as u8,
        symbol_count,
        quant_table: cfg.quant_table,
        codebook: coded.codebook,
        payload: coded.payload,
    };
    file.validate()?;
    Ok(file)
}

/// Entropy-decodes the payload back to the quantized zigzag stream, with DC
/// differencing undone.
pub fn decode_levels(file: &CompressedFile) -> Result<Vec<i16>> {
    file.validate()?;
    let count = file.symbol_count as usize;
    let mut levels = match &file.codebook {
        StreamCodeBook::Scalar(book) => entropy::decode(&file.payload, book, count)?,
        StreamCodeBook::Reduced { group_size, book } => {
            let composites = entropy::decode(&file.payload, book, count)?;
            expand_symbols(&composites, (*group_size).into(), file.pad_count.into())?
        }
    };
    if file.dc_diff {
        dc_differential(&mut levels, DcDirection::Decode)?;
    }
    Ok(levels)
}

pub fn decompress(file: &CompressedFile) -> Result<Image> {
    decompress_with(file, Execution::default())
}

pub fn decompress_with(file: &CompressedFile, exec: Execution) -> Result<Image> {
    let levels = decode_levels(file)?;
    let padded = reconstruct_image(
        &levels,
        file.padded_width.into(),
        file.padded_height.into(),
        &file.quant_table,
        exec,
    )?;
    Ok(padded.crop(file.orig_width.into(), file.orig_height.into())?)
}

/// Statistics of the coded symbol alphabet of a file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyStats {
    /// Empirical entropy of the coded symbols, bits per coded symbol.
    pub entropy_bits: f64,
    /// Average codeword length, bits per coded symbol.
    pub l_avg: f64,
    pub alphabet_size: usize,
}

fn stats_for<S: CodeSymbol>(symbols: &[S], book: &CodeBook<S>) -> Result<EntropyStats> {
    let freqs = build_frequency_table(symbols)?;
    let wrap = |e: metrics::MetricsError| Error::Invariant(e.to_string());
    Ok(EntropyStats {
        entropy_bits: metrics::empirical_entropy(&freqs).map_err(wrap)?,
        l_avg: metrics::average_code_length(book, &freqs).map_err(wrap)?,
        alphabet_size: book.len(),
    })
}

pub fn entropy_stats(file: &CompressedFile) -> Result<EntropyStats> {
    let count = file.symbol_count as usize;
    match &file.codebook {
        StreamCodeBook::Scalar(book) => {
            stats_for(&entropy::decode(&file.payload, book, count)?, book)
        }
        StreamCodeBook::Reduced { book, .. } => {
            stats_for(&entropy::decode(&file.payload, book, count)?, book)
        }
    }
}
