//! Entropy, average code length, compression ratio and PSNR.

use serde::Serialize;
use thiserror::Error;

use crate::entropy::{CodeBook, CodeSymbol, FrequencyTable};
use crate::image_io::Image;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("empty frequency table")]
    EmptyTable,
    #[error("symbol {0} has no codeword")]
    UncoveredSymbol(String),
    #[error("compressed size is zero")]
    ZeroSize,
    #[error("image dimensions differ: {0:?} vs {1:?}")]
    DimensionMismatch((usize, usize), (usize, usize)),
}

/// First-order empirical entropy in bits per symbol, `−Σ p·log2 p` with
/// `p = count / total`.
pub fn empirical_entropy<S: CodeSymbol>(freqs: &FrequencyTable<S>) -> Result<f64, MetricsError> {
    if freqs.is_empty() {
        return Err(MetricsError::EmptyTable);
    }
    let total = freqs.total() as f64;
    let h: f64 = freqs
        .iter()
        .map(|(_, c)| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    // a one-symbol alphabet yields -1·log2(1) = -0.0
    Ok(h.max(0.0))
}

/// Expected code length `Σ len(s)·p(s)` in bits per symbol.
pub fn average_code_length<S: CodeSymbol>(
    book: &CodeBook<S>,
    freqs: &FrequencyTable<S>,
) -> Result<f64, MetricsError> {
    if freqs.is_empty() {
        return Err(MetricsError::EmptyTable);
    }
    let mut bits = 0u128;
    for (s, c) in freqs.iter() {
        let len = book
            .length_of(s)
            .ok_or_else(|| MetricsError::UncoveredSymbol(format!("{s:?}")))?;
        bits += u128::from(c) * u128::from(len);
    }
    Ok(bits as f64 / freqs.total() as f64)
}

/// `original_bits / compressed_bits`.
pub fn compression_ratio(original_bits: u64, compressed_bits: u64) -> Result<f64, MetricsError> {
    if compressed_bits == 0 {
        return Err(MetricsError::ZeroSize);
    }
    Ok(original_bits as f64 / compressed_bits as f64)
}

/// Raw size of an 8-bit grayscale image in bits.
pub fn original_bits(width: usize, height: usize) -> u64 {
    (width * height * 8) as u64
}

/// Peak signal-to-noise ratio in dB for 8-bit samples; `+inf` for identical
/// images.
pub fn psnr(a: &Image, b: &Image) -> Result<f64, MetricsError> {
    if (a.width(), a.height()) != (b.width(), b.height()) {
        return Err(MetricsError::DimensionMismatch(
            (a.width(), a.height()),
            (b.width(), b.height()),
        ));
    }
    let sse: u64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| {
            let d = i64::from(x) - i64::from(y);
            (d * d) as u64
        })
        .sum();
    if sse == 0 {
        return Ok(f64::INFINITY);
    }
    let mse = sse as f64 / a.samples().len() as f64;
    Ok(10.0 * (255.0f64 * 255.0 / mse).log10())
}

/// Which entropy coder produced a stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeLabel {
    Scalar,
    Reduced,
}

impl std::fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModeLabel::Scalar => "scalar",
            ModeLabel::Reduced => "reduced",
        })
    }
}

/// Outcome of compressing one image under one configuration.
///
/// `entropy_bits` and `l_avg` are per coded symbol, so for reduced streams
/// they refer to the composite alphabet.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompressionReport {
    pub image: String,
    pub mode: ModeLabel,
    pub group_size: u8,
    pub dc_diff: bool,
    pub entropy_bits: f64,
    pub l_avg: f64,
    pub payload_cr: f64,
    pub file_cr: f64,
    pub psnr_db: f64,
    pub payload_bits: u64,
    pub file_bytes: u64,
    pub alphabet_size: usize,
}

impl std::fmt::Display for CompressionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} mode={} g={} dc_diff={} H={:.4} L_avg={:.4} payload_cr={:.4} file_cr={:.4} psnr_db={} alphabet={} payload_bits={} file_bytes={}",
            self.image,
            self.mode,
            self.group_size,
            u8::from(self.dc_diff),
            self.entropy_bits,
            self.l_avg,
            self.payload_cr,
            self.file_cr,
            format_db(self.psnr_db),
            self.alphabet_size,
            self.payload_bits,
            self.file_bytes,
        )
    }
}

/// `inf` for infinite values, otherwise four decimals.
pub fn format_db(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_owned()
    } else {
        format!("{v:.4}")
    }
}
