//! 8-bit grayscale images: PGM (P2/P5) reading and writing, synthetic test
//! patterns and block-alignment padding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::transform::BLOCK;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ImageError {
    #[error("bad magic: expected P2 or P5")]
    BadMagic,
    #[error("maxval {0} out of range (1..=255)")]
    MaxvalOutOfRange(u32),
    #[error("truncated sample data: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("malformed header: {0}")]
    MalformedHeader(&'static str),
    #[error("sample value {value} exceeds maxval {maxval}")]
    SampleOutOfRange { value: u32, maxval: u32 },
    #[error("invalid dimensions {width}x{height} for {len} samples")]
    InvalidDimensions {
        width: usize,
        height: usize,
        len: usize,
    },
}

/// Row-major grid of 8-bit grayscale samples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Image {
    width: usize,
    height: usize,
    samples: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 || width.checked_mul(height) != Some(samples.len()) {
            return Err(ImageError::InvalidDimensions {
                width,
                height,
                len: samples.len(),
            });
        }
        Ok(Image {
            width,
            height,
            samples,
        })
    }

    /// Image of one repeated value.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self, ImageError> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.samples[y * self.width + x]
    }

    /// Top-left `width`×`height` region.
    pub fn crop(&self, width: usize, height: usize) -> Result<Image, ImageError> {
        if width == 0 || height == 0 || width > self.width || height > self.height {
            return Err(ImageError::InvalidDimensions {
                width,
                height,
                len: self.samples.len(),
            });
        }
        let mut out = Vec::with_capacity(width * height);
        for row in self.samples.chunks_exact(self.width).take(height) {
            out.extend_from_slice(&row[..width]);
        }
        Image::new(width, height, out)
    }
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Next unsigned decimal token, or `None` at end of input.
    fn number(&mut self) -> Result<Option<u32>, ImageError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.bytes.get(self.pos) {
                None => Ok(None),
                Some(_) => Err(ImageError::MalformedHeader("expected a decimal number")),
            };
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map(Some)
            .ok_or(ImageError::MalformedHeader("number too large"))
    }

    fn required(&mut self, what: &'static str) -> Result<u32, ImageError> {
        self.number()?.ok_or(ImageError::MalformedHeader(what))
    }
}

/// Parses a binary (P5) or ASCII (P2) PGM with maxval ≤ 255.
///
/// Sample values are returned as stored; no rescaling is applied for
/// maxval < 255.
pub fn read_pgm(bytes: &[u8]) -> Result<Image, ImageError> {
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(ImageError::BadMagic),
    };
    let mut cur = HeaderCursor { bytes, pos: 2 };
    if !cur
        .bytes
        .get(2)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(ImageError::BadMagic);
    }
    let width = cur.required("missing width")? as usize;
    let height = cur.required("missing height")? as usize;
    let maxval = cur.required("missing maxval")?;
    if width == 0 || height == 0 {
        return Err(ImageError::MalformedHeader("zero dimension"));
    }
    if maxval == 0 || maxval > 255 {
        return Err(ImageError::MaxvalOutOfRange(maxval));
    }
    let expected = width
        .checked_mul(height)
        .ok_or(ImageError::MalformedHeader("dimensions overflow"))?;

    let samples = if binary {
        // exactly one whitespace byte separates maxval from the raster
        if !cur.bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
            return Err(ImageError::MalformedHeader("missing raster separator"));
        }
        let raster = &bytes[cur.pos + 1..];
        if raster.len() < expected {
            return Err(ImageError::Truncated {
                expected,
                found: raster.len(),
            });
        }
        let raster = &raster[..expected];
        if let Some(&v) = raster.iter().find(|&&v| u32::from(v) > maxval) {
            return Err(ImageError::SampleOutOfRange {
                value: v.into(),
                maxval,
            });
        }
        raster.to_vec()
    } else {
        let mut out = Vec::with_capacity(expected);
        while out.len() < expected {
            match cur.number()? {
                Some(v) if v > maxval => {
                    return Err(ImageError::SampleOutOfRange { value: v, maxval })
                }
                Some(v) => out.push(v as u8),
                None => {
                    return Err(ImageError::Truncated {
                        expected,
                        found: out.len(),
                    })
                }
            }
        }
        out
    };
    Image::new(width, height, samples)
}

/// Serializes as binary P5 with maxval 255.
pub fn write_pgm(img: &Image) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.samples);
    out
}

/// Synthetic patterns used when no natural test images are available.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TestPattern {
    /// Horizontal ramp: `floor(255·x / (width−1))`.
    Gradient,
    /// Black/white squares of side `max(1, min(width, height) / 8)`, black at
    /// the origin.
    Checker,
    /// Uniform i.i.d. samples from a seeded ChaCha8 stream.
    Noise,
}

impl TestPattern {
    pub const ALL: [TestPattern; 3] = [
        TestPattern::Gradient,
        TestPattern::Checker,
        TestPattern::Noise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TestPattern::Gradient => "gradient",
            TestPattern::Checker => "checker",
            TestPattern::Noise => "noise",
        }
    }
}

/// Deterministic for fixed arguments. Zero dimensions are raised to 1.
pub fn generate_test_image(kind: TestPattern, width: usize, height: usize, seed: u64) -> Image {
    let (width, height) = (width.max(1), height.max(1));
    let samples = match kind {
        TestPattern::Gradient => {
            let denom = (width - 1).max(1);
            (0..height)
                .flat_map(|_| (0..width).map(move |x| (255 * x / denom) as u8))
                .collect()
        }
        TestPattern::Checker => {
            let cell = (width.min(height) / 8).max(1);
            (0..height)
                .flat_map(|y| {
                    (0..width).map(move |x| {
                        if (x / cell + y / cell) % 2 == 0 {
                            0
                        } else {
                            255
                        }
                    })
                })
                .collect()
        }
        TestPattern::Noise => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..width * height).map(|_| rng.random::<u8>()).collect()
        }
    };
    Image {
        width,
        height,
        samples,
    }
}

/// Rounds both dimensions up to a multiple of 8 by replicating the last
/// column and row.
pub fn pad_to_blocks(img: &Image) -> Image {
    let width = img.width.div_ceil(BLOCK) * BLOCK;
    let height = img.height.div_ceil(BLOCK) * BLOCK;
    if width == img.width && height == img.height {
        return img.clone();
    }
    let mut samples = Vec::with_capacity(width * height);
    for y in 0..height {
        let row = &img.samples[y.min(img.height - 1) * img.width..][..img.width];
        samples.extend_from_slice(row);
        let last = row[img.width - 1];
        samples.resize(samples.len() + (width - img.width), last);
    }
    Image {
        width,
        height,
        samples,
    }
}
