//! Grayscale block-DCT image codec with a pluggable entropy stage.
//!
//! The pipeline follows classic baseline JPEG for the lossy part (8×8 blocks,
//! level shift, orthonormal DCT, uniform quantization, zigzag scan) and then
//! entropy-codes the raw quantized coefficients with canonical Huffman codes,
//! either one coefficient per symbol or after grouping `g` consecutive
//! coefficients into composite symbols.
//!
//! ```
//! use hjpeg::{codec, image_io, CodecConfig};
//!
//! let img = image_io::generate_test_image(image_io::TestPattern::Gradient, 16, 16, 0);
//! let file = codec::compress(&img, &CodecConfig::reduced(4)).unwrap();
//! let back = codec::decompress(&file).unwrap();
//! assert_eq!((back.width(), back.height()), (16, 16));
//! ```

pub mod bench;
pub mod codec;
pub mod container;
pub mod entropy;
mod error;
pub mod image_io;
pub mod metrics;
pub mod par;
pub mod quantize;
pub mod transform;

pub use codec::{CodecConfig, EntropyMode};
pub use container::CompressedFile;
pub use error::{Error, ErrorClass, Result};
pub use image_io::Image;
pub use par::Execution;
