use thiserror::Error;

use crate::container::ContainerError;
use crate::entropy::EntropyError;
use crate::image_io::ImageError;
use crate::quantize::QuantizeError;
use crate::transform::TransformError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Quantize(#[from] QuantizeError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Container(#[from] ContainerError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{what}: {source}")]
    Io {
        what: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Coarse grouping of errors, used for exit codes and error prefixes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Io,
    Format,
    Invariant,
}

impl Error {
    pub fn io(what: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            what: what.into(),
            source,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_) => ErrorClass::Usage,
            Error::Io { .. } => ErrorClass::Io,
            Error::Invariant(_) => ErrorClass::Invariant,
            _ => ErrorClass::Format,
        }
    }

    /// Short kebab-case tag naming the specific failure.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Image(e) => match e {
                ImageError::BadMagic => "pgm-bad-magic",
                ImageError::MaxvalOutOfRange(_) => "pgm-maxval",
                ImageError::Truncated { .. } => "pgm-truncated",
                ImageError::MalformedHeader(_) => "pgm-header",
                ImageError::SampleOutOfRange { .. } => "pgm-sample",
                ImageError::InvalidDimensions { .. } => "image-dimensions",
            },
            Error::Transform(_) => "transform",
            Error::Quantize(_) => "quantize",
            Error::Entropy(e) => entropy_tag(e),
            Error::Container(e) => match e {
                ContainerError::BadMagic => "bad-magic",
                ContainerError::UnsupportedVersion(_) => "unsupported-version",
                ContainerError::Truncated(_) => "truncated",
                ContainerError::TrailingData(_) => "trailing-data",
                ContainerError::Invariant(_) => "container-invariant",
                ContainerError::Codebook(e) => entropy_tag(e),
            },
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
            Error::Invariant(_) => "invariant",
        }
    }
}

fn entropy_tag(e: &EntropyError) -> &'static str {
    match e {
        EntropyError::EmptyInput => "empty-input",
        EntropyError::BadGroupSize(_) => "bad-group-size",
        EntropyError::BadPadCount { .. } => "bad-pad-count",
        EntropyError::ArityMismatch { .. } => "arity-mismatch",
        EntropyError::MissingSymbol(_) => "missing-symbol",
        EntropyError::BitsExhausted { .. } => "bits-exhausted",
        EntropyError::InvalidCode { .. } => "invalid-code",
        EntropyError::DanglingBits { .. } => "dangling-bits",
        EntropyError::BadCodeLength(_) => "bad-code-length",
        EntropyError::KraftViolation => "kraft-violation",
        EntropyError::NonCanonical => "non-canonical",
        EntropyError::Truncated => "truncated",
    }
}
