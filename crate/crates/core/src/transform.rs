//! Level shift and the orthonormal 8×8 DCT-II / DCT-III pair.
//!
//! Blocks are stored row-major: index `8*m + n` holds row `m`, column `n`.
//! For coefficients, the row index is the vertical frequency `i` and the
//! column the horizontal frequency `j`.

use std::f64::consts::PI;
use std::sync::LazyLock;

use thiserror::Error;

/// Block side length.
pub const BLOCK: usize = 8;
/// Samples per block.
pub const BLOCK_AREA: usize = BLOCK * BLOCK;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("frequency index {k} out of range for size {n}")]
    IndexOutOfRange { k: usize, n: usize },
}

/// Spatial-domain block of signed reals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PixelBlock(pub [f64; BLOCK_AREA]);

/// Frequency-domain block, `F(i, j)` at index `8*i + j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoefficientBlock(pub [f64; BLOCK_AREA]);

impl PixelBlock {
    pub fn zero() -> Self {
        PixelBlock([0.0; BLOCK_AREA])
    }

    /// Block of raw sample values, without any level shift.
    pub fn from_samples(samples: &[u8; BLOCK_AREA]) -> Self {
        PixelBlock(samples.map(f64::from))
    }
}

impl CoefficientBlock {
    pub fn zero() -> Self {
        CoefficientBlock([0.0; BLOCK_AREA])
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i * BLOCK + j]
    }
}

/// Maps `[0, 255]` to `[-128, 127]`.
pub fn level_shift(samples: &[u8; BLOCK_AREA]) -> PixelBlock {
    PixelBlock(samples.map(|s| f64::from(s) - 128.0))
}

/// Undoes [`level_shift`]: adds 128, rounds half away from zero and clamps to
/// `[0, 255]`.
pub fn inverse_level_shift(block: &PixelBlock) -> [u8; BLOCK_AREA] {
    block.0.map(|v| (v + 128.0).round().clamp(0.0, 255.0) as u8)
}

/// DCT normalization factor: `sqrt(1/n)` for `k = 0`, `sqrt(2/n)` otherwise.
pub fn alpha(k: usize, n: usize) -> Result<f64, TransformError> {
    if k >= n {
        return Err(TransformError::IndexOutOfRange { k, n });
    }
    let n = n as f64;
    Ok(if k == 0 {
        (1.0 / n).sqrt()
    } else {
        (2.0 / n).sqrt()
    })
}

/// `BASIS[k][m] = alpha(k) * cos(pi * (2m + 1) * k / 16)`; rows are orthonormal.
static BASIS: LazyLock<[[f64; BLOCK]; BLOCK]> = LazyLock::new(|| {
    let mut c = [[0.0; BLOCK]; BLOCK];
    for (k, row) in c.iter_mut().enumerate() {
        let a = alpha(k, BLOCK).expect("k < BLOCK");
        for (m, v) in row.iter_mut().enumerate() {
            *v = a * (PI * (2 * m + 1) as f64 * k as f64 / (2 * BLOCK) as f64).cos();
        }
    }
    c
});

/// Forward 2-D DCT, evaluated separably as `C · f · Cᵀ`.
pub fn fdct(block: &PixelBlock) -> CoefficientBlock {
    let c = &*BASIS;
    let f = &block.0;
    // rows first: tmp[i][n] = sum_m C[i][m] f[m][n]
    let mut tmp = [0.0; BLOCK_AREA];
    for i in 0..BLOCK {
        for m in 0..BLOCK {
            let cim = c[i][m];
            for n in 0..BLOCK {
                tmp[i * BLOCK + n] += cim * f[m * BLOCK + n];
            }
        }
    }
    let mut out = [0.0; BLOCK_AREA];
    for i in 0..BLOCK {
        for j in 0..BLOCK {
            out[i * BLOCK + j] = (0..BLOCK).map(|n| tmp[i * BLOCK + n] * c[j][n]).sum();
        }
    }
    CoefficientBlock(out)
}

/// Inverse 2-D DCT, `Cᵀ · F · C`.
pub fn idct(coeffs: &CoefficientBlock) -> PixelBlock {
    let c = &*BASIS;
    let big_f = &coeffs.0;
    let mut tmp = [0.0; BLOCK_AREA];
    for m in 0..BLOCK {
        for i in 0..BLOCK {
            let cim = c[i][m];
            for j in 0..BLOCK {
                tmp[m * BLOCK + j] += cim * big_f[i * BLOCK + j];
            }
        }
    }
    let mut out = [0.0; BLOCK_AREA];
    for m in 0..BLOCK {
        for n in 0..BLOCK {
            out[m * BLOCK + n] = (0..BLOCK).map(|j| tmp[m * BLOCK + j] * c[j][n]).sum();
        }
    }
    PixelBlock(out)
}
