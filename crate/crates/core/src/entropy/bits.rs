//! MSB-first bit packing.

/// Bit string packed MSB-first into bytes; the last byte is zero-padded.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitBuf {
    bytes: Vec<u8>,
    bit_len: u64,
}

impl BitBuf {
    /// Wraps already-packed bytes. Fails unless `bytes` holds exactly
    /// `ceil(bit_len / 8)` bytes.
    pub fn from_parts(bytes: Vec<u8>, bit_len: u64) -> Option<Self> {
        (bytes.len() as u64 == bit_len.div_ceil(8)).then_some(BitBuf { bytes, bit_len })
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn bit_len(&self) -> u64 {
        self.bit_len
    }

    /// Renders as a string of '0'/'1'.
    pub fn to_bit_string(&self) -> String {
        let mut r = BitReader::new(self);
        std::iter::from_fn(|| r.read_bit().map(|b| if b { '1' } else { '0' })).collect()
    }

    /// Parses a string of '0'/'1'; any other character yields `None`.
    pub fn from_bit_string(s: &str) -> Option<Self> {
        let mut w = BitWriter::new();
        for c in s.chars() {
            match c {
                '0' => w.write_bit(false),
                '1' => w.write_bit(true),
                _ => return None,
            }
        }
        Some(w.finish())
    }
}

#[derive(Debug, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    cur: u8,
    used: u8,
    bit_len: u64,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity_bits(bits: usize) -> Self {
        BitWriter {
            bytes: Vec::with_capacity(bits.div_ceil(8)),
            ..Self::default()
        }
    }

    #[inline]
    pub fn write_bit(&mut self, bit: bool) {
        self.cur |= u8::from(bit) << (7 - self.used);
        self.used += 1;
        self.bit_len += 1;
        if self.used == 8 {
            self.bytes.push(self.cur);
            self.cur = 0;
            self.used = 0;
        }
    }

    /// Writes the low `len` bits of `value`, most significant first.
    #[inline]
    pub fn write_bits(&mut self, value: u64, len: u8) {
        debug_assert!(len <= 64);
        for i in (0..len).rev() {
            self.write_bit((value >> i) & 1 == 1);
        }
    }

    pub fn finish(mut self) -> BitBuf {
        if self.used > 0 {
            self.bytes.push(self.cur);
        }
        BitBuf {
            bytes: self.bytes,
            bit_len: self.bit_len,
        }
    }
}

/// Reads at most `bit_len` bits; padding in the final byte is never exposed.
#[derive(Debug)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: u64,
    bit_len: u64,
}

impl<'a> BitReader<'a> {
    pub fn new(buf: &'a BitBuf) -> Self {
        BitReader {
            bytes: &buf.bytes,
            pos: 0,
            bit_len: buf.bit_len,
        }
    }

    #[inline]
    pub fn read_bit(&mut self) -> Option<bool> {
        if self.pos >= self.bit_len {
            return None;
        }
        let byte = self.bytes[(self.pos / 8) as usize];
        let bit = (byte >> (7 - (self.pos % 8))) & 1 == 1;
        self.pos += 1;
        Some(bit)
    }

    pub fn position(&self) -> u64 {
        self.pos
    }

    pub fn remaining(&self) -> u64 {
        self.bit_len - self.pos
    }
}
