use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use super::bits::{BitBuf, BitReader, BitWriter};
use super::{CodeSymbol, EntropyError, FrequencyTable};

/// Longest codeword the book (and its wire format) supports.
pub const MAX_CODE_LEN: u8 = 64;

/// Canonical prefix code.
///
/// Entries are kept in canonical order, sorted by `(length, symbol)`, and
/// codes are assigned consecutively in that order, so the lengths alone
/// determine the whole book.
#[derive(Clone, Debug)]
pub struct CodeBook<S: CodeSymbol> {
    symbols: Vec<S>,
    lengths: Vec<u8>,
    codes: Vec<u64>,
    index: HashMap<S, u32>,
    // decode tables, indexed by code length
    first_code: [u64; MAX_CODE_LEN as usize + 1],
    count: [u64; MAX_CODE_LEN as usize + 1],
    offset: [usize; MAX_CODE_LEN as usize + 1],
    max_len: u8,
}

impl<S: CodeSymbol> PartialEq for CodeBook<S> {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols && self.lengths == other.lengths
    }
}

impl<S: CodeSymbol> Eq for CodeBook<S> {}

impl<S: CodeSymbol> CodeBook<S> {
    /// Builds a book from `(symbol, length)` pairs that are already in
    /// canonical order.
    ///
    /// Rejects lengths outside `1..=64`, out-of-order or duplicate entries,
    /// and length sets that do not satisfy Kraft with equality. A lone symbol
    /// must have length 1.
    pub fn from_canonical_lengths(entries: Vec<(S, u8)>) -> Result<Self, EntropyError> {
        if entries.is_empty() {
            return Err(EntropyError::EmptyInput);
        }
        if let Some(&(_, l)) = entries.iter().find(|(_, l)| *l == 0 || *l > MAX_CODE_LEN) {
            return Err(EntropyError::BadCodeLength(l));
        }
        if entries
            .windows(2)
            .any(|w| (w[0].1, &w[0].0) >= (w[1].1, &w[1].0))
        {
            return Err(EntropyError::NonCanonical);
        }
        if entries.len() == 1 {
            if entries[0].1 != 1 {
                return Err(EntropyError::KraftViolation);
            }
        } else {
            let kraft: u128 = entries
                .iter()
                .map(|&(_, l)| 1u128 << (MAX_CODE_LEN - l))
                .sum();
            if kraft != 1u128 << MAX_CODE_LEN {
                return Err(EntropyError::KraftViolation);
            }
        }

        let n = entries.len();
        let mut symbols = Vec::with_capacity(n);
        let mut lengths = Vec::with_capacity(n);
        let mut codes = Vec::with_capacity(n);
        let mut index = HashMap::with_capacity(n);
        let mut first_code = [0u64; MAX_CODE_LEN as usize + 1];
        let mut count = [0u64; MAX_CODE_LEN as usize + 1];
        let mut offset = [0usize; MAX_CODE_LEN as usize + 1];

        let mut code = 0u64;
        let mut prev_len = entries[0].1;
        for (i, (sym, len)) in entries.into_iter().enumerate() {
            if i > 0 {
                code = (code + 1) << (len - prev_len);
            }
            let l = len as usize;
            if count[l] == 0 {
                first_code[l] = code;
                offset[l] = i;
            }
            count[l] += 1;
            index.insert(sym.clone(), i as u32);
            symbols.push(sym);
            lengths.push(len);
            codes.push(code);
            prev_len = len;
        }
        Ok(CodeBook {
            symbols,
            lengths,
            codes,
            index,
            first_code,
            count,
            offset,
            max_len: prev_len,
        })
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn max_code_len(&self) -> u8 {
        self.max_len
    }

    /// `(code, length)` for a symbol.
    pub fn code_of(&self, s: &S) -> Option<(u64, u8)> {
        self.index
            .get(s)
            .map(|&i| (self.codes[i as usize], self.lengths[i as usize]))
    }

    pub fn length_of(&self, s: &S) -> Option<u8> {
        self.index.get(s).map(|&i| self.lengths[i as usize])
    }

    /// `(symbol, code, length)` in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&S, u64, u8)> + '_ {
        self.symbols
            .iter()
            .zip(&self.codes)
            .zip(&self.lengths)
            .map(|((s, &c), &l)| (s, c, l))
    }

    /// Σ 2^(−length).
    pub fn kraft_sum(&self) -> f64 {
        self.lengths.iter().map(|&l| 0.5f64.powi(l.into())).sum()
    }

    /// `(length, number of codes with that length)`, ascending.
    pub fn length_histogram(&self) -> Vec<(u8, usize)> {
        (1..=self.max_len)
            .filter(|&l| self.count[l as usize] > 0)
            .map(|l| (l, self.count[l as usize] as usize))
            .collect()
    }

    /// Codeword rendered as '0'/'1'.
    pub fn code_string(&self, s: &S) -> Option<String> {
        self.code_of(s).map(|(c, l)| {
            (0..l)
                .rev()
                .map(|i| if (c >> i) & 1 == 1 { '1' } else { '0' })
                .collect()
        })
    }
}

/// Huffman code lengths by repeated merging of the two lightest nodes,
/// converted to a canonical book.
///
/// Ties are broken by the smallest symbol contained in each node, which makes
/// the result independent of hash order and platform.
pub fn build_codebook<S: CodeSymbol>(
    freqs: &FrequencyTable<S>,
) -> Result<CodeBook<S>, EntropyError> {
    let n = freqs.len();
    if n == 0 {
        return Err(EntropyError::EmptyInput);
    }
    let symbols: Vec<&S> = freqs.iter().map(|(s, _)| s).collect();
    let lengths: Vec<usize> = if n == 1 {
        vec![1]
    } else {
        // leaves are 0..n in canonical order; internal nodes follow
        let mut parent = vec![usize::MAX; 2 * n - 1];
        let mut heap: BinaryHeap<Reverse<(u64, usize, usize)>> = freqs
            .iter()
            .enumerate()
            .map(|(rank, (_, c))| Reverse((c, rank, rank)))
            .collect();
        let mut next = n;
        while heap.len() > 1 {
            let Reverse((wa, ra, a)) = heap.pop().expect("len > 1");
            let Reverse((wb, rb, b)) = heap.pop().expect("len > 1");
            parent[a] = next;
            parent[b] = next;
            heap.push(Reverse((wa + wb, ra.min(rb), next)));
            next += 1;
        }
        let mut depth = vec![0usize; 2 * n - 1];
        for node in (0..2 * n - 2).rev() {
            depth[node] = depth[parent[node]] + 1;
        }
        depth.truncate(n);
        depth
    };
    if let Some(&too_long) = lengths.iter().find(|&&l| l > MAX_CODE_LEN as usize) {
        return Err(EntropyError::BadCodeLength(too_long.min(255) as u8));
    }
    let mut entries: Vec<(S, u8)> = symbols
        .into_iter()
        .cloned()
        .zip(lengths.into_iter().map(|l| l as u8))
        .collect();
    entries.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    CodeBook::from_canonical_lengths(entries)
}

/// Concatenates the codewords of `seq`.
pub fn encode<S: CodeSymbol>(seq: &[S], book: &CodeBook<S>) -> Result<BitBuf, EntropyError> {
    let mut w = BitWriter::with_capacity_bits(seq.len() * 2);
    for s in seq {
        let (code, len) = book
            .code_of(s)
            .ok_or_else(|| EntropyError::MissingSymbol(format!("{s:?}")))?;
        w.write_bits(code, len);
    }
    Ok(w.finish())
}

/// Decodes exactly `symbol_count` symbols; every bit of `bits` must be used.
pub fn decode<S: CodeSymbol>(
    bits: &BitBuf,
    book: &CodeBook<S>,
    symbol_count: usize,
) -> Result<Vec<S>, EntropyError> {
    let mut r = BitReader::new(bits);
    let mut out = Vec::with_capacity(symbol_count);
    while out.len() < symbol_count {
        let start = r.position();
        let mut code = 0u64;
        let mut len = 0usize;
        let idx = loop {
            let bit = r.read_bit().ok_or(EntropyError::BitsExhausted {
                decoded: out.len(),
                expected: symbol_count,
            })?;
            code = (code << 1) | u64::from(bit);
            len += 1;
            let rel = code.wrapping_sub(book.first_code[len]);
            if book.count[len] > 0 && code >= book.first_code[len] && rel < book.count[len] {
                break book.offset[len] + rel as usize;
            }
            if len >= book.max_len as usize {
                return Err(EntropyError::InvalidCode { at_bit: start });
            }
        };
        out.push(book.symbols[idx].clone());
    }
    match r.remaining() {
        0 => Ok(out),
        count => Err(EntropyError::DanglingBits { count }),
    }
}
