//! Codebook byte layout: symbol count as big-endian `u32`, then for each
//! entry in canonical order its `g` parts as big-endian `i16` followed by a
//! one-byte code length.

use super::{CodeBook, CodeSymbol, EntropyError};

pub fn serialize_codebook<S: CodeSymbol>(
    book: &CodeBook<S>,
    g: usize,
) -> Result<Vec<u8>, EntropyError> {
    let mut out = Vec::with_capacity(4 + book.len() * (2 * g + 1));
    out.extend_from_slice(&(book.len() as u32).to_be_bytes());
    for (s, _, len) in book.iter() {
        let parts = s.parts();
        if parts.len() != g {
            return Err(EntropyError::ArityMismatch {
                expected: g,
                found: parts.len(),
            });
        }
        for p in parts {
            out.extend_from_slice(&p.to_be_bytes());
        }
        out.push(len);
    }
    Ok(out)
}

/// Parses a codebook from the front of `bytes`, returning it with the number
/// of bytes consumed.
pub fn deserialize_codebook<S: CodeSymbol>(
    bytes: &[u8],
    g: usize,
) -> Result<(CodeBook<S>, usize), EntropyError> {
    if g == 0 {
        return Err(EntropyError::BadGroupSize(g));
    }
    let head: [u8; 4] = bytes
        .get(..4)
        .and_then(|b| b.try_into().ok())
        .ok_or(EntropyError::Truncated)?;
    let n = u32::from_be_bytes(head) as usize;
    let entry = 2 * g + 1;
    let body_len = n.checked_mul(entry).ok_or(EntropyError::Truncated)?;
    let body = bytes.get(4..4 + body_len).ok_or(EntropyError::Truncated)?;

    let mut entries = Vec::with_capacity(n);
    let mut parts = vec![0i16; g];
    for rec in body.chunks_exact(entry) {
        for (p, b) in parts.iter_mut().zip(rec.chunks_exact(2)) {
            *p = i16::from_be_bytes([b[0], b[1]]);
        }
        let sym = S::from_parts(&parts).ok_or(EntropyError::ArityMismatch {
            expected: 1,
            found: g,
        })?;
        entries.push((sym, rec[entry - 1]));
    }
    Ok((CodeBook::from_canonical_lengths(entries)?, 4 + body_len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{build_codebook, build_frequency_table, reduce_symbols, CompositeSymbol};
    use proptest::prelude::*;

    #[test]
    fn composite_pair_layout() {
        let seq: Vec<i16> = (1..=8).collect();
        let (r, _) = reduce_symbols(&seq, 4).unwrap();
        let book = build_codebook(&build_frequency_table(&r).unwrap()).unwrap();
        let bytes = serialize_codebook(&book, 4).unwrap();
        assert_eq!(bytes.len(), 22);
        assert_eq!(&bytes[..4], &[0, 0, 0, 2]);
        assert_eq!(&bytes[4..13], &[0, 1, 0, 2, 0, 3, 0, 4, 1]);
        let (back, used) = deserialize_codebook::<CompositeSymbol>(&bytes, 4).unwrap();
        assert_eq!((back, used), (book, 22));
    }

    #[test]
    fn full_byte_alphabet_size() {
        let seq: Vec<i16> = (-128..128).collect();
        let book = build_codebook(&build_frequency_table(&seq).unwrap()).unwrap();
        assert_eq!(serialize_codebook(&book, 1).unwrap().len(), 4 + 256 * 3);
    }

    #[test]
    fn negative_parts_are_big_endian() {
        let book = CodeBook::from_canonical_lengths(vec![(-2i16, 1), (300, 1)]).unwrap();
        let bytes = serialize_codebook(&book, 1).unwrap();
        assert_eq!(&bytes[4..], &[0xff, 0xfe, 1, 0x01, 0x2c, 1]);
    }

    #[test]
    fn malformed_books() {
        let good = [0, 0, 0, 2, 0, 0, 1, 0, 1, 1];
        assert!(deserialize_codebook::<i16>(&good, 1).is_ok());
        assert_eq!(
            deserialize_codebook::<i16>(&good[..9], 1),
            Err(EntropyError::Truncated)
        );
        assert_eq!(
            deserialize_codebook::<i16>(&good[..3], 1),
            Err(EntropyError::Truncated)
        );

        let mut zero_len = good;
        zero_len[9] = 0;
        assert_eq!(
            deserialize_codebook::<i16>(&zero_len, 1),
            Err(EntropyError::BadCodeLength(0))
        );
        let mut long = good;
        long[9] = 65;
        assert_eq!(
            deserialize_codebook::<i16>(&long, 1),
            Err(EntropyError::BadCodeLength(65))
        );
        let mut kraft = good;
        kraft[9] = 2;
        assert_eq!(
            deserialize_codebook::<i16>(&kraft, 1),
            Err(EntropyError::KraftViolation)
        );
        let swapped = [0, 0, 0, 2, 0, 1, 1, 0, 0, 1];
        assert_eq!(
            deserialize_codebook::<i16>(&swapped, 1),
            Err(EntropyError::NonCanonical)
        );
        assert!(matches!(
            deserialize_codebook::<i16>(&[0, 0, 0, 1, 0, 0, 0, 0, 1], 2),
            Err(EntropyError::ArityMismatch { .. })
        ));
        // huge declared count must not allocate or panic
        assert_eq!(
            deserialize_codebook::<CompositeSymbol>(&[0xff, 0xff, 0xff, 0xff, 0], 8),
            Err(EntropyError::Truncated)
        );
    }

    proptest! {
        #[test]
        fn round_trip(seq in prop::collection::vec(-300i16..300, 1..2000), g in 1usize..=8) {
            if g == 1 {
                let book = build_codebook(&build_frequency_table(&seq).unwrap()).unwrap();
                let bytes = serialize_codebook(&book, 1).unwrap();
                prop_assert_eq!(deserialize_codebook::<i16>(&bytes, 1).unwrap(), (book, bytes.len()));
            } else {
                let (r, _) = reduce_symbols(&seq, g).unwrap();
                let book = build_codebook(&build_frequency_table(&r).unwrap()).unwrap();
                let bytes = serialize_codebook(&book, g).unwrap();
                prop_assert_eq!(bytes.len(), 4 + book.len() * (2 * g + 1));
                prop_assert_eq!(
                    deserialize_codebook::<CompositeSymbol>(&bytes, g).unwrap(),
                    (book, bytes.len())
                );
            }
        }
    }
}
