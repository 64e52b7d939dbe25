use super::{CodeSymbol, CompositeSymbol, EntropyError};

/// Group size used when none is given.
pub const DEFAULT_GROUP_SIZE: usize = 4;

fn check_group(g: usize) -> Result<(), EntropyError> {
    if (2..=255).contains(&g) {
        Ok(())
    } else {
        Err(EntropyError::BadGroupSize(g))
    }
}

/// Groups consecutive, non-overlapping runs of `g` symbols left to right.
///
/// A short tail is filled with zeros; the number of fill symbols is returned
/// alongside so the inverse can drop them.
pub fn reduce_symbols(
    seq: &[i16],
    g: usize,
) -> Result<(Vec<CompositeSymbol>, usize), EntropyError> {
    check_group(g)?;
    if seq.is_empty() {
        return Err(EntropyError::EmptyInput);
    }
    let pad = (g - seq.len() % g) % g;
    let mut out: Vec<CompositeSymbol> = seq
        .chunks_exact(g)
        .map(|c| CompositeSymbol::new(c.to_vec()))
        .collect();
    let tail = seq.chunks_exact(g).remainder();
    if !tail.is_empty() {
        let mut last = tail.to_vec();
        last.resize(g, 0);
        out.push(CompositeSymbol::new(last));
    }
    Ok((out, pad))
}

/// Inverse of [`reduce_symbols`].
pub fn expand_symbols(
    seq: &[CompositeSymbol],
    g: usize,
    pad: usize,
) -> Result<Vec<i16>, EntropyError> {
    check_group(g)?;
    if pad >= g || (seq.is_empty() && pad > 0) {
        return Err(EntropyError::BadPadCount { pad, group: g });
    }
    let mut out = Vec::with_capacity(seq.len() * g);
    for s in seq {
        if s.group_size() != g {
            return Err(EntropyError::ArityMismatch {
                expected: g,
                found: s.group_size(),
            });
        }
        out.extend_from_slice(s.parts());
    }
    out.truncate(out.len() - pad);
    Ok(out)
}
