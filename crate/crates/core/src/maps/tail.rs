//! Reductions of binary tail equivalence into the alternating ternary words.

use crate::error::{invalid, Result};
use crate::word::UPWord;

/// The separator block following each symbol in [`block_reduction`].
pub const SEPARATOR: [u8; 7] = [2, 0, 1, 2, 1, 0, 2];

fn expand(x: &UPWord, f: impl Fn(u8) -> Vec<u8>) -> Result<UPWord> {
    if x.alphabet() != 2 {
        return invalid("the reduction takes binary words");
    }
    let code = |s: &[u8]| -> Vec<u8> { s.iter().flat_map(|&b| f(b)).collect() };
    Ok(UPWord::canonical(3, code(x.preamble()), code(x.period())))
}

/// `Φ(x) = x ⊕ 2̃`: the symbols of `x` interleaved with 2s.
pub fn oplus_reduction(x: &UPWord) -> Result<UPWord> {
    expand(x, |b| vec![b, 2])
}

/// `Φ(x) = x(0) ⌢ 2012102 ⌢ x(1) ⌢ 2012102 ⌢ …`.
pub fn block_reduction(x: &UPWord) -> Result<UPWord> {
    expand(x, |b| {
        let mut v = vec![b];
        v.extend_from_slice(&SEPARATOR);
        v
    })
}
