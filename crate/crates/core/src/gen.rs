//! Seeded random generators for words, trees and perturbations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::maps::e0::in_a;
use crate::trees::finite::FiniteTree;
use crate::word::UPWord;

/// The generator used everywhere a seed is accepted.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn symbols<R: Rng + ?Sized>(rng: &mut R, alphabet: u8, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..alphabet)).collect()
}

/// A word with preamble length `≤ max_pre` and period length in `1..=max_per`.
pub fn random_upword<R: Rng + ?Sized>(rng: &mut R, alphabet: u8, max_pre: usize, max_per: usize) -> UPWord {
    let pre_len = rng.random_range(0..=max_pre);
    let per_len = rng.random_range(1..=max_per.max(1));
    let pre = symbols(rng, alphabet, pre_len);
    let per = symbols(rng, alphabet, per_len);
    UPWord::new(alphabet, pre, per).expect("symbols within the alphabet")
}

/// A ternary word without two equal consecutive symbols.
pub fn random_a_word<R: Rng + ?Sized>(rng: &mut R, max_pre: usize, max_per: usize) -> UPWord {
    let max_per = max_per.max(2);
    loop {
        let pre_len = rng.random_range(0..=max_pre);
        let per_len = rng.random_range(2..=max_per);
        let mut all = vec![rng.random_range(0..3u8)];
        while all.len() < pre_len + per_len {
            let prev = *all.last().expect("nonempty");
            all.push((prev + rng.random_range(1..3u8)) % 3);
        }
        let per = all.split_off(pre_len);
        let w = UPWord::new(3, all, per).expect("ternary symbols");
        if in_a(&w) {
            return w;
        }
    }
}

/// A prefix-closed tree of the given depth in which each child of a node
/// is kept with probability `keep`.
pub fn random_finite_tree<R: Rng + ?Sized>(rng: &mut R, depth: usize, keep: f64) -> FiniteTree {
    let mut nodes = vec![Vec::new()];
    let mut level: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &level {
            for i in 0..2u8 {
                if rng.random_bool(keep) {
                    let mut c = s.clone();
                    c.push(i);
                    next.push(c);
                }
            }
        }
        nodes.extend(next.iter().cloned());
        level = next;
    }
    FiniteTree::new(depth, nodes).expect("children of kept nodes")
}

/// Flips up to `max_flips` positions of `w` below `window`.
pub fn flip_bits<R: Rng + ?Sized>(rng: &mut R, w: &UPWord, max_flips: usize, window: usize) -> UPWord {
    let window = window.max(1);
    let mut prefix = w.prefix(window);
    for _ in 0..rng.random_range(0..=max_flips) {
        let i = rng.random_range(0..window);
        prefix[i] = 1 - prefix[i];
    }
    w.shift(window).prepend(&prefix)
}

/// A binary word of the given length.
pub fn random_bits<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<u8> {
    symbols(rng, 2, n)
}
