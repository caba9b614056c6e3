//! The dense open sets `D_k` on binary triples and the E0-tree triples that
//! avoid them.

use crate::cert::{CertBuilder, Certificate};
use crate::eqrel::decide_e0;
use crate::error::{invalid, Result};
use crate::trees::e0::{same_block_trees, E0Tree};
use crate::word::{digits_to_string, UPWord};

fn pattern(x: &[u8], y: &[u8], z: &[u8], n: usize) -> bool {
    x[n] != y[n] && x[n] != z[n] && y[n + 1] != z[n + 1]
}

/// The least `n ≥ k` with `x(n) ≠ y(n)`, `x(n) ≠ z(n)` and
/// `y(n+1) ≠ z(n+1)`, searched over one joint cycle past the preambles.
pub fn d_e0_witness(k: usize, x: &UPWord, y: &UPWord, z: &UPWord) -> Option<usize> {
    let start = k.max(x.preamble().len()).max(y.preamble().len()).max(z.preamble().len());
    let span = num::integer::lcm(
        num::integer::lcm(x.period().len(), y.period().len()),
        z.period().len(),
    );
    let end = start + span;
    let (a, b, c) = (x.prefix(end + 1), y.prefix(end + 1), z.prefix(end + 1));
    (k..end).find(|&n| pattern(&a, &b, &c, n))
}

/// `(x, y, z) ∈ D_k`.
pub fn in_d_e0_k(k: usize, x: &UPWord, y: &UPWord, z: &UPWord) -> bool {
    d_e0_witness(k, x, y, z).is_some()
}

/// `(x, y, z) ∈ D = D_0`.
pub fn in_d_e0(x: &UPWord, y: &UPWord, z: &UPWord) -> bool {
    in_d_e0_k(0, x, y, z)
}

/// A witness `n ≥ k` visible inside equal-length prefixes, which places the
/// whole neighborhood inside `D_k`.
pub fn d_e0_prefix_witness(k: usize, s: &[u8], t: &[u8], r: &[u8]) -> Option<usize> {
    let len = s.len().min(t.len()).min(r.len());
    (k..len.saturating_sub(1)).find(|&n| pattern(s, t, r, n))
}

/// `(σ⌢00, τ⌢10, ρ⌢11)`.
pub fn density_extension_e0(s: &[u8], t: &[u8], r: &[u8]) -> Result<(Vec<u8>, Vec<u8>, Vec<u8>)> {
    if s.len() != t.len() || t.len() != r.len() {
        return invalid("the three prefixes must have equal length");
    }
    let ext = |w: &[u8], a: u8, b: u8| {
        let mut v = w.to_vec();
        v.extend([a, b]);
        v
    };
    Ok((ext(s, 0, 0), ext(t, 1, 0), ext(r, 1, 1)))
}

/// The source triple `((010), (110), (1))`.
pub fn avoiding_sources() -> (UPWord, UPWord, UPWord) {
    (
        UPWord::canonical(2, Vec::new(), vec![0, 1, 0]),
        UPWord::canonical(2, Vec::new(), vec![1, 1, 0]),
        UPWord::ones(),
    )
}

fn scan_depth(k: usize, x: &UPWord, y: &UPWord, z: &UPWord, depth: usize) -> Option<usize> {
    let (a, b, c) = (x.prefix(depth + 1), y.prefix(depth + 1), z.prefix(depth + 1));
    (k..depth).find(|&n| pattern(&a, &b, &c, n))
}

fn record_triple(b: &mut CertBuilder, k: usize, imgs: [&UPWord; 3], depth: Option<usize>) {
    let [x, y, z] = imgs;
    for (name, u, v) in [("x,y", x, y), ("x,z", x, z), ("y,z", y, z)] {
        b.check(
            format!("images {name} are E0-inequivalent"),
            u.to_string(),
            v.to_string(),
            !decide_e0(u, v),
        );
    }
    let w = d_e0_witness(k, x, y, z);
    b.check(
        format!("no n ≥ {k} in one joint cycle satisfies the D pattern"),
        w.map_or("none".to_string(), |n| n.to_string()),
        "none",
        w.is_none(),
    );
    if let Some(d) = depth {
        let w = scan_depth(k, x, y, z, d);
        b.check(
            format!("direct scan of positions {k}..{d} finds no D pattern"),
            w.map_or("none".to_string(), |n| n.to_string()),
            "none",
            w.is_none(),
        );
    }
}

/// Certifies that `(Φ(010), Φ(110), Φ(1))` lies in `[[p]]^3` and outside `D`.
pub fn e0_mycielski_check(p: &E0Tree, depth: Option<usize>) -> Certificate {
    let (a, b_, c) = avoiding_sources();
    let mut b = CertBuilder::new("e0-3mycielski")
        .input("tree", serde_json::to_value(p).expect("tree serializes"))
        .input("sources", vec![a.to_string(), b_.to_string(), c.to_string()]);
    if let Some(d) = depth {
        b.set_param("depth", d);
    }
    let imgs: Vec<UPWord> = [&a, &b_, &c]
        .iter()
        .map(|w| p.phi(w).expect("binary source words"))
        .collect();
    record_triple(&mut b, 0, [&imgs[0], &imgs[1], &imgs[2]], depth);
    b.finish()
}

/// Certifies that the three same-block trees with the given stems send the
/// source triple outside `D_k`, `k` the common stem length.
pub fn e0_weak_mycielski_check(blocks: &E0Tree, stems: &[Vec<u8>; 3], depth: Option<usize>) -> Result<Certificate> {
    let trees = same_block_trees(blocks, stems)?;
    let k = stems[0].len();
    let (a, b_, c) = avoiding_sources();
    let mut b = CertBuilder::new("e0-weak-3mycielski")
        .input("tree", serde_json::to_value(blocks).expect("tree serializes"))
        .input("stems", stems.iter().map(|s| digits_to_string(s)).collect::<Vec<_>>())
        .input("sources", vec![a.to_string(), b_.to_string(), c.to_string()]);
    if let Some(d) = depth {
        b.set_param("depth", d);
    }
    b.check(
        "the trees differ only at their stems",
        trees.len().to_string(),
        "3",
        trees[0].shares_blocks_with(&trees[1]) && trees[1].shares_blocks_with(&trees[2]),
    );
    let imgs = [
        trees[0].phi(&a)?,
        trees[1].phi(&b_)?,
        trees[2].phi(&c)?,
    ];
    record_triple(&mut b, k, [&imgs[0], &imgs[1], &imgs[2]], depth);
    Ok(b.finish())
}
