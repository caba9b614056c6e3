//! The continuous maps on pairwise E0-inequivalent triples: `P` onto the
//! alternating words `A`, the block codes `Q'` and `Q''`, and the
//! discontinuous totalizations `P'` and `K`.

use std::collections::HashMap;

use num::integer::lcm;

use crate::eqrel::decide_e0;
use crate::error::{invalid, Error, Result};
use crate::trees::e0::E0Tree;
use crate::word::UPWord;

/// One step of the `P` recursion: position `L_n` and the tag `a_n` naming
/// the pair that agrees there (0 = xy, 1 = xz, 2 = yz).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TripleState {
    pub position: usize,
    pub tag: u8,
}

/// `w ∈ A`: a ternary word with no two equal consecutive symbols.
pub fn in_a(w: &UPWord) -> bool {
    let span = w.preamble().len() + w.period().len() + 1;
    w.alphabet() == 3 && (0..span).all(|n| w.at(n) != w.at(n + 1))
}

fn check_triple(x: &UPWord, y: &UPWord, z: &UPWord) -> Result<()> {
    if [x, y, z].iter().any(|w| w.alphabet() != 2) {
        return invalid("P takes binary words");
    }
    for (a, b, name) in [(x, y, "x, y"), (x, z, "x, z"), (y, z, "y, z")] {
        if decide_e0(a, b) {
            return Err(Error::Domain(format!(
                "{name} are E0-equivalent; the triple is not pairwise inequivalent"
            )));
        }
    }
    Ok(())
}

fn tag_at(x: &UPWord, y: &UPWord, z: &UPWord, l: usize) -> u8 {
    let (a, b, c) = (x.at(l), y.at(l), z.at(l));
    if a == b {
        0
    } else if a == c {
        1
    } else {
        2
    }
}

fn pair_differs(x: &UPWord, y: &UPWord, z: &UPWord, tag: u8, n: usize) -> bool {
    match tag {
        0 => x.at(n) != y.at(n),
        1 => x.at(n) != z.at(n),
        _ => y.at(n) != z.at(n),
    }
}

/// The first `count` states `(L_n, a_n)` of the `P` recursion.
pub fn p_e0_trace(x: &UPWord, y: &UPWord, z: &UPWord, count: usize) -> Result<Vec<TripleState>> {
    check_triple(x, y, z)?;
    let window = x.joint_horizon(y).max(x.joint_horizon(z)).max(y.joint_horizon(z)) + 1;
    let first = x
        .first_difference(y)
        .into_iter()
        .chain(x.first_difference(z))
        .min()
        .expect("inequivalent words differ");
    let mut out = Vec::with_capacity(count);
    let mut l = first;
    while out.len() < count {
        let tag = tag_at(x, y, z, l);
        out.push(TripleState { position: l, tag });
        l = (l + 1..l + 1 + window)
            .find(|&n| pair_differs(x, y, z, tag, n))
            .expect("an inequivalent pair differs within one joint cycle");
    }
    Ok(out)
}

/// `P(x, y, z)(n) = a_n`, returned exactly by detecting the first repeated
/// state `(L_n mod q, a_n)` past all preambles.
pub fn p_e0(x: &UPWord, y: &UPWord, z: &UPWord) -> Result<UPWord> {
    check_triple(x, y, z)?;
    let start = x.preamble().len().max(y.preamble().len()).max(z.preamble().len());
    let q = lcm(lcm(x.period().len(), y.period().len()), z.period().len());
    let mut seen: HashMap<(usize, u8), usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut l = x
        .first_difference(y)
        .into_iter()
        .chain(x.first_difference(z))
        .min()
        .expect("inequivalent words differ");
    loop {
        let tag = tag_at(x, y, z, l);
        if l >= start {
            let key = ((l - start) % q, tag);
            if let Some(&i) = seen.get(&key) {
                let per = digits.split_off(i);
                return Ok(UPWord::canonical(3, digits, per));
            }
            seen.insert(key, digits.len());
        }
        digits.push(tag);
        l = (l + 1..=l.max(start) + q)
            .find(|&n| pair_differs(x, y, z, tag, n))
            .expect("an inequivalent pair differs within one joint cycle");
    }
}

/// The binary words `(a, b)` with `P(Φ(0̃), Φ(a), Φ(b)) = v`:
/// `v(i) = 0 ↦ (0, 1)`, `1 ↦ (1, 0)`, `2 ↦ (1, 1)`.
pub fn preimage_words(v: &UPWord) -> Result<(UPWord, UPWord)> {
    if !in_a(v) {
        return Err(Error::Domain(format!("{v} is not in A")));
    }
    let a = v.map_symbols(2, |s| u8::from(s != 0));
    let b = v.map_symbols(2, |s| u8::from(s != 1));
    Ok((a, b))
}

/// `(Φ(0̃), Φ(a), Φ(b))` through the branch map of `p`.
pub fn p_e0_preimage(v: &UPWord, p: &E0Tree) -> Result<(UPWord, UPWord, UPWord)> {
    let (a, b) = preimage_words(v)?;
    Ok((p.phi(&UPWord::zeros())?, p.phi(&a)?, p.phi(&b)?))
}

const T_BLOCKS: [[u8; 2]; 3] = [[0, 0], [0, 1], [1, 0]];

/// `Q'(w) = t_{w(0)} ⌢ t_{w(1)} ⌢ …` with `t_0 = 00`, `t_1 = 01`, `t_2 = 10`.
pub fn q_prime(w: &UPWord) -> Result<UPWord> {
    if w.alphabet() != 3 {
        return invalid("Q' takes ternary words");
    }
    let code = |s: &[u8]| -> Vec<u8> { s.iter().flat_map(|&c| T_BLOCKS[c as usize]).collect() };
    Ok(UPWord::canonical(2, code(w.preamble()), code(w.period())))
}

/// Bits emitted for block `cur` after block `prev` while walking the tree of
/// `Q'[A]`: a bit is emitted exactly when the node it leaves is a split node.
fn emitted(prev: Option<u8>, cur: u8) -> Vec<u8> {
    let [b0, b1] = T_BLOCKS[cur as usize];
    match prev {
        None if b0 == 0 => vec![b0, b1],
        None => vec![b0],
        Some(0) | Some(1) => vec![b0],
        Some(_) => vec![b1],
    }
}

fn emit_all(prev: Option<u8>, blocks: &[u8]) -> Vec<u8> {
    let mut prev = prev;
    let mut out = Vec::new();
    for &c in blocks {
        out.extend(emitted(prev, c));
        prev = Some(c);
    }
    out
}

/// Decodes a binary word into `Q'` blocks, checking it lies in `Q'[A]`.
fn decode_blocks(u: &[u8], prev: Option<u8>) -> Result<Vec<u8>> {
    let mut prev = prev;
    let mut out = Vec::with_capacity(u.len() / 2);
    for (i, pair) in u.chunks(2).enumerate() {
        let c = match pair {
            [0, 0] => 0,
            [0, 1] => 1,
            [1, 0] => 2,
            _ => {
                return Err(Error::Domain(format!(
                    "block {i} is not one of 00, 01, 10; the word is outside Q'[A]"
                )))
            }
        };
        if prev == Some(c) {
            return Err(Error::Domain(format!(
                "blocks {} and {i} repeat a symbol; the word is outside Q'[A]",
                i.saturating_sub(1)
            )));
        }
        out.push(c);
        prev = Some(c);
    }
    Ok(out)
}

/// `Q''` on an even-length prefix of a word of `Q'[A]`.
pub fn q_double_prime_fin(u: &[u8]) -> Result<Vec<u8>> {
    if !u.len().is_multiple_of(2) {
        return invalid("Q'' prefixes must consist of whole blocks");
    }
    Ok(emit_all(None, &decode_blocks(u, None)?))
}

/// `Q''` on `Q'[A]`: the continuous bijection onto `ω2` that emits the branch
/// bit at every split node of the tree of `Q'[A]`.
pub fn q_double_prime(u: &UPWord) -> Result<UPWord> {
    if u.alphabet() != 2 {
        return invalid("Q'' takes binary words");
    }
    let mut pre_len = u.preamble().len();
    pre_len += pre_len % 2;
    let mut per_len = u.period().len();
    if per_len % 2 == 1 {
        per_len *= 2;
    }
    let pre = decode_blocks(&u.prefix(pre_len), None)?;
    let full = u.prefix(pre_len + per_len);
    let per = decode_blocks(&full[pre_len..], pre.last().copied())?;
    let last = *per.last().expect("nonempty period");
    if per[0] == last {
        return Err(Error::Domain(
            "the period repeats a symbol across its boundary; the word is outside Q'[A]".into(),
        ));
    }
    let mut head = pre.clone();
    head.extend_from_slice(&per);
    let out_pre = emit_all(None, &head);
    let out_per = emit_all(Some(last), &per);
    Ok(UPWord::canonical(2, out_pre, out_per))
}

/// `Q = Q'' ∘ Q' ∘ P`.
pub fn q_e0(x: &UPWord, y: &UPWord, z: &UPWord) -> Result<UPWord> {
    q_double_prime(&q_prime(&p_e0(x, y, z)?)?)
}

/// The alternating word `0101…` viewed in `ω3`.
pub fn alternating_ternary() -> UPWord {
    UPWord::canonical(3, Vec::new(), vec![0, 1])
}

/// `P'`: `P` where its output has infinitely many 2s, and `(01)` on
/// E0-degenerate triples or where the output is eventually 2-free.
pub fn p_prime_e0(x: &UPWord, y: &UPWord, z: &UPWord) -> Result<UPWord> {
    match p_e0(x, y, z) {
        Ok(w) if w.period().contains(&2) => Ok(w),
        Ok(_) | Err(Error::Domain(_)) => Ok(alternating_ternary()),
        Err(e) => Err(e),
    }
}

/// `K = Q' ∘ P'`.
pub fn k_e0(x: &UPWord, y: &UPWord, z: &UPWord) -> Result<UPWord> {
    q_prime(&p_prime_e0(x, y, z)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::finite::{all_words, FiniteTree};
    use std::collections::BTreeSet;

    fn up(s: &str) -> UPWord {
        UPWord::parse(s, None).unwrap()
    }

    fn up3(s: &str) -> UPWord {
        UPWord::parse(s, Some(3)).unwrap()
    }

    #[test]
    fn p_examples() {
        assert_eq!(p_e0(&up("(0)"), &up("(011)"), &up("(101)")).unwrap(), up3("(012)"));
        assert_eq!(p_e0(&up("(0)"), &up("(1)"), &up("(01)")).unwrap(), up3("(12)"));
        let trace = p_e0_trace(&up("(0)"), &up("(011)"), &up("(101)"), 4).unwrap();
        let tags: Vec<u8> = trace.iter().map(|s| s.tag).collect();
        assert_eq!(tags, vec![0, 1, 2, 0]);
        assert!(matches!(
            p_e0(&up("(0)"), &up("1(0)"), &up("(1)")),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn preimage_table() {
        let (a, b) = preimage_words(&up3("(012)")).unwrap();
        assert_eq!((a, b), (up("(011)"), up("(101)")));
        for v in ["(01)", "(012)", "2(10)", "10(21)"] {
            let v = up3(v);
            let (x, y, z) = p_e0_preimage(&v, &E0Tree::identity()).unwrap();
            assert_eq!(p_e0(&x, &y, &z).unwrap(), v);
        }
        assert!(preimage_words(&up3("(011)")).is_err());
    }

    #[test]
    fn q_prime_examples() {
        assert_eq!(q_prime(&up3("(0)")).unwrap(), up("(0)"));
        assert_eq!(q_prime(&up3("(012)")).unwrap(), up("(000110)"));
    }

    /// The tree of `Q'[A]` to block depth `d`, and the generic map emitting
    /// a bit at each split node, compared with the hard-coded transducer.
    #[test]
    fn q_double_prime_matches_the_tree_walk() {
        let d = 6;
        let mut words: Vec<Vec<u8>> = vec![vec![0], vec![1], vec![2]];
        for _ in 1..d {
            words = words
                .into_iter()
                .flat_map(|w| {
                    (0..3u8)
                        .filter(|&c| c != *w.last().unwrap())
                        .map(|c| {
                            let mut n = w.clone();
                            n.push(c);
                            n
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        let code = |w: &[u8]| -> Vec<u8> { w.iter().flat_map(|&c| T_BLOCKS[c as usize]).collect() };
        // One more block of lookahead decides splitting at the last level.
        let deeper: Vec<Vec<u8>> = words
            .iter()
            .flat_map(|w| {
                (0..3u8).filter(|&c| c != *w.last().unwrap()).map(move |c| {
                    let mut n = w.clone();
                    n.push(c);
                    n
                })
            })
            .map(|w| code(&w))
            .collect();
        let tree = FiniteTree::from_leaves(2 * d + 2, deeper).unwrap();
        let mut images = BTreeSet::new();
        for w in &words {
            let bits = code(w);
            let mut walked = Vec::new();
            for k in 0..bits.len() {
                if tree.is_split(&bits[..k]).unwrap() {
                    walked.push(bits[k]);
                }
            }
            assert_eq!(q_double_prime_fin(&bits).unwrap(), walked);
            assert!(images.insert(walked));
        }
        // Prefix-free and Kraft-complete: the images tile Cantor space.
        let images: Vec<Vec<u8>> = images.into_iter().collect();
        for (i, a) in images.iter().enumerate() {
            for b in &images[i + 1..] {
                assert!(!b.starts_with(a) && !a.starts_with(b));
            }
        }
        let min_len = images.iter().map(Vec::len).min().unwrap();
        let kraft: f64 = images.iter().map(|w| 0.5f64.powi(w.len() as i32)).sum();
        assert!((kraft - 1.0).abs() < 1e-12);
        let truncated: BTreeSet<Vec<u8>> = images.iter().map(|w| w[..min_len].to_vec()).collect();
        assert_eq!(truncated, all_words(min_len).into_iter().collect());
    }

    #[test]
    fn q_double_prime_on_words() {
        assert_eq!(q_double_prime(&q_prime(&up3("(01)")).unwrap()).unwrap(), up("(0)"));
        let least = q_prime(&up3("(02)")).unwrap();
        assert_eq!(q_double_prime(&least).unwrap(), up("0(01)"));
        assert!(q_double_prime(&up("(11)")).is_err());
        assert!(q_double_prime(&q_prime(&up3("(0)")).unwrap()).is_err());
        let (x, y, z) = p_e0_preimage(&up3("(012)"), &E0Tree::identity()).unwrap();
        let q = q_e0(&x, &y, &z).unwrap();
        assert_eq!(q, q_double_prime(&up("(000110)")).unwrap());
    }

    #[test]
    fn p_prime_and_k() {
        let alt = alternating_ternary();
        assert_eq!(p_prime_e0(&up("(0)"), &up("1(0)"), &up("(1)")).unwrap(), alt);
        assert_eq!(p_prime_e0(&up("(0)"), &up("(1)"), &up("(01)")).unwrap(), up3("(12)"));
        let (x, y, z) = p_e0_preimage(&up3("(01)"), &E0Tree::identity()).unwrap();
        assert_eq!(p_prime_e0(&x, &y, &z).unwrap(), alt);
        assert_eq!(k_e0(&x, &y, &z).unwrap(), up("(0001)"));
    }
}
