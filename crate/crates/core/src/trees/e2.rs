//! Finite-horizon E2-trees: maps `g` on binary words of length at most `K`
//! whose level windows are controlled in the harmonic pseudo-metric.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cert::{CertBuilder, Certificate, Cmp};
use crate::error::{invalid, Result};
use crate::rational::{pow2_neg, recip, ExactSum, Rational};
use crate::trees::finite::all_words;
use crate::word::{digits_to_string, parse_digits};
use num::Signed;

/// The two level-`k` blocks `(c⁰_k, c¹_k)` appended by `g(s⌢i) = g(s)⌢cⁱ_k`.
pub type LevelBlocks = (Vec<u8>, Vec<u8>);

/// How `g` is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GMap {
    /// Blocks depending only on the level and the last symbol.
    Levels(Vec<LevelBlocks>),
    /// An explicit table on every word of length at most `K`.
    Table(BTreeMap<Vec<u8>, Vec<u8>>),
}

/// A map `g : ^{≤K}2 → ^{<ω}2` with `|g(s)| = m_{|s|}` and `g` monotone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "E2TreeRepr", into = "E2TreeRepr")]
pub struct E2Tree {
    m: Vec<usize>,
    g: GMap,
}

#[derive(Serialize, Deserialize)]
struct E2TreeRepr {
    m: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    g: Option<BTreeMap<String, String>>,
}

impl From<E2Tree> for E2TreeRepr {
    fn from(t: E2Tree) -> Self {
        match t.g {
            GMap::Levels(bs) => E2TreeRepr {
                m: t.m,
                blocks: Some(
                    bs.iter()
                        .map(|(a, b)| [digits_to_string(a), digits_to_string(b)])
                        .collect(),
                ),
                g: None,
            },
            GMap::Table(table) => E2TreeRepr {
                m: t.m,
                blocks: None,
                g: Some(
                    table
                        .iter()
                        .map(|(k, v)| (digits_to_string(k), digits_to_string(v)))
                        .collect(),
                ),
            },
        }
    }
}

impl TryFrom<E2TreeRepr> for E2Tree {
    type Error = crate::Error;

    fn try_from(r: E2TreeRepr) -> Result<Self> {
        match (r.blocks, r.g) {
            (Some(bs), None) => {
                let blocks = bs
                    .iter()
                    .map(|[a, b]| Ok((parse_digits(a, 0)?, parse_digits(b, 0)?)))
                    .collect::<Result<Vec<_>>>()?;
                E2Tree::from_levels(r.m, blocks)
            }
            (None, Some(g)) => {
                let table = g
                    .iter()
                    .map(|(k, v)| Ok((parse_digits(k, 0)?, parse_digits(v, 0)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                E2Tree::from_table(r.m, table)
            }
            _ => invalid("an E2-tree needs exactly one of \"blocks\" or \"g\""),
        }
    }
}

fn check_m(m: &[usize]) -> Result<()> {
    if m.len() < 2 || m[0] != 0 {
        return invalid("m must start at 0 and have at least two entries");
    }
    if m.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("m must be strictly increasing");
    }
    Ok(())
}

impl E2Tree {
    pub fn from_levels(m: Vec<usize>, blocks: Vec<LevelBlocks>) -> Result<Self> {
        check_m(&m)?;
        if blocks.len() + 1 != m.len() {
            return invalid("one block pair per level is required");
        }
        for (k, (a, b)) in blocks.iter().enumerate() {
            let len = m[k + 1] - m[k];
            if a.len() != len || b.len() != len {
                return invalid(format!("level {} blocks must have length {len}", k + 1));
            }
            if a.iter().chain(b.iter()).any(|&s| s > 1) {
                return invalid("blocks must be binary");
            }
        }
        Ok(E2Tree {
            m,
            g: GMap::Levels(blocks),
        })
    }

    pub fn from_table(m: Vec<usize>, table: BTreeMap<Vec<u8>, Vec<u8>>) -> Result<Self> {
        check_m(&m)?;
        let k_max = m.len() - 1;
        for s in table.keys() {
            if s.len() > k_max || s.iter().any(|&b| b > 1) {
                return invalid("table keys must be binary words of length at most K");
            }
        }
        for k in 0..=k_max {
            for s in all_words(k) {
                let Some(gs) = table.get(&s) else {
                    return invalid(format!("table has no entry for {}", digits_to_string(&s)));
                };
                if gs.len() != m[k] || gs.iter().any(|&b| b > 1) {
                    return invalid(format!(
                        "g({}) must be a binary word of length {}",
                        digits_to_string(&s),
                        m[k]
                    ));
                }
                if k > 0 && !gs.starts_with(&table[&s[..k - 1]]) {
                    return invalid(format!("g is not monotone at {}", digits_to_string(&s)));
                }
            }
        }
        Ok(E2Tree {
            m,
            g: GMap::Table(table),
        })
    }

    /// `m_k = k` with blocks `0` and `1`: the identity map.
    pub fn identity(k_max: usize) -> Self {
        E2Tree {
            m: (0..=k_max).collect(),
            g: GMap::Levels(vec![(vec![0], vec![1]); k_max]),
        }
    }

    /// Number of levels `K`.
    pub fn levels(&self) -> usize {
        self.m.len() - 1
    }

    pub fn m(&self) -> &[usize] {
        &self.m
    }

    pub fn gmap(&self) -> &GMap {
        &self.g
    }

    /// `g(s)` for `|s| ≤ K`.
    pub fn g(&self, s: &[u8]) -> Result<Vec<u8>> {
        if s.len() > self.levels() {
            return invalid(format!(
                "word of length {} exceeds the {} levels of the tree",
                s.len(),
                self.levels()
            ));
        }
        if s.iter().any(|&b| b > 1) {
            return invalid("g takes binary words");
        }
        Ok(match &self.g {
            GMap::Levels(bs) => s
                .iter()
                .enumerate()
                .flat_map(|(k, &b)| if b == 0 { &bs[k].0 } else { &bs[k].1 }.iter().copied())
                .collect(),
            GMap::Table(t) => t[s].clone(),
        })
    }

    /// The same map stored as an explicit table.
    pub fn to_table(&self) -> E2Tree {
        let mut table = BTreeMap::new();
        for k in 0..=self.levels() {
            for s in all_words(k) {
                let gs = self.g(&s).expect("word within the levels");
                table.insert(s, gs);
            }
        }
        E2Tree {
            m: self.m.clone(),
            g: GMap::Table(table),
        }
    }

    /// Distinct level-`k` windows `g(s)↾[m_{k-1}, m_k)` tagged by the last
    /// symbol of `s`, for `1 ≤ k ≤ K`.
    pub fn level_classes(&self, k: usize) -> BTreeSet<(u8, Vec<u8>)> {
        match &self.g {
            GMap::Levels(bs) => [(0, bs[k - 1].0.clone()), (1, bs[k - 1].1.clone())]
                .into_iter()
                .collect(),
            GMap::Table(t) => all_words(k)
                .into_iter()
                .map(|s| (s[k - 1], t[&s][self.m[k - 1]..].to_vec()))
                .collect(),
        }
    }

    /// The level-`k` window of `g(s)` for `|s| = k`.
    fn window(&self, s: &[u8]) -> Vec<u8> {
        let k = s.len();
        self.g(s).expect("word within the levels")[self.m[k - 1]..].to_vec()
    }
}

/// `Σ 1/(offset + j + 1)` over the positions `j` where the windows differ.
pub fn window_delta(offset: usize, a: &[u8], b: &[u8]) -> Rational {
    let mut acc = ExactSum::new();
    for (j, (x, y)) in a.iter().zip(b).enumerate() {
        if x != y {
            acc.add_recip((offset + j + 1) as u64);
        }
    }
    acc.value()
}

/// `Σ_{m_{k-1} ≤ j < m_k} 1/(j+1)`.
pub fn gap_sum(m: &[usize], k: usize) -> Rational {
    let mut acc = ExactSum::new();
    for j in m[k - 1]..m[k] {
        acc.add_recip((j + 1) as u64);
    }
    acc.value()
}

/// `g(x)` for `|x| ≤ K`.
pub fn e2_phi(t: &E2Tree, x: &[u8]) -> Result<Vec<u8>> {
    t.g(x)
}

/// Builds a `K`-level E2-tree from sibling-independent difference blocks.
///
/// At level `k` the window `[m_{k-1}, m_k)` starts with zeros up to
/// `a_k = max(m_{k-1}, 2^{k+2})`; `c¹_k` then flips consecutive positions
/// until the reciprocal sum exceeds `1/k - 2^{-(k+2)}`, which stops below
/// `1/k` because every term is below `2^{-(k+2)}`.
pub fn build_e2_tree(k_max: usize) -> Result<E2Tree> {
    if k_max == 0 {
        return invalid("an E2-tree needs at least one level");
    }
    let mut m = vec![0usize];
    let mut blocks = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let prev = m[k - 1];
        let start = prev.max(1usize << (k + 2));
        let target = recip(k) - pow2_neg(k + 2);
        let mut acc = ExactSum::new();
        let mut end = start;
        while !acc.exceeds(&target) {
            acc.add_recip((end + 1) as u64);
            end += 1;
        }
        let c0 = vec![0u8; end - prev];
        let mut c1 = vec![0u8; start - prev];
        c1.resize(end - prev, 1);
        m.push(end);
        blocks.push((c0, c1));
    }
    E2Tree::from_levels(m, blocks)
}

/// Records the length, monotonicity, same-side and cross-side conditions and the gap bound for one tree.
fn record_tree_checks(b: &mut CertBuilder, t: &E2Tree, label: &str) {
    let k_max = t.levels();
    b.check(
        format!("{label}lengths: |g(s)| = m_|s| for every s of length <= {k_max}"),
        format!("m = {:?}", t.m),
        "lengths match",
        true,
    );
    b.check(
        format!("{label}monotone: s ⊆ t implies g(s) ⊆ g(t)"),
        "checked on every parent/child pair",
        "monotone",
        true,
    );
    for k in 1..=k_max {
        let bound = pow2_neg(k + 1);
        let classes: Vec<(u8, Vec<u8>)> = t.level_classes(k).into_iter().collect();
        let offset = t.m[k - 1];
        let mut same_max = Rational::from_integer(0.into());
        let mut cross_max = Rational::from_integer(0.into());
        for (i, (bi, wi)) in classes.iter().enumerate() {
            for (bj, wj) in &classes[i + 1..] {
                let d = window_delta(offset, wi, wj);
                if bi == bj {
                    same_max = same_max.max(d);
                } else {
                    cross_max = cross_max.max((d - recip(k)).abs());
                }
            }
        }
        b.compare(
            format!("{label}same-side level {k}: max δ over same-last-symbol pairs < 2^-{}", k + 1),
            &same_max,
            Cmp::Lt,
            &bound,
        );
        b.compare(
            format!("{label}cross-side level {k}: max |δ - 1/{k}| over different-last-symbol pairs < 2^-{}", k + 1),
            &cross_max,
            Cmp::Lt,
            &bound,
        );
        b.compare(
            format!("{label}gap level {k}: Σ 1/(j+1) over the window >= 2^-{}", k + 1),
            &gap_sum(&t.m, k),
            Cmp::Ge,
            &bound,
        );
    }
}

/// Exhaustive exact check of the tree conditions and the gap bound.
pub fn verify_e2_tree(t: &E2Tree) -> Certificate {
    let mut b = CertBuilder::new("e2-tree")
        .input("tree", serde_json::to_value(t).expect("tree serializes"))
        .param("levels", t.levels());
    record_tree_checks(&mut b, t, "");
    b.finish()
}

/// Maps `g⁰ … g^{p-1}` sharing one `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2TreeFamily {
    trees: Vec<E2Tree>,
}

impl E2TreeFamily {
    pub fn new(trees: Vec<E2Tree>) -> Result<Self> {
        let Some(first) = trees.first() else {
            return invalid("a family needs at least one map");
        };
        if trees.iter().any(|t| t.m != first.m) {
            return invalid("the maps of a family must share m");
        }
        Ok(E2TreeFamily { trees })
    }

    pub fn trees(&self) -> &[E2Tree] {
        &self.trees
    }

    pub fn m(&self) -> &[usize] {
        &self.trees[0].m
    }

    pub fn levels(&self) -> usize {
        self.trees[0].levels()
    }
}

/// `p` maps: `g^i` flips position `m_k - i` of both level-`k` blocks of the
/// built tree, which leaves every sibling difference unchanged.
pub fn build_e2_family(k_max: usize, p: usize) -> Result<E2TreeFamily> {
    if p == 0 {
        return invalid("a family needs at least one map");
    }
    let base = build_e2_tree(k_max)?;
    let GMap::Levels(blocks) = base.g.clone() else {
        unreachable!("the builder stores level blocks");
    };
    let mut trees = vec![base.clone()];
    for i in 1..p {
        let mut bs = blocks.clone();
        for (k, (c0, c1)) in bs.iter_mut().enumerate() {
            let len = c0.len();
            if i > len {
                return invalid(format!("level {} is too short for {p} maps", k + 1));
            }
            c0[len - i] ^= 1;
            c1[len - i] ^= 1;
        }
        trees.push(E2Tree::from_levels(base.m.clone(), bs)?);
    }
    E2TreeFamily::new(trees)
}

/// The tree conditions for every map and the sibling-map bound for every pair.
pub fn verify_e2_family(f: &E2TreeFamily) -> Certificate {
    let mut b = CertBuilder::new("e2-family")
        .input("family", serde_json::to_value(f).expect("family serializes"))
        .param("levels", f.levels())
        .param("maps", f.trees.len());
    for (i, t) in f.trees.iter().enumerate() {
        record_tree_checks(&mut b, t, &format!("g{i} "));
    }
    let m = f.m();
    for k in 1..=f.levels() {
        let words = all_words(k);
        for i in 0..f.trees.len() {
            for j in i + 1..f.trees.len() {
                let worst = words
                    .iter()
                    .map(|s| {
                        window_delta(m[k - 1], &f.trees[i].window(s), &f.trees[j].window(s))
                    })
                    .max()
                    .expect("at least one word");
                b.compare(
                    format!("sibling maps level {k} maps {i},{j}: max_s δ(g{i}(s), g{j}(s)) < 2^-{}", k + 1),
                    &worst,
                    Cmp::Lt,
                    &pow2_neg(k + 1),
                );
            }
        }
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn builder_passes_for_eight_levels() {
        let t = build_e2_tree(8).unwrap();
        assert_eq!(t.m()[0], 0);
        let cert = verify_e2_tree(&t);
        assert!(cert.passed(), "{}", cert.to_json());
        assert!(cert.verdict_consistent());
    }

    #[test]
    fn table_form_agrees_with_levels() {
        let t = build_e2_tree(4).unwrap();
        let table = t.to_table();
        assert!(verify_e2_tree(&table).passed());
        for s in all_words(3) {
            assert_eq!(t.g(&s).unwrap(), table.g(&s).unwrap());
        }
        let json = serde_json::to_string(&table).unwrap();
        assert_eq!(serde_json::from_str::<E2Tree>(&json).unwrap(), table);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<E2Tree>(&json).unwrap(), t);
    }

    #[test]
    fn phi_examples() {
        let t = build_e2_tree(3).unwrap();
        assert!(e2_phi(&t, &[]).unwrap().is_empty());
        let g01 = e2_phi(&t, &[0, 1]).unwrap();
        assert_eq!(g01.len(), t.m()[2]);
        assert!(g01.starts_with(&e2_phi(&t, &[0]).unwrap()));
        assert!(g01[..t.m()[1]].iter().all(|&b| b == 0));
        let ones: Vec<usize> = (0..g01.len()).filter(|&j| g01[j] == 1).collect();
        assert_eq!(ones.first(), Some(&(t.m()[1].max(16))));
        assert!(e2_phi(&t, &[0, 0, 0, 0]).is_err());
    }

    #[test]
    fn hand_built_single_level_sample() {
        let c1: Vec<u8> = (0..12).map(|j| u8::from(j >= 4)).collect();
        let t = E2Tree::from_levels(vec![0, 12], vec![(vec![0; 12], c1)]).unwrap();
        let delta = window_delta(0, &t.g(&[0]).unwrap(), &t.g(&[1]).unwrap());
        assert!((delta - rat(1, 1)).abs() < rat(1, 4));
        assert!(verify_e2_tree(&t).passed());
    }

    #[test]
    fn failing_trees() {
        let trivial = E2Tree::from_levels(vec![0, 1], vec![(vec![0], vec![0])]).unwrap();
        let cert = verify_e2_tree(&trivial);
        assert!(!cert.passed());
        assert!(!cert.find("cross-side level 1")[0].verdict.is_pass());

        let t = build_e2_tree(3).unwrap();
        let GMap::Levels(mut bs) = t.gmap().clone() else { unreachable!() };
        bs[0].0[0] ^= 1;
        let corrupted = E2Tree::from_levels(t.m().to_vec(), bs).unwrap();
        assert!(!verify_e2_tree(&corrupted).passed());
    }

    #[test]
    fn identity_tree_is_an_e2_tree() {
        assert!(verify_e2_tree(&E2Tree::identity(6)).passed());
    }

    #[test]
    fn families() {
        let one = build_e2_family(3, 1).unwrap();
        assert_eq!(one.trees()[0], build_e2_tree(3).unwrap());
        let two = build_e2_family(8, 2).unwrap();
        let cert = verify_e2_family(&two);
        assert!(cert.passed());
        assert_eq!(cert.find("sibling maps").len(), 8);
        assert!(E2TreeFamily::new(vec![E2Tree::identity(2), E2Tree::identity(3)]).is_err());
    }
}
