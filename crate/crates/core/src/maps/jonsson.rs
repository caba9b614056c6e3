//! The branching-tree map `Ψ` on countable sets of binary words, the set
//! `T̂` realizing a tree, and the construction of a preimage inside the set
//! of all ultimately periodic words.

use std::collections::{BTreeMap, BTreeSet};

use crate::cert::{CertBuilder, Certificate};
use crate::error::{invalid, Result};
use crate::trees::finite::{all_words, FiniteTree};
use crate::word::{digits_to_string, UPWord};

/// The longest common prefix of at least two distinct words.
fn lcp(a: &[&UPWord]) -> Option<Vec<u8>> {
    let (first, rest) = a.split_first()?;
    let len = rest.iter().filter_map(|w| first.first_difference(w)).min()?;
    Some(first.prefix(len))
}

fn extending<'a>(a: &[&'a UPWord], s: &[u8]) -> Vec<&'a UPWord> {
    a.iter().copied().filter(|w| w.extends(s)).collect()
}

/// `a_σ^A`: the common prefix of the members of `A` inside the
/// neighborhood selected by `σ`, defined while that part has two members.
pub fn a_sigma(a: &BTreeSet<UPWord>, sigma: &[u8]) -> Option<Vec<u8>> {
    let all: Vec<&UPWord> = a.iter().collect();
    let mut cur = lcp(&all)?;
    for &i in sigma {
        cur.push(i);
        cur = lcp(&extending(&all, &cur))?;
    }
    Some(cur)
}

/// `Ψ(A) = {σ : a_σ^A is defined}`, with depth its longest node.
pub fn psi(a: &BTreeSet<UPWord>) -> FiniteTree {
    let all: Vec<&UPWord> = a.iter().collect();
    let mut nodes = Vec::new();
    let mut frontier: Vec<(Vec<u8>, Vec<u8>)> = lcp(&all).map(|p| (Vec::new(), p)).into_iter().collect();
    while let Some((sigma, prefix)) = frontier.pop() {
        for i in 0..2u8 {
            let mut next = prefix.clone();
            next.push(i);
            if let Some(p) = lcp(&extending(&all, &next)) {
                let mut child = sigma.clone();
                child.push(i);
                frontier.push((child, p));
            }
        }
        nodes.push(sigma);
    }
    let depth = nodes.iter().map(Vec::len).max().unwrap_or(0);
    FiniteTree::new(depth, nodes).expect("recursion yields a prefix-closed binary tree")
}

/// `T̂ = {σ⌢0̃ : σ ∈ T} ∪ {σ⌢1⌢0̃ : σ ∈ T}`.
pub fn t_hat(t: &FiniteTree) -> Result<BTreeSet<UPWord>> {
    if t.is_empty() {
        return invalid("T̂ needs a nonempty tree");
    }
    let mut out = BTreeSet::new();
    for sigma in t.nodes() {
        out.insert(UPWord::canonical(2, sigma.clone(), vec![0]));
        let mut s1 = sigma.clone();
        s1.push(1);
        out.insert(UPWord::canonical(2, s1, vec![0]));
    }
    Ok(out)
}

/// The first word of `N_τ` in the enumeration of canonical binary words by
/// total size `|preamble| + |period|`, then preamble length, then period in
/// lexicographic order.
pub fn first_extending(tau: &[u8]) -> UPWord {
    let l = tau.len();
    for size in 1..=l + 1 {
        for pre_len in 0..size.min(l + 1) {
            let q = size - pre_len;
            let fixed = l - pre_len;
            let free = q.saturating_sub(fixed);
            for code in 0..1usize << free {
                let mut per: Vec<u8> = if q <= fixed {
                    tau[pre_len..pre_len + q].to_vec()
                } else {
                    tau[pre_len..].to_vec()
                };
                per.extend((0..free).map(|i| ((code >> (free - 1 - i)) & 1) as u8));
                let pre = tau[..pre_len].to_vec();
                let w = UPWord::canonical(2, pre.clone(), per.clone());
                if w.preamble() == pre.as_slice() && w.period() == per.as_slice() && w.extends(tau) {
                    return w;
                }
            }
        }
    }
    unreachable!("τ⌢0̃ has size at most |τ| + 1")
}

/// The objects built by the preimage construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JonssonBuild {
    /// `c_s` for every `s` with `|s| ≤ stages`.
    pub c: BTreeMap<Vec<u8>, UPWord>,
    /// `k_{-1} = 0, k_0, …, k_{stages-1}`.
    pub k: Vec<usize>,
    /// `A_stages`.
    pub set: BTreeSet<UPWord>,
}

fn level_set(c: &BTreeMap<Vec<u8>, UPWord>, n: usize) -> BTreeSet<UPWord> {
    c.iter().filter(|(s, _)| s.len() == n).map(|(_, w)| w.clone()).collect()
}

fn show(w: &UPWord) -> String {
    w.to_string()
}

/// Builds `c_s` and `k_m` for `stages` levels with `c_∅ = 0̃`,
/// `m_s = k_{m-1} + 1` and [`first_extending`] as the choice function, then
/// certifies the split, children, isolation and stability properties per stage and `Ψ(A) = T` to depth
/// `stages - 1`.
pub fn jonsson_build(t: &FiniteTree, stages: usize) -> Result<(JonssonBuild, Certificate)> {
    if stages == 0 {
        return invalid("at least one stage is needed");
    }
    if stages > t.depth() + 1 {
        return invalid(format!(
            "{stages} stages exceed the tree depth {} plus one",
            t.depth()
        ));
    }
    let mut c: BTreeMap<Vec<u8>, UPWord> = BTreeMap::new();
    c.insert(Vec::new(), UPWord::zeros());
    let mut k = vec![0usize];
    for m in 0..stages {
        let prev = k[m];
        let mut km = prev + 1;
        for s in all_words(m) {
            let cs = c[&s].clone();
            let (keep, fresh) = if t.contains(&s) {
                let ms = prev + 1;
                let bit = cs.at(ms);
                let mut tau = cs.prefix(ms);
                tau.push(1 - bit);
                km = km.max(ms + 1);
                (bit, first_extending(&tau))
            } else {
                (0, cs.clone())
            };
            let mut same = s.clone();
            same.push(keep);
            let mut other = s;
            other.push(1 - keep);
            c.insert(same, cs);
            c.insert(other, fresh);
        }
        k.push(km);
    }

    let nodes: Vec<String> = t.nodes().iter().map(|s| digits_to_string(s)).collect();
    let mut b = CertBuilder::new("jonsson")
        .input("tree", nodes)
        .input("depth", t.depth())
        .param("stages", stages);
    // k[j + 1] is k_j.
    for m in 0..stages {
        let a_next = level_set(&c, m + 1);
        let km = k[m + 1];
        for s in all_words(m) {
            let name = if s.is_empty() { "∅".to_string() } else { digits_to_string(&s) };
            if t.contains(&s) {
                let a = a_sigma(&a_next, &s);
                b.check(
                    format!("stage {m} split s={name}: a_s of A_{} defined with length < k_{m}", m + 1),
                    a.as_ref().map_or("undefined".to_string(), |a| a.len().to_string()),
                    km.to_string(),
                    a.as_ref().is_some_and(|a| a.len() < km),
                );
                if let Some(a) = a {
                    for i in 0..2u8 {
                        let mut child = s.clone();
                        child.push(i);
                        let mut need = a.clone();
                        need.push(i);
                        let ci = &c[&child];
                        b.check(
                            format!("stage {m} children s={name}, i={i}: c_s⌢i extends a_s⌢i"),
                            show(ci),
                            digits_to_string(&need),
                            ci.extends(&need),
                        );
                    }
                }
            } else {
                let cs = &c[&s];
                let nb = cs.prefix(km);
                let inside: Vec<String> = a_next.iter().filter(|w| w.extends(&nb)).map(show).collect();
                b.check(
                    format!("stage {m} isolation s={name}: A_{} near c_s↾k_{m} is {{c_s}}", m + 1),
                    format!("{{{}}}", inside.join(", ")),
                    format!("{{{}}}", show(cs)),
                    inside == vec![show(cs)],
                );
            }
        }
        let here: BTreeSet<Vec<u8>> = a_next.iter().map(|w| w.prefix(km)).collect();
        for n in m + 2..=stages {
            let later: BTreeSet<Vec<u8>> = level_set(&c, n).iter().map(|w| w.prefix(km)).collect();
            b.check(
                format!("stage {m} stability: A_{} and A_{n} agree below k_{m}", m + 1),
                here.len().to_string(),
                later.len().to_string(),
                here == later,
            );
        }
    }
    let set = level_set(&c, stages);
    let got = psi(&set).truncate(stages - 1);
    let want = t.truncate(stages - 1);
    b.check(
        format!("Ψ(A_{stages}) equals T to depth {}", stages - 1),
        got.len().to_string(),
        want.len().to_string(),
        got.nodes() == want.nodes(),
    );
    b.set_param("k", k[1..].to_vec());
    Ok((JonssonBuild { c, k, set }, b.finish()))
}
