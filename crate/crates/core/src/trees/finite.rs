//! Finite-depth truncations of perfect binary trees: split nodes, `Λ`, `Ξ`.

use std::collections::BTreeSet;

use crate::error::{invalid, Error, Result};

/// A prefix-closed set of binary words of length at most `depth`.
///
/// Trees used for split queries are expected to be pruned (every node shorter
/// than `depth` has a child); queries report a dead end loudly otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteTree {
    depth: usize,
    nodes: BTreeSet<Vec<u8>>,
}

impl FiniteTree {
    /// Validates prefix closure, binary symbols and the depth bound.
    pub fn new(depth: usize, nodes: impl IntoIterator<Item = Vec<u8>>) -> Result<Self> {
        let nodes: BTreeSet<Vec<u8>> = nodes.into_iter().collect();
        for n in &nodes {
            if n.len() > depth {
                return invalid(format!("node of length {} exceeds depth {depth}", n.len()));
            }
            if n.iter().any(|&b| b > 1) {
                return invalid("tree nodes must be binary words");
            }
            if !n.is_empty() && !nodes.contains(&n[..n.len() - 1]) {
                return invalid(format!("node {n:?} is present but its parent is not"));
            }
        }
        Ok(FiniteTree { depth, nodes })
    }

    /// The downward closure of the given words.
    pub fn from_leaves(depth: usize, leaves: impl IntoIterator<Item = Vec<u8>>) -> Result<Self> {
        let mut nodes = BTreeSet::new();
        for leaf in leaves {
            for k in 0..=leaf.len() {
                nodes.insert(leaf[..k].to_vec());
            }
        }
        Self::new(depth, nodes)
    }

    pub fn empty(depth: usize) -> Self {
        FiniteTree {
            depth,
            nodes: BTreeSet::new(),
        }
    }

    /// All binary words of length at most `depth`.
    pub fn full(depth: usize) -> Self {
        let mut nodes = BTreeSet::new();
        let mut level = vec![Vec::new()];
        for _ in 0..=depth {
            let mut next = Vec::new();
            for w in level {
                let mut a = w.clone();
                a.push(0);
                let mut b = w.clone();
                b.push(1);
                nodes.insert(w);
                next.push(a);
                next.push(b);
            }
            level = next;
        }
        FiniteTree { depth, nodes }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn nodes(&self) -> &BTreeSet<Vec<u8>> {
        &self.nodes
    }

    pub fn contains(&self, s: &[u8]) -> bool {
        self.nodes.contains(s)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Every node shorter than the depth has a child.
    pub fn is_pruned(&self) -> bool {
        self.nodes.iter().all(|n| {
            n.len() >= self.depth || self.contains(&child(n, 0)) || self.contains(&child(n, 1))
        })
    }

    /// Both one-symbol extensions of `s` are nodes; undecidable at full depth.
    pub fn is_split(&self, s: &[u8]) -> Result<bool> {
        if s.len() >= self.depth {
            return Err(Error::DepthInsufficient(format!(
                "cannot tell whether a node of length {} splits in a tree of depth {}",
                s.len(),
                self.depth
            )));
        }
        Ok(self.contains(&child(s, 0)) && self.contains(&child(s, 1)))
    }

    /// `p_t = {u ∈ p : u ⊆ t ∨ t ⊆ u}`.
    pub fn restrict(&self, t: &[u8]) -> FiniteTree {
        let nodes = self
            .nodes
            .iter()
            .filter(|u| t.starts_with(u) || u.starts_with(t))
            .cloned()
            .collect();
        FiniteTree {
            depth: self.depth,
            nodes,
        }
    }

    /// Nodes of length at most `d`.
    pub fn truncate(&self, d: usize) -> FiniteTree {
        FiniteTree {
            depth: d.min(self.depth),
            nodes: self.nodes.iter().filter(|n| n.len() <= d).cloned().collect(),
        }
    }

    pub fn is_subtree_of(&self, other: &FiniteTree) -> bool {
        self.nodes.is_subset(&other.nodes)
    }

    /// The least split node extending `t`.
    fn next_split(&self, t: &[u8]) -> Result<Vec<u8>> {
        let mut t = t.to_vec();
        loop {
            if !self.contains(&t) {
                return invalid(format!("{t:?} is not a node of the tree"));
            }
            if self.is_split(&t)? {
                return Ok(t);
            }
            if self.contains(&child(&t, 0)) {
                t.push(0);
            } else if self.contains(&child(&t, 1)) {
                t.push(1);
            } else {
                return Err(Error::Precondition(format!(
                    "node {t:?} has no child; the tree is not perfect"
                )));
            }
        }
    }
}

fn child(s: &[u8], b: u8) -> Vec<u8> {
    let mut c = s.to_vec();
    c.push(b);
    c
}

/// `Λ(p, ∅) = ∅` and `Λ(p, s⌢i) = t⌢i` for the least split node `t ⊇ Λ(p, s)`.
pub fn lambda_map(p: &FiniteTree, s: &[u8]) -> Result<Vec<u8>> {
    let mut t = Vec::new();
    for &b in s {
        if b > 1 {
            return invalid("Λ is defined on binary words");
        }
        t = p.next_split(&t)?;
        t.push(b);
    }
    Ok(t)
}

/// `Ξ(p, s) = p_{Λ(p, s)}`.
pub fn xi_map(p: &FiniteTree, s: &[u8]) -> Result<FiniteTree> {
    Ok(p.restrict(&lambda_map(p, s)?))
}

/// `split^n(p) = {Λ(p, s) : |s| = n}`: the minimal nodes with exactly `n`
/// proper initial segments that split.
pub fn splits(p: &FiniteTree, n: usize) -> Result<BTreeSet<Vec<u8>>> {
    all_words(n).iter().map(|s| lambda_map(p, s)).collect()
}

/// All binary words of length `n` in lexicographic order.
pub fn all_words(n: usize) -> Vec<Vec<u8>> {
    (0..1usize << n)
        .map(|code| (0..n).map(|i| ((code >> (n - 1 - i)) & 1) as u8).collect())
        .collect()
}
