//! E0-trees: a stem followed by paired equal-length blocks.

use num::integer::lcm;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::trees::finite::FiniteTree;
use crate::word::{digits_to_string, parse_digits, UPWord};

/// One level of an E0-tree: `(v⁰_n, v¹_n)` with `v^i_n(0) = i`.
pub type BlockPair = (Vec<u8>, Vec<u8>);

/// An E0-tree with an ultimately periodic block scheme: the explicit blocks
/// come first and the cycle blocks repeat forever after them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "E0TreeRepr", into = "E0TreeRepr")]
pub struct E0Tree {
    stem: Vec<u8>,
    explicit: Vec<BlockPair>,
    cycle: Vec<BlockPair>,
}

#[derive(Serialize, Deserialize)]
struct E0TreeRepr {
    stem: String,
    blocks: Vec<[String; 2]>,
    cycle: Vec<[String; 2]>,
}

impl From<E0Tree> for E0TreeRepr {
    fn from(t: E0Tree) -> Self {
        let pairs = |bs: &[BlockPair]| {
            bs.iter()
                .map(|(a, b)| [digits_to_string(a), digits_to_string(b)])
                .collect()
        };
        E0TreeRepr {
            stem: digits_to_string(&t.stem),
            blocks: pairs(&t.explicit),
            cycle: pairs(&t.cycle),
        }
    }
}

impl TryFrom<E0TreeRepr> for E0Tree {
    type Error = crate::Error;

    fn try_from(r: E0TreeRepr) -> Result<Self> {
        let pairs = |bs: &[[String; 2]]| -> Result<Vec<BlockPair>> {
            bs.iter()
                .map(|[a, b]| Ok((parse_digits(a, 0)?, parse_digits(b, 0)?)))
                .collect()
        };
        E0Tree::new(
            parse_digits(&r.stem, 0)?,
            pairs(&r.blocks)?,
            pairs(&r.cycle)?,
        )
    }
}

fn check_pair(n: usize, (a, b): &BlockPair) -> Result<()> {
    if a.is_empty() || a.len() != b.len() {
        return invalid(format!("block pair {n} must have equal nonzero lengths"));
    }
    if a[0] != 0 || b[0] != 1 {
        return invalid(format!("block pair {n} must start with 0 and 1 respectively"));
    }
    if a.iter().chain(b.iter()).any(|&s| s > 1) {
        return invalid(format!("block pair {n} must be binary"));
    }
    Ok(())
}

impl E0Tree {
    pub fn new(stem: Vec<u8>, explicit: Vec<BlockPair>, cycle: Vec<BlockPair>) -> Result<Self> {
        if stem.iter().any(|&s| s > 1) {
            return invalid("stem must be binary");
        }
        if cycle.is_empty() {
            return invalid("cycle blocks must be nonempty");
        }
        for (n, pair) in explicit.iter().chain(cycle.iter()).enumerate() {
            check_pair(n, pair)?;
        }
        Ok(E0Tree {
            stem,
            explicit,
            cycle,
        })
    }

    /// Stem `∅` and the single cycle pair `(0, 1)`: the full binary tree.
    pub fn identity() -> Self {
        E0Tree {
            stem: Vec::new(),
            explicit: Vec::new(),
            cycle: vec![(vec![0], vec![1])],
        }
    }

    /// Random stem of length ≤ 3, up to two explicit pairs and one to three
    /// cycle pairs, each block of length between 1 and `max_block_len`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_block_len: usize) -> Self {
        let max_block_len = max_block_len.max(1);
        let bits = |rng: &mut R, n: usize| -> Vec<u8> {
            (0..n).map(|_| rng.random_range(0..2u8)).collect()
        };
        let pair = |rng: &mut R| -> BlockPair {
            let len = rng.random_range(1..=max_block_len);
            let mut a = vec![0];
            a.extend(bits(rng, len - 1));
            let mut b = vec![1];
            b.extend(bits(rng, len - 1));
            (a, b)
        };
        let stem_len = rng.random_range(0..=3);
        let stem = (0..stem_len).map(|_| rng.random_range(0..2u8)).collect();
        let explicit = (0..rng.random_range(0..=2)).map(|_| pair(rng)).collect();
        let cycle = (0..rng.random_range(1..=3)).map(|_| pair(rng)).collect();
        E0Tree {
            stem,
            explicit,
            cycle,
        }
    }

    pub fn stem(&self) -> &[u8] {
        &self.stem
    }

    pub fn explicit_blocks(&self) -> &[BlockPair] {
        &self.explicit
    }

    pub fn cycle_blocks(&self) -> &[BlockPair] {
        &self.cycle
    }

    /// The block pair at level `n`.
    pub fn block(&self, n: usize) -> &BlockPair {
        if n < self.explicit.len() {
            &self.explicit[n]
        } else {
            &self.cycle[(n - self.explicit.len()) % self.cycle.len()]
        }
    }

    pub fn block_len(&self, n: usize) -> usize {
        self.block(n).0.len()
    }

    /// `L_n = |s| + Σ_{k≤n} |v_k|`, with `L_{-1} = |s|`.
    pub fn level_bound(&self, n: isize) -> usize {
        let levels = usize::try_from(n + 1).unwrap_or(0);
        self.stem.len() + (0..levels).map(|k| self.block_len(k)).sum::<usize>()
    }

    /// `φ(σ) = s ⌢ v^{σ(0)}_0 ⌢ v^{σ(1)}_1 ⌢ …`.
    pub fn phi_fin(&self, sigma: &[u8]) -> Vec<u8> {
        let mut out = self.stem.clone();
        for (n, &b) in sigma.iter().enumerate() {
            let (v0, v1) = self.block(n);
            out.extend_from_slice(if b == 0 { v0 } else { v1 });
        }
        out
    }

    /// The branch map `Φ(x) = ⋃ φ(x↾n)` on a binary ultimately periodic word.
    pub fn phi(&self, x: &UPWord) -> Result<UPWord> {
        if x.alphabet() != 2 {
            return invalid("the branch map takes binary words");
        }
        let start = self.explicit.len().max(x.preamble().len());
        let span = lcm(self.cycle.len(), x.period().len());
        let sigma = x.prefix(start + span);
        let full = self.phi_fin(&sigma);
        let cut = self.level_bound(start as isize - 1);
        let per = full[cut..].to_vec();
        let mut pre = full;
        pre.truncate(cut);
        Ok(UPWord::canonical(2, pre, per))
    }

    /// Number of levels after which both block schemes repeat jointly.
    fn joint_levels(&self, other: &E0Tree) -> usize {
        self.explicit.len().max(other.explicit.len()) + lcm(self.cycle.len(), other.cycle.len())
    }

    /// Equal block sequences (stems may differ).
    pub fn same_blocks(&self, other: &E0Tree) -> bool {
        (0..self.joint_levels(other)).all(|n| self.block(n) == other.block(n))
    }

    /// Same blocks and equal stem lengths.
    pub fn shares_blocks_with(&self, other: &E0Tree) -> bool {
        self.stem.len() == other.stem.len() && self.same_blocks(other)
    }

    /// The same block scheme under a new stem.
    pub fn with_stem(&self, stem: Vec<u8>) -> Result<E0Tree> {
        E0Tree::new(stem, self.explicit.clone(), self.cycle.clone())
    }

    /// The blocks from level `n` on, as a scheme starting at level 0.
    pub fn blocks_from(&self, n: usize) -> (Vec<BlockPair>, Vec<BlockPair>) {
        if n <= self.explicit.len() {
            (self.explicit[n..].to_vec(), self.cycle.clone())
        } else {
            let mut cycle = self.cycle.clone();
            cycle.rotate_left((n - self.explicit.len()) % self.cycle.len());
            (Vec::new(), cycle)
        }
    }

    /// `Ξ(p, u)` as an E0-tree: stem `φ(u)` and the blocks from level `|u|`.
    pub fn xi(&self, u: &[u8]) -> Result<E0Tree> {
        if u.iter().any(|&b| b > 1) {
            return invalid("Ξ takes a binary word");
        }
        let (explicit, cycle) = self.blocks_from(u.len());
        Ok(E0Tree {
            stem: self.phi_fin(u),
            explicit,
            cycle,
        })
    }

    /// The nodes of the tree of length at most `depth`.
    pub fn to_finite_tree(&self, depth: usize) -> FiniteTree {
        let mut leaves = Vec::new();
        let mut stack = vec![Vec::<u8>::new()];
        while let Some(sigma) = stack.pop() {
            let node = self.phi_fin(&sigma);
            if node.len() >= depth {
                leaves.push(node[..depth].to_vec());
            } else {
                for b in [0, 1] {
                    let mut next = sigma.clone();
                    next.push(b);
                    stack.push(next);
                }
            }
        }
        FiniteTree::from_leaves(depth, leaves).expect("branch prefixes form a tree")
    }
}

/// `L_n` for the tree `p`.
pub fn e0_level_bounds(p: &E0Tree, n: isize) -> usize {
    p.level_bound(n)
}

/// The branch map of `p` applied to `x`.
pub fn e0_phi(p: &E0Tree, x: &UPWord) -> Result<UPWord> {
    p.phi(x)
}

/// Trees sharing the blocks of `blocks` and differing only at their stems.
pub fn same_block_trees(blocks: &E0Tree, stems: &[Vec<u8>]) -> Result<Vec<E0Tree>> {
    if let Some(first) = stems.first() {
        if stems.iter().any(|s| s.len() != first.len()) {
            return invalid("stems must have equal lengths");
        }
    }
    stems.iter().map(|s| blocks.with_stem(s.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqrel::decide_e0;
    use crate::word::switch;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn up(s: &str) -> UPWord {
        UPWord::parse(s, None).unwrap()
    }

    #[test]
    fn identity_tree_is_identity() {
        let id = E0Tree::identity();
        for w in ["(0)", "1(01)", "0110(110)"] {
            assert_eq!(id.phi(&up(w)).unwrap(), up(w));
        }
        assert_eq!(id.level_bound(-1), 0);
        assert_eq!(id.level_bound(4), 5);
    }

    #[test]
    fn stem_and_doubling_examples() {
        let stemmed = E0Tree::identity().with_stem(vec![1]).unwrap();
        assert_eq!(stemmed.phi(&up("0(01)")).unwrap(), up("10(01)"));
        let stem3 = E0Tree::identity().with_stem(vec![1, 1, 0]).unwrap();
        assert_eq!(stem3.level_bound(-1), 3);
        assert_eq!(stem3.level_bound(2), 6);
        let doubling = E0Tree::new(vec![], vec![], vec![(vec![0, 0], vec![1, 1])]).unwrap();
        assert_eq!(doubling.phi(&up("(01)")).unwrap(), up("(0011)"));
    }

    #[test]
    fn reduction_law_on_random_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let words = ["(0)", "1(0)", "(01)", "1(10)", "0(011)", "(1)", "111(0)"];
        for _ in 0..10 {
            let p = E0Tree::random(&mut rng, 4);
            for a in words {
                for b in words {
                    let (x, y) = (up(a), up(b));
                    assert_eq!(
                        decide_e0(&x, &y),
                        decide_e0(&p.phi(&x).unwrap(), &p.phi(&y).unwrap())
                    );
                }
            }
        }
    }

    #[test]
    fn xi_is_the_subtree_through_phi_u() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = E0Tree::random(&mut rng, 3);
        let u = [1, 0, 1, 1];
        let xi = p.xi(&u).unwrap();
        let depth = p.level_bound(6);
        let cone = p.to_finite_tree(depth).restrict(&p.phi_fin(&u));
        assert_eq!(xi.to_finite_tree(depth), cone);
    }

    #[test]
    fn same_block_bodies_are_switch_related() {
        let trees = same_block_trees(&E0Tree::identity(), &[vec![0, 0], vec![1, 1]]).unwrap();
        let x = up("(01)");
        let a = trees[0].phi(&x).unwrap();
        let b = trees[1].phi(&x).unwrap();
        assert_eq!(switch(&[1, 1], &a), b);
        assert!(trees[0].shares_blocks_with(&trees[1]));
        assert!(same_block_trees(&E0Tree::identity(), &[vec![0], vec![1, 1]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = E0Tree::new(
            vec![1],
            vec![(vec![0, 1], vec![1, 1])],
            vec![(vec![0], vec![1])],
        )
        .unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"stem":"1","blocks":[["01","11"]],"cycle":[["0","1"]]}"#);
        assert_eq!(serde_json::from_str::<E0Tree>(&json).unwrap(), t);
        assert!(serde_json::from_str::<E0Tree>(r#"{"stem":"","blocks":[],"cycle":[["1","0"]]}"#).is_err());
    }
}
