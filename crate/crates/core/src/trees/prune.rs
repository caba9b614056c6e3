//! Pruning of same-block tuples of E0-trees below a chosen level.

use crate::error::{Error, Result};
use crate::trees::e0::{BlockPair, E0Tree};

/// Replaces the level `|u| - 1` block of every coordinate so that, for each
/// word `w_a`, the subtree through `Λ(x_a, w_a)` becomes the prescribed
/// `p'_a`, and every other level-`|u|` subtree becomes its switch-translate.
fn prune(
    trees: &[&E0Tree],
    words: &[&[u8]],
    primes: &[&E0Tree],
    horizon: usize,
) -> Result<Vec<E0Tree>> {
    let mut problems = Vec::new();
    let n = words[0].len();
    if n == 0 || words.iter().any(|w| w.len() != n) {
        problems.push("the words must share one positive length".to_string());
    }
    if words.iter().flat_map(|w| w.iter()).any(|&b| b > 1) {
        problems.push("the words must be binary".to_string());
    }
    for (i, t) in trees.iter().enumerate().skip(1) {
        if !trees[0].shares_blocks_with(t) {
            problems.push(format!("input trees 0 and {i} do not share blocks"));
        }
    }
    for (i, t) in primes.iter().enumerate().skip(1) {
        if !primes[0].shares_blocks_with(t) {
            problems.push(format!("replacement trees 0 and {i} do not share blocks"));
        }
    }
    if !problems.is_empty() {
        return Err(Error::Precondition(problems.join("; ")));
    }

    let level = n - 1;
    let bound = trees[0].level_bound(level as isize);
    let last: Vec<u8> = words.iter().map(|w| w[level]).collect();
    if !(last.contains(&0) && last.contains(&1)) {
        problems.push("the last symbols of the words must cover both 0 and 1".to_string());
    }
    for (a, ((t, w), p)) in trees.iter().zip(words).zip(primes).enumerate() {
        let phi_w = t.phi_fin(w);
        if !p.stem().starts_with(&phi_w) {
            problems.push(format!(
                "replacement {a} does not extend the branch node of its word"
            ));
            continue;
        }
        let sub = p.to_finite_tree(horizon);
        let target = t.xi(w)?.to_finite_tree(horizon);
        if !sub.is_subtree_of(&target) {
            problems.push(format!(
                "replacement {a} is not below the subtree through its word at horizon {horizon}"
            ));
        }
    }
    let mut suffix: [Option<&[u8]>; 2] = [None, None];
    for (a, p) in primes.iter().enumerate() {
        let b = last[a] as usize;
        let tail = &p.stem()[bound.min(p.stem().len())..];
        match suffix[b] {
            None => suffix[b] = Some(tail),
            Some(prev) if prev != tail => problems.push(format!(
                "replacements ending in {b} disagree beyond the level bound {bound}"
            )),
            Some(_) => {}
        }
    }
    if !problems.is_empty() {
        return Err(Error::Precondition(problems.join("; ")));
    }

    let (v0, v1) = trees[0].block(level);
    let new_block: BlockPair = (
        [v0.as_slice(), suffix[0].unwrap_or_default()].concat(),
        [v1.as_slice(), suffix[1].unwrap_or_default()].concat(),
    );
    let mut explicit: Vec<BlockPair> = (0..level).map(|k| trees[0].block(k).clone()).collect();
    explicit.push(new_block);
    explicit.extend(primes[0].explicit_blocks().iter().cloned());
    let cycle = primes[0].cycle_blocks().to_vec();
    trees
        .iter()
        .map(|t| E0Tree::new(t.stem().to_vec(), explicit.clone(), cycle.clone()))
        .collect()
}

/// The pair `(x, y)` below `(p, q)` keeping the `|u|`-splits, whose subtrees
/// through `u` and `v` are `p'` and `q'`.
pub fn two_prune(
    pq: (&E0Tree, &E0Tree),
    u: &[u8],
    v: &[u8],
    primes: (&E0Tree, &E0Tree),
    horizon: usize,
) -> Result<(E0Tree, E0Tree)> {
    if u.len() != v.len() || u.is_empty() || u.last() == v.last() {
        return Err(Error::Precondition(
            "u and v must have equal positive length and different last symbols".to_string(),
        ));
    }
    let mut out = prune(&[pq.0, pq.1], &[u, v], &[primes.0, primes.1], horizon)?;
    let y = out.pop().expect("two trees");
    let x = out.pop().expect("two trees");
    Ok((x, y))
}

/// The triple `(a, b, c)` below `(p, q, r)` keeping the `(n+1)`-splits, with
/// `Ξ(a, u) = p'`, `Ξ(b, v) = q'` and `Ξ(c, z) = r'`.
pub fn three_prune(
    pqr: (&E0Tree, &E0Tree, &E0Tree),
    u: &[u8],
    v: &[u8],
    z: &[u8],
    primes: (&E0Tree, &E0Tree, &E0Tree),
    horizon: usize,
) -> Result<(E0Tree, E0Tree, E0Tree)> {
    let mut out = prune(
        &[pqr.0, pqr.1, pqr.2],
        &[u, v, z],
        &[primes.0, primes.1, primes.2],
        horizon,
    )?;
    let c = out.pop().expect("three trees");
    let b = out.pop().expect("three trees");
    let a = out.pop().expect("three trees");
    Ok((a, b, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::finite::lambda_map;
    use crate::trees::finite::all_words;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_case_returns_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = E0Tree::random(&mut rng, 3);
        let q = p.with_stem(p.stem().iter().map(|b| 1 - b).collect()).unwrap();
        let (u, v) = ([0u8, 1], [1u8, 0]);
        let horizon = p.level_bound(5);
        let (x, y) = two_prune((&p, &q), &u, &v, (&p.xi(&u).unwrap(), &q.xi(&v).unwrap()), horizon)
            .unwrap();
        assert_eq!(x.to_finite_tree(horizon), p.to_finite_tree(horizon));
        assert_eq!(y.to_finite_tree(horizon), q.to_finite_tree(horizon));
    }

    #[test]
    fn shrinking_prune_keeps_stems_and_splits() {
        let p = E0Tree::identity().with_stem(vec![0, 1]).unwrap();
        let q = E0Tree::identity().with_stem(vec![1, 1]).unwrap();
        let (u, v) = ([1u8], [0u8]);
        // Thin the subtrees by fixing two extra symbols after the branch node.
        let p1 = p.xi(&u).unwrap();
        let p2 = E0Tree::new([p1.stem(), &[1, 0]].concat(), vec![], vec![(vec![0], vec![1])])
            .unwrap();
        let q1 = q.xi(&v).unwrap();
        let q2 = E0Tree::new([q1.stem(), &[0, 0]].concat(), vec![], vec![(vec![0], vec![1])])
            .unwrap();
        let horizon = 10;
        let (x, y) = two_prune((&p, &q), &u, &v, (&p2, &q2), horizon).unwrap();
        assert_eq!(x.stem(), p.stem());
        assert_eq!(y.stem(), q.stem());
        assert!(x.shares_blocks_with(&y));
        let xt = x.to_finite_tree(horizon);
        assert!(xt.is_subtree_of(&p.to_finite_tree(horizon)));
        let pt = p.to_finite_tree(horizon);
        for s in [vec![], vec![0], vec![1]] {
            assert_eq!(lambda_map(&xt, &s).unwrap(), lambda_map(&pt, &s).unwrap());
        }
        assert_eq!(x.xi(&u).unwrap().to_finite_tree(horizon), p2.to_finite_tree(horizon));
        assert_eq!(y.xi(&v).unwrap().to_finite_tree(horizon), q2.to_finite_tree(horizon));
    }

    #[test]
    fn precondition_violations_are_reported() {
        let p = E0Tree::identity();
        let bad = E0Tree::identity().with_stem(vec![1, 1, 1]).unwrap();
        let err = two_prune((&p, &p), &[0], &[1], (&bad, &bad), 6).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        assert!(two_prune((&p, &p), &[0], &[0], (&p, &p), 6).is_err());
    }

    #[test]
    fn three_prune_identity_and_targets() {
        let stems = [vec![0, 0], vec![0, 1], vec![1, 1]];
        let [p, q, r] = stems.map(|s| E0Tree::identity().with_stem(s).unwrap());
        let words: Vec<Vec<u8>> = all_words(2);
        let (u, v, z) = (&words[0], &words[3], &words[2]);
        let horizon = 9;
        let primes = (p.xi(u).unwrap(), q.xi(v).unwrap(), r.xi(z).unwrap());
        let (a, b, c) =
            three_prune((&p, &q, &r), u, v, z, (&primes.0, &primes.1, &primes.2), horizon)
                .unwrap();
        for (x, orig) in [(&a, &p), (&b, &q), (&c, &r)] {
            assert_eq!(x.to_finite_tree(horizon), orig.to_finite_tree(horizon));
        }
        // u and z share their last symbol, so their suffixes must agree.
        let extend = |t: &E0Tree, extra: &[u8]| {
            E0Tree::new([t.stem(), extra].concat(), vec![], vec![(vec![0], vec![1])]).unwrap()
        };
        let pp = extend(&primes.0, &[1]);
        let qq = extend(&primes.1, &[0]);
        let rr = extend(&primes.2, &[0]);
        assert!(three_prune((&p, &q, &r), u, v, z, (&pp, &qq, &rr), horizon).is_err());
        let rr = extend(&primes.2, &[1]);
        let (a, b, c) = three_prune((&p, &q, &r), u, v, z, (&pp, &qq, &rr), horizon).unwrap();
        assert_eq!(a.xi(u).unwrap().to_finite_tree(horizon), pp.to_finite_tree(horizon));
        assert_eq!(b.xi(v).unwrap().to_finite_tree(horizon), qq.to_finite_tree(horizon));
        assert_eq!(c.xi(z).unwrap().to_finite_tree(horizon), rr.to_finite_tree(horizon));
        assert_eq!((a.stem(), b.stem(), c.stem()), (p.stem(), q.stem(), r.stem()));
    }
}
