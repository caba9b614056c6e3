//! Property tests for the word layer, the deciders, the trees and the maps,
//! each compared against an independent brute-force oracle where one exists.

use mycielski::eqrel::{decide_e0, decide_e2, decide_etail, decide_f, delta_window, s3_act, Perm};
use mycielski::maps::e2::{p_e2_run, Bits, Theta};
use mycielski::maps::{block_reduction, in_a, oplus_reduction, p_e0, p_e0_preimage};
use mycielski::rational::{pow2_neg, Rational};
use mycielski::trees::e0::E0Tree;
use mycielski::trees::e2::{build_e2_tree, gap_sum, E2Tree};
use mycielski::trees::prune::two_prune;
use mycielski::word::{interleave, pairing, switch, sym_diff_pattern, tilde, unpair};
use mycielski::{FiniteWord, UPWord};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(cases: u32, seed: u64) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// A raw, possibly non-canonical `(preamble, period)` pair.
fn raw(alphabet: u8, max_pre: usize, max_per: usize) -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    (vec(0..alphabet, 0..=max_pre), vec(0..alphabet, 1..=max_per))
}

fn raw_at((pre, per): &(Vec<u8>, Vec<u8>), n: usize) -> u8 {
    if n < pre.len() {
        pre[n]
    } else {
        per[(n - pre.len()) % per.len()]
    }
}

fn word(alphabet: u8, r: &(Vec<u8>, Vec<u8>)) -> UPWord {
    UPWord::new(alphabet, r.0.clone(), r.1.clone()).unwrap()
}

fn bin(max_pre: usize, max_per: usize) -> impl Strategy<Value = UPWord> {
    raw(2, max_pre, max_per).prop_map(|r| word(2, &r))
}

fn tree() -> impl Strategy<Value = E0Tree> {
    any::<u64>().prop_map(|s| E0Tree::random(&mut ChaCha8Rng::seed_from_u64(s), 4))
}

fn brute_etail(x: &(Vec<u8>, Vec<u8>), y: &(Vec<u8>, Vec<u8>), depth: usize) -> bool {
    let bx = 4 * (x.0.len() + x.1.len());
    let by = 4 * (y.0.len() + y.1.len());
    (0..=bx).any(|r| (0..=by).any(|s| (0..depth).all(|a| raw_at(x, r + a) == raw_at(y, s + a))))
}

fn permuted(g: &Perm, x: &(Vec<u8>, Vec<u8>)) -> (Vec<u8>, Vec<u8>) {
    (x.0.iter().map(|&s| g.apply(s)).collect(), x.1.iter().map(|&s| g.apply(s)).collect())
}

#[test]
fn pairing_inverts_on_the_square() {
    for i in 0..=100 {
        for j in 0..=100 {
            assert_eq!(unpair(pairing(i, j)), (i, j));
        }
    }
    assert_eq!([pairing(0, 0), pairing(1, 0), pairing(0, 1), pairing(2, 0)], [0, 1, 2, 3]);
}

#[test]
fn gap_lemma_holds_on_verified_trees() {
    for k_max in 1..=8 {
        for t in [build_e2_tree(k_max).unwrap(), E2Tree::identity(k_max)] {
            for k in 1..=k_max {
                assert!(gap_sum(t.m(), k) >= pow2_neg(k + 1));
            }
        }
    }
}

proptest! {
    #![proptest_config(config(500, 101))]

    #[test]
    fn canonical_form_is_sound(alphabet in 2u8..=3, r in raw(3, 5, 5)) {
        let r = (r.0.iter().map(|&s| s % alphabet).collect(), r.1.iter().map(|&s| s % alphabet).collect());
        let w = word(alphabet, &r);
        let bound = 3 * (r.0.len() + r.1.len()).pow(2);
        for n in 0..=bound {
            prop_assert_eq!(w.at(n), raw_at(&r, n));
        }
        let (pre, per) = &r;
        let mut unrolled = pre.clone();
        unrolled.push(per[0]);
        let rotated: Vec<u8> = per[1..].iter().chain(&per[..1]).copied().collect();
        prop_assert_eq!(&UPWord::new(alphabet, unrolled, rotated).unwrap(), &w);
        prop_assert_eq!(&UPWord::new(alphabet, pre.clone(), per.repeat(2)).unwrap(), &w);
    }

    #[test]
    fn tilde_shift_switch_laws(x in bin(4, 4), s in vec(0u8..2, 0..5), sigma in vec(0u8..2, 1..6), a in 0usize..8, b in 0usize..8) {
        let t = tilde(&FiniteWord::binary(sigma.clone()).unwrap()).unwrap();
        for n in 0..30 {
            prop_assert_eq!(t.at(n), sigma[n % sigma.len()]);
        }
        prop_assert_eq!(x.shift(a).shift(b), x.shift(a + b));
        for k in 0..20 {
            prop_assert_eq!(x.shift(a).at(k), x.at(a + k));
        }
        let sw = switch(&s, &x);
        for n in 0..30 {
            prop_assert_eq!(sw.at(n), if n < s.len() { s[n] } else { x.at(n) });
        }
        prop_assert_eq!(switch(&s, &sw), sw);
    }

    #[test]
    fn interleave_and_difference_pattern(x in bin(4, 4), y in bin(4, 4)) {
        let i = interleave(&x, &y);
        let d = sym_diff_pattern(&x, &y);
        for k in 0..40 {
            prop_assert_eq!(i.at(2 * k), x.at(k));
            prop_assert_eq!(i.at(2 * k + 1), y.at(k));
            prop_assert_eq!(d.at(k), u8::from(x.at(k) != y.at(k)));
        }
    }

    #[test]
    fn etail_and_f_match_brute_force(alphabet in 2u8..=3, rx in raw(3, 5, 5), ry in raw(3, 5, 5)) {
        let m = |r: (Vec<u8>, Vec<u8>)| (r.0.iter().map(|&s| s % alphabet).collect::<Vec<_>>(), r.1.iter().map(|&s| s % alphabet).collect::<Vec<_>>());
        let (rx, ry) = (m(rx), m(ry));
        let (x, y) = (word(alphabet, &rx), word(alphabet, &ry));
        prop_assert_eq!(decide_etail(&x, &y), brute_etail(&rx, &ry, 200));
        if alphabet == 3 {
            let brute_f = Perm::all().iter().any(|g| brute_etail(&permuted(g, &rx), &ry, 200));
            prop_assert_eq!(decide_f(&x, &y), brute_f);
        }
    }

    #[test]
    fn delta_is_additive_and_a_pseudo_metric(x in bin(5, 5), y in bin(5, 5), z in bin(5, 5), m in 0usize..10, n in 0usize..10, p in 0usize..10) {
        let mut w = [m, n, p];
        w.sort_unstable();
        let [m, n, p] = w;
        let d = |a: &UPWord, b: &UPWord, lo, hi| delta_window(lo, hi, a, b).unwrap();
        prop_assert_eq!(d(&x, &y, m, n) + d(&x, &y, n, p), d(&x, &y, m, p));
        prop_assert!(d(&x, &z, m, p) <= d(&x, &y, m, p) + d(&y, &z, m, p));
        prop_assert_eq!(d(&x, &y, m, p), d(&y, &x, m, p));
        prop_assert_eq!(d(&x, &x, m, p), Rational::from_integer(0.into()));
    }

    #[test]
    fn e2_is_an_equivalence_and_e0_refines(x in bin(4, 4), s in vec(0u8..2, 0..6), t in vec(0u8..2, 0..6), other in bin(4, 4)) {
        let y = switch(&s, &x);
        let z = switch(&t, &y);
        prop_assert!(decide_e2(&x, &x));
        for (a, b) in [(&x, &y), (&x, &other), (&y, &other)] {
            prop_assert_eq!(decide_e2(a, b), decide_e2(b, a));
            if decide_e0(a, b) {
                prop_assert!(decide_e2(a, b) && decide_etail(a, b));
            }
        }
        prop_assert!(decide_e2(&x, &y) && decide_e2(&y, &z) && decide_e2(&x, &z));
        if decide_e2(&x, &other) {
            prop_assert!(decide_e2(&z, &other));
        }
    }
}

proptest! {
    #![proptest_config(config(200, 202))]

    #[test]
    fn e0_branch_map_reduces_e0(p in tree(), x in bin(4, 4), y in bin(4, 4)) {
        let (fx, fy) = (p.phi(&x).unwrap(), p.phi(&y).unwrap());
        prop_assert_eq!(decide_e0(&x, &y), decide_e0(&fx, &fy));
    }

    #[test]
    fn e0_branch_map_block_arithmetic(p in tree(), x in bin(4, 4), n in 0usize..10) {
        let fx = p.phi(&x).unwrap();
        let (lo, hi) = (p.level_bound(n as isize - 1), p.level_bound(n as isize));
        let (v0, v1) = p.block(n);
        let block = if x.at(n) == 0 { v0 } else { v1 };
        prop_assert_eq!(&fx.prefix(hi)[lo..], &block[..]);
        let flipped: Vec<u8> = x.prefix(n + 1).iter().enumerate().map(|(i, &b)| if i == n { 1 - b } else { b }).collect();
        let y = x.shift(n + 1).prepend(&flipped);
        prop_assert_ne!(fx.at(lo), p.phi(&y).unwrap().at(lo));
    }

    #[test]
    fn p_e0_output_lies_in_a(x in bin(3, 4), y in bin(3, 4), z in bin(3, 4)) {
        prop_assume!(!decide_e0(&x, &y) && !decide_e0(&x, &z) && !decide_e0(&y, &z));
        prop_assert!(in_a(&p_e0(&x, &y, &z).unwrap()));
    }

    #[test]
    fn p_e0_inverts_the_preimage(p in tree(), r in (0u8..3, vec(1u8..3, 0..4), vec(1u8..3, 1..6))) {
        let (first, pre_steps, per_steps) = r;
        let mut pre = vec![first];
        for d in pre_steps {
            let last = *pre.last().unwrap();
            pre.push((last + d) % 3);
        }
        let mut per = Vec::new();
        let mut last = *pre.last().unwrap();
        for d in per_steps {
            last = (last + d) % 3;
            per.push(last);
        }
        let v = UPWord::new(3, pre, per).unwrap();
        prop_assume!(in_a(&v));
        let (a, b, c) = p_e0_preimage(&v, &p).unwrap();
        prop_assert_eq!(p_e0(&a, &b, &c).unwrap(), v);
    }

    #[test]
    fn tail_reductions_follow_their_laws(x in bin(4, 4), y in bin(4, 4)) {
        let (ox, oy) = (oplus_reduction(&x).unwrap(), oplus_reduction(&y).unwrap());
        prop_assert!(in_a(&ox));
        prop_assert_eq!(decide_etail(&x, &y), decide_etail(&ox, &oy));
        let (bx, by) = (block_reduction(&x).unwrap(), block_reduction(&y).unwrap());
        prop_assert!(in_a(&bx));
        prop_assert_eq!(decide_etail(&x, &y), decide_f(&bx, &by));
        let ones = UPWord::ones();
        for g in Perm::all() {
            if g != Perm::identity() && decide_etail(&s3_act(&g, &bx), &by) {
                prop_assert_eq!(g, Perm::transposition(1, 2));
                prop_assert!(decide_e0(&x, &ones) && decide_e0(&y, &ones));
            }
        }
    }

    #[test]
    fn p_e2_digits_are_prefix_determined(x in bin(3, 3), y in bin(3, 3), z in bin(3, 3)) {
        prop_assume!(!decide_e2(&x, &y) && !decide_e2(&x, &z) && !decide_e2(&y, &z));
        let theta: Theta = "1/4,1/2,3/4".parse().unwrap();
        let full = p_e2_run(Bits::Word(&x), Bits::Word(&y), Bits::Word(&z), &theta, 3, 100_000);
        prop_assert!(full.stopped.is_none());
        let m = full.modulus;
        let (px, py, pz) = (x.prefix(m), y.prefix(m), z.prefix(m));
        let cut = p_e2_run(Bits::Prefix(&px), Bits::Prefix(&py), Bits::Prefix(&pz), &theta, 3, 100_000);
        prop_assert_eq!(cut.digits, full.digits);
    }

    #[test]
    fn two_prune_keeps_stems_and_installs_targets(
        seed in any::<u64>(),
        stems in (vec(0u8..2, 0..3), vec(0u8..2, 0..3)),
        words in (vec(0u8..2, 0..3), vec(0u8..2, 0..3)),
        choice in (0u8..2, 0u8..2),
    ) {
        let blocks = E0Tree::random(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        let len = stems.0.len().min(stems.1.len());
        let p = blocks.with_stem(stems.0[..len].to_vec()).unwrap();
        let q = blocks.with_stem(stems.1[..len].to_vec()).unwrap();
        let k = words.0.len().min(words.1.len());
        let mut u = words.0[..k].to_vec();
        let mut v = words.1[..k].to_vec();
        u.push(0);
        v.push(1);
        let ext = |w: &[u8], c: u8| [w, &[c]].concat();
        let (pu, qv) = (p.xi(&ext(&u, choice.0)).unwrap(), q.xi(&ext(&v, choice.1)).unwrap());
        let horizon = 8;
        let (x, y) = two_prune((&p, &q), &u, &v, (&pu, &qv), horizon).unwrap();
        prop_assert_eq!(x.stem(), p.stem());
        prop_assert_eq!(y.stem(), q.stem());
        prop_assert!(x.shares_blocks_with(&y));
        prop_assert_eq!(x.xi(&u).unwrap().to_finite_tree(horizon), pu.to_finite_tree(horizon));
        prop_assert_eq!(y.xi(&v).unwrap().to_finite_tree(horizon), qv.to_finite_tree(horizon));
        prop_assert!(x.to_finite_tree(horizon).is_subtree_of(&p.to_finite_tree(horizon)));
    }
}
