//! The dense open sets of word pairs carrying a long all-differ run whose
//! harmonic weight exceeds a threshold, and the E2-tree pairs avoiding them.

use crate::cert::{CertBuilder, Certificate, Cmp};
use crate::error::{Error, Result};
use crate::rational::{format_rational, pow2_neg, recip, ExactSum, Rational};
use crate::trees::e2::{gap_sum, verify_e2_family, verify_e2_tree, window_delta, E2Tree, E2TreeFamily};
use crate::word::{digits_to_string, sym_diff_pattern, UPWord};
use num::Signed;

/// A maximal run `[start, end)` of positions where two words differ,
/// clipped below at the scan origin, with its exact weight `Σ 1/(n+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub start: usize,
    pub end: usize,
    pub weight: Rational,
}

fn runs_in(diff: &[bool], from: usize) -> Vec<Run> {
    let mut out = Vec::new();
    let mut n = from;
    while n < diff.len() {
        if !diff[n] {
            n += 1;
            continue;
        }
        let start = n;
        let mut acc = ExactSum::new();
        while n < diff.len() && diff[n] {
            acc.add_recip((n + 1) as u64);
            n += 1;
        }
        out.push(Run {
            start,
            end: n,
            weight: acc.value(),
        });
    }
    out
}

/// The heaviest maximal all-differ run starting at or after `from` inside
/// equal-length prefixes, or `None` when the prefixes never differ there.
pub fn heaviest_prefix_run(from: usize, x: &[u8], y: &[u8]) -> Option<Run> {
    let diff: Vec<bool> = x.iter().zip(y).map(|(a, b)| a != b).collect();
    runs_in(&diff, from).into_iter().max_by(|a, b| a.weight.cmp(&b.weight))
}

/// Exact decision of `(∃ from ≤ i < j)(δ_i^j(x, y) > threshold ∧ x, y differ on [i, j))`.
///
/// An all-ones period in the difference pattern is a divergent run. Otherwise
/// every later run is a translate, by whole periods, of a lighter-or-equal
/// copy of one starting within one period past the preambles.
pub fn in_d_e2_threshold(threshold: &Rational, from: usize, x: &UPWord, y: &UPWord) -> bool {
    let d = sym_diff_pattern(x, y);
    if d.period().iter().all(|&b| b == 1) {
        return true;
    }
    let base = from.max(d.preamble().len());
    let len = base + 3 * d.period().len() + 1;
    let diff: Vec<bool> = d.prefix(len).iter().map(|&b| b == 1).collect();
    runs_in(&diff, from)
        .iter()
        .any(|r| r.start <= base + d.period().len() && r.weight > *threshold)
}

/// `(x, y) ∈ D` with threshold 2.
pub fn in_d_e2(x: &UPWord, y: &UPWord) -> bool {
    in_d_e2_threshold(&Rational::from_integer(2.into()), 0, x, y)
}

/// `(x, y) ∈ D_n` with threshold 3 and runs starting at `n` or later.
pub fn in_d_e2_n(n: usize, x: &UPWord, y: &UPWord) -> bool {
    in_d_e2_threshold(&Rational::from_integer(3.into()), n, x, y)
}

/// Extends equal-length prefixes by a differing block heavy enough to place
/// the neighborhood inside the threshold set.
pub fn density_extension_e2(threshold: &Rational, s: &[u8], t: &[u8]) -> Result<(Vec<u8>, Vec<u8>)> {
    if s.len() != t.len() {
        return Err(Error::InvalidArgument("the two prefixes must have equal length".into()));
    }
    let (mut s2, mut t2) = (s.to_vec(), t.to_vec());
    let mut acc = ExactSum::new();
    while !acc.exceeds(threshold) {
        let n = s2.len();
        acc.add_recip((n + 1) as u64);
        s2.push(0);
        t2.push(1);
        if n > s.len() + (1 << 24) {
            return Err(Error::BudgetExhausted("threshold too large for an explicit block".into()));
        }
    }
    Ok((s2, t2))
}

fn alternating(k: usize) -> Vec<u8> {
    (0..k).map(|i| (i % 2) as u8).collect()
}

fn record_run(b: &mut CertBuilder, claim: String, x: &[u8], y: &[u8], threshold: i64) {
    let bound = Rational::from_integer(threshold.into());
    match heaviest_prefix_run(0, x, y) {
        Some(r) => b.compare(
            format!("{claim} (heaviest run [{}, {}))", r.start, r.end),
            &r.weight,
            Cmp::Le,
            &bound,
        ),
        None => b.compare(
            format!("{claim} (the images agree)"),
            &Rational::from_integer(0.into()),
            Cmp::Le,
            &bound,
        ),
    };
}

/// Certifies that a verified E2-tree sends `0̃↾K` and `(01)↾K` to images
/// whose all-differ runs up to `m_K` weigh at most 2.
pub fn e2_mycielski_check(t: &E2Tree) -> Certificate {
    let k = t.levels();
    let mut b = CertBuilder::new("e2-2mycielski")
        .input("tree", serde_json::to_value(t).expect("tree serializes"))
        .input("sources", vec!["(0)", "(01)"])
        .param("horizon", t.m()[k]);
    let verified = verify_e2_tree(t);
    b.check(
        "the tree satisfies its level conditions",
        format!("{} checks", verified.checks.len()),
        "all pass",
        verified.passed(),
    );
    let x = t.g(&vec![0; k]).expect("word within the levels");
    let y = t.g(&alternating(k)).expect("word within the levels");
    record_run(
        &mut b,
        format!("no all-differ run of Φ(0̃), Φ((01)) below m_{k} weighs more than 2"),
        &x,
        &y,
        2,
    );
    b.finish()
}

/// Certifies the cross-map inequalities of a verified two-map family and
/// that `(g⁰(0̃↾K), g¹((01)↾K))` has no all-differ run of weight above 3.
pub fn e2_weak_mycielski_check(f: &E2TreeFamily) -> Result<Certificate> {
    if f.trees().len() < 2 {
        return Err(Error::InvalidArgument("the family needs two maps".into()));
    }
    let verified = verify_e2_family(f);
    if !verified.passed() {
        let first = verified
            .checks
            .iter()
            .find(|c| !c.verdict.is_pass())
            .map_or(String::new(), |c| c.claim.clone());
        return Err(Error::Precondition(format!("the family does not verify: {first}")));
    }
    let (g0, g1) = (&f.trees()[0], &f.trees()[1]);
    let k_max = f.levels();
    let m = f.m();
    let mut b = CertBuilder::new("e2-weak-2mycielski")
        .input("family", serde_json::to_value(f).expect("family serializes"))
        .input("sources", vec!["(0)", "(01)"])
        .param("horizon", m[k_max]);
    b.check(
        "the family satisfies its tree and sibling-map conditions",
        format!("{} checks", verified.checks.len()),
        "all pass",
        true,
    );
    for k in 1..=k_max {
        let bound = pow2_neg(k);
        let (c0, c1) = (g0.level_classes(k), g1.level_classes(k));
        let mut same_max = Rational::from_integer(0.into());
        let mut cross_max = Rational::from_integer(0.into());
        for (a, wa) in &c0 {
            for (bb, wb) in &c1 {
                let d = window_delta(m[k - 1], wa, wb);
                if a == bb {
                    same_max = same_max.max(d);
                } else {
                    cross_max = cross_max.max((d - recip(k)).abs());
                }
            }
        }
        b.compare(
            format!("cross maps level {k}: max |δ(g0(s), g1(t)) - 1/{k}| over different last symbols < 2^-{k}"),
            &cross_max,
            Cmp::Lt,
            &bound,
        );
        b.compare(
            format!("cross maps level {k}: max δ(g0(s), g1(t)) over equal last symbols < 2^-{k}"),
            &same_max,
            Cmp::Lt,
            &bound,
        );
        b.compare(
            format!("gap level {k}: Σ 1/(j+1) over the window >= 2^-{k}"),
            &gap_sum(m, k),
            Cmp::Ge,
            &bound,
        );
    }
    let x = g0.g(&vec![0; k_max]).expect("word within the levels");
    let y = g1.g(&alternating(k_max)).expect("word within the levels");
    record_run(
        &mut b,
        format!("no all-differ run of Φ0(0̃), Φ1((01)) below m_{k_max} weighs more than 3, so the pair avoids every D_n"),
        &x,
        &y,
        3,
    );
    Ok(b.finish())
}

/// Renders a run for diagnostics.
pub fn describe_run(r: &Run) -> String {
    format!("[{}, {}) weight {}", r.start, r.end, format_rational(&r.weight))
}

/// The difference pattern of two prefixes as a digit string.
pub fn diff_string(x: &[u8], y: &[u8]) -> String {
    digits_to_string(&x.iter().zip(y).map(|(a, b)| u8::from(a != b)).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_bits, random_upword, seeded};
    use crate::rational::rat;
    use crate::trees::e2::{build_e2_family, build_e2_tree};
    use rand::Rng;

    fn up(s: &str) -> UPWord {
        UPWord::parse(s, None).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(in_d_e2(&up("(0)"), &up("(1)")));
        assert!(!in_d_e2(&up("000(0)"), &up("111(0)")));
        let r = heaviest_prefix_run(0, &[0, 0, 0, 0], &[1, 1, 1, 0]).unwrap();
        assert_eq!(r.weight, rat(11, 6));
        assert!(in_d_e2_threshold(&rat(3, 2), 0, &up("000(0)"), &up("111(0)")));
        assert!(!in_d_e2_n(1, &up("(0)"), &up("1(0)")));
    }

    fn brute(threshold: &Rational, from: usize, x: &UPWord, y: &UPWord, depth: usize) -> bool {
        let d = sym_diff_pattern(x, y);
        if d.period().iter().all(|&b| b == 1) {
            return true;
        }
        let (a, c) = (x.prefix(depth), y.prefix(depth));
        let diff: Vec<bool> = a.iter().zip(&c).map(|(p, q)| p != q).collect();
        runs_in(&diff, from).iter().any(|r| r.weight > *threshold)
    }

    #[test]
    fn exact_decision_matches_deep_scan() {
        let mut rng = seeded(31);
        for _ in 0..200 {
            let (x, y) = (random_upword(&mut rng, 2, 4, 4), random_upword(&mut rng, 2, 4, 4));
            let from = rng.random_range(0..3);
            let th = rat(rng.random_range(1..6), 4);
            assert_eq!(
                in_d_e2_threshold(&th, from, &x, &y),
                brute(&th, from, &x, &y, 3 * 16 + 16),
                "{x} {y} {from} {th}"
            );
        }
    }

    #[test]
    fn density_rule_lands_in_d() {
        let mut rng = seeded(32);
        for _ in 0..100 {
            let n = rng.random_range(0..6);
            let (s, t) = (random_bits(&mut rng, n), random_bits(&mut rng, n));
            let (s2, t2) = density_extension_e2(&Rational::from_integer(2.into()), &s, &t).unwrap();
            for tail in [up("(0)"), up("(1)"), up("(01)")] {
                assert!(in_d_e2(&tail.prepend(&s2), &tail.prepend(&t2)));
            }
            let (s3, t3) = density_extension_e2(&Rational::from_integer(3.into()), &s, &t).unwrap();
            assert!(in_d_e2_n(n, &up("(0)").prepend(&s3), &up("(0)").prepend(&t3)));
        }
    }

    #[test]
    fn built_tree_images_avoid_d() {
        let cert = e2_mycielski_check(&build_e2_tree(8).unwrap());
        assert!(cert.passed(), "{}", cert.to_json());
        assert!(e2_mycielski_check(&E2Tree::identity(6)).passed());
    }

    #[test]
    fn built_family_passes_cross_checks() {
        let cert = e2_weak_mycielski_check(&build_e2_family(8, 2).unwrap()).unwrap();
        assert!(cert.passed(), "{}", cert.to_json());
        let t = build_e2_tree(6).unwrap();
        let same = E2TreeFamily::new(vec![t.clone(), t]).unwrap();
        assert!(e2_weak_mycielski_check(&same).unwrap().passed());
    }

    #[test]
    fn corrupted_family_is_rejected() {
        let f = build_e2_family(4, 2).unwrap();
        let mut json = serde_json::to_value(&f).unwrap();
        let block = json["trees"][1]["blocks"][3][1].as_str().unwrap().to_string();
        let flipped: String = block.chars().map(|c| if c == '0' { '1' } else { '0' }).collect();
        json["trees"][1]["blocks"][3][1] = flipped.into();
        let bad: E2TreeFamily = serde_json::from_value(json).unwrap();
        assert!(matches!(e2_weak_mycielski_check(&bad), Err(Error::Precondition(_))));
    }
}
