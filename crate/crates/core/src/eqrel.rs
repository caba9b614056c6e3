//! Exact deciders for `E0`, `E1`, `E2`, `E3`, tail equivalence, its
//! permutation twist `F`, and the partial harmonic pseudo-metrics `δ_m^n`.
//!
//! Words over different alphabets are compared as symbol sequences.

use std::fmt;
use std::str::FromStr;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rational::{ExactSum, Rational};
use crate::word::{sym_diff_pattern, OmegaSeq, UPWord};

/// `δ_m^ω` value: finite exact rational or divergent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeltaValue {
    Finite(Rational),
    Infinite,
}

impl DeltaValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, DeltaValue::Finite(_))
    }
}

/// `x E0 y`: the words agree from some point on.
pub fn decide_e0(x: &UPWord, y: &UPWord) -> bool {
    sym_diff_pattern(x, y).period() == [0]
}

/// `δ_m^n(x, y) = Σ {1/(k+1) : m ≤ k < n, x(k) ≠ y(k)}`.
pub fn delta_window(m: usize, n: usize, x: &UPWord, y: &UPWord) -> Result<Rational> {
    if m > n {
        return invalid(format!("window start {m} exceeds end {n}"));
    }
    let mut acc = ExactSum::new();
    for k in m..n {
        if x.at(k) != y.at(k) {
            acc.add_recip(k as u64 + 1);
        }
    }
    Ok(acc.value())
}

/// `δ_m^n` on finite words; positions beyond either word are an error.
pub fn delta_window_fin(m: usize, n: usize, x: &[u8], y: &[u8]) -> Result<Rational> {
    if m > n {
        return invalid(format!("window start {m} exceeds end {n}"));
    }
    if n > x.len() || n > y.len() {
        return Err(Error::PrefixExhausted(n.min(x.len()).min(y.len())));
    }
    let mut acc = ExactSum::new();
    for k in m..n {
        if x[k] != y[k] {
            acc.add_recip(k as u64 + 1);
        }
    }
    Ok(acc.value())
}

/// `δ_m^ω(x, y)`, computed from the canonical difference pattern: a period
/// containing a 1 diverges like a harmonic series over an arithmetic
/// progression; otherwise only preamble positions contribute.
pub fn delta_total(m: usize, x: &UPWord, y: &UPWord) -> DeltaValue {
    let d = sym_diff_pattern(x, y);
    if d.period() != [0] {
        return DeltaValue::Infinite;
    }
    let mut sum = Rational::zero();
    for (k, &b) in d.preamble().iter().enumerate().skip(m) {
        if b == 1 {
            sum += crate::rational::recip(k + 1);
        }
    }
    DeltaValue::Finite(sum)
}

/// `x E2 y`: `δ(x, y) < ∞`.
pub fn decide_e2(x: &UPWord, y: &UPWord) -> bool {
    delta_total(0, x, y).is_finite()
}

/// A pair `(r, s)` with `x_{≥r} = y_{≥s}`, if one exists.
///
/// Search bound: if `x_{≥r} = y_{≥s}` then also `x_{≥r+a} = y_{≥s+a}` for
/// every `a`, so some solution has `r ≥ |pre_x|` and `s ≥ |pre_y|`. Past the
/// preamble, shifting by a full period gives the same word, so `r` can be
/// reduced into `[|pre_x|, |pre_x| + |per_x|)` and `s` into
/// `[|pre_y|, |pre_y| + |per_y|)` independently. Every shifted word has a
/// preamble no longer than the original and the same period, and two such
/// words are equal iff they agree on the first
/// `max(|pre_x|, |pre_y|) + lcm(|per_x|, |per_y|)` positions.
pub fn etail_witness(x: &UPWord, y: &UPWord) -> Option<(usize, usize)> {
    let rx = x.preamble().len() + x.period().len();
    let ry = y.preamble().len() + y.period().len();
    let horizon = x.joint_horizon(y);
    for r in 0..=rx {
        for s in 0..=ry {
            if (0..horizon).all(|a| x.at(r + a) == y.at(s + a)) {
                return Some((r, s));
            }
        }
    }
    None
}

/// `x E_tail y`: some shifts of the words are equal.
pub fn decide_etail(x: &UPWord, y: &UPWord) -> bool {
    etail_witness(x, y).is_some()
}

/// A permutation of `{0, 1, 2}` given by its images.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm([u8; 3]);

impl Perm {
    pub fn new(images: [u8; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &i in &images {
            if i > 2 || seen[i as usize] {
                return invalid(format!("{images:?} is not a permutation of {{0,1,2}}"));
            }
            seen[i as usize] = true;
        }
        Ok(Perm(images))
    }

    pub fn identity() -> Self {
        Perm([0, 1, 2])
    }

    /// The transposition swapping `a` and `b`.
    pub fn transposition(a: u8, b: u8) -> Self {
        let mut images = [0, 1, 2];
        images.swap(a as usize, b as usize);
        Perm(images)
    }

    /// All six permutations.
    pub fn all() -> Vec<Perm> {
        let mut out = Vec::new();
        for a in 0..3u8 {
            for b in 0..3u8 {
                for c in 0..3u8 {
                    if let Ok(p) = Perm::new([a, b, c]) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, s: u8) -> u8 {
        self.0[s as usize]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm([0, 1, 2].map(|i| self.apply(other.apply(i))))
    }

    pub fn images(&self) -> [u8; 3] {
        self.0
    }
}

/// `(g · x)(n) = g(x(n))`, with output over the ternary alphabet.
pub fn s3_act(g: &Perm, x: &UPWord) -> UPWord {
    x.map_symbols(3, |s| g.apply(s))
}

/// `x F y`: `g · x E_tail y` for some permutation `g`.
pub fn decide_f(x: &UPWord, y: &UPWord) -> bool {
    Perm::all().iter().any(|g| decide_etail(&s3_act(g, x), y))
}

/// `x E1 y`: all but finitely many coordinates are equal. Coordinates past
/// both heads are the tails, so this is tail equality.
pub fn decide_e1(x: &OmegaSeq, y: &OmegaSeq) -> bool {
    x.tail == y.tail
}

/// `x E3 y`: every coordinate pair is `E0`-related.
pub fn decide_e3(x: &OmegaSeq, y: &OmegaSeq) -> bool {
    let h = x.head.len().max(y.head.len());
    (0..h).all(|i| decide_e0(x.coordinate(i), y.coordinate(i))) && decide_e0(&x.tail, &y.tail)
}

/// Relation tags accepted by [`tuple_ok`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelTag {
    E0,
    E1,
    E2,
    E3,
    Etail,
    F,
    Equality,
}

impl FromStr for RelTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "e0" => RelTag::E0,
            "e1" => RelTag::E1,
            "e2" => RelTag::E2,
            "e3" => RelTag::E3,
            "etail" => RelTag::Etail,
            "f" => RelTag::F,
            "equality" | "eq" => RelTag::Equality,
            other => return invalid(format!("unknown relation tag {other:?}")),
        })
    }
}

impl fmt::Display for RelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RelTag::E0 => "e0",
            RelTag::E1 => "e1",
            RelTag::E2 => "e2",
            RelTag::E3 => "e3",
            RelTag::Etail => "etail",
            RelTag::F => "f",
            RelTag::Equality => "equality",
        };
        f.write_str(s)
    }
}

/// A point of `ω2`/`ω3` or of `ω(ω2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Word(UPWord),
    Seq(OmegaSeq),
}

/// Decides `x E y` for the given relation.
pub fn related(tag: RelTag, x: &Point, y: &Point) -> Result<bool> {
    match (x, y) {
        (Point::Word(a), Point::Word(b)) => match tag {
            RelTag::E0 => Ok(decide_e0(a, b)),
            RelTag::E2 => Ok(decide_e2(a, b)),
            RelTag::Etail => Ok(decide_etail(a, b)),
            RelTag::F => Ok(decide_f(a, b)),
            RelTag::Equality => Ok(a.prefix(a.joint_horizon(b)) == b.prefix(a.joint_horizon(b))),
            RelTag::E1 | RelTag::E3 => invalid(format!("{tag} relates sequences, not words")),
        },
        (Point::Seq(a), Point::Seq(b)) => match tag {
            RelTag::E1 => Ok(decide_e1(a, b)),
            RelTag::E3 => Ok(decide_e3(a, b)),
            RelTag::Equality => Ok(seq_equal(a, b)),
            _ => invalid(format!("{tag} relates words, not sequences")),
        },
        _ => invalid("cannot relate a word to a sequence"),
    }
}

fn seq_equal(a: &OmegaSeq, b: &OmegaSeq) -> bool {
    let h = a.head.len().max(b.head.len());
    (0..=h).all(|i| a.coordinate(i) == b.coordinate(i))
}

/// Membership in `[X]^n_E`: the points are pairwise `E`-inequivalent.
pub fn tuple_ok(xs: &[Point], tag: RelTag) -> Result<bool> {
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if related(tag, &xs[i], &xs[j])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// [`tuple_ok`] for words.
pub fn words_ok(xs: &[&UPWord], tag: RelTag) -> Result<bool> {
    let points: Vec<Point> = xs.iter().map(|w| Point::Word((*w).clone())).collect();
    tuple_ok(&points, tag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::word::switch;

    fn w(s: &str) -> UPWord {
        UPWord::parse(s, None).unwrap()
    }

    #[test]
    fn e0_examples() {
        let x = w("01(011)");
        assert!(decide_e0(&x, &x));
        assert!(!decide_e0(&UPWord::zeros(), &UPWord::ones()));
        assert!(decide_e0(&switch(&[1, 1, 1], &UPWord::zeros()), &UPWord::zeros()));
    }

    #[test]
    fn delta_examples() {
        let (z, o) = (UPWord::zeros(), UPWord::ones());
        assert_eq!(delta_window(0, 4, &z, &o).unwrap(), rat(25, 12));
        assert_eq!(delta_window(2, 2, &z, &o).unwrap(), rat(0, 1));
        assert_eq!(delta_window(0, 9, &o, &o).unwrap(), rat(0, 1));
        assert!(delta_window(3, 2, &z, &o).is_err());
        assert_eq!(delta_total(0, &z, &o), DeltaValue::Infinite);
        assert_eq!(delta_total(0, &o, &o), DeltaValue::Finite(rat(0, 1)));
        assert_eq!(
            delta_total(0, &switch(&[1, 1], &z), &z),
            DeltaValue::Finite(rat(3, 2))
        );
        assert_eq!(
            delta_total(1, &switch(&[1, 1], &z), &z),
            DeltaValue::Finite(rat(1, 2))
        );
        assert!(!decide_e2(&z, &o));
        assert!(decide_e2(&switch(&[1, 1], &z), &z));
        assert!(decide_e2(&o, &o));
    }

    #[test]
    fn etail_examples() {
        assert!(decide_etail(&w("(01)"), &w("(10)")));
        assert_eq!(etail_witness(&w("(01)"), &w("(10)")), Some((0, 1)));
        assert!(!decide_etail(&UPWord::zeros(), &UPWord::ones()));
        let x = w("0110(011)");
        assert!(decide_etail(&x, &x.shift(5)));
    }

    #[test]
    fn s3_examples() {
        let x = w("(012)");
        assert_eq!(s3_act(&Perm::identity(), &x), x);
        assert_eq!(s3_act(&Perm::transposition(0, 1), &x).to_string(), "(102)");
        assert_eq!(Perm::all().len(), 6);
        assert!(Perm::new([0, 0, 1]).is_err());
    }

    #[test]
    fn f_examples() {
        let x = w("(012)");
        assert!(decide_f(&x, &x));
        assert!(decide_f(&x, &s3_act(&Perm::transposition(0, 2), &x)));
        let z3 = UPWord::zeros().with_alphabet(3).unwrap();
        let o3 = UPWord::ones().with_alphabet(3).unwrap();
        assert!(decide_f(&z3, &o3));
        assert!(!decide_etail(&z3, &o3));
    }

    #[test]
    fn e1_e3_examples() {
        let s = |t: &str| OmegaSeq::parse(t).unwrap();
        let x = s("[1(0),(01)](0)");
        assert!(decide_e1(&x, &x));
        assert!(!decide_e1(&s("[1(0)](0)"), &s("[1(0)](1)")));
        assert!(decide_e1(&s("[1(0),(1)](0)"), &s("[0(0),(0)](0)")));
        assert!(decide_e3(&x, &x));
        assert!(!decide_e3(&s("[1(0)](0)"), &s("[1(0)](1)")));
        assert!(decide_e3(&s("[1(0),11(0)](0)"), &s("[(0),(0)](0)")));
        assert!(!decide_e3(&s("[1(0),(1)](0)"), &s("[(0),(0)](0)")));
    }

    #[test]
    fn tuple_ok_examples() {
        let pts = |ws: &[&str]| -> Vec<Point> { ws.iter().map(|s| Point::Word(w(s))).collect() };
        assert!(tuple_ok(&pts(&["(0)", "(1)", "(01)"]), RelTag::E0).unwrap());
        assert!(!tuple_ok(&pts(&["(01)", "(01)"]), RelTag::Etail).unwrap());
        assert!(tuple_ok(&pts(&["(01)"]), RelTag::E2).unwrap());
        assert!("nope".parse::<RelTag>().is_err());
        assert!(tuple_ok(&pts(&["(0)", "(1)"]), RelTag::E1).is_err());
    }
}
