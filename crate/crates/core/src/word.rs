//! Finite words, ultimately periodic infinite words in canonical form,
//! sequences of such words, and the Cantor pairing grid coding.

use std::collections::BTreeSet;
use std::fmt;

use num::integer::lcm;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

fn check_alphabet(alphabet: u8) -> Result<()> {
    if alphabet == 2 || alphabet == 3 {
        Ok(())
    } else {
        invalid(format!("alphabet size must be 2 or 3, got {alphabet}"))
    }
}

fn check_symbols(alphabet: u8, symbols: &[u8]) -> Result<()> {
    match symbols.iter().position(|&s| s >= alphabet) {
        Some(i) => invalid(format!(
            "symbol {} at index {i} is outside alphabet {alphabet}",
            symbols[i]
        )),
        None => Ok(()),
    }
}

/// Renders symbols as a digit string.
pub fn digits_to_string(symbols: &[u8]) -> String {
    symbols.iter().map(|&s| char::from(b'0' + s)).collect()
}

/// Parses a run of digits starting at byte offset `start`.
pub fn parse_digits(text: &str, start: usize) -> Result<Vec<u8>> {
    text.bytes()
        .enumerate()
        .map(|(i, b)| match b {
            b'0'..=b'2' => Ok(b - b'0'),
            _ => Err(Error::Parse {
                position: start + i,
                message: format!("unexpected character {:?}", char::from(b)),
            }),
        })
        .collect()
}

fn infer_alphabet(symbols: &[u8], forced: Option<u8>) -> Result<u8> {
    let needed = if symbols.contains(&2) { 3 } else { 2 };
    match forced {
        None => Ok(needed),
        Some(a) => {
            check_alphabet(a)?;
            if a < needed {
                invalid("literal uses symbol 2 but alphabet 2 was requested")
            } else {
                Ok(a)
            }
        }
    }
}

/// A finite word over the alphabet `{0, .., alphabet-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWord {
    alphabet: u8,
    symbols: Vec<u8>,
}

impl FiniteWord {
    pub fn new(alphabet: u8, symbols: Vec<u8>) -> Result<Self> {
        check_alphabet(alphabet)?;
        check_symbols(alphabet, &symbols)?;
        Ok(FiniteWord { alphabet, symbols })
    }

    /// A binary word.
    pub fn binary(symbols: Vec<u8>) -> Result<Self> {
        Self::new(2, symbols)
    }

    pub fn empty(alphabet: u8) -> Self {
        FiniteWord {
            alphabet,
            symbols: Vec::new(),
        }
    }

    /// Parses a digit string; the alphabet is 3 when a `2` occurs or when forced.
    pub fn parse(text: &str, alphabet: Option<u8>) -> Result<Self> {
        let symbols = parse_digits(text, 0)?;
        let alphabet = infer_alphabet(&symbols, alphabet)?;
        Ok(FiniteWord { alphabet, symbols })
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<u8> {
        self.symbols.get(n).copied()
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&digits_to_string(&self.symbols))
    }
}

/// Length of the primitive root of a nonempty word.
fn primitive_root_len(w: &[u8]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| w[i] == w[i - d]))
        .unwrap_or(n)
}

/// An ultimately periodic infinite word `preamble period period ...` kept in
/// canonical form: the period is primitive and the preamble is as short as
/// possible, so equal words have identical fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UPWord {
    alphabet: u8,
    pre: Vec<u8>,
    per: Vec<u8>,
}

impl UPWord {
    /// Builds and canonicalizes a word from raw parts.
    pub fn new(alphabet: u8, preamble: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        check_alphabet(alphabet)?;
        if period.is_empty() {
            return invalid("period must be nonempty");
        }
        check_symbols(alphabet, &preamble)?;
        check_symbols(alphabet, &period)?;
        Ok(Self::canonical(alphabet, preamble, period))
    }

    /// Canonicalizes parts already known to be valid.
    pub(crate) fn canonical(alphabet: u8, mut pre: Vec<u8>, mut per: Vec<u8>) -> Self {
        let root = primitive_root_len(&per);
        per.truncate(root);
        while let Some(&last) = pre.last() {
            if last != per[per.len() - 1] {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        UPWord { alphabet, pre, per }
    }

    /// The constant word `sss...`.
    pub fn constant(alphabet: u8, symbol: u8) -> Self {
        assert!(symbol < alphabet, "symbol outside alphabet");
        UPWord {
            alphabet,
            pre: Vec::new(),
            per: vec![symbol],
        }
    }

    /// `0̃` over the binary alphabet.
    pub fn zeros() -> Self {
        Self::constant(2, 0)
    }

    /// `1̃` over the binary alphabet.
    pub fn ones() -> Self {
        Self::constant(2, 1)
    }

    /// Parses `pre(period)`, e.g. `01(10)` or `(0)`.
    pub fn parse(text: &str, alphabet: Option<u8>) -> Result<Self> {
        let open = text.find('(').ok_or_else(|| Error::Parse {
            position: text.len(),
            message: "expected '(' starting the period".into(),
        })?;
        let close = text.rfind(')').ok_or_else(|| Error::Parse {
            position: text.len(),
            message: "expected ')' closing the period".into(),
        })?;
        if close != text.len() - 1 {
            return Err(Error::Parse {
                position: close + 1,
                message: "trailing characters after ')'".into(),
            });
        }
        if close < open {
            return Err(Error::Parse {
                position: close,
                message: "')' before '('".into(),
            });
        }
        let pre = parse_digits(&text[..open], 0)?;
        let per = parse_digits(&text[open + 1..close], open + 1)?;
        if per.is_empty() {
            return Err(Error::Parse {
                position: open + 1,
                message: "period must be nonempty".into(),
            });
        }
        let mut all = pre.clone();
        all.extend_from_slice(&per);
        let alphabet = infer_alphabet(&all, alphabet)?;
        Ok(Self::canonical(alphabet, pre, per))
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn preamble(&self) -> &[u8] {
        &self.pre
    }

    pub fn period(&self) -> &[u8] {
        &self.per
    }

    /// The symbol at position `n`.
    pub fn at(&self, n: usize) -> u8 {
        if n < self.pre.len() {
            self.pre[n]
        } else {
            self.per[(n - self.pre.len()) % self.per.len()]
        }
    }

    /// The first `n` symbols.
    pub fn prefix(&self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.at(i)).collect()
    }

    /// The same word viewed over a larger alphabet.
    pub fn with_alphabet(&self, alphabet: u8) -> Result<Self> {
        check_alphabet(alphabet)?;
        if alphabet < self.alphabet {
            check_symbols(alphabet, &self.pre)?;
            check_symbols(alphabet, &self.per)?;
        }
        Ok(UPWord {
            alphabet,
            ..self.clone()
        })
    }

    /// `x_{≥n}`: the word with its first `n` symbols removed.
    pub fn shift(&self, n: usize) -> Self {
        if n <= self.pre.len() {
            return UPWord {
                alphabet: self.alphabet,
                pre: self.pre[n..].to_vec(),
                per: self.per.clone(),
            };
        }
        let mut per = self.per.clone();
        let r = (n - self.pre.len()) % per.len();
        per.rotate_left(r);
        UPWord {
            alphabet: self.alphabet,
            pre: Vec::new(),
            per,
        }
    }

    /// `s ⌢ x`.
    pub fn prepend(&self, s: &[u8]) -> Self {
        let mut pre = s.to_vec();
        pre.extend_from_slice(&self.pre);
        Self::canonical(self.alphabet, pre, self.per.clone())
    }

    /// Length after which both words are periodic with a common period.
    pub fn joint_horizon(&self, other: &UPWord) -> usize {
        self.pre.len().max(other.pre.len()) + lcm(self.per.len(), other.per.len())
    }

    /// Position-wise combination of two words, canonicalized.
    pub fn zip_with(&self, other: &UPWord, alphabet: u8, f: impl Fn(u8, u8) -> u8) -> Self {
        let p = self.pre.len().max(other.pre.len());
        let q = lcm(self.per.len(), other.per.len());
        let pre = (0..p).map(|i| f(self.at(i), other.at(i))).collect();
        let per = (p..p + q).map(|i| f(self.at(i), other.at(i))).collect();
        Self::canonical(alphabet, pre, per)
    }

    /// Symbolwise relabelling into the given alphabet.
    pub fn map_symbols(&self, alphabet: u8, f: impl Fn(u8) -> u8) -> Self {
        let pre = self.pre.iter().map(|&s| f(s)).collect();
        let per = self.per.iter().map(|&s| f(s)).collect();
        Self::canonical(alphabet, pre, per)
    }

    /// The least position where the words differ, if any.
    pub fn first_difference(&self, other: &UPWord) -> Option<usize> {
        if self == other {
            return None;
        }
        (0..self.joint_horizon(other)).find(|&i| self.at(i) != other.at(i))
    }

    /// True when `s` is an initial segment of this word.
    pub fn extends(&self, s: &[u8]) -> bool {
        s.iter().enumerate().all(|(i, &b)| self.at(i) == b)
    }
}

impl fmt::Display for UPWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({})",
            digits_to_string(&self.pre),
            digits_to_string(&self.per)
        )
    }
}

impl Serialize for UPWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for UPWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        UPWord::parse(&text, None).map_err(serde::de::Error::custom)
    }
}

/// `σ̃`: the periodic word `σσσ...`.
pub fn tilde(sigma: &FiniteWord) -> Result<UPWord> {
    if sigma.is_empty() {
        return invalid("tilde of the empty word");
    }
    Ok(UPWord::canonical(
        sigma.alphabet,
        Vec::new(),
        sigma.symbols.clone(),
    ))
}

/// `switch_s(x)`: overwrite the first `|s|` symbols of `x` by `s`.
pub fn switch(s: &[u8], x: &UPWord) -> UPWord {
    x.shift(s.len()).prepend(s)
}

/// `switch_s(σ)` on finite words.
pub fn switch_fin(s: &[u8], sigma: &[u8]) -> Vec<u8> {
    let mut out = s.to_vec();
    if sigma.len() > s.len() {
        out.extend_from_slice(&sigma[s.len()..]);
    }
    out
}

/// `x ⊕ y`: symbols of `x` at even positions and of `y` at odd positions.
pub fn interleave(x: &UPWord, y: &UPWord) -> UPWord {
    let alphabet = x.alphabet.max(y.alphabet);
    let p = 2 * x.pre.len().max(y.pre.len());
    let q = 2 * lcm(x.per.len(), y.per.len());
    let sym = |i: usize| if i.is_multiple_of(2) { x.at(i / 2) } else { y.at(i / 2) };
    let pre = (0..p).map(sym).collect();
    let per = (p..p + q).map(sym).collect();
    UPWord::canonical(alphabet, pre, per)
}

/// The binary word marking the positions where `x` and `y` differ.
pub fn sym_diff_pattern(x: &UPWord, y: &UPWord) -> UPWord {
    x.zip_with(y, 2, |a, b| u8::from(a != b))
}

/// Cantor pairing `⟨i, j⟩ = (i+j)(i+j+1)/2 + j`.
pub fn pairing(i: usize, j: usize) -> usize {
    let s = i + j;
    s * (s + 1) / 2 + j
}

/// Inverse of [`pairing`].
pub fn unpair(n: usize) -> (usize, usize) {
    let mut s = ((((8 * n + 1) as f64).sqrt() - 1.0) / 2.0) as usize;
    while s * (s + 1) / 2 > n {
        s -= 1;
    }
    while (s + 1) * (s + 2) / 2 <= n {
        s += 1;
    }
    let j = n - s * (s + 1) / 2;
    (s - j, j)
}

/// `dom(n) = {(i, j) : ⟨i, j⟩ < n}`.
pub fn dom(n: usize) -> BTreeSet<(usize, usize)> {
    (0..n).map(unpair).collect()
}

/// `L(A) = sup π_1[dom(A)]` for a finite set of codes (0 when empty).
pub fn l_of(codes: &BTreeSet<usize>) -> usize {
    codes.iter().map(|&c| unpair(c).0).max().unwrap_or(0)
}

/// A finite partial assignment on `ω × ω` whose known cells in each row form
/// an initial segment of that row.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Grid {
    pub rows: Vec<Vec<u8>>,
}

impl Grid {
    pub fn new(rows: Vec<Vec<u8>>) -> Self {
        Grid { rows }
    }

    /// The all-zero `rows × cols` rectangle.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Grid {
            rows: vec![vec![0; cols]; rows],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u8> {
        self.rows.get(i).and_then(|r| r.get(j)).copied()
    }

    pub fn row_len(&self, i: usize) -> usize {
        self.rows.get(i).map_or(0, Vec::len)
    }

    /// True when every known cell of `self` is known in `other` with the same value.
    pub fn is_extended_by(&self, other: &Grid) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, &b)| other.get(i, j) == Some(b)))
    }

    /// Pads to a full `rows × cols` rectangle with zeros, keeping known cells.
    pub fn padded(&self, rows: usize, cols: usize) -> Grid {
        let mut out = Grid::zeros(rows.max(self.rows.len()), 0);
        for (i, row) in out.rows.iter_mut().enumerate() {
            let width = cols.max(self.row_len(i));
            *row = (0..width).map(|j| self.get(i, j).unwrap_or(0)).collect();
        }
        out
    }
}

/// `grid(s)(i, j) = s(⟨i, j⟩)` on `dom(|s|)`.
pub fn grid(s: &[u8]) -> Grid {
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for (k, &b) in s.iter().enumerate() {
        let (i, j) = unpair(k);
        if rows.len() <= i {
            rows.resize(i + 1, Vec::new());
        }
        debug_assert_eq!(rows[i].len(), j);
        rows[i].push(b);
    }
    Grid { rows }
}

/// An element of `ω(ω2)`: coordinate `i` is `head[i]` for `i < |head|` and
/// `tail` afterwards.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaSeq {
    pub head: Vec<UPWord>,
    pub tail: UPWord,
}

impl OmegaSeq {
    pub fn new(head: Vec<UPWord>, tail: UPWord) -> Result<Self> {
        if tail.alphabet() != 2 || head.iter().any(|w| w.alphabet() != 2) {
            return invalid("sequence coordinates must be binary words");
        }
        Ok(OmegaSeq { head, tail })
    }

    /// `0̄`: every coordinate is `0̃`.
    pub fn zeros() -> Self {
        OmegaSeq {
            head: Vec::new(),
            tail: UPWord::zeros(),
        }
    }

    pub fn coordinate(&self, i: usize) -> &UPWord {
        self.head.get(i).unwrap_or(&self.tail)
    }

    /// Builds the sequence whose known cells come from `g` and all other cells are 0.
    pub fn from_grid(g: &Grid) -> Self {
        let head = g
            .rows
            .iter()
            .map(|r| UPWord::canonical(2, r.clone(), vec![0]))
            .collect();
        OmegaSeq {
            head,
            tail: UPWord::zeros(),
        }
    }

    /// Parses `[w0,w1,...]tail`, e.g. `[01(1),(0)](0)`.
    pub fn parse(text: &str) -> Result<Self> {
        if !text.starts_with('[') {
            return Err(Error::Parse {
                position: 0,
                message: "expected '[' starting the head".into(),
            });
        }
        let close = text.find(']').ok_or_else(|| Error::Parse {
            position: text.len(),
            message: "expected ']' closing the head".into(),
        })?;
        let inner = &text[1..close];
        let mut head = Vec::new();
        if !inner.is_empty() {
            let mut offset = 1;
            for part in inner.split(',') {
                head.push(UPWord::parse(part, Some(2)).map_err(|e| shift_parse(e, offset))?);
                offset += part.len() + 1;
            }
        }
        let tail = UPWord::parse(&text[close + 1..], Some(2))
            .map_err(|e| shift_parse(e, close + 1))?;
        Ok(OmegaSeq { head, tail })
    }
}

fn shift_parse(e: Error, offset: usize) -> Error {
    match e {
        Error::Parse { position, message } => Error::Parse {
            position: position + offset,
            message,
        },
        other => other,
    }
}

impl fmt::Display for OmegaSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<String> = self.head.iter().map(ToString::to_string).collect();
        write!(f, "[{}]{}", head.join(","), self.tail)
    }
}
