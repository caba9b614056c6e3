//! The threshold-scanning map `P` on pairwise E2-inequivalent triples and
//! the certified construction of its preimages through an E2-tree.

use std::fmt;
use std::str::FromStr;

use num::{One, Signed, Zero};

use crate::cert::{CertBuilder, Certificate, Cmp};
use crate::eqrel::{decide_e2, delta_window_fin};
use crate::error::{invalid, Error, Result};
use crate::rational::{approx, format_rational, parse_rational, pow2_neg, pow3, rat, ExactSum, Rational};
use crate::trees::e2::E2Tree;
use crate::word::{digits_to_string, FiniteWord, UPWord};

/// Default number of positions a scan may read before giving up.
pub const DEFAULT_BUDGET: usize = 100_000;

/// The threshold sequence `θ_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theta {
    /// `θ_m = 3^{m+2}`.
    Default,
    /// Explicit strictly increasing positive thresholds; levels beyond the
    /// list are an error.
    List(Vec<Rational>),
}

impl Theta {
    pub fn list(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return invalid("a threshold list needs at least one value");
        }
        if !values[0].is_positive() || values.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("thresholds must be positive and strictly increasing");
        }
        Ok(Theta::List(values))
    }

    pub fn at(&self, m: usize) -> Result<Rational> {
        match self {
            Theta::Default => Ok(pow3(m + 2)),
            Theta::List(v) => v.get(m).cloned().ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "threshold list has {} entries; level {m} needs more",
                    v.len()
                ))
            }),
        }
    }

    /// Number of available levels, if bounded.
    pub fn levels(&self) -> Option<usize> {
        match self {
            Theta::Default => None,
            Theta::List(v) => Some(v.len()),
        }
    }
}

impl FromStr for Theta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if matches!(s.trim(), "default" | "paper") {
            return Ok(Theta::Default);
        }
        let mut values = Vec::new();
        let mut offset = 0;
        for part in s.split(',') {
            let v = parse_rational(part).map_err(|e| match e {
                Error::Parse { position, message } => Error::Parse {
                    position: position + offset,
                    message,
                },
                other => other,
            })?;
            values.push(v);
            offset += part.len() + 1;
        }
        Theta::list(values)
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::Default => f.write_str("default"),
            Theta::List(v) => {
                let parts: Vec<String> = v.iter().map(format_rational).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

/// A readable binary sequence: an exact word or a finite prefix.
#[derive(Clone, Copy, Debug)]
pub enum Bits<'a> {
    Word(&'a UPWord),
    Prefix(&'a [u8]),
}

impl Bits<'_> {
    pub fn get(&self, i: usize) -> Result<u8> {
        match self {
            Bits::Word(w) => Ok(w.at(i)),
            Bits::Prefix(p) => p.get(i).copied().ok_or(Error::PrefixExhausted(i)),
        }
    }
}

/// A monotone exact sum with a floating shadow used to skip exact
/// comparisons while far below the threshold.
#[derive(Clone, Debug, Default)]
struct Scan {
    exact: ExactSum,
    float: f64,
}

impl Scan {
    fn add(&mut self, q: u64) {
        self.exact.add_recip(q);
        self.float += 1.0 / q as f64;
    }

    fn exceeds(&self, bound: &Rational, bound_f: f64) -> bool {
        self.float > bound_f - 1e-6 * (1.0 + bound_f) && self.exact.exceeds(bound)
    }
}

/// Partial or complete output of the scanning recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2Run {
    /// `P(x, y, z)(n)` for the levels reached.
    pub digits: Vec<u8>,
    /// `L_0, L_1, …`; one more entry than `digits`.
    pub bounds: Vec<usize>,
    /// Positions `< modulus` determine every digit produced.
    pub modulus: usize,
    /// Why the run stopped early, if it did.
    pub stopped: Option<Error>,
}

/// Runs `L_{n+1} = min S_{L_n, n}` over the three pairs for `len` levels.
///
/// Digit priority on ties: `xy` (0), then `xz` (1), then `yz` (2).
pub fn p_e2_run(x: Bits, y: Bits, z: Bits, theta: &Theta, len: usize, budget: usize) -> E2Run {
    let mut run = E2Run {
        digits: Vec::new(),
        bounds: vec![0],
        modulus: 0,
        stopped: None,
    };
    let mut read = 0usize;
    for n in 0..len {
        let bound = match theta.at(n) {
            Ok(b) => b,
            Err(e) => {
                run.stopped = Some(e);
                return run;
            }
        };
        let bound_f = approx(&bound);
        let mut scans: [Scan; 3] = Default::default();
        let mut i = *run.bounds.last().expect("L_0 is present");
        let digit = loop {
            if read >= budget {
                run.stopped = Some(Error::BudgetExhausted(format!(
                    "level {n}: read {budget} positions without a pair exceeding {}",
                    format_rational(&bound)
                )));
                return run;
            }
            let bits = (x.get(i), y.get(i), z.get(i));
            let (a, b, c) = match bits {
                (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                    run.stopped = Some(e);
                    return run;
                }
            };
            read += 1;
            let q = (i + 1) as u64;
            for (k, differs) in [a != b, a != c, b != c].into_iter().enumerate() {
                if differs {
                    scans[k].add(q);
                }
            }
            i += 1;
            run.modulus = run.modulus.max(i);
            if let Some(k) = (0..3).find(|&k| scans[k].exceeds(&bound, bound_f)) {
                break k as u8;
            }
        };
        run.digits.push(digit);
        run.bounds.push(i);
    }
    run
}

/// `P(x, y, z)↾len` on exact words; E2-equivalent pairs are a domain error.
pub fn p_e2(x: &UPWord, y: &UPWord, z: &UPWord, theta: &Theta, len: usize, budget: usize) -> Result<Vec<u8>> {
    if [x, y, z].iter().any(|w| w.alphabet() != 2) {
        return invalid("P takes binary words");
    }
    for (a, b, name) in [(x, y, "x, y"), (x, z, "x, z"), (y, z, "y, z")] {
        if decide_e2(a, b) {
            return Err(Error::Domain(format!("{name} are E2-equivalent")));
        }
    }
    let run = p_e2_run(Bits::Word(x), Bits::Word(y), Bits::Word(z), theta, len, budget);
    match run.stopped {
        Some(e) => Err(e),
        None => Ok(run.digits),
    }
}

/// `N_0 = 0` and `N_{n+1} = min{k : Σ_{N_n ≤ i < k} (1/(i+1) − 2^{−(i+2)}) > θ_n}`,
/// for as many levels as the budget allows (at most `levels`).
pub fn n_sequence(theta: &Theta, levels: usize, budget: usize) -> (Vec<usize>, Option<Error>) {
    let mut ns = vec![0usize];
    let mut read = 0usize;
    for n in 0..levels {
        let bound = match theta.at(n) {
            Ok(b) => b,
            Err(e) => return (ns, Some(e)),
        };
        let bound_f = approx(&bound);
        let start = ns[n];
        let mut h = ExactSum::new();
        let mut hf = 0.0f64;
        let mut k = start;
        loop {
            if read >= budget {
                return (
                    ns,
                    Some(Error::BudgetExhausted(format!(
                        "N_{} needs more than {budget} summed terms",
                        n + 1
                    ))),
                );
            }
            read += 1;
            h.add_recip((k + 1) as u64);
            hf += 1.0 / (k + 1) as f64;
            k += 1;
            // Σ_{start ≤ i < k} 2^{-(i+2)} = 2^{-(start+1)} − 2^{-(k+1)} ≤ 1/2.
            if hf - 0.5 > bound_f - 1e-6 * (1.0 + bound_f) {
                let total = h.value() - pow2_neg(start + 1) + pow2_neg(k + 1);
                if total > bound {
                    break;
                }
            }
        }
        ns.push(k);
    }
    (ns, None)
}

fn harmonic(from: usize, to: usize) -> Rational {
    let mut acc = ExactSum::new();
    for i in from..to {
        acc.add_recip((i + 1) as u64);
    }
    acc.value()
}

/// `σ_n` (for `y`) and `τ_n` (for `z`) of length `k`.
fn sigma_tau(digit: u8, k: usize) -> (Vec<u8>, Vec<u8>) {
    let sigma = (0..k)
        .map(|j| if digit == 0 { 1 } else { (j % 2) as u8 })
        .collect();
    let tau = (0..k)
        .map(|j| if digit == 1 { 1 } else { 1 - (j % 2) as u8 })
        .collect();
    (sigma, tau)
}

/// The pair index (0 = xy, 1 = xz, 2 = yz) whose δ reaches the threshold.
fn far_pair(digit: u8) -> usize {
    digit as usize
}

const PAIR_NAMES: [&str; 3] = ["x,y", "x,z", "y,z"];

/// The preimage triple for `v` through `t` and its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2Witness {
    /// `(Φ(x), Φ(y), Φ(z))` on the certified prefix.
    pub images: [Vec<u8>; 3],
    /// `(x, y, z)` before the tree map.
    pub sources: [Vec<u8>; 3],
    /// `N_0, N_1, …` as far as computed.
    pub n: Vec<usize>,
}

/// Builds `x = 0̃`, `y = σ_0 σ_1 …`, `z = τ_0 τ_1 …`, maps them through `t`
/// and certifies the per-level window inequalities and the induction claims
/// on every level that fits inside the tree and the budget.
pub fn p_e2_witness(
    v: &FiniteWord,
    t: &E2Tree,
    theta: &Theta,
    budget: usize,
) -> Result<(E2Witness, Certificate)> {
    if v.alphabet() != 3 {
        return invalid("the target must be a ternary word");
    }
    let len = v.len();
    let mut b = CertBuilder::new("e2-surjectivity")
        .input("v", digits_to_string(v.symbols()))
        .input("tree", serde_json::to_value(t).expect("tree serializes"))
        .param("theta", theta.to_string())
        .param("budget", budget);
    let (ns, n_stop) = n_sequence(theta, len, budget);
    let known = ns.len() - 1;
    let k_max = t.levels();
    let usable = ns.iter().take_while(|&&n| n <= k_max).count() - 1;
    let src_len = ns[usable.min(known)];

    let mut sources = [vec![0u8; src_len], Vec::new(), Vec::new()];
    for n in 0..usable {
        let (s, tau) = sigma_tau(v.symbols()[n], ns[n + 1] - ns[n]);
        sources[1].extend(s);
        sources[2].extend(tau);
    }
    let images = [
        t.g(&sources[0])?,
        t.g(&sources[1])?,
        t.g(&sources[2])?,
    ];
    let m = t.m();
    let run = p_e2_run(
        Bits::Prefix(&images[0]),
        Bits::Prefix(&images[1]),
        Bits::Prefix(&images[2]),
        theta,
        usable,
        budget,
    );
    let pair = |k: usize| -> (&[u8], &[u8]) {
        match k {
            0 => (&images[0], &images[1]),
            1 => (&images[0], &images[2]),
            _ => (&images[1], &images[2]),
        }
    };
    let zeta = |from: usize, to: usize, k: usize| -> Rational {
        let (a, c) = pair(k);
        delta_window_fin(from, to, a, c).expect("window inside the images")
    };
    let half = rat(1, 2);
    let three_halves = rat(3, 2);

    for n in 0..len {
        let digit = v.symbols()[n];
        if n >= known {
            let why = n_stop
                .as_ref()
                .map(ToString::to_string)
                .unwrap_or_else(|| "not computed".to_string());
            b.exhausted(format!("level {n} harmonic bound: N_{} computable", n + 1), why);
            continue;
        }
        let theta_n = theta.at(n)?;
        b.check(
            format!("level {n}: N_{} = min k with Σ (1/(i+1) − 2^-(i+2)) over [N_{n}, k) > θ_{n}", n + 1),
            ns[n + 1].to_string(),
            format!("θ_{n} = {}", format_rational(&theta_n)),
            true,
        );
        b.compare(
            format!("level {n} harmonic bound: Σ_{{N_{n} ≤ i < N_{}}} 1/(i+1) < θ_{n} + 1", n + 1),
            &harmonic(ns[n], ns[n + 1]),
            Cmp::Lt,
            &(theta_n.clone() + Rational::one()),
        );
        if n >= usable {
            let why = format!(
                "N_{} = {} exceeds the {k_max} tree levels",
                n + 1,
                ns[n + 1]
            );
            for claim in ["far pair lower", "far pair upper", "near pairs", "L bracket", "digit", "residual"] {
                b.exhausted(format!("level {n} {claim}"), why.clone());
            }
            continue;
        }
        let (lo, hi) = (m[ns[n]], m[ns[n + 1]]);
        let far = far_pair(digit);
        let far_delta = zeta(lo, hi, far);
        b.compare(
            format!("level {n} far pair lower: δ over [m_N{n}, m_N{}) of pair {} > θ_{n}", n + 1, PAIR_NAMES[far]),
            &far_delta,
            Cmp::Gt,
            &theta_n,
        );
        b.compare(
            format!("level {n} far pair upper: δ over [m_N{n}, m_N{}) of pair {} < θ_{n} + 3/2", n + 1, PAIR_NAMES[far]),
            &far_delta,
            Cmp::Lt,
            &(theta_n.clone() + three_halves.clone()),
        );
        let near_bound = theta_n.clone() * half.clone() + three_halves.clone();
        for k in (0..3).filter(|&k| k != far) {
            b.compare(
                format!("level {n} near pairs: δ over [m_N{n}, m_N{}) of pair {} < θ_{n}/2 + 3/2", n + 1, PAIR_NAMES[k]),
                &zeta(lo, hi, k),
                Cmp::Lt,
                &near_bound,
            );
        }
        if n >= run.digits.len() {
            let why = run
                .stopped
                .as_ref()
                .map(ToString::to_string)
                .unwrap_or_else(|| "run ended".to_string());
            for claim in ["L bracket", "digit", "residual"] {
                b.exhausted(format!("level {n} {claim}"), why.clone());
            }
            continue;
        }
        let l_next = run.bounds[n + 1];
        b.check(
            format!("level {n} L bracket: m_N{n} < L_{} <= m_N{}", n + 1, n + 1),
            l_next.to_string(),
            format!("({lo}, {hi}]"),
            lo < l_next && l_next <= hi,
        );
        b.check(
            format!("level {n} digit: P digit equals v({n})"),
            run.digits[n].to_string(),
            digit.to_string(),
            run.digits[n] == digit,
        );
        let worst = (0..3)
            .map(|k| zeta(l_next.min(hi), hi, k))
            .max()
            .unwrap_or_else(Rational::zero);
        b.compare(
            format!("level {n} residual: max pair δ over [L_{}, m_N{}) < θ_{n}/2 + 3/2", n + 1, n + 1),
            &worst,
            Cmp::Lt,
            &near_bound,
        );
    }
    let witness = E2Witness {
        images,
        sources,
        n: ns,
    };
    Ok((witness, b.finish()))
}
