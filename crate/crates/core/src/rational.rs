//! Exact rationals and an incremental accumulator for long reciprocal sums.

use num::bigint::{BigInt, BigUint, Sign};
use num::{BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision exact rational in lowest terms.
pub type Rational = BigRational;

/// `n / d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `1 / q`.
pub fn recip(q: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(q))
}

/// `2^{-e}`.
pub fn pow2_neg(e: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << e)
}

/// `3^e` as a rational.
pub fn pow3(e: usize) -> Rational {
    Rational::from_integer(num::pow(BigInt::from(3), e))
}

/// Renders `a/b`, or `a` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a`, `-a` or `a/b`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = |position: usize, message: &str| Error::Parse {
        position,
        message: message.to_string(),
    };
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let numer: BigInt = n
        .trim()
        .parse()
        .map_err(|_| bad(0, "expected an integer numerator"))?;
    let denom: BigInt = d
        .trim()
        .parse()
        .map_err(|_| bad(n.len() + 1, "expected an integer denominator"))?;
    if denom.is_zero() {
        return Err(bad(n.len() + 1, "zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

/// Floating approximation for diagnostics and search hints.
pub fn approx(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact running sum of reciprocals `Σ 1/q`.
///
/// The denominator is kept as a running lcm so each step costs a few passes
/// over the big integers and no big gcd is ever taken.
#[derive(Clone, Debug)]
pub struct ExactSum {
    num: BigUint,
    den: BigUint,
}

impl Default for ExactSum {
    fn default() -> Self {
        ExactSum {
            num: BigUint::zero(),
            den: BigUint::one(),
        }
    }
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `1/q` for `q ≥ 1`.
    pub fn add_recip(&mut self, q: u64) {
        assert!(q > 0, "reciprocal of zero");
        let r = (&self.den % q).to_u64().expect("remainder below q");
        let g = r.gcd(&q);
        let f = q / g;
        self.num = &self.num * f + &self.den / g;
        self.den *= f;
    }

    /// Numerator over the running denominator (not reduced).
    pub fn numer(&self) -> &BigUint {
        &self.num
    }

    /// The running denominator.
    pub fn denom(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The exact value in lowest terms.
    pub fn value(&self) -> Rational {
        Rational::new(
            BigInt::from_biguint(Sign::Plus, self.num.clone()),
            BigInt::from_biguint(Sign::Plus, self.den.clone()),
        )
    }

    /// Strict comparison `sum > bound`.
    pub fn exceeds(&self, bound: &Rational) -> bool {
        if !bound.is_positive() {
            return !self.num.is_zero() || bound.is_negative();
        }
        let bn = bound.numer().magnitude();
        let bd = bound.denom().magnitude();
        &self.num * bd > bn * &self.den
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sum_matches_rational_sum() {
        let mut acc = ExactSum::new();
        let mut direct = Rational::zero();
        for q in 1..200u64 {
            acc.add_recip(q);
            direct += recip(q as usize);
            assert_eq!(acc.value(), direct);
        }
    }

    #[test]
    fn harmonic_four() {
        let mut acc = ExactSum::new();
        for q in 1..=4 {
            acc.add_recip(q);
        }
        assert_eq!(acc.value(), rat(25, 12));
        assert!(acc.exceeds(&rat(2, 1)));
        assert!(!acc.exceeds(&rat(25, 12)));
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["25/12", "3", "-7/2", "0"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_rational("4/2").unwrap(), rat(2, 1));
    }
}
