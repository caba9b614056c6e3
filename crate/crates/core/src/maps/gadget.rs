//! Two-valued compositions that turn a map hitting both a set and its
//! complement on every neighborhood into a nowhere-continuous map, and the
//! antisymmetric coloring `f(x, y) = x(d(x, y))`.

use crate::cert::{CertBuilder, Certificate};
use crate::error::{invalid, Error, Result};
use crate::maps::e0::{alternating_ternary, p_e0, p_e0_preimage, p_prime_e0};
use crate::maps::e2::{p_e2_run, Bits, Theta};
use crate::trees::e0::E0Tree;
use crate::trees::e2::E2Tree;
use crate::word::{digits_to_string, UPWord};

type MapFn<'a, X, Y> = Box<dyn Fn(&X) -> Result<Y> + Send + Sync + 'a>;
type MemberFn<'a, Y> = Box<dyn Fn(&Y) -> bool + Send + Sync + 'a>;

/// `g(x) = y1` if `f(x) ∉ A` and `g(x) = y2` if `f(x) ∈ A`.
pub struct Gadget<'a, X: ?Sized, Y> {
    f: MapFn<'a, X, Y>,
    member: MemberFn<'a, Y>,
    y1: UPWord,
    y2: UPWord,
}

impl<'a, X: ?Sized, Y> Gadget<'a, X, Y> {
    pub fn eval(&self, x: &X) -> Result<UPWord> {
        let v = (self.f)(x)?;
        Ok(if (self.member)(&v) {
            self.y2.clone()
        } else {
            self.y1.clone()
        })
    }

    pub fn values(&self) -> (&UPWord, &UPWord) {
        (&self.y1, &self.y2)
    }
}

/// Builds the gadget; equal branch values are rejected.
pub fn discontinuity_gadget<'a, X: ?Sized, Y>(
    f: impl Fn(&X) -> Result<Y> + Send + Sync + 'a,
    member: impl Fn(&Y) -> bool + Send + Sync + 'a,
    y1: UPWord,
    y2: UPWord,
) -> Result<Gadget<'a, X, Y>> {
    if y1 == y2 {
        return invalid("the two gadget values must differ");
    }
    Ok(Gadget {
        f: Box::new(f),
        member: Box::new(member),
        y1,
        y2,
    })
}

/// `w` has only finitely many 2s.
pub fn eventually_two_free(w: &UPWord) -> bool {
    !w.period().contains(&2)
}

/// A binary triple of words.
pub type Triple = (UPWord, UPWord, UPWord);

/// The gadget over `P` with `A` the eventually 2-free words, `y1 = (012)`
/// and `y2 = (01)`.
pub fn p_e0_gadget<'a>() -> Gadget<'a, Triple, UPWord> {
    discontinuity_gadget(
        |t: &Triple| p_e0(&t.0, &t.1, &t.2),
        eventually_two_free,
        UPWord::canonical(3, Vec::new(), vec![0, 1, 2]),
        alternating_ternary(),
    )
    .expect("distinct gadget values")
}

/// Evaluates the `P` gadget on a preimage of `(012)` and on
/// `(Φ(u⌢0̃), Φ(v⌢(01)), Φ(w⌢(10)))`, which lies in the neighborhood of
/// `(φ(u), φ(v), φ(w))` yet has an eventually 2-free image.
pub fn e0_gadget_check(p: &E0Tree, u: &[u8], v: &[u8], w: &[u8]) -> Result<Certificate> {
    if u.len() != v.len() || v.len() != w.len() {
        return invalid("u, v, w must have equal length");
    }
    let g = p_e0_gadget();
    let (y1, y2) = g.values();
    let mut b = CertBuilder::new("e0-gadget")
        .input("tree", serde_json::to_value(p).expect("tree serializes"))
        .input("u", digits_to_string(u))
        .input("v", digits_to_string(v))
        .input("w", digits_to_string(w));
    b.check("branch values differ", y1.to_string(), y2.to_string(), y1 != y2);

    let target = UPWord::canonical(3, Vec::new(), vec![0, 1, 2]);
    let pass = p_e0_preimage(&target, p)?;
    let pass_img = p_e0(&pass.0, &pass.1, &pass.2)?;
    let pass_g = g.eval(&pass)?;
    b.check("pass-through: P has 2s in its period", pass_img.to_string(), "period ∋ 2", !eventually_two_free(&pass_img));
    b.check("pass-through: g = y1", pass_g.to_string(), y1.to_string(), &pass_g == y1);
    let pp = p_prime_e0(&pass.0, &pass.1, &pass.2)?;
    b.check("pass-through: P' = P", pp.to_string(), pass_img.to_string(), pp == pass_img);

    let x = p.phi(&UPWord::canonical(2, u.to_vec(), vec![0]))?;
    let y = p.phi(&UPWord::canonical(2, v.to_vec(), vec![0, 1]))?;
    let z = p.phi(&UPWord::canonical(2, w.to_vec(), vec![1, 0]))?;
    for (name, img, s) in [("x", &x, u), ("y", &y, v), ("z", &z, w)] {
        let need = p.phi_fin(s);
        b.check(
            format!("collapsed: {name} lies in N_φ({name})"),
            img.to_string(),
            digits_to_string(&need),
            img.extends(&need),
        );
    }
    let collapsed = (x, y, z);
    let col_img = p_e0(&collapsed.0, &collapsed.1, &collapsed.2)?;
    let col_g = g.eval(&collapsed)?;
    b.check("collapsed: P is eventually 2-free", col_img.to_string(), "period ∌ 2", eventually_two_free(&col_img));
    b.check("collapsed: g = y2", col_g.to_string(), y2.to_string(), &col_g == y2);
    let pp = p_prime_e0(&collapsed.0, &collapsed.1, &collapsed.2)?;
    b.check("collapsed: P' = (01)", pp.to_string(), alternating_ternary().to_string(), pp == alternating_ternary());
    Ok(b.finish())
}

/// Runs `P` on `(Φ(s⌢0̃), Φ(t⌢1̃), Φ(u⌢(01)))` through the first `K` levels
/// of `tree` and certifies that every digit after the first level `k` with
/// `L_k ≥ m_{max(|s|,|t|,|u|)}` is 0.
pub fn e2_gadget_check(
    tree: &E2Tree,
    s: &[u8],
    t: &[u8],
    u: &[u8],
    theta: &Theta,
    levels: usize,
    budget: usize,
) -> Result<Certificate> {
    let k_max = tree.levels();
    let longest = s.len().max(t.len()).max(u.len());
    if longest > k_max {
        return invalid("the stems exceed the tree levels");
    }
    let src = |stem: &[u8], tail: &[u8]| -> Vec<u8> {
        UPWord::canonical(2, stem.to_vec(), tail.to_vec()).prefix(k_max)
    };
    let images = [
        tree.g(&src(s, &[0]))?,
        tree.g(&src(t, &[1]))?,
        tree.g(&src(u, &[0, 1]))?,
    ];
    let run = p_e2_run(
        Bits::Prefix(&images[0]),
        Bits::Prefix(&images[1]),
        Bits::Prefix(&images[2]),
        theta,
        levels,
        budget,
    );
    let mut b = CertBuilder::new("e2-gadget")
        .input("tree", serde_json::to_value(tree).expect("tree serializes"))
        .input("s", digits_to_string(s))
        .input("t", digits_to_string(t))
        .input("u", digits_to_string(u))
        .param("theta", theta.to_string())
        .param("levels", levels)
        .param("budget", budget);
    b.set_param("digits", digits_to_string(&run.digits));
    let start = tree.m()[longest];
    let k = run.bounds.iter().position(|&l| l >= start);
    match k {
        Some(k) if k < run.digits.len() => {
            let tail = &run.digits[k + 1..];
            b.check(
                format!("digits after level {k} (L_{k} ≥ m_{longest} = {start}) are 0"),
                digits_to_string(tail),
                "0…0",
                tail.iter().all(|&d| d == 0),
            );
            b.check(
                "at least one digit lies past the cut",
                tail.len().to_string(),
                "≥ 1",
                !tail.is_empty(),
            );
        }
        _ => {
            let why = match &run.stopped {
                Some(e) => e.to_string(),
                None => format!("no computed level reaches position {start}"),
            };
            b.exhausted("digits past the cut are 0", why);
        }
    }
    if let Some(e) = &run.stopped {
        if !matches!(e, Error::PrefixExhausted(_) | Error::BudgetExhausted(_) | Error::InvalidArgument(_)) {
            return Err(e.clone());
        }
    }
    Ok(b.finish())
}

/// `d(x, y) = min{n : x(n) ≠ y(n)}`.
pub fn galvin_d(x: &UPWord, y: &UPWord) -> Result<usize> {
    x.first_difference(y)
        .ok_or_else(|| Error::Domain("d(x, y) needs x ≠ y".to_string()))
}

/// `f(x, y) = x(d(x, y))`.
pub fn galvin_coloring(x: &UPWord, y: &UPWord) -> Result<u8> {
    Ok(x.at(galvin_d(x, y)?))
}
