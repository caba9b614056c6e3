//! The dense open set of sequence pairs differing at some first symbol, two
//! concrete map oracles, and the continuity-search construction of a pair
//! `(0̄, x)` whose images avoid it.

use crate::cert::{CertBuilder, Certificate};
use crate::error::{Error, Result};
use crate::maps::oracle::MapOracle;
use crate::word::{pairing, unpair, Grid, OmegaSeq};

/// `(x, y) ∈ D`: some coordinate starts with different symbols.
pub fn in_d_e1(x: &OmegaSeq, y: &OmegaSeq) -> bool {
    let n = x.head.len().max(y.head.len()) + 1;
    (0..n).any(|i| x.coordinate(i).at(0) != y.coordinate(i).at(0))
}

/// The first coordinate below `rows` whose known first symbols differ.
pub fn d_e1_prefix_witness(x: &Grid, y: &Grid, rows: usize) -> Option<usize> {
    (0..rows).find(|&i| matches!((x.get(i, 0), y.get(i, 0)), (Some(a), Some(b)) if a != b))
}

/// `(σ', τ')`: one more coordinate, starting with 0 and 1 respectively.
pub fn density_extension_e1(s: &Grid, t: &Grid) -> (Grid, Grid) {
    let m = s.rows.len().max(t.rows.len());
    let extend = |g: &Grid, b: u8| {
        let mut rows = g.rows.clone();
        rows.resize(m, Vec::new());
        rows.push(vec![b]);
        Grid::new(rows)
    };
    (extend(s, 0), extend(t, 1))
}

/// `Φ(x)(n)(⟨i, j⟩) = x(n + i)(j)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct InterleaveOracle;

impl MapOracle for InterleaveOracle {
    fn name(&self) -> &str {
        "interleave"
    }

    fn query(&self, input: &Grid) -> Grid {
        let rows = (0..input.rows.len())
            .map(|n| {
                (0..)
                    .map(|c| {
                        let (i, j) = unpair(c);
                        input.get(n + i, j)
                    })
                    .take_while(Option::is_some)
                    .map(|b| b.expect("known cell"))
                    .collect()
            })
            .collect();
        Grid::new(rows)
    }

    fn modulus(&self, rows: usize, cols: usize) -> (usize, usize) {
        if rows == 0 || cols == 0 {
            return (0, 0);
        }
        let (mut di, mut dj) = (0, 0);
        for c in 0..cols {
            let (i, j) = unpair(c);
            di = di.max(i);
            dj = dj.max(j);
        }
        (rows + di, dj + 1)
    }
}

/// The identity on rows except that the first symbol of coordinate `n ≥ 1`
/// is XORed with the OR of `x(n-1)(j)` for `1 ≤ j < 2^{n+2}`; continuous
/// but not coordinate-keeping.
#[derive(Clone, Copy, Debug, Default)]
pub struct LeakyOracle;

fn leak_width(n: usize) -> usize {
    1usize << (n + 2).min(40)
}

impl MapOracle for LeakyOracle {
    fn name(&self) -> &str {
        "leaky"
    }

    fn query(&self, input: &Grid) -> Grid {
        let mut out = input.clone();
        for n in 1..input.rows.len() {
            if out.rows[n].is_empty() {
                continue;
            }
            let w = leak_width(n);
            if input.row_len(n - 1) < w {
                out.rows[n].clear();
                continue;
            }
            let leak = (1..w).any(|j| input.get(n - 1, j) == Some(1));
            out.rows[n][0] ^= u8::from(leak);
        }
        out
    }

    fn modulus(&self, rows: usize, cols: usize) -> (usize, usize) {
        if rows == 0 || cols == 0 {
            return (0, 0);
        }
        (rows, cols.max(leak_width(rows - 1)))
    }

    fn negative_control(&self) -> bool {
        true
    }
}

/// The identity map.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityOracle;

impl MapOracle for IdentityOracle {
    fn name(&self) -> &str {
        "identity"
    }

    fn query(&self, input: &Grid) -> Grid {
        input.clone()
    }

    fn modulus(&self, rows: usize, cols: usize) -> (usize, usize) {
        (rows, cols)
    }
}

/// Looks up a shipped oracle by name.
pub fn oracle_by_name(name: &str) -> Result<Box<dyn MapOracle + Send + Sync>> {
    match name {
        "interleave" => Ok(Box::new(InterleaveOracle)),
        "leaky" => Ok(Box::new(LeakyOracle)),
        "identity" => Ok(Box::new(IdentityOracle)),
        other => Err(Error::InvalidArgument(format!(
            "unknown oracle '{other}' (expected interleave, leaky or identity)"
        ))),
    }
}

/// Largest square side the construction may query.
pub const MAX_SIDE: usize = 1 << 14;

fn first_symbols(g: &Grid, rows: usize) -> Vec<Option<u8>> {
    (0..rows).map(|i| g.get(i, 0)).collect()
}

fn show_symbols(v: &[Option<u8>]) -> String {
    v.iter()
        .map(|b| b.map_or('?', |b| char::from(b'0' + b)))
        .collect()
}

/// The output of the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E1Witness {
    /// `σ_{stages}`: the final `m × m` prefix of `x`.
    pub sigma: Grid,
    /// `m_0, …, m_{stages}`.
    pub m: Vec<usize>,
    /// Position of the 1 planted in coordinate `n`.
    pub planted: Vec<usize>,
}

impl E1Witness {
    /// The point of `N_σ` that is 0 off the prefix.
    pub fn point(&self) -> OmegaSeq {
        OmegaSeq::from_grid(&self.sigma)
    }
}

/// Builds `σ_0 ⊆ σ_1 ⊆ … ⊆ σ_stages` with `σ_n(n)` containing a 1 while
/// `Φ[N_{σ_n}]` keeps the first symbols of coordinates `0..=n` of `Φ(0̄)`.
///
/// Stage `n ≥ 1` certifies extension of `σ_{n-1}`, image containment and
/// the planted-one shape; `σ_0` is certified for containment and shape.
pub fn e1_witness(phi: &dyn MapOracle, stages: usize) -> Result<(E1Witness, Certificate)> {
    if stages == 0 {
        return Err(Error::InvalidArgument("at least one stage is needed".into()));
    }
    let mut b = CertBuilder::new("e1-2mycielski")
        .input("oracle", phi.name())
        .param("stages", stages)
        .expected_failure(phi.negative_control());
    let coords = stages + 1;
    let (zr, zc) = phi.modulus(coords, 1);
    let zero_img = phi.query(&Grid::zeros(zr.max(coords), zc.max(1)));
    let delta = first_symbols(&zero_img, coords);
    if delta.iter().any(Option::is_none) {
        return Err(Error::Precondition(format!(
            "the oracle modulus ({zr}, {zc}) does not determine the first symbols of Φ(0̄): {}",
            show_symbols(&delta)
        )));
    }
    b.set_param("delta", show_symbols(&delta));

    let mut sigma = Grid::default();
    let mut m_prev = 0usize;
    let mut ms = Vec::new();
    let mut planted = Vec::new();
    for n in 0..=stages {
        let (r, c) = phi.modulus(n + 1, 1);
        let side = m_prev.max(r).max(c);
        if side >= MAX_SIDE {
            return Err(Error::BudgetExhausted(format!(
                "stage {n} needs a {side}-square prefix (limit {MAX_SIDE})"
            )));
        }
        let mut next = sigma.padded(side + 1, side + 1);
        next.rows[n][side] = 1;
        let m = side + 1;
        let label = if n == 0 { "initial".to_string() } else { format!("stage {n}") };
        if n > 0 {
            b.check(
                format!("{label} extension: σ_{} ⊆ σ_{n}", n - 1),
                format!("{m_prev}x{m_prev}"),
                format!("{m}x{m}"),
                sigma.is_extended_by(&next),
            );
        }
        let img = first_symbols(&phi.query(&next), n + 1);
        b.check(
            format!("{label} containment: Φ[N_σ{n}] keeps the first symbols of coordinates 0..={n}"),
            show_symbols(&img),
            show_symbols(&delta[..=n]),
            img == delta[..=n],
        );
        let one_here = next.rows[n].contains(&1);
        let zero_above = next.rows[n + 1..].iter().all(|r| r.iter().all(|&v| v == 0));
        b.check(
            format!("{label} shape: σ_{n}({n}) has a 1 and rows above {n} are 0"),
            format!("one at ({n}, {side})"),
            format!("m_{n} = {m}"),
            one_here && zero_above,
        );
        sigma = next;
        m_prev = m;
        ms.push(m);
        planted.push(side);
    }

    let ones: Vec<usize> = (0..coords)
        .map(|i| sigma.rows[i].iter().filter(|&&v| v == 1).count())
        .collect();
    b.check(
        format!("every coordinate 0..={stages} of x contains a 1"),
        format!("{ones:?}"),
        "all ≥ 1",
        ones.iter().all(|&k| k >= 1),
    );
    let final_img = phi.query(&sigma);
    let w = d_e1_prefix_witness(&final_img, &zero_img, coords);
    b.check(
        format!("Φ(x) and Φ(0̄) share first symbols on coordinates 0..={stages}"),
        show_symbols(&first_symbols(&final_img, coords)),
        show_symbols(&delta),
        w.is_none() && first_symbols(&final_img, coords) == delta,
    );
    b.set_param("m", ms.clone());
    let witness = E1Witness {
        sigma,
        m: ms,
        planted,
    };
    Ok((witness, b.finish()))
}

/// `Φ` applied to the full finite-support sequence, on its first `rows`
/// coordinates up to `cols` symbols.
pub fn image_prefix(phi: &dyn MapOracle, x: &OmegaSeq, rows: usize, cols: usize) -> Grid {
    let (r, c) = phi.modulus(rows, cols);
    let input = Grid::new((0..r).map(|i| x.coordinate(i).prefix(c)).collect());
    let out = phi.query(&input);
    Grid::new(
        (0..rows)
            .map(|i| out.rows.get(i).map_or(Vec::new(), |row| row[..cols.min(row.len())].to_vec()))
            .collect(),
    )
}

/// Position of `(i, j)` in the row-`n` output of [`InterleaveOracle`].
pub fn interleave_position(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i >= n);
    pairing(i - n, j)
}
