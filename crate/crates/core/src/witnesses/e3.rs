//! The dense open set of sequence pairs with different first coordinates,
//! grid systems of finitely supported group elements, and the grid-word
//! recursion producing a pair avoiding the set.

use std::collections::{BTreeMap, BTreeSet};

use crate::cert::{CertBuilder, Certificate};
use crate::error::{Error, Result};
use crate::maps::oracle::MapOracle;
use crate::trees::finite::all_words;
use crate::witnesses::e1::IdentityOracle;
use crate::word::{digits_to_string, dom, grid, pairing, unpair, Grid, OmegaSeq};

/// `(x, y) ∈ D`: the first coordinates differ.
pub fn in_d_e3(x: &OmegaSeq, y: &OmegaSeq) -> bool {
    x.coordinate(0) != y.coordinate(0)
}

/// `(σ', τ')`: coordinate 0 extended by 0 and 1 respectively.
pub fn density_extension_e3(s: &Grid, t: &Grid) -> Result<(Grid, Grid)> {
    let m = s.rows.len().max(t.rows.len()).max(1);
    let (mut s2, mut t2) = (s.clone(), t.clone());
    s2.rows.resize(m, Vec::new());
    t2.rows.resize(m, Vec::new());
    if s2.rows[0].len() != t2.rows[0].len() {
        return Err(Error::InvalidArgument("coordinate 0 prefixes must have equal length".into()));
    }
    s2.rows[0].push(0);
    t2.rows[0].push(1);
    Ok((s2, t2))
}

/// A finitely supported element of the coordinatewise group: row `i` is
/// the word `g(i)` with trailing zeros trimmed and trailing empty rows removed.
pub type GroupElement = Vec<Vec<u8>>;

fn normalize(mut g: GroupElement) -> GroupElement {
    for row in &mut g {
        while row.last() == Some(&0) {
            row.pop();
        }
    }
    while g.last().is_some_and(Vec::is_empty) {
        g.pop();
    }
    g
}

fn add(a: &GroupElement, b: &GroupElement) -> GroupElement {
    let rows = a.len().max(b.len());
    let g = (0..rows)
        .map(|i| {
            let (ra, rb) = (a.get(i).map_or(&[][..], Vec::as_slice), b.get(i).map_or(&[][..], Vec::as_slice));
            (0..ra.len().max(rb.len()))
                .map(|j| ra.get(j).copied().unwrap_or(0) ^ rb.get(j).copied().unwrap_or(0))
                .collect()
        })
        .collect();
    normalize(g)
}

fn row(g: &GroupElement, i: usize) -> &[u8] {
    g.get(i).map_or(&[][..], Vec::as_slice)
}

/// `g · x` on the first `rows × cols` window of a grid.
pub fn act(g: &GroupElement, x: &Grid) -> Grid {
    let mut out = x.clone();
    for (i, r) in out.rows.iter_mut().enumerate() {
        for (j, v) in r.iter_mut().enumerate() {
            *v ^= row(g, i).get(j).copied().unwrap_or(0);
        }
    }
    out
}

/// `L(n) = sup π_1[dom(n)]`.
pub fn l_of_len(n: usize) -> usize {
    (0..n).map(|c| unpair(c).0).max().unwrap_or(0)
}

/// A grid system up to a finite horizon together with the sequences
/// `k_i` and `p_{m,i}` it is paired with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSystem {
    pub horizon: usize,
    pub table: BTreeMap<(Vec<u8>, Vec<u8>), GroupElement>,
    pub k: Vec<usize>,
    pub p: Vec<Vec<usize>>,
}

impl GridSystem {
    pub fn g(&self, s: &[u8], t: &[u8]) -> &GroupElement {
        &self.table[&(s.to_vec(), t.to_vec())]
    }
}

fn grid_difference(s: &[u8], t: &[u8]) -> GroupElement {
    let (a, b) = (grid(s), grid(t));
    add(&a.rows, &b.rows)
}

/// Extra columns examined past the horizon by the exhaustive checks.
const WINDOW_PAD: usize = 2;

/// The identity map with `k_i = i`, `p_{m,i} = i` and `g_{s,t} = grid(s) + grid(t)`.
pub fn identity_grid_instance(horizon: usize) -> Result<(IdentityOracle, GridSystem)> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("the horizon must be at least 1".into()));
    }
    if horizon > 8 {
        return Err(Error::BudgetExhausted(format!(
            "horizon {horizon} exceeds the exhaustive limit 8"
        )));
    }
    let mut table = BTreeMap::new();
    for n in 0..=horizon {
        let words = all_words(n);
        for s in &words {
            for t in &words {
                table.insert((s.clone(), t.clone()), grid_difference(s, t));
            }
        }
    }
    let width = horizon + WINDOW_PAD;
    let k = (0..width).collect();
    let p = (0..width).map(|_| (0..width).collect()).collect();
    Ok((IdentityOracle, GridSystem { horizon, table, k, p }))
}

fn x_s(s: &[u8], rows: usize, cols: usize) -> Grid {
    grid(s).padded(rows, cols)
}

/// Exhaustive check of the cocycle and coherence laws, the support bound
/// and conditions (iii), (iv), (v) on every grid word up to the horizon.
pub fn grid_system_check(phi: &dyn MapOracle, sys: &GridSystem) -> Certificate {
    let n_max = sys.horizon;
    let width = n_max + WINDOW_PAD;
    let mut b = CertBuilder::new("e3-grid-system")
        .input("oracle", phi.name())
        .param("horizon", n_max);

    let mut cocycle = (0usize, None);
    let mut self_zero = true;
    for n in 0..=n_max {
        let words = all_words(n);
        for s in &words {
            self_zero &= sys.g(s, s).is_empty();
            for t in &words {
                for u in &words {
                    cocycle.0 += 1;
                    if cocycle.1.is_none() && *sys.g(s, u) != add(sys.g(t, u), sys.g(s, t)) {
                        cocycle.1 = Some(format!("{} {} {}", digits_to_string(s), digits_to_string(t), digits_to_string(u)));
                    }
                }
            }
        }
    }
    b.check("g_{s,s} = 0̄ for every s", "checked", "0̄", self_zero);
    b.check(
        format!("cocycle law g_(s,u) = g_(t,u) + g_(s,t) on {} triples", cocycle.0),
        cocycle.1.clone().unwrap_or_else(|| "none failing".into()),
        "none failing",
        cocycle.1.is_none(),
    );

    let mut coherence = (0usize, None);
    let mut support = None;
    for n in 0..=n_max {
        let words = all_words(n);
        let cells = dom(n);
        let rows_present: BTreeSet<usize> = cells.iter().map(|&(i, _)| i).collect();
        let bound = sys.k.get(l_of_len(n)).copied().unwrap_or(usize::MAX) + 1;
        for s in &words {
            let gs = grid(s);
            for t in &words {
                let gt = grid(t);
                let g = sys.g(s, t);
                if support.is_none() && g.len() > bound {
                    support = Some(format!("{} {}", digits_to_string(s), digits_to_string(t)));
                }
                for m in 0..=n {
                    let outer = dom(m);
                    let g_uv = sys.g(&s[..m], &t[..m]);
                    for &l in &rows_present {
                        let agree = cells
                            .iter()
                            .filter(|c| !outer.contains(c) && c.0 <= l)
                            .all(|&(i, j)| gs.get(i, j) == gt.get(i, j));
                        if !agree {
                            continue;
                        }
                        coherence.0 += 1;
                        if coherence.1.is_none() && (0..=l).any(|i| row(g, i) != row(g_uv, i)) {
                            coherence.1 = Some(format!(
                                "s={} t={} m={m} l={l}",
                                digits_to_string(s),
                                digits_to_string(t)
                            ));
                        }
                    }
                }
            }
        }
    }
    b.check(
        format!("coherence: g_(s,t) and g_(u,v) agree below l on {} agreeing instances", coherence.0),
        coherence.1.clone().unwrap_or_else(|| "none failing".into()),
        "none failing",
        coherence.1.is_none(),
    );
    b.check(
        "support: supp(g_(s,t)) ⊆ k_L(n) + 1 for all s, t of length n",
        support.clone().unwrap_or_else(|| "none failing".into()),
        "none failing",
        support.is_none(),
    );

    let increasing = sys.k.windows(2).all(|w| w[0] < w[1])
        && sys.p.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]));
    b.check("k and every p_m are strictly increasing", format!("{:?}", sys.k), "increasing", increasing);

    let mut iv = (0usize, None);
    let mut v = (0usize, None);
    for n in 0..=n_max {
        let words = all_words(n);
        let cells = dom(n);
        let l_max = l_of_len(n) + 1;
        for s in &words {
            let x = x_s(s, width, width);
            let fx = phi.query(&x);
            for t in &words {
                let y = x_s(t, width, width);
                let fy = phi.query(&y);
                for &(m, j) in &cells {
                    if x.get(m, j) == Some(0) && y.get(m, j) == Some(1) {
                        iv.0 += 1;
                        let (km, p) = (sys.k[m], sys.p[m][j]);
                        if iv.1.is_none() && (fx.get(km, p) != Some(0) || fy.get(km, p) != Some(1)) {
                            iv.1 = Some(format!("s={} t={} cell ({m},{j})", digits_to_string(s), digits_to_string(t)));
                        }
                    }
                }
                let g = sys.g(s, t);
                for background in [0u8, 1] {
                    let (mut xb, mut yb) = (x.clone(), y.clone());
                    for i in 0..width {
                        for jj in 0..width {
                            if !cells.contains(&(i, jj)) {
                                xb.rows[i][jj] = background & u8::from((i + jj) % 2 == 0);
                                yb.rows[i][jj] = xb.rows[i][jj];
                            }
                        }
                    }
                    let (fxb, fyb) = (phi.query(&xb), phi.query(&yb));
                    let moved = act(g, &fxb);
                    for l in 0..l_max.min(width) {
                        v.0 += 1;
                        if v.1.is_none() && moved.rows[l] != fyb.rows[l] {
                            v.1 = Some(format!("s={} t={} l={l}", digits_to_string(s), digits_to_string(t)));
                        }
                    }
                }
            }
        }
    }
    b.check(
        format!("condition (iv) on {} planted cells", iv.0),
        iv.1.clone().unwrap_or_else(|| "none failing".into()),
        "none failing",
        iv.1.is_none(),
    );
    b.check(
        format!("condition (v): (g_(s,t)·Φ(x))(l) = Φ(y)(l) on {} instances", v.0),
        v.1.clone().unwrap_or_else(|| "none failing".into()),
        "none failing",
        v.1.is_none(),
    );
    b.finish()
}

/// Largest grid-word length the recursion may reach.
pub const MAX_WORD: usize = 1 << 16;

/// The output of the grid-word recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E3Witness {
    /// `s_stages`.
    pub word: Vec<u8>,
    /// `|s_0|, …, |s_stages|`.
    pub lengths: Vec<usize>,
    /// The code `⟨1, q⟩` planted at each stage.
    pub planted: Vec<usize>,
}

impl E3Witness {
    /// `x_s`: the grid of the final word, 0 elsewhere.
    pub fn point(&self) -> OmegaSeq {
        OmegaSeq::from_grid(&grid(&self.word))
    }
}

/// Least length `ℓ` with `rows × cols ⊆ dom(ℓ)`.
fn covering_length(rows: usize, cols: usize) -> usize {
    if rows == 0 || cols == 0 {
        return 0;
    }
    (0..rows)
        .flat_map(|i| (0..cols).map(move |j| pairing(i, j) + 1))
        .max()
        .unwrap_or(0)
}

fn query_row0(phi: &dyn MapOracle, s: &[u8], cols: usize) -> Vec<Option<u8>> {
    let (r, c) = phi.modulus(1, cols);
    let g = grid(s);
    let rows = r.max(g.rows.len()).max(1);
    let width = (0..g.rows.len()).map(|i| g.row_len(i)).max().unwrap_or(0).max(c);
    let out = phi.query(&g.padded(rows, width));
    (0..cols).map(|j| out.get(0, j)).collect()
}

fn show(v: &[Option<u8>]) -> String {
    v.iter().map(|b| b.map_or('?', |b| char::from(b'0' + b))).collect()
}

/// Builds `s_0 ⊆ s_1 ⊆ …` with `x_{s_n}(0) = 0̃`, each stage planting a 1
/// in coordinate 1 beyond the modulus that fixes `Φ(·)(0)↾(n+1)`.
pub fn e3_witness(phi: &dyn MapOracle, stages: usize) -> Result<(E3Witness, Certificate)> {
    if stages == 0 {
        return Err(Error::InvalidArgument("at least one stage is needed".into()));
    }
    let mut b = CertBuilder::new("e3-2mycielski")
        .input("oracle", phi.name())
        .param("stages", stages)
        .expected_failure(phi.negative_control());
    let rho = query_row0(phi, &[], stages);
    if rho.iter().any(Option::is_none) {
        return Err(Error::Precondition(format!(
            "the oracle modulus does not determine Φ(0̄)(0) to {stages} symbols: {}",
            show(&rho)
        )));
    }
    b.set_param("rho", show(&rho));

    let mut s: Vec<u8> = Vec::new();
    let mut lengths = vec![0];
    let mut planted = Vec::new();
    for n in 0..stages {
        let (r, c) = phi.modulus(1, n + 1);
        let mut u = s.clone();
        u.resize(u.len().max(covering_length(r, c)), 0);
        let k = (u.len() + 1..).find(|&k| unpair(k).0 == 1).expect("row 1 recurs");
        if k >= MAX_WORD {
            return Err(Error::BudgetExhausted(format!(
                "stage {} needs a grid word of length {k} (limit {MAX_WORD})",
                n + 1
            )));
        }
        let mut next = u;
        next.resize(k + 1, 0);
        next[k] = 1;
        let img = query_row0(phi, &next, n + 1);
        b.check(
            format!("stage {}: Φ(x_s)(0) agrees with Φ(0̄)(0) on {} symbols", n + 1, n + 1),
            show(&img),
            show(&rho[..=n]),
            img == rho[..=n],
        );
        let (i, q) = unpair(k);
        b.check(
            format!("stage {}: s_{} ⊇ s_{n} plants 1 at ⟨1, {q}⟩ = {k}", n + 1, n + 1),
            format!("row {i}"),
            "row 1",
            next.starts_with(&s) && i == 1,
        );
        s = next;
        lengths.push(s.len());
        planted.push(k);
    }

    let g = grid(&s);
    let row0_zero = g.rows.first().is_none_or(|r| r.iter().all(|&v| v == 0));
    b.check("x(0) = 0̃ = 0̄(0)", digits_to_string(g.rows.first().map_or(&[][..], Vec::as_slice)), "all zero", row0_zero);
    let ones = g.rows.get(1).map_or(0, |r| r.iter().filter(|&&v| v == 1).count());
    b.check(
        format!("x(1) contains at least {stages} ones"),
        ones.to_string(),
        format!(">= {stages}"),
        ones >= stages,
    );
    let img = query_row0(phi, &s, stages);
    b.check(
        format!("Φ(x)(0) agrees with Φ(0̄)(0) to horizon {stages}, so the image pair avoids D"),
        show(&img),
        show(&rho),
        img == rho,
    );
    b.set_param("lengths", lengths.clone());
    Ok((E3Witness { word: s, lengths, planted }, b.finish()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::UPWord;

    #[test]
    fn membership_examples() {
        let x = OmegaSeq::zeros();
        assert!(!in_d_e3(&x, &x));
        let mut y = OmegaSeq::zeros();
        y.head.push(UPWord::parse("00000001(0)", Some(2)).unwrap());
        assert!(in_d_e3(&x, &y));
        let (s, t) = density_extension_e3(&Grid::new(vec![vec![0, 1], vec![1]]), &Grid::new(vec![vec![1, 1]])).unwrap();
        assert!(in_d_e3(&OmegaSeq::from_grid(&s), &OmegaSeq::from_grid(&t)));
    }

    #[test]
    fn identity_instance_passes_to_horizon_three() {
        let (phi, sys) = identity_grid_instance(3).unwrap();
        assert!(sys.g(&[1, 0, 1], &[1, 0, 1]).is_empty());
        let cert = grid_system_check(&phi, &sys);
        assert!(cert.passed(), "{}", cert.to_json());
    }

    #[test]
    fn broken_cocycle_is_caught() {
        let (phi, mut sys) = identity_grid_instance(2).unwrap();
        sys.table.insert((vec![0, 1], vec![1, 1]), vec![vec![1, 1]]);
        let cert = grid_system_check(&phi, &sys);
        assert!(!cert.passed());
        assert!(!cert.find("cocycle")[0].verdict.is_pass());
    }

    #[test]
    fn one_stage_plants_past_the_modulus() {
        let (w, cert) = e3_witness(&IdentityOracle, 1).unwrap();
        assert!(cert.passed(), "{}", cert.to_json());
        assert_eq!(w.planted, vec![4]);
        assert_eq!(unpair(4), (1, 1));
    }

    #[test]
    fn eight_stages_pass_and_ones_grow() {
        let mut last = 0;
        for stages in 1..=8 {
            let (w, cert) = e3_witness(&IdentityOracle, stages).unwrap();
            assert!(cert.passed(), "{}", cert.to_json());
            let ones = w.point().coordinate(1).preamble().iter().filter(|&&b| b == 1).count();
            assert!(ones >= stages && ones >= last);
            last = ones;
            assert!(!in_d_e3(&w.point(), &OmegaSeq::zeros()));
        }
    }

    #[test]
    fn interleave_oracle_leaks_coordinate_one() {
        let (_, cert) = e3_witness(&crate::witnesses::e1::InterleaveOracle, 6).unwrap();
        assert!(!cert.passed());
    }
}
