//! Recomputes a certificate from its recorded inputs and parameters.

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::cert::Certificate;
use crate::error::{Error, Result};
use crate::maps::e2::{p_e2_witness, Theta};
use crate::maps::gadget::{e0_gadget_check, e2_gadget_check};
use crate::maps::jonsson::jonsson_build;
use crate::trees::e0::E0Tree;
use crate::trees::e2::{verify_e2_family, verify_e2_tree, E2Tree, E2TreeFamily};
use crate::trees::finite::FiniteTree;
use crate::witnesses::e0::{e0_mycielski_check, e0_weak_mycielski_check};
use crate::witnesses::e1::{e1_witness, oracle_by_name};
use crate::witnesses::e2::{e2_mycielski_check, e2_weak_mycielski_check};
use crate::witnesses::e3::{e3_witness, grid_system_check, identity_grid_instance};
use crate::word::{parse_digits, FiniteWord};

fn field<'a>(map: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    map.get(key)
        .ok_or_else(|| Error::InvalidArgument(format!("certificate lacks field '{key}'")))
}

fn decode<T: DeserializeOwned>(map: &Map<String, Value>, key: &str) -> Result<T> {
    serde_json::from_value(field(map, key)?.clone())
        .map_err(|e| Error::InvalidArgument(format!("field '{key}': {e}")))
}

fn digits(map: &Map<String, Value>, key: &str) -> Result<Vec<u8>> {
    let s: String = decode(map, key)?;
    parse_digits(&s, 0)
}

fn theta(map: &Map<String, Value>) -> Result<Theta> {
    let s: String = decode(map, "theta")?;
    s.parse()
}

/// Reruns the construction named by `cert.theorem` on the recorded inputs.
pub fn replay(cert: &Certificate) -> Result<Certificate> {
    let (i, p) = (&cert.inputs, &cert.params);
    match cert.theorem.as_str() {
        "e0-3mycielski" => {
            let tree: E0Tree = decode(i, "tree")?;
            Ok(e0_mycielski_check(&tree, decode(p, "depth").ok()))
        }
        "e0-weak-3mycielski" => {
            let tree: E0Tree = decode(i, "tree")?;
            let stems: Vec<String> = decode(i, "stems")?;
            let stems: Vec<Vec<u8>> = stems.iter().map(|s| parse_digits(s, 0)).collect::<Result<_>>()?;
            let stems: [Vec<u8>; 3] = stems
                .try_into()
                .map_err(|_| Error::InvalidArgument("exactly three stems are required".into()))?;
            e0_weak_mycielski_check(&tree, &stems, decode(p, "depth").ok())
        }
        "e1-2mycielski" => {
            let name: String = decode(i, "oracle")?;
            Ok(e1_witness(oracle_by_name(&name)?.as_ref(), decode(p, "stages")?)?.1)
        }
        "e2-2mycielski" => Ok(e2_mycielski_check(&decode::<E2Tree>(i, "tree")?)),
        "e2-weak-2mycielski" => e2_weak_mycielski_check(&decode::<E2TreeFamily>(i, "family")?),
        "e3-2mycielski" => {
            let name: String = decode(i, "oracle")?;
            Ok(e3_witness(oracle_by_name(&name)?.as_ref(), decode(p, "stages")?)?.1)
        }
        "e3-grid-system" => {
            let name: String = decode(i, "oracle")?;
            if name != "identity" {
                return Err(Error::InvalidArgument(format!("no grid system ships for oracle '{name}'")));
            }
            let (phi, sys) = identity_grid_instance(decode(p, "horizon")?)?;
            Ok(grid_system_check(&phi, &sys))
        }
        "e2-surjectivity" => {
            let v = FiniteWord::new(3, digits(i, "v")?)?;
            let tree: E2Tree = decode(i, "tree")?;
            Ok(p_e2_witness(&v, &tree, &theta(p)?, decode(p, "budget")?)?.1)
        }
        "jonsson" => {
            let nodes: Vec<String> = decode(i, "tree")?;
            let nodes = nodes.iter().map(|s| parse_digits(s, 0)).collect::<Result<Vec<_>>>()?;
            let t = FiniteTree::new(decode(i, "depth")?, nodes)?;
            Ok(jonsson_build(&t, decode(p, "stages")?)?.1)
        }
        "e0-gadget" => {
            let tree: E0Tree = decode(i, "tree")?;
            e0_gadget_check(&tree, &digits(i, "u")?, &digits(i, "v")?, &digits(i, "w")?)
        }
        "e2-gadget" => {
            let tree: E2Tree = decode(i, "tree")?;
            e2_gadget_check(
                &tree,
                &digits(i, "s")?,
                &digits(i, "t")?,
                &digits(i, "u")?,
                &theta(p)?,
                decode(p, "levels")?,
                decode(p, "budget")?,
            )
        }
        "e2-tree" => Ok(verify_e2_tree(&decode::<E2Tree>(i, "tree")?)),
        "e2-family" => Ok(verify_e2_family(&decode::<E2TreeFamily>(i, "family")?)),
        other => Err(Error::InvalidArgument(format!("unknown theorem tag '{other}'"))),
    }
}

/// Outcome of re-checking a stored certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reverification {
    /// The recomputed certificate serializes to the same bytes.
    pub identical: bool,
    /// The stored verdict is the conjunction of its checks.
    pub consistent: bool,
    /// The recomputed verdict.
    pub passed: bool,
}

/// Parses, replays and compares a certificate text.
pub fn reverify(text: &str) -> Result<(Reverification, Certificate)> {
    let stored = Certificate::from_json(text)
        .map_err(|e| Error::Parse { position: e.column(), message: format!("certificate JSON: {e}") })?;
    let fresh = replay(&stored)?;
    let r = Reverification {
        identical: fresh.to_json() == text,
        consistent: stored.verdict_consistent(),
        passed: fresh.passed(),
    };
    Ok((r, fresh))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witnesses::e1::{InterleaveOracle, LeakyOracle};

    fn round_trip(c: &Certificate) {
        let (r, _) = reverify(&c.to_json()).unwrap();
        assert!(r.identical && r.consistent, "{}", c.theorem);
    }

    #[test]
    fn witnesses_replay_byte_for_byte() {
        round_trip(&e0_mycielski_check(&E0Tree::identity(), Some(50)));
        round_trip(&e1_witness(&InterleaveOracle, 3).unwrap().1);
        let leaky = e1_witness(&LeakyOracle, 3).unwrap().1;
        assert!(leaky.expected_failure);
        round_trip(&leaky);
        round_trip(&e2_mycielski_check(&E2Tree::identity(4)));
        let (phi, sys) = identity_grid_instance(2).unwrap();
        round_trip(&grid_system_check(&phi, &sys));
        round_trip(&e3_witness(&phi, 3).unwrap().1);
        let t = FiniteTree::full(2);
        round_trip(&jonsson_build(&t, 2).unwrap().1);
    }

    #[test]
    fn tampered_certificates_are_detected() {
        let c = e1_witness(&InterleaveOracle, 2).unwrap().1;
        let text = c.to_json().replace("\"pass\"", "\"fail\"");
        let (r, _) = reverify(&text).unwrap();
        assert!(!r.identical);
        let mut bad = c.clone();
        bad.theorem = "nonsense".into();
        assert!(replay(&bad).is_err());
    }
}
