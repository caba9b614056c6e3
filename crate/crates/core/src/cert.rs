//! Self-contained verification certificates.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::rational::{format_rational, Rational};

/// Outcome of one check or of a whole certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The check lies beyond the configured search budget; nothing is claimed.
    BudgetExhausted,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Conjunction: any failure fails; otherwise any unfinished check leaves
    /// the whole unfinished.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (BudgetExhausted, _) | (_, BudgetExhausted) => BudgetExhausted,
            _ => Pass,
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

/// One recorded claim with both sides rendered exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub claim: String,
    pub lhs: String,
    pub rhs: String,
    pub verdict: Verdict,
}

/// A theorem-level verification record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub tool_version: String,
    pub theorem: String,
    pub inputs: Map<String, Value>,
    pub params: Map<String, Value>,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub expected_failure: bool,
}

impl Certificate {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// True when the stored verdict is the conjunction of the check verdicts.
    pub fn verdict_consistent(&self) -> bool {
        self.checks
            .iter()
            .fold(Verdict::Pass, |acc, c| acc.and(c.verdict))
            == self.verdict
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    /// Checks whose claim starts with the given text.
    pub fn find(&self, claim_prefix: &str) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.claim.starts_with(claim_prefix))
            .collect()
    }
}

/// Comparison operators for exact checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl Cmp {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Gt => lhs > rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
            Cmp::Eq => "=",
        }
    }
}

/// Incremental certificate construction.
#[derive(Clone, Debug)]
pub struct CertBuilder {
    theorem: String,
    inputs: Map<String, Value>,
    params: Map<String, Value>,
    checks: Vec<Check>,
    expected_failure: bool,
}

impl CertBuilder {
    pub fn new(theorem: impl Into<String>) -> Self {
        CertBuilder {
            theorem: theorem.into(),
            inputs: Map::new(),
            params: Map::new(),
            checks: Vec::new(),
            expected_failure: false,
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn set_input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.to_string(), value.into());
    }

    pub fn set_param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_string(), value.into());
    }

    pub fn expected_failure(mut self, flag: bool) -> Self {
        self.expected_failure = flag;
        self
    }

    /// Records a check with free-form sides.
    pub fn check(
        &mut self,
        claim: impl Into<String>,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
        ok: bool,
    ) -> bool {
        self.checks.push(Check {
            claim: claim.into(),
            lhs: lhs.into(),
            rhs: rhs.into(),
            verdict: Verdict::from_bool(ok),
        });
        ok
    }

    /// Records an exact rational comparison `lhs op rhs`.
    pub fn compare(
        &mut self,
        claim: impl Into<String>,
        lhs: &Rational,
        op: Cmp,
        rhs: &Rational,
    ) -> bool {
        let ok = op.holds(lhs, rhs);
        self.checks.push(Check {
            claim: format!("{} [{}]", claim.into(), op.symbol()),
            lhs: format_rational(lhs),
            rhs: format_rational(rhs),
            verdict: Verdict::from_bool(ok),
        });
        ok
    }

    /// Records a check that could not be evaluated within budget.
    pub fn exhausted(&mut self, claim: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(Check {
            claim: claim.into(),
            lhs: detail.into(),
            rhs: String::new(),
            verdict: Verdict::BudgetExhausted,
        });
    }

    pub fn verdict(&self) -> Verdict {
        self.checks
            .iter()
            .fold(Verdict::Pass, |acc, c| acc.and(c.verdict))
    }

    pub fn finish(self) -> Certificate {
        let verdict = self.verdict();
        Certificate {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            theorem: self.theorem,
            inputs: self.inputs,
            params: self.params,
            checks: self.checks,
            verdict,
            expected_failure: self.expected_failure,
        }
    }
}
