//! Report documents written by `verify`. Their JSON layout is described by
//! the schemas under `docs/schema/`.

use serde::Serialize;
use serde_json::Value;

use noetherian::reversal::{SharpClaims, StageReport};
use noetherian::Injection;

#[derive(Debug, Serialize)]
pub struct CheckFailure {
    pub stage: u64,
    pub check: String,
}

#[derive(Debug, Serialize)]
pub struct ClaimsRow {
    pub stage: u64,
    #[serde(flatten)]
    pub claims: SharpClaims,
}

#[derive(Debug, Serialize)]
pub struct ChainReport {
    pub command: &'static str,
    pub ok: bool,
    pub steps_checked: u64,
    pub injection: Injection,
    pub steps: Vec<StageReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claims: Option<Vec<ClaimsRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<CheckFailure>,
}

impl ChainReport {
    pub fn text(&self) -> String {
        let mut out = format!("{} on {} steps\n", self.command, self.steps_checked);
        for st in &self.steps {
            let case = match st.n0 {
                Some(n0) => format!("i (n0 = {n0})"),
                None => "ii".to_string(),
            };
            let sep: Vec<String> = st
                .separator
                .iter()
                .map(|e| format!("({},{})", e.stage, e.p))
                .collect();
            out += &format!(
                "stage {:>3}  case {:<12} separator {{{}}}  {}\n",
                st.stage,
                case,
                sep.join(", "),
                if st.strict { "strict" } else { "NOT strict" }
            );
        }
        for row in self.claims.iter().flatten() {
            if !row.claims.all() {
                out += &format!("stage {:>3}  claims {:?}\n", row.stage, row.claims);
            }
        }
        if let Some(f) = &self.failure {
            out += &format!("FAILED at stage {}: {}\n", f.stage, f.check);
        } else {
            out += "ok\n";
        }
        out
    }
}

/// Envelope for the remaining verifications.
#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub command: &'static str,
    pub ok: bool,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Value>,
    pub details: Value,
}

impl CheckReport {
    pub fn text(&self) -> String {
        let mut out = format!(
            "{}: {} checks, {}\n",
            self.command,
            self.checked,
            if self.ok { "ok" } else { "FAILED" }
        );
        if let Some(seed) = self.seed {
            out += &format!("seed {seed}\n");
        }
        if let Some(f) = &self.failure {
            out += &format!("first failure: {f}\n");
        }
        out
    }
}
