//! Machine-checkable verdicts with the residue that decides them.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Falsified,
}

/// `{claim, status, residue, inputs, details?}`. `residue` is the printed
/// difference whose vanishing is the claim, or `null` when none applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: String,
    pub status: Status,
    pub residue: Option<String>,
    pub inputs: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl Certificate {
    /// Verified iff `residue` prints as `0`.
    pub fn from_residue(claim: impl Into<String>, residue: impl fmt::Display, inputs: Value) -> Self {
        let residue = residue.to_string();
        Certificate {
            claim: claim.into(),
            status: if residue == "0" {
                Status::Verified
            } else {
                Status::Falsified
            },
            residue: Some(residue),
            inputs,
            details: None,
        }
    }

    pub fn with_status(claim: impl Into<String>, ok: bool, inputs: Value) -> Self {
        Certificate {
            claim: claim.into(),
            status: if ok { Status::Verified } else { Status::Falsified },
            residue: None,
            inputs,
            details: None,
        }
    }

    pub fn details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    pub fn verified(&self) -> bool {
        self.status == Status::Verified
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Verified => "verified",
            Status::Falsified => "FALSIFIED",
        };
        write!(f, "[{tag}] {}", self.claim)?;
        if let Some(r) = &self.residue {
            write!(f, " (residue {r})")?;
        }
        Ok(())
    }
}
