//! Three-valued, witness-carrying results for bounded-search decision
//! procedures.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Verdict<Y, N> {
    ProvenYes(Y),
    ProvenNo(N),
    Unknown(Budget),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Budget {
    pub consumed: usize,
    pub note: String,
}

impl<Y, N> Verdict<Y, N> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::ProvenYes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::ProvenNo(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn status(&self) -> &'static str {
        match self {
            Verdict::ProvenYes(_) => "proven-yes",
            Verdict::ProvenNo(_) => "proven-no",
            Verdict::Unknown(_) => "unknown",
        }
    }
}
