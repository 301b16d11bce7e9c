use std::fmt;
use std::str::FromStr;

use folast_core::Entailment;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NliLabel {
    Entailment,
    Contradiction,
    Uncertain,
}

impl NliLabel {
    pub const ALL: [NliLabel; 3] = [NliLabel::Entailment, NliLabel::Contradiction, NliLabel::Uncertain];

    pub fn as_str(self) -> &'static str {
        match self {
            NliLabel::Entailment => "entailment",
            NliLabel::Contradiction => "contradiction",
            NliLabel::Uncertain => "uncertain",
        }
    }
}

impl fmt::Display for NliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NliLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NliLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("unknown label {s:?} (expected entailment, contradiction or uncertain)"))
    }
}

/// Label from the two entailment checks `p ⊨ h` and `p ⊨ ¬h`.
///
/// An unknown on either side yields `Uncertain`; the second component
/// reports whether that happened.
pub fn label_from(e_plus: Entailment, e_minus: Entailment) -> (NliLabel, bool) {
    use Entailment::*;
    match (e_plus, e_minus) {
        (Unknown, _) | (_, Unknown) => (NliLabel::Uncertain, true),
        (Holds, Fails) => (NliLabel::Entailment, false),
        (Fails, Holds) => (NliLabel::Contradiction, false),
        _ => (NliLabel::Uncertain, false),
    }
}
