//! Discrepancy ledger: printed values that the forced algebra contradicts.
//!
//! A comparison that fails is only excused when the ledger has an entry for
//! the same location whose `forced` text equals the value computed now, so a
//! stale entry never hides a new result. For the interior theorem the
//! `forced` text is the difference computed minus printed.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub location: String,
    pub printed: String,
    pub forced: String,
    pub note: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ledger {
    pub entries: Vec<LedgerEntry>,
}

const BUNDLED: &str = include_str!("../data/ledger.json");

impl Ledger {
    pub fn bundled() -> Ledger {
        Ledger::from_json(BUNDLED).expect("bundled ledger parses")
    }

    pub fn from_json(text: &str) -> Result<Ledger, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("ledger serializes")
    }

    pub fn find(&self, location: &str) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.location == location)
    }

    /// Verdict for a comparison at `location`; `forced` is the canonical text
    /// of the computed value.
    pub fn judge(&self, location: &str, equal: bool, forced: &str) -> Verdict {
        if equal {
            Verdict::Match
        } else if self.find(location).is_some_and(|e| e.forced == forced) {
            Verdict::Ledgered
        } else {
            Verdict::Diff
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "match")]
    Match,
    #[serde(rename = "diff (ledgered)")]
    Ledgered,
    #[serde(rename = "diff")]
    Diff,
}

impl Verdict {
    /// Match and ledgered diffs pass.
    pub fn passes(self) -> bool {
        self != Verdict::Diff
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Match => "match",
            Verdict::Ledgered => "diff (ledgered)",
            Verdict::Diff => "diff",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ledger() -> Ledger {
        Ledger {
            entries: vec![LedgerEntry {
                location: "term 8".into(),
                printed: "a".into(),
                forced: "b".into(),
                note: "n".into(),
            }],
        }
    }

    #[test]
    fn stale_forced_text_is_not_excused() {
        let l = ledger();
        assert_eq!(l.judge("term 8", false, "b"), Verdict::Ledgered);
        assert_eq!(l.judge("term 8", false, "c"), Verdict::Diff);
        assert_eq!(l.judge("term 9", false, "b"), Verdict::Diff);
        assert_eq!(l.judge("term 9", true, "x"), Verdict::Match);
    }

    #[test]
    fn json_round_trip_and_verdict_text() {
        let l = ledger();
        assert_eq!(Ledger::from_json(&l.to_json()).unwrap(), l);
        assert_eq!(serde_json::to_string(&Verdict::Ledgered).unwrap(), "\"diff (ledgered)\"");
        assert!(Ledger::from_json("{\"x\":1}").is_err());
        Ledger::bundled();
    }
}
