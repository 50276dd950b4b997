//! Persistent verification report.

use serde::{Deserialize, Serialize};

use crate::boundary::BoundarySection;
use crate::interior::{TermRecord, TheoremCheck};
use crate::ledger::{Ledger, Verdict};

pub const SCHEMA_VERSION: &str = "wres-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteriorSection {
    pub terms: Vec<TermRecord>,
    pub theorem: TheoremCheck,
}

impl InteriorSection {
    fn verdicts(&self) -> impl Iterator<Item = (String, Verdict)> + '_ {
        self.terms
            .iter()
            .map(|t| (crate::interior::term_location(t.index), t.verdict))
            .chain([(crate::interior::THEOREM_LOCATION.to_string(), self.theorem.verdict)])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: String,
    pub mode: String,
    pub specialization: Option<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub interior: Option<InteriorSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub boundary: Option<BoundarySection>,
    /// Locations whose verdict is a ledgered diff.
    pub ledger_refs: Vec<String>,
    pub ledger: Ledger,
}

impl VerificationReport {
    pub fn new(
        mode: &str,
        specialization: Option<String>,
        interior: Option<InteriorSection>,
        boundary: Option<BoundarySection>,
        ledger: Ledger,
    ) -> Self {
        let mut all: Vec<(String, Verdict)> = Vec::new();
        if let Some(i) = &interior {
            all.extend(i.verdicts());
        }
        if let Some(b) = &boundary {
            all.extend(b.cases.iter().map(|c| (c.case.location(), c.verdict)));
            all.push((crate::boundary::TOTAL_LOCATION.to_string(), b.total_verdict));
        }
        let status = if all.iter().all(|(_, v)| v.passes()) {
            Status::Pass
        } else {
            Status::Fail
        };
        let ledger_refs = all
            .into_iter()
            .filter(|(_, v)| *v == Verdict::Ledgered)
            .map(|(l, _)| l)
            .collect();
        VerificationReport {
            schema_version: SCHEMA_VERSION.to_string(),
            mode: mode.to_string(),
            specialization,
            status,
            interior,
            boundary,
            ledger_refs,
            ledger,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn passes(&self) -> bool {
        self.status == Status::Pass
    }

    /// Plain text: one line per comparison.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}", self.schema_version, self.mode);
        if let Some(s) = &self.specialization {
            out += &format!(" [{s}]");
        }
        out.push('\n');
        if let Some(i) = &self.interior {
            for t in &i.terms {
                out += &format!("term {:>2}  {:<16} computed {}\n", t.index, t.verdict.to_string(), t.computed);
                if t.verdict != Verdict::Match {
                    out += &format!("          printed {}\n", t.printed);
                }
            }
            let th = &i.theorem;
            out += &format!("theorem  {}\n  computed {}\n  printed  {}\n", th.verdict, th.computed, th.printed);
            if th.diff != "0" {
                out += &format!("  diff     {}\n", th.diff);
            }
            out += &format!("  density  {}\n", th.density);
            out += &format!("  flat case -4/3*pi^3*s: {}; sigma6 routes agree: {}\n", th.flat_check, th.routes_agree);
        }
        if let Some(b) = &self.boundary {
            for c in &b.cases {
                out += &format!("{:<6} {:<16} computed {}\n", c.case.label(), c.verdict.to_string(), c.computed);
                if c.verdict != Verdict::Match {
                    out += &format!("       printed {}\n", c.printed);
                }
            }
            out += &format!("total  {:<16} {}\n", b.total_verdict.to_string(), b.total);
            out += &format!("a.II + a.III = 0: {}; b + c = 0: {}\n", b.pair_a, b.pair_bc);
        }
        out += &format!("status {}\n", if self.passes() { "pass" } else { "fail" });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{boundary_section, ALL_CASES};

    #[test]
    fn boundary_report_round_trips() {
        let l = Ledger::bundled();
        let b = boundary_section(None, &ALL_CASES, &l).unwrap();
        let r = VerificationReport::new("boundary", None, None, Some(b), l);
        assert!(r.passes());
        assert_eq!(r.ledger_refs, ["boundary b", "boundary c"]);
        let back = VerificationReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), r.to_json());
    }

    #[test]
    fn empty_ledger_fails() {
        let b = boundary_section(None, &ALL_CASES, &Ledger::default()).unwrap();
        let r = VerificationReport::new("boundary", None, None, Some(b), Ledger::default());
        assert_eq!(r.status, Status::Fail);
        assert!(r.to_text().ends_with("status fail\n"));
    }
}
