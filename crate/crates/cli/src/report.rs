//! Report records, summary and the CSV projection.

use std::collections::BTreeMap;

use charsum_core::grouptran::TransferLawReport;
use charsum_core::sheaf::{Bound, BoundReport, SheafSpecJson};
use charsum_core::sumengine::{LPolyFit, OracleReport, SumResult, Verdict};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::Command;

/// First 16 hex digits of SHA-256 over the canonical spec JSON.
pub fn spec_hash(spec: &SheafSpecJson) -> String {
    let text = serde_json::to_string(spec).expect("spec serializes");
    hex::encode(&Sha256::digest(text.as_bytes())[..8])
}

/// A sum with its exact value as `(exponent, coefficient)` pairs of `ζ_N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumSummary {
    pub exact: Vec<String>,
    pub order: u32,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub err: f64,
    pub count: u64,
}

impl From<&SumResult> for SumSummary {
    fn from(r: &SumResult) -> Self {
        SumSummary {
            exact: r.value.to_pairs_string(),
            order: r.value.order(),
            re: r.re,
            im: r.im,
            abs: r.abs,
            err: r.err,
            count: r.count,
        }
    }
}

/// Exact nontriviality of the transferred data next to the oracle verdict,
/// so that a disagreement can be classified.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SufficiencyCheck {
    pub oracle: OracleReport,
    pub exact_nontrivial: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub case: usize,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<SheafSpecJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<usize>,
    /// `None` when the Kummer-only hypothesis does not apply to the shape.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyp44: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyp45: Option<bool>,
    /// Whether the headline bound is asserted for this case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_name: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<Bound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sum: Option<SumSummary>,
    /// `bound - |S'|`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub checks: BTreeMap<&'static str, bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_report: Option<BoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complete_sum: Option<SumSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sufficiency: Option<SufficiencyCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lpoly: Option<LPolyFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transfer_laws: Option<TransferLawReport>,
}

impl Record {
    pub fn new(case: usize, label: String) -> Self {
        Record {
            case,
            label,
            spec: None,
            spec_hash: None,
            p: None,
            q: None,
            d: None,
            degrees: Vec::new(),
            hyp44: None,
            hyp45: None,
            hypothesis: None,
            bound_name: None,
            bound: None,
            sum: None,
            margin: None,
            checks: BTreeMap::new(),
            failures: Vec::new(),
            pass: true,
            bound_report: None,
            complete_sum: None,
            sufficiency: None,
            lpoly: None,
            transfer_laws: None,
        }
    }

    pub fn check(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let prev = self.checks.entry(name).or_insert(true);
        *prev &= ok;
        if !ok {
            self.failures.push(format!("{name}: {}", detail()));
            self.pass = false;
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checked: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub cases: u64,
    pub passes: u64,
    pub violations: u64,
    /// Cases whose headline hypothesis holds.
    pub hypothesis_holds: u64,
    /// Smallest margin over cases where the bound is asserted.
    pub worst_margin: Option<f64>,
    /// Cases with an asserted hypothesis where the triviality oracle found
    /// no evidence of nontriviality.
    pub oracle_trivial_evidence: u64,
    pub checks: BTreeMap<&'static str, Tally>,
}

impl Summary {
    pub fn of(records: &[Record]) -> Self {
        let mut checks: BTreeMap<&'static str, Tally> = BTreeMap::new();
        for r in records {
            for (&name, &ok) in &r.checks {
                let t = checks.entry(name).or_default();
                t.checked += 1;
                t.failed += u64::from(!ok);
            }
        }
        let passes = records.iter().filter(|r| r.pass).count() as u64;
        Summary {
            cases: records.len() as u64,
            passes,
            violations: records.len() as u64 - passes,
            hypothesis_holds: records.iter().filter(|r| r.hypothesis == Some(true)).count() as u64,
            worst_margin: records
                .iter()
                .filter(|r| r.hypothesis == Some(true))
                .filter_map(|r| r.margin)
                .reduce(f64::min),
            oracle_trivial_evidence: records
                .iter()
                .filter_map(|r| r.sufficiency.as_ref())
                .filter(|s| s.oracle.verdict != Verdict::Nontrivial)
                .count() as u64,
            checks,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<String>,
    pub seed: u64,
    pub estimated_evals: u64,
    pub summary: Summary,
    pub records: Vec<Record>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per record with the frozen column order [`CSV_COLUMNS`].
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_COLUMNS).expect("in-memory write");
        let opt = |x: Option<String>| x.unwrap_or_default();
        for r in &self.records {
            let degrees = r.degrees.iter().map(usize::to_string).collect::<Vec<_>>().join(";");
            w.write_record([
                r.case.to_string(),
                opt(r.spec_hash.clone()),
                opt(r.p.map(|x| x.to_string())),
                opt(r.q.map(|x| x.to_string())),
                opt(r.d.map(|x| x.to_string())),
                degrees,
                opt(r.hyp44.map(|x| x.to_string())),
                opt(r.hyp45.map(|x| x.to_string())),
                opt(r.hypothesis.map(|x| x.to_string())),
                opt(r.sum.as_ref().map(|s| s.abs.to_string())),
                opt(r.bound_name.map(str::to_string)),
                opt(r.bound.as_ref().map(|b| b.value.to_string())),
                opt(r.margin.map(|x| x.to_string())),
                r.pass.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

pub const CSV_COLUMNS: [&str; 14] = [
    "case",
    "spec_hash",
    "p",
    "q",
    "d",
    "degrees",
    "hyp44",
    "hyp45",
    "hypothesis",
    "abs_sum",
    "bound_name",
    "bound",
    "margin",
    "pass",
];
