//! One-directional numeric evidence of geometric nontriviality.

use serde::Serialize;

use super::{complete_sum, complete_sum_pullback};
use crate::error::Result;
use crate::sheaf::SheafSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Nontrivial,
    TrivialEvidence,
}

/// Which data on `X_1` the complete sums are taken of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleTarget {
    Direct,
    Pullback,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub verdict: Verdict,
    /// `(m, |S_m|, point count)` for each degree tried.
    pub sums: Vec<(u32, f64, u64)>,
}

/// NONTRIVIAL as soon as `|S_m| < #X_1(F_{Q^m}) - 1/2` for some `m ≤ m_max`.
pub fn triviality_oracle(s: &SheafSpec, target: OracleTarget, m_max: u32) -> Result<OracleReport> {
    let mut sums = Vec::new();
    for m in 1..=m_max {
        let r = match target {
            OracleTarget::Direct => complete_sum(s, m)?,
            OracleTarget::Pullback => complete_sum_pullback(s, m)?,
        };
        sums.push((m, r.abs, r.count));
        if r.abs + r.err < r.count as f64 - 0.5 {
            return Ok(OracleReport {
                verdict: Verdict::Nontrivial,
                sums,
            });
        }
    }
    Ok(OracleReport {
        verdict: Verdict::TrivialEvidence,
        sums,
    })
}
