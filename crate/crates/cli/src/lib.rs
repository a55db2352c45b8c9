//! Experiment runner: builds the cases of a configuration, checks each one
//! against the core library and assembles a deterministic report.

pub mod cases;
pub mod config;
pub mod presets;
pub mod report;
mod verify;

use charsum_core::grouptran::{verify_transfer_laws, FiniteGroup};
use charsum_core::sheaf::{SheafSpec, SheafSpecJson};
use rayon::prelude::*;
use thiserror::Error;

pub use config::{Command, ExperimentConfig};
pub use report::{Record, Report, Summary, CSV_COLUMNS};

/// Default character-evaluation budget.
pub const DEFAULT_MAX_EVALS: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("estimated {estimate} evaluations exceed the budget of {budget} (raise --max-evals)")]
    Budget { estimate: u64, budget: u64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub seed: u64,
    /// Overrides the configuration's budget.
    pub max_evals: Option<u64>,
}

enum Work {
    Specs(Vec<(String, SheafSpec)>),
    Groups(Vec<(FiniteGroup, usize)>),
}

/// Validated cases with their cost estimate; nothing has been summed yet.
pub struct Plan {
    command: Command,
    config: ExperimentConfig,
    seed: u64,
    work: Work,
    pub estimated_evals: u64,
    pub budget: u64,
}

impl Plan {
    pub fn cases(&self) -> usize {
        match &self.work {
            Work::Specs(v) => v.len(),
            Work::Groups(v) => v.len(),
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

/// Expands and validates the configuration and estimates its cost; fails
/// with [`CliError::Budget`] before any sum is evaluated.
pub fn plan(command: Command, config: &ExperimentConfig, opts: &RunOptions) -> Result<Plan, CliError> {
    let budget = opts.max_evals.or(config.max_evals).unwrap_or(DEFAULT_MAX_EVALS);
    let work = if command == Command::Group {
        let gc = config
            .groups
            .as_ref()
            .ok_or_else(|| invalid("the group command needs a `groups` section"))?;
        let groups = gc
            .descriptors
            .iter()
            .map(|d| FiniteGroup::parse_descriptor(d).map(|g| (g, gc.max_index)).map_err(invalid))
            .collect::<Result<Vec<_>, _>>()?;
        Work::Groups(groups)
    } else {
        let mut inputs: Vec<(String, SheafSpecJson)> = config
            .listed_specs()
            .into_iter()
            .enumerate()
            .map(|(i, s)| (format!("spec {i}"), s))
            .collect();
        if let Some(sw) = &config.sweep {
            inputs.extend(cases::expand(sw, opts.seed)?.into_iter().map(|c| (c.label, c.spec)));
        }
        let specs = inputs
            .into_par_iter()
            .enumerate()
            .map(|(i, (label, j))| {
                SheafSpec::from_json(&j)
                    .map(|s| (label, s))
                    .map_err(|e| CliError::Invalid(format!("case {i}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Work::Specs(specs)
    };
    let estimated_evals = match &work {
        Work::Specs(v) => v
            .par_iter()
            .map(|(_, s)| verify::estimate(command, config, s))
            .reduce(|| 0, u64::saturating_add),
        Work::Groups(_) => 0,
    };
    if estimated_evals > budget {
        return Err(CliError::Budget {
            estimate: estimated_evals,
            budget,
        });
    }
    Ok(Plan {
        command,
        config: config.clone(),
        seed: opts.seed,
        work,
        estimated_evals,
        budget,
    })
}

/// Runs a plan. Records are computed in parallel and assembled in case
/// order, so the report depends only on `(config, seed)`.
pub fn execute(plan: &Plan) -> Report {
    let records: Vec<Record> = match &plan.work {
        Work::Specs(v) => v
            .par_iter()
            .enumerate()
            .map(|(i, (label, s))| verify::evaluate(plan.command, &plan.config, i, label, s))
            .collect(),
        Work::Groups(v) => {
            let mut jobs = Vec::new();
            for (g, max_index) in v {
                for h in g.subgroups() {
                    if h.index(g) <= *max_index {
                        jobs.push((g, h));
                    }
                }
            }
            jobs.par_iter()
                .enumerate()
                .map(|(i, (g, h))| {
                    let r = verify_transfer_laws(g, h, plan.seed);
                    let mut rec = Record::new(i, format!("{} / index {}", g.name(), h.index(g)));
                    rec.check("transfer_laws", r.passed(), || r.failures.join("; "));
                    rec.transfer_laws = Some(r);
                    rec
                })
                .collect()
        }
    };
    Report {
        tool: "charsum",
        version: env!("CARGO_PKG_VERSION"),
        command: plan.command,
        config: plan.config.name.clone(),
        seed: plan.seed,
        estimated_evals: plan.estimated_evals,
        summary: Summary::of(&records),
        records,
    }
}

/// [`plan`] then [`execute`].
pub fn run(command: Command, config: &ExperimentConfig, opts: &RunOptions) -> Result<Report, CliError> {
    Ok(execute(&plan(command, config, opts)?))
}

/// 0 when every check passed, 1 when some record failed.
pub fn exit_code(report: &Report) -> i32 {
    i32::from(report.summary.violations > 0)
}

