use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use charsum_cli::{execute, exit_code, plan, CliError, Command, ExperimentConfig, Report, RunOptions};
use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Both,
}

/// Exhaustive verification of incomplete character sums against their
/// bounds.
#[derive(Parser, Debug)]
#[command(name = "charsum", version)]
struct Cli {
    /// Defaults to the configuration's `command`.
    #[arg(value_enum)]
    command: Option<Command>,
    /// Experiment configuration file (JSON).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Built-in configuration.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write report.json / report.csv / timing.json here instead of stdout.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Summand-evaluation budget (default 10^7).
    #[arg(long, value_name = "N")]
    max_evals: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn write_outputs(cli: &Cli, report: &Report, seconds: f64) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Invalid(format!("cannot write output: {e}"));
    let json = matches!(cli.format, Format::Json | Format::Both);
    let csv = matches!(cli.format, Format::Csv | Format::Both);
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io)?;
            if json {
                std::fs::write(dir.join("report.json"), report.to_json()).map_err(io)?;
            }
            if csv {
                std::fs::write(dir.join("report.csv"), report.to_csv()).map_err(io)?;
            }
            let timing = serde_json::json!({ "seconds": seconds, "cases": report.summary.cases });
            std::fs::write(dir.join("timing.json"), format!("{timing:#}\n")).map_err(io)?;
        }
        None => {
            if json {
                print!("{}", report.to_json());
            }
            if csv {
                print!("{}", report.to_csv());
            }
        }
    }
    Ok(())
}

fn main_inner(cli: &Cli) -> Result<i32, CliError> {
    let config = ExperimentConfig::load(cli.config.as_deref(), cli.preset.as_deref())?;
    let opts = RunOptions {
        seed: cli.seed,
        max_evals: cli.max_evals,
    };
    let command = cli
        .command
        .or(config.command)
        .ok_or_else(|| CliError::Invalid("no command given and the configuration names none".into()))?;
    let start = Instant::now();
    let plan = plan(command, &config, &opts).inspect_err(|e| {
        if let CliError::Budget { estimate, .. } = e {
            eprintln!("estimated cost: {estimate} evaluations");
        }
    })?;
    eprintln!(
        "{} cases, estimated cost {} of {} evaluations",
        plan.cases(),
        plan.estimated_evals,
        plan.budget
    );
    let report = execute(&plan);
    let seconds = start.elapsed().as_secs_f64();
    write_outputs(cli, &report, seconds)?;
    let s = &report.summary;
    eprintln!(
        "cases {}, passes {}, violations {}, worst margin {}, {seconds:.2}s",
        s.cases,
        s.passes,
        s.violations,
        s.worst_margin.map_or("-".into(), |m| format!("{m:.6}"))
    );
    Ok(exit_code(&report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
