//! Thin command line over the library: run scenario files, render 2D
//! membership plots, and run the bundled demos. Set `DESIR_LOG` for
//! per-query progress on stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use desir::scenario::{self, Scenario, ScenarioError};

#[derive(Parser)]
#[command(
    name = "desir",
    about = "Inference engine for sets of desirable gambles under pluggable closure operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario file and emit a report.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Override the scenario's tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Override the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Rasterize the scenario's set over a binary space into an SVG.
    Plot {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Grid resolution per axis.
        #[arg(long, default_value_t = 300)]
        resolution: usize,
        /// Comma-separated gamble names to mark on the plot.
        #[arg(long)]
        mark: Option<String>,
    },
    /// Run a bundled end-to-end fixture and print its comparison table.
    Demo { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let verbose = std::env::var("DESIR_LOG").map(|v| !v.is_empty()).unwrap_or(false);
    match dispatch(cli, verbose) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("desir: {err}");
            match err {
                ScenarioError::Schema(_) => ExitCode::from(2),
                ScenarioError::Numerical(_) => ExitCode::from(3),
                ScenarioError::Io(_) => ExitCode::from(2),
            }
        }
    }
}

fn dispatch(cli: Cli, verbose: bool) -> Result<ExitCode, ScenarioError> {
    match cli.command {
        Command::Run {
            scenario,
            out,
            format,
            tol,
            seed,
        } => {
            let text = std::fs::read_to_string(&scenario)?;
            let parsed = Scenario::from_json(&text)?;
            let report = scenario::run(&parsed, tol, seed, verbose)?;
            let rendered = match format {
                Format::Json => scenario::report_to_json(&report)?,
                Format::Csv => scenario::report_to_csv(&report)?,
            };
            match out {
                Some(path) => std::fs::write(path, rendered)?,
                None => print!("{rendered}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Plot {
            scenario,
            out,
            resolution,
            mark,
        } => {
            let text = std::fs::read_to_string(&scenario)?;
            let parsed = Scenario::from_json(&text)?;
            // build the set only; queries are not executed when plotting
            let probe = Scenario {
                queries: Vec::new(),
                ..parsed
            };
            let report_ctx = scenario::build_for_plot(&probe)?;
            let marks = match mark {
                None => Vec::new(),
                Some(list) => list
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|name| {
                        report_ctx
                            .1
                            .get(name)
                            .cloned()
                            .map(|g| (name.to_string(), g))
                            .ok_or_else(|| {
                                ScenarioError::Schema(format!("unknown mark gamble `{name}`"))
                            })
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            };
            let svg = desir::plot::render_membership_svg(&report_ctx.0, resolution, &marks)
                .map_err(|e| ScenarioError::Schema(e.to_string()))?;
            std::fs::write(out, svg)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Demo { name } => {
            let report = desir::demo::run_demo(&name).map_err(ScenarioError::Schema)?;
            print!("{}", report.render());
            Ok(if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
    }
}
