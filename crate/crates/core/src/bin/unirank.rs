use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use unirank::app;
use unirank::config::{Overrides, RunConfig};
use unirank::corpus::TimeWindow;
use unirank::indicators::Q1Policy;

#[derive(Parser)]
#[command(
    name = "unirank",
    version,
    about = "IFQ2A field rankings and ranking concordance"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration (TOML)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Publication window START:END; repeat for several windows
    #[arg(long = "window", global = true)]
    windows: Vec<TimeWindow>,

    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true)]
    min_n: Option<usize>,

    /// any-relevant | best-all
    #[arg(long, global = true)]
    q1_policy: Option<Q1Policy>,

    /// Fail on a missing journal quartile instead of counting it as not Q1
    #[arg(long, global = true)]
    strict_quartiles: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Load and check every input, report counts
    Validate,
    /// Write ranking, quadrant and indicator files per field and window
    Rank,
    /// Compare ranking systems field by field
    Compare,
    /// Write quadrant scatter files only
    Quadrant,
}

fn run(cli: Cli) -> unirank::Result<bool> {
    let Some(path) = cli.config else {
        return Err(unirank::Error::Config("--config is required".into()));
    };
    let mut cfg = RunConfig::load(&path)?;
    cfg.apply(&Overrides {
        windows: cli.windows,
        out_dir: cli.out,
        min_n: cli.min_n,
        q1_policy: cli.q1_policy,
        strict_quartiles: cli.strict_quartiles,
    });

    match cli.command {
        Command::Validate => {
            let report = app::cmd_validate(&cfg)?;
            print!("{}", report.render());
            Ok(report.is_ok())
        }
        Command::Rank | Command::Quadrant => {
            let report = match cli.command {
                Command::Rank => app::cmd_rank(&cfg)?,
                _ => app::cmd_quadrant(&cfg)?,
            };
            for w in &report.empty_windows {
                eprintln!("warning: window {w} contains no publications");
            }
            for s in &report.skipped {
                eprintln!("notice: skipped empty field {s}");
            }
            if report.missing_quartiles > 0 {
                eprintln!(
                    "warning: {} papers lacked a needed quartile and were counted as not Q1",
                    report.missing_quartiles
                );
            }
            for p in &report.written {
                println!("{}", p.display());
            }
            Ok(true)
        }
        Command::Compare => {
            let report = app::cmd_compare(&cfg)?;
            for r in &report.reports {
                for p in r.pairs.iter().filter(|p| !p.missing_national.is_empty()) {
                    eprintln!(
                        "warning: {} -> {}: no national rank for {}",
                        p.source_field,
                        p.target_field,
                        p.missing_national.join(", ")
                    );
                }
            }
            for p in &report.written {
                println!("{}", p.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
