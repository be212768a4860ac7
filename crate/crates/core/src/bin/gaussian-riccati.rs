use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gaussian_riccati::cli::{self, CliError, Scenario, ScanGrid};

#[derive(Parser)]
#[command(version, about = "Gaussian wave packets via the complex Riccati equation")]
struct Args {
    /// Print the scenario file schema and exit.
    #[arg(long)]
    schema: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario; writes timeseries.csv and report.json.
    Run {
        file: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Classify width branches over a parameter grid; writes scan.csv.
    Scan {
        file: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Compare a log-NLSE scenario with its Caldirola-Kanai and expanding
    /// images; writes compare.csv and compare.json.
    Compare {
        file: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn execute(command: Command) -> Result<Vec<PathBuf>, CliError> {
    match command {
        Command::Run { file, out } => {
            let scenario = Scenario::from_toml(&read(&file)?)?;
            cli::write_run(&out, &cli::run(&scenario)?)
        }
        Command::Scan { file, out } => {
            let grid = ScanGrid::from_toml(&read(&file)?)?;
            cli::write_scan(&out, &cli::scan(&grid)?)
        }
        Command::Compare { file, out } => {
            let scenario = Scenario::from_toml(&read(&file)?)?;
            cli::write_compare(&out, &cli::compare(&scenario)?)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.schema {
        print!("{}", cli::SCHEMA);
        return ExitCode::SUCCESS;
    }
    let Some(command) = args.command else {
        eprintln!("error: a subcommand is required (run, scan, compare); see --help");
        return ExitCode::from(2);
    };
    match execute(command) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
