use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use waveguide_entanglement::scenario::{
    find_extrema, loss_db_per_cm_to_rate, presets, rate_to_loss_db_per_cm, read_config, read_csv,
    run_sweep, time_from_length, write_csv, write_csv_to,
};
use waveguide_entanglement::{Error, Result};

/// Entanglement of light in coupled lossy waveguides.
#[derive(Parser)]
#[command(name = "wgent", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a config file and emit CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output file; CSV goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Local maxima and zero intervals of a sweep CSV, as JSON.
    Extrema {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// List the material presets.
    Presets,
    /// Convert between propagation loss in dB/cm and a decay rate in 1/s.
    #[command(group(ArgGroup::new("loss").required(true).args(["db_per_cm", "rate"])))]
    ConvertLoss {
        #[arg(long)]
        db_per_cm: Option<f64>,
        /// Decay rate in 1/s, converted back to dB/cm.
        #[arg(long)]
        rate: Option<f64>,
        /// Propagation speed in cm/s.
        #[arg(long)]
        speed: f64,
    },
    /// Dimensionless time J n l / c for a guide of given length.
    LengthToTime {
        /// Length in cm.
        #[arg(long)]
        length: f64,
        #[arg(long)]
        index: f64,
        /// Coupling rate J in 1/s.
        #[arg(long)]
        coupling: f64,
    },
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out } => {
            let cfg = read_config(&config)?;
            let result = run_sweep(&cfg)?;
            match out {
                Some(path) => write_csv(&result, path)?,
                None => {
                    let mut buf = Vec::new();
                    write_csv_to(&result, &mut buf).expect("CSV into memory");
                    std::io::stdout()
                        .lock()
                        .write_all(&buf)
                        .map_err(stdout_err)?;
                }
            }
            if let Some(gap) = result.max_method_gap() {
                eprintln!("max |analytic - numeric| = {gap:e}");
            }
            result.check_agreement()
        }
        Command::Extrema { input } => {
            let extrema = find_extrema(&read_csv(&input)?);
            let json = serde_json::to_string_pretty(&extrema).expect("extrema serialise");
            writeln!(std::io::stdout(), "{json}").map_err(stdout_err)
        }
        Command::Presets => {
            let mut out = std::io::stdout().lock();
            writeln!(
                out,
                "{:<16} {:>10} {:>10} {:>8} {:>6}  J range",
                "name", "J [1/s]", "gamma [1/s]", "gamma/J", "J/gamma"
            )
            .map_err(stdout_err)?;
            for p in presets() {
                let range = p
                    .coupling_range
                    .map_or(String::new(), |(lo, hi)| format!("{lo:.3e} .. {hi:.3e}"));
                writeln!(
                    out,
                    "{:<16} {:>10.3e} {:>10.3e} {:>8.4} {:>6.1}  {range}",
                    p.name,
                    p.coupling,
                    p.gamma,
                    p.ratio,
                    1.0 / p.ratio
                )
                .map_err(stdout_err)?;
            }
            Ok(())
        }
        Command::ConvertLoss {
            db_per_cm,
            rate,
            speed,
        } => {
            let line = match (db_per_cm, rate) {
                (Some(db), _) => format!("{:e} 1/s", loss_db_per_cm_to_rate(db, speed)?),
                (None, Some(g)) => format!("{:e} dB/cm", rate_to_loss_db_per_cm(g, speed)?),
                (None, None) => unreachable!("clap requires one of the two"),
            };
            writeln!(std::io::stdout(), "{line}").map_err(stdout_err)
        }
        Command::LengthToTime {
            length,
            index,
            coupling,
        } => {
            if !(length >= 0.0 && index > 0.0 && coupling > 0.0) {
                return Err(Error::Domain(
                    "length must be >= 0; index and coupling > 0".into(),
                ));
            }
            let tau = time_from_length(length, index, coupling);
            writeln!(std::io::stdout(), "{tau:e}").map_err(stdout_err)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
