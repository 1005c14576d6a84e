use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ncdp::double_poisson::NondegMode;
use ncdp::dsl::{parse, run, Options};

#[derive(Parser)]
#[command(name = "ncdp", version, about = "Exact checks for shifted bisymplectic and double Poisson structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strict,
    Fiberwise,
}

#[derive(Subcommand)]
enum Command {
    /// Run every directive in a .ncdp file.
    Check {
        file: PathBuf,
        /// Drop form components and bracket arities above this weight.
        #[arg(long, env = "NCDP_MAX_WEIGHT")]
        max_weight: Option<usize>,
        #[arg(long, value_enum, env = "NCDP_MODE", default_value = "strict")]
        mode: Mode,
        /// Emit the JSON report instead of the human one.
        #[arg(long, env = "NCDP_JSON")]
        json: bool,
        /// Omit per-directive timings so reports are byte-identical across runs.
        #[arg(long, env = "NCDP_NO_TIMING")]
        no_timing: bool,
    },
    /// Print the canonical form of a .ncdp file.
    Fmt { file: PathBuf },
}

fn read(file: &PathBuf) -> Result<String, ExitCode> {
    std::fs::read_to_string(file).map_err(|e| {
        eprintln!("ncdp: cannot read {}: {e}", file.display());
        ExitCode::from(2)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { file, max_weight, mode, json, no_timing } => {
            let src = match read(&file) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let parsed = match parse(&src) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("{}:{e}", file.display());
                    return ExitCode::from(2);
                }
            };
            let mode = match mode {
                Mode::Strict => NondegMode::Strict,
                Mode::Fiberwise => NondegMode::Fiberwise,
            };
            let report = run(&parsed, &Options { max_weight, mode, timing: !no_timing });
            print!("{}", if json { report.to_json() } else { report.to_human() });
            if report.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Fmt { file } => {
            let src = match read(&file) {
                Ok(s) => s,
                Err(code) => return code,
            };
            match parse(&src) {
                Ok(f) => {
                    print!("{}", ncdp::dsl::to_source(&f));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{}:{e}", file.display());
                    ExitCode::from(2)
                }
            }
        }
    }
}
