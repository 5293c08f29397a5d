use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use shehu_cli::commands::{cmd_invert, cmd_selftest, cmd_solve, cmd_transform, TransformMode};
use shehu_cli::config::ProblemConfig;
use shehu_cli::CliError;
use shehu_core::inverse::InversionMethod;

/// Two-parameter Laplace-type transform: images, inverses and worked solvers.
///
/// Exit codes: 0 ok, 1 I/O or failed self-test, 2 malformed input,
/// 3 divergent transform, 4 outside the grammar, 5 improper rational image,
/// 6 solver failure.
#[derive(Parser)]
#[command(name = "shehu", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Symbolic,
    Numeric,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Dehoog,
    Talbot,
    Stehfest,
    Residues,
}

#[derive(Subcommand)]
enum Command {
    /// Image of a function of t, and its value at (s, u).
    Transform {
        expr: String,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        u: f64,
        #[arg(long, value_enum, default_value = "symbolic")]
        mode: Mode,
    },
    /// Function of t recovered from an image in s and u.
    Invert {
        image: String,
        #[arg(long, default_value_t = 0.0)]
        t_min: f64,
        #[arg(long, default_value_t = 5.0)]
        t_max: f64,
        #[arg(long, default_value_t = 6)]
        t_steps: usize,
        #[arg(long, value_enum, default_value = "dehoog")]
        method: Method,
    },
    /// Solve the problem described by a JSON config file.
    Solve { config: PathBuf },
    /// Run the golden-value suite.
    Selftest,
}

fn run(cli: Cli, out: &mut impl Write) -> Result<bool, CliError> {
    match cli.command {
        Command::Transform { expr, s, u, mode } => {
            let mode = match mode {
                Mode::Symbolic => TransformMode::Symbolic,
                Mode::Numeric => TransformMode::Numeric,
            };
            cmd_transform(&expr, s, u, mode, out)?;
        }
        Command::Invert {
            image,
            t_min,
            t_max,
            t_steps,
            method,
        } => {
            if !(t_min >= 0.0 && t_max >= t_min && t_steps >= 1) {
                return Err(CliError::Parse(format!(
                    "bad sample grid [{t_min}, {t_max}] with {t_steps} steps"
                )));
            }
            let grid: Vec<f64> = (0..t_steps)
                .map(|i| {
                    if t_steps == 1 {
                        t_min
                    } else {
                        t_min + (t_max - t_min) * i as f64 / (t_steps - 1) as f64
                    }
                })
                .collect();
            let method = match method {
                Method::Dehoog => InversionMethod::DeHoog,
                Method::Talbot => InversionMethod::Talbot,
                Method::Stehfest => InversionMethod::Stehfest,
                Method::Residues => InversionMethod::PartialFractions,
            };
            cmd_invert(&image, &grid, method, out)?;
        }
        Command::Solve { config } => {
            cmd_solve(&ProblemConfig::load(&config)?, out)?;
        }
        Command::Selftest => return cmd_selftest(out),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
