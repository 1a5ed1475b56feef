//! Batch CLI over the oxistress library.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 numeric failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use oxistress::{emit_outputs, execute, parse_config, Error, ModeConfig, RunConfig};

#[derive(Parser)]
#[command(name = "oxistress", version, about = "Free-radical / antioxidant attrition simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config's [output] dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write plot-data CSVs and PNG charts.
    #[arg(long)]
    emit_plot: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form culture trajectory (survival and radical curves).
    Culture(RunArgs),
    /// One-parameter sensitivity sweep with extinction-time summary.
    Sweep(RunArgs),
    /// Per-minute daily apoptosis simulation.
    Organism(RunArgs),
    /// Least-squares parameter recovery from observed survival data.
    Fit(RunArgs),
}

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERIC: u8 = 2;

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::Parse { .. } | Error::Io { .. } => EXIT_CONFIG,
        Error::Domain(_)
        | Error::NoExtinction(_)
        | Error::NumericBlowUp { .. }
        | Error::EndOfDay(_)
        | Error::Internal(_) => EXIT_NUMERIC,
    }
}

fn run(expected_mode: &str, args: &RunArgs) -> Result<(), (u8, String)> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| (EXIT_CONFIG, format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg: RunConfig =
        parse_config(&text).map_err(|e| (exit_code_for(&e), e.to_string()))?;

    if cfg.mode.name() != expected_mode {
        return Err((
            EXIT_CONFIG,
            format!(
                "config {} is a '{}' run, but the '{expected_mode}' subcommand was invoked",
                args.config.display(),
                cfg.mode.name()
            ),
        ));
    }
    if let Some(out) = &args.out {
        cfg.out_dir = Some(out.clone());
    }
    if args.emit_plot {
        cfg.emit_plot = true;
    }
    let out_dir = cfg
        .out_dir
        .clone()
        .ok_or((EXIT_CONFIG, "no output directory: pass --out or set [output] dir".to_string()))?;

    let outcome = execute(&cfg).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let written =
        emit_outputs(&outcome, &cfg, &out_dir).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    for path in written {
        println!("wrote {}", path.display());
    }

    // run summaries worth surfacing on stdout
    match (&outcome, &cfg.mode) {
        (oxistress::RunOutcome::Sweep(result), _) => {
            for entry in &result.entries {
                match entry.extinction_time {
                    Some(t) => println!("{}={}: extinction at t = {t:.4}", result.parameter, entry.value),
                    None => println!("{}={}: no extinction", result.parameter, entry.value),
                }
            }
        }
        (oxistress::RunOutcome::Organism(reports), _) => {
            for (i, r) in reports.iter().enumerate() {
                println!(
                    "day {}: total dead = {}, mean per minute = {:.1}",
                    i + 1,
                    r.total_dead,
                    r.mean_dead_per_minute
                );
                if let Some(tick) = r.threshold_tick {
                    println!("day {}: episode threshold reached at minute {tick}", i + 1);
                }
            }
        }
        (oxistress::RunOutcome::Fit(fit), ModeConfig::Fit(_)) => {
            println!(
                "fit: alpha = {:.6}, k = {:.6}, b = {:.6}, residual = {:e} ({} iterations)",
                fit.alpha, fit.k, fit.b, fit.residual, fit.iterations
            );
            if fit.flatness_warning {
                eprintln!("warning: flat data, alpha pinned at its lower bound");
            }
        }
        _ => {}
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match &cli.command {
        Command::Culture(a) => ("culture", a),
        Command::Sweep(a) => ("sweep", a),
        Command::Organism(a) => ("organism", a),
        Command::Fit(a) => ("fit", a),
    };
    match run(mode, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
