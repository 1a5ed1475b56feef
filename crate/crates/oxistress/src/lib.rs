//! Free-radical / antioxidant attrition modeling toolkit.
//!
//! Radicals attrite a cell culture Lanchester-style: the survival count
//! obeys dc/dt = −α·r(t) with a linearly growing production dr/dt = k·t,
//! giving the closed forms r(t) = k·t²/2 + b and
//! c(t) = c0 − α·k·t³/6 − α·b·t. On top of those this crate provides:
//!
//! - [`model`]: closed forms, the effectiveness factor α = b/(a+b), and
//!   extinction-time root finding
//! - [`ode`]: fixed-step Euler/RK4 integration of the coupled system and
//!   deviation measurement against the closed forms
//! - [`sweep`]: one-parameter sensitivity sweeps with deterministic
//!   parallel evaluation
//! - [`fit`]: bounded least-squares parameter recovery (grid search +
//!   Nelder-Mead)
//! - [`organism`]: a per-minute apoptosis simulation of an individual
//!   following a daily activity schedule
//! - [`config`] / [`emit`]: the run-config format and CSV/plot emission
//!
//! See the crate `examples/` directory for one runnable example per
//! capability, and the `oxistress` binary for the batch CLI.

pub mod config;
pub mod emit;
pub mod error;
pub mod fit;
pub mod model;
pub mod ode;
pub mod organism;
pub mod plot;
pub mod sweep;

pub use config::{parse_config, render, ModeConfig, RunConfig};
pub use emit::{emit_outputs, RunOutcome};
pub use error::{Error, Result};
pub use model::{
    cell_survival, effectiveness, extinction_time, radical_level, survival_rate, CultureParams,
    Trajectory,
};
pub use ode::{derivatives, integrate, max_error_vs_analytic, IntegratorSpec, Method, State};
pub use organism::{
    positive_root, simulate_day, simulate_days, step_minute, ticks_to_threshold, Activity,
    MinuteRecord, OrganismConfig, OrganismState, Schedule, SimReport,
};
pub use sweep::{run_sweep, run_sweep_sequential, SweepParameter, SweepResult, SweepSpec};

/// Execute a parsed run configuration and return its results.
pub fn execute(cfg: &RunConfig) -> Result<RunOutcome> {
    match &cfg.mode {
        ModeConfig::Culture(run) => {
            let traj = Trajectory::from_closed_form(&run.params, run.t_end, run.dt)?;
            Ok(RunOutcome::Culture(traj))
        }
        ModeConfig::Sweep(spec) => Ok(RunOutcome::Sweep(run_sweep(spec)?)),
        ModeConfig::Organism(run) => Ok(RunOutcome::Organism(simulate_days(
            &run.config,
            &run.schedule,
            run.initial,
            run.days,
        )?)),
        ModeConfig::Fit(spec) => Ok(RunOutcome::Fit(fit::fit_parameters(spec)?)),
    }
}
