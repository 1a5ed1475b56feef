//! One-parameter sensitivity sweeps over the culture model.
//!
//! Each sweep value is substituted into a base parameter set, the
//! closed-form trajectory is sampled on a shared grid, and the extinction
//! time is located per value. Points are independent; parallel and
//! sequential evaluation produce identical results because entries are
//! keyed by input index.

use rayon::prelude::*;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{extinction_time, CultureParams, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Alpha,
    K,
    B,
    A,
}

impl SweepParameter {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParameter::Alpha => "alpha",
            SweepParameter::K => "k",
            SweepParameter::B => "b",
            SweepParameter::A => "a",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(SweepParameter::Alpha),
            "k" => Ok(SweepParameter::K),
            "b" => Ok(SweepParameter::B),
            "a" => Ok(SweepParameter::A),
            other => Err(Error::Config(format!(
                "unknown sweep parameter '{other}' (expected alpha, k, b, or a)"
            ))),
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    pub base: CultureParams,
    pub t_end: f64,
    pub dt: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Config("sweep needs at least one value".into()));
        }
        if self.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("sweep values must be strictly increasing".into()));
        }
        if !(self.dt > 0.0) || !(self.t_end > 0.0) {
            return Err(Error::Config(format!(
                "invalid sampling window: t_end={}, dt={}",
                self.t_end, self.dt
            )));
        }
        self.base.validate()?;
        for &v in &self.values {
            self.substitute(v)?;
        }
        Ok(())
    }

    /// Substitute one sweep value into the base parameter set.
    ///
    /// Substituting b recomputes alpha only when the base was built from a
    /// composition (a present); a direct alpha is kept as given.
    pub fn substitute(&self, value: f64) -> Result<CultureParams> {
        let base = &self.base;
        let named = |e: Error| match e {
            Error::Config(msg) => Error::Config(format!(
                "sweep value {}={value} is invalid: {msg}",
                self.parameter
            )),
            Error::Domain(msg) => Error::Config(format!(
                "sweep value {}={value} is invalid: {msg}",
                self.parameter
            )),
            other => other,
        };
        match self.parameter {
            SweepParameter::Alpha => {
                CultureParams::with_alpha(value, base.b, base.k, base.c0).map_err(named)
            }
            SweepParameter::K => match base.a {
                Some(a) => CultureParams::from_composition(a, base.b, value, base.c0).map_err(named),
                None => CultureParams::with_alpha(base.alpha, base.b, value, base.c0).map_err(named),
            },
            SweepParameter::B => match base.a {
                Some(a) => CultureParams::from_composition(a, value, base.k, base.c0).map_err(named),
                None => CultureParams::with_alpha(base.alpha, value, base.k, base.c0).map_err(named),
            },
            SweepParameter::A => {
                CultureParams::from_composition(value, base.b, base.k, base.c0).map_err(named)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub value: f64,
    pub extinction_time: Option<f64>,
    pub trajectory: Trajectory,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub parameter: SweepParameter,
    pub entries: Vec<SweepEntry>,
}

fn evaluate_point(spec: &SweepSpec, value: f64) -> Result<SweepEntry> {
    let params = spec.substitute(value)?;
    let trajectory = Trajectory::from_closed_form(&params, spec.t_end, spec.dt)?;
    let extinction = match extinction_time(&params) {
        Ok(t) => Some(t),
        Err(Error::NoExtinction(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(SweepEntry {
        value,
        extinction_time: extinction,
        trajectory,
    })
}

/// Run the sweep, evaluating points in parallel; entry order follows
/// `spec.values` regardless of completion order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let entries = spec
        .values
        .par_iter()
        .map(|&v| evaluate_point(spec, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        parameter: spec.parameter,
        entries,
    })
}

/// Sequential evaluation of the same sweep, for determinism cross-checks.
pub fn run_sweep_sequential(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let entries = spec
        .values
        .iter()
        .map(|&v| evaluate_point(spec, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        parameter: spec.parameter,
        entries,
    })
}
