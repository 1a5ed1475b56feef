//! Fixed-step explicit integration of the coupled attrition system and
//! deviation measurement against the closed forms.

use crate::error::{Error, Result};
use crate::model::{cell_survival, radical_level, CultureParams, Trajectory};

/// Instantaneous culture state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub cells: f64,
    pub radicals: f64,
}

impl State {
    pub fn is_finite(&self) -> bool {
        self.cells.is_finite() && self.radicals.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Euler,
    Rk4,
}

/// Fixed-step integration plan.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorSpec {
    pub method: Method,
    pub step: f64,
    pub t0: f64,
    pub t_end: f64,
}

/// Runaway guard on the step count.
const MAX_STEPS: f64 = 1e8;

impl IntegratorSpec {
    pub fn new(method: Method, step: f64, t0: f64, t_end: f64) -> Result<Self> {
        let spec = IntegratorSpec {
            method,
            step,
            t0,
            t_end,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::Config(format!("step must be > 0, got {}", self.step)));
        }
        if !(self.t0 >= 0.0) || !(self.t_end > self.t0) {
            return Err(Error::Config(format!(
                "need t_end > t0 >= 0, got t0={}, t_end={}",
                self.t0, self.t_end
            )));
        }
        if (self.t_end - self.t0) / self.step > MAX_STEPS {
            return Err(Error::Config(format!(
                "step {} over [{}, {}] exceeds the 1e8-step guard",
                self.step, self.t0, self.t_end
            )));
        }
        Ok(())
    }
}

/// Right-hand side of the system: dc/dt = −α·r, dr/dt = k·t.
pub fn derivatives(t: f64, s: State, p: &CultureParams) -> Result<(f64, f64)> {
    if !s.is_finite() {
        return Err(Error::Domain(format!(
            "non-finite state (c={}, r={})",
            s.cells, s.radicals
        )));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be >= 0 and finite, got {t}")));
    }
    Ok((-p.alpha * s.radicals, p.k * t))
}

fn rhs(t: f64, s: State, p: &CultureParams) -> (f64, f64) {
    (-p.alpha * s.radicals, p.k * t)
}

fn euler_step(t: f64, s: State, h: f64, p: &CultureParams) -> State {
    let (dc, dr) = rhs(t, s, p);
    State {
        cells: s.cells + h * dc,
        radicals: s.radicals + h * dr,
    }
}

fn rk4_step(t: f64, s: State, h: f64, p: &CultureParams) -> State {
    let (k1c, k1r) = rhs(t, s, p);
    let mid1 = State {
        cells: s.cells + 0.5 * h * k1c,
        radicals: s.radicals + 0.5 * h * k1r,
    };
    let (k2c, k2r) = rhs(t + 0.5 * h, mid1, p);
    let mid2 = State {
        cells: s.cells + 0.5 * h * k2c,
        radicals: s.radicals + 0.5 * h * k2r,
    };
    let (k3c, k3r) = rhs(t + 0.5 * h, mid2, p);
    let end = State {
        cells: s.cells + h * k3c,
        radicals: s.radicals + h * k3r,
    };
    let (k4c, k4r) = rhs(t + h, end, p);
    State {
        cells: s.cells + h / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c),
        radicals: s.radicals + h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r),
    }
}

/// Integrate from the model's initial conditions (c0, b) over the spec's window.
///
/// Samples land at t0, t0+h, …; the final step is shortened so the last
/// sample sits exactly on t_end.
pub fn integrate(p: &CultureParams, spec: &IntegratorSpec) -> Result<Trajectory> {
    spec.validate()?;
    p.validate()?;

    let mut state = State {
        cells: p.c0,
        radicals: p.b,
    };
    let span = spec.t_end - spec.t0;
    let n_full = (span / spec.step).floor() as usize;
    let eps = 1e-12 * spec.t_end.max(1.0);

    let mut times = Vec::with_capacity(n_full + 2);
    let mut cells = Vec::with_capacity(n_full + 2);
    let mut radicals = Vec::with_capacity(n_full + 2);

    let mut push = |t: f64, s: &State| {
        times.push(t);
        cells.push(s.cells);
        radicals.push(s.radicals);
    };
    push(spec.t0, &state);

    let mut t = spec.t0;
    for i in 0..n_full {
        state = match spec.method {
            Method::Euler => euler_step(t, state, spec.step, p),
            Method::Rk4 => rk4_step(t, state, spec.step, p),
        };
        t = spec.t0 + (i + 1) as f64 * spec.step;
        if !state.is_finite() {
            return Err(Error::NumericBlowUp { step: i + 1 });
        }
        if t < spec.t_end - eps {
            push(t, &state);
        }
    }
    // Shortened final step onto t_end.
    if t < spec.t_end - eps {
        let h = spec.t_end - t;
        state = match spec.method {
            Method::Euler => euler_step(t, state, h, p),
            Method::Rk4 => rk4_step(t, state, h, p),
        };
        if !state.is_finite() {
            return Err(Error::NumericBlowUp { step: n_full + 1 });
        }
    }
    push(spec.t_end, &state);

    Trajectory::new(times, cells, radicals)
}

/// Componentwise max absolute deviation of a trajectory from the closed forms.
pub fn max_error_vs_analytic(traj: &Trajectory, p: &CultureParams) -> Result<(f64, f64)> {
    if traj.is_empty()
        || traj.times.len() != traj.cells.len()
        || traj.times.len() != traj.radicals.len()
    {
        return Err(Error::Domain("trajectory arrays are empty or mismatched".into()));
    }
    let mut max_c = 0.0_f64;
    let mut max_r = 0.0_f64;
    for i in 0..traj.len() {
        let t = traj.times[i];
        max_c = max_c.max((traj.cells[i] - cell_survival(t, p)?).abs());
        max_r = max_r.max((traj.radicals[i] - radical_level(t, p)?).abs());
    }
    Ok((max_c, max_r))
}
