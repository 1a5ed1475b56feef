//! Least-squares recovery of culture parameters from observed survival data.
//!
//! Coarse grid search over the bounds brackets the basin, then a bounded
//! Nelder-Mead simplex refines it. The objective is the sum of squared
//! residuals between the survival cubic and the observations; c0 is pinned
//! to the observation at t = 0.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::CultureParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitParam {
    Alpha,
    K,
    B,
}

impl FitParam {
    pub fn as_str(&self) -> &'static str {
        match self {
            FitParam::Alpha => "alpha",
            FitParam::K => "k",
            FitParam::B => "b",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(FitParam::Alpha),
            "k" => Ok(FitParam::K),
            "b" => Ok(FitParam::B),
            other => Err(Error::Config(format!(
                "unknown fit parameter '{other}' (expected alpha, k, or b)"
            ))),
        }
    }
}

impl fmt::Display for FitParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitSpec {
    /// (time, surviving-cell count) pairs, times strictly increasing,
    /// first observation at t = 0 (fixes c0).
    pub observed: Vec<(f64, f64)>,
    /// Parameters to estimate.
    pub free: Vec<FitParam>,
    /// Search bounds, parallel to `free`.
    pub bounds: Vec<(f64, f64)>,
    /// Fixed value for alpha when it is not free.
    pub fixed_alpha: Option<f64>,
    pub fixed_k: Option<f64>,
    pub fixed_b: Option<f64>,
}

/// Grid resolution per free dimension before simplex refinement.
const GRID_POINTS: usize = 25;
/// Simplex termination: relative objective spread.
const SPREAD_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 500;

impl FitSpec {
    pub fn validate(&self) -> Result<()> {
        if self.observed.len() < 3 {
            return Err(Error::Config(format!(
                "need at least 3 observations, got {}",
                self.observed.len()
            )));
        }
        if self.observed.len() < self.free.len() + 1 {
            return Err(Error::Config(format!(
                "need at least {} observations for {} free parameters",
                self.free.len() + 1,
                self.free.len()
            )));
        }
        if self.observed.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Config("observation times must be strictly increasing".into()));
        }
        if self.observed[0].0 != 0.0 {
            return Err(Error::Config("first observation must be at t = 0 (it fixes c0)".into()));
        }
        if !(self.observed[0].1 > 0.0) {
            return Err(Error::Config("observation at t = 0 must be positive (it is c0)".into()));
        }
        if self.free.is_empty() {
            return Err(Error::Config("at least one parameter must be free".into()));
        }
        if self.bounds.len() != self.free.len() {
            return Err(Error::Config(format!(
                "{} bounds for {} free parameters",
                self.bounds.len(),
                self.free.len()
            )));
        }
        for (p, &(lo, hi)) in self.free.iter().zip(&self.bounds) {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::Config(format!("bad bounds for {p}: [{lo}, {hi}]")));
            }
        }
        for p in [FitParam::Alpha, FitParam::K, FitParam::B] {
            let free = self.free.contains(&p);
            let fixed = match p {
                FitParam::Alpha => self.fixed_alpha,
                FitParam::K => self.fixed_k,
                FitParam::B => self.fixed_b,
            };
            if free && fixed.is_some() {
                return Err(Error::Config(format!("{p} is both free and fixed")));
            }
            if !free && fixed.is_none() {
                return Err(Error::Config(format!("{p} needs a fixed value or a free slot")));
            }
        }
        if self.free.iter().enumerate().any(|(i, p)| self.free[..i].contains(p)) {
            return Err(Error::Config("duplicate free parameter".into()));
        }
        Ok(())
    }

    fn c0(&self) -> f64 {
        self.observed[0].1
    }

    fn assemble(&self, x: &[f64]) -> (f64, f64, f64) {
        let mut alpha = self.fixed_alpha.unwrap_or(0.0);
        let mut k = self.fixed_k.unwrap_or(0.0);
        let mut b = self.fixed_b.unwrap_or(0.0);
        for (p, &v) in self.free.iter().zip(x) {
            match p {
                FitParam::Alpha => alpha = v,
                FitParam::K => k = v,
                FitParam::B => b = v,
            }
        }
        (alpha, k, b)
    }

    fn clamp(&self, x: &mut [f64]) {
        for (v, &(lo, hi)) in x.iter_mut().zip(&self.bounds) {
            *v = v.clamp(lo, hi);
        }
    }

    fn sse(&self, x: &[f64]) -> f64 {
        let (alpha, k, b) = self.assemble(x);
        let c0 = self.c0();
        self.observed
            .iter()
            .map(|&(t, y)| {
                let c = c0 - alpha * k * t * t * t / 6.0 - alpha * b * t;
                (c - y) * (c - y)
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub alpha: f64,
    pub k: f64,
    pub b: f64,
    pub c0: f64,
    /// Which parameters were estimated (the rest were held fixed).
    pub free: Vec<FitParam>,
    /// Final sum of squared residuals.
    pub residual: f64,
    /// Simplex iterations performed.
    pub iterations: usize,
    /// Set when the data carry no attrition signal and the alpha estimate
    /// collapsed onto its lower bound.
    pub flatness_warning: bool,
}

fn grid_search(spec: &FitSpec) -> Vec<f64> {
    let n = spec.free.len();
    let axis: Vec<Vec<f64>> = spec
        .bounds
        .iter()
        .map(|&(lo, hi)| {
            (0..GRID_POINTS)
                .map(|i| lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64)
                .collect()
        })
        .collect();
    let mut best = vec![0.0; n];
    let mut best_f = f64::INFINITY;
    let mut idx = vec![0usize; n];
    loop {
        let x: Vec<f64> = (0..n).map(|d| axis[d][idx[d]]).collect();
        let f = spec.sse(&x);
        if f < best_f {
            best_f = f;
            best = x;
        }
        // odometer increment
        let mut d = 0;
        loop {
            if d == n {
                return best;
            }
            idx[d] += 1;
            if idx[d] < GRID_POINTS {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// Bounded Nelder-Mead from a starting point; returns (point, value, iterations).
fn nelder_mead(spec: &FitSpec, start: Vec<f64>) -> (Vec<f64>, f64, usize) {
    let n = start.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(start.clone());
    for d in 0..n {
        let (lo, hi) = spec.bounds[d];
        let step = (hi - lo) / GRID_POINTS as f64;
        let mut v = start.clone();
        v[d] = if v[d] + step <= hi { v[d] + step } else { v[d] - step };
        spec.clamp(&mut v);
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| spec.sse(x)).collect();

    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        // order best..worst
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let best = order[0];
        let worst = order[n];
        let spread = values[worst] - values[best];
        if spread <= SPREAD_TOL * (1.0 + values[best].abs()) {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n)
            .map(|d| {
                order[..n].iter().map(|&i| simplex[i][d]).sum::<f64>() / n as f64
            })
            .collect();
        let eval = |point: &mut Vec<f64>| {
            spec.clamp(point);
            spec.sse(point)
        };

        let mut reflected: Vec<f64> = (0..n)
            .map(|d| centroid[d] + (centroid[d] - simplex[worst][d]))
            .collect();
        let f_r = eval(&mut reflected);

        let second_worst = order[n - 1];
        if f_r < values[best] {
            let mut expanded: Vec<f64> = (0..n)
                .map(|d| centroid[d] + 2.0 * (centroid[d] - simplex[worst][d]))
                .collect();
            let f_e = eval(&mut expanded);
            if f_e < f_r {
                simplex[worst] = expanded;
                values[worst] = f_e;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_r;
            }
        } else if f_r < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = f_r;
        } else {
            let mut contracted: Vec<f64> = (0..n)
                .map(|d| centroid[d] + 0.5 * (simplex[worst][d] - centroid[d]))
                .collect();
            let f_c = eval(&mut contracted);
            if f_c < values[worst] {
                simplex[worst] = contracted;
                values[worst] = f_c;
            } else {
                // shrink toward the best vertex
                let anchor = simplex[best].clone();
                for i in 0..=n {
                    if i == best {
                        continue;
                    }
                    for d in 0..n {
                        simplex[i][d] = anchor[d] + 0.5 * (simplex[i][d] - anchor[d]);
                    }
                    spec.clamp(&mut simplex[i]);
                    values[i] = spec.sse(&simplex[i]);
                }
            }
        }
    }

    let best = (0..=n).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap();
    (simplex[best].clone(), values[best], iterations)
}

/// Fit the free parameters to the observations.
pub fn fit_parameters(spec: &FitSpec) -> Result<FitResult> {
    spec.validate()?;

    let constant_data = spec.observed.windows(2).all(|w| w[1].1 == w[0].1);
    let start = grid_search(spec);
    let (mut x, residual, iterations) = nelder_mead(spec, start);
    spec.clamp(&mut x);

    let mut flatness_warning = false;
    if constant_data && spec.observed[0].1 > 0.0 {
        if let Some(pos) = spec.free.iter().position(|&p| p == FitParam::Alpha) {
            // No decay signal: alpha is unidentified below its lower bound.
            x[pos] = spec.bounds[pos].0;
            flatness_warning = true;
        }
    }
    let residual = spec.sse(&x).min(residual);

    let (alpha, k, b) = spec.assemble(&x);
    Ok(FitResult {
        alpha,
        k,
        b,
        c0: spec.c0(),
        free: spec.free.clone(),
        residual,
        iterations,
        flatness_warning,
    })
}

/// Synthesize noiseless observations from the survival cubic (test and
/// fixture helper; independent of the fitting path).
pub fn synthesize_observations(p: &CultureParams, times: &[f64]) -> Vec<(f64, f64)> {
    times
        .iter()
        .map(|&t| {
            let c = p.c0 - p.alpha * p.k * t * t * t / 6.0 - p.alpha * p.b * t;
            (t, c)
        })
        .collect()
}
