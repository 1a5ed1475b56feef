//! Closed-form attrition model for a cell culture under free-radical attack.
//!
//! Radicals accumulate quadratically, r(t) = k·t²/2 + b, and attrite the
//! culture at rate dc/dt = −α·r(t), giving the survival cubic
//! c(t) = c0 − α·k·t³/6 − α·b·t. The effectiveness α is either supplied
//! directly or derived from the antioxidant/radical composition as b/(a+b).

use crate::error::{Error, Result};

/// Parameter set for the culture attrition model.
#[derive(Debug, Clone, PartialEq)]
pub struct CultureParams {
    /// Attrition effectiveness, in (0, 1].
    pub alpha: f64,
    /// Antioxidant composition fraction, when α was derived from (a, b).
    pub a: Option<f64>,
    /// Initial free-radical composition fraction, > 0.
    pub b: f64,
    /// Radical production slope, ≥ 0.
    pub k: f64,
    /// Initial cell count (or percentage), > 0.
    pub c0: f64,
}

/// Tolerance for cross-checking a directly-supplied alpha against b/(a+b).
const ALPHA_CONSISTENCY_TOL: f64 = 1e-12;

impl CultureParams {
    /// Build from a directly-supplied effectiveness.
    pub fn with_alpha(alpha: f64, b: f64, k: f64, c0: f64) -> Result<Self> {
        let p = CultureParams {
            alpha,
            a: None,
            b,
            k,
            c0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Build from the antioxidant/radical composition; α = b/(a+b).
    pub fn from_composition(a: f64, b: f64, k: f64, c0: f64) -> Result<Self> {
        let alpha = effectiveness(a, b)?;
        let p = CultureParams {
            alpha,
            a: Some(a),
            b,
            k,
            c0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Build when a config supplies both alpha and (a, b); they must agree.
    pub fn with_alpha_and_composition(alpha: f64, a: f64, b: f64, k: f64, c0: f64) -> Result<Self> {
        let derived = effectiveness(a, b)?;
        if (derived - alpha).abs() > ALPHA_CONSISTENCY_TOL {
            return Err(Error::Config(format!(
                "alpha={alpha} inconsistent with b/(a+b)={derived}"
            )));
        }
        let p = CultureParams {
            alpha,
            a: Some(a),
            b,
            k,
            c0,
        };
        p.validate()?;
        Ok(p)
    }

    /// The canonical reference scenario: α=0.8, k=1, b=0.2, c0=100.
    pub fn reference_scenario() -> Self {
        CultureParams::with_alpha(0.8, 0.2, 1.0, 100.0).expect("reference params are valid")
    }

    pub fn validate(&self) -> Result<()> {
        let CultureParams { alpha, a, b, k, c0 } = *self;
        if !(alpha > 0.0 && alpha <= 1.0) || !alpha.is_finite() {
            return Err(Error::Config(format!("alpha out of (0,1]: {alpha}")));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::Config(format!("b must be > 0, got {b}")));
        }
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::Config(format!("k must be >= 0, got {k}")));
        }
        if !(c0 > 0.0) || !c0.is_finite() {
            return Err(Error::Config(format!("c0 must be > 0, got {c0}")));
        }
        if let Some(a) = a {
            if !(a >= 0.0) || !a.is_finite() {
                return Err(Error::Config(format!("a must be >= 0, got {a}")));
            }
            let derived = b / (a + b);
            if (derived - alpha).abs() > ALPHA_CONSISTENCY_TOL {
                return Err(Error::Config(format!(
                    "alpha={alpha} inconsistent with b/(a+b)={derived}"
                )));
            }
        }
        Ok(())
    }
}

/// Time-indexed sample path of the culture.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Strictly increasing sample times.
    pub times: Vec<f64>,
    /// Cell counts c(tᵢ), unclamped.
    pub cells: Vec<f64>,
    /// Radical levels r(tᵢ).
    pub radicals: Vec<f64>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, cells: Vec<f64>, radicals: Vec<f64>) -> Result<Self> {
        if times.is_empty() || times.len() != cells.len() || times.len() != radicals.len() {
            return Err(Error::Domain(format!(
                "trajectory arrays must be nonempty and equal length (times={}, cells={}, radicals={})",
                times.len(),
                cells.len(),
                radicals.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("trajectory times must be strictly increasing".into()));
        }
        Ok(Trajectory {
            times,
            cells,
            radicals,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Sample the closed forms on a uniform grid t = 0, dt, …, t_end.
    pub fn from_closed_form(p: &CultureParams, t_end: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !(t_end > 0.0) || !dt.is_finite() || !t_end.is_finite() {
            return Err(Error::Config(format!(
                "invalid sampling window: t_end={t_end}, dt={dt}"
            )));
        }
        let n = (t_end / dt).floor() as usize;
        let mut times = Vec::with_capacity(n + 2);
        for i in 0..=n {
            times.push(i as f64 * dt);
        }
        if *times.last().unwrap() < t_end - 1e-12 * t_end.max(1.0) {
            times.push(t_end);
        }
        let cells = times
            .iter()
            .map(|&t| cell_survival(t, p))
            .collect::<Result<Vec<_>>>()?;
        let radicals = times
            .iter()
            .map(|&t| radical_level(t, p))
            .collect::<Result<Vec<_>>>()?;
        if let Some(i) = (0..times.len()).find(|&i| !cells[i].is_finite() || !radicals[i].is_finite())
        {
            return Err(Error::Domain(format!(
                "closed form overflowed at t = {}",
                times[i]
            )));
        }
        Trajectory::new(times, cells, radicals)
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be >= 0 and finite, got {t}")));
    }
    Ok(())
}

/// Attack effectiveness α = b / (a + b). Equals 1 when no antioxidants are present.
pub fn effectiveness(a: f64, b: f64) -> Result<f64> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Domain(format!("radical fraction b must be > 0, got {b}")));
    }
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("antioxidant fraction a must be >= 0, got {a}")));
    }
    Ok(b / (a + b))
}

/// Radical level r(t) = k·t²/2 + b.
pub fn radical_level(t: f64, p: &CultureParams) -> Result<f64> {
    check_time(t)?;
    Ok(p.k * t * t / 2.0 + p.b)
}

/// Surviving cells c(t) = c0 − α·k·t³/6 − α·b·t, unclamped.
///
/// The value goes negative past extinction; display layers clamp at zero.
pub fn cell_survival(t: f64, p: &CultureParams) -> Result<f64> {
    check_time(t)?;
    Ok(p.c0 - p.alpha * p.k * t.powi(3) / 6.0 - p.alpha * p.b * t)
}

/// Attrition rate dc/dt = −α·(k·t²/2 + b).
pub fn survival_rate(t: f64, p: &CultureParams) -> Result<f64> {
    let r = radical_level(t, p)?;
    Ok(-p.alpha * r)
}

/// Absolute tolerance factor for the extinction root: |c(t*)| ≤ c0 · this.
pub const EXTINCTION_TOL_FACTOR: f64 = 1e-10;

/// Unique positive root of the survival cubic, by bracketing bisection.
pub fn extinction_time(p: &CultureParams) -> Result<f64> {
    if p.alpha <= 0.0 {
        return Err(Error::NoExtinction(
            "alpha = 0 leaves the survival curve flat".into(),
        ));
    }
    if p.k == 0.0 && p.b <= 0.0 {
        return Err(Error::NoExtinction(
            "no radical production and no initial radicals".into(),
        ));
    }
    let tol = p.c0 * EXTINCTION_TOL_FACTOR;

    // Double the upper bracket until the cubic has gone negative.
    let mut hi = 1.0_f64;
    let mut iter = 0;
    while cell_survival(hi, p)? > 0.0 {
        hi *= 2.0;
        iter += 1;
        if iter > 200 {
            return Err(Error::NoExtinction(format!(
                "no sign change found up to t = {hi}"
            )));
        }
    }
    let mut lo = 0.0_f64;
    for _ in 0..500 {
        let mid = 0.5 * (lo + hi);
        let c = cell_survival(mid, p)?;
        if c.abs() <= tol {
            return Ok(mid);
        }
        if c > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Monotone cubic: the bracket midpoint is the best available answer.
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn paper() -> CultureParams {
        CultureParams::reference_scenario()
    }

    #[test]
    fn effectiveness_paper_values() {
        assert_eq!(effectiveness(0.0, 0.2).unwrap(), 1.0);
        assert_eq!(effectiveness(0.2, 0.2).unwrap(), 0.5);
        assert!((effectiveness(0.05, 0.2).unwrap() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn effectiveness_domain_errors() {
        assert!(effectiveness(0.1, 0.0).is_err());
        assert!(effectiveness(0.1, -0.2).is_err());
        assert!(effectiveness(-0.1, 0.2).is_err());
        assert!(effectiveness(f64::NAN, 0.2).is_err());
        assert!(effectiveness(0.1, f64::INFINITY).is_err());
    }

    #[test]
    fn radical_level_closed_form() {
        let p = paper();
        assert_eq!(radical_level(0.0, &p).unwrap(), 0.2);
        assert!((radical_level(2.0, &p).unwrap() - 2.2).abs() < 1e-15);
        let flat = CultureParams::with_alpha(0.8, 0.2, 0.0, 100.0).unwrap();
        assert_eq!(radical_level(5.0, &flat).unwrap(), 0.2);
        assert!(radical_level(-1.0, &p).is_err());
    }

    #[test]
    fn cell_survival_closed_form() {
        let p = paper();
        assert_eq!(cell_survival(0.0, &p).unwrap(), p.c0);
        // 100 - 2/15 - 0.16, hand-evaluated
        let expect = 100.0 - 2.0 / 15.0 - 0.16;
        assert!((cell_survival(1.0, &p).unwrap() - expect).abs() < 1e-12);
        assert!(cell_survival(-0.5, &p).is_err());
    }

    #[test]
    fn cell_survival_vanishing_alpha_limit() {
        // a → ∞ pushes alpha → 0 and attrition to nothing.
        let p = CultureParams::from_composition(2e15, 0.2, 1.0, 100.0).unwrap();
        let c = cell_survival(1.0, &p).unwrap();
        assert!((c - 100.0).abs() < 1e-9, "c = {c}");
    }

    #[test]
    fn survival_rate_values() {
        let p = paper();
        assert!((survival_rate(0.0, &p).unwrap() + 0.16).abs() < 1e-15);
        assert!((survival_rate(2.0, &p).unwrap() + 1.76).abs() < 1e-12);
        let tiny = CultureParams::with_alpha(0.8, 1e-300, 0.0, 100.0).unwrap();
        assert!(survival_rate(0.0, &tiny).unwrap().abs() < 1e-299);
    }

    #[test]
    fn extinction_time_paper_scenario() {
        let t = extinction_time(&paper()).unwrap();
        assert!((t - 9.04).abs() < 0.01, "t* = {t}");
        let c = cell_survival(t, &paper()).unwrap();
        assert!(c.abs() <= 100.0 * EXTINCTION_TOL_FACTOR);
    }

    #[test]
    fn extinction_time_linear_case() {
        // k = 0 leaves c(t) = 100 - 0.16 t, root at 625.
        let p = CultureParams::with_alpha(0.8, 0.2, 0.0, 100.0).unwrap();
        let t = extinction_time(&p).unwrap();
        assert!((t - 625.0).abs() < 1e-6, "t* = {t}");
    }

    #[test]
    fn extinction_requires_positive_alpha() {
        let p = CultureParams {
            alpha: 0.0,
            a: None,
            b: 0.2,
            k: 1.0,
            c0: 100.0,
        };
        assert!(matches!(extinction_time(&p), Err(Error::NoExtinction(_))));
        let dead = CultureParams {
            alpha: 0.5,
            a: None,
            b: 0.0,
            k: 0.0,
            c0: 100.0,
        };
        assert!(matches!(extinction_time(&dead), Err(Error::NoExtinction(_))));
    }

    #[test]
    fn params_validation() {
        assert!(CultureParams::with_alpha(1.5, 0.2, 1.0, 100.0).is_err());
        assert!(CultureParams::with_alpha(0.0, 0.2, 1.0, 100.0).is_err());
        assert!(CultureParams::with_alpha(0.8, 0.0, 1.0, 100.0).is_err());
        assert!(CultureParams::with_alpha(0.8, 0.2, -1.0, 100.0).is_err());
        assert!(CultureParams::with_alpha(0.8, 0.2, 1.0, 0.0).is_err());
        // alpha and (a, b) must agree to 1e-12
        assert!(CultureParams::with_alpha_and_composition(0.8, 0.05, 0.2, 1.0, 100.0).is_ok());
        assert!(CultureParams::with_alpha_and_composition(0.7, 0.05, 0.2, 1.0, 100.0).is_err());
    }

    #[test]
    fn trajectory_shape_checks() {
        assert!(Trajectory::new(vec![], vec![], vec![]).is_err());
        assert!(Trajectory::new(vec![0.0, 1.0], vec![1.0], vec![1.0, 2.0]).is_err());
        assert!(Trajectory::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![1.0, 1.0]).is_err());
        let t = Trajectory::from_closed_form(&paper(), 1.0, 0.25).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.cells[0], 100.0);
        assert_eq!(t.radicals[0], 0.2);
    }

    #[test]
    fn closed_form_grid_lands_on_t_end() {
        // dt that does not divide t_end gets a shortened final step.
        let t = Trajectory::from_closed_form(&paper(), 1.0, 0.3).unwrap();
        assert!((t.times.last().unwrap() - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn effectiveness_monotone(a1 in 0.0..5.0f64, da in 1e-6..5.0f64, b in 1e-3..5.0f64) {
            let lo = effectiveness(a1 + da, b).unwrap();
            let hi = effectiveness(a1, b).unwrap();
            prop_assert!(lo < hi, "alpha must strictly decrease in a");
        }

        #[test]
        fn effectiveness_increasing_in_b(a in 1e-3..5.0f64, b in 1e-3..5.0f64, db in 1e-6..5.0f64) {
            prop_assert!(effectiveness(a, b + db).unwrap() > effectiveness(a, b).unwrap());
        }

        #[test]
        fn derivative_matches_finite_difference(
            alpha in 0.05..1.0f64,
            b in 0.01..2.0f64,
            k in 0.0..4.0f64,
            t in 0.1..20.0f64,
        ) {
            let p = CultureParams::with_alpha(alpha, b, k, 100.0).unwrap();
            let h = 1e-5;
            let fd = (cell_survival(t + h, &p).unwrap() - cell_survival(t - h, &p).unwrap()) / (2.0 * h);
            let an = survival_rate(t, &p).unwrap();
            let rel = (fd - an).abs() / an.abs().max(1e-12);
            prop_assert!(rel <= 1e-6, "fd={fd} analytic={an} rel={rel}");
        }

        #[test]
        fn initial_conditions_exact(alpha in 0.05..1.0f64, b in 0.01..2.0f64, k in 0.0..4.0f64, c0 in 1.0..1e4f64) {
            let p = CultureParams::with_alpha(alpha, b, k, c0).unwrap();
            prop_assert_eq!(radical_level(0.0, &p).unwrap(), b);
            prop_assert_eq!(cell_survival(0.0, &p).unwrap(), c0);
        }
    }

    #[test]
    fn extinction_monotone_in_alpha_and_k() {
        let alphas = [0.2, 0.4, 0.6, 0.8, 1.0];
        let mut prev = f64::INFINITY;
        for &a in &alphas {
            let p = CultureParams::with_alpha(a, 0.2, 1.0, 100.0).unwrap();
            let t = extinction_time(&p).unwrap();
            assert!(t < prev, "extinction time must decrease in alpha");
            prev = t;
        }
        let ks = [0.25, 0.5, 1.0, 2.0, 4.0];
        let mut prev = f64::INFINITY;
        for &k in &ks {
            let p = CultureParams::with_alpha(0.8, 0.2, k, 100.0).unwrap();
            let t = extinction_time(&p).unwrap();
            assert!(t < prev, "extinction time must decrease in k");
            prev = t;
        }
    }

    #[test]
    fn printed_coefficients_match_rounding() {
        let p = paper();
        let cubic = p.alpha * p.k / 6.0;
        let linear = p.alpha * p.b;
        assert!((cubic - 0.133).abs() < 5e-4);
        assert!((linear - 0.16).abs() < 5e-4);
    }
}
