//! Synthesize survival observations from known parameters, then recover
//! them by grid search + Nelder-Mead least squares.
//!
//! ```bash
//! cargo run -p oxistress --example fit_recovery
//! ```

use oxistress::fit::{fit_parameters, synthesize_observations, FitParam, FitSpec};
use oxistress::CultureParams;

fn main() {
    let truth = CultureParams::reference_scenario();
    let times: Vec<f64> = (0..=16).map(|i| i as f64 * 0.5).collect();
    let observed = synthesize_observations(&truth, &times);

    let spec = FitSpec {
        observed,
        free: vec![FitParam::Alpha, FitParam::K],
        bounds: vec![(0.05, 1.0), (0.0, 5.0)],
        fixed_alpha: None,
        fixed_k: None,
        fixed_b: Some(truth.b),
    };

    let fit = fit_parameters(&spec).unwrap();
    println!("truth:     alpha = {:.6}, k = {:.6}", truth.alpha, truth.k);
    println!("recovered: alpha = {:.6}, k = {:.6}", fit.alpha, fit.k);
    println!(
        "relative errors: {:.2e}, {:.2e}",
        (fit.alpha - truth.alpha).abs() / truth.alpha,
        (fit.k - truth.k).abs() / truth.k
    );
    println!("residual = {:e} after {} iterations", fit.residual, fit.iterations);
}
