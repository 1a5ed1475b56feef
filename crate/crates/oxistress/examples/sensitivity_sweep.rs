//! Extinction-time sensitivity to the attack effectiveness and to the
//! radical production slope.
//!
//! ```bash
//! cargo run -p oxistress --example sensitivity_sweep
//! ```

use oxistress::{run_sweep, CultureParams, SweepParameter, SweepSpec};

fn print_sweep(spec: &SweepSpec) {
    let result = run_sweep(spec).unwrap();
    println!("sweep over {}:", result.parameter);
    for entry in &result.entries {
        match entry.extinction_time {
            Some(t) => println!("  {} = {:<5}  extinction at t = {t:.4}", result.parameter, entry.value),
            None => println!("  {} = {:<5}  no extinction", result.parameter, entry.value),
        }
    }
    println!();
}

fn main() {
    let base = CultureParams::reference_scenario();

    print_sweep(&SweepSpec {
        parameter: SweepParameter::Alpha,
        values: vec![0.5, 0.8, 1.0],
        base: base.clone(),
        t_end: 12.0,
        dt: 0.1,
    });

    print_sweep(&SweepSpec {
        parameter: SweepParameter::K,
        values: vec![0.5, 1.0, 2.0],
        base: base.clone(),
        t_end: 15.0,
        dt: 0.1,
    });

    // more antioxidants, longer resistance
    print_sweep(&SweepSpec {
        parameter: SweepParameter::A,
        values: vec![0.0, 0.05, 0.2, 0.8],
        base,
        t_end: 20.0,
        dt: 0.1,
    });
}
