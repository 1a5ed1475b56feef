//! Closed-form survival and radical curves for the reference culture
//! scenario, with its extinction time.
//!
//! ```bash
//! cargo run -p oxistress --example culture_curves
//! ```

use oxistress::{cell_survival, extinction_time, radical_level, CultureParams, Trajectory};

fn main() {
    let params = CultureParams::reference_scenario();
    println!(
        "culture: alpha={}, k={}, b={}, c0={}",
        params.alpha, params.k, params.b, params.c0
    );
    println!(
        "survival cubic: c(t) = {} - {:.6} t^3 - {:.6} t",
        params.c0,
        params.alpha * params.k / 6.0,
        params.alpha * params.b
    );

    let traj = Trajectory::from_closed_form(&params, 10.0, 1.0).unwrap();
    println!("\n  t      cells      radicals");
    for i in 0..traj.len() {
        println!(
            "{:>4}  {:>9.4}  {:>9.4}",
            traj.times[i],
            traj.cells[i].max(0.0),
            traj.radicals[i]
        );
    }

    let t_star = extinction_time(&params).unwrap();
    println!("\nextinction at t* = {t_star:.6}");
    println!("c(t*) = {:e}", cell_survival(t_star, &params).unwrap());
    println!("r(t*) = {:.4}", radical_level(t_star, &params).unwrap());
}
