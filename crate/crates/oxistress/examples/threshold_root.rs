//! The triangular-accumulation threshold: how many minutes of a unit
//! linear ramp until the cumulative radical load 1+2+…+n reaches a target.
//!
//! ```bash
//! cargo run -p oxistress --example threshold_root
//! ```

use oxistress::{positive_root, ticks_to_threshold};

fn main() {
    for s in [1.0, 3.0, 100.0, 30000.0, 40000.0, 1.0e6] {
        let root = positive_root(s).unwrap();
        let ticks = ticks_to_threshold(s).unwrap();
        println!(
            "S = {s:>9}: n(n+1)/2 = S at n = {root:.3}, first integer minute >= S: {ticks}"
        );
    }
}
