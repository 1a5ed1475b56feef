//! One simulated day of the organism apoptosis model using the shipped
//! default schedule.
//!
//! ```bash
//! cargo run -p oxistress --example organism_day
//! ```

use oxistress::{parse_config, simulate_day, ModeConfig, OrganismState};

fn main() {
    let text = include_str!("../configs/default_day.cfg");
    let cfg = parse_config(text).unwrap();
    let run = match cfg.mode {
        ModeConfig::Organism(run) => run,
        _ => unreachable!("default_day.cfg is an organism config"),
    };

    let report = simulate_day(&run.config, &run.schedule, OrganismState::fresh(&run.config)).unwrap();

    println!("schedule:");
    for a in &run.schedule.activities {
        println!(
            "  {:>5}-{:<5} {:<15} intensity {}",
            a.start_minute,
            a.start_minute + a.duration,
            a.name,
            a.intensity
        );
    }

    println!("\ntotal dead cells: {}", report.total_dead);
    println!("mean dead per minute: {:.1}", report.mean_dead_per_minute);
    if let Some(tick) = report.threshold_tick {
        println!("episode threshold ({}) reached at minute {tick}", run.config.episode_threshold);
    }

    // worst ten minutes of the day
    let mut by_dead: Vec<_> = report.records.iter().collect();
    by_dead.sort_by(|a, b| b.dead.cmp(&a.dead).then(a.minute.cmp(&b.minute)));
    println!("\nworst minutes:");
    for r in by_dead.iter().take(10) {
        println!(
            "  minute {:>4} ({:<15}) dead = {}",
            r.minute,
            r.activity.as_deref().unwrap_or("rest"),
            r.dead
        );
    }
}
