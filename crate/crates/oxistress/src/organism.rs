//! Per-minute apoptosis simulation of an individual under a daily timetable.
//!
//! Each activity ramps radical production linearly with minutes spent in it,
//! so an activity's cumulative load is triangular: 1 + 2 + … + n = n(n+1)/2.
//! Radicals are neutralized against the antioxidant pool; whatever is left
//! kills cells at `kill_ratio` cells per radical unit.

use crate::error::{Error, Result};

pub const MINUTES_PER_DAY: u32 = 1440;

/// Default reporting threshold for cumulative unneutralized radicals.
pub const DEFAULT_EPISODE_THRESHOLD: f64 = 30000.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Activity {
    pub name: String,
    pub start_minute: u32,
    pub duration: u32,
    /// Radical production slope while the activity runs.
    pub intensity: f64,
}

impl Activity {
    pub fn validate(&self) -> Result<()> {
        if self.start_minute >= MINUTES_PER_DAY {
            return Err(Error::Config(format!(
                "activity '{}': start_minute {} out of [0, 1440)",
                self.name, self.start_minute
            )));
        }
        if self.duration == 0 {
            return Err(Error::Config(format!(
                "activity '{}': duration must be >= 1 minute",
                self.name
            )));
        }
        if self.start_minute + self.duration > MINUTES_PER_DAY {
            return Err(Error::Config(format!(
                "activity '{}': runs past the end of the day",
                self.name
            )));
        }
        if !(self.intensity >= 0.0) || !self.intensity.is_finite() {
            return Err(Error::Config(format!(
                "activity '{}': intensity must be finite and >= 0",
                self.name
            )));
        }
        if self.name.contains(',') || self.name.is_empty() {
            return Err(Error::Config(format!(
                "activity name '{}' must be nonempty and comma-free",
                self.name
            )));
        }
        Ok(())
    }

    fn end_minute(&self) -> u32 {
        self.start_minute + self.duration
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Schedule {
    pub activities: Vec<Activity>,
}

impl Schedule {
    pub fn new(activities: Vec<Activity>) -> Result<Self> {
        let s = Schedule { activities };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for a in &self.activities {
            a.validate()?;
        }
        for w in self.activities.windows(2) {
            if w[1].start_minute < w[0].start_minute {
                return Err(Error::Config("activities must be sorted by start_minute".into()));
            }
            if w[1].start_minute < w[0].end_minute() {
                return Err(Error::Config(format!(
                    "activities '{}' and '{}' overlap",
                    w[0].name, w[1].name
                )));
            }
        }
        Ok(())
    }

    /// Active activity at the given minute, with the 1-based minute count
    /// elapsed within it.
    pub fn activity_at(&self, minute: u32) -> Option<(&Activity, u32)> {
        self.activities
            .iter()
            .find(|a| minute >= a.start_minute && minute < a.end_minute())
            .map(|a| (a, minute - a.start_minute + 1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrganismConfig {
    /// Resting radical production per minute.
    pub baseline_production: f64,
    /// Antioxidant pool maximum.
    pub antioxidant_capacity: f64,
    /// Antioxidant recovery per minute.
    pub replenish_rate: f64,
    /// Cells killed per unneutralized radical unit.
    pub kill_ratio: f64,
    /// Reporting marker on cumulative unneutralized radicals.
    pub episode_threshold: f64,
}

impl OrganismConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("baseline_production", self.baseline_production),
            ("antioxidant_capacity", self.antioxidant_capacity),
            ("replenish_rate", self.replenish_rate),
            ("kill_ratio", self.kill_ratio),
            ("episode_threshold", self.episode_threshold),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrganismState {
    pub minute: u32,
    pub radical_pool: f64,
    pub antioxidant_pool: f64,
    pub cumulative_dead: u64,
}

impl OrganismState {
    /// Day start with a full antioxidant pool and no radical backlog.
    pub fn fresh(cfg: &OrganismConfig) -> Self {
        OrganismState {
            minute: 0,
            radical_pool: 0.0,
            antioxidant_pool: cfg.antioxidant_capacity,
            cumulative_dead: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinuteRecord {
    pub minute: u32,
    /// Active activity name; `None` is rest.
    pub activity: Option<String>,
    pub production: f64,
    pub neutralized: f64,
    pub dead: u64,
    pub radical_pool: f64,
    pub antioxidant_pool: f64,
    pub cumulative_dead: u64,
}

/// Positive root of n(n+1)/2 = S, i.e. of n² + n − 2S = 0.
pub fn positive_root(s: f64) -> Result<f64> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("sum must be finite and >= 0, got {s}")));
    }
    Ok((-1.0 + (1.0 + 8.0 * s).sqrt()) / 2.0)
}

/// Smallest integer n with n(n+1)/2 ≥ S.
pub fn ticks_to_threshold(s: f64) -> Result<u64> {
    let root = positive_root(s)?;
    let mut n = root.ceil() as u64;
    // Exact integer verification guards the float boundary.
    while n > 0 && ((n - 1) * n / 2) as f64 >= s {
        n -= 1;
    }
    while ((n * (n + 1) / 2) as f64) < s {
        n += 1;
    }
    Ok(n)
}

/// Advance one minute: produce, neutralize, kill, replenish.
pub fn step_minute(
    state: &OrganismState,
    cfg: &OrganismConfig,
    sched: &Schedule,
) -> Result<(OrganismState, MinuteRecord)> {
    if state.minute >= MINUTES_PER_DAY {
        return Err(Error::EndOfDay(state.minute));
    }

    let (activity_name, production) = match sched.activity_at(state.minute) {
        Some((a, elapsed)) => (
            Some(a.name.clone()),
            cfg.baseline_production + a.intensity * elapsed as f64,
        ),
        None => (None, cfg.baseline_production),
    };

    let mut radical_pool = state.radical_pool + production;
    let neutralized = radical_pool.min(state.antioxidant_pool);
    radical_pool -= neutralized;
    let mut antioxidant_pool = state.antioxidant_pool - neutralized;

    let dead = (cfg.kill_ratio * radical_pool).floor() as u64;
    if dead > 0 {
        // Radicals are spent attacking cells; only kill-free remainders carry over.
        radical_pool = 0.0;
    }

    antioxidant_pool = (antioxidant_pool + cfg.replenish_rate).min(cfg.antioxidant_capacity);

    let next = OrganismState {
        minute: state.minute + 1,
        radical_pool,
        antioxidant_pool,
        cumulative_dead: state.cumulative_dead + dead,
    };
    let record = MinuteRecord {
        minute: state.minute,
        activity: activity_name,
        production,
        neutralized,
        dead,
        radical_pool,
        antioxidant_pool,
        cumulative_dead: next.cumulative_dead,
    };
    Ok((next, record))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub records: Vec<MinuteRecord>,
    pub total_dead: u64,
    pub mean_dead_per_minute: f64,
    /// 1-based minute count at which cumulative unneutralized radicals
    /// first reached the episode threshold, if they did.
    pub threshold_tick: Option<u32>,
    /// End-of-day state, for multi-day carryover.
    pub final_state: OrganismState,
}

/// Run one full day (1440 minutes) from the given initial state.
pub fn simulate_day(
    cfg: &OrganismConfig,
    sched: &Schedule,
    initial: OrganismState,
) -> Result<SimReport> {
    cfg.validate()?;
    sched.validate()?;
    if initial.minute != 0 {
        return Err(Error::Config(format!(
            "day must start at minute 0, got {}",
            initial.minute
        )));
    }

    let mut state = initial;
    let mut records = Vec::with_capacity(MINUTES_PER_DAY as usize);
    let mut cumulative_unneutralized = 0.0;
    let mut threshold_tick = None;
    let start_dead = initial.cumulative_dead;

    for _ in 0..MINUTES_PER_DAY {
        let (next, record) = step_minute(&state, cfg, sched)?;
        cumulative_unneutralized += (record.production - record.neutralized).max(0.0);
        if threshold_tick.is_none() && cumulative_unneutralized >= cfg.episode_threshold {
            threshold_tick = Some(record.minute + 1);
        }
        records.push(record);
        state = next;
    }

    let total_dead = state.cumulative_dead - start_dead;
    Ok(SimReport {
        records,
        total_dead,
        mean_dead_per_minute: total_dead as f64 / MINUTES_PER_DAY as f64,
        threshold_tick,
        final_state: state,
    })
}

/// Sequential multi-day run; pools and the dead-cell ledger carry over,
/// the clock resets each midnight.
pub fn simulate_days(
    cfg: &OrganismConfig,
    sched: &Schedule,
    initial: OrganismState,
    days: u32,
) -> Result<Vec<SimReport>> {
    if days == 0 {
        return Err(Error::Config("days must be >= 1".into()));
    }
    let mut reports = Vec::with_capacity(days as usize);
    let mut state = initial;
    for _ in 0..days {
        let report = simulate_day(cfg, sched, state)?;
        state = report.final_state;
        state.minute = 0;
        reports.push(report);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn quiet_cfg() -> OrganismConfig {
        OrganismConfig {
            baseline_production: 0.0,
            antioxidant_capacity: 100.0,
            replenish_rate: 10.0,
            kill_ratio: 1.0,
            episode_threshold: DEFAULT_EPISODE_THRESHOLD,
        }
    }

    #[test]
    fn positive_root_values() {
        assert!((positive_root(30000.0).unwrap() - 244.449).abs() < 0.001);
        assert_eq!(positive_root(0.0).unwrap(), 0.0);
        assert_eq!(positive_root(1.0).unwrap(), 1.0);
        assert!(positive_root(-1.0).is_err());
        assert!(positive_root(f64::NAN).is_err());
    }

    #[test]
    fn ticks_to_threshold_values() {
        assert_eq!(ticks_to_threshold(30000.0).unwrap(), 245);
        assert_eq!(ticks_to_threshold(3.0).unwrap(), 2);
        assert_eq!(ticks_to_threshold(0.0).unwrap(), 0);
        // boundary: exact triangular numbers
        assert_eq!(ticks_to_threshold(29890.0).unwrap(), 244);
        assert_eq!(ticks_to_threshold(29891.0).unwrap(), 245);
    }

    #[test]
    fn ticks_agree_with_brute_force() {
        // coarse sample across the full range plus a dense band near 30000
        let mut samples: Vec<u64> = (0..=1000).map(|i| i * 1000).collect();
        samples.extend(29000..31000);
        for s in samples {
            let s_f = s as f64;
            let mut n = 0u64;
            let mut acc = 0u64;
            while (acc as f64) < s_f {
                n += 1;
                acc += n;
            }
            assert_eq!(ticks_to_threshold(s_f).unwrap(), n, "S = {s}");
        }
    }

    #[test]
    fn rest_minute_replenishes() {
        let cfg = quiet_cfg();
        let sched = Schedule::default();
        let state = OrganismState {
            minute: 0,
            radical_pool: 0.0,
            antioxidant_pool: 50.0,
            cumulative_dead: 0,
        };
        let (next, rec) = step_minute(&state, &cfg, &sched).unwrap();
        assert_eq!(rec.dead, 0);
        assert_eq!(rec.production, 0.0);
        assert_eq!(next.antioxidant_pool, 60.0);
        assert_eq!(next.minute, 1);
    }

    #[test]
    fn kill_arithmetic() {
        let cfg = OrganismConfig {
            baseline_production: 10.0,
            antioxidant_capacity: 4.0,
            replenish_rate: 0.0,
            kill_ratio: 1.0,
            episode_threshold: DEFAULT_EPISODE_THRESHOLD,
        };
        let sched = Schedule::default();
        let state = OrganismState {
            minute: 0,
            radical_pool: 0.0,
            antioxidant_pool: 4.0,
            cumulative_dead: 0,
        };
        let (next, rec) = step_minute(&state, &cfg, &sched).unwrap();
        assert_eq!(rec.neutralized, 4.0);
        assert_eq!(rec.dead, 6);
        assert_eq!(next.radical_pool, 0.0);
        assert_eq!(next.cumulative_dead, 6);
    }

    #[test]
    fn activity_ramp_is_triangular() {
        let sched = Schedule::new(vec![Activity {
            name: "run".into(),
            start_minute: 0,
            duration: 3,
            intensity: 2.0,
        }])
        .unwrap();
        let cfg = OrganismConfig {
            baseline_production: 0.0,
            antioxidant_capacity: 0.0,
            replenish_rate: 0.0,
            kill_ratio: 0.0,
            episode_threshold: DEFAULT_EPISODE_THRESHOLD,
        };
        let mut state = OrganismState::fresh(&cfg);
        let mut productions = Vec::new();
        for _ in 0..3 {
            let (next, rec) = step_minute(&state, &cfg, &sched).unwrap();
            productions.push(rec.production);
            state = next;
        }
        assert_eq!(productions, vec![2.0, 4.0, 6.0]);
        assert_eq!(productions.iter().sum::<f64>(), 2.0 * (3.0 * 4.0 / 2.0));
    }

    #[test]
    fn end_of_day_rejected() {
        let cfg = quiet_cfg();
        let state = OrganismState {
            minute: 1440,
            radical_pool: 0.0,
            antioxidant_pool: 0.0,
            cumulative_dead: 0,
        };
        assert!(matches!(
            step_minute(&state, &cfg, &Schedule::default()),
            Err(Error::EndOfDay(1440))
        ));
    }

    #[test]
    fn all_rest_ample_antioxidants_kill_nothing() {
        let cfg = OrganismConfig {
            baseline_production: 5.0,
            antioxidant_capacity: 100.0,
            replenish_rate: 5.0,
            kill_ratio: 1.0,
            episode_threshold: DEFAULT_EPISODE_THRESHOLD,
        };
        let report = simulate_day(&cfg, &Schedule::default(), OrganismState::fresh(&cfg)).unwrap();
        assert_eq!(report.total_dead, 0);
        assert_eq!(report.records.len(), 1440);
    }

    #[test]
    fn simulate_day_deterministic() {
        let cfg = quiet_cfg();
        let sched = Schedule::new(vec![Activity {
            name: "gym".into(),
            start_minute: 600,
            duration: 60,
            intensity: 7.0,
        }])
        .unwrap();
        let a = simulate_day(&cfg, &sched, OrganismState::fresh(&cfg)).unwrap();
        let b = simulate_day(&cfg, &sched, OrganismState::fresh(&cfg)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn threshold_tick_matches_ticks_to_threshold() {
        // unit intensity, zero antioxidants: cumulative unneutralized load
        // after n minutes is the triangular number n(n+1)/2
        let cfg = OrganismConfig {
            baseline_production: 0.0,
            antioxidant_capacity: 0.0,
            replenish_rate: 0.0,
            kill_ratio: 0.0,
            episode_threshold: 30000.0,
        };
        let sched = Schedule::new(vec![Activity {
            name: "march".into(),
            start_minute: 0,
            duration: 1440,
            intensity: 1.0,
        }])
        .unwrap();
        let report = simulate_day(&cfg, &sched, OrganismState::fresh(&cfg)).unwrap();
        assert_eq!(report.threshold_tick, Some(ticks_to_threshold(30000.0).unwrap() as u32));
    }

    #[test]
    fn schedule_validation() {
        let overlap = Schedule::new(vec![
            Activity {
                name: "a".into(),
                start_minute: 0,
                duration: 30,
                intensity: 1.0,
            },
            Activity {
                name: "b".into(),
                start_minute: 29,
                duration: 10,
                intensity: 1.0,
            },
        ]);
        assert!(overlap.is_err());
        let past_midnight = Schedule::new(vec![Activity {
            name: "late".into(),
            start_minute: 1430,
            duration: 20,
            intensity: 1.0,
        }]);
        assert!(past_midnight.is_err());
    }

    #[test]
    fn multi_day_carries_state() {
        let cfg = OrganismConfig {
            baseline_production: 2.0,
            antioxidant_capacity: 10.0,
            replenish_rate: 1.0,
            kill_ratio: 0.5,
            episode_threshold: DEFAULT_EPISODE_THRESHOLD,
        };
        let reports = simulate_days(&cfg, &Schedule::default(), OrganismState::fresh(&cfg), 3).unwrap();
        assert_eq!(reports.len(), 3);
        for w in reports.windows(2) {
            assert!(w[1].final_state.cumulative_dead >= w[0].final_state.cumulative_dead);
        }
    }

    proptest! {
        #[test]
        fn pool_invariants_hold_all_day(
            baseline in 0.0..50.0f64,
            capacity in 0.0..500.0f64,
            replenish in 0.0..50.0f64,
            kill_ratio in 0.0..10.0f64,
            start in 0u32..1380,
            duration in 1u32..60,
            intensity in 0.0..30.0f64,
        ) {
            let cfg = OrganismConfig {
                baseline_production: baseline,
                antioxidant_capacity: capacity,
                replenish_rate: replenish,
                kill_ratio,
                episode_threshold: DEFAULT_EPISODE_THRESHOLD,
            };
            let sched = Schedule::new(vec![Activity {
                name: "x".into(),
                start_minute: start,
                duration,
                intensity,
            }]).unwrap();
            let report = simulate_day(&cfg, &sched, OrganismState::fresh(&cfg)).unwrap();
            let mut prev_dead = 0u64;
            for rec in &report.records {
                prop_assert!(rec.radical_pool >= 0.0);
                prop_assert!(rec.antioxidant_pool >= 0.0);
                prop_assert!(rec.antioxidant_pool <= capacity);
                prop_assert!(rec.cumulative_dead >= prev_dead);
                prev_dead = rec.cumulative_dead;
                if kill_ratio == 0.0 {
                    prop_assert_eq!(rec.dead, 0);
                }
            }
        }

        #[test]
        fn higher_intensity_never_kills_fewer(intensity in 0.0..20.0f64, bump in 0.1..20.0f64) {
            let cfg = OrganismConfig {
                baseline_production: 1.0,
                antioxidant_capacity: 200.0,
                replenish_rate: 2.0,
                kill_ratio: 1.0,
                episode_threshold: DEFAULT_EPISODE_THRESHOLD,
            };
            let sched_for = |i: f64| Schedule::new(vec![Activity {
                name: "x".into(),
                start_minute: 100,
                duration: 90,
                intensity: i,
            }]).unwrap();
            let low = simulate_day(&cfg, &sched_for(intensity), OrganismState::fresh(&cfg)).unwrap();
            let high = simulate_day(&cfg, &sched_for(intensity + bump), OrganismState::fresh(&cfg)).unwrap();
            prop_assert!(high.total_dead >= low.total_dead);
        }

        #[test]
        fn per_minute_ledger_conserves(
            baseline in 0.0..20.0f64,
            capacity in 0.0..100.0f64,
            replenish in 0.0..20.0f64,
            kill_ratio in 0.0..5.0f64,
        ) {
            let cfg = OrganismConfig {
                baseline_production: baseline,
                antioxidant_capacity: capacity,
                replenish_rate: replenish,
                kill_ratio,
                episode_threshold: DEFAULT_EPISODE_THRESHOLD,
            };
            let sched = Schedule::default();
            let mut state = OrganismState::fresh(&cfg);
            for _ in 0..200 {
                let carry_in = state.radical_pool;
                let (next, rec) = step_minute(&state, &cfg, &sched).unwrap();
                // radicals in == neutralized + spent-on-kill + carryover out
                let spent = if rec.dead > 0 { carry_in + rec.production - rec.neutralized } else { 0.0 };
                let balance = rec.production + carry_in - rec.neutralized - spent - next.radical_pool;
                prop_assert!(balance.abs() < 1e-9, "balance = {balance}");
                if rec.dead > 0 {
                    prop_assert_eq!(next.radical_pool, 0.0);
                }
                state = next;
            }
        }
    }
}
