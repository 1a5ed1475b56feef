//! Sectioned key=value run configuration: parsing with line-numbered
//! errors, and a canonical renderer used for round-trip checks.
//!
//! ```text
//! [culture]
//! alpha = 0.8   # or derive it from a and b
//! b = 0.2
//! k = 1
//! c0 = 100
//! t_end = 12
//! dt = 0.1
//!
//! [output]
//! dir = out/culture
//! emit_plot = true
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::fit::{FitParam, FitSpec};
use crate::model::CultureParams;
use crate::organism::{
    Activity, OrganismConfig, OrganismState, Schedule, DEFAULT_EPISODE_THRESHOLD,
};
use crate::sweep::{SweepParameter, SweepSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct CultureRun {
    pub params: CultureParams,
    pub t_end: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrganismRun {
    pub config: OrganismConfig,
    pub schedule: Schedule,
    pub initial: OrganismState,
    pub days: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModeConfig {
    Culture(CultureRun),
    Sweep(SweepSpec),
    Organism(OrganismRun),
    Fit(FitSpec),
}

impl ModeConfig {
    pub fn name(&self) -> &'static str {
        match self {
            ModeConfig::Culture(_) => "culture",
            ModeConfig::Sweep(_) => "sweep",
            ModeConfig::Organism(_) => "organism",
            ModeConfig::Fit(_) => "fit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: ModeConfig,
    pub out_dir: Option<PathBuf>,
    pub emit_plot: bool,
}

// ---------------------------------------------------------------- lexing

struct RawSection {
    name: String,
    line: usize,
    entries: Vec<(String, String, usize)>,
}

fn lex(text: &str) -> Result<Vec<RawSection>> {
    let mut sections: Vec<RawSection> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or(Error::Parse {
                line: line_no,
                msg: format!("malformed section header '{line}'"),
            })?;
            sections.push(RawSection {
                name: name.trim().to_string(),
                line: line_no,
                entries: Vec::new(),
            });
        } else {
            let (key, value) = line.split_once('=').ok_or(Error::Parse {
                line: line_no,
                msg: format!("expected 'key = value', got '{line}'"),
            })?;
            let section = sections.last_mut().ok_or(Error::Parse {
                line: line_no,
                msg: "key outside any [section]".into(),
            })?;
            section
                .entries
                .push((key.trim().to_string(), value.trim().to_string(), line_no));
        }
    }
    Ok(sections)
}

// ------------------------------------------------------------- accessors

struct SectionView<'a> {
    raw: &'a RawSection,
}

impl<'a> SectionView<'a> {
    fn new(raw: &'a RawSection, allowed: &[&str], repeatable: &[&str]) -> Result<Self> {
        let mut seen = HashSet::new();
        for (key, _, line) in &raw.entries {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Parse {
                    line: *line,
                    msg: format!("unknown key: {key}"),
                });
            }
            if !repeatable.contains(&key.as_str()) && !seen.insert(key.clone()) {
                return Err(Error::Parse {
                    line: *line,
                    msg: format!("duplicate key: {key}"),
                });
            }
        }
        Ok(SectionView { raw })
    }

    fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.raw
            .entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, l)| (v.as_str(), *l))
    }

    fn require(&self, key: &str) -> Result<(&str, usize)> {
        self.get(key).ok_or(Error::Parse {
            line: self.raw.line,
            msg: format!("missing key: {key}"),
        })
    }

    fn req_f64(&self, key: &str) -> Result<(f64, usize)> {
        let (v, line) = self.require(key)?;
        Ok((parse_f64(key, v, line)?, line))
    }

    fn opt_f64(&self, key: &str) -> Result<Option<(f64, usize)>> {
        match self.get(key) {
            Some((v, line)) => Ok(Some((parse_f64(key, v, line)?, line))),
            None => Ok(None),
        }
    }

    fn req_u32(&self, key: &str) -> Result<(u32, usize)> {
        let (v, line) = self.require(key)?;
        let parsed = v.parse::<u32>().map_err(|_| Error::Parse {
            line,
            msg: format!("{key}: expected a nonnegative integer, got '{v}'"),
        })?;
        Ok((parsed, line))
    }

    fn opt_u32(&self, key: &str) -> Result<Option<(u32, usize)>> {
        match self.get(key) {
            Some((v, line)) => {
                let parsed = v.parse::<u32>().map_err(|_| Error::Parse {
                    line,
                    msg: format!("{key}: expected a nonnegative integer, got '{v}'"),
                })?;
                Ok(Some((parsed, line)))
            }
            None => Ok(None),
        }
    }

    fn opt_bool(&self, key: &str) -> Result<Option<bool>> {
        match self.get(key) {
            Some(("true", _)) => Ok(Some(true)),
            Some(("false", _)) => Ok(Some(false)),
            Some((v, line)) => Err(Error::Parse {
                line,
                msg: format!("{key}: expected true or false, got '{v}'"),
            }),
            None => Ok(None),
        }
    }

    fn all(&self, key: &str) -> Vec<(&str, usize)> {
        self.raw
            .entries
            .iter()
            .filter(|(k, _, _)| k == key)
            .map(|(_, v, l)| (v.as_str(), *l))
            .collect()
    }
}

fn parse_f64(key: &str, v: &str, line: usize) -> Result<f64> {
    v.parse::<f64>().map_err(|_| Error::Parse {
        line,
        msg: format!("{key}: expected a number, got '{v}'"),
    })
}

fn parse_f64_list(key: &str, v: &str, line: usize) -> Result<Vec<f64>> {
    v.split(',')
        .map(|item| parse_f64(key, item.trim(), line))
        .collect()
}

/// Re-tag a semantic validation error with the line it came from.
fn at_line(line: usize, err: Error) -> Error {
    match err {
        Error::Config(msg) | Error::Domain(msg) => Error::Parse { line, msg },
        other => other,
    }
}

// -------------------------------------------------------------- sections

fn parse_params(view: &SectionView) -> Result<CultureParams> {
    let (b, b_line) = view.req_f64("b")?;
    let (k, _) = view.req_f64("k")?;
    let (c0, _) = view.req_f64("c0")?;
    let alpha = view.opt_f64("alpha")?;
    let a = view.opt_f64("a")?;
    match (alpha, a) {
        (Some((alpha, line)), None) => {
            CultureParams::with_alpha(alpha, b, k, c0).map_err(|e| at_line(line, e))
        }
        (None, Some((a, line))) => {
            CultureParams::from_composition(a, b, k, c0).map_err(|e| at_line(line, e))
        }
        (Some((alpha, line)), Some((a, _))) => {
            CultureParams::with_alpha_and_composition(alpha, a, b, k, c0)
                .map_err(|e| at_line(line, e))
        }
        (None, None) => Err(Error::Parse {
            line: b_line,
            msg: "missing key: alpha (or a)".into(),
        }),
    }
}

fn parse_culture(raw: &RawSection) -> Result<ModeConfig> {
    let allowed = ["alpha", "a", "b", "k", "c0", "t_end", "dt"];
    let view = SectionView::new(raw, &allowed, &[])?;
    let params = parse_params(&view)?;
    let (t_end, t_line) = view.req_f64("t_end")?;
    let (dt, _) = view.req_f64("dt")?;
    if !(t_end > 0.0) || !(dt > 0.0) || dt > t_end {
        return Err(Error::Parse {
            line: t_line,
            msg: format!("need 0 < dt <= t_end, got dt={dt}, t_end={t_end}"),
        });
    }
    Ok(ModeConfig::Culture(CultureRun { params, t_end, dt }))
}

fn parse_sweep(raw: &RawSection) -> Result<ModeConfig> {
    let allowed = [
        "parameter", "values", "alpha", "a", "b", "k", "c0", "t_end", "dt",
    ];
    let view = SectionView::new(raw, &allowed, &[])?;
    let (param_str, p_line) = view.require("parameter")?;
    let parameter = SweepParameter::parse(param_str).map_err(|e| at_line(p_line, e))?;
    let (values_str, v_line) = view.require("values")?;
    let values = parse_f64_list("values", values_str, v_line)?;
    let base = parse_params(&view)?;
    let (t_end, _) = view.req_f64("t_end")?;
    let (dt, _) = view.req_f64("dt")?;
    let spec = SweepSpec {
        parameter,
        values,
        base,
        t_end,
        dt,
    };
    spec.validate().map_err(|e| at_line(v_line, e))?;
    Ok(ModeConfig::Sweep(spec))
}

fn parse_fit(raw: &RawSection) -> Result<ModeConfig> {
    let allowed = [
        "free", "alpha", "k", "b", "alpha_min", "alpha_max", "k_min", "k_max", "b_min", "b_max",
        "obs",
    ];
    let view = SectionView::new(raw, &allowed, &["obs"])?;
    let (free_str, free_line) = view.require("free")?;
    let free = free_str
        .split(',')
        .map(|s| FitParam::parse(s.trim()).map_err(|e| at_line(free_line, e)))
        .collect::<Result<Vec<_>>>()?;

    let mut bounds = Vec::with_capacity(free.len());
    for p in &free {
        let (lo, _) = view.req_f64(&format!("{p}_min"))?;
        let (hi, _) = view.req_f64(&format!("{p}_max"))?;
        bounds.push((lo, hi));
    }
    let fixed = |p: FitParam| -> Result<Option<f64>> {
        if free.contains(&p) {
            Ok(None)
        } else {
            Ok(Some(view.req_f64(p.as_str())?.0))
        }
    };
    let fixed_alpha = fixed(FitParam::Alpha)?;
    let fixed_k = fixed(FitParam::K)?;
    let fixed_b = fixed(FitParam::B)?;

    let mut observed = Vec::new();
    for (v, line) in view.all("obs") {
        let pair = parse_f64_list("obs", v, line)?;
        if pair.len() != 2 {
            return Err(Error::Parse {
                line,
                msg: format!("obs: expected 't, cells', got '{v}'"),
            });
        }
        observed.push((pair[0], pair[1]));
    }

    let spec = FitSpec {
        observed,
        free,
        bounds,
        fixed_alpha,
        fixed_k,
        fixed_b,
    };
    spec.validate().map_err(|e| at_line(free_line, e))?;
    Ok(ModeConfig::Fit(spec))
}

fn parse_organism(raw: &RawSection, activities: Vec<Activity>) -> Result<ModeConfig> {
    let allowed = [
        "baseline_production",
        "antioxidant_capacity",
        "replenish_rate",
        "kill_ratio",
        "episode_threshold",
        "initial_radical_pool",
        "initial_antioxidant_pool",
        "days",
    ];
    let view = SectionView::new(raw, &allowed, &[])?;
    let config = OrganismConfig {
        baseline_production: view.req_f64("baseline_production")?.0,
        antioxidant_capacity: view.req_f64("antioxidant_capacity")?.0,
        replenish_rate: view.req_f64("replenish_rate")?.0,
        kill_ratio: view.req_f64("kill_ratio")?.0,
        episode_threshold: view
            .opt_f64("episode_threshold")?
            .map_or(DEFAULT_EPISODE_THRESHOLD, |(v, _)| v),
    };
    config.validate().map_err(|e| at_line(raw.line, e))?;
    let schedule = Schedule::new(activities).map_err(|e| at_line(raw.line, e))?;
    let initial = OrganismState {
        minute: 0,
        radical_pool: view.opt_f64("initial_radical_pool")?.map_or(0.0, |(v, _)| v),
        antioxidant_pool: view
            .opt_f64("initial_antioxidant_pool")?
            .map_or(config.antioxidant_capacity, |(v, _)| v),
        cumulative_dead: 0,
    };
    let days = view.opt_u32("days")?.map_or(1, |(v, _)| v);
    if days == 0 {
        return Err(Error::Parse {
            line: raw.line,
            msg: "days must be >= 1".into(),
        });
    }
    Ok(ModeConfig::Organism(OrganismRun {
        config,
        schedule,
        initial,
        days,
    }))
}

fn parse_activity(raw: &RawSection) -> Result<Activity> {
    let view = SectionView::new(raw, &["name", "start", "duration", "intensity"], &[])?;
    let activity = Activity {
        name: view.require("name")?.0.to_string(),
        start_minute: view.req_u32("start")?.0,
        duration: view.req_u32("duration")?.0,
        intensity: view.req_f64("intensity")?.0,
    };
    activity.validate().map_err(|e| at_line(raw.line, e))?;
    Ok(activity)
}

/// Parse a config document into a validated run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let sections = lex(text)?;

    let mut mode: Option<(ModeConfig, usize)> = None;
    let mut out_dir = None;
    let mut emit_plot = false;
    let mut organism_raw: Option<&RawSection> = None;
    let mut activities = Vec::new();

    for raw in &sections {
        match raw.name.as_str() {
            "culture" | "sweep" | "fit" | "organism" => {
                if let Some((m, _)) = &mode {
                    return Err(Error::Parse {
                        line: raw.line,
                        msg: format!("mode [{}] conflicts with earlier [{}]", raw.name, m.name()),
                    });
                }
                if raw.name == "organism" {
                    organism_raw = Some(raw);
                    // placeholder; assembled after activities are collected
                    mode = Some((
                        ModeConfig::Organism(OrganismRun {
                            config: OrganismConfig {
                                baseline_production: 0.0,
                                antioxidant_capacity: 0.0,
                                replenish_rate: 0.0,
                                kill_ratio: 0.0,
                                episode_threshold: DEFAULT_EPISODE_THRESHOLD,
                            },
                            schedule: Schedule::default(),
                            initial: OrganismState {
                                minute: 0,
                                radical_pool: 0.0,
                                antioxidant_pool: 0.0,
                                cumulative_dead: 0,
                            },
                            days: 1,
                        }),
                        raw.line,
                    ));
                } else {
                    let parsed = match raw.name.as_str() {
                        "culture" => parse_culture(raw)?,
                        "sweep" => parse_sweep(raw)?,
                        _ => parse_fit(raw)?,
                    };
                    mode = Some((parsed, raw.line));
                }
            }
            "activity" => activities.push(parse_activity(raw)?),
            "output" => {
                let view = SectionView::new(raw, &["dir", "emit_plot"], &[])?;
                out_dir = view.get("dir").map(|(v, _)| PathBuf::from(v));
                emit_plot = view.opt_bool("emit_plot")?.unwrap_or(false);
            }
            other => {
                return Err(Error::Parse {
                    line: raw.line,
                    msg: format!("unknown section: [{other}]"),
                });
            }
        }
    }

    let (mode, mode_line) = mode.ok_or(Error::Parse {
        line: 1,
        msg: "config must contain one of [culture], [sweep], [organism], [fit]".into(),
    })?;
    let mode = if let Some(raw) = organism_raw {
        parse_organism(raw, activities)?
    } else {
        if !activities.is_empty() {
            return Err(Error::Parse {
                line: mode_line,
                msg: "[activity] sections are only valid with [organism]".into(),
            });
        }
        mode
    };

    Ok(RunConfig {
        mode,
        out_dir,
        emit_plot,
    })
}

// -------------------------------------------------------------- renderer

fn push_params(out: &mut String, p: &CultureParams) {
    writeln!(out, "alpha = {}", p.alpha).unwrap();
    if let Some(a) = p.a {
        writeln!(out, "a = {a}").unwrap();
    }
    writeln!(out, "b = {}", p.b).unwrap();
    writeln!(out, "k = {}", p.k).unwrap();
    writeln!(out, "c0 = {}", p.c0).unwrap();
}

/// Canonical text form of a run configuration; `parse_config(render(cfg))`
/// reproduces `cfg` exactly.
pub fn render(cfg: &RunConfig) -> String {
    let mut out = String::new();
    match &cfg.mode {
        ModeConfig::Culture(run) => {
            out.push_str("[culture]\n");
            push_params(&mut out, &run.params);
            writeln!(out, "t_end = {}", run.t_end).unwrap();
            writeln!(out, "dt = {}", run.dt).unwrap();
        }
        ModeConfig::Sweep(spec) => {
            out.push_str("[sweep]\n");
            writeln!(out, "parameter = {}", spec.parameter).unwrap();
            let values: Vec<String> = spec.values.iter().map(|v| v.to_string()).collect();
            writeln!(out, "values = {}", values.join(", ")).unwrap();
            push_params(&mut out, &spec.base);
            writeln!(out, "t_end = {}", spec.t_end).unwrap();
            writeln!(out, "dt = {}", spec.dt).unwrap();
        }
        ModeConfig::Fit(spec) => {
            out.push_str("[fit]\n");
            let free: Vec<&str> = spec.free.iter().map(|p| p.as_str()).collect();
            writeln!(out, "free = {}", free.join(", ")).unwrap();
            for (p, (lo, hi)) in spec.free.iter().zip(&spec.bounds) {
                writeln!(out, "{p}_min = {lo}").unwrap();
                writeln!(out, "{p}_max = {hi}").unwrap();
            }
            if let Some(v) = spec.fixed_alpha {
                writeln!(out, "alpha = {v}").unwrap();
            }
            if let Some(v) = spec.fixed_k {
                writeln!(out, "k = {v}").unwrap();
            }
            if let Some(v) = spec.fixed_b {
                writeln!(out, "b = {v}").unwrap();
            }
            for (t, c) in &spec.observed {
                writeln!(out, "obs = {t}, {c}").unwrap();
            }
        }
        ModeConfig::Organism(run) => {
            out.push_str("[organism]\n");
            writeln!(out, "baseline_production = {}", run.config.baseline_production).unwrap();
            writeln!(out, "antioxidant_capacity = {}", run.config.antioxidant_capacity).unwrap();
            writeln!(out, "replenish_rate = {}", run.config.replenish_rate).unwrap();
            writeln!(out, "kill_ratio = {}", run.config.kill_ratio).unwrap();
            writeln!(out, "episode_threshold = {}", run.config.episode_threshold).unwrap();
            writeln!(out, "initial_radical_pool = {}", run.initial.radical_pool).unwrap();
            writeln!(out, "initial_antioxidant_pool = {}", run.initial.antioxidant_pool).unwrap();
            writeln!(out, "days = {}", run.days).unwrap();
            for a in &run.schedule.activities {
                out.push_str("\n[activity]\n");
                writeln!(out, "name = {}", a.name).unwrap();
                writeln!(out, "start = {}", a.start_minute).unwrap();
                writeln!(out, "duration = {}", a.duration).unwrap();
                writeln!(out, "intensity = {}", a.intensity).unwrap();
            }
        }
    }
    out.push_str("\n[output]\n");
    if let Some(dir) = &cfg.out_dir {
        writeln!(out, "dir = {}", dir.display()).unwrap();
    }
    writeln!(out, "emit_plot = {}", cfg.emit_plot).unwrap();
    out
}
