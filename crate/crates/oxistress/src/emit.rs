//! CSV and plot-data emission.
//!
//! Schemas (headers are exact):
//! - `culture.csv`: `t,cells_raw,radicals,cells_clamped`
//! - `sweep_summary.csv`: `param_name,param_value,extinction_time`
//! - `organism.csv`: `minute,activity,production,neutralized,dead,radical_pool,antioxidant_pool,cumulative_dead`
//! - `fit_result.csv`: `param,estimate,fixed_or_free` plus a trailing residual comment
//!
//! Cell counts and radical levels are written with a fixed 9-decimal format,
//! times with trailing zeros trimmed, so identical inputs yield byte-identical
//! files. The math layer never clamps; the clamped display column is applied
//! here only.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{ModeConfig, RunConfig};
use crate::error::{Error, Result};
use crate::fit::FitResult;
use crate::model::Trajectory;
use crate::organism::SimReport;
use crate::plot::{render_chart, Series};
use crate::sweep::SweepResult;

/// Fixed 9-decimal value formatting (stable across platforms).
pub fn fmt_value(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v }; // normalize -0
    format!("{v:.9}")
}

/// Time/parameter formatting: 9 decimals with trailing zeros trimmed.
pub fn fmt_time(v: f64) -> String {
    let s = fmt_value(v);
    let s = s.trim_end_matches('0');
    s.trim_end_matches('.').to_string()
}

/// One run's results, ready for serialization.
#[derive(Debug, Clone, PartialEq)]
pub enum RunOutcome {
    Culture(Trajectory),
    Sweep(SweepResult),
    Organism(Vec<SimReport>),
    Fit(FitResult),
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn culture_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,cells_raw,radicals,cells_clamped\n");
    for i in 0..traj.len() {
        let c = traj.cells[i];
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_time(traj.times[i]),
            fmt_value(c),
            fmt_value(traj.radicals[i]),
            fmt_value(c.max(0.0)),
        ));
    }
    out
}

fn organism_csv(report: &SimReport) -> String {
    let mut out = String::from(
        "minute,activity,production,neutralized,dead,radical_pool,antioxidant_pool,cumulative_dead\n",
    );
    for r in &report.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.minute,
            r.activity.as_deref().unwrap_or("rest"),
            fmt_value(r.production),
            fmt_value(r.neutralized),
            r.dead,
            fmt_value(r.radical_pool),
            fmt_value(r.antioxidant_pool),
            r.cumulative_dead,
        ));
    }
    out
}

fn fit_csv(fit: &FitResult) -> String {
    let mut out = String::from("param,estimate,fixed_or_free\n");
    for (name, value, param) in [
        ("alpha", fit.alpha, crate::fit::FitParam::Alpha),
        ("k", fit.k, crate::fit::FitParam::K),
        ("b", fit.b, crate::fit::FitParam::B),
    ] {
        let tag = if fit.free.contains(&param) { "free" } else { "fixed" };
        out.push_str(&format!("{name},{},{tag}\n", fmt_value(value)));
    }
    out.push_str(&format!("c0,{},fixed\n", fmt_value(fit.c0)));
    out.push_str(&format!(
        "# residual = {:e}, iterations = {}\n",
        fit.residual, fit.iterations
    ));
    if fit.flatness_warning {
        out.push_str("# warning: flat data, alpha pinned at its lower bound\n");
    }
    out
}

/// Write all files for the run; returns the paths written.
pub fn emit_outputs(outcome: &RunOutcome, cfg: &RunConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();
    let emit = |name: &str, contents: String, written: &mut Vec<PathBuf>| -> Result<()> {
        let path = out_dir.join(name);
        write_file(&path, contents.as_bytes())?;
        written.push(path);
        Ok(())
    };

    match (outcome, &cfg.mode) {
        (RunOutcome::Culture(traj), ModeConfig::Culture(_)) => {
            emit("culture.csv", culture_csv(traj), &mut written)?;
            if cfg.emit_plot {
                let mut plot = String::from("t,cells_clamped,radicals\n");
                for i in 0..traj.len() {
                    plot.push_str(&format!(
                        "{},{},{}\n",
                        fmt_time(traj.times[i]),
                        fmt_value(traj.cells[i].max(0.0)),
                        fmt_value(traj.radicals[i]),
                    ));
                }
                emit("culture_plot.csv", plot, &mut written)?;
                let series = [
                    Series {
                        label: "cells".into(),
                        points: traj
                            .times
                            .iter()
                            .zip(&traj.cells)
                            .map(|(&t, &c)| (t, c.max(0.0)))
                            .collect(),
                    },
                    Series {
                        label: "radicals".into(),
                        points: traj.times.iter().zip(&traj.radicals).map(|(&t, &r)| (t, r)).collect(),
                    },
                ];
                let png = out_dir.join("culture_plot.png");
                render_chart(&png, &series)?;
                written.push(png);
            }
        }
        (RunOutcome::Sweep(result), ModeConfig::Sweep(_)) => {
            let mut summary = String::from("param_name,param_value,extinction_time\n");
            for (i, entry) in result.entries.iter().enumerate() {
                summary.push_str(&format!(
                    "{},{},{}\n",
                    result.parameter,
                    fmt_time(entry.value),
                    entry.extinction_time.map_or("none".to_string(), fmt_value),
                ));
                emit(
                    &format!("sweep_{}_{:02}.csv", result.parameter, i),
                    culture_csv(&entry.trajectory),
                    &mut written,
                )?;
            }
            emit("sweep_summary.csv", summary, &mut written)?;
            if cfg.emit_plot {
                let times = &result.entries[0].trajectory.times;
                let mut plot = String::from("t");
                for entry in &result.entries {
                    plot.push_str(&format!(",{}={}", result.parameter, fmt_time(entry.value)));
                }
                plot.push('\n');
                for (i, &t) in times.iter().enumerate() {
                    plot.push_str(&fmt_time(t));
                    for entry in &result.entries {
                        plot.push_str(&format!(",{}", fmt_value(entry.trajectory.cells[i].max(0.0))));
                    }
                    plot.push('\n');
                }
                emit("sweep_plot.csv", plot, &mut written)?;
                let series: Vec<Series> = result
                    .entries
                    .iter()
                    .map(|e| Series {
                        label: format!("{}={}", result.parameter, fmt_time(e.value)),
                        points: e
                            .trajectory
                            .times
                            .iter()
                            .zip(&e.trajectory.cells)
                            .map(|(&t, &c)| (t, c.max(0.0)))
                            .collect(),
                    })
                    .collect();
                let png = out_dir.join("sweep_plot.png");
                render_chart(&png, &series)?;
                written.push(png);
            }
        }
        (RunOutcome::Organism(reports), ModeConfig::Organism(_)) => {
            for (day, report) in reports.iter().enumerate() {
                let name = if reports.len() == 1 {
                    "organism.csv".to_string()
                } else {
                    format!("organism_day{}.csv", day + 1)
                };
                emit(&name, organism_csv(report), &mut written)?;
            }
            if cfg.emit_plot {
                let report = &reports[0];
                let mut plot = String::from("minute,dead,radical_pool,antioxidant_pool\n");
                for r in &report.records {
                    plot.push_str(&format!(
                        "{},{},{},{}\n",
                        r.minute,
                        r.dead,
                        fmt_value(r.radical_pool),
                        fmt_value(r.antioxidant_pool),
                    ));
                }
                emit("organism_plot.csv", plot, &mut written)?;
                let series = [
                    Series {
                        label: "dead".into(),
                        points: report
                            .records
                            .iter()
                            .map(|r| (r.minute as f64, r.dead as f64))
                            .collect(),
                    },
                    Series {
                        label: "antioxidants".into(),
                        points: report
                            .records
                            .iter()
                            .map(|r| (r.minute as f64, r.antioxidant_pool))
                            .collect(),
                    },
                ];
                let png = out_dir.join("organism_plot.png");
                render_chart(&png, &series)?;
                written.push(png);
            }
        }
        (RunOutcome::Fit(fit), ModeConfig::Fit(spec)) => {
            emit("fit_result.csv", fit_csv(fit), &mut written)?;
            if cfg.emit_plot {
                let mut plot = String::from("t,observed,fitted\n");
                let fitted = |t: f64| {
                    fit.c0 - fit.alpha * fit.k * t * t * t / 6.0 - fit.alpha * fit.b * t
                };
                for &(t, y) in &spec.observed {
                    plot.push_str(&format!(
                        "{},{},{}\n",
                        fmt_time(t),
                        fmt_value(y),
                        fmt_value(fitted(t)),
                    ));
                }
                emit("fit_plot.csv", plot, &mut written)?;
                let series = [
                    Series {
                        label: "observed".into(),
                        points: spec.observed.clone(),
                    },
                    Series {
                        label: "fitted".into(),
                        points: spec.observed.iter().map(|&(t, _)| (t, fitted(t))).collect(),
                    },
                ];
                let png = out_dir.join("fit_plot.png");
                render_chart(&png, &series)?;
                written.push(png);
            }
        }
        (outcome, mode) => {
            return Err(Error::Internal(format!(
                "result {outcome:?} does not match mode '{}'",
                mode.name()
            )));
        }
    }
    Ok(written)
}

/// Parse a CSV emitted by this module back into header + string rows.
/// Comment lines (leading '#') are skipped.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines
        .next()
        .ok_or(Error::Internal("empty csv".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row: Vec<String> = line.split(',').map(str::to_string).collect();
        if row.len() != header.len() {
            return Err(Error::Internal(format!(
                "csv row {} has {} fields, header has {}",
                i + 2,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::model::{CultureParams, Trajectory};

    #[test]
    fn value_formatting() {
        assert_eq!(fmt_value(100.0), "100.000000000");
        assert_eq!(fmt_value(0.2), "0.200000000");
        assert_eq!(fmt_value(-0.0), "0.000000000");
        assert_eq!(fmt_time(0.0), "0");
        assert_eq!(fmt_time(0.1), "0.1");
        assert_eq!(fmt_time(2.5), "2.5");
        assert_eq!(fmt_time(0.1 + 0.2), "0.3");
    }

    #[test]
    fn culture_first_row_matches_schema() {
        let p = CultureParams::reference_scenario();
        let traj = Trajectory::from_closed_form(&p, 12.0, 0.1).unwrap();
        let csv = culture_csv(&traj);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,cells_raw,radicals,cells_clamped");
        assert_eq!(
            lines.next().unwrap(),
            "0,100.000000000,0.200000000,100.000000000"
        );
    }

    #[test]
    fn emitted_csvs_reparse() {
        let p = CultureParams::reference_scenario();
        let traj = Trajectory::from_closed_form(&p, 12.0, 0.5).unwrap();
        let (header, rows) = parse_csv(&culture_csv(&traj)).unwrap();
        assert_eq!(header, ["t", "cells_raw", "radicals", "cells_clamped"]);
        assert_eq!(rows.len(), traj.len());
        for row in rows {
            for field in &row {
                field.parse::<f64>().unwrap();
            }
        }
    }

    #[test]
    fn emit_is_byte_deterministic() {
        let text = "[culture]\nalpha = 0.8\nb = 0.2\nk = 1\nc0 = 100\nt_end = 12\ndt = 0.1\n[output]\nemit_plot = true\n";
        let cfg = parse_config(text).unwrap();
        let run = match &cfg.mode {
            crate::config::ModeConfig::Culture(run) => run.clone(),
            _ => unreachable!(),
        };
        let traj = Trajectory::from_closed_form(&run.params, run.t_end, run.dt).unwrap();
        let outcome = RunOutcome::Culture(traj);
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let w1 = emit_outputs(&outcome, &cfg, d1.path()).unwrap();
        let w2 = emit_outputs(&outcome, &cfg, d2.path()).unwrap();
        assert_eq!(w1.len(), w2.len());
        for (a, b) in w1.iter().zip(&w2) {
            assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
        }
    }

    #[test]
    fn mode_mismatch_is_internal_error() {
        let text = "[culture]\nalpha = 0.8\nb = 0.2\nk = 1\nc0 = 100\nt_end = 12\ndt = 0.1\n";
        let cfg = parse_config(text).unwrap();
        let fit = FitResult {
            alpha: 0.8,
            k: 1.0,
            b: 0.2,
            c0: 100.0,
            free: vec![],
            residual: 0.0,
            iterations: 0,
            flatness_warning: false,
        };
        let dir = tempfile::tempdir().unwrap();
        let err = emit_outputs(&RunOutcome::Fit(fit), &cfg, dir.path()).unwrap_err();
        assert!(matches!(err, Error::Internal(_)));
    }
}
