//! Experiment orchestration: equidistribution discrepancy sweeps, window
//! ratio convergence, and the level-weight (Hecke-degree) trend, with
//! cache-aware enumeration and machine-readable reports.
//!
//! Reports are deterministic: identical config and seed produce
//! byte-identical JSON regardless of thread count. Wall-clock timings are
//! therefore kept out of the report document and written to a separate
//! `*.timings.csv` side file.

pub mod cache;
pub mod config;
pub mod stats;

use crate::error::{Error, Result};
use crate::lattice::hecke_degree;
use crate::measure::{estimate_measure, MeasureEstimate, MeasureParams};
use crate::rng::mix64;
use crate::varieties::PolynomialFamily;
use cache::cached_enumerate;
use config::{CellGrid, ExperimentConfig, ExperimentKind};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub experiment: String,
    pub family: String,
    pub config: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equidist: Option<EquidistSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<RatioSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<OmegaSection>,
    pub errors: Vec<LevelError>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelError {
    pub m: u64,
    pub message: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellInfo {
    pub index: usize,
    pub mu: f64,
    pub mu_std_error: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquidistRow {
    pub m: u64,
    pub total: u64,
    pub cell_counts: Vec<u64>,
    /// Total-variation distance between the empirical cell distribution
    /// and the measure-estimate cell distribution; null when the level
    /// has no points.
    pub discrepancy: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquidistSection {
    pub window_hash: String,
    pub grid_axes: (usize, usize),
    pub grid_split: (usize, usize),
    pub cells: Vec<CellInfo>,
    pub mu_window: f64,
    pub rows: Vec<EquidistRow>,
    pub spearman_level_vs_discrepancy: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioRow {
    pub m: u64,
    pub count_1: u64,
    pub count_2: u64,
    /// count_1 / count_2; null (and flagged) when count_2 = 0.
    pub ratio: Option<f64>,
    pub flagged: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioSection {
    pub window_hash_1: String,
    pub window_hash_2: String,
    pub mu_1: f64,
    pub mu_2: f64,
    pub mu_ratio: Option<f64>,
    pub mu_ratio_std_error: Option<f64>,
    pub rows: Vec<RatioRow>,
    /// Median |count ratio − μ̂ ratio| over the first and last thirds of
    /// the valid rows.
    pub first_third_median_abs_dev: Option<f64>,
    pub last_third_median_abs_dev: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OmegaRow {
    pub m: u64,
    pub total: u64,
    pub hecke_degree: i128,
    /// total / hecke_degree.
    pub normalized: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OmegaSection {
    pub n: usize,
    pub rows: Vec<OmegaRow>,
    pub spearman_count_vs_degree: Option<f64>,
    pub cv_normalized_last_third: Option<f64>,
}

/// A finished run: the canonical report plus per-level wall times
/// (milliseconds), which live outside the report on purpose.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: Report,
    pub timings: Vec<(u64, u128)>,
}

impl RunOutput {
    pub fn had_errors(&self) -> bool {
        !self.report.errors.is_empty()
    }
}

fn derived_seed(seed: u64, tag: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(tag.wrapping_add(index.wrapping_mul(0x9e37_79b9))))
}

/// Run the experiment named by the config.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    match config.experiment {
        ExperimentKind::Equidist => run_equidist(config),
        ExperimentKind::Ratio => run_ratio_test(config),
        ExperimentKind::Omega => run_omega_trend(config),
    }
}

fn base_report(config: &ExperimentConfig) -> Report {
    Report {
        schema_version: REPORT_SCHEMA_VERSION,
        experiment: config.experiment.as_str().to_string(),
        family: config.family.id_string(),
        config: config.echo(),
        equidist: None,
        ratio: None,
        omega: None,
        errors: Vec::new(),
    }
}

/// Process levels with a static round-robin partition across threads;
/// results are reassembled in level order so scheduling cannot leak into
/// the report.
fn for_levels<T: Send>(
    levels: &[u64],
    threads: usize,
    job: &(dyn Fn(u64) -> Result<T> + Sync),
) -> Vec<(u64, Result<T>, u128)> {
    let timed = |m: u64| {
        let start = Instant::now();
        let r = job(m);
        (m, r, start.elapsed().as_millis())
    };
    let t = threads.max(1).min(levels.len().max(1));
    if t <= 1 || levels.len() <= 1 {
        return levels.iter().map(|&m| timed(m)).collect();
    }
    let mut slots: Vec<Option<(u64, Result<T>, u128)>> = (0..levels.len()).map(|_| None).collect();
    let partials: Vec<Vec<(usize, (u64, Result<T>, u128))>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..t)
            .map(|w| {
                let levels = &levels;
                let timed = &timed;
                scope.spawn(move || {
                    let mut local = Vec::new();
                    let mut i = w;
                    while i < levels.len() {
                        local.push((i, timed(levels[i])));
                        i += t;
                    }
                    local
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    for part in partials {
        for (i, v) in part {
            slots[i] = Some(v);
        }
    }
    slots.into_iter().map(|s| s.unwrap()).collect()
}

/// Discrepancy sweep: for each level, count points per cell and compare
/// the empirical cell distribution with the cell measure distribution.
pub fn run_equidist(config: &ExperimentConfig) -> Result<RunOutput> {
    let grid = CellGrid::new(&config.window, config.grid_axes, config.grid_split)?;

    // One measure run per cell, shared by every level.
    let mut cell_estimates: Vec<MeasureEstimate> = Vec::with_capacity(grid.len());
    for (i, cell) in grid.cells.iter().enumerate() {
        let params = MeasureParams {
            epsilon: config.epsilon,
            samples: config.samples,
            seed: derived_seed(config.seed, 0xce11, i as u64),
            threads: config.threads,
        };
        cell_estimates.push(estimate_measure(&config.family, cell, &params)?);
    }
    let mu_window: f64 = cell_estimates.iter().map(|e| e.value).sum();
    if mu_window <= 0.0 {
        return Err(Error::invalid_argument(
            "all cell measure estimates are zero; enlarge samples or the window",
        ));
    }
    let cell_probs: Vec<f64> = cell_estimates.iter().map(|e| e.value / mu_window).collect();

    let per_level_threads = if config.levels.len() > 1 {
        1
    } else {
        config.threads
    };
    let enum_opts = config.enumeration_options(per_level_threads);
    let cache_dir = config.cache_dir.as_deref();
    let family = &config.family;
    let window = &config.window;
    let grid_ref = &grid;
    let probs = &cell_probs;

    let job = move |m: u64| -> Result<EquidistRow> {
        let ps = cached_enumerate(cache_dir, family, m, window, &enum_opts)?;
        let mut counts = vec![0u64; grid_ref.len()];
        for p in &ps.points {
            let proj = family.project(p, m)?;
            counts[grid_ref.cell_of(proj.coords())] += 1;
        }
        let total = ps.len() as u64;
        let discrepancy = if total == 0 {
            None
        } else {
            let tv = counts
                .iter()
                .zip(probs)
                .map(|(&c, &p)| (c as f64 / total as f64 - p).abs())
                .sum::<f64>()
                / 2.0;
            Some(tv)
        };
        Ok(EquidistRow {
            m,
            total,
            cell_counts: counts,
            discrepancy,
        })
    };

    let results = for_levels(&config.levels, config.threads, &job);
    let mut report = base_report(config);
    let mut rows = Vec::new();
    let mut timings = Vec::new();
    for (m, res, ms) in results {
        timings.push((m, ms));
        match res {
            Ok(row) => rows.push(row),
            Err(e) => report.errors.push(LevelError {
                m,
                message: e.to_string(),
            }),
        }
    }
    let pairs: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.discrepancy.map(|d| (r.m as f64, d)))
        .collect();
    report.equidist = Some(EquidistSection {
        window_hash: config.window.hash_hex(),
        grid_axes: config.grid_axes,
        grid_split: config.grid_split,
        cells: cell_estimates
            .iter()
            .enumerate()
            .map(|(i, e)| CellInfo {
                index: i,
                mu: e.value,
                mu_std_error: e.std_error,
            })
            .collect(),
        mu_window,
        rows,
        spearman_level_vs_discrepancy: stats::spearman(&pairs),
    });
    Ok(RunOutput { report, timings })
}

/// Two-window ratio test: per-level count ratios against the measure
/// ratio, with convergence summarised by first-third vs last-third median
/// absolute deviation.
pub fn run_ratio_test(config: &ExperimentConfig) -> Result<RunOutput> {
    let window2 = config
        .window2
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("ratio experiment needs window2".into()))?;

    let params = |tag: u64| MeasureParams {
        epsilon: config.epsilon,
        samples: config.samples,
        seed: derived_seed(config.seed, 0x4a71, tag),
        threads: config.threads,
    };
    let mu1 = estimate_measure(&config.family, &config.window, &params(1))?;
    let mu2 = estimate_measure(&config.family, window2, &params(2))?;
    let mu_ratio = if mu2.value > 0.0 {
        Some(mu1.value / mu2.value)
    } else {
        None
    };
    let mu_ratio_std_error = match (mu_ratio, mu1.std_error, mu2.std_error) {
        (Some(r), Some(s1), Some(s2)) if mu1.value > 0.0 => {
            Some(r * ((s1 / mu1.value).powi(2) + (s2 / mu2.value).powi(2)).sqrt())
        }
        _ => None,
    };

    let per_level_threads = if config.levels.len() > 1 {
        1
    } else {
        config.threads
    };
    let enum_opts = config.enumeration_options(per_level_threads);
    let cache_dir = config.cache_dir.as_deref();
    let family = &config.family;
    let w1 = &config.window;

    let job = move |m: u64| -> Result<RatioRow> {
        let c1 = cached_enumerate(cache_dir, family, m, w1, &enum_opts)?.len() as u64;
        let c2 = cached_enumerate(cache_dir, family, m, window2, &enum_opts)?.len() as u64;
        let (ratio, flagged) = if c2 == 0 {
            (None, true)
        } else {
            (Some(c1 as f64 / c2 as f64), false)
        };
        Ok(RatioRow {
            m,
            count_1: c1,
            count_2: c2,
            ratio,
            flagged,
        })
    };

    let results = for_levels(&config.levels, config.threads, &job);
    let mut report = base_report(config);
    let mut rows = Vec::new();
    let mut timings = Vec::new();
    for (m, res, ms) in results {
        timings.push((m, ms));
        match res {
            Ok(row) => rows.push(row),
            Err(e) => report.errors.push(LevelError {
                m,
                message: e.to_string(),
            }),
        }
    }

    let (first, last) = match mu_ratio {
        Some(r) => {
            let devs: Vec<f64> = rows
                .iter()
                .filter_map(|row| row.ratio.map(|x| (x - r).abs()))
                .collect();
            if devs.is_empty() {
                (None, None)
            } else {
                let (a, b) = stats::thirds(&devs);
                (stats::median(a), stats::median(b))
            }
        }
        None => (None, None),
    };

    report.ratio = Some(RatioSection {
        window_hash_1: config.window.hash_hex(),
        window_hash_2: window2.hash_hex(),
        mu_1: mu1.value,
        mu_2: mu2.value,
        mu_ratio,
        mu_ratio_std_error,
        rows,
        first_third_median_abs_dev: first,
        last_third_median_abs_dev: last,
    });
    Ok(RunOutput { report, timings })
}

/// Level-weight trend for the determinant family: counts against Hecke
/// degrees.
pub fn run_omega_trend(config: &ExperimentConfig) -> Result<RunOutput> {
    let PolynomialFamily::Determinant { n } = &config.family else {
        return Err(Error::UnsupportedFamily {
            family: config.family.id_string(),
            reason: "the level-weight trend uses the determinant family's Hecke degrees".into(),
        });
    };
    let n = *n;

    let per_level_threads = if config.levels.len() > 1 {
        1
    } else {
        config.threads
    };
    let enum_opts = config.enumeration_options(per_level_threads);
    let cache_dir = config.cache_dir.as_deref();
    let family = &config.family;
    let window = &config.window;

    let job = move |m: u64| -> Result<OmegaRow> {
        let total = cached_enumerate(cache_dir, family, m, window, &enum_opts)?.len() as u64;
        let degree = hecke_degree(n, m)?;
        Ok(OmegaRow {
            m,
            total,
            hecke_degree: degree,
            normalized: total as f64 / degree as f64,
        })
    };

    let results = for_levels(&config.levels, config.threads, &job);
    let mut report = base_report(config);
    let mut rows = Vec::new();
    let mut timings = Vec::new();
    for (m, res, ms) in results {
        timings.push((m, ms));
        match res {
            Ok(row) => rows.push(row),
            Err(e) => report.errors.push(LevelError {
                m,
                message: e.to_string(),
            }),
        }
    }

    let pairs: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.total as f64, r.hecke_degree as f64))
        .collect();
    let normalized: Vec<f64> = rows.iter().map(|r| r.normalized).collect();
    let (_, last) = stats::thirds(&normalized);
    report.omega = Some(OmegaSection {
        n,
        rows,
        spearman_count_vs_degree: stats::spearman(&pairs),
        cv_normalized_last_third: stats::coefficient_of_variation(last),
    });
    Ok(RunOutput { report, timings })
}

/// Canonical JSON encoding of a report (pretty, trailing newline).
pub fn report_json(report: &Report) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(report)
        .map_err(|e| Error::invalid_argument(format!("report serialisation: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(d) = dir {
        std::fs::create_dir_all(d)?;
    }
    let tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))?;
    tmp.as_file().write_all(bytes).map_err(Error::Io)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn side_path(out: &Path, name: &str) -> std::path::PathBuf {
    out.parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."))
        .join(name)
}

/// Write the report JSON atomically plus the flat CSV side files, written
/// next to the report: `levels.csv` and `cells.csv` for discrepancy runs,
/// `ratio.csv` / `omega.csv` for the other experiments, and `timings.csv`
/// always. Side files carry no report stem, so give each report its own
/// directory.
pub fn write_outputs(out: &Path, output: &RunOutput) -> Result<()> {
    atomic_write(out, &report_json(&output.report)?)?;

    if let Some(eq) = &output.report.equidist {
        let mut levels = String::from("m,count,discrepancy\n");
        for r in &eq.rows {
            let d = r.discrepancy.map(|d| format!("{d:?}")).unwrap_or_default();
            levels.push_str(&format!("{},{},{}\n", r.m, r.total, d));
        }
        atomic_write(&side_path(out, "levels.csv"), levels.as_bytes())?;

        let mut cells = String::from("m,cell_index,count,mu,mu_stderr\n");
        for r in &eq.rows {
            for (i, &c) in r.cell_counts.iter().enumerate() {
                let mu = eq.cells[i].mu;
                let se = eq.cells[i]
                    .mu_std_error
                    .map(|s| format!("{s:?}"))
                    .unwrap_or_default();
                cells.push_str(&format!("{},{},{},{:?},{}\n", r.m, i, c, mu, se));
            }
        }
        atomic_write(&side_path(out, "cells.csv"), cells.as_bytes())?;
    }

    if let Some(ratio) = &output.report.ratio {
        let mut csv = String::from("m,count_1,count_2,ratio,flagged\n");
        for r in &ratio.rows {
            let ratio_s = r.ratio.map(|x| format!("{x:?}")).unwrap_or_default();
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                r.m, r.count_1, r.count_2, ratio_s, r.flagged
            ));
        }
        atomic_write(&side_path(out, "ratio.csv"), csv.as_bytes())?;
    }

    if let Some(omega) = &output.report.omega {
        let mut csv = String::from("m,count,hecke_degree,normalized\n");
        for r in &omega.rows {
            csv.push_str(&format!(
                "{},{},{},{:?}\n",
                r.m, r.total, r.hecke_degree, r.normalized
            ));
        }
        atomic_write(&side_path(out, "omega.csv"), csv.as_bytes())?;
    }

    let mut timings = String::from("m,wall_ms\n");
    for (m, ms) in &output.timings {
        timings.push_str(&format!("{m},{ms}\n"));
    }
    atomic_write(&side_path(out, "timings.csv"), timings.as_bytes())?;
    Ok(())
}
