//! Experiment configuration: a flat key=value file, plus the cell grid
//! derived from it.
//!
//! Recognised keys (paths are resolved relative to the config file):
//!
//! ```text
//! experiment = equidist | ratio | omega
//! family     = det | pff | quad
//! n          = 2                  # det / pff matrix size parameter
//! signature  = 2,2                # quad
//! qdiag      = 1,1,-1,-1          # quad diagonal form, or:
//! qcoeffs    = form.txt           # quad coefficient file, lines "i j q" (1-based, i <= j)
//! window     = window.txt         # N lines "lo hi"
//! window2    = other.txt          # ratio experiment only
//! levels     = 50..5000:150       # or a..b (step 1), or m1,m2,m3
//! fundamental_filter = true       # keep fundamental discriminants only
//! grid_axes  = 0,1                # equidist: the two split axes
//! grid       = 2x4                # equidist: split counts for those axes
//! epsilon    = 0.01
//! samples    = 1000000
//! seed       = 42
//! threads    = 1
//! enum_budget  = 10000000000
//! brute_budget = 100000000
//! cache_dir  = cache/
//! ```

use crate::enumeration::{EnumerationOptions, Window, DEFAULT_BRUTE_BUDGET, DEFAULT_SEARCH_BUDGET};
use crate::error::{Error, Result};
use crate::orbits::is_fundamental_discriminant;
use crate::varieties::{coeff_index, PolynomialFamily, QuadraticForm};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Equidist,
    Ratio,
    Omega,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Equidist => "equidist",
            ExperimentKind::Ratio => "ratio",
            ExperimentKind::Omega => "omega",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub family: PolynomialFamily,
    pub levels: Vec<u64>,
    pub fundamental_filter: bool,
    pub window: Window,
    pub window2: Option<Window>,
    pub grid_axes: (usize, usize),
    pub grid_split: (usize, usize),
    pub epsilon: f64,
    pub samples: u64,
    pub seed: u64,
    pub threads: usize,
    pub enum_budget: u128,
    pub brute_budget: u128,
    pub cache_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn enumeration_options(&self, threads: usize) -> EnumerationOptions {
        EnumerationOptions {
            threads,
            budget: self.enum_budget,
            brute_budget: self.brute_budget,
        }
    }

    /// Semantic parameters of the run, echoed into the report. Excludes
    /// scheduling and storage knobs (threads, cache, paths) so that
    /// reports are byte-identical whenever the mathematics is identical.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut e = BTreeMap::new();
        e.insert("experiment".into(), self.experiment.as_str().to_string());
        e.insert("family".into(), self.family.id_string());
        e.insert(
            "levels".into(),
            self.levels
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        e.insert("window_hash".into(), self.window.hash_hex());
        if let Some(w2) = &self.window2 {
            e.insert("window2_hash".into(), w2.hash_hex());
        }
        if self.experiment == ExperimentKind::Equidist {
            e.insert(
                "grid_axes".into(),
                format!("{},{}", self.grid_axes.0, self.grid_axes.1),
            );
            e.insert(
                "grid".into(),
                format!("{}x{}", self.grid_split.0, self.grid_split.1),
            );
        }
        e.insert("epsilon".into(), format!("{:?}", self.epsilon));
        e.insert("samples".into(), self.samples.to_string());
        e.insert("seed".into(), self.seed.to_string());
        e.insert("enum_budget".into(), self.enum_budget.to_string());
        e.insert("brute_budget".into(), self.brute_budget.to_string());
        e
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.family.ambient_dim();
        if self.window.dim() != n {
            return Err(Error::InvalidConfig(format!(
                "window has {} axes, family needs {n}",
                self.window.dim()
            )));
        }
        if let Some(w2) = &self.window2 {
            if w2.dim() != n {
                return Err(Error::InvalidConfig("window2 dimension mismatch".into()));
            }
        }
        if self.levels.is_empty() {
            return Err(Error::InvalidConfig(
                "level sequence is empty (after filtering)".into(),
            ));
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "levels must be strictly increasing".into(),
            ));
        }
        if self.experiment == ExperimentKind::Equidist {
            let (a, b) = self.grid_axes;
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidConfig(format!(
                    "grid axes ({a}, {b}) invalid for dimension {n}"
                )));
            }
            if self.grid_split.0 == 0 || self.grid_split.1 == 0 {
                return Err(Error::InvalidConfig(
                    "grid split counts must be >= 1".into(),
                ));
            }
        }
        if self.experiment == ExperimentKind::Ratio && self.window2.is_none() {
            return Err(Error::InvalidConfig(
                "ratio experiment needs window2".into(),
            ));
        }
        if self.experiment == ExperimentKind::Omega
            && !matches!(self.family, PolynomialFamily::Determinant { .. })
        {
            return Err(Error::InvalidConfig(
                "the level-weight trend is defined for the determinant family only".into(),
            ));
        }
        Ok(())
    }
}

/// The grid of sub-windows splitting two designated axes. Cells share
/// faces exactly (neighbouring edges are the same f64), and points are
/// assigned by half-open binning with the top edge closed, so each point
/// lands in exactly one cell.
#[derive(Debug, Clone)]
pub struct CellGrid {
    pub axes: (usize, usize),
    pub split: (usize, usize),
    pub cells: Vec<Window>,
    edges0: Vec<f64>,
    edges1: Vec<f64>,
}

impl CellGrid {
    pub fn new(window: &Window, axes: (usize, usize), split: (usize, usize)) -> Result<Self> {
        let edges = |axis: usize, parts: usize| -> Vec<f64> {
            let (lo, hi) = window.bounds()[axis];
            (0..=parts)
                .map(|k| lo + (hi - lo) * k as f64 / parts as f64)
                .collect()
        };
        let edges0 = edges(axes.0, split.0);
        let edges1 = edges(axes.1, split.1);
        let mut cells = Vec::with_capacity(split.0 * split.1);
        for i in 0..split.0 {
            for j in 0..split.1 {
                let mut b = window.bounds().to_vec();
                b[axes.0] = (edges0[i], edges0[i + 1]);
                b[axes.1] = (edges1[j], edges1[j + 1]);
                cells.push(Window::new(b)?);
            }
        }
        Ok(CellGrid {
            axes,
            split,
            cells,
            edges0,
            edges1,
        })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn bin(edges: &[f64], x: f64) -> usize {
        let parts = edges.len() - 1;
        let mut k = 0;
        while k + 1 < parts && x >= edges[k + 1] {
            k += 1;
        }
        k
    }

    /// Cell index of a projected point (row-major over the two axes).
    pub fn cell_of(&self, proj: &[f64]) -> usize {
        let i = Self::bin(&self.edges0, proj[self.axes.0]);
        let j = Self::bin(&self.edges1, proj[self.axes.1]);
        i * self.split.1 + j
    }
}

fn parse_kv(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Parse {
                path: path.display().to_string(),
                message: format!("line {}: expected key = value", ln + 1),
            });
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_levels(text: &str) -> Result<Vec<u64>> {
    let bad = |m: String| Error::InvalidConfig(m);
    let mut levels: Vec<u64> = if text.contains("..") {
        let (range, step) = match text.split_once(':') {
            Some((r, s)) => (
                r,
                s.trim()
                    .parse::<u64>()
                    .map_err(|e| bad(format!("levels step: {e}")))?,
            ),
            None => (text, 1),
        };
        if step == 0 {
            return Err(bad("levels step must be >= 1".into()));
        }
        let (a, b) = range
            .split_once("..")
            .ok_or_else(|| bad("levels range needs a..b".into()))?;
        let a: u64 = a.trim().parse().map_err(|e| bad(format!("levels: {e}")))?;
        let b: u64 = b.trim().parse().map_err(|e| bad(format!("levels: {e}")))?;
        (a..=b).step_by(step as usize).collect()
    } else {
        text.split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| bad(format!("levels: {e}")))?
    };
    levels.sort_unstable();
    levels.dedup();
    if levels.first() == Some(&0) {
        return Err(bad("levels must be >= 1".into()));
    }
    Ok(levels)
}

/// Quadratic coefficient file: lines `i j q`, 1-based indices with i ≤ j.
pub fn read_qcoeffs(path: &Path, n: usize) -> Result<Vec<i64>> {
    let text = std::fs::read_to_string(path)?;
    let mut coeffs = vec![0i64; n * (n + 1) / 2];
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let bad = |m: String| Error::Parse {
            path: path.display().to_string(),
            message: format!("line {}: {m}", ln + 1),
        };
        if parts.len() != 3 {
            return Err(bad("expected `i j q`".into()));
        }
        let i: usize = parts[0].parse().map_err(|e| bad(format!("{e}")))?;
        let j: usize = parts[1].parse().map_err(|e| bad(format!("{e}")))?;
        let q: i64 = parts[2].parse().map_err(|e| bad(format!("{e}")))?;
        if i == 0 || j == 0 || i > j || j > n {
            return Err(bad(format!("indices ({i}, {j}) out of range for n = {n}")));
        }
        coeffs[coeff_index(n, i - 1, j - 1)] = q;
    }
    Ok(coeffs)
}

fn parse_family(map: &BTreeMap<String, String>, base: &Path) -> Result<PolynomialFamily> {
    let kind = map
        .get("family")
        .ok_or_else(|| Error::InvalidConfig("missing `family`".into()))?;
    match kind.as_str() {
        "det" | "pff" => {
            let n: usize = map
                .get("n")
                .ok_or_else(|| Error::InvalidConfig("missing `n`".into()))?
                .parse()
                .map_err(|e| Error::InvalidConfig(format!("n: {e}")))?;
            if kind == "det" {
                PolynomialFamily::determinant(n)
            } else {
                PolynomialFamily::pfaffian(n)
            }
        }
        "quad" => {
            let sig = map
                .get("signature")
                .ok_or_else(|| Error::InvalidConfig("quad needs `signature = r,s`".into()))?;
            let (r, s) = sig
                .split_once(',')
                .ok_or_else(|| Error::InvalidConfig("signature needs r,s".into()))?;
            let r: usize = r
                .trim()
                .parse()
                .map_err(|e| Error::InvalidConfig(format!("r: {e}")))?;
            let s: usize = s
                .trim()
                .parse()
                .map_err(|e| Error::InvalidConfig(format!("s: {e}")))?;
            let n = r + s;
            let form = if let Some(diag) = map.get("qdiag") {
                let d: Vec<i64> = diag
                    .split(',')
                    .map(|t| t.trim().parse::<i64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::InvalidConfig(format!("qdiag: {e}")))?;
                if d.len() != n {
                    return Err(Error::InvalidConfig(format!(
                        "qdiag has {} entries, signature needs {n}",
                        d.len()
                    )));
                }
                QuadraticForm::diagonal(&d)?
            } else if let Some(file) = map.get("qcoeffs") {
                let coeffs = read_qcoeffs(&base.join(file), n)?;
                QuadraticForm::new(r, s, coeffs)?
            } else {
                return Err(Error::InvalidConfig(
                    "quad needs `qdiag` or `qcoeffs`".into(),
                ));
            };
            if form.signature() != (r, s) {
                return Err(Error::InvalidConfig("signature mismatch".into()));
            }
            Ok(PolynomialFamily::quadratic(form))
        }
        other => Err(Error::InvalidConfig(format!("unknown family `{other}`"))),
    }
}

/// Parse and validate a config file.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let map = parse_kv(path)?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();

    let experiment = match map.get("experiment").map(String::as_str) {
        Some("equidist") | None => ExperimentKind::Equidist,
        Some("ratio") => ExperimentKind::Ratio,
        Some("omega") => ExperimentKind::Omega,
        Some(other) => {
            return Err(Error::InvalidConfig(format!(
                "unknown experiment `{other}`"
            )))
        }
    };
    let family = parse_family(&map, &base)?;

    let window_path = map
        .get("window")
        .ok_or_else(|| Error::InvalidConfig("missing `window`".into()))?;
    let window = Window::from_file(&base.join(window_path))?;
    let window2 = match map.get("window2") {
        Some(p) => Some(Window::from_file(&base.join(p))?),
        None => None,
    };

    let fundamental_filter = match map.get("fundamental_filter").map(String::as_str) {
        Some("true") => true,
        Some("false") | None => false,
        Some(other) => {
            return Err(Error::InvalidConfig(format!(
                "fundamental_filter must be true or false, got `{other}`"
            )))
        }
    };
    let mut levels = parse_levels(
        map.get("levels")
            .ok_or_else(|| Error::InvalidConfig("missing `levels`".into()))?,
    )?;
    if fundamental_filter {
        levels.retain(|&m| is_fundamental_discriminant(m));
    }

    let get_parse = |key: &str, default: f64| -> Result<f64> {
        match map.get(key) {
            Some(v) => v
                .parse::<f64>()
                .map_err(|e| Error::InvalidConfig(format!("{key}: {e}"))),
            None => Ok(default),
        }
    };
    let get_u64 = |key: &str, default: u64| -> Result<u64> {
        match map.get(key) {
            Some(v) => v
                .parse::<u64>()
                .map_err(|e| Error::InvalidConfig(format!("{key}: {e}"))),
            None => Ok(default),
        }
    };
    let get_u128 = |key: &str, default: u128| -> Result<u128> {
        match map.get(key) {
            Some(v) => v
                .parse::<u128>()
                .map_err(|e| Error::InvalidConfig(format!("{key}: {e}"))),
            None => Ok(default),
        }
    };

    let grid_axes = match map.get("grid_axes") {
        Some(v) => {
            let (a, b) = v
                .split_once(',')
                .ok_or_else(|| Error::InvalidConfig("grid_axes needs a,b".into()))?;
            (
                a.trim()
                    .parse()
                    .map_err(|e| Error::InvalidConfig(format!("grid_axes: {e}")))?,
                b.trim()
                    .parse()
                    .map_err(|e| Error::InvalidConfig(format!("grid_axes: {e}")))?,
            )
        }
        None => (0, 1),
    };
    let grid_split = match map.get("grid") {
        Some(v) => {
            let (a, b) = v
                .split_once('x')
                .ok_or_else(|| Error::InvalidConfig("grid needs PxQ".into()))?;
            (
                a.trim()
                    .parse()
                    .map_err(|e| Error::InvalidConfig(format!("grid: {e}")))?,
                b.trim()
                    .parse()
                    .map_err(|e| Error::InvalidConfig(format!("grid: {e}")))?,
            )
        }
        None => (1, 1),
    };

    let config = ExperimentConfig {
        experiment,
        family,
        levels,
        fundamental_filter,
        window,
        window2,
        grid_axes,
        grid_split,
        epsilon: get_parse("epsilon", 0.01)?,
        samples: get_u64("samples", 1_000_000)?,
        seed: get_u64("seed", 1)?,
        threads: get_u64("threads", 1)? as usize,
        enum_budget: get_u128("enum_budget", DEFAULT_SEARCH_BUDGET)?,
        brute_budget: get_u128("brute_budget", DEFAULT_BRUTE_BUDGET)?,
        cache_dir: map.get("cache_dir").map(|p| base.join(p)),
    };
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
        let p = dir.join(name);
        let mut f = std::fs::File::create(&p).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        p
    }

    #[test]
    fn parse_a_full_config() {
        let dir = tempfile::tempdir().unwrap();
        write_file(
            dir.path(),
            "w.txt",
            "-1.5 1.5\n-1.5 1.5\n-1.5 1.5\n-1.5 1.5\n",
        );
        let cfg_path = write_file(
            dir.path(),
            "exp.cfg",
            "experiment = equidist\nfamily = det\nn = 2\nwindow = w.txt\n\
             levels = 50..500:150\ngrid_axes = 0,1\ngrid = 2x4\n\
             epsilon = 0.02\nsamples = 20000\nseed = 9\nthreads = 2\n",
        );
        let cfg = parse_config(&cfg_path).unwrap();
        assert_eq!(cfg.levels, vec![50, 200, 350, 500]);
        assert_eq!(cfg.grid_split, (2, 4));
        assert_eq!(cfg.epsilon, 0.02);
        assert_eq!(cfg.samples, 20_000);
        let echo = cfg.echo();
        assert_eq!(echo.get("levels").unwrap(), "50,200,350,500");
        assert!(!echo.contains_key("threads"));
    }

    #[test]
    fn levels_forms() {
        assert_eq!(parse_levels("1,5,3,5").unwrap(), vec![1, 3, 5]);
        assert_eq!(parse_levels("2..6").unwrap(), vec![2, 3, 4, 5, 6]);
        assert_eq!(parse_levels("10..30:10").unwrap(), vec![10, 20, 30]);
        assert!(parse_levels("0..4").is_err());
        assert!(parse_levels("5..1").unwrap().is_empty());
    }

    #[test]
    fn fundamental_filter_keeps_the_right_subsequence() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "w.txt", "-3 3\n-3 3\n-3 3\n-3 3\n");
        let cfg_path = write_file(
            dir.path(),
            "exp.cfg",
            "family = quad\nsignature = 2,2\nqdiag = 1,1,-1,-1\nwindow = w.txt\n\
             levels = 1..40\nfundamental_filter = true\nsamples = 10000\n",
        );
        let cfg = parse_config(&cfg_path).unwrap();
        let expect: Vec<u64> = (1..=40)
            .filter(|&m| is_fundamental_discriminant(m))
            .collect();
        assert_eq!(cfg.levels, expect);
    }

    #[test]
    fn qcoeffs_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_file(
            dir.path(),
            "q.txt",
            "# diag form\n1 1 1\n2 2 1\n3 3 -1\n4 4 -1\n",
        );
        let coeffs = read_qcoeffs(&p, 4).unwrap();
        let form = QuadraticForm::new(2, 2, coeffs).unwrap();
        assert_eq!(form.signature(), (2, 2));
        assert!(read_qcoeffs(&write_file(dir.path(), "bad.txt", "2 1 5\n"), 4).is_err());
    }

    #[test]
    fn validation_catches_mismatches() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "w.txt", "-1 1\n-1 1\n-1 1\n");
        let cfg_path = write_file(
            dir.path(),
            "exp.cfg",
            "family = det\nn = 2\nwindow = w.txt\nlevels = 1,2\n",
        );
        assert!(parse_config(&cfg_path).is_err());

        write_file(dir.path(), "w4.txt", "-1 1\n-1 1\n-1 1\n-1 1\n");
        let cfg_path = write_file(
            dir.path(),
            "ratio.cfg",
            "experiment = ratio\nfamily = det\nn = 2\nwindow = w4.txt\nlevels = 1,2\n",
        );
        assert!(parse_config(&cfg_path).is_err()); // missing window2

        let cfg_path = write_file(
            dir.path(),
            "omega.cfg",
            "experiment = omega\nfamily = pff\nn = 2\nwindow = w6.txt\nlevels = 1,2\n",
        );
        write_file(dir.path(), "w6.txt", &"-1 1\n".repeat(6));
        assert!(parse_config(&cfg_path).is_err()); // omega needs det
    }

    #[test]
    fn cell_grid_partitions_exactly() {
        let w = Window::new(vec![(-1.5, 1.5), (-1.5, 1.5), (0.0, 2.0), (-1.0, 1.0)]).unwrap();
        let grid = CellGrid::new(&w, (0, 2), (2, 4)).unwrap();
        assert_eq!(grid.len(), 8);
        // Shared faces are bit-identical.
        assert_eq!(grid.cells[0].bounds()[2].1, grid.cells[1].bounds()[2].0);
        assert_eq!(grid.cells[3].bounds()[0].1, grid.cells[4].bounds()[0].0);
        // Union is the window on the split axes.
        assert_eq!(grid.cells[0].bounds()[0].0, -1.5);
        assert_eq!(grid.cells[7].bounds()[0].1, 1.5);
        // Binning: interior edges go to the upper cell; the ends clamp.
        assert_eq!(grid.cell_of(&[-1.5, 0.0, 0.0, 0.0]), 0);
        assert_eq!(grid.cell_of(&[0.0, 0.0, 0.0, 0.0]), 4);
        assert_eq!(grid.cell_of(&[1.5, 0.0, 2.0, 0.0]), 7);
        assert_eq!(grid.cell_of(&[-0.1, 0.0, 0.5, 0.0]), 1);
    }
}
