//! Exact enumeration of the integer points x with f(x) = m whose radial
//! projection lies in a window on the unit level set.
//!
//! Window membership of an integer point is decided entirely through the
//! exact per-axis integer ranges [⌈m^{1/d}·lo⌉, ⌊m^{1/d}·hi⌋] (closed box
//! convention: a point exactly on a face is inside), so counts are
//! bit-exact and independent of floating-point rounding.
//!
//! `enumerate_points` runs a family-specific pruned search;
//! `enumerate_bruteforce` scans the whole integer box and is the oracle
//! the pruned searches are validated against.

pub mod bounds;
mod strategies;

use crate::error::{Error, Result};
use crate::varieties::{AmbientPoint, PolynomialFamily};
use sha2::{Digest, Sha256};
use std::io::{BufRead, Write};

/// Version tag of the point generators; bump to invalidate caches when
/// enumeration semantics change.
pub const GENERATOR_VERSION: &str = "1";

/// Default candidate budget for the pruned searches.
pub const DEFAULT_SEARCH_BUDGET: u128 = 10_000_000_000;
/// Default candidate budget for the brute-force scan.
pub const DEFAULT_BRUTE_BUDGET: u128 = 100_000_000;

/// Compact axis-aligned box in the coordinates of the unit level set.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    bounds: Vec<(f64, f64)>,
}

impl Window {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidWindow("no axes".into()));
        }
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidWindow(format!("axis {i} is not finite")));
            }
            if lo >= hi {
                return Err(Error::InvalidWindow(format!(
                    "axis {i} has lo {lo} >= hi {hi}"
                )));
            }
        }
        Ok(Window { bounds })
    }

    /// The cube [−radius, radius]^n.
    pub fn cube(n: usize, radius: f64) -> Result<Self> {
        Window::new(vec![(-radius, radius); n])
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn volume(&self) -> f64 {
        self.bounds.iter().map(|(lo, hi)| hi - lo).product()
    }

    /// Closed-box membership of a real point.
    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && self
                .bounds
                .iter()
                .zip(p)
                .all(|(&(lo, hi), &x)| x >= lo && x <= hi)
    }

    /// Exact integer coordinate ranges of the level-m scaled box.
    pub fn integer_ranges(&self, m: u64, degree: u32) -> Vec<(i64, i64)> {
        self.bounds
            .iter()
            .map(|&(lo, hi)| {
                (
                    bounds::scaled_ceil(lo, m, degree),
                    bounds::scaled_floor(hi, m, degree),
                )
            })
            .collect()
    }

    /// Hex digest identifying the window; used in cache keys and headers.
    pub fn hash_hex(&self) -> String {
        let mut hasher = Sha256::new();
        for &(lo, hi) in &self.bounds {
            hasher.update(format!("{lo:?} {hi:?}\n").as_bytes());
        }
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Parse the window file format: one `lo hi` pair per line, blank
    /// lines and `#` comments ignored.
    pub fn from_reader(r: impl BufRead) -> Result<Self> {
        let mut bounds = Vec::new();
        for (ln, line) in r.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = t.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::Parse {
                    path: "<window>".into(),
                    message: format!("line {}: expected `lo hi`", ln + 1),
                });
            }
            let lo: f64 = parts[0].parse().map_err(|e| Error::Parse {
                path: "<window>".into(),
                message: format!("line {}: {e}", ln + 1),
            })?;
            let hi: f64 = parts[1].parse().map_err(|e| Error::Parse {
                path: "<window>".into(),
                message: format!("line {}: {e}", ln + 1),
            })?;
            bounds.push((lo, hi));
        }
        Window::new(bounds)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Window::from_reader(std::io::BufReader::new(f))
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        for &(lo, hi) in &self.bounds {
            writeln!(w, "{lo:?} {hi:?}")?;
        }
        Ok(())
    }
}

/// Knobs for an enumeration run.
#[derive(Debug, Clone)]
pub struct EnumerationOptions {
    pub threads: usize,
    pub budget: u128,
    pub brute_budget: u128,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            threads: 1,
            budget: DEFAULT_SEARCH_BUDGET,
            brute_budget: DEFAULT_BRUTE_BUDGET,
        }
    }
}

/// The integer points of one level inside one window, sorted
/// lexicographically with no duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub family: PolynomialFamily,
    pub m: u64,
    pub window: Window,
    pub points: Vec<AmbientPoint>,
    pub version: String,
    /// Set when a pruned request had no specialised strategy and the
    /// brute-force scan answered instead.
    pub brute_force_fallback: bool,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn precheck(family: &PolynomialFamily, m: u64, window: &Window) -> Result<()> {
    if m == 0 {
        return Err(Error::invalid_argument("level m must be >= 1"));
    }
    if window.dim() != family.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: family.ambient_dim(),
            got: window.dim(),
        });
    }
    Ok(())
}

pub(crate) fn range_len(lo: i64, hi: i64) -> u128 {
    if lo > hi {
        0
    } else {
        (hi - lo + 1) as u128
    }
}

pub(crate) fn box_volume(ranges: &[(i64, i64)]) -> u128 {
    ranges
        .iter()
        .map(|&(lo, hi)| range_len(lo, hi))
        .try_fold(1u128, |acc, l| acc.checked_mul(l))
        .unwrap_or(u128::MAX)
}

fn finish(
    family: PolynomialFamily,
    m: u64,
    window: Window,
    mut points: Vec<AmbientPoint>,
    fallback: bool,
) -> PointSet {
    points.sort_unstable();
    let before = points.len();
    points.dedup();
    debug_assert_eq!(before, points.len(), "strategy emitted duplicates");
    PointSet {
        family,
        m,
        window,
        points,
        version: GENERATOR_VERSION.to_string(),
        brute_force_fallback: fallback,
    }
}

/// Family-specific pruned enumeration. Falls back to the brute-force scan
/// (with the fallback flag set) for combinations without a strategy.
pub fn enumerate_points(
    family: &PolynomialFamily,
    m: u64,
    window: &Window,
    opts: &EnumerationOptions,
) -> Result<PointSet> {
    precheck(family, m, window)?;
    let ranges = window.integer_ranges(m, family.degree());
    if ranges.iter().any(|&(lo, hi)| lo > hi) {
        return Ok(finish(family.clone(), m, window.clone(), Vec::new(), false));
    }
    let produced = match family {
        PolynomialFamily::Determinant { n: 2 } => strategies::det2(m, &ranges, opts)?,
        PolynomialFamily::Determinant { n } => strategies::detn(*n, m, &ranges, opts)?,
        PolynomialFamily::Pfaffian { n: 2 } => strategies::pff2(m, &ranges, opts)?,
        PolynomialFamily::Pfaffian { .. } => {
            log::warn!(
                "no pruned strategy for {}; using brute force",
                family.id_string()
            );
            let ps = enumerate_bruteforce(family, m, window, opts)?;
            return Ok(PointSet {
                brute_force_fallback: true,
                ..ps
            });
        }
        PolynomialFamily::Quadratic(q) => {
            match strategies::quad(q, m, &ranges, opts)? {
                Some(points) => points,
                None => {
                    // Totally isotropic diagonal: no axis to solve along.
                    log::warn!(
                        "quadratic form has no nonzero diagonal coefficient; using brute force"
                    );
                    let ps = enumerate_bruteforce(family, m, window, opts)?;
                    return Ok(PointSet {
                        brute_force_fallback: true,
                        ..ps
                    });
                }
            }
        }
    };
    Ok(finish(family.clone(), m, window.clone(), produced, false))
}

/// Exhaustive scan of the scaled integer box; the enumeration oracle.
pub fn enumerate_bruteforce(
    family: &PolynomialFamily,
    m: u64,
    window: &Window,
    opts: &EnumerationOptions,
) -> Result<PointSet> {
    precheck(family, m, window)?;
    let ranges = window.integer_ranges(m, family.degree());
    if ranges.iter().any(|&(lo, hi)| lo > hi) {
        return Ok(finish(family.clone(), m, window.clone(), Vec::new(), false));
    }
    let volume = box_volume(&ranges);
    if volume > opts.brute_budget {
        return Err(Error::BudgetExceeded {
            required: volume,
            budget: opts.brute_budget,
        });
    }

    let target = m as i128;
    let outer = ranges[0];
    let points = strategies::parallel_over_range(outer, opts.threads, &|lo, hi| {
        let mut local = Vec::new();
        let mut sub = ranges.clone();
        sub[0] = (lo, hi);
        strategies::for_each_box(&sub, &mut |coords| {
            let x = AmbientPoint::new(coords.to_vec());
            if family.eval(&x)? == target {
                local.push(x);
            }
            Ok(())
        })?;
        Ok(local)
    })?;
    Ok(finish(family.clone(), m, window.clone(), points, false))
}

/// |enumerate_points|. Counting projected points equals counting ambient
/// points: the radial projection is a bijection between the level set and
/// the unit level set.
pub fn count_points(
    family: &PolynomialFamily,
    m: u64,
    window: &Window,
    opts: &EnumerationOptions,
) -> Result<u64> {
    Ok(enumerate_points(family, m, window, opts)?.len() as u64)
}
