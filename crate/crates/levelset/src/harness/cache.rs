//! Point-set CSV files and the level cache.
//!
//! File format: a single header line
//!
//!   `# family=<id> m=<level> window-hash=<hex> version=<tag> generator=<g>`
//!
//! followed by one point per row as N comma-separated integers in the
//! family's canonical coordinate order. Cache writes go through a
//! temporary file and an atomic rename, so concurrent writers of the same
//! key leave one whole winner and never a torn file.

use crate::enumeration::{enumerate_points, EnumerationOptions, PointSet, Window};
use crate::error::{Error, Result};
use crate::varieties::{AmbientPoint, PolynomialFamily};
use std::io::{BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

fn generator_tag(ps: &PointSet) -> &'static str {
    if ps.brute_force_fallback {
        "bruteforce"
    } else {
        "pruned"
    }
}

pub fn write_pointset(w: &mut impl Write, ps: &PointSet) -> Result<()> {
    writeln!(
        w,
        "# family={} m={} window-hash={} version={} generator={}",
        ps.family.id_string(),
        ps.m,
        ps.window.hash_hex(),
        ps.version,
        generator_tag(ps),
    )?;
    for p in &ps.points {
        let row: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Header fields of a stored point set.
#[derive(Debug, PartialEq, Eq)]
pub struct PointSetHeader {
    pub family: String,
    pub m: u64,
    pub window_hash: String,
    pub version: String,
    pub generator: String,
}

pub fn read_pointset(r: impl BufRead) -> Result<(PointSetHeader, Vec<AmbientPoint>)> {
    let mut lines = r.lines();
    let header_line = lines.next().ok_or_else(|| Error::Parse {
        path: "<pointset>".into(),
        message: "empty file".into(),
    })??;
    let header = parse_header(&header_line)?;
    let mut points = Vec::new();
    for (ln, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let coords: std::result::Result<Vec<i64>, _> =
            line.split(',').map(|t| t.trim().parse::<i64>()).collect();
        let coords = coords.map_err(|e| Error::Parse {
            path: "<pointset>".into(),
            message: format!("row {}: {e}", ln + 2),
        })?;
        points.push(AmbientPoint::new(coords));
    }
    Ok((header, points))
}

fn parse_header(line: &str) -> Result<PointSetHeader> {
    let bad = |msg: &str| Error::Parse {
        path: "<pointset>".into(),
        message: msg.to_string(),
    };
    let rest = line
        .strip_prefix('#')
        .ok_or_else(|| bad("missing header"))?;
    let mut family = None;
    let mut m = None;
    let mut window_hash = None;
    let mut version = None;
    let mut generator = None;
    for token in rest.split_whitespace() {
        let Some((k, v)) = token.split_once('=') else {
            return Err(bad(&format!("bad header token `{token}`")));
        };
        match k {
            "family" => family = Some(v.to_string()),
            "m" => m = Some(v.parse::<u64>().map_err(|e| bad(&format!("m: {e}")))?),
            "window-hash" => window_hash = Some(v.to_string()),
            "version" => version = Some(v.to_string()),
            "generator" => generator = Some(v.to_string()),
            _ => return Err(bad(&format!("unknown header key `{k}`"))),
        }
    }
    Ok(PointSetHeader {
        family: family.ok_or_else(|| bad("missing family"))?,
        m: m.ok_or_else(|| bad("missing m"))?,
        window_hash: window_hash.ok_or_else(|| bad("missing window-hash"))?,
        version: version.ok_or_else(|| bad("missing version"))?,
        generator: generator.unwrap_or_else(|| "pruned".into()),
    })
}

/// The family id contains punctuation; keep cache names flat and safe.
fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
        .collect()
}

pub fn cache_file_name(
    family: &PolynomialFamily,
    m: u64,
    window_hash: &str,
    version: &str,
) -> String {
    format!(
        "{}_m{}_w{}_v{}.csv",
        slug(&family.id_string()),
        m,
        window_hash,
        slug(version)
    )
}

/// Look a point set up in the cache. Any mismatch (missing file, corrupt
/// contents, stale version, different window hash) is a miss; corruption
/// is logged and never fatal.
pub fn cache_get(
    dir: &Path,
    family: &PolynomialFamily,
    m: u64,
    window: &Window,
    version: &str,
) -> Option<PointSet> {
    let path = dir.join(cache_file_name(
        family,
        m,
        window.hash_hex().as_str(),
        version,
    ));
    let file = std::fs::File::open(&path).ok()?;
    let parsed = read_pointset(std::io::BufReader::new(file));
    let (header, points) = match parsed {
        Ok(v) => v,
        Err(e) => {
            log::warn!(
                "corrupt cache file {}: {e}; treating as miss",
                path.display()
            );
            return None;
        }
    };
    let expected = PointSetHeader {
        family: family.id_string(),
        m,
        window_hash: window.hash_hex(),
        version: version.to_string(),
        generator: header.generator.clone(),
    };
    if header != expected {
        log::warn!(
            "cache header mismatch at {}; treating as miss",
            path.display()
        );
        return None;
    }
    Some(PointSet {
        family: family.clone(),
        m,
        window: window.clone(),
        points,
        version: version.to_string(),
        brute_force_fallback: header.generator == "bruteforce",
    })
}

/// Store a point set under its key via write-to-temp + atomic rename.
pub fn cache_put(dir: &Path, ps: &PointSet) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(cache_file_name(
        &ps.family,
        ps.m,
        ps.window.hash_hex().as_str(),
        &ps.version,
    ));
    let tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        write_pointset(&mut w, ps)?;
        w.flush()?;
    }
    tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
    Ok(path)
}

/// Cache-aware enumeration: hit when possible, otherwise enumerate and
/// populate the cache.
pub fn cached_enumerate(
    cache_dir: Option<&Path>,
    family: &PolynomialFamily,
    m: u64,
    window: &Window,
    opts: &EnumerationOptions,
) -> Result<PointSet> {
    if let Some(dir) = cache_dir {
        if let Some(ps) = cache_get(
            dir,
            family,
            m,
            window,
            crate::enumeration::GENERATOR_VERSION,
        ) {
            return Ok(ps);
        }
    }
    let ps = enumerate_points(family, m, window, opts)?;
    if let Some(dir) = cache_dir {
        cache_put(dir, &ps)?;
    }
    Ok(ps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det2() -> PolynomialFamily {
        PolynomialFamily::determinant(2).unwrap()
    }

    fn sample_pointset() -> PointSet {
        let w = Window::cube(4, 1.5).unwrap();
        enumerate_points(&det2(), 1, &w, &EnumerationOptions::default()).unwrap()
    }

    #[test]
    fn roundtrip_is_byte_identical() {
        let ps = sample_pointset();
        let mut buf = Vec::new();
        write_pointset(&mut buf, &ps).unwrap();
        let (header, points) = read_pointset(std::io::Cursor::new(&buf)).unwrap();
        assert_eq!(header.family, ps.family.id_string());
        assert_eq!(points, ps.points);
        let back = PointSet {
            family: ps.family.clone(),
            m: ps.m,
            window: ps.window.clone(),
            points,
            version: header.version.clone(),
            brute_force_fallback: header.generator == "bruteforce",
        };
        let mut buf2 = Vec::new();
        write_pointset(&mut buf2, &back).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn put_then_get() {
        let dir = tempfile::tempdir().unwrap();
        let ps = sample_pointset();
        cache_put(dir.path(), &ps).unwrap();
        let got = cache_get(dir.path(), &ps.family, ps.m, &ps.window, &ps.version).unwrap();
        assert_eq!(got.points, ps.points);
        assert_eq!(got.m, ps.m);
    }

    #[test]
    fn changed_window_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let ps = sample_pointset();
        cache_put(dir.path(), &ps).unwrap();
        let other = Window::cube(4, 2.5).unwrap();
        assert!(cache_get(dir.path(), &ps.family, ps.m, &other, &ps.version).is_none());
        assert!(cache_get(dir.path(), &ps.family, ps.m, &ps.window, "stale").is_none());
    }

    #[test]
    fn corrupt_file_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let ps = sample_pointset();
        let path = cache_put(dir.path(), &ps).unwrap();
        std::fs::write(&path, "# family=nonsense\n1,2,junk\n").unwrap();
        assert!(cache_get(dir.path(), &ps.family, ps.m, &ps.window, &ps.version).is_none());
    }

    #[test]
    fn concurrent_puts_leave_one_whole_file() {
        let dir = tempfile::tempdir().unwrap();
        let ps = sample_pointset();
        std::thread::scope(|s| {
            for _ in 0..8 {
                s.spawn(|| cache_put(dir.path(), &ps).unwrap());
            }
        });
        let got = cache_get(dir.path(), &ps.family, ps.m, &ps.window, &ps.version).unwrap();
        assert_eq!(got.points, ps.points);
        // Exactly the one cache file remains; no temp leftovers with the
        // cache naming scheme.
        let entries: Vec<_> = std::fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .filter(|n| n.ends_with(".csv"))
            .collect();
        assert_eq!(entries.len(), 1);
    }

    #[test]
    fn cached_enumerate_cold_equals_warm() {
        let dir = tempfile::tempdir().unwrap();
        let w = Window::cube(4, 2.0).unwrap();
        let opts = EnumerationOptions::default();
        let cold = cached_enumerate(Some(dir.path()), &det2(), 5, &w, &opts).unwrap();
        let warm = cached_enumerate(Some(dir.path()), &det2(), 5, &w, &opts).unwrap();
        assert_eq!(cold.points, warm.points);
        assert_eq!(cold.version, warm.version);
    }
}
