//! Orbit-level structure of point sets: Smith-chain classification for
//! the determinant family, level weights, the fundamental-discriminant
//! filter for quadratic levels, and the radial-repeat witness.
//!
//! Orbit labels are Smith normal forms, i.e. invariants of the two-sided
//! GL_n(ℤ)×GL_n(ℤ) action. Whether an SNF class splits into several
//! SL×SL orbits is not decided here; histogram output carries that caveat.

use crate::enumeration::{count_points, enumerate_points, EnumerationOptions, Window};
use crate::error::{Error, Result};
use crate::intmat::IntMat;
use crate::lattice::{hecke_degree, snf, SmithChain};
use crate::varieties::{AmbientPoint, PolynomialFamily};
use std::collections::BTreeMap;

/// Point counts per Smith chain at one level. `possible_classes` is the
/// combinatorial number of divisor chains with product m; whether every
/// class actually appears depends on the window and is reported, not
/// assumed.
#[derive(Debug, Clone)]
pub struct OrbitHistogram {
    pub family: PolynomialFamily,
    pub m: u64,
    pub window: Window,
    pub rows: Vec<(SmithChain, u64)>,
    pub total: u64,
    pub possible_classes: u64,
}

/// Smith chain of a determinant-family point with positive level.
pub fn orbit_class(family: &PolynomialFamily, x: &AmbientPoint) -> Result<SmithChain> {
    let PolynomialFamily::Determinant { n } = family else {
        return Err(Error::UnsupportedFamily {
            family: family.id_string(),
            reason: "orbit classification is defined for the determinant family".into(),
        });
    };
    let v = family.eval(x)?;
    if v <= 0 {
        return Err(Error::invalid_argument(format!(
            "orbit_class needs a positive level, got {v}"
        )));
    }
    let flat: Vec<i128> = x.coords().iter().map(|&c| c as i128).collect();
    snf(&IntMat::from_flat(*n, &flat)?)
}

/// Group the points of one level by Smith chain.
pub fn orbit_histogram(
    family: &PolynomialFamily,
    m: u64,
    window: &Window,
    opts: &EnumerationOptions,
) -> Result<OrbitHistogram> {
    let PolynomialFamily::Determinant { n } = family else {
        return Err(Error::UnsupportedFamily {
            family: family.id_string(),
            reason: "orbit histograms are defined for the determinant family".into(),
        });
    };
    let points = enumerate_points(family, m, window, opts)?;
    let mut groups: BTreeMap<SmithChain, u64> = BTreeMap::new();
    for p in &points.points {
        let chain = orbit_class(family, p)?;
        *groups.entry(chain).or_insert(0) += 1;
    }
    let total = points.len() as u64;
    Ok(OrbitHistogram {
        family: family.clone(),
        m,
        window: window.clone(),
        rows: groups.into_iter().collect(),
        total,
        possible_classes: divisor_chain_count(*n, m),
    })
}

/// Number of divisor chains d₁ | d₂ | … | dₙ with product m: peel off the
/// common divisor d₁ = k (which forces kⁿ | m) and recurse.
pub fn divisor_chain_count(n: usize, m: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let mut total = 0;
    let mut k = 1u64;
    loop {
        let kn = match (k as u128).checked_pow(n as u32) {
            Some(v) if v <= m as u128 => v as u64,
            _ => break,
        };
        if m % kn == 0 {
            total += divisor_chain_count(n - 1, m / kn);
        }
        k += 1;
    }
    total
}

/// Squarefree test by trial division.
pub fn is_squarefree(m: u64) -> bool {
    if m == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// A positive integer is a fundamental discriminant when it is squarefree
/// and ≡ 1 mod 4, or four times a squarefree integer ≡ 2 or 3 mod 4.
pub fn is_fundamental_discriminant(m: u64) -> bool {
    if m == 0 {
        return false;
    }
    if m % 4 == 1 {
        return is_squarefree(m);
    }
    if m % 4 == 0 {
        let k = m / 4;
        return (k % 4 == 2 || k % 4 == 3) && is_squarefree(k);
    }
    false
}

/// All fundamental discriminants ≤ max, by a squarefree sieve.
pub fn fundamental_discriminants_up_to(max: u64) -> Vec<u64> {
    if max == 0 {
        return Vec::new();
    }
    let n = max as usize;
    let mut squarefree = vec![true; n + 1];
    squarefree[0] = false;
    let mut p = 2usize;
    while p * p <= n {
        let step = p * p;
        let mut q = step;
        while q <= n {
            squarefree[q] = false;
            q += step;
        }
        p += 1;
    }
    (1..=max)
        .filter(|&m| {
            if m % 4 == 1 {
                squarefree[m as usize]
            } else if m % 4 == 0 {
                let k = (m / 4) as usize;
                (k % 4 == 2 || k % 4 == 3) && squarefree[k]
            } else {
                false
            }
        })
        .collect()
}

/// Radial-repeat witness: Some(k) when m = m₀·k^d for an integer k ≥ 2,
/// so that the k-dilates of level-m₀ points land in level m and the two
/// projections can coincide. A sufficient test in one direction only.
pub fn radial_scaling_witness(family: &PolynomialFamily, m0: u64, m: u64) -> Option<u64> {
    if m0 == 0 || m == 0 || m <= m0 {
        return None;
    }
    let d = family.degree();
    let mut k = 2u64;
    loop {
        let scaled = (m0 as u128).checked_mul((k as u128).checked_pow(d)?)?;
        match scaled.cmp(&(m as u128)) {
            std::cmp::Ordering::Equal => return Some(k),
            std::cmp::Ordering::Greater => return None,
            std::cmp::Ordering::Less => k += 1,
        }
    }
}

/// Tabulated Hecke degrees, the level-weight surrogate of the
/// determinant family.
pub fn hecke_weight_series(n: usize, levels: &[u64]) -> Result<Vec<(u64, i128)>> {
    levels
        .iter()
        .map(|&m| Ok((m, hecke_degree(n, m)?)))
        .collect()
}

/// Consistency check used by tests and the harness: the histogram totals
/// must reproduce the plain point count.
pub fn histogram_matches_count(
    family: &PolynomialFamily,
    m: u64,
    window: &Window,
    opts: &EnumerationOptions,
) -> Result<bool> {
    let h = orbit_histogram(family, m, window, opts)?;
    let c = count_points(family, m, window, opts)?;
    Ok(h.rows.iter().map(|(_, c)| *c).sum::<u64>() == c && h.total == c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::random_unimodular;

    fn det2() -> PolynomialFamily {
        PolynomialFamily::determinant(2).unwrap()
    }

    #[test]
    fn orbit_class_of_diagonal_points() {
        let fam = PolynomialFamily::determinant(3).unwrap();
        let x = AmbientPoint::new(vec![1, 0, 0, 0, 1, 0, 0, 0, 6]);
        assert_eq!(orbit_class(&fam, &x).unwrap().0, vec![1, 1, 6]);
        let x = AmbientPoint::new(vec![2, 0, 0, 2]);
        assert_eq!(orbit_class(&det2(), &x).unwrap().0, vec![2, 2]);
    }

    #[test]
    fn orbit_class_constant_on_two_sided_orbits() {
        let x = AmbientPoint::new(vec![1, 2, 0, 4]);
        let base = orbit_class(&det2(), &x).unwrap();
        for trial in 0..100u64 {
            let a = random_unimodular(2, 100 + trial, 10);
            let b = random_unimodular(2, 200 + trial, 10);
            let xm = IntMat::from_flat(2, &[1, 2, 0, 4]).unwrap();
            let moved = a.mul(&xm).unwrap().mul(&b).unwrap();
            let coords: Vec<i64> = moved.flat().iter().map(|&v| v as i64).collect();
            assert_eq!(
                orbit_class(&det2(), &AmbientPoint::new(coords)).unwrap(),
                base
            );
        }
    }

    #[test]
    fn orbit_class_rejects_wrong_family() {
        let pff = PolynomialFamily::pfaffian(2).unwrap();
        let x = crate::varieties::symplectic_base_point(2);
        assert!(matches!(
            orbit_class(&pff, &x),
            Err(Error::UnsupportedFamily { .. })
        ));
    }

    #[test]
    fn histogram_classes_are_divisor_chains() {
        let w = Window::cube(4, 2.5).unwrap();
        let opts = EnumerationOptions::default();

        let h1 = orbit_histogram(&det2(), 1, &w, &opts).unwrap();
        assert_eq!(h1.rows.len(), 1);
        assert_eq!(h1.rows[0].0 .0, vec![1, 1]);

        let h4 = orbit_histogram(&det2(), 4, &w, &opts).unwrap();
        for (chain, _) in &h4.rows {
            assert!(chain.0 == vec![1, 4] || chain.0 == vec![2, 2], "{chain}");
        }
        assert_eq!(h4.possible_classes, 2);

        for p in [2u64, 3, 5, 7] {
            let hp = orbit_histogram(&det2(), p, &w, &opts).unwrap();
            assert_eq!(hp.rows.len(), 1, "prime {p}");
            assert_eq!(hp.rows[0].0 .0, vec![1, p as i128]);
            assert_eq!(hp.possible_classes, 1);
        }
    }

    #[test]
    fn histogram_totals_match_counts() {
        let w = Window::cube(4, 2.0).unwrap();
        let opts = EnumerationOptions::default();
        for m in [1u64, 2, 4, 6, 12] {
            assert!(histogram_matches_count(&det2(), m, &w, &opts).unwrap());
            let h = orbit_histogram(&det2(), m, &w, &opts).unwrap();
            assert!(h.rows.len() as u64 <= h.possible_classes, "m = {m}");
        }
    }

    #[test]
    fn divisor_chain_counts() {
        assert_eq!(divisor_chain_count(2, 1), 1);
        assert_eq!(divisor_chain_count(2, 4), 2); // (1,4), (2,2)
        assert_eq!(divisor_chain_count(2, 12), 2); // (1,12), (2,6)
        assert_eq!(divisor_chain_count(2, 36), 4); // (1,36),(2,18),(3,12),(6,6)
        assert_eq!(divisor_chain_count(3, 8), 3); // (1,1,8),(1,2,4),(2,2,2)
        for p in [2u64, 3, 5, 11] {
            assert_eq!(divisor_chain_count(2, p), 1);
            assert_eq!(divisor_chain_count(3, p), 1);
        }
    }

    #[test]
    fn fundamental_discriminant_examples() {
        assert!(is_fundamental_discriminant(5));
        assert!(is_fundamental_discriminant(8)); // 4·2, 2 ≡ 2 mod 4
        assert!(!is_fundamental_discriminant(9)); // not squarefree
        assert!(is_fundamental_discriminant(1));
        assert!(!is_fundamental_discriminant(4)); // 4·1, 1 ≡ 1 mod 4
        assert!(is_fundamental_discriminant(12)); // 4·3, 3 ≡ 3 mod 4
        assert!(!is_fundamental_discriminant(2));
        assert!(!is_fundamental_discriminant(3));
        assert!(is_fundamental_discriminant(13));
    }

    #[test]
    fn sieve_agrees_with_pointwise_definition() {
        let listed = fundamental_discriminants_up_to(1000);
        let direct: Vec<u64> = (1..=1000)
            .filter(|&m| is_fundamental_discriminant(m))
            .collect();
        assert_eq!(listed, direct);
    }

    #[test]
    fn radial_witness_examples() {
        let fam = det2(); // degree 2
        assert_eq!(radial_scaling_witness(&fam, 3, 12), Some(2));
        assert_eq!(radial_scaling_witness(&fam, 3, 3), None);
        assert_eq!(radial_scaling_witness(&fam, 3, 11), None);
        assert_eq!(radial_scaling_witness(&fam, 5, 45), Some(3));
        let det3 = PolynomialFamily::determinant(3).unwrap();
        assert_eq!(radial_scaling_witness(&det3, 2, 16), Some(2));
        assert_eq!(radial_scaling_witness(&det3, 2, 32), None);
    }

    #[test]
    fn radial_witness_scales_points_between_levels() {
        let fam = det2();
        let w = Window::cube(4, 2.5).unwrap();
        let opts = EnumerationOptions::default();
        let (m0, m) = (3u64, 12u64);
        let k = radial_scaling_witness(&fam, m0, m).unwrap();
        let points = enumerate_points(&fam, m0, &w, &opts).unwrap();
        assert!(!points.is_empty());
        for p in &points.points {
            let scaled = p.scale(k as i64);
            assert_eq!(fam.eval(&scaled).unwrap(), m as i128);
        }
    }

    #[test]
    fn weight_series_values() {
        let s = hecke_weight_series(2, &[1, 2, 3, 4]).unwrap();
        assert_eq!(s, vec![(1, 1), (2, 3), (3, 4), (4, 7)]);
        // Distinct primes: degree (p+1)(q+1).
        let s = hecke_weight_series(2, &[15, 35]).unwrap();
        assert_eq!(s[0].1, 4 * 6);
        assert_eq!(s[1].1, 6 * 8);
        let s = hecke_weight_series(3, &[2]).unwrap();
        assert_eq!(s[0].1, 7);
    }
}
