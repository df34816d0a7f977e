//! Polynomial families, canonical coordinates, exact evaluation, and the
//! radial projection onto the unit level set.
//!
//! Three families are supported:
//!
//! * `Determinant(n)` — det on n×n matrices, coordinates row-major,
//!   ambient dimension n², degree n.
//! * `Pfaffian(n)` — the Pfaffian on skew-symmetric 2n×2n matrices,
//!   coordinates the strict upper triangle x_{ij} (i < j) in lexicographic
//!   (i, j) order, ambient dimension n(2n−1), degree n. The sign is
//!   normalised so that the block matrix [[0, I], [−I, 0]] evaluates to +1;
//!   this differs from the combinatorial Pfaffian by (−1)^{n(n−1)/2}.
//! * `Quadratic(r, s, q)` — an integral quadratic form Σ_{i≤j} q_ij x_i x_j
//!   of signature (r, s) on r+s variables, degree 2.
//!
//! All integer evaluation is exact in i128; overflow is a hard error.

use crate::error::{Error, Result};
use crate::intmat::{checked_add, checked_mul, IntMat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::fmt;

/// Integer point in the ambient coordinates of a family.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AmbientPoint(pub Vec<i64>);

impl AmbientPoint {
    pub fn new(coords: Vec<i64>) -> Self {
        AmbientPoint(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Coordinate-wise scaling by an integer.
    pub fn scale(&self, k: i64) -> Self {
        AmbientPoint(self.0.iter().map(|&c| c * k).collect())
    }
}

impl fmt::Display for AmbientPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Real point on (or near) the unit level set, produced by the radial
/// projection x ↦ m^{−1/d} x.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedPoint(pub Vec<f64>);

impl ProjectedPoint {
    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

/// An integral quadratic form given by the coefficients q_ij (i ≤ j) of
/// Σ q_ij x_i x_j, stored in lexicographic (i, j) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    r: usize,
    s: usize,
    coeffs: Vec<i64>,
    signature_warning: bool,
}

impl QuadraticForm {
    /// Validates that the form is nondegenerate with exactly `r` positive
    /// and `s` negative squares (checked exactly over the rationals, no
    /// floating tolerance). Sets a warning flag when the hypotheses
    /// r+s ≥ 4, r ≥ 2, s ≥ 1 fail; such forms still evaluate fine.
    pub fn new(r: usize, s: usize, coeffs: Vec<i64>) -> Result<Self> {
        let n = r + s;
        if n == 0 {
            return Err(Error::invalid_argument("quadratic form on 0 variables"));
        }
        let expected = n * (n + 1) / 2;
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        let (pos, neg) = rational_signature(n, &coeffs);
        if pos + neg < n {
            return Err(Error::invalid_argument(format!(
                "quadratic form is degenerate (rank {} < {})",
                pos + neg,
                n
            )));
        }
        if pos != r || neg != s {
            return Err(Error::invalid_argument(format!(
                "form has signature ({pos}, {neg}), expected ({r}, {s})"
            )));
        }
        let signature_warning = !(n >= 4 && r >= 2 && s >= 1);
        Ok(QuadraticForm {
            r,
            s,
            coeffs,
            signature_warning,
        })
    }

    /// Diagonal form Σ d_i x_i²; signature read off the signs.
    pub fn diagonal(diag: &[i64]) -> Result<Self> {
        let n = diag.len();
        let r = diag.iter().filter(|&&d| d > 0).count();
        let s = diag.iter().filter(|&&d| d < 0).count();
        let mut coeffs = vec![0i64; n * (n + 1) / 2];
        for (i, &d) in diag.iter().enumerate() {
            coeffs[coeff_index(n, i, i)] = d;
        }
        QuadraticForm::new(r, s, coeffs)
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.r, self.s)
    }

    pub fn dim(&self) -> usize {
        self.r + self.s
    }

    /// True when the form falls outside the hypotheses r+s ≥ 4, r ≥ 2,
    /// s ≥ 1 under which the equidistribution statements are known.
    pub fn signature_warning(&self) -> bool {
        self.signature_warning
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Coefficient of x_i x_j (unordered pair; i may exceed j).
    pub fn coeff(&self, i: usize, j: usize) -> i64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.coeffs[coeff_index(self.dim(), i, j)]
    }
}

/// Index of the (i, j) coefficient, i ≤ j, in lexicographic order.
pub fn coeff_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * n - i * (i + 1) / 2 + j
}

/// Exact signature (positive, negative inertia) of the symmetric matrix of
/// the form, via congruence diagonalisation over the rationals.
fn rational_signature(n: usize, coeffs: &[i64]) -> (usize, usize) {
    // Work with twice the Gram matrix to keep entries integral at the start.
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let q = BigInt::from(coeffs[coeff_index(n, i, j)]);
            if i == j {
                m[i][i] = BigRational::from_integer(q * 2);
            } else {
                m[i][j] = BigRational::from_integer(q.clone());
                m[j][i] = BigRational::from_integer(q);
            }
        }
    }
    let (mut pos, mut neg) = (0usize, 0usize);
    for k in 0..n {
        if m[k][k].is_zero() {
            if let Some(l) = (k + 1..n).find(|&l| !m[l][l].is_zero()) {
                m.swap(k, l);
                for row in m.iter_mut() {
                    row.swap(k, l);
                }
            } else if let Some(l) = (k + 1..n).find(|&l| !m[k][l].is_zero()) {
                // Hyperbolic pair: add row/col l to row/col k; the new
                // diagonal entry is 2·m[k][l] ≠ 0.
                for j in 0..n {
                    let v = m[l][j].clone();
                    m[k][j] += v;
                }
                for i in 0..n {
                    let v = m[i][l].clone();
                    m[i][k] += v;
                }
            } else {
                continue; // zero row: rank deficiency
            }
        }
        let pivot = m[k][k].clone();
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &pivot;
            for j in 0..n {
                let sub = &f * &m[k][j];
                m[i][j] -= sub;
            }
            for (row, sub) in (0..n).map(|r| (r, &f * &m[r][k])).collect::<Vec<_>>() {
                m[row][i] -= sub;
            }
        }
    }
    (pos, neg)
}

/// One of the supported invariant polynomial families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolynomialFamily {
    Determinant { n: usize },
    Pfaffian { n: usize },
    Quadratic(QuadraticForm),
}

impl PolynomialFamily {
    pub fn determinant(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid_argument("determinant family needs n >= 2"));
        }
        Ok(PolynomialFamily::Determinant { n })
    }

    pub fn pfaffian(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid_argument("pfaffian family needs n >= 2"));
        }
        Ok(PolynomialFamily::Pfaffian { n })
    }

    pub fn quadratic(form: QuadraticForm) -> Self {
        PolynomialFamily::Quadratic(form)
    }

    /// Ambient integer dimension N.
    pub fn ambient_dim(&self) -> usize {
        match self {
            PolynomialFamily::Determinant { n } => n * n,
            PolynomialFamily::Pfaffian { n } => n * (2 * n - 1),
            PolynomialFamily::Quadratic(q) => q.dim(),
        }
    }

    /// Homogeneity degree d.
    pub fn degree(&self) -> u32 {
        match self {
            PolynomialFamily::Determinant { n } => *n as u32,
            PolynomialFamily::Pfaffian { n } => *n as u32,
            PolynomialFamily::Quadratic(_) => 2,
        }
    }

    /// Canonical identifier used in cache headers and reports.
    pub fn id_string(&self) -> String {
        match self {
            PolynomialFamily::Determinant { n } => format!("det(n={n})"),
            PolynomialFamily::Pfaffian { n } => format!("pff(n={n})"),
            PolynomialFamily::Quadratic(q) => {
                let cs: Vec<String> = q.coeffs().iter().map(|c| c.to_string()).collect();
                format!("quad(r={},s={})[{}]", q.r, q.s, cs.join(","))
            }
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        let n = self.ambient_dim();
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: len,
            });
        }
        Ok(())
    }

    /// Exact integer value of the polynomial at an integer point.
    pub fn eval(&self, x: &AmbientPoint) -> Result<i128> {
        self.check_len(x.len())?;
        match self {
            PolynomialFamily::Determinant { n } => {
                let flat: Vec<i128> = x.coords().iter().map(|&c| c as i128).collect();
                IntMat::from_flat(*n, &flat)?.det()
            }
            PolynomialFamily::Pfaffian { n } => {
                let entries: Vec<i128> = x.coords().iter().map(|&c| c as i128).collect();
                let raw = pfaffian_from_upper(2 * n, &entries)?;
                Ok(pfaffian_sign(*n) * raw)
            }
            PolynomialFamily::Quadratic(q) => {
                let n = q.dim();
                let mut acc: i128 = 0;
                for i in 0..n {
                    for j in i..n {
                        let c = q.coeffs[coeff_index(n, i, j)] as i128;
                        if c == 0 {
                            continue;
                        }
                        let term = checked_mul(
                            c,
                            checked_mul(x.coords()[i] as i128, x.coords()[j] as i128)?,
                        )?;
                        acc = checked_add(acc, term)?;
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Floating-point value at a real point; used by the Monte Carlo
    /// measure, never for counting.
    pub fn eval_real(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x.len())?;
        match self {
            PolynomialFamily::Determinant { n } => Ok(det_real(*n, x)),
            PolynomialFamily::Pfaffian { n } => {
                Ok(pfaffian_sign(*n) as f64 * pfaffian_real(2 * n, x))
            }
            PolynomialFamily::Quadratic(q) => {
                let n = q.dim();
                let mut acc = 0.0;
                for i in 0..n {
                    for j in i..n {
                        let c = q.coeffs[coeff_index(n, i, j)];
                        if c != 0 {
                            acc += c as f64 * x[i] * x[j];
                        }
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Radial projection x ↦ m^{−1/d} x onto the unit level set.
    pub fn project(&self, x: &AmbientPoint, m: u64) -> Result<ProjectedPoint> {
        self.check_len(x.len())?;
        if m == 0 {
            return Err(Error::invalid_argument("level m must be positive"));
        }
        let scale = (m as f64).powf(-1.0 / self.degree() as f64);
        Ok(ProjectedPoint(
            x.coords().iter().map(|&c| c as f64 * scale).collect(),
        ))
    }
}

/// Sign relating the normalised Pfaffian to the combinatorial one:
/// the base point [[0, I], [−I, 0]] has combinatorial Pfaffian
/// (−1)^{n(n−1)/2}, and the normalised Pfaffian sends it to +1.
fn pfaffian_sign(n: usize) -> i128 {
    if (n * (n - 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Index of x_{ij} (i < j) in the lexicographic strict-upper-triangle
/// coordinate order for a k×k skew-symmetric matrix.
pub fn upper_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * k - i * (i + 1) / 2 + (j - i - 1)
}

/// Expand strict-upper-triangle coordinates into the full skew-symmetric
/// 2n×2n matrix (x_{ji} = −x_{ij}, zero diagonal).
pub fn pfaffian_matrix_expand(x: &AmbientPoint, n: usize) -> Result<IntMat> {
    let k = 2 * n;
    let expected = n * (2 * n - 1);
    if x.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: x.len(),
        });
    }
    let mut m = IntMat::zero(k);
    for i in 0..k {
        for j in i + 1..k {
            let v = x.coords()[upper_index(k, i, j)] as i128;
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    Ok(m)
}

/// Extract the strict upper triangle of a skew-symmetric matrix back into
/// canonical coordinates.
pub fn upper_triangle_of(m: &IntMat) -> Result<AmbientPoint> {
    let k = m.size();
    let mut coords = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            let v = m[(i, j)];
            let c = i64::try_from(v)
                .map_err(|_| Error::ArithmeticOverflow("upper triangle extraction"))?;
            coords.push(c);
        }
    }
    Ok(AmbientPoint(coords))
}

/// The block matrix [[0, I_n], [−I_n, 0]] in upper-triangle coordinates;
/// the distinguished unit-level point of the Pfaffian family.
pub fn symplectic_base_point(n: usize) -> AmbientPoint {
    let k = 2 * n;
    let mut coords = vec![0i64; n * (2 * n - 1)];
    for i in 0..n {
        coords[upper_index(k, i, i + n)] = 1;
    }
    AmbientPoint(coords)
}

/// The identity matrix as a row-major determinant-family point.
pub fn identity_point(n: usize) -> AmbientPoint {
    let mut coords = vec![0i64; n * n];
    for i in 0..n {
        coords[i * n + i] = 1;
    }
    AmbientPoint(coords)
}

/// Combinatorial Pfaffian of a skew-symmetric k×k matrix given by its
/// strict upper triangle, by Laplace-style expansion along the first
/// remaining row. Exact; exponential in k, intended for small k.
fn pfaffian_from_upper(k: usize, upper: &[i128]) -> Result<i128> {
    let entry = |i: usize, j: usize| -> i128 {
        if i < j {
            upper[upper_index(k, i, j)]
        } else if j < i {
            -upper[upper_index(k, j, i)]
        } else {
            0
        }
    };
    let rows: Vec<usize> = (0..k).collect();
    pfaffian_rec(&rows, &entry)
}

fn pfaffian_rec(rows: &[usize], entry: &dyn Fn(usize, usize) -> i128) -> Result<i128> {
    if rows.is_empty() {
        return Ok(1);
    }
    let i = rows[0];
    let mut acc: i128 = 0;
    for (pos, &j) in rows.iter().enumerate().skip(1) {
        let a = entry(i, j);
        if a == 0 {
            continue;
        }
        let rest: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != 0 && p != pos)
            .map(|(_, &r)| r)
            .collect();
        let sub = pfaffian_rec(&rest, entry)?;
        let term = checked_mul(a, sub)?;
        acc = if pos % 2 == 1 {
            checked_add(acc, term)?
        } else {
            acc.checked_sub(term)
                .ok_or(Error::ArithmeticOverflow("pfaffian"))?
        };
    }
    Ok(acc)
}

fn pfaffian_real(k: usize, x: &[f64]) -> f64 {
    // Same expansion as the exact path, over f64.
    fn rec(rows: &[usize], entry: &dyn Fn(usize, usize) -> f64) -> f64 {
        if rows.is_empty() {
            return 1.0;
        }
        let i = rows[0];
        let mut acc = 0.0;
        for (pos, &j) in rows.iter().enumerate().skip(1) {
            let a = entry(i, j);
            if a == 0.0 {
                continue;
            }
            let rest: Vec<usize> = rows
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != 0 && p != pos)
                .map(|(_, &r)| r)
                .collect();
            let sign = if pos % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * a * rec(&rest, entry);
        }
        acc
    }
    let entry = |i: usize, j: usize| -> f64 {
        if i < j {
            x[upper_index(k, i, j)]
        } else if j < i {
            -x[upper_index(k, j, i)]
        } else {
            0.0
        }
    };
    let rows: Vec<usize> = (0..k).collect();
    rec(&rows, &entry)
}

fn det_real(n: usize, x: &[f64]) -> f64 {
    match n {
        2 => x[0] * x[3] - x[1] * x[2],
        3 => {
            x[0] * (x[4] * x[8] - x[5] * x[7]) - x[1] * (x[3] * x[8] - x[5] * x[6])
                + x[2] * (x[3] * x[7] - x[4] * x[6])
        }
        _ => {
            // Partial-pivot Gaussian elimination.
            let mut a: Vec<f64> = x.to_vec();
            let idx = |i: usize, j: usize| i * n + j;
            let mut det = 1.0;
            for k in 0..n {
                let (p, max) = (k..n)
                    .map(|i| (i, a[idx(i, k)].abs()))
                    .max_by(|u, v| u.1.total_cmp(&v.1))
                    .unwrap();
                if max == 0.0 {
                    return 0.0;
                }
                if p != k {
                    for j in 0..n {
                        a.swap(idx(k, j), idx(p, j));
                    }
                    det = -det;
                }
                det *= a[idx(k, k)];
                for i in k + 1..n {
                    let f = a[idx(i, k)] / a[idx(k, k)];
                    for j in k..n {
                        a[idx(i, j)] -= f * a[idx(k, j)];
                    }
                }
            }
            det
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn det2() -> PolynomialFamily {
        PolynomialFamily::determinant(2).unwrap()
    }

    fn pff2() -> PolynomialFamily {
        PolynomialFamily::pfaffian(2).unwrap()
    }

    fn quad22() -> PolynomialFamily {
        PolynomialFamily::quadratic(QuadraticForm::diagonal(&[1, 1, -1, -1]).unwrap())
    }

    #[test]
    fn determinant_identity_is_one() {
        assert_eq!(det2().eval(&identity_point(2)).unwrap(), 1);
        let det3 = PolynomialFamily::determinant(3).unwrap();
        assert_eq!(det3.eval(&identity_point(3)).unwrap(), 1);
    }

    #[test]
    fn pfaffian_base_point_is_one() {
        for n in 2..=4 {
            let fam = PolynomialFamily::pfaffian(n).unwrap();
            assert_eq!(fam.eval(&symplectic_base_point(n)).unwrap(), 1, "n={n}");
        }
    }

    #[test]
    fn pfaffian_six_variable_formula() {
        // With coordinates (x12, x13, x14, x23, x24, x34) and the base-point
        // normalisation, the n = 2 Pfaffian is the bilinear expression
        // x13·x24 − x12·x34 − x14·x23.
        let fam = pff2();
        let mut rng = SplitMix64::stream(4, 0);
        for _ in 0..200 {
            let c: Vec<i64> = (0..6).map(|_| rng.next_below(19) as i64 - 9).collect();
            let expect = c[1] * c[4] - c[0] * c[5] - c[2] * c[3];
            assert_eq!(fam.eval(&AmbientPoint(c)).unwrap(), expect as i128);
        }
    }

    #[test]
    fn quadratic_direct_value() {
        // x1² + x2² − x3² − x4² at (2, 1, 0, 1) = 4 + 1 − 0 − 1 = 4.
        let fam = quad22();
        assert_eq!(fam.eval(&AmbientPoint(vec![2, 1, 0, 1])).unwrap(), 4);
    }

    #[test]
    fn quadratic_with_cross_terms() {
        // x1² + x1x2 + x2² is positive definite on 2 variables.
        let q = QuadraticForm::new(2, 0, vec![1, 1, 1]).unwrap();
        assert!(q.signature_warning());
        let fam = PolynomialFamily::quadratic(q);
        assert_eq!(fam.eval(&AmbientPoint(vec![1, 1])).unwrap(), 3);
        assert_eq!(fam.eval(&AmbientPoint(vec![2, -1])).unwrap(), 3);
    }

    #[test]
    fn quadratic_signature_is_validated_exactly() {
        assert!(QuadraticForm::new(2, 2, vec![1, 0, 0, 0, 1, 0, 0, -1, 0, -1]).is_ok());
        // Wrong signature is rejected.
        assert!(QuadraticForm::new(3, 1, vec![1, 0, 0, 0, 1, 0, 0, -1, 0, -1]).is_err());
        // Degenerate form is rejected.
        assert!(QuadraticForm::new(1, 1, vec![1, 0, 0]).is_err());
        // Hyperbolic plane x1x2 has signature (1, 1) and a zero diagonal.
        let q = QuadraticForm::new(1, 1, vec![0, 1, 0]).unwrap();
        assert_eq!(q.signature(), (1, 1));
    }

    #[test]
    fn pfaffian_squared_is_determinant() {
        let mut rng = SplitMix64::stream(2024, 0);
        for n in [2usize, 3] {
            let fam = PolynomialFamily::pfaffian(n).unwrap();
            let det = PolynomialFamily::determinant(2 * n).unwrap();
            let dim = n * (2 * n - 1);
            for _ in 0..250 {
                let coords: Vec<i64> = (0..dim).map(|_| rng.next_below(19) as i64 - 9).collect();
                let x = AmbientPoint(coords);
                let pf = fam.eval(&x).unwrap();
                let full = pfaffian_matrix_expand(&x, n).unwrap();
                let flat: Vec<i64> = full.flat().iter().map(|&v| v as i64).collect();
                let d = det.eval(&AmbientPoint(flat)).unwrap();
                assert_eq!(pf * pf, d);
            }
        }
    }

    #[test]
    fn homogeneity_under_integer_scaling() {
        let mut rng = SplitMix64::stream(77, 0);
        let families = [det2(), pff2(), quad22()];
        for fam in &families {
            let d = fam.degree();
            let dim = fam.ambient_dim();
            for _ in 0..50 {
                let coords: Vec<i64> = (0..dim).map(|_| rng.next_below(9) as i64 - 4).collect();
                let x = AmbientPoint(coords);
                let v = fam.eval(&x).unwrap();
                for k in -3i64..=3 {
                    let scaled = fam.eval(&x.scale(k)).unwrap();
                    assert_eq!(scaled, (k as i128).pow(d) * v);
                }
            }
        }
    }

    #[test]
    fn pfaffian_sign_parity_under_negation() {
        let mut rng = SplitMix64::stream(5, 0);
        for n in [2usize, 3] {
            let fam = PolynomialFamily::pfaffian(n).unwrap();
            let dim = n * (2 * n - 1);
            let sign = if n % 2 == 0 { 1 } else { -1 };
            for _ in 0..100 {
                let coords: Vec<i64> = (0..dim).map(|_| rng.next_below(9) as i64 - 4).collect();
                let x = AmbientPoint(coords);
                assert_eq!(
                    fam.eval(&x.scale(-1)).unwrap(),
                    sign * fam.eval(&x).unwrap()
                );
            }
        }
    }

    #[test]
    fn projection_lands_on_unit_level() {
        let mut rng = SplitMix64::stream(6, 0);
        let families = [det2(), pff2(), quad22()];
        for fam in &families {
            let dim = fam.ambient_dim();
            let mut checked = 0;
            for _ in 0..2000 {
                let coords: Vec<i64> = (0..dim).map(|_| rng.next_below(13) as i64 - 6).collect();
                let x = AmbientPoint(coords);
                let v = fam.eval(&x).unwrap();
                if v <= 0 {
                    continue;
                }
                let p = fam.project(&x, v as u64).unwrap();
                let fv = fam.eval_real(p.coords()).unwrap();
                assert!((fv - 1.0).abs() <= 1e-9, "f(pr(x)) = {fv}");
                checked += 1;
            }
            assert!(checked > 50);
        }
    }

    #[test]
    fn projection_examples() {
        // Scalar matrix: [[2,0],[0,2]] at m = 4 projects to the identity.
        let p = det2().project(&AmbientPoint(vec![2, 0, 0, 2]), 4).unwrap();
        assert_eq!(p.coords(), &[1.0, 0.0, 0.0, 1.0]);
        // m = 1 leaves any point unchanged.
        let x = AmbientPoint(vec![3, 1, -2, 5]);
        let p = det2().project(&x, 1).unwrap();
        assert_eq!(p.coords(), &[3.0, 1.0, -2.0, 5.0]);
        // Quadratic: (2,0,0,0) at m = 4 projects to (1,0,0,0).
        let p = quad22()
            .project(&AmbientPoint(vec![2, 0, 0, 0]), 4)
            .unwrap();
        assert_eq!(p.coords(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn expand_roundtrip_and_examples() {
        let z = pfaffian_matrix_expand(&AmbientPoint(vec![0; 6]), 2).unwrap();
        assert_eq!(z, IntMat::zero(4));

        let m = pfaffian_matrix_expand(&AmbientPoint(vec![1, 0, 0, 0, 0, 1]), 2).unwrap();
        assert_eq!(m[(0, 1)], 1);
        assert_eq!(m[(2, 3)], 1);
        assert_eq!(m[(1, 0)], -1);
        assert_eq!(m[(0, 2)], 0);

        let mut rng = SplitMix64::stream(8, 0);
        for _ in 0..100 {
            let coords: Vec<i64> = (0..15).map(|_| rng.next_below(41) as i64 - 20).collect();
            let x = AmbientPoint(coords);
            let m = pfaffian_matrix_expand(&x, 3).unwrap();
            assert_eq!(upper_triangle_of(&m).unwrap(), x);
        }

        assert!(pfaffian_matrix_expand(&AmbientPoint(vec![1, 2, 3]), 2).is_err());
    }

    #[test]
    fn eval_checks_dimensions() {
        assert!(det2().eval(&AmbientPoint(vec![1, 2, 3])).is_err());
        assert!(pff2().eval(&AmbientPoint(vec![1; 7])).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2;
        let x = AmbientPoint(vec![big, big, big, big]);
        let quad = PolynomialFamily::quadratic(QuadraticForm::diagonal(&[1, 1, 1, 1]).unwrap());
        // (i64::MAX/2)² overflows nothing in i128, so build something that does.
        let v = quad.eval(&x).unwrap();
        assert!(v > 0);
        let det4 = PolynomialFamily::determinant(4).unwrap();
        let y = AmbientPoint(vec![big; 16]);
        // Bareiss intermediate products of four ~2^62 entries exceed i128.
        assert!(matches!(
            det4.eval(&y),
            Err(Error::ArithmeticOverflow(_)) | Ok(0)
        ));
    }

    #[test]
    fn real_eval_matches_exact_on_integers() {
        let mut rng = SplitMix64::stream(15, 0);
        let det3 = PolynomialFamily::determinant(3).unwrap();
        for _ in 0..200 {
            let coords: Vec<i64> = (0..9).map(|_| rng.next_below(9) as i64 - 4).collect();
            let x = AmbientPoint(coords.clone());
            let exact = det3.eval(&x).unwrap() as f64;
            let real: Vec<f64> = coords.iter().map(|&c| c as f64).collect();
            let approx = det3.eval_real(&real).unwrap();
            assert!((exact - approx).abs() < 1e-6);
        }
    }
}
