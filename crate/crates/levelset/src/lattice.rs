//! Exact integer linear algebra: Hermite and Smith normal forms,
//! sublattice (Hecke-degree) counting, and a seeded unimodular generator
//! for property tests.
//!
//! Conventions are row-style throughout: the Hermite form of M is the
//! unique upper-triangular representative H = U·M of the row lattice of M,
//! with positive diagonal and each above-diagonal entry reduced modulo the
//! diagonal of its column, 0 ≤ H[i][j] < H[j][j]. With this convention the
//! Hermite forms of determinant m biject with the index-m sublattices of
//! ℤⁿ, which is what makes `hecke_degree` a sublattice count.

use crate::error::{Error, Result};
use crate::intmat::{checked_add, checked_mul, IntMat};
use crate::rng::SplitMix64;
use std::fmt;

/// Default cap on how many matrices `enumerate_hnf` will materialise.
pub const DEFAULT_HNF_BUDGET: u128 = 5_000_000;

/// Hermite normal form of a nonsingular integer matrix, together with the
/// unimodular transformation that produced it: U·M = H, |det U| = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteForm {
    pub h: IntMat,
    pub u: IntMat,
}

/// The divisor chain d₁ | d₂ | … | dₙ of a nonsingular integer matrix;
/// the two-sided unimodular orbit invariant. Π dᵢ = |det M|.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SmithChain(pub Vec<i128>);

impl SmithChain {
    pub fn entries(&self) -> &[i128] {
        &self.0
    }

    pub fn product(&self) -> i128 {
        self.0.iter().product()
    }
}

impl fmt::Display for SmithChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// Hermite normal form by integer row reduction. Errors on singular input.
pub fn hnf(m: &IntMat) -> Result<HermiteForm> {
    let n = m.size();
    let mut h = m.clone();
    let mut u = IntMat::identity(n);

    for col in 0..n {
        // Gcd the column below the diagonal into the pivot slot.
        loop {
            let pivot_row = (col..n)
                .filter(|&r| h[(r, col)] != 0)
                .min_by_key(|&r| h[(r, col)].unsigned_abs());
            let Some(p) = pivot_row else {
                return Err(Error::SingularMatrix);
            };
            h.swap_rows(col, p);
            u.swap_rows(col, p);
            let pivot = h[(col, col)];
            let mut dirty = false;
            for r in col + 1..n {
                if h[(r, col)] != 0 {
                    let q = h[(r, col)].div_euclid(pivot);
                    if q != 0 {
                        h.row_shear(r, col, -q)?;
                        u.row_shear(r, col, -q)?;
                    }
                    if h[(r, col)] != 0 {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        if h[(col, col)] < 0 {
            h.negate_row(col);
            u.negate_row(col);
        }
    }

    // Reduce above-diagonal entries modulo the diagonal of their column.
    for j in 0..n {
        for i in 0..j {
            let q = h[(i, j)].div_euclid(h[(j, j)]);
            if q != 0 {
                h.row_shear(i, j, -q)?;
                u.row_shear(i, j, -q)?;
            }
        }
    }

    debug_assert_eq!(u.mul(m)?, h);
    Ok(HermiteForm { h, u })
}

/// Smith normal form as a divisor chain. Errors on singular input.
pub fn snf(m: &IntMat) -> Result<SmithChain> {
    let n = m.size();
    let det = m.det()?;
    if det == 0 {
        return Err(Error::SingularMatrix);
    }
    let mut a = m.clone();
    for k in 0..n {
        'outer: loop {
            // Bring the smallest nonzero entry of the trailing block to (k, k).
            let mut best: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if a[(i, j)] != 0
                        && best
                            .map(|(bi, bj)| a[(i, j)].unsigned_abs() < a[(bi, bj)].unsigned_abs())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (bi, bj) = best.ok_or(Error::SingularMatrix)?;
            a.swap_rows(k, bi);
            a.swap_cols(k, bj);

            // Clear column k below and row k to the right.
            let mut reduced = true;
            for i in k + 1..n {
                if a[(i, k)] != 0 {
                    let q = a[(i, k)].div_euclid(a[(k, k)]);
                    if q != 0 {
                        a.row_shear(i, k, -q)?;
                    }
                    if a[(i, k)] != 0 {
                        reduced = false;
                    }
                }
            }
            for j in k + 1..n {
                if a[(k, j)] != 0 {
                    let q = a[(k, j)].div_euclid(a[(k, k)]);
                    if q != 0 {
                        a.col_shear(j, k, -q)?;
                    }
                    if a[(k, j)] != 0 {
                        reduced = false;
                    }
                }
            }
            if !reduced {
                continue;
            }

            // Pivot must divide the whole trailing block.
            for i in k + 1..n {
                for j in k + 1..n {
                    if a[(i, j)] % a[(k, k)] != 0 {
                        a.row_shear(k, i, 1)?;
                        continue 'outer;
                    }
                }
            }
            break;
        }
        if a[(k, k)] < 0 {
            a.negate_row(k);
        }
    }
    Ok(SmithChain((0..n).map(|k| a[(k, k)]).collect()))
}

/// Number of n×n Hermite forms of determinant m, i.e. the number of
/// index-m sublattices of ℤⁿ. Recursion over the last diagonal entry:
/// a(1, m) = 1 and a(n, m) = Σ_{d|m} d^{n−1} · a(n−1, m/d).
pub fn hecke_degree(n: usize, m: u64) -> Result<i128> {
    if n < 2 {
        return Err(Error::invalid_argument("hecke_degree needs n >= 2"));
    }
    if m == 0 {
        return Err(Error::invalid_argument("hecke_degree needs m >= 1"));
    }
    fn rec(n: usize, m: u64) -> Result<i128> {
        if n == 1 {
            return Ok(1);
        }
        let mut acc: i128 = 0;
        for d in divisors(m) {
            let weight = (d as i128)
                .checked_pow(n as u32 - 1)
                .ok_or(Error::ArithmeticOverflow("hecke degree"))?;
            acc = checked_add(acc, checked_mul(weight, rec(n - 1, m / d)?)?)?;
        }
        Ok(acc)
    }
    rec(n, m)
}

/// All positive divisors of m, ascending.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// All n×n Hermite forms of determinant m, in lexicographic row-major
/// order. Fails with a budget error when the (exactly predicted) output
/// size exceeds `DEFAULT_HNF_BUDGET`.
pub fn enumerate_hnf(n: usize, m: u64) -> Result<Vec<IntMat>> {
    enumerate_hnf_with_budget(n, m, DEFAULT_HNF_BUDGET)
}

pub fn enumerate_hnf_with_budget(n: usize, m: u64, budget: u128) -> Result<Vec<IntMat>> {
    if n < 2 {
        return Err(Error::invalid_argument("enumerate_hnf needs n >= 2"));
    }
    if m == 0 {
        return Err(Error::invalid_argument("enumerate_hnf needs m >= 1"));
    }
    let predicted = hecke_degree(n, m)? as u128;
    if predicted > budget {
        return Err(Error::BudgetExceeded {
            required: predicted,
            budget,
        });
    }

    let mut out = Vec::with_capacity(predicted as usize);
    let mut diag = vec![0u64; n];
    fill_diagonals(n, m, 0, &mut diag, &mut out)?;
    out.sort_unstable_by(|a, b| a.flat().cmp(b.flat()));
    debug_assert_eq!(out.len() as u128, predicted);
    Ok(out)
}

fn fill_diagonals(
    n: usize,
    remaining: u64,
    k: usize,
    diag: &mut [u64],
    out: &mut Vec<IntMat>,
) -> Result<()> {
    if k == n - 1 {
        diag[k] = remaining;
        emit_with_offdiag(n, diag, out)?;
        return Ok(());
    }
    for d in divisors(remaining) {
        diag[k] = d;
        fill_diagonals(n, remaining / d, k + 1, diag, out)?;
    }
    Ok(())
}

/// Emit every matrix with the given diagonal and above-diagonal entries
/// H[i][j] ∈ [0, diag[j]) — an odometer over the free entries.
fn emit_with_offdiag(n: usize, diag: &[u64], out: &mut Vec<IntMat>) -> Result<()> {
    let free: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut values = vec![0u64; free.len()];
    loop {
        let mut m = IntMat::zero(n);
        for i in 0..n {
            m[(i, i)] = diag[i] as i128;
        }
        for (idx, &(i, j)) in free.iter().enumerate() {
            m[(i, j)] = values[idx] as i128;
        }
        out.push(m);

        // Advance the odometer; digit idx counts modulo diag[j].
        let mut idx = free.len();
        loop {
            if idx == 0 {
                return Ok(());
            }
            idx -= 1;
            let cap = diag[free[idx].1];
            values[idx] += 1;
            if values[idx] < cap {
                break;
            }
            values[idx] = 0;
        }
    }
}

/// Σ_{i=0}^{2n−2} pⁱ for a prime p: the local weight of the Pfaffian
/// family at p, up to a global constant that is never computed.
pub fn pfaffian_local_weight(n: usize, p: u64) -> Result<i128> {
    if n < 2 {
        return Err(Error::invalid_argument(
            "pfaffian_local_weight needs n >= 2",
        ));
    }
    if !is_prime(p) {
        return Err(Error::invalid_argument(format!("{p} is not prime")));
    }
    let mut acc: i128 = 0;
    let mut power: i128 = 1;
    for i in 0..=(2 * n - 2) {
        acc = checked_add(acc, power)?;
        if i < 2 * n - 2 {
            power = checked_mul(power, p as i128)?;
        }
    }
    Ok(acc)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Deterministic unimodular matrix: the product of `steps` elementary
/// shears with nonzero offsets in [−2, 2]. Determinant is exactly 1.
///
/// Entries grow with `steps`; beyond roughly 70 steps the i128 bound can
/// be hit, which panics rather than wrapping.
pub fn random_unimodular(n: usize, seed: u64, steps: usize) -> IntMat {
    assert!(n >= 2, "random_unimodular needs n >= 2");
    assert!(steps >= 1, "random_unimodular needs steps >= 1");
    let mut rng = SplitMix64::stream(seed, 0x756e_696d);
    let mut m = IntMat::identity(n);
    for _ in 0..steps {
        let i = rng.next_below(n as u64) as usize;
        let j = loop {
            let j = rng.next_below(n as u64) as usize;
            if j != i {
                break j;
            }
        };
        // Offsets drawn from {−2, −1, 1, 2}; zero shears are never emitted.
        let c = match rng.next_below(4) {
            0 => -2,
            1 => -1,
            2 => 1,
            _ => 2,
        };
        m.row_shear(i, j, c).expect("unimodular entries overflowed");
    }
    m
}
