//! Family-specific pruned point searches. Every strategy receives the
//! exact integer ranges of the scaled box and must return precisely the
//! points the brute-force scan would return; the oracle-equivalence suite
//! holds them to that.

use super::{bounds::isqrt, box_volume, range_len, EnumerationOptions};
use crate::error::{Error, Result};
use crate::intmat::IntMat;
use crate::varieties::{AmbientPoint, QuadraticForm};

/// Visit every integer tuple of the box in lexicographic order. An empty
/// range list yields exactly one empty tuple.
pub(super) fn for_each_box(
    ranges: &[(i64, i64)],
    f: &mut impl FnMut(&[i64]) -> Result<()>,
) -> Result<()> {
    if ranges.iter().any(|&(lo, hi)| lo > hi) {
        return Ok(());
    }
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        f(&cur)?;
        let mut i = ranges.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if cur[i] < ranges[i].1 {
                cur[i] += 1;
                for j in i + 1..ranges.len() {
                    cur[j] = ranges[j].0;
                }
                break;
            }
        }
    }
}

/// Split `outer` into contiguous chunks, run the worker on each, and
/// concatenate results in chunk order. The output is independent of the
/// thread count because chunk boundaries depend only on the range.
pub(super) fn parallel_over_range(
    outer: (i64, i64),
    threads: usize,
    worker: &(dyn Fn(i64, i64) -> Result<Vec<AmbientPoint>> + Sync),
) -> Result<Vec<AmbientPoint>> {
    let len = range_len(outer.0, outer.1);
    if len == 0 {
        return Ok(Vec::new());
    }
    let threads = threads.max(1).min(len as usize);
    if threads == 1 {
        return worker(outer.0, outer.1);
    }
    let chunk = (len as i64 + threads as i64 - 1) / threads as i64;
    let mut chunks = Vec::new();
    let mut lo = outer.0;
    while lo <= outer.1 {
        let hi = (lo + chunk - 1).min(outer.1);
        chunks.push((lo, hi));
        lo = hi + 1;
    }
    let results: Vec<Result<Vec<AmbientPoint>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|&(lo, hi)| scope.spawn(move || worker(lo, hi)))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn check_budget(candidates: u128, opts: &EnumerationOptions) -> Result<()> {
    if candidates > opts.budget {
        return Err(Error::BudgetExceeded {
            required: candidates,
            budget: opts.budget,
        });
    }
    Ok(())
}

/// Largest coordinate magnitude per axis; the strategies bound their
/// worst-case intermediate values with these before entering unchecked
/// hot loops, so overflow stays a hard up-front error.
fn axis_magnitudes(ranges: &[(i64, i64)]) -> Vec<i128> {
    ranges
        .iter()
        .map(|&(lo, hi)| lo.unsigned_abs().max(hi.unsigned_abs()) as i128)
        .collect()
}

fn overflow_guard(worst: Option<i128>) -> Result<i128> {
    worst.ok_or(Error::ArithmeticOverflow("enumeration intermediate bound"))
}

/// det [[a, b], [c, d]] = m: iterate (a, b, c) and solve a·d = m + b·c by
/// divisibility; for a = 0 the constraint is b·c = −m with d free.
pub(super) fn det2(
    m: u64,
    ranges: &[(i64, i64)],
    opts: &EnumerationOptions,
) -> Result<Vec<AmbientPoint>> {
    let (ra, rb, rc, rd) = (ranges[0], ranges[1], ranges[2], ranges[3]);
    let candidates = range_len(ra.0, ra.1)
        .saturating_mul(range_len(rb.0, rb.1))
        .saturating_mul(range_len(rc.0, rc.1));
    check_budget(candidates, opts)?;
    let target = m as i128;
    let mag = axis_magnitudes(ranges);
    overflow_guard(
        mag[1]
            .checked_mul(mag[2])
            .and_then(|bc| bc.checked_add(target)),
    )?;

    parallel_over_range(ra, opts.threads, &move |alo, ahi| {
        let mut out = Vec::new();
        for a in alo..=ahi {
            if a == 0 {
                // b·c = −m, d unconstrained.
                for b in rb.0..=rb.1 {
                    if b == 0 {
                        continue;
                    }
                    if (-target) % (b as i128) != 0 {
                        continue;
                    }
                    let c = (-target) / (b as i128);
                    if c < rc.0 as i128 || c > rc.1 as i128 {
                        continue;
                    }
                    for d in rd.0..=rd.1 {
                        out.push(AmbientPoint::new(vec![0, b, c as i64, d]));
                    }
                }
            } else {
                let ai = a as i128;
                for b in rb.0..=rb.1 {
                    for c in rc.0..=rc.1 {
                        let t = target + (b as i128) * (c as i128);
                        if t % ai != 0 {
                            continue;
                        }
                        let d = t / ai;
                        if d >= rd.0 as i128 && d <= rd.1 as i128 {
                            out.push(AmbientPoint::new(vec![a, b, c, d as i64]));
                        }
                    }
                }
            }
        }
        Ok(out)
    })
}

/// All ordered pairs (u, v) with u·v = r (r ≠ 0).
fn divisor_pairs(r: i128) -> Vec<(i128, i128)> {
    let a = r.unsigned_abs();
    let mut pairs = Vec::new();
    let mut d = 1u128;
    while d * d <= a {
        if a % d == 0 {
            let (u, v) = (d as i128, (a / d) as i128);
            // u·v = |r|; fix signs so the product is r.
            let (x, y) = if r > 0 { (u, v) } else { (u, -v) };
            pairs.push((x, y));
            pairs.push((-x, -y));
            if u != v {
                pairs.push((y, x));
                pairs.push((-y, -x));
            }
        }
        d += 1;
    }
    pairs
}

/// Pfaffian on 4×4 skew matrices, coordinates (x12, x13, x14, x23, x24, x34).
/// With the base-point normalisation the level equation f = m reads
/// x12·x34 = x13·x24 − x14·x23 − m; iterate the four middle coordinates
/// and enumerate divisor pairs for the residual, handling the residual-0
/// coordinate lines directly.
pub(super) fn pff2(
    m: u64,
    ranges: &[(i64, i64)],
    opts: &EnumerationOptions,
) -> Result<Vec<AmbientPoint>> {
    let (r12, r13, r14, r23, r24, r34) = (
        ranges[0], ranges[1], ranges[2], ranges[3], ranges[4], ranges[5],
    );
    let candidates = range_len(r13.0, r13.1)
        .saturating_mul(range_len(r24.0, r24.1))
        .saturating_mul(range_len(r14.0, r14.1))
        .saturating_mul(range_len(r23.0, r23.1));
    check_budget(candidates, opts)?;
    let target = m as i128;
    let mag = axis_magnitudes(ranges);
    overflow_guard(
        mag[1]
            .checked_mul(mag[4])
            .and_then(|a| mag[2].checked_mul(mag[3]).and_then(|b| a.checked_add(b)))
            .and_then(|s| s.checked_add(target)),
    )?;

    parallel_over_range(r13, opts.threads, &move |lo13, hi13| {
        let mut out = Vec::new();
        let in_range = |v: i128, r: (i64, i64)| v >= r.0 as i128 && v <= r.1 as i128;
        for x13 in lo13..=hi13 {
            for x24 in r24.0..=r24.1 {
                for x14 in r14.0..=r14.1 {
                    for x23 in r23.0..=r23.1 {
                        let r =
                            (x13 as i128) * (x24 as i128) - (x14 as i128) * (x23 as i128) - target;
                        if r == 0 {
                            // x12·x34 = 0: the two coordinate lines.
                            if in_range(0, r12) {
                                for x34 in r34.0..=r34.1 {
                                    out.push(AmbientPoint::new(vec![0, x13, x14, x23, x24, x34]));
                                }
                            }
                            if in_range(0, r34) {
                                for x12 in r12.0..=r12.1 {
                                    if x12 == 0 {
                                        continue; // already emitted above
                                    }
                                    out.push(AmbientPoint::new(vec![x12, x13, x14, x23, x24, 0]));
                                }
                            }
                        } else {
                            for (u, v) in divisor_pairs(r) {
                                if in_range(u, r12) && in_range(v, r34) {
                                    out.push(AmbientPoint::new(vec![
                                        u as i64, x13, x14, x23, x24, v as i64,
                                    ]));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    })
}

/// Exact rank of the first `rows` rows (each of length n) by integer
/// fraction-free elimination.
fn rows_full_rank(flat: &[i64], rows: usize, n: usize) -> bool {
    let mut a: Vec<i128> = flat[..rows * n].iter().map(|&v| v as i128).collect();
    let mut rank = 0usize;
    let mut col = 0usize;
    while rank < rows && col < n {
        let Some(p) = (rank..rows).find(|&r| a[r * n + col] != 0) else {
            col += 1;
            continue;
        };
        if p != rank {
            for j in 0..n {
                a.swap(rank * n + j, p * n + j);
            }
        }
        let pivot = a[rank * n + col];
        for r in rank + 1..rows {
            let factor = a[r * n + col];
            if factor == 0 {
                continue;
            }
            for j in 0..n {
                a[r * n + j] = a[r * n + j] * pivot - factor * a[rank * n + j];
            }
        }
        rank += 1;
        col += 1;
    }
    rank == rows
}

/// General determinant family: backtrack over the first n−1 rows with a
/// full-rank prune after each completed row (dependent prefixes force
/// det = 0), then solve the cofactor expansion along the last row as a
/// linear divisibility condition.
pub(super) fn detn(
    n: usize,
    m: u64,
    ranges: &[(i64, i64)],
    opts: &EnumerationOptions,
) -> Result<Vec<AmbientPoint>> {
    // Worst-case candidate estimate: all head-row entries crossed with the
    // last row minus its widest axis (the solved pivot).
    let head: u128 = ranges[..(n - 1) * n]
        .iter()
        .map(|&(lo, hi)| range_len(lo, hi))
        .fold(1u128, |a, l| a.saturating_mul(l));
    let last: Vec<u128> = ranges[(n - 1) * n..]
        .iter()
        .map(|&(lo, hi)| range_len(lo, hi))
        .collect();
    let max_last = last.iter().copied().max().unwrap_or(1).max(1);
    let tail: u128 = last.iter().fold(1u128, |a, &l| a.saturating_mul(l)) / max_last;
    check_budget(head.saturating_mul(tail.max(1)), opts)?;

    let target = m as i128;
    let outer = ranges[0];
    parallel_over_range(outer, opts.threads, &move |olo, ohi| {
        let mut out = Vec::new();
        let mut flat = vec![0i64; n * n];
        // Iterate rows 1..n−1 of the head given the fixed first entry.
        let mut head_ranges: Vec<(i64, i64)> = ranges[1..(n - 1) * n].to_vec();
        for first in olo..=ohi {
            flat[0] = first;
            fill_head(n, target, ranges, &mut head_ranges, &mut flat, 1, &mut out)?;
        }
        Ok(out)
    })
}

/// Recursive head-row filling for `detn`. `pos` indexes the flat matrix;
/// rows are checked for independence as each one completes.
fn fill_head(
    n: usize,
    target: i128,
    ranges: &[(i64, i64)],
    head_ranges: &mut [(i64, i64)],
    flat: &mut [i64],
    pos: usize,
    out: &mut Vec<AmbientPoint>,
) -> Result<()> {
    if pos == (n - 1) * n {
        return solve_last_row(n, target, ranges, flat, out);
    }
    let (lo, hi) = head_ranges[pos - 1];
    for v in lo..=hi {
        flat[pos] = v;
        // Row completed: prune dependent prefixes.
        if (pos + 1) % n == 0 && !rows_full_rank(flat, (pos + 1) / n, n) {
            continue;
        }
        fill_head(n, target, ranges, head_ranges, flat, pos + 1, out)?;
    }
    Ok(())
}

fn solve_last_row(
    n: usize,
    target: i128,
    ranges: &[(i64, i64)],
    flat: &mut [i64],
    out: &mut Vec<AmbientPoint>,
) -> Result<()> {
    // Cofactors along the last row: det = Σ_j x_{n−1,j} · c_j.
    let mut cof = vec![0i128; n];
    for j in 0..n {
        let mut sub = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let mut row = Vec::with_capacity(n - 1);
            for k in 0..n {
                if k != j {
                    row.push(flat[i * n + k] as i128);
                }
            }
            sub.push(row);
        }
        let minor = IntMat::from_rows(&sub)?.det()?;
        cof[j] = if (n - 1 + j) % 2 == 0 { minor } else { -minor };
    }
    let pivot = (0..n)
        .filter(|&j| cof[j] != 0)
        .max_by_key(|&j| cof[j].unsigned_abs());
    let Some(p) = pivot else {
        return Ok(()); // dependent head rows; pruned upstream
    };

    let free: Vec<usize> = (0..n).filter(|&j| j != p).collect();
    let free_ranges: Vec<(i64, i64)> = free.iter().map(|&j| ranges[(n - 1) * n + j]).collect();
    let prange = ranges[(n - 1) * n + p];
    for_each_box(&free_ranges, &mut |vals| {
        let mut partial: i128 = 0;
        for (idx, &j) in free.iter().enumerate() {
            partial = crate::intmat::checked_add(
                partial,
                crate::intmat::checked_mul(vals[idx] as i128, cof[j])?,
            )?;
        }
        let residual = crate::intmat::checked_sub(target, partial)?;
        if residual % cof[p] == 0 {
            let x = residual / cof[p];
            if x >= prange.0 as i128 && x <= prange.1 as i128 {
                for (idx, &j) in free.iter().enumerate() {
                    flat[(n - 1) * n + j] = vals[idx];
                }
                flat[(n - 1) * n + p] = x as i64;
                out.push(AmbientPoint::new(flat.to_vec()));
            }
        }
        Ok(())
    })
}

/// Quadratic family: iterate all coordinates but one and solve the
/// resulting integer quadratic. The solved axis is the last one with a
/// nonzero square coefficient (the first such axis is swapped into last
/// place when needed). Returns None when every diagonal coefficient is
/// zero; the caller falls back to brute force.
pub(super) fn quad(
    form: &QuadraticForm,
    m: u64,
    ranges: &[(i64, i64)],
    opts: &EnumerationOptions,
) -> Result<Option<Vec<AmbientPoint>>> {
    let n = form.dim();
    let pivot = if form.coeff(n - 1, n - 1) != 0 {
        n - 1
    } else {
        match (0..n).find(|&k| form.coeff(k, k) != 0) {
            Some(k) => k,
            None => return Ok(None),
        }
    };
    if n == 1 {
        // Single variable: q·t² = m directly.
        let a = form.coeff(0, 0) as i128;
        let target = m as i128;
        let mut out = Vec::new();
        if target % a == 0 {
            if let Some(s) = isqrt(target / a) {
                if s * s == target / a {
                    for t in [s, -s] {
                        if t >= ranges[0].0 as i128 && t <= ranges[0].1 as i128 {
                            out.push(AmbientPoint::new(vec![t as i64]));
                        }
                        if s == 0 {
                            break;
                        }
                    }
                }
            }
        }
        return Ok(Some(out));
    }
    // Transposition (pivot, n−1); an involution, so it is its own inverse.
    let perm: Vec<usize> = (0..n)
        .map(|i| {
            if i == pivot {
                n - 1
            } else if i == n - 1 {
                pivot
            } else {
                i
            }
        })
        .collect();
    let perm_ranges: Vec<(i64, i64)> = (0..n).map(|i| ranges[perm[i]]).collect();
    let head = &perm_ranges[..n - 1];
    check_budget(box_volume(head), opts)?;

    let q = |i: usize, j: usize| form.coeff(perm[i], perm[j]) as i128;
    let a2 = q(n - 1, n - 1);
    debug_assert_ne!(a2, 0);
    let target = m as i128;
    let tail_range = perm_ranges[n - 1];

    // Worst-case |B|² + 4|A|·|C − m| must fit in i128; checked once here,
    // plain arithmetic below.
    {
        let mag = axis_magnitudes(&perm_ranges);
        let mut bmax: i128 = 0;
        let mut cmax: i128 = target.abs();
        for i in 0..n - 1 {
            bmax = overflow_guard(
                q(i, n - 1)
                    .abs()
                    .checked_mul(mag[i])
                    .and_then(|v| v.checked_add(bmax)),
            )?;
            for j in i..n - 1 {
                cmax = overflow_guard(
                    q(i, j)
                        .abs()
                        .checked_mul(mag[i])
                        .and_then(|v| v.checked_mul(mag[j]))
                        .and_then(|v| v.checked_add(cmax)),
                )?;
            }
        }
        overflow_guard(bmax.checked_mul(bmax).and_then(|b2| {
            (4 * a2.abs())
                .checked_mul(cmax)
                .and_then(|c4| b2.checked_add(c4))
        }))?;
    }

    let run = |ylo: i64, yhi: i64| -> Result<Vec<AmbientPoint>> {
        let mut out = Vec::new();
        let mut emit = |y: &[i64], u: i64, t: i128| {
            if t >= tail_range.0 as i128 && t <= tail_range.1 as i128 {
                let mut coords = vec![0i64; n];
                for i in 0..n - 2 {
                    coords[perm[i]] = y[i];
                }
                coords[perm[n - 2]] = u;
                coords[perm[n - 1]] = t as i64;
                out.push(AmbientPoint::new(coords));
            }
        };
        // Solve A t² + B t + (C − m) = 0 with the two innermost permuted
        // coordinates handled explicitly: for fixed outer coordinates y,
        // B and C are (at most) quadratic in the next coordinate u, so the
        // hot loop is a handful of multiplications plus one square root.
        let solve_inner = |y: &[i64], out_emit: &mut dyn FnMut(&[i64], i64, i128)| {
            let mut b0: i128 = 0; // B = b0 + b1·u
            let mut c0: i128 = target; // store m − C as c0 − c1·u − c2·u²
            let mut c1: i128 = 0;
            for i in 0..n - 2 {
                let yi = y[i] as i128;
                b0 += q(i, n - 1) * yi;
                c1 += q(i, n - 2) * yi;
                for j in i..n - 2 {
                    c0 -= q(i, j) * yi * y[j] as i128;
                }
            }
            let b1 = q(n - 2, n - 1);
            let c2 = q(n - 2, n - 2);
            let (ulo, uhi) = perm_ranges[n - 2];
            for u in ulo..=uhi {
                let ui = u as i128;
                let b = b0 + b1 * ui;
                let rhs = c0 - (c1 + c2 * ui) * ui; // m − C
                let disc = b * b + 4 * a2 * rhs;
                let Some(s) = isqrt(disc) else {
                    continue;
                };
                if s * s != disc {
                    continue;
                }
                let num1 = -b + s;
                if num1 % (2 * a2) == 0 {
                    out_emit(y, u, num1 / (2 * a2));
                }
                if s != 0 {
                    let num2 = -b - s;
                    if num2 % (2 * a2) == 0 {
                        out_emit(y, u, num2 / (2 * a2));
                    }
                }
            }
        };
        if n <= 2 {
            solve_inner(&[], &mut emit);
        } else {
            let mut outer = head[..n - 2].to_vec();
            outer[0] = (ylo, yhi);
            for_each_box(&outer, &mut |y| {
                solve_inner(y, &mut emit);
                Ok(())
            })?;
        }
        Ok(out)
    };

    let points = if n >= 3 {
        parallel_over_range(head[0], opts.threads, &run)?
    } else {
        run(0, 0)?
    };
    Ok(Some(points))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_iteration_is_lexicographic_and_complete() {
        let mut seen = Vec::new();
        for_each_box(&[(0, 1), (-1, 1)], &mut |c| {
            seen.push(c.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(seen.len(), 6);
        for w in seen.windows(2) {
            assert!(w[0] < w[1]);
        }
        // Empty axis → nothing; no axes → one empty tuple.
        let mut count = 0;
        for_each_box(&[(2, 1)], &mut |_| {
            count += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 0);
        for_each_box(&[], &mut |c| {
            assert!(c.is_empty());
            count += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 1);
    }

    #[test]
    fn divisor_pairs_cover_all_products() {
        for r in [-36i128, -7, -1, 1, 6, 12, 49] {
            let pairs = divisor_pairs(r);
            for &(u, v) in &pairs {
                assert_eq!(u * v, r);
            }
            // Every factorisation must be present.
            for u in -50i128..=50 {
                if u == 0 || r % u != 0 {
                    continue;
                }
                assert!(pairs.contains(&(u, r / u)), "missing {u}·{} = {r}", r / u);
            }
            let unique: std::collections::BTreeSet<_> = pairs.iter().collect();
            assert_eq!(unique.len(), pairs.len());
        }
    }

    #[test]
    fn rank_prune_detects_dependence() {
        // Rows (1,2,3) and (2,4,6) are dependent.
        assert!(!rows_full_rank(&[1, 2, 3, 2, 4, 6], 2, 3));
        assert!(rows_full_rank(&[1, 2, 3, 0, 1, 1], 2, 3));
        assert!(rows_full_rank(&[1, 0, 0, 1], 2, 2));
        assert!(!rows_full_rank(&[0, 0, 0, 0], 1, 4));
    }
}
