//! Exact integer bounds for scaled window edges.
//!
//! A level-m box has real edges m^{1/d}·lo and m^{1/d}·hi. Deciding which
//! integers fall inside must not go through floating point: an integer t
//! is compared against m^{1/d}·b by writing the f64 b exactly as a dyadic
//! rational M·2^e and comparing d-th powers of big integers. The float
//! value is only used to seed the search.

use num_bigint::BigInt;
use num_traits::Zero;
use std::cmp::Ordering;

/// Exact dyadic decomposition: v = mantissa · 2^exponent.
fn integer_decode(v: f64) -> (i64, i32) {
    assert!(v.is_finite());
    let bits = v.to_bits();
    let sign: i64 = if bits >> 63 == 0 { 1 } else { -1 };
    let mut exponent = ((bits >> 52) & 0x7ff) as i32;
    let mantissa = if exponent == 0 {
        (bits & 0xf_ffff_ffff_ffff) << 1
    } else {
        (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000
    };
    exponent -= 1075;
    (sign * mantissa as i64, exponent)
}

/// Ordering of the integer t relative to m^{1/d} · bound, exactly.
pub fn cmp_scaled(t: i64, m: u64, d: u32, bound: f64) -> Ordering {
    debug_assert!(m >= 1 && d >= 1);
    if bound == 0.0 {
        return t.cmp(&0);
    }
    let (mant, exp) = integer_decode(bound);
    // t ? m^{1/d} · mant · 2^exp  ⟺  a ? m^{1/d} · b with the power of two
    // moved to whichever side keeps both integral.
    let (a, b) = if exp >= 0 {
        (BigInt::from(t), BigInt::from(mant) << exp as usize)
    } else {
        (BigInt::from(t) << (-exp) as usize, BigInt::from(mant))
    };
    match (a.sign(), b.sign()) {
        (_, num_bigint::Sign::NoSign) => a.cmp(&BigInt::zero()),
        (num_bigint::Sign::NoSign | num_bigint::Sign::Plus, num_bigint::Sign::Minus) => {
            Ordering::Greater
        }
        (num_bigint::Sign::NoSign | num_bigint::Sign::Minus, num_bigint::Sign::Plus) => {
            Ordering::Less
        }
        (num_bigint::Sign::Plus, num_bigint::Sign::Plus) => {
            // a ? m^{1/d} b  ⟺  a^d ? m·b^d for positives.
            a.pow(d).cmp(&(BigInt::from(m) * b.pow(d)))
        }
        (num_bigint::Sign::Minus, num_bigint::Sign::Minus) => {
            // Both negative: flip through absolute values.
            (BigInt::from(m) * (-b).pow(d)).cmp(&(-a).pow(d))
        }
    }
}

/// Smallest integer ≥ m^{1/d} · bound.
pub fn scaled_ceil(bound: f64, m: u64, d: u32) -> i64 {
    let guess = ((m as f64).powf(1.0 / d as f64) * bound).ceil() as i64;
    let mut t = guess.saturating_sub(4);
    while cmp_scaled(t, m, d, bound) == Ordering::Less {
        t += 1;
    }
    t
}

/// Largest integer ≤ m^{1/d} · bound.
pub fn scaled_floor(bound: f64, m: u64, d: u32) -> i64 {
    let guess = ((m as f64).powf(1.0 / d as f64) * bound).floor() as i64;
    let mut t = guess.saturating_add(4);
    while cmp_scaled(t, m, d, bound) == Ordering::Greater {
        t -= 1;
    }
    t
}

/// Integer square root of a nonnegative i128, or None if negative.
pub fn isqrt(v: i128) -> Option<i128> {
    if v < 0 {
        return None;
    }
    if v < 2 {
        return Some(v);
    }
    let mut x = (v as f64).sqrt() as i128 + 1;
    while x * x > v {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= v {
        x += 1;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_floor_match_naive_on_easy_values() {
        for m in [1u64, 2, 4, 9, 25, 100] {
            for d in [2u32, 3] {
                for b in [-4.5f64, -1.5, -1.0, 0.0, 0.25, 1.0, 1.5, 2.5, 7.75] {
                    let exactish = (m as f64).powf(1.0 / d as f64) * b;
                    let c = scaled_ceil(b, m, d);
                    let f = scaled_floor(b, m, d);
                    assert!(
                        (c as f64 - exactish.ceil()).abs() <= 1.0,
                        "ceil m={m} d={d} b={b}"
                    );
                    assert!((f as f64 - exactish.floor()).abs() <= 1.0);
                    assert!(f <= c || f == c - 1 || f >= c); // floor ≤ value ≤ ceil
                    assert!(cmp_scaled(c, m, d, b) != Ordering::Less);
                    assert!(cmp_scaled(c - 1, m, d, b) == Ordering::Less);
                    assert!(cmp_scaled(f, m, d, b) != Ordering::Greater);
                    assert!(cmp_scaled(f + 1, m, d, b) == Ordering::Greater);
                }
            }
        }
    }

    #[test]
    fn exact_boundary_hits() {
        // m = 4, d = 2 → scale 2: the edge 1.5 scales to exactly 3.
        assert_eq!(scaled_ceil(1.5, 4, 2), 3);
        assert_eq!(scaled_floor(1.5, 4, 2), 3);
        assert_eq!(cmp_scaled(3, 4, 2, 1.5), Ordering::Equal);
        // m = 9, d = 2 → scale 3: −1.0 scales to exactly −3.
        assert_eq!(scaled_ceil(-1.0, 9, 2), -3);
        assert_eq!(scaled_floor(-1.0, 9, 2), -3);
        // m = 8, d = 3 → scale 2: 2.5 scales to exactly 5.
        assert_eq!(scaled_floor(2.5, 8, 3), 5);
        assert_eq!(scaled_ceil(2.5, 8, 3), 5);
    }

    #[test]
    fn irrational_scale_brackets_correctly() {
        // √2·1.5 = 2.1213…: floor 2, ceil 3.
        assert_eq!(scaled_floor(1.5, 2, 2), 2);
        assert_eq!(scaled_ceil(1.5, 2, 2), 3);
        // √2·(−1.5) = −2.1213…: floor −3, ceil −2.
        assert_eq!(scaled_floor(-1.5, 2, 2), -3);
        assert_eq!(scaled_ceil(-1.5, 2, 2), -2);
    }

    #[test]
    fn isqrt_exact() {
        for v in 0..10_000i128 {
            let r = isqrt(v).unwrap();
            assert!(r * r <= v && (r + 1) * (r + 1) > v);
        }
        assert_eq!(isqrt(-1), None);
        let big = 3_037_000_499i128;
        assert_eq!(isqrt(big * big), Some(big));
        assert_eq!(isqrt(big * big - 1), Some(big - 1));
    }
}
