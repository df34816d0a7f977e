//! Hecke degrees: counting index-m sublattices of ℤⁿ.
//!
//! For n = 2 the degree is the divisor sum σ₁(m); the example tabulates
//! degrees, cross-checks them against the explicit Hermite-form listing,
//! and shows the prime-power leading order p^{k(n−1)}.
//!
//! Run with: `cargo run --release --example hecke_degrees`

use levelset::lattice::{divisors, enumerate_hnf, hecke_degree, pfaffian_local_weight};

fn main() {
    println!("m, hecke_degree(2,m), sigma_1(m), hecke_degree(3,m), |hnf(3,m)|");
    for m in 1..=20u64 {
        let d2 = hecke_degree(2, m).unwrap();
        let sigma: u64 = divisors(m).iter().sum();
        let d3 = hecke_degree(3, m).unwrap();
        let listed = enumerate_hnf(3, m).unwrap().len();
        assert_eq!(d2, sigma as i128);
        assert_eq!(d3, listed as i128);
        println!("{m:3} {d2:6} {sigma:6} {d3:8} {listed:8}");
    }

    println!("\nprime powers: degree / p^(k(n-1)) stays in [1, 4] and falls with p");
    for n in [2usize, 3] {
        for k in 1..=3u32 {
            let mut line = format!("n={n} k={k}:");
            for p in [2u64, 3, 5, 7, 11, 13] {
                let deg = hecke_degree(n, p.pow(k)).unwrap() as f64;
                let ratio = deg / (p as f64).powi((k * (n as u32 - 1)) as i32);
                line.push_str(&format!(" {ratio:.3}"));
            }
            println!("{line}");
        }
    }

    println!("\npfaffian local weights (sum of p^i, i <= 2n-2):");
    for n in [2usize, 3] {
        let row: Vec<String> = [2u64, 3, 5, 7, 11, 13]
            .iter()
            .map(|&p| format!("{}", pfaffian_local_weight(n, p).unwrap()))
            .collect();
        println!("n={n}: {}", row.join(", "));
    }
}
