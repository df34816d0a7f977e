//! Enumerating the integer points of one level inside a window.
//!
//! Counts 2×2 integer matrices with determinant m whose radial projection
//! lies in the box [−1.5, 1.5]⁴, and cross-checks the pruned search
//! against the exhaustive scan.
//!
//! Run with: `cargo run --release --example enumerate_level`

use levelset::enumeration::{enumerate_bruteforce, enumerate_points, EnumerationOptions, Window};
use levelset::varieties::PolynomialFamily;

fn main() {
    let fam = PolynomialFamily::determinant(2).unwrap();
    let window = Window::cube(4, 1.5).unwrap();
    let opts = EnumerationOptions::default();

    println!("m, count in [-1.5,1.5]^4 (projected)");
    for m in [1u64, 2, 3, 4, 5, 6, 12, 60, 360] {
        let fast = enumerate_points(&fam, m, &window, &opts).unwrap();
        if m <= 12 {
            let slow = enumerate_bruteforce(&fam, m, &window, &opts).unwrap();
            assert_eq!(fast.points, slow.points, "oracle mismatch at m = {m}");
        }
        println!("{m:4} {:6}", fast.len());
    }

    let m = 4;
    let ps = enumerate_points(&fam, m, &window, &opts).unwrap();
    println!(
        "\nthe {} points of level {m}, row-major [[a,b],[c,d]]:",
        ps.len()
    );
    for p in ps.points.iter().take(10) {
        println!("  {p}");
    }
    if ps.len() > 10 {
        println!("  ... ({} more)", ps.len() - 10);
    }

    // Window membership is exact: the level-4 scaled box has edge 3.0,
    // and points with a coordinate of exactly ±3 are inside (closed box).
    let on_face = ps
        .points
        .iter()
        .filter(|p| p.coords().iter().any(|&c| c.abs() == 3))
        .count();
    println!("points touching the scaled boundary: {on_face}");
}
