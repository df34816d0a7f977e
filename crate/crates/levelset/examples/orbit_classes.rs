//! Orbit classes of determinant levels via Smith chains.
//!
//! Points of det = m fall into classes labelled by divisor chains
//! d₁ | d₂ with d₁·d₂ = m; prime levels have a single class, composite
//! levels split.
//!
//! Run with: `cargo run --release --example orbit_classes`

use levelset::enumeration::{EnumerationOptions, Window};
use levelset::orbits::{divisor_chain_count, orbit_histogram, radial_scaling_witness};
use levelset::varieties::PolynomialFamily;

fn main() {
    let fam = PolynomialFamily::determinant(2).unwrap();
    let window = Window::cube(4, 3.0).unwrap();
    let opts = EnumerationOptions::default();

    for m in [1u64, 5, 4, 12, 36] {
        let h = orbit_histogram(&fam, m, &window, &opts).unwrap();
        println!(
            "m = {m}: {} points, {} of {} possible chains seen",
            h.total,
            h.rows.len(),
            divisor_chain_count(2, m)
        );
        for (chain, count) in &h.rows {
            println!("    {chain}: {count}");
        }
    }

    // Radial repeats: level 12 contains the doubled level-3 points, since
    // 12 = 3·2² and the determinant family has degree 2.
    let k = radial_scaling_witness(&fam, 3, 12).unwrap();
    println!("\nradial witness: level 12 = level 3 scaled by k = {k}");
    assert_eq!(radial_scaling_witness(&fam, 3, 11), None);
}
