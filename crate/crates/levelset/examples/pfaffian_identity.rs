//! The Pfaffian and its squared identity.
//!
//! Draws random skew-symmetric integer matrices, evaluates the Pfaffian
//! in upper-triangle coordinates, and checks Pff(X)² = Det(X) exactly.
//!
//! Run with: `cargo run --release --example pfaffian_identity`

use levelset::rng::SplitMix64;
use levelset::varieties::{
    pfaffian_matrix_expand, symplectic_base_point, AmbientPoint, PolynomialFamily,
};

fn main() {
    for n in [2usize, 3] {
        let pff = PolynomialFamily::pfaffian(n).unwrap();
        let det = PolynomialFamily::determinant(2 * n).unwrap();
        let dim = pff.ambient_dim();

        let base = symplectic_base_point(n);
        println!(
            "n = {n}: ambient dimension {dim}, Pff(base point) = {}",
            pff.eval(&base).unwrap()
        );

        let mut rng = SplitMix64::stream(7, 0);
        let mut checked = 0u32;
        for _ in 0..1000 {
            let coords: Vec<i64> = (0..dim).map(|_| rng.next_below(19) as i64 - 9).collect();
            let x = AmbientPoint::new(coords);
            let p = pff.eval(&x).unwrap();
            let full = pfaffian_matrix_expand(&x, n).unwrap();
            let flat: Vec<i64> = full.flat().iter().map(|&v| v as i64).collect();
            let d = det.eval(&AmbientPoint::new(flat)).unwrap();
            assert_eq!(p * p, d, "identity failed at {x}");
            checked += 1;
        }
        println!(
            "  Pff(X)^2 = Det(X) verified on {checked} random {0}x{0} matrices",
            2 * n
        );
    }

    // The n = 2 Pfaffian is a ternary bilinear expression in the six
    // upper-triangle coordinates (x12, x13, x14, x23, x24, x34).
    let pff = PolynomialFamily::pfaffian(2).unwrap();
    let x = AmbientPoint::new(vec![1, 2, 3, 4, 5, 6]);
    println!(
        "example: Pff(1,2,3,4,5,6) = {} (= 2*5 - 1*6 - 3*4)",
        pff.eval(&x).unwrap()
    );
}
