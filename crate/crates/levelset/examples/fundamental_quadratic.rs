//! Quadratic levels along fundamental discriminants.
//!
//! Lists the fundamental discriminants, then runs a small discrepancy
//! sweep for x₁²+x₂²−x₃²−x₄² = m restricted to those levels.
//!
//! Run with: `cargo run --release --example fundamental_quadratic`

use levelset::enumeration::Window;
use levelset::harness::config::{ExperimentConfig, ExperimentKind};
use levelset::harness::run;
use levelset::orbits::{fundamental_discriminants_up_to, is_fundamental_discriminant};
use levelset::varieties::{PolynomialFamily, QuadraticForm};

fn main() {
    let fundamentals = fundamental_discriminants_up_to(60);
    println!("fundamental discriminants up to 60: {fundamentals:?}");
    assert!(fundamentals.iter().all(|&m| is_fundamental_discriminant(m)));

    let form = QuadraticForm::diagonal(&[1, 1, -1, -1]).unwrap();
    let config = ExperimentConfig {
        experiment: ExperimentKind::Equidist,
        family: PolynomialFamily::quadratic(form),
        levels: fundamental_discriminants_up_to(600),
        fundamental_filter: true,
        window: Window::cube(4, 3.0).unwrap(),
        window2: None,
        grid_axes: (0, 1),
        grid_split: (2, 2),
        epsilon: 0.01,
        samples: 1_000_000,
        seed: 31,
        threads: 2,
        enum_budget: levelset::enumeration::DEFAULT_SEARCH_BUDGET,
        brute_budget: levelset::enumeration::DEFAULT_BRUTE_BUDGET,
        cache_dir: None,
    };

    let output = run(&config).unwrap();
    let eq = output.report.equidist.as_ref().unwrap();
    println!("\nm, count, discrepancy (every 8th level shown)");
    for row in eq.rows.iter().step_by(8) {
        match row.discrepancy {
            Some(d) => println!("{:5} {:7} {:.4}", row.m, row.total, d),
            None => println!("{:5} {:7} (no points)", row.m, row.total),
        }
    }
    println!(
        "\nSpearman(m, discrepancy) over {} levels = {:+.3}",
        eq.rows.len(),
        eq.spearman_level_vs_discrepancy.unwrap()
    );
}
