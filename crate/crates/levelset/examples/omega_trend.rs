//! Point counts track the Hecke-degree level weights.
//!
//! For the determinant family the expected count at level m is
//! proportional to the number of index-m sublattices of ℤⁿ, so the
//! normalised count T_m / degree(m) flattens out while raw counts jump
//! around with the divisor structure of m.
//!
//! Run with: `cargo run --release --example omega_trend`

use levelset::enumeration::Window;
use levelset::harness::config::{ExperimentConfig, ExperimentKind};
use levelset::harness::run;
use levelset::varieties::PolynomialFamily;

fn main() {
    let config = ExperimentConfig {
        experiment: ExperimentKind::Omega,
        family: PolynomialFamily::determinant(2).unwrap(),
        levels: (100..=1500).step_by(100).collect(),
        fundamental_filter: false,
        window: Window::cube(4, 1.5).unwrap(),
        window2: None,
        grid_axes: (0, 1),
        grid_split: (1, 1),
        epsilon: 0.01,
        samples: 1_000_000,
        seed: 5,
        threads: 2,
        enum_budget: levelset::enumeration::DEFAULT_SEARCH_BUDGET,
        brute_budget: levelset::enumeration::DEFAULT_BRUTE_BUDGET,
        cache_dir: None,
    };

    let output = run(&config).unwrap();
    let omega = output.report.omega.as_ref().unwrap();

    println!("m, count, hecke_degree, count/degree");
    for row in &omega.rows {
        println!(
            "{:5} {:7} {:7} {:.3}",
            row.m, row.total, row.hecke_degree, row.normalized
        );
    }
    println!(
        "\nSpearman(count, degree) = {:+.3}; CV of the normalised count over the last third = {:.3}",
        omega.spearman_count_vs_degree.unwrap(),
        omega.cv_normalized_last_third.unwrap()
    );
}
