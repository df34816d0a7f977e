//! Count ratios of two windows converge to their measure ratio.
//!
//! The two boxes are related by the measure-preserving map
//! X ↦ diag(2, 1/2)·X, so their invariant measures are equal and the
//! per-level count ratio must drift toward 1 even though the point sets
//! are unrelated lattice configurations.
//!
//! Run with: `cargo run --release --example ratio_convergence`

use levelset::enumeration::Window;
use levelset::harness::config::{ExperimentConfig, ExperimentKind};
use levelset::harness::run;
use levelset::varieties::PolynomialFamily;

fn main() {
    // Ω and its image under (a, b, c, d) ↦ (2a, 2b, c/2, d/2); the a-axis
    // ranges are disjoint, so the windows never share a point.
    let w1 = Window::new(vec![(0.55, 0.95), (-1.2, 1.2), (-1.2, 1.2), (0.2, 1.8)]).unwrap();
    let w2 = Window::new(vec![(1.1, 1.9), (-2.4, 2.4), (-0.6, 0.6), (0.1, 0.9)]).unwrap();

    let config = ExperimentConfig {
        experiment: ExperimentKind::Ratio,
        family: PolynomialFamily::determinant(2).unwrap(),
        levels: (50..=2000).step_by(150).collect(),
        fundamental_filter: false,
        window: w1,
        window2: Some(w2),
        grid_axes: (0, 1),
        grid_split: (1, 1),
        epsilon: 0.01,
        samples: 1_000_000,
        seed: 77,
        threads: 2,
        enum_budget: levelset::enumeration::DEFAULT_SEARCH_BUDGET,
        brute_budget: levelset::enumeration::DEFAULT_BRUTE_BUDGET,
        cache_dir: None,
    };

    let output = run(&config).unwrap();
    let ratio = output.report.ratio.as_ref().unwrap();

    println!(
        "mu(W1) = {:.4}, mu(W2) = {:.4}, mu ratio = {:.4} +- {:.4}",
        ratio.mu_1,
        ratio.mu_2,
        ratio.mu_ratio.unwrap(),
        ratio.mu_ratio_std_error.unwrap()
    );
    println!("m, N1, N2, N1/N2");
    for row in &ratio.rows {
        match row.ratio {
            Some(r) => println!("{:5} {:6} {:6} {:.4}", row.m, row.count_1, row.count_2, r),
            None => println!("{:5} {:6} {:6} (flagged)", row.m, row.count_1, row.count_2),
        }
    }
    println!(
        "\nmedian |ratio - mu_ratio|: first third {:.4}, last third {:.4}",
        ratio.first_third_median_abs_dev.unwrap(),
        ratio.last_third_median_abs_dev.unwrap()
    );
}
