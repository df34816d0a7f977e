//! Equidistribution of projected determinant levels, at demo scale.
//!
//! As the level m grows, the projected points of det = m spread out over
//! the unit level set according to the invariant measure. The sweep
//! counts points per cell of a 2×4 grid, forms the total-variation
//! discrepancy against the cell measures, and reports the rank
//! correlation between m and the discrepancy — negative means the
//! empirical distribution is converging.
//!
//! Run with: `cargo run --release --example equidistribution_sweep`

use levelset::enumeration::Window;
use levelset::harness::config::{ExperimentConfig, ExperimentKind};
use levelset::harness::run;
use levelset::varieties::PolynomialFamily;

fn main() {
    let config = ExperimentConfig {
        experiment: ExperimentKind::Equidist,
        family: PolynomialFamily::determinant(2).unwrap(),
        levels: (50..=1550).step_by(150).collect(),
        fundamental_filter: false,
        window: Window::cube(4, 1.5).unwrap(),
        window2: None,
        grid_axes: (0, 1),
        grid_split: (2, 4),
        epsilon: 0.01,
        samples: 1_000_000,
        seed: 2024,
        threads: 2,
        enum_budget: levelset::enumeration::DEFAULT_SEARCH_BUDGET,
        brute_budget: levelset::enumeration::DEFAULT_BRUTE_BUDGET,
        cache_dir: None,
    };

    let output = run(&config).unwrap();
    let eq = output.report.equidist.as_ref().unwrap();

    println!("cells: {} (2x4 on the first two axes)", eq.cells.len());
    println!("m, count, discrepancy");
    for row in &eq.rows {
        match row.discrepancy {
            Some(d) => println!("{:5} {:7} {:.4}", row.m, row.total, d),
            None => println!("{:5} {:7} (no points)", row.m, row.total),
        }
    }
    println!(
        "\nSpearman(m, discrepancy) = {:+.3}  (negative = converging)",
        eq.spearman_level_vs_discrepancy.unwrap()
    );
}
