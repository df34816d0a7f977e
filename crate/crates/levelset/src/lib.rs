//! Integer points on level sets of group-invariant polynomials.
//!
//! For a polynomial f from one of three families — the determinant on
//! n×n matrices, the Pfaffian on skew-symmetric 2n×2n matrices, or an
//! integral quadratic form of signature (r, s) — this crate enumerates
//! the integer solutions of f(x) = m whose radial projection m^{−1/d}·x
//! lands in a chosen window of the unit level set, classifies them into
//! arithmetic orbit classes, estimates the invariant measure of windows
//! by Monte Carlo, and runs desk-scale experiments on how the projected
//! point sets spread out as the level m grows.
//!
//! Start with the runnable examples, one per capability:
//!
//! ```text
//! cargo run --release --example pfaffian_identity       # exact evaluation
//! cargo run --release --example hecke_degrees           # sublattice counting
//! cargo run --release --example enumerate_level         # point enumeration
//! cargo run --release --example orbit_classes           # Smith-chain histograms
//! cargo run --release --example shell_measure           # invariant measure
//! cargo run --release --example equidistribution_sweep  # discrepancy trend
//! cargo run --release --example ratio_convergence       # two-window ratios
//! cargo run --release --example omega_trend             # counts vs Hecke degrees
//! cargo run --release --example fundamental_quadratic   # quadratic levels
//! ```
//!
//! Module map:
//!
//! * [`varieties`] — the polynomial families, canonical integer
//!   coordinates, exact i128 evaluation, and the radial projection.
//! * [`lattice`] — Hermite and Smith normal forms, Hecke-degree
//!   (sublattice) counting, and a seeded unimodular generator.
//! * [`enumeration`] — windows, exact scaled integer bounds, the pruned
//!   per-family searches, and the brute-force oracle they are tested
//!   against.
//! * [`measure`] — the shell construction of the invariant measure and
//!   measure-preserving window transforms.
//! * [`orbits`] — Smith-chain orbit histograms, fundamental
//!   discriminants, level-weight tables, and the radial-repeat witness.
//! * [`harness`] — experiment configs, the point cache, and the three
//!   experiment runners with JSON/CSV reports.
//!
//! The `levelset` binary wraps these as subcommands (`hecke`,
//! `enumerate`, `measure`, `orbits`, `fundamental`, `report`).

pub mod enumeration;
pub mod error;
pub mod harness;
pub mod intmat;
pub mod lattice;
pub mod measure;
pub mod orbits;
pub mod rng;
pub mod varieties;

pub use error::{Error, Result};
