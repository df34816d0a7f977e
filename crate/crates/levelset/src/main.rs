//! Command-line front end: Hecke degrees, point enumeration, shell
//! measures, orbit histograms, fundamental discriminants, and experiment
//! reports. The library (and its examples/) is the primary interface;
//! this binary is a thin wrapper for scripting.

use clap::{Args, Parser, Subcommand};
use levelset::enumeration::{
    enumerate_bruteforce, EnumerationOptions, Window, DEFAULT_BRUTE_BUDGET, DEFAULT_SEARCH_BUDGET,
};
use levelset::error::{Error, Result};
use levelset::harness::cache::{cached_enumerate, write_pointset};
use levelset::harness::config::{parse_config, read_qcoeffs};
use levelset::harness::{run, write_outputs};
use levelset::lattice::{enumerate_hnf, hecke_degree};
use levelset::measure::{estimate_measure, MeasureParams};
use levelset::orbits::{fundamental_discriminants_up_to, orbit_histogram};
use levelset::varieties::{PolynomialFamily, QuadraticForm};
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "levelset",
    version,
    about = "Integer points on level sets of invariant polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FamilyArgs {
    /// Polynomial family: det, pff, or quad.
    #[arg(long)]
    family: String,
    /// Matrix size parameter for det (n×n) and pff (2n×2n).
    #[arg(long)]
    n: Option<usize>,
    /// Quadratic signature as `R,S`.
    #[arg(long)]
    signature: Option<String>,
    /// Quadratic coefficient file: lines `i j q` (1-based, i <= j).
    #[arg(long)]
    qcoeffs: Option<PathBuf>,
    /// Quadratic diagonal coefficients as a comma list (alternative to --qcoeffs).
    #[arg(long)]
    qdiag: Option<String>,
}

impl FamilyArgs {
    fn build(&self) -> Result<PolynomialFamily> {
        match self.family.as_str() {
            "det" => PolynomialFamily::determinant(
                self.n
                    .ok_or_else(|| Error::invalid_argument("det needs --n"))?,
            ),
            "pff" => PolynomialFamily::pfaffian(
                self.n
                    .ok_or_else(|| Error::invalid_argument("pff needs --n"))?,
            ),
            "quad" => {
                let sig = self
                    .signature
                    .as_ref()
                    .ok_or_else(|| Error::invalid_argument("quad needs --signature R,S"))?;
                let (r, s) = sig
                    .split_once(',')
                    .ok_or_else(|| Error::invalid_argument("--signature needs R,S"))?;
                let r: usize = r
                    .trim()
                    .parse()
                    .map_err(|e| Error::invalid_argument(format!("signature: {e}")))?;
                let s: usize = s
                    .trim()
                    .parse()
                    .map_err(|e| Error::invalid_argument(format!("signature: {e}")))?;
                let form = if let Some(path) = &self.qcoeffs {
                    QuadraticForm::new(r, s, read_qcoeffs(path, r + s)?)?
                } else if let Some(diag) = &self.qdiag {
                    let d: Vec<i64> = diag
                        .split(',')
                        .map(|t| t.trim().parse::<i64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|e| Error::invalid_argument(format!("qdiag: {e}")))?;
                    QuadraticForm::diagonal(&d)?
                } else {
                    return Err(Error::invalid_argument("quad needs --qcoeffs or --qdiag"));
                };
                if form.signature() != (r, s) {
                    return Err(Error::invalid_argument(format!(
                        "form has signature {:?}, not ({r}, {s})",
                        form.signature()
                    )));
                }
                if form.signature_warning() {
                    log::warn!(
                        "signature ({r}, {s}) is outside the supported hypotheses (r+s >= 4, r >= 2, s >= 1)"
                    );
                }
                Ok(PolynomialFamily::quadratic(form))
            }
            other => Err(Error::invalid_argument(format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the number of n×n Hermite forms of determinant m.
    Hecke {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
        /// Stream the matrices themselves as row-major CSV rows.
        #[arg(long)]
        list: bool,
    },
    /// Enumerate the integer points of one level inside a window.
    Enumerate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        m: u64,
        /// Window file: one `lo hi` pair per line.
        #[arg(long)]
        window: PathBuf,
        /// Use the exhaustive scan instead of the pruned search.
        #[arg(long)]
        brute_force: bool,
        /// Write the point CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Monte Carlo shell-measure estimate of a window.
    Measure {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        window: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Histogram of Smith-chain orbit classes at one level.
    Orbits {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        window: PathBuf,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// List the fundamental discriminants up to a bound.
    Fundamental {
        #[arg(long)]
        max: u64,
    },
    /// Run an experiment config and write the report.
    Report {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the config's thread count.
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    let stdout = std::io::stdout();
    match cmd {
        Command::Hecke { n, m, list } => {
            if list {
                let mut w = stdout.lock();
                for h in enumerate_hnf(n, m)? {
                    let row: Vec<String> = h.flat().iter().map(|v| v.to_string()).collect();
                    writeln!(w, "{}", row.join(","))?;
                }
            } else {
                println!("{}", hecke_degree(n, m)?);
            }
            Ok(0)
        }
        Command::Enumerate {
            family,
            m,
            window,
            brute_force,
            out,
            cache_dir,
            threads,
        } => {
            let fam = family.build()?;
            let win = Window::from_file(&window)?;
            let opts = EnumerationOptions {
                threads,
                budget: DEFAULT_SEARCH_BUDGET,
                brute_budget: DEFAULT_BRUTE_BUDGET,
            };
            let ps = if brute_force {
                enumerate_bruteforce(&fam, m, &win, &opts)?
            } else {
                cached_enumerate(cache_dir.as_deref(), &fam, m, &win, &opts)?
            };
            match out {
                Some(path) => {
                    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
                    write_pointset(&mut f, &ps)?;
                    f.flush()?;
                }
                None => {
                    let mut w = stdout.lock();
                    write_pointset(&mut w, &ps)?;
                }
            }
            Ok(0)
        }
        Command::Measure {
            family,
            window,
            epsilon,
            samples,
            seed,
            threads,
        } => {
            let fam = family.build()?;
            let win = Window::from_file(&window)?;
            let est = estimate_measure(
                &fam,
                &win,
                &MeasureParams {
                    epsilon,
                    samples,
                    seed,
                    threads,
                },
            )?;
            let se = est.std_error.map(|s| format!("{s:?}")).unwrap_or_default();
            println!("{:?},{},{}", est.value, se, est.hits);
            Ok(0)
        }
        Command::Orbits {
            family,
            m,
            window,
            threads,
        } => {
            let fam = family.build()?;
            let win = Window::from_file(&window)?;
            let opts = EnumerationOptions {
                threads,
                ..Default::default()
            };
            let h = orbit_histogram(&fam, m, &win, &opts)?;
            let mut w = stdout.lock();
            writeln!(
                w,
                "# orbit classes are Smith chains (GL_n(Z) x GL_n(Z) invariants); \
                 possible SL x SL refinement is not resolved"
            )?;
            writeln!(
                w,
                "# m={} total={} classes={} possible_classes={}",
                h.m,
                h.total,
                h.rows.len(),
                h.possible_classes
            )?;
            for (chain, count) in &h.rows {
                writeln!(w, "{chain};{count}")?;
            }
            Ok(0)
        }
        Command::Fundamental { max } => {
            let mut w = stdout.lock();
            for m in fundamental_discriminants_up_to(max) {
                writeln!(w, "{m}")?;
            }
            Ok(0)
        }
        Command::Report {
            config,
            out,
            threads,
        } => {
            let mut cfg = parse_config(&config)?;
            if let Some(t) = threads {
                cfg.threads = t;
            }
            let output = run(&cfg)?;
            write_outputs(&out, &output)?;
            if output.had_errors() {
                for e in &output.report.errors {
                    eprintln!("level {}: {}", e.m, e.message);
                }
                eprintln!(
                    "report written to {} with {} level error(s)",
                    out.display(),
                    output.report.errors.len()
                );
                Ok(1)
            } else {
                eprintln!("report written to {}", out.display());
                Ok(0)
            }
        }
    }
}
