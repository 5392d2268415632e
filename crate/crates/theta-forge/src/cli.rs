//! Thin command-line front end over the library: lattice I/O, invariant
//! computation, verification suites, CSV/JSON emission.
//!
//! Exit codes: 0 success, 1 invariant violation or computation failure,
//! 2 I/O or parse error (with line/column for JSON inputs).

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::error::Error;
use crate::io::{fmt_f64, parse_grid, LatticeFile, SystemFile};
use crate::lattice::EuclideanLattice;
use crate::linalg::Mat;
use crate::{ext, profile, prolim, siegel, theta, thermo, verify};

#[derive(Debug, Parser)]
#[command(
    name = "theta-forge",
    version,
    about = "Theta invariants of euclidean lattices and their geometry-of-numbers counterparts"
)]
pub struct RunConfig {
    /// Relative tolerance used by certified theta sums.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tolerance: f64,

    /// Seed for all randomized commands; no environment entropy is used.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (defaults to available parallelism, or the
    /// THETA_FORGE_THREADS environment variable). Results are independent
    /// of the thread count.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Aggregate invariants of one lattice file.
    Invariants {
        #[arg(long)]
        lattice: PathBuf,
    },
    /// Certified theta values over a t grid (a single value or a:b:k).
    Theta {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long, default_value = "1")]
        t: String,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Counting profile: CSV rows (t, N_E(sqrt t), h0_ar).
    Profile {
        #[arg(long)]
        lattice: PathBuf,
        /// Largest squared norm tabulated.
        #[arg(long, default_value_t = 4.0)]
        t_max: f64,
    },
    /// Gext at one extension twist (JSON row-major matrix).
    Gext {
        #[arg(long = "E")]
        e: PathBuf,
        #[arg(long = "G")]
        g: PathBuf,
        #[arg(long = "T")]
        t: String,
    },
    /// Torus average of Gext(T)/Gext(0) against its closed form.
    GextAverage {
        #[arg(long = "E")]
        e: PathBuf,
        #[arg(long = "G")]
        g: PathBuf,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Asymptotic counting invariant over a t grid: CSV rows
    /// (t, htilde0_ar, beta_star, tail_certificate).
    Legendre {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long = "t-grid")]
        t_grid: String,
    },
    /// Limit invariants of a projective-system file.
    Prolim {
        #[arg(long)]
        system: PathBuf,
        /// Depth for the limit-measure report (defaults to the full chain).
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Hardy invariant h(R, delta) over a delta grid.
    Hardy {
        #[arg(long = "R")]
        r: f64,
        #[arg(long)]
        delta: String,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Siegel Monte Carlo averages for rank-2 classes of degree delta.
    Siegel {
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Run the property suites; exits 1 on the first violation.
    Verify {
        /// One of: lattice, theta, profile, extensions, thermo, prolim,
        /// siegel, all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

/// Parse the process command line and run; returns the exit code.
pub fn run() -> i32 {
    let config = RunConfig::parse();
    run_with(config)
}

pub fn run_with(config: RunConfig) -> i32 {
    let threads = config
        .threads
        .or_else(|| {
            std::env::var("THETA_FORGE_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();

    match execute(&config) {
        Ok(code) => code,
        Err(CliError::Parse(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

enum CliError {
    /// I/O or malformed input: exit 2.
    Parse(String),
    /// Violated invariant or failed computation: exit 1.
    Compute(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Parse(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn load_lattice(path: &Path) -> Result<EuclideanLattice, CliError> {
    let file: LatticeFile = load_json(path)?;
    file.into_lattice()
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn execute(config: &RunConfig) -> Result<i32, CliError> {
    let tol = config.tolerance;
    if !(tol > 0.0 && tol < 0.5) {
        return Err(CliError::Parse(format!(
            "tolerance must be in (0, 0.5), got {tol}"
        )));
    }
    match &config.command {
        Command::Invariants { lattice } => {
            let l = load_lattice(lattice)?;
            let h0 = theta::theta(&l, 1.0, tol)?;
            let h1 = theta::theta(&l.dual(), 1.0, tol)?;
            let min = profile::lambda1(&l)?;
            let out = json!({
                "label": l.label(),
                "rank": l.rank(),
                "covol": l.covolume(),
                "deg": l.degree(),
                "h0_theta": h0.log_value,
                "h0_rel_error": h0.rel_error,
                "h1_theta": h1.log_value,
                "h1_rel_error": h1.rel_error,
                "lambda1": min.lambda1,
                "nu": min.multiplicity,
                "poisson_residual": h0.log_value - h1.log_value - l.degree(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(0)
        }
        Command::Theta { lattice, t, csv } => {
            let l = load_lattice(lattice)?;
            let grid = parse_grid(t)?;
            if *csv {
                println!("t,log_theta,rel_error");
                for &tv in &grid {
                    let r = theta::theta(&l, tv, tol)?;
                    println!("{},{},{}", fmt_f64(tv), fmt_f64(r.log_value), fmt_f64(r.rel_error));
                }
            } else {
                let rows: Vec<_> = grid
                    .iter()
                    .map(|&tv| {
                        theta::theta(&l, tv, tol).map(|r| {
                            json!({"t": tv, "log_theta": r.log_value, "rel_error": r.rel_error})
                        })
                    })
                    .collect::<Result<_, _>>()?;
                println!("{}", serde_json::to_string_pretty(&rows).unwrap());
            }
            Ok(0)
        }
        Command::Profile { lattice, t_max } => {
            let l = load_lattice(lattice)?;
            let p = profile::CountingProfile::build(&l, *t_max)?;
            println!("t,count,h0_ar");
            for (t, c) in p.thresholds.iter().zip(&p.counts) {
                println!("{},{},{}", fmt_f64(*t), c, fmt_f64((*c as f64).ln()));
            }
            Ok(0)
        }
        Command::Gext { e, g, t } => {
            let le = load_lattice(e)?;
            let lg = load_lattice(g)?;
            let rows: Vec<Vec<f64>> = serde_json::from_str(t)
                .map_err(|err| CliError::Parse(format!("--T: {err}")))?;
            let point = ext::ExtensionPoint::new(Mat::from_rows(&rows));
            let value = ext::gext(&le, &lg, &point, tol)?;
            let zero = ext::gext(&le, &lg, &ext::ExtensionPoint::zero(le.rank(), lg.rank()), tol)?;
            let out = json!({
                "gext": value,
                "gext_zero": zero,
                "defect": (zero / value).ln(),
                "rel_error": tol,
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(0)
        }
        Command::GextAverage { e, g, grid } => {
            let le = load_lattice(e)?;
            let lg = load_lattice(g)?;
            let avg = ext::gext_average(&le, &lg, *grid)?;
            let closed = ext::gext_average_closed_form(&le, &lg)?;
            let out = json!({
                "grid": grid,
                "average": avg,
                "closed_form": closed,
                "abs_error": (avg - closed).abs(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(0)
        }
        Command::Legendre { lattice, t_grid } => {
            let l = load_lattice(lattice)?;
            let grid = parse_grid(t_grid)?;
            println!("t,htilde0_ar,beta_star,tail_certificate");
            for &tv in &grid {
                let r = thermo::htilde0_ar_detailed(&l, tv)?;
                println!(
                    "{},{},{},{}",
                    fmt_f64(tv),
                    fmt_f64(r.s),
                    fmt_f64(r.beta),
                    fmt_f64(1e-12)
                );
            }
            Ok(0)
        }
        Command::Prolim { system, depth } => {
            let file: SystemFile = load_json(system)?;
            let sys = file
                .into_system()
                .map_err(|e| CliError::Parse(format!("{}: {e}", system.display())))?;
            let depth = depth.unwrap_or_else(|| sys.depth());
            let report = prolim::summability_report(&sys, 0.0)?;
            let lim = prolim::limit_h0(&sys)?;
            let measures = prolim::limit_measure_truncation(&sys, depth.min(sys.depth()), 1e-10)?;
            let out = json!({
                "depth": sys.depth(),
                "level_h0": lim.level_h0,
                "kernel_h0": lim.kernel_h0,
                "partial_sums": report.partial_sums,
                "fitted_slope": report.fitted_slope,
                "strongly_summable_hint": report.strongly_summable_hint,
                "limit": {
                    "lower": lim.lower,
                    "estimate": lim.estimate,
                    "upper": lim.upper,
                    "modeled_tail": lim.modeled_tail,
                },
                "measure_levels": measures.iter().map(|m| json!({
                    "level": m.level,
                    "domination_ok": m.domination_ok,
                    "atoms": m.atoms.iter().map(|a| json!({
                        "coords": a.coords,
                        "mass": a.mass_at_depth.last().map(|x| x.1),
                        "lower": a.lower,
                        "upper": a.upper,
                    })).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(0)
        }
        Command::Hardy { r, delta, csv } => {
            let grid = parse_grid(delta)?;
            if *csv {
                println!("delta,h");
                for &d in &grid {
                    println!("{},{}", fmt_f64(d), fmt_f64(prolim::hardy_invariant(*r, d, tol)));
                }
            } else {
                let rows: Vec<_> = grid
                    .iter()
                    .map(|&d| json!({"delta": d, "h": prolim::hardy_invariant(*r, d, tol)}))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&rows).unwrap());
            }
            Ok(0)
        }
        Command::Siegel { delta, t, samples } => {
            let h0 = siegel::siegel_average_h0theta(*delta, *samples, config.seed)?;
            let ct = siegel::siegel_average_count(*delta, *t, *samples, config.seed ^ 1)?;
            let out = json!({
                "delta": delta,
                "t": t,
                "samples": samples,
                "seed": config.seed,
                "h0_theta": {
                    "estimate": h0.estimate,
                    "target": siegel::target_h0theta(*delta),
                    "spread": h0.spread,
                    "blocks": h0.blocks,
                },
                "count": {
                    "estimate": ct.estimate,
                    "target": siegel::target_count(*delta, *t),
                    "spread": ct.spread,
                    "blocks": ct.blocks,
                    "redraws": ct.redraws,
                },
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(0)
        }
        Command::Verify { suite, trials } => {
            let names: Vec<&str> = if suite == "all" {
                verify::SUITE_NAMES
                    .iter()
                    .copied()
                    .filter(|&n| n != "all")
                    .collect()
            } else {
                vec![suite.as_str()]
            };
            let mut failed = false;
            for name in names {
                match verify::run_suite(name, *trials, config.seed) {
                    Ok(()) => println!("suite {name}: ok"),
                    Err(e) => {
                        println!("suite {name}: FAILED\n  {e}");
                        failed = true;
                    }
                }
            }
            Ok(if failed { 1 } else { 0 })
        }
    }
}
