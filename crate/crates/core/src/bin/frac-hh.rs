use std::fs::OpenOptions;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use frac_hh::etaconvex::{check_eta_convex_seeded, default_tolerance, DEFAULT_GRID, DEFAULT_SEED};
use frac_hh::functions::{eta_fn, real_fn};
use frac_hh::operators::{frac_left, frac_right};
use frac_hh::report::{exit, exit_code, format_significant, run_sweep, write_csv, SweepConfig};
use frac_hh::specialfn::k_gamma;
use frac_hh::{Error, FracParams, Interval, QuadSpec};

#[derive(Parser)]
#[command(name = "frac-hh", version, about = "(k,r)-fractional integrals and Hermite-Hadamard checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Left,
    Right,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification sweep and write the rows as CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        abs_tol: Option<f64>,
        #[arg(long)]
        rel_tol: Option<f64>,
    },
    /// Print Γ_k(x).
    Kgamma {
        #[arg(allow_hyphen_values = true)]
        x: f64,
        #[arg(allow_hyphen_values = true)]
        k: f64,
    },
    /// Evaluate a left or right fractional integral of a registry function.
    Fracint {
        #[arg(long, value_enum)]
        side: Side,
        #[arg(long = "fn")]
        function: String,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        /// Lower end (left side)
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        /// Upper end (right side)
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
    },
    /// Sample the η-convexity of a registry function on [a, b].
    CheckEta {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        eta: String,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn code_for(e: &Error) -> i32 {
    match e {
        Error::NonConvergence { .. } | Error::Evaluation { .. } => exit::NONCONVERGED,
        _ => exit::CONFIG,
    }
}

fn sweep(
    config: PathBuf,
    out: PathBuf,
    seed: Option<u64>,
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
) -> Result<i32, Error> {
    let mut cfg = SweepConfig::load(&config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if abs_tol.is_some() {
        cfg.abs_tol = abs_tol;
    }
    if rel_tol.is_some() {
        cfg.rel_tol = rel_tol;
    }
    let outcome = run_sweep(&cfg)?;
    write_csv(&outcome.rows, &out)?;

    let mut log_path = out.clone().into_os_string();
    log_path.push(".log");
    let mut log = OpenOptions::new().create(true).append(true).open(&log_path)?;
    writeln!(log, "sweep {} -> {} (seed {})", config.display(), out.display(), cfg.seed)?;
    for line in &outcome.log {
        writeln!(log, "{line}")?;
    }
    for line in outcome.log.iter().rev().take(2).rev() {
        eprintln!("{line}");
    }
    Ok(exit_code(&outcome.rows))
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Sweep {
            config,
            out,
            seed,
            abs_tol,
            rel_tol,
        } => sweep(config, out, seed, abs_tol, rel_tol),
        Command::Kgamma { x, k } => {
            println!("{}", format_significant(k_gamma(x, k)?, 15));
            Ok(exit::OK)
        }
        Command::Fracint {
            side,
            function,
            x,
            a,
            b,
            alpha,
            k,
            r,
        } => {
            let g = real_fn(&function)?;
            let p = FracParams::new(alpha, k, r)?;
            let q = QuadSpec::default();
            let value = match side {
                Side::Left => {
                    let a = a.ok_or_else(|| Error::Config("--side left needs --a".into()))?;
                    frac_left(&g, x, a, &p, &q)?
                }
                Side::Right => {
                    let b = b.ok_or_else(|| Error::Config("--side right needs --b".into()))?;
                    frac_right(&g, x, b, &p, &q)?
                }
            };
            println!("{}", format_significant(value, 15));
            Ok(exit::OK)
        }
        Command::CheckEta {
            function,
            eta,
            a,
            b,
            grid,
            seed,
        } => {
            let g = real_fn(&function)?;
            let e = eta_fn(&eta)?;
            let iv = Interval::new(a, b)?;
            let tol = default_tolerance(&g, &iv, grid);
            let v = check_eta_convex_seeded(&g, &e, &iv, grid, tol, seed)?;
            println!(
                "holds={} samples={} max_violation={:.6e} tolerance={:.3e}",
                v.holds, v.samples_checked, v.max_violation, v.tolerance
            );
            match v.witness {
                Some(w) => {
                    println!("witness x={} y={} beta={} violation={:.6e}", w.x, w.y, w.beta, w.violation);
                    Ok(exit::VIOLATED)
                }
                None => Ok(exit::OK),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::CONFIG } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        code_for(&e)
    });
    ExitCode::from(code as u8)
}
