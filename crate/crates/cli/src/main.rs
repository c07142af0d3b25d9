//! Batch front end: every experiment is a subcommand with reproducible
//! configuration and file outputs.

mod cmds;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fatoulab::exec::{with_threads, ExecMode};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    SmallDivisor(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::SmallDivisor(m) => write!(f, "small divisor: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<fatoulab::Error> for CliError {
    fn from(e: fatoulab::Error) -> Self {
        use fatoulab::Error::*;
        match e {
            SmallDivisor { .. } => CliError::SmallDivisor(e.to_string()),
            Parse(_) | BadOrder(_) | Precondition(_) | ZeroForm(_) => {
                CliError::Config(e.to_string())
            }
            NonFinite(_) | CalibrationFailed(_) | SingularSample | DegenerateDirection
            | DegenerateFamily(_) | TrackingAmbiguity { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::SmallDivisor(_) => 4,
            CliError::Io(_) => 3,
        }
    }
}

/// Shared map-family flags.
#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    /// Map family: skew-siegel | cusp | tangent-id | generic.
    #[arg(long)]
    family: Option<String>,
    /// Rotation number for skew-siegel (default: golden mean).
    #[arg(long)]
    theta: Option<f64>,
    /// Cusp exponent p.
    #[arg(long)]
    p: Option<u32>,
    /// Cusp exponent q.
    #[arg(long)]
    q: Option<u32>,
    /// Tangency order k.
    #[arg(long)]
    k: Option<u32>,
    /// Defining function g for tangent-id (polynomial text).
    #[arg(long = "g-poly")]
    g_poly: Option<String>,
    /// P component for tangent-id (polynomial text).
    #[arg(long = "p-poly")]
    p_poly: Option<String>,
    /// Q component for tangent-id (polynomial text).
    #[arg(long = "q-poly")]
    q_poly: Option<String>,
    /// z-component for generic maps (polynomial text).
    #[arg(long)]
    pz: Option<String>,
    /// w-component for generic maps (polynomial text).
    #[arg(long)]
    pw: Option<String>,
}

#[derive(Parser, Debug)]
#[command(name = "fatoulab", version, about = "Numerical experiments on plane holomorphic dynamics")]
struct Cli {
    /// Configuration file (key=value lines with [section] headers).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (1 = sequential).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Suppress the timestamp line in metadata (for byte-identical reruns).
    #[arg(long = "no-timestamp", global = true, default_value_t = false)]
    no_timestamp: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Iterate one orbit, dump it as CSV, and classify it.
    Orbit {
        #[command(flatten)]
        map: MapArgs,
        /// Seed `z_re,z_im[,w_re,w_im]` (w defaults to 0).
        #[arg(long, allow_hyphen_values = true)]
        seed: Option<String>,
        /// Seed on the cusp curve: `t=re[,im]` places the seed at (t^q, t^p).
        #[arg(long = "seed-on-curve", allow_hyphen_values = true)]
        seed_on_curve: Option<String>,
        /// Number of iterations.
        #[arg(long)]
        n: Option<usize>,
        /// Classification target (polynomial text; default depends on family).
        #[arg(long)]
        target: Option<String>,
        /// Convergence tolerance for the normalized residual.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Characteristic directions of a germ.
    Chardirs {
        #[command(flatten)]
        map: MapArgs,
        /// Base point on the cusp curve: `t=re[,im]`.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Explicit base point `z_re,z_im,w_re,w_im`.
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        /// Leading form, first component (homogeneous polynomial text).
        #[arg(long)]
        fk1: Option<String>,
        /// Leading form, second component.
        #[arg(long)]
        fk2: Option<String>,
    },
    /// Calibrate sectors at a curve point and run the petal experiments.
    Petals {
        #[command(flatten)]
        map: MapArgs,
        /// Base point on the cusp curve: `t=re[,im]`.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Explicit base point `z_re,z_im,w_re,w_im`.
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        /// Seeds per sector.
        #[arg(long)]
        seeds: Option<usize>,
        /// Convergence budget (0 = auto from the calibrated radius).
        #[arg(long)]
        budget: Option<usize>,
        /// Budget for the repelling-exit experiment.
        #[arg(long = "exit-budget")]
        exit_budget: Option<usize>,
        /// Single sector index m (default: all).
        #[arg(long)]
        m: Option<u32>,
    },
    /// Sweep the cusp parameters and report the loop permutation per case.
    Monodromy {
        /// Largest p in the sweep.
        #[arg(long = "p-max")]
        p_max: Option<u32>,
        /// Largest q in the sweep.
        #[arg(long = "q-max")]
        q_max: Option<u32>,
        /// Smallest k.
        #[arg(long = "k-min")]
        k_min: Option<u32>,
        /// Largest k.
        #[arg(long = "k-max")]
        k_max: Option<u32>,
        /// Loop base point `re[,im]`.
        #[arg(long, allow_hyphen_values = true)]
        t0: Option<String>,
        /// Loop discretization steps (0 = auto, 8 k p q).
        #[arg(long)]
        steps: Option<usize>,
        /// Re-run each loop with doubled steps and require identical output.
        #[arg(long = "verify-refine")]
        verify_refine: Option<bool>,
    },
    /// Classify a 2-real-dimensional slice and render it as an image.
    Basin {
        #[command(flatten)]
        map: MapArgs,
        /// Slice base point `z_re,z_im,w_re,w_im`.
        #[arg(long = "slice-base", allow_hyphen_values = true)]
        slice_base: Option<String>,
        /// First spanning vector `z_re,z_im,w_re,w_im`.
        #[arg(long = "slice-e1", allow_hyphen_values = true)]
        slice_e1: Option<String>,
        /// Second spanning vector `z_re,z_im,w_re,w_im`.
        #[arg(long = "slice-e2", allow_hyphen_values = true)]
        slice_e2: Option<String>,
        /// Parameter window `s0,s1,t0,t1`.
        #[arg(long, allow_hyphen_values = true)]
        extent: Option<String>,
        /// Resolution `nx,ny`.
        #[arg(long)]
        res: Option<String>,
        /// Iteration budget per cell.
        #[arg(long)]
        budget: Option<usize>,
        /// Convergence tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Color converging cells by sector at this curve point: `t=re[,im]`.
        #[arg(long = "petal-at", allow_hyphen_values = true)]
        petal_at: Option<String>,
    },
    /// Linearizer series, renormalized-orbit deviation, half-plane
    /// calibration, and the reciprocal recursion.
    Siegel {
        /// Rotation number (default: golden mean).
        #[arg(long)]
        theta: Option<f64>,
        /// Series truncation order.
        #[arg(long)]
        order: Option<u32>,
        /// Base point on the z-axis `re[,im]`.
        #[arg(long, allow_hyphen_values = true)]
        z0: Option<String>,
        /// Fiber seed `re[,im]` (default: derived from the calibrated
        /// half-plane).
        #[arg(long, allow_hyphen_values = true)]
        w0: Option<String>,
        /// Orbit length for the deviation and recursion checks.
        #[arg(long = "n-max")]
        n_max: Option<usize>,
    },
    /// Check whether the map extends to an endomorphism of the projective
    /// plane.
    ExtendCheck {
        #[command(flatten)]
        map: MapArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads;
    let mode = match threads {
        Some(1) => ExecMode::Sequential,
        _ => ExecMode::Parallel,
    };
    let result = with_threads(threads, move || run(cli, mode));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fatoulab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli, mode: ExecMode) -> Result<(), CliError> {
    let file_cfg = match &cli.config {
        Some(path) => config::FileConfig::load(path)?,
        None => config::FileConfig::default(),
    };
    std::fs::create_dir_all(&cli.out)?;
    let ctx = cmds::Ctx {
        out: cli.out.clone(),
        no_timestamp: cli.no_timestamp,
        mode,
    };
    match cli.cmd {
        Command::Orbit {
            map,
            seed,
            seed_on_curve,
            n,
            target,
            tol,
        } => cmds::cmd_orbit(&ctx, file_cfg, map, seed, seed_on_curve, n, target, tol),
        Command::Chardirs {
            map,
            t,
            base,
            fk1,
            fk2,
        } => cmds::cmd_chardirs(&ctx, file_cfg, map, t, base, fk1, fk2),
        Command::Petals {
            map,
            t,
            base,
            seeds,
            budget,
            exit_budget,
            m,
        } => cmds::cmd_petals(&ctx, file_cfg, map, t, base, seeds, budget, exit_budget, m),
        Command::Monodromy {
            p_max,
            q_max,
            k_min,
            k_max,
            t0,
            steps,
            verify_refine,
        } => cmds::cmd_monodromy(&ctx, file_cfg, p_max, q_max, k_min, k_max, t0, steps, verify_refine),
        Command::Basin {
            map,
            slice_base,
            slice_e1,
            slice_e2,
            extent,
            res,
            budget,
            tol,
            petal_at,
        } => cmds::cmd_basin(
            &ctx, file_cfg, map, slice_base, slice_e1, slice_e2, extent, res, budget, tol,
            petal_at,
        ),
        Command::Siegel {
            theta,
            order,
            z0,
            w0,
            n_max,
        } => cmds::cmd_siegel(&ctx, file_cfg, theta, order, z0, w0, n_max),
        Command::ExtendCheck { map } => cmds::cmd_extend_check(&ctx, file_cfg, map),
    }
}
