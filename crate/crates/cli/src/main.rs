//! Command-line front end for the magic-quantification toolkit.
//!
//! Subcommands compute the relative entropy of magic, grid scans, ray
//! families, and product-state witness reports, emitting CSV or JSON.
//! Exit codes: 0 success, 2 usage, 3 I/O, 4 internal consistency.

mod commands;
mod errors;
mod states;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Output encoding for data-bearing subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "remag",
    version,
    about = "Relative entropy of magic: closed-form ray families, a polytope \
             optimizer, and product-state witness planes"
)]
struct Cli {
    /// Seed echoed into reports; every subcommand is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relative entropy of magic of a state, with its closest stabilizer state.
    Magic {
        /// Bloch triple "x,y,z", a named state (T, H, Hlike, psi2q), or a
        /// tensor expression of named states ("T*T" or with the tensor sign).
        #[arg(long)]
        state: String,
        /// Optimality-gap tolerance for multi-qubit states.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Also write the json report to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report format (json only for this subcommand).
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Magic over a triangular grid of pure states above the +++ facet,
    /// plus a rotational-symmetry spread report.
    Heatmap {
        /// Grid resolution, at least 8; rows satisfy i+j+k = resolution-1.
        #[arg(long, default_value_t = 16)]
        resolution: usize,
        /// Circles in the symmetry report.
        #[arg(long, default_value_t = 8)]
        circles: usize,
        /// Points per symmetry circle.
        #[arg(long, default_value_t = 48)]
        points_per_circle: usize,
        /// Write the grid here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Ray polylines from boundary stabilizer states to the pure-state
    /// sphere.
    Rays {
        /// Facet id like +++ or edge id like s1-s3 (vertices emit no rays).
        #[arg(long, default_value = "+++")]
        face: String,
        /// Edge plane parameters (comma separated); defaults to
        /// 0, 1/sqrt(8), 1/sqrt(2). Edge faces only.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        c: Option<Vec<f64>>,
        /// Stabilizer sampling density across the face.
        #[arg(long, default_value_t = 4)]
        resolution: usize,
        /// Points per polyline.
        #[arg(long, default_value_t = 33)]
        steps: usize,
        /// Also report the alternate closed-form endpoint parameter, which
        /// disagrees with the quadratic solve by a known factor.
        #[arg(long)]
        alternate_t: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Joint-plane witness for a product of 2-3 single-qubit ray
    /// components.
    Witness {
        /// First component: T, H, Hlike, "facet:X,Y,Z[@F]", "X,Y,Z[@F]",
        /// or "edge:ID:WEIGHT:C[@F]" with F the endpoint fraction.
        #[arg(long)]
        a: String,
        /// Second component (same forms as --a).
        #[arg(long)]
        b: String,
        /// Optional third component (same forms as --a).
        #[arg(long)]
        third: Option<String>,
        /// Optimality-gap tolerance for --confirm.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Confirm the verdict by minimizing over the joint polytope.
        #[arg(long)]
        confirm: bool,
        /// Grid resolution of the plane-pair scan run for edge-edge pairs.
        #[arg(long, default_value_t = 9)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Ray inclination angle versus endpoint distance from the symmetric
    /// direction, with a linear fit.
    Angle {
        /// Smallest stabilizer Bloch length; default 1/sqrt(3) (centroid).
        #[arg(long)]
        r_min: Option<f64>,
        /// Largest stabilizer Bloch length; default 0.99, must stay below 1.
        #[arg(long)]
        r_max: Option<f64>,
        /// Sample count (at least 10).
        #[arg(long, default_value_t = 60)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Count (and optionally emit) the pure stabilizer states for 1-3
    /// qubits.
    Enumerate {
        /// Number of qubits (1-3).
        #[arg(long)]
        n: u32,
        /// Include every projector matrix in the report.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn main() -> ExitCode {
    // Die quietly when downstream stops reading (e.g. piping into head)
    // instead of panicking on the next print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let seed = cli.seed;
    let result = match &cli.command {
        Command::Magic {
            state,
            tol,
            out,
            format,
        } => commands::cmd_magic(seed, state, *tol, out, *format),
        Command::Heatmap {
            resolution,
            circles,
            points_per_circle,
            out,
            format,
        } => commands::cmd_heatmap(
            seed,
            *resolution,
            *circles,
            *points_per_circle,
            out,
            *format,
        ),
        Command::Rays {
            face,
            c,
            resolution,
            steps,
            alternate_t,
            out,
            format,
        } => commands::cmd_rays(
            seed,
            face,
            c,
            *resolution,
            *steps,
            *alternate_t,
            out,
            *format,
        ),
        Command::Witness {
            a,
            b,
            third,
            tol,
            confirm,
            resolution,
            out,
            format,
        } => commands::cmd_witness(seed, a, b, third, *tol, *confirm, *resolution, out, *format),
        Command::Angle {
            r_min,
            r_max,
            samples,
            out,
            format,
        } => commands::cmd_angle(seed, *r_min, *r_max, *samples, out, *format),
        Command::Enumerate {
            n,
            full,
            out,
            format,
        } => commands::cmd_enumerate(seed, *n, *full, out, *format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
