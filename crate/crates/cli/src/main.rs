//! `cubik`: command-line front end for the cube complex toolkit.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::{Failure, INPUT};

#[derive(Parser)]
#[command(
    name = "cubik",
    version,
    about = "Finite cube complexes: checks, hyperplanes, collapses, metrics and balls"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Opts {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Norm: 1, 2 or inf.
    #[arg(long, global = true, default_value = "2")]
    pub p: String,
    /// Solver move tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Lattice resolution for probes.
    #[arg(long, global = true, default_value_t = 8)]
    pub grid: usize,
    /// Write the produced file here instead of stdout.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Parse and validate a complex, decomposition or gcuboid file.
    Validate {
        file: PathBuf,
        /// Complex to check a decomposition or gcuboid against.
        #[arg(long)]
        complex: Option<PathBuf>,
    },
    /// Median, link and CAT(0) checks (all three by default).
    Check {
        file: PathBuf,
        #[arg(long)]
        median: bool,
        #[arg(long)]
        link: bool,
        #[arg(long)]
        cat0: bool,
    },
    /// Hyperplanes, halfspaces and crossings.
    Hyperplanes { file: PathBuf },
    /// Longest chain of strictly nested halfspaces.
    Width { file: PathBuf },
    /// Color the crossing graph.
    Color {
        file: PathBuf,
        /// Exact chromatic number instead of the greedy coloring.
        #[arg(long)]
        exact: bool,
    },
    /// Collapse a CAT(0) complex down to a vertex.
    Collapse { file: PathBuf },
    /// Rebuild a complex from its decomposition.
    Expand { file: PathBuf },
    /// ℓp distance between two points.
    Dist {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// ℓ∞ ball around a point or a generalized cuboid.
    Ball {
        file: PathBuf,
        #[arg(long, conflicts_with = "gcuboid", required_unless_present = "gcuboid")]
        center: Option<String>,
        #[arg(long)]
        gcuboid: Option<PathBuf>,
        #[arg(long)]
        radius: f64,
        /// Decomposition to use (computed when absent).
        #[arg(long)]
        decomp: Option<PathBuf>,
    },
    /// Look for a common point of ℓ∞ balls.
    Hyperconvex {
        file: PathBuf,
        #[arg(long = "center", required = true)]
        centers: Vec<String>,
        #[arg(long = "radius", required = true)]
        radii: Vec<f64>,
        /// Build the balls exactly from this decomposition.
        #[arg(long)]
        decomp: Option<PathBuf>,
    },
    /// Generate a complex (kinds: path, tree, hypercube, grid, k23, tricorner,
    /// hollow_square, strip, lshape, simplex, random_collapsible).
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        cuboids: Option<usize>,
        /// Where random_collapsible writes its decomposition.
        #[arg(long)]
        decomp: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT } else { 0 });
        }
    };
    match commands::run(&cli.command, &cli.opts) {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
