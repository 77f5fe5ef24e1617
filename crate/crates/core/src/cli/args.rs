use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format '{other}' (expected json or csv)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Tree,
    Coset,
    Both,
}

#[derive(Debug, Parser)]
#[command(
    name = "hecke",
    version,
    about = "Hecke spheres, p-adic numbers, the p-adic solenoid and the Bruhat-Tits tree"
)]
pub struct Cli {
    /// p-adic working precision (digits).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub precision: Option<u32>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of stdout; relative paths are resolved
    /// against the configured output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Size of the worker pool used by the library.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
    /// key=value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Truncated p-adic arithmetic and the product formula.
    Padic(PadicArgs),
    /// Reduce a point of the upper half-plane to the fundamental domain.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// The p + 1 Hecke neighbours of a point.
    Neighbors {
        #[arg(long = "p")]
        p: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Print the unreduced neighbours pz and (z + k)/p.
        #[arg(long, conflicts_with = "reduced")]
        raw: bool,
        #[arg(long)]
        reduced: bool,
    },
    /// The Hecke sphere of radius N as a multiset of reduced points.
    Sphere(SphereArgs),
    /// The Bruhat-Tits tree of PGL(2, Q_p).
    Tree(TreeArgs),
    /// The p-adic solenoid and its suspension flow.
    Solenoid(SolenoidArgs),
    /// Empirical averages over Hecke spheres against hyperbolic measure.
    Equidist(EquidistArgs),
}

#[derive(Debug, Args)]
pub struct PadicArgs {
    #[arg(long = "p")]
    pub p: Option<u64>,
    #[command(subcommand)]
    pub command: PadicCommand,
}

#[derive(Debug, Subcommand)]
pub enum PadicCommand {
    /// Evaluate a rational expression (+ - * / and parentheses) in Q_p.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Absolute values at every place where a rational is not a unit.
    ProductFormula {
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
}

#[derive(Debug, Args)]
pub struct SphereArgs {
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, value_enum, default_value_t = Method::Tree)]
    pub method: Method,
    /// Unreduced coset images (coset method only).
    #[arg(long, conflicts_with = "reduced")]
    pub raw: bool,
    #[arg(long)]
    pub reduced: bool,
    /// Order in which the primes of N are processed, e.g. 3,2,5.
    #[arg(long)]
    pub order: Option<String>,
}

#[derive(Debug, Args)]
pub struct TreeArgs {
    #[arg(long = "p")]
    pub p: Option<u64>,
    #[command(subcommand)]
    pub command: TreeCommand,
}

#[derive(Debug, Subcommand)]
pub enum TreeCommand {
    /// Vertices at distance n from a centre (the root by default).
    Sphere {
        #[arg(long = "n")]
        n: u32,
        /// Centre as m,u.
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
    },
    /// Distance between two vertices given as m,u.
    Distance {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
}

#[derive(Debug, Args)]
pub struct SolenoidArgs {
    #[arg(long = "p")]
    pub p: Option<u64>,
    #[command(subcommand)]
    pub command: SolenoidCommand,
}

#[derive(Debug, Subcommand)]
pub enum SolenoidCommand {
    /// Returns of the flow to the starting fibre and the cylinders they hit.
    Orbit {
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        depth: u32,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        base: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        fiber: String,
        /// Use the compact subgroup p^j Z_p; the base circle has length p^j.
        #[arg(long, default_value_t = 0)]
        period: u32,
    },
}

#[derive(Debug, Args)]
pub struct EquidistArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Comma-separated radii, primes:MAX, or powers:P:MAX.
    #[arg(long = "N-list")]
    pub n_list: String,
    /// ystrip:c or box:x0,x1,y0,y1.
    #[arg(long, allow_hyphen_values = true)]
    pub test: String,
}
