use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use meridian_core::{Expr, Interval};

#[derive(Debug, Parser)]
#[command(name = "meridian", version, about = "Meridian surfaces of parabolic type in Minkowski 4-space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a family profile and write (u, f, f', f'', g) samples.
    Family(FamilyArgs),
    /// Tabulate the invariants on a parameter grid.
    Invariants(GridArgs),
    /// Check the closed forms against the finite-difference oracle.
    Verify(VerifyArgs),
    /// Export the embedded surface as a JSON mesh.
    Mesh(MeshArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Projection {
    None,
    #[value(name = "drop-e4")]
    DropE4,
}

impl Projection {
    pub fn label(self) -> &'static str {
        match self {
            Projection::None => "none",
            Projection::DropE4 => "drop-e4",
        }
    }
}

/// `start:end[:step]`, each bound a constant expression such as `2*pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeArg {
    pub interval: Interval,
    pub step: Option<f64>,
}

fn constant(text: &str) -> anyhow::Result<f64> {
    let e = Expr::parse(text, "x").with_context(|| format!("range bound `{text}`"))?;
    Ok(e.eval(0.0)?)
}

impl FromStr for RangeArg {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            bail!("range `{s}` must look like start:end or start:end:step");
        }
        let (a, b) = (constant(parts[0])?, constant(parts[1])?);
        let step = parts.get(2).map(|p| constant(p)).transpose()?;
        if let Some(h) = step {
            if !(h > 0.0) {
                bail!("range step `{}` must be positive", parts[2]);
            }
        }
        Ok(RangeArg { interval: Interval::new(a, b).map_err(|e| anyhow!("range `{s}`: {e}"))?, step })
    }
}

/// `NUxNV`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSize {
    pub nu: usize,
    pub nv: usize,
}

impl FromStr for GridSize {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| anyhow!("grid `{s}` must look like 10x10"))?;
        let (nu, nv) = (a.trim().parse()?, b.trim().parse()?);
        if nu == 0 || nv == 0 {
            bail!("grid `{s}` must be nonempty");
        }
        Ok(GridSize { nu, nv })
    }
}

/// How the surface is specified: a family (`--spec`) or explicit `--f`.
#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    /// Family spec, e.g. 'parallel-a c=1 d=1 a=0 sign=+'.
    #[arg(long, conflicts_with = "f")]
    pub spec: Option<String>,
    /// Profile f(u) as an expression (instead of --spec).
    #[arg(long)]
    pub f: Option<String>,
    /// Directrix phi(v). Defaults to the constant-curvature directrix a
    /// family needs, or phi = 1.
    #[arg(long)]
    pub phi: Option<String>,
    /// g at the left end of the u range (explicit --f only).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub g0: f64,
    /// Initial value f(u_start) for ODE families.
    #[arg(long, default_value_t = 1.0)]
    pub f0: f64,
    /// u range start:end[:step].
    #[arg(long, allow_hyphen_values = true)]
    pub u: RangeArg,
    /// v range start:end[:step].
    #[arg(long, default_value = "0:2*pi", allow_hyphen_values = true)]
    pub v: RangeArg,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub spec: String,
    #[arg(long, default_value_t = 1.0)]
    pub f0: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub u: RangeArg,
    /// v range used to check or build the directrix.
    #[arg(long, default_value = "0:2*pi", allow_hyphen_values = true)]
    pub v: RangeArg,
    #[arg(long)]
    pub phi: Option<String>,
    /// CSV output; the JSON echo goes to the same path with extension .json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// NUxNV; defaults to the range steps, or 10x10.
    #[arg(long)]
    pub grid: Option<GridSize>,
    /// Classification tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long)]
    pub grid: Option<GridSize>,
    /// Tolerance of the oracle comparisons.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = meridian_core::invariants::DEFAULT_STEP)]
    pub oracle_step: f64,
    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `json` prints the JSON report instead of the text summary.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct MeshArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long)]
    pub grid: Option<GridSize>,
    /// Comma list from K, H_norm, k, lambda, beta1, beta2.
    #[arg(long, value_delimiter = ',')]
    pub fields: Vec<String>,
    #[arg(long, value_enum, default_value_t = Projection::None)]
    pub projection: Projection,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl GridSize {
    /// Explicit grid, else one derived from both range steps, else 10x10.
    pub fn resolve(grid: Option<GridSize>, u: &RangeArg, v: &RangeArg) -> GridSize {
        if let Some(g) = grid {
            return g;
        }
        let count = |r: &RangeArg, h: f64| (r.interval.width() / h).round() as usize + 1;
        match (u.step, v.step) {
            (Some(hu), Some(hv)) => GridSize { nu: count(u, hu), nv: count(v, hv) },
            _ => GridSize { nu: 10, nv: 10 },
        }
    }
}
