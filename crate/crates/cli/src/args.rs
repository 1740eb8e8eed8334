use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(name = "pmotion", version, about = "Deformed free motion on Poisson homogeneous spaces")]
pub struct Cli {
    /// Seed for every random choice (initial data, check samples).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output location: a directory for `simulate`, a file for `check` and `plot`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Integrate one trajectory and write it with a report.
    Simulate(SimulateArgs),
    /// Run an invariant suite and report residuals.
    Check(CheckArgs),
    /// Render a trajectory file as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Minkowski,
    Plane,
    Sphere,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Minkowski => "minkowski",
            ModelKind::Plane => "plane",
            ModelKind::Sphere => "sphere",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Rk4,
    Adaptive,
    /// Exact and RK4 on the same grid, with a comparison.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TEnd {
    Auto,
    Value(f64),
}

pub fn parse_t_end(s: &str) -> Result<TEnd, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(TEnd::Auto);
    }
    let v: f64 = s.trim().parse().map_err(|_| format!("expected a number or `auto`, got `{s}`"))?;
    if !v.is_finite() || v < 0.0 {
        return Err("t-end must be finite and non-negative".into());
    }
    Ok(TEnd::Value(v))
}

/// Parses `"a,b"` into a pair of reals.
pub fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let parts = parse_list(s)?;
    match parts.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(format!("expected two comma-separated numbers, got `{s}`")),
    }
}

pub fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts = parse_list(s)?;
    match parts.as_slice() {
        [a, b, c] => Ok([*a, *b, *c]),
        _ => Err(format!("expected three comma-separated numbers, got `{s}`")),
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| {
            let v: f64 = p.trim().parse().map_err(|_| format!("`{}` is not a number", p.trim()))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("`{}` is not finite", p.trim()))
            }
        })
        .collect()
}

fn parse_finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    pub epsilon: f64,
    /// Initial position: `re,im` (plane) or `x+,x-` (minkowski). Drawn from the seed if absent.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub x0: Option<(f64, f64)>,
    /// Initial momentum: `re,im` (plane) or `eta+,eta-` (minkowski). Drawn from the seed if absent.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub eta0: Option<(f64, f64)>,
    /// Minkowski mass used when `--eta0` is absent.
    #[arg(long, value_parser = parse_finite)]
    pub mass: Option<f64>,
    /// Sphere momentum `re,im`. Drawn from the seed if absent.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub w: Option<(f64, f64)>,
    /// Sphere momentum component along the stabilizer.
    #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
    pub s: Option<f64>,
    /// Sphere starting point `exp(k1 J1 + k2 J2 + k3 J3)`, given as `k1,k2,k3`.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    pub g0: Option<[f64; 3]>,
    #[arg(long, value_parser = parse_t_end, default_value = "auto")]
    pub t_end: TEnd,
    /// Step size. Defaults to t_end/2000.
    #[arg(long, value_parser = parse_finite)]
    pub dt: Option<f64>,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Factorization,
    Jacobi,
    Casimir,
    Groupoid,
    CircleGeometry,
    Identities,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Number of random samples. Each suite has its own default.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Pass threshold on the largest residual. Each suite has its own default.
    #[arg(long, value_parser = parse_finite)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    /// Trajectory file written by `simulate` (CSV or JSON).
    pub input: PathBuf,
}
