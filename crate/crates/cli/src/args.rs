use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "tandem-sdt",
    version,
    about = "Detection analysis of a human observer aided by a binary alerting system"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal criteria, tandem rates and d'_eff for one human + aid setup.
    Analyze(AnalyzeArgs),
    /// Maximal d'_eff over a grid of human and aid sensitivities.
    Surface(SurfaceArgs),
    /// d'_eff as the human's criterion shift is scaled away from optimal.
    Trust(TrustArgs),
    /// Least-squares fit of alpha in sqrt(d_h² + d_a² − alpha d_h d_a).
    FitAlpha(FitAlphaArgs),
    /// ROC operating points of a single detector.
    Roc(RocArgs),
    /// Monte Carlo run checked against the closed-form rates.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PayoffArgs {
    /// Prior probability of a signal.
    #[arg(long, default_value_t = 0.5)]
    pub p_signal: f64,
    /// Outcome values j_tp,j_fp,j_tn,j_fn (costs negative). Wins over --payoff-ratio.
    #[arg(long, value_parser = parse_payoffs, allow_hyphen_values = true)]
    pub payoffs: Option<[f64; 4]>,
    /// Payoff ratio U = (j_fp − j_tn)/(j_fn − j_tp).
    #[arg(long)]
    pub payoff_ratio: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the data to PATH and a run manifest next to it.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub d_h: f64,
    #[arg(long)]
    pub d_a: f64,
    /// Aid cutoff; defaults to the cutoff that maximises d'_eff.
    #[arg(long, allow_hyphen_values = true)]
    pub c_a: Option<f64>,
    #[command(flatten)]
    pub payoff: PayoffArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SurfaceArgs {
    /// Human sensitivities: comma list or start:stop:step.
    #[arg(long, value_parser = parse_grid, default_value = "0.25:3:0.25")]
    pub d_h_grid: Grid,
    /// Aid sensitivities: comma list or start:stop:step.
    #[arg(long, value_parser = parse_grid, default_value = "0.25:3:0.25")]
    pub d_a_grid: Grid,
    /// alpha used for the approx_d_eff column.
    #[arg(long, default_value_t = 0.3)]
    pub alpha: f64,
    #[command(flatten)]
    pub payoff: PayoffArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TrustArgs {
    #[arg(long)]
    pub d_h: f64,
    #[arg(long)]
    pub d_a: f64,
    /// Explicit ratio list; overrides the log-spaced grid.
    #[arg(long, value_parser = parse_grid)]
    pub ratios: Option<Grid>,
    #[arg(long, default_value_t = 0.01)]
    pub ratio_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub ratio_max: f64,
    #[arg(long, default_value_t = 81)]
    pub ratio_count: usize,
    #[command(flatten)]
    pub payoff: PayoffArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitAlphaArgs {
    #[arg(long, value_parser = parse_grid, default_value = "0.25:3:0.25")]
    pub d_h_grid: Grid,
    #[arg(long, value_parser = parse_grid, default_value = "0.25:3:0.25")]
    pub d_a_grid: Grid,
    #[command(flatten)]
    pub payoff: PayoffArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RocArgs {
    #[arg(long)]
    pub d_h: f64,
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    pub c_min: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub c_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub c_step: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub d_h: f64,
    #[arg(long)]
    pub d_a: f64,
    /// Aid cutoff; defaults to the cutoff that maximises d'_eff.
    #[arg(long, allow_hyphen_values = true)]
    pub c_a: Option<f64>,
    /// Human criterion shift relative to optimal (1 = calibrated trust).
    #[arg(long, default_value_t = 1.0)]
    pub trust_ratio: f64,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_trials: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub payoff: PayoffArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// A list of grid values as given on the command line.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Grid(pub Vec<f64>);

fn parse_number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// `a,b,c` or `start:stop:step` (inclusive of `stop` up to rounding).
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(parse_number).collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err("range grid must be start:stop:step".into());
        };
        return range_grid(start, stop, step).map(Grid);
    }
    let values: Vec<f64> = s.split(',').map(parse_number).collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err("grid is empty".into());
    }
    Ok(Grid(values))
}

/// `start, start + step, ...` up to `stop` inclusive (with a rounding allowance).
pub fn range_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(step > 0.0) || !(stop >= start) || !step.is_finite() {
        return Err("range grid needs step > 0 and stop >= start".into());
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}

fn parse_payoffs(s: &str) -> Result<[f64; 4], String> {
    let values: Vec<f64> = s.split(',').map(parse_number).collect::<Result<_, _>>()?;
    values
        .try_into()
        .map_err(|_| "expected four values j_tp,j_fp,j_tn,j_fn".to_string())
}
