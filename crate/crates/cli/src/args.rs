use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use cmur_core::cmur::Direction;
use cmur_core::qcore::StateFamily;

use crate::output::Format;

/// Conditional majorization uncertainty bounds, figure data and steering witnesses.
///
/// Angles are in radians. Every flag can also be given in a JSON file passed with
/// `--config` (same names, snake_case); flags win over file values.
#[derive(Debug, Parser)]
#[command(name = "cmur", version, arg_required_else_help = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// State-dependent bound s(x) for a measurement X on A (JSON by default).
    Bound(MeasureCmd),
    /// Optimal partner measurement for every k (JSON by default).
    Strategy(MeasureCmd),
    /// Lorenz samples of the memory-assisted bound vs the single-particle bound (CSV).
    Figure1(Figure1Cmd),
    /// Entropic bounds over a θ grid (CSV).
    Figure2(Figure2Cmd),
    /// Steering criteria over the (ξ, p) plane for ρ_ξ (CSV).
    Figure3(Figure3Cmd),
    /// Steering witness for one state (JSON by default).
    Steer(SteerCmd),
    /// Lattice join of equal-weight vectors (JSON by default).
    Join(JoinCmd),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bound(_) => "bound",
            Command::Strategy(_) => "strategy",
            Command::Figure1(_) => "figure1",
            Command::Figure2(_) => "figure2",
            Command::Figure3(_) => "figure3",
            Command::Steer(_) => "steer",
            Command::Join(_) => "join",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Bound(c) | Command::Strategy(c) => &c.common,
            Command::Figure1(c) => &c.common,
            Command::Figure2(c) => &c.common,
            Command::Figure3(c) => &c.common,
            Command::Steer(c) => &c.common,
            Command::Join(c) => &c.common,
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON config file; flags override its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file [default: standard output].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format [default: csv for figures, json otherwise].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn parse_family(s: &str) -> Result<StateFamily, String> {
    s.parse().map_err(|e: cmur_core::Error| e.to_string())
}

fn parse_direction(s: &str) -> Result<Direction, String> {
    s.parse().map_err(|e: cmur_core::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// State family: psi_xi, rho_xi, random_pure or random_mixed.
    #[arg(long, value_parser = parse_family)]
    pub family: Option<StateFamily>,
    /// Entanglement angle ξ ∈ [0, π/4] [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<f64>,
    /// Mixing weight p ∈ [0, 1] for rho_xi [default: 1].
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    /// Seed for the random families [default: --seed].
    #[arg(long)]
    pub state_seed: Option<u64>,
    /// JSON density matrix {dim_a, dim_b, entries: [[[re, im], ...], ...]} instead of a family.
    #[arg(long, value_name = "PATH", conflicts_with = "family")]
    pub state: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeasArgs {
    /// Polar angle θ ∈ [0, π] of X = σ(θ, φ).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Azimuth φ of X [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// JSON measurement {dim, basis: [[[re, im], ...], ...]} instead of angles.
    #[arg(long, value_name = "PATH", conflicts_with = "theta")]
    pub basis: Option<PathBuf>,
    /// reduce_a_by_b (A measures, B assists) or reduce_b_by_a [default: reduce_a_by_b].
    #[arg(long, value_parser = parse_direction)]
    pub direction: Option<Direction>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Multi-start count for the measurement search [default: 32].
    #[arg(long)]
    pub starts: Option<usize>,
    /// Iteration cap per local search [default: 2000].
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Convergence tolerance of the local search [default: 1e-10].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Master seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ThetaGrid {
    /// Points on the θ grid, endpoints included.
    #[arg(long)]
    pub theta_steps: Option<usize>,
    /// Smallest θ [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub theta_min: Option<f64>,
    /// Largest θ [default: π/2].
    #[arg(long, allow_hyphen_values = true)]
    pub theta_max: Option<f64>,
    /// Comma-separated ξ values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub xis: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct MeasureCmd {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub meas: MeasArgs,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct Figure1Cmd {
    #[command(flatten)]
    pub common: Common,
    /// θ grid [default: 7 points on [0, π/2]] and ξ list [default: 0, π/16, π/8, π/4].
    #[command(flatten)]
    pub grid: ThetaGrid,
    /// Use the sampled single-particle bound with this many states instead of the closed form.
    #[arg(long)]
    pub single_samples: Option<usize>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct Figure2Cmd {
    #[command(flatten)]
    pub common: Common,
    /// θ grid [default: 50 points on [0, π/2]] and ξ list [default: 0, π/8, π/4].
    #[command(flatten)]
    pub grid: ThetaGrid,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct Figure3Cmd {
    #[command(flatten)]
    pub common: Common,
    /// Points along ξ ∈ [0, π/4] [default: 64].
    #[arg(long)]
    pub xi_steps: Option<usize>,
    /// Points along p ∈ [0, 1] [default: 64].
    #[arg(long)]
    pub p_steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SteerCmd {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub state: StateArgs,
    /// Also report the hemisphere average over this many Fibonacci points.
    #[arg(long)]
    pub hemisphere_points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct JoinCmd {
    #[command(flatten)]
    pub common: Common,
    /// Vectors as comma-separated JSON arrays, e.g. "[0.6,0.2,0.2],[0.5,0.4,0.1]".
    #[arg(long, allow_hyphen_values = true)]
    pub vecs: Option<String>,
}
