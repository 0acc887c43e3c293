use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use scarpi::laplace::TalbotConfig;
use scarpi::solver::{QuadratureConfig, RelaxProblem, SolveConfig};
use scarpi::transition::TransitionSpec;

use crate::CliError;

/// Variable-order fractional relaxation with the Scarpi derivative.
#[derive(Debug, Clone, Parser)]
#[command(name = "scarpi", version, about)]
pub struct RunConfig {
    #[command(subcommand)]
    pub subcommand: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Solve D^α(t) u = -λu on a time grid.
    #[command(allow_negative_numbers = true)]
    Solve(SolveArgs),
    /// Tabulate the kernels φ and ψ on a time grid.
    #[command(allow_negative_numbers = true)]
    Kernels(KernelsArgs),
    /// Validate a transition and run the endpoint and zero checks.
    #[command(allow_negative_numbers = true)]
    Check(CheckArgs),
    /// Evaluate the Mittag-Leffler function E_β(z).
    #[command(allow_negative_numbers = true)]
    Ml(MlArgs),
    /// Invert a built-in Laplace transform with the fixed Talbot method.
    #[command(allow_negative_numbers = true)]
    Invert(InvertArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Constant,
    Exponential,
    #[value(name = "mittag-leffler", alias = "ml")]
    MittagLeffler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    #[value(name = "branch_cut")]
    BranchCut,
    Talbot,
    #[value(name = "co_reference")]
    CoReference,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Transform {
    /// 1/(s + a), inverse e^{-at}.
    ShiftedPole,
    /// s^{-a}, inverse t^{a-1}/Γ(a).
    Power,
    /// s^{a-1}/(s^a + λ), inverse E_a(-λt^a).
    Relaxation,
    /// Φ(s) = s^{sA(s)-1} of the given transition.
    Phi,
    /// Ψ(s) = s^{-sA(s)} of the given transition.
    Psi,
    /// ũ(s) of the relaxation problem.
    Solution,
}

#[derive(Debug, Clone, Default, Args)]
pub struct TransitionArgs {
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub alpha1: Option<f64>,
    #[arg(long)]
    pub alpha2: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
}

impl TransitionArgs {
    pub fn is_empty(&self) -> bool {
        self.kind.is_none()
            && self.alpha1.is_none()
            && self.alpha2.is_none()
            && self.c.is_none()
            && self.beta.is_none()
    }

    /// Builds the spec. Missing or inapplicable keys are usage errors;
    /// admissibility is checked separately.
    pub fn spec(&self) -> Result<TransitionSpec, CliError> {
        let kind = self
            .kind
            .ok_or_else(|| CliError::Usage("missing --kind".into()))?;
        let alpha1 = self
            .alpha1
            .ok_or_else(|| CliError::Usage("missing --alpha1".into()))?;
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| CliError::Usage(format!("--kind {} needs --{key}", kind_name(kind))))
        };
        let reject = |v: Option<f64>, key: &str| match v {
            Some(_) => Err(CliError::Usage(format!(
                "--{key} is not used by --kind {}",
                kind_name(kind)
            ))),
            None => Ok(()),
        };
        Ok(match kind {
            Kind::Constant => {
                reject(self.alpha2, "alpha2")?;
                reject(self.c, "c")?;
                reject(self.beta, "beta")?;
                TransitionSpec::constant(alpha1)
            }
            Kind::Exponential => {
                reject(self.beta, "beta")?;
                TransitionSpec::exponential(
                    alpha1,
                    need(self.alpha2, "alpha2")?,
                    need(self.c, "c")?,
                )
            }
            Kind::MittagLeffler => TransitionSpec::mittag_leffler(
                alpha1,
                need(self.alpha2, "alpha2")?,
                need(self.c, "c")?,
                need(self.beta, "beta")?,
            ),
        })
    }
}

pub fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Constant => "constant",
        Kind::Exponential => "exponential",
        Kind::MittagLeffler => "mittag-leffler",
    }
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub u0: f64,
}

impl ProblemArgs {
    pub fn problem(&self, spec: TransitionSpec) -> Result<RelaxProblem, CliError> {
        RelaxProblem::new(spec, self.lambda, self.u0).map_err(CliError::from)
    }
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub t_min: f64,
    #[arg(long)]
    pub t_max: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    pub spacing: Spacing,
}

impl GridArgs {
    /// The time grid, endpoints included exactly.
    pub fn times(&self) -> Result<Vec<f64>, CliError> {
        grid(self.t_min, self.t_max, self.points, self.spacing, "t")
    }
}

pub fn grid(
    min: f64,
    max: f64,
    points: usize,
    spacing: Spacing,
    name: &str,
) -> Result<Vec<f64>, CliError> {
    if points == 0 {
        return Err(CliError::Validation("points must be at least 1".into()));
    }
    if !(min.is_finite() && max.is_finite()) {
        return Err(CliError::Validation(format!(
            "{name}_min and {name}_max must be finite"
        )));
    }
    if spacing == Spacing::Log && min <= 0.0 {
        return Err(CliError::Validation(format!(
            "{name}_min must be positive for log spacing, got {min}"
        )));
    }
    if points == 1 {
        return Ok(vec![min]);
    }
    if max <= min {
        return Err(CliError::Validation(format!(
            "{name}_max must exceed {name}_min when points > 1"
        )));
    }
    let last = (points - 1) as f64;
    let mut values: Vec<f64> = match spacing {
        Spacing::Linear => (0..points)
            .map(|i| min + (max - min) * i as f64 / last)
            .collect(),
        Spacing::Log => {
            let (a, b) = (min.ln(), max.ln());
            (0..points)
                .map(|i| (a + (b - a) * i as f64 / last).exp())
                .collect()
        }
    };
    values[0] = min;
    values[points - 1] = max;
    Ok(values)
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub output: OutputFormat,
    /// Write data to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct TalbotArgs {
    #[arg(long)]
    pub talbot_nodes: Option<usize>,
    #[arg(long)]
    pub talbot_scaling: Option<f64>,
}

impl TalbotArgs {
    pub fn config(&self) -> Result<TalbotConfig, CliError> {
        let mut cfg = TalbotConfig::default();
        if let Some(n) = self.talbot_nodes {
            cfg.nodes = n;
        }
        if let Some(s) = self.talbot_scaling {
            cfg.scaling = s;
        }
        cfg.validate()
            .map_err(|e| CliError::Validation(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct QuadratureArgs {
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rho_max_factor: Option<f64>,
    #[arg(long)]
    pub split_delta: Option<f64>,
    #[arg(long)]
    pub endpoint_nodes: Option<usize>,
}

impl QuadratureArgs {
    pub fn config(&self) -> Result<QuadratureConfig, CliError> {
        let mut cfg = QuadratureConfig::default();
        if let Some(v) = self.rel_tol {
            cfg.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            cfg.abs_tol = v;
        }
        if let Some(v) = self.rho_max_factor {
            cfg.rho_max_factor = v;
        }
        if let Some(v) = self.split_delta {
            cfg.split_delta = v;
        }
        if let Some(v) = self.endpoint_nodes {
            cfg.endpoint_exponent_nodes = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub transition: TransitionArgs,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = MethodChoice::BranchCut)]
    pub method: MethodChoice,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
    #[command(flatten)]
    pub talbot: TalbotArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl SolveArgs {
    pub fn solve_config(&self) -> Result<SolveConfig, CliError> {
        Ok(SolveConfig {
            quadrature: self.quadrature.config()?,
            talbot: self.talbot.config()?,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct KernelsArgs {
    #[command(flatten)]
    pub transition: TransitionArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub talbot: TalbotArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub transition: TransitionArgs,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    pub u0: f64,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MlArgs {
    #[arg(long)]
    pub beta: f64,
    /// A single argument; overrides the grid keys.
    #[arg(long)]
    pub z: Option<f64>,
    #[arg(long)]
    pub z_min: Option<f64>,
    #[arg(long)]
    pub z_max: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct InvertArgs {
    #[arg(long, value_enum)]
    pub transform: Transform,
    /// Parameter of the shifted-pole, power and relaxation transforms.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub u0: Option<f64>,
    #[command(flatten)]
    pub transition: TransitionArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub talbot: TalbotArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_hit_their_endpoints() {
        let g = grid(0.1, 10.0, 5, Spacing::Log, "t").unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[4], 10.0);
        assert!((g[2] - 1.0).abs() < 1e-15);
        let g = grid(0.0, 1.0, 3, Spacing::Linear, "t").unwrap();
        assert_eq!(g, vec![0.0, 0.5, 1.0]);
        assert_eq!(grid(2.0, 1.0, 1, Spacing::Linear, "t").unwrap(), vec![2.0]);
    }

    #[test]
    fn bad_grids() {
        assert!(grid(0.0, 1.0, 3, Spacing::Log, "t").is_err());
        assert!(grid(1.0, 1.0, 3, Spacing::Linear, "t").is_err());
        assert!(grid(0.1, 1.0, 0, Spacing::Linear, "t").is_err());
    }

    #[test]
    fn transition_keys() {
        let args = TransitionArgs {
            kind: Some(Kind::Constant),
            alpha1: Some(0.5),
            c: Some(2.0),
            ..Default::default()
        };
        assert!(matches!(args.spec(), Err(CliError::Usage(m)) if m.contains("--c")));
        let args = TransitionArgs {
            kind: Some(Kind::MittagLeffler),
            alpha1: Some(0.6),
            alpha2: Some(0.8),
            c: Some(2.0),
            ..Default::default()
        };
        assert!(matches!(args.spec(), Err(CliError::Usage(m)) if m.contains("--beta")));
    }
}
