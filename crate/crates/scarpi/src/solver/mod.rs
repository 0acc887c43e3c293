//! The relaxation problem `D^{α(t)} u = -λu`, `u(0) = u₀`, and its
//! solution.
//!
//! In the Laplace domain the problem has the closed-form solution
//!
//! `ũ(s) = u₀ / (s·(1 + λ·s^{-sA(s)}))`.
//!
//! Three ways of getting `u(t)` back are provided:
//!
//! * [`solve_branch_cut`] collapses the Bromwich contour onto the negative
//!   real axis and integrates the jump across the cut, adding residues at
//!   the zeros of `s^{sA(s)} + λ` when there are any;
//! * [`solve_talbot`] inverts `ũ` numerically and serves as the oracle;
//! * [`co_reference`] is the Mittag-Leffler solution for constant order.

use num_complex::Complex64;
use thiserror::Error;

use crate::laplace::{talbot_invert, LaplaceError, TalbotConfig};
use crate::special::{mittag_leffler, MLParams, PlanePoint, SpecialError};
use crate::transition::{TransitionError, TransitionKind, TransitionSpec};

mod branch_cut;
mod contour;
mod integrand;
pub mod zeros;

pub use branch_cut::{solve_branch_cut, BranchCutSolver, RegimeFlag};
pub use contour::{
    co_zeros_in_cut_plane, indented_winding_number, winding_number, ContourSpec, Exclusion,
};
pub use integrand::{
    branch_integrand, branch_term, combined_branch_terms, concise_integrand, general_integrand,
    large_rho_model, small_rho_model,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Transition(#[from] TransitionError),
    #[error(transparent)]
    Laplace(#[from] LaplaceError),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error("the integrand is singular at rho = {rho}")]
    Domain { rho: f64 },
    #[error("s^(sA(s)) + lambda is singular on the contour near s = {0}")]
    SingularityOnContour(Complex64),
    #[error("s^(sA(s)) + lambda vanishes on the contour near s = {0}")]
    ZeroOnContour(Complex64),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("unhandled interior residues: winding number {winding}, {found} zeros accounted for")]
    UnhandledResidues { winding: i64, found: usize },
}

/// `D^{α(t)} u = -λu`, `u(0) = u₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxProblem {
    pub spec: TransitionSpec,
    pub lambda: f64,
    pub u0: f64,
}

impl RelaxProblem {
    /// Builds and validates a problem.
    pub fn new(spec: TransitionSpec, lambda: f64, u0: f64) -> Result<Self, SolverError> {
        let p = Self { spec, lambda, u0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(SolverError::InvalidProblem(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if !self.u0.is_finite() {
            return Err(SolverError::InvalidProblem(format!(
                "u0 = {} is not finite",
                self.u0
            )));
        }
        if let Some(check) = self.spec.validate().first_failure() {
            return Err(SolverError::InvalidProblem(format!(
                "{}: {}",
                check.name, check.detail
            )));
        }
        Ok(())
    }

    /// `Q(s) = s·A(s)·Ln s`, so that `s^{sA(s)} = e^{Q}`.
    pub(crate) fn exponent(&self, p: PlanePoint) -> Result<Complex64, SolverError> {
        let sa = self.spec.s_times_a(p)?;
        Ok(sa * p.ln()?)
    }
}

/// Quadrature settings for [`solve_branch_cut`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// The integral over `ρ` is truncated at `max(rho_max_factor/t, 10·c)`.
    pub rho_max_factor: f64,
    /// Half-width, relative to `c`, of the band around the singular
    /// abscissa that is integrated as a separate piece.
    pub split_delta: f64,
    /// Number of geometric break points in the regularised interval next
    /// to `ρ = 0`.
    pub endpoint_exponent_nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            rho_max_factor: 50.0,
            split_delta: 1e-3,
            endpoint_exponent_nodes: 32,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !(positive(self.rel_tol) && self.rel_tol >= 1e-13) {
            return Err(SolverError::InvalidConfig(format!(
                "rel_tol must be at least 1e-13, got {}",
                self.rel_tol
            )));
        }
        for (name, v) in [
            ("abs_tol", self.abs_tol),
            ("rho_max_factor", self.rho_max_factor),
            ("split_delta", self.split_delta),
        ] {
            if !positive(v) {
                return Err(SolverError::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.split_delta >= 0.5 {
            return Err(SolverError::InvalidConfig(format!(
                "split_delta must be below 0.5, got {}",
                self.split_delta
            )));
        }
        if self.endpoint_exponent_nodes == 0 {
            return Err(SolverError::InvalidConfig(
                "endpoint_exponent_nodes must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// `1/(1 + e^x)` without overflow.
pub(crate) fn logistic(x: Complex64) -> Complex64 {
    if x.re > 0.0 {
        let e = (-x).exp();
        e / (e + 1.0)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// `ũ(s) = u₀/(s·(1 + λ·s^{-sA(s)}))`.
///
/// `s` may be a principal-branch number or a point on either bank of the
/// cut. The factor `1/(1 + λ·s^{-sA})` is evaluated as a logistic
/// function of `ln λ - Q(s)`, which stays finite when `s^{±sA}` does not.
///
/// ```
/// use scarpi::solver::{u_hat, RelaxProblem};
/// use scarpi::transition::TransitionSpec;
///
/// let p = RelaxProblem::new(TransitionSpec::constant(0.6), 1.0, 1.0).unwrap();
/// assert!((u_hat(&p, 1.0).unwrap().re - 0.5).abs() < 1e-15);
/// ```
pub fn u_hat(problem: &RelaxProblem, s: impl Into<PlanePoint>) -> Result<Complex64, SolverError> {
    let p = s.into();
    if p.is_zero() {
        return Err(SolverError::Domain { rho: 0.0 });
    }
    let q = problem.exponent(p)?;
    Ok(problem.u0 * logistic(problem.lambda.ln() - q) / p.value())
}

/// `u(t)` by Talbot inversion of [`u_hat`].
pub fn solve_talbot(
    problem: &RelaxProblem,
    t: f64,
    cfg: &TalbotConfig,
) -> Result<f64, SolverError> {
    let f = |s: Complex64| u_hat(problem, s).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    Ok(talbot_invert(f, t, cfg)?)
}

/// `u(t)` by Talbot inversion, with the difference from a run on half the
/// nodes as error estimate.
pub fn solve_talbot_with_error(
    problem: &RelaxProblem,
    t: f64,
    cfg: &TalbotConfig,
) -> Result<(f64, f64), SolverError> {
    let u = solve_talbot(problem, t, cfg)?;
    let coarse = TalbotConfig {
        nodes: (cfg.nodes / 2).max(8),
        ..*cfg
    };
    let v = solve_talbot(problem, t, &coarse)?;
    Ok((u, (u - v).abs()))
}

/// Constant-order solution `u₀·E_α(-λt^α)`.
///
/// ```
/// use scarpi::solver::co_reference;
///
/// assert_eq!(co_reference(0.6, 1.0, 1.0, 0.0).unwrap(), 1.0);
/// let u = co_reference(0.5, 2.0, 3.0, 1.0).unwrap();
/// assert!((u - 0.766_187_028_931_517_2).abs() < 1e-13);
/// ```
pub fn co_reference(alpha: f64, lambda: f64, u0: f64, t: f64) -> Result<f64, SolverError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(SolverError::InvalidProblem(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(SolverError::InvalidProblem(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(SolverError::InvalidProblem(format!(
            "t must be non-negative, got {t}"
        )));
    }
    Ok(u0 * mittag_leffler(MLParams::new(alpha, -lambda * t.powf(alpha)))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    BranchCut,
    Talbot,
    CoReference,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::BranchCut => "branch_cut",
            Method::Talbot => "talbot",
            Method::CoReference => "co_reference",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Settings for [`solve_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveConfig {
    pub quadrature: QuadratureConfig,
    pub talbot: TalbotConfig,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionRow {
    pub t: f64,
    pub u: f64,
    pub method: Method,
    pub err_est: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowFailure {
    pub t: f64,
    pub error: SolverError,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolutionTable {
    pub rows: Vec<SolutionRow>,
    pub failures: Vec<RowFailure>,
}

/// Solves at every time in `times` with one method.
///
/// Rows are independent: a failure at one time is recorded in
/// `failures` and does not stop the others.
pub fn solve_grid(
    problem: &RelaxProblem,
    times: &[f64],
    method: Method,
    cfg: &SolveConfig,
) -> Result<SolutionTable, SolverError> {
    problem.validate()?;
    if times.is_empty() {
        return Err(SolverError::InvalidProblem("the time grid is empty".into()));
    }
    if times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(SolverError::InvalidProblem("times must be positive".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SolverError::InvalidProblem(
            "times must be strictly increasing".into(),
        ));
    }
    let mut table = SolutionTable::default();
    let mut record = |t: f64, r: Result<(f64, f64), SolverError>| match r {
        Ok((u, err_est)) => table.rows.push(SolutionRow {
            t,
            u,
            method,
            err_est,
        }),
        Err(error) => table.failures.push(RowFailure { t, error }),
    };
    match method {
        Method::BranchCut => {
            let solver = BranchCutSolver::new(problem, cfg.quadrature)?;
            for &t in times {
                record(t, solver.evaluate(t));
            }
        }
        Method::Talbot => {
            for &t in times {
                record(t, solve_talbot_with_error(problem, t, &cfg.talbot));
            }
        }
        Method::CoReference => {
            if problem.spec.kind != TransitionKind::Constant {
                return Err(SolverError::InvalidProblem(
                    "co_reference needs a constant-order transition".into(),
                ));
            }
            for &t in times {
                let alpha = problem.spec.alpha1;
                record(
                    t,
                    co_reference(alpha, problem.lambda, problem.u0, t)
                        .map(|u| (u, 4.0 * f64::EPSILON * u.abs())),
                );
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(spec: TransitionSpec, lambda: f64) -> RelaxProblem {
        RelaxProblem::new(spec, lambda, 1.0).unwrap()
    }

    #[test]
    fn problem_validation() {
        assert!(RelaxProblem::new(TransitionSpec::constant(0.5), 0.0, 1.0).is_err());
        assert!(RelaxProblem::new(TransitionSpec::constant(0.5), 1.0, f64::NAN).is_err());
        assert!(RelaxProblem::new(TransitionSpec::exponential(0.6, 1.2, 2.0), 1.0, 1.0).is_err());
        assert!(RelaxProblem::new(TransitionSpec::exponential(0.6, 0.8, 2.0), 1.0, -3.0).is_ok());
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::default().validate().is_ok());
        let cfg = QuadratureConfig {
            rel_tol: 1e-14,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn tauberian_limits_of_u_hat() {
        let p = problem(TransitionSpec::exponential(0.6, 0.8, 2.0), 1.0);
        let small = 1e-8 * u_hat(&p, 1e-8).unwrap();
        assert!(small.norm() < 1e-5);
        let large = 1e8 * u_hat(&p, 1e8).unwrap();
        assert!((large.re - 1.0).abs() < 1e-4);
    }

    #[test]
    fn talbot_matches_mittag_leffler() {
        let p = problem(TransitionSpec::constant(0.6), 1.0);
        let u = solve_talbot(&p, 1.0, &TalbotConfig::default()).unwrap();
        let e = co_reference(0.6, 1.0, 1.0, 1.0).unwrap();
        assert!((u - e).abs() < 1e-8, "{u} vs {e}");
    }

    #[test]
    fn near_classical_limit() {
        let p = problem(TransitionSpec::constant(0.95), 1.0);
        let u = solve_talbot(&p, 1.0, &TalbotConfig::default()).unwrap();
        assert!((u - (-1f64).exp()).abs() < 2e-2);
    }

    #[test]
    fn grid_shape_and_failures() {
        let p = problem(TransitionSpec::exponential(0.6, 0.8, 2.0), 1.0);
        let cfg = SolveConfig::default();
        let table = solve_grid(&p, &[0.1, 1.0, 5.0], Method::Talbot, &cfg).unwrap();
        assert_eq!(table.rows.len(), 3);
        assert!(table.rows.iter().all(|r| r.err_est >= 0.0));
        assert!(solve_grid(&p, &[1.0, 0.5], Method::Talbot, &cfg).is_err());
        assert!(solve_grid(&p, &[], Method::Talbot, &cfg).is_err());
        assert!(solve_grid(&p, &[1.0], Method::CoReference, &cfg).is_err());
    }
}
