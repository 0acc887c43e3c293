//! `u(t)` from the integral along the branch cut plus residues.
//!
//! `u(t)/u₀ = (1/π)∫₀^∞ g(ρ, t) dρ + Σ residues`, with `g` from
//! [`branch_integrand`]. The integral is split into:
//!
//! * `[0, ρ_a]`, mapped by `ρ = x^{1/α̃}`, which removes the `ρ^{α̃-1}`
//!   endpoint behaviour;
//! * a band of half-width `split_delta·c` around the singular abscissa
//!   `ρ = c` of rational transitions, where `g` has an essential
//!   singularity but stays bounded;
//! * symmetric pairs `g(p + x) + g(p - x)` around zeros on the cut, which
//!   gives their principal value;
//! * decades up to `ρ_max = max(rho_max_factor/t, 10c)`, beyond which the
//!   tail is bounded by `e^{-ρ_max·t}/(ρ_max·t)`.

use std::cell::RefCell;
use std::fmt;

use num_complex::Complex64;

use super::contour::{winding_number, ContourSpec};
use super::integrand::branch_integrand;
use super::zeros::ZeroSet;
use super::{logistic, QuadratureConfig, RelaxProblem, SolverError};
use crate::quadrature::{integrate, integrate_breaks, Integral, Tolerance};
use crate::special::{BranchPoint, PlanePoint};
use crate::transition::{TransitionError, TransitionKind};

/// Conditions under which a solution is computed but falls outside the
/// standard setting of a slowly increasing order with `c > 1` and no
/// zeros of `s^{sA(s)} + λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeFlag {
    /// Rational transition with `c ≤ 1`.
    SlowTransition,
    /// `α₁ > α₂`.
    DecreasingOrder,
    /// Residues at this many zeros off the cut (conjugates included, the
    /// extrapolated tail of the family excluded).
    InteriorResidues(usize),
    /// Half residues at this many zeros on the cut.
    CutZeros(usize),
}

impl fmt::Display for RegimeFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeFlag::SlowTransition => {
                write!(f, "c <= 1: one-sided limits at rho = c not covered")
            }
            RegimeFlag::DecreasingOrder => write!(f, "decreasing order (alpha1 > alpha2)"),
            RegimeFlag::InteriorResidues(n) => write!(f, "residues at {n} zeros off the cut"),
            RegimeFlag::CutZeros(n) => write!(f, "{n} zeros on the cut"),
        }
    }
}

/// Branch-cut solver for one problem. Zero location runs once in
/// [`BranchCutSolver::new`]; [`BranchCutSolver::evaluate`] is then cheap.
#[derive(Debug, Clone)]
pub struct BranchCutSolver {
    problem: RelaxProblem,
    cfg: QuadratureConfig,
    zeros: Option<ZeroSet>,
    winding: Option<i64>,
    flags: Vec<RegimeFlag>,
}

impl BranchCutSolver {
    pub fn new(problem: &RelaxProblem, cfg: QuadratureConfig) -> Result<Self, SolverError> {
        problem.validate()?;
        cfg.validate()?;
        let spec = &problem.spec;
        let mut winding = None;
        let zeros = if spec.is_rational() {
            let set = ZeroSet::find(problem)?;
            winding = Some(set.winding);
            Some(set)
        } else {
            if spec.kind != TransitionKind::Constant {
                check_cut_denominator(problem)?;
                let w = winding_number(problem, &ContourSpec::default())?;
                if w != 0 {
                    return Err(SolverError::UnhandledResidues {
                        winding: w,
                        found: 0,
                    });
                }
                winding = Some(w);
            }
            None
        };

        let mut flags = Vec::new();
        if spec.is_rational() && spec.c <= 1.0 {
            flags.push(RegimeFlag::SlowTransition);
        }
        if spec.kind != TransitionKind::Constant && spec.alpha1 > spec.alpha2 {
            flags.push(RegimeFlag::DecreasingOrder);
        }
        if let Some(z) = &zeros {
            if z.count() > 0 {
                flags.push(RegimeFlag::InteriorResidues(z.count()));
            }
            if !z.on_cut.is_empty() {
                flags.push(RegimeFlag::CutZeros(z.on_cut.len()));
            }
        }
        Ok(Self {
            problem: *problem,
            cfg,
            zeros,
            winding,
            flags,
        })
    }

    pub fn problem(&self) -> &RelaxProblem {
        &self.problem
    }

    pub fn flags(&self) -> &[RegimeFlag] {
        &self.flags
    }

    pub fn zeros(&self) -> Option<&ZeroSet> {
        self.zeros.as_ref()
    }

    /// Winding number found while checking for zeros (indented around
    /// `-c` for rational transitions), when one was computed.
    pub fn winding(&self) -> Option<i64> {
        self.winding
    }

    /// `(u(t), error estimate)`.
    pub fn evaluate(&self, t: f64) -> Result<(f64, f64), SolverError> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(SolverError::InvalidProblem(format!(
                "t must be positive, got {t}"
            )));
        }
        let problem = &self.problem;
        let spec = &problem.spec;
        let cfg = &self.cfg;
        let tol = Tolerance::new(cfg.abs_tol, cfg.rel_tol);

        let singular = spec.singular_abscissa();
        let cut_zeros: Vec<f64> = self
            .zeros
            .iter()
            .flat_map(|z| z.on_cut.iter().map(|c| c.rho))
            .collect();
        let near_cut: Vec<f64> = self
            .zeros
            .iter()
            .flat_map(|z| z.near_cut.iter().copied())
            .collect();
        let mut special: Vec<f64> = singular
            .into_iter()
            .chain(cut_zeros.iter().copied())
            .collect();
        special.extend(&near_cut);
        special.sort_by(f64::total_cmp);

        let scale = match spec.kind {
            TransitionKind::Constant => 0.0,
            _ => spec.c.powf(1.0 / spec.beta),
        };
        let top = special.last().copied().unwrap_or(0.0);
        let rho_max = (cfg.rho_max_factor / t).max(10.0 * scale).max(2.0 * top);
        let rho_a = special
            .first()
            .map_or(1.0, |&p| (0.5 * p).min(1.0))
            .min(0.5 * rho_max);

        let failure = RefCell::new(None);
        let g = |rho: f64| -> f64 {
            match branch_integrand(problem, rho, t) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            }
        };

        let mut pieces: Vec<Integral> = Vec::new();

        // [0, ρ_a] with ρ = x^{1/α̃}.
        let alpha = spec.final_order();
        let x_a = rho_a.powf(alpha);
        let mut xs: Vec<f64> = (0..=cfg.endpoint_exponent_nodes)
            .map(|k| x_a * 0.5f64.powi(k as i32))
            .collect();
        xs.push(0.0);
        xs.reverse();
        pieces.push(integrate_breaks(
            |x: f64| {
                let rho = x.powf(1.0 / alpha);
                if rho <= f64::MIN_POSITIVE {
                    return 0.0;
                }
                g(rho) * rho / (alpha * x)
            },
            &xs,
            tol,
        ));

        // Symmetric bands around zeros on the cut.
        let mut bands = Vec::new();
        for &p in &cut_zeros {
            let mut h = 0.5 * (p - rho_a).min(rho_max - p);
            for &q in &special {
                if q != p {
                    h = h.min(0.5 * (q - p).abs());
                }
            }
            bands.push((p - h, p + h));
            pieces.push(integrate(|x: f64| g(p + x) + g(p - x), 0.0, h, tol));
        }

        // Everything else.
        let mut points = vec![rho_a, rho_max];
        if let Some(a) = singular {
            let delta = cfg.split_delta * a;
            points.extend([a - delta, a, a + delta]);
        }
        points.extend(&near_cut);
        for &(lo, hi) in &bands {
            points.extend([lo, hi]);
        }
        let mut decade = 10f64.powf(rho_a.log10().ceil());
        while decade < rho_max {
            points.push(decade);
            decade *= 10.0;
        }
        points.retain(|&x| x >= rho_a && x <= rho_max);
        points.sort_by(f64::total_cmp);
        points.dedup();
        for w in points.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            if bands.iter().any(|&(lo, hi)| mid > lo && mid < hi) || w[1] <= w[0] {
                continue;
            }
            pieces.push(integrate(g, w[0], w[1], tol));
        }

        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let integral: f64 = pieces.iter().map(|p| p.value).sum();
        let quad_error: f64 = pieces.iter().map(|p| p.error).sum();
        if !integral.is_finite() {
            return Err(SolverError::NonConvergence(format!(
                "branch-cut integral at t = {t}"
            )));
        }
        let tail = (-rho_max * t).exp() / (rho_max * t);

        let (mut residues, mut residue_error) = (0.0, 0.0);
        if let Some(z) = &self.zeros {
            let (r, e) = z.residue_sum(t);
            residues = r + z.cut_residue_sum(problem, t)?;
            residue_error = e;
        }
        let u = problem.u0 * (integral / std::f64::consts::PI + residues);
        let err = problem.u0.abs() * (quad_error / std::f64::consts::PI + tail + residue_error);
        Ok((u, err))
    }
}

/// Makes sure `1 + λs^{-sA(s)}` and `s^β + c` stay away from zero along the
/// cut, which is what allows the integral to run without a split.
fn check_cut_denominator(problem: &RelaxProblem) -> Result<(), SolverError> {
    let ln_lambda = problem.lambda.ln();
    for i in 0..=240 {
        let rho = 10f64.powf(-6.0 + 0.05 * f64::from(i));
        let point = BranchPoint::lower(rho)?;
        let q = problem
            .exponent(PlanePoint::Cut(point))
            .map_err(|e| match e {
                SolverError::Transition(TransitionError::Pole(_)) => SolverError::Domain { rho },
                e => e,
            })?;
        // |1 + λe^{-Q}| = |1/logistic(ln λ - Q)|.
        let inverse = logistic(ln_lambda - q);
        if inverse.norm() > 1e8 {
            return Err(SolverError::ZeroOnContour(Complex64::new(-rho, 0.0)));
        }
    }
    Ok(())
}

/// `(u(t), error estimate)` from the branch-cut representation.
///
/// ```
/// use scarpi::solver::{co_reference, solve_branch_cut, QuadratureConfig, RelaxProblem};
/// use scarpi::transition::TransitionSpec;
///
/// let p = RelaxProblem::new(TransitionSpec::constant(0.6), 1.0, 1.0).unwrap();
/// let (u, _) = solve_branch_cut(&p, 1.0, QuadratureConfig::default()).unwrap();
/// assert!((u - co_reference(0.6, 1.0, 1.0, 1.0).unwrap()).abs() < 1e-7);
/// ```
pub fn solve_branch_cut(
    problem: &RelaxProblem,
    t: f64,
    cfg: QuadratureConfig,
) -> Result<(f64, f64), SolverError> {
    BranchCutSolver::new(problem, cfg)?.evaluate(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transition::TransitionSpec;

    #[test]
    fn constant_order_matches_mittag_leffler() {
        for (alpha, lambda) in [(0.3, 0.5), (0.6, 1.0), (0.9, 3.0)] {
            let p = RelaxProblem::new(TransitionSpec::constant(alpha), lambda, 1.0).unwrap();
            let solver = BranchCutSolver::new(&p, QuadratureConfig::default()).unwrap();
            for t in [0.05, 1.0, 10.0] {
                let (u, _) = solver.evaluate(t).unwrap();
                let e = super::super::co_reference(alpha, lambda, 1.0, t).unwrap();
                assert!((u - e).abs() < 1e-7, "alpha {alpha}, t {t}: {u} vs {e}");
            }
        }
    }

    #[test]
    fn exponential_matches_reference_values() {
        let p = RelaxProblem::new(TransitionSpec::exponential(0.6, 0.8, 2.0), 1.0, 1.0).unwrap();
        let solver = BranchCutSolver::new(&p, QuadratureConfig::default()).unwrap();
        for (t, want) in [
            (0.1, 0.781_992_297_569_393_7),
            (1.0, 0.421_201_300_326_937_7),
            (5.0, 0.085_302_812_157_827_77),
        ] {
            let (u, _) = solver.evaluate(t).unwrap();
            assert!(((u - want) / want).abs() < 1e-7, "t {t}: {u} vs {want}");
        }
        assert!(solver.flags().contains(&RegimeFlag::CutZeros(1)));
    }

    #[test]
    fn rejects_bad_times() {
        let p = RelaxProblem::new(TransitionSpec::constant(0.5), 1.0, 1.0).unwrap();
        assert!(solve_branch_cut(&p, 0.0, QuadratureConfig::default()).is_err());
    }
}
