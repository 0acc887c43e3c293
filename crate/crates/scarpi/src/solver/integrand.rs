//! The jump of `e^{st}ũ(s)` across the negative real axis.
//!
//! On the bank `s = ρe^{±iπ}` the inversion integrand (with `u₀ = 1`) is
//!
//! `term±(ρ, t) = e^{-ρt} / (-ρ·(1 + λ·s^{-sA(s)}))`,
//!
//! and for real parameters `term₊` is the complex conjugate of `term₋`.
//! The branch-cut representation integrates `g = Im(term₋)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{logistic, RelaxProblem, SolverError};
use crate::special::{sin_pi, BranchPoint, PlanePoint, Sheet};
use crate::transition::TransitionError;

fn branch_point(rho: f64, sheet: Sheet) -> Result<BranchPoint, SolverError> {
    Ok(BranchPoint::on(rho, sheet)?)
}

fn domain_error(rho: f64) -> impl Fn(SolverError) -> SolverError {
    move |e| match e {
        SolverError::Transition(TransitionError::Pole(_)) => SolverError::Domain { rho },
        e => e,
    }
}

/// `term±(ρ, t)` on the bank given by `point`. Accepts `t = 0`, where it
/// is the branch value of `ũ(s)/u₀·(-1)`, handy for comparing shapes.
pub fn branch_term(
    problem: &RelaxProblem,
    point: BranchPoint,
    t: f64,
) -> Result<Complex64, SolverError> {
    let rho = point.rho();
    let q = problem
        .exponent(PlanePoint::Cut(point))
        .map_err(domain_error(rho))?;
    Ok((-rho * t).exp() / -rho * logistic(problem.lambda.ln() - q))
}

/// `(term₋ - term₊)/(2i)`, real up to rounding.
pub fn combined_branch_terms(
    problem: &RelaxProblem,
    rho: f64,
    t: f64,
) -> Result<Complex64, SolverError> {
    let lower = branch_term(problem, branch_point(rho, Sheet::Lower)?, t)?;
    let upper = branch_term(problem, branch_point(rho, Sheet::Upper)?, t)?;
    Ok((lower - upper) / Complex64::new(0.0, 2.0))
}

/// `g(ρ, t) = Im(term₋ - term₊)/2`, valid for every transition family.
pub fn general_integrand(problem: &RelaxProblem, rho: f64, t: f64) -> Result<f64, SolverError> {
    let lower = branch_term(problem, branch_point(rho, Sheet::Lower)?, t)?;
    let upper = branch_term(problem, branch_point(rho, Sheet::Upper)?, t)?;
    Ok(0.5 * (lower - upper).im)
}

/// The same integrand for rational transitions, written through
/// `w = (α₁ρ - α₂c)/(c - ρ)` (so that `s·A(s) = -w` on the cut):
///
/// `g = -λρ^w·sin(πw)·e^{-ρt} / (ρ·(1 + 2λρ^w·cos(πw) + λ²ρ^{2w}))`.
///
/// `λρ^w` is handled in log space, so the far sides of `ρ = c` (where `w`
/// runs off to `±∞`) evaluate to their limits instead of overflowing.
pub fn concise_integrand(problem: &RelaxProblem, rho: f64, t: f64) -> Result<f64, SolverError> {
    let spec = &problem.spec;
    if !spec.is_rational() {
        return Err(SolverError::InvalidProblem(
            "the concise integrand needs a rational transition".into(),
        ));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(SolverError::Domain { rho });
    }
    if rho == spec.c {
        return Err(SolverError::Domain { rho });
    }
    let w = (spec.alpha1 * rho - spec.alpha2 * spec.c) / (spec.c - rho);
    let l = w * rho.ln() + problem.lambda.ln();
    let (sin, cos) = (sin_pi(w), (PI * w).cos());
    let decay = (-rho * t).exp() / rho;
    Ok(if l > 0.0 {
        let e = (-l).exp();
        -e * sin * decay / (e * e + 2.0 * e * cos + 1.0)
    } else {
        let a = l.exp();
        -a * sin * decay / (1.0 + 2.0 * a * cos + a * a)
    })
}

/// Integrand used by the solver: the concise form for rational
/// transitions, the general form otherwise.
pub fn branch_integrand(problem: &RelaxProblem, rho: f64, t: f64) -> Result<f64, SolverError> {
    if problem.spec.is_rational() {
        concise_integrand(problem, rho, t)
    } else {
        general_integrand(problem, rho, t)
    }
}

/// Large-`ρ` model of `term₊`: `-e^{-ρt}/(ρ + λe^{-iπᾱ}ρ^{1-ᾱ})`.
pub fn large_rho_model(problem: &RelaxProblem, rho: f64, t: f64) -> Complex64 {
    power_model(problem.spec.initial_order(), problem.lambda, rho, t)
}

/// Small-`ρ` model of `term₊`: `-e^{-ρt}/(ρ + λe^{-iπα̃}ρ^{1-α̃})`.
pub fn small_rho_model(problem: &RelaxProblem, rho: f64, t: f64) -> Complex64 {
    power_model(problem.spec.final_order(), problem.lambda, rho, t)
}

fn power_model(alpha: f64, lambda: f64, rho: f64, t: f64) -> Complex64 {
    let rotation = Complex64::from_polar(1.0, -PI * alpha);
    -(-rho * t).exp() / (rho + lambda * rotation * rho.powf(1.0 - alpha))
}
