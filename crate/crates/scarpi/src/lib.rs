//! Variable-order fractional calculus with the Scarpi derivative.
//!
//! The derivative of order `α(t)` is defined through its Laplace-domain
//! kernel `Φ(s) = s^{sA(s)-1}`, where `A = L[α]`; the companion integral
//! has kernel `Ψ(s) = s^{-sA(s)}`. The crate evaluates both operators and
//! solves the relaxation equation `D^{α(t)} u = -λu` by a branch-cut
//! integral, with fixed Talbot inversion as an independent check.
//!
//! ```
//! use scarpi::solver::{BranchCutSolver, QuadratureConfig, RelaxProblem};
//! use scarpi::transition::TransitionSpec;
//!
//! let problem = RelaxProblem::new(TransitionSpec::exponential(0.6, 0.8, 2.0), 1.0, 1.0)?;
//! let solver = BranchCutSolver::new(&problem, QuadratureConfig::default())?;
//! let (u, _) = solver.evaluate(1.0)?;
//! assert!((u - 0.421_201_300_326_937_7).abs() < 1e-9);
//! # Ok::<(), scarpi::solver::SolverError>(())
//! ```
//!
//! A longer guide lives in the `book/` directory of the repository.

pub mod laplace;
pub mod quadrature;
pub mod scarpi_ops;
pub mod solver;
pub mod special;
pub mod transition;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/transitions.md")]
    mod transitions {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/zeros.md")]
    mod zeros {}
}
