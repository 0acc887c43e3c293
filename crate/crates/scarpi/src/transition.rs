//! Transition functions `α(t)`: the time-dependent order of the Scarpi
//! derivative, together with the closed form of their Laplace transform.
//!
//! Three families are supported:
//!
//! * `Constant`: `α(t) = α₁`;
//! * `Exponential`: `α(t) = α₂ + (α₁ - α₂)e^{-ct}`;
//! * `MittagLeffler`: `α(t) = α₂ + (α₁ - α₂)E_β(-ct^β)`.
//!
//! The solver only ever needs the product `s·A(s)`, which stays bounded
//! at `s = 0` and is evaluated here in the cancelled form
//! `α₂ + (α₁ - α₂)·x/(x + c)` with `x = s` or `x = s^β`.

use num_complex::Complex64;
use thiserror::Error;

use crate::special::{mittag_leffler, MLParams, PlanePoint, SpecialError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransitionError {
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("A(s) has a pole at s = {0}")]
    Pole(Complex64),
    #[error("A(s) is not defined at s = 0 (only s·A(s) is)")]
    Origin,
    #[error(transparent)]
    Special(#[from] SpecialError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransitionKind {
    Constant,
    Exponential,
    MittagLeffler,
}

/// A variable order `α(t)` from one of the supported families.
///
/// The constructors do not validate; call [`TransitionSpec::validate`] to
/// check admissibility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionSpec {
    pub kind: TransitionKind,
    /// Order at `t = 0`.
    pub alpha1: f64,
    /// Order as `t → ∞`. Equal to `alpha1` for the constant family.
    pub alpha2: f64,
    /// Rate of the transition. Unused by the constant family.
    pub c: f64,
    /// Order of the Mittag-Leffler law. Only used by that family.
    pub beta: f64,
}

impl TransitionSpec {
    pub fn constant(alpha: f64) -> Self {
        Self {
            kind: TransitionKind::Constant,
            alpha1: alpha,
            alpha2: alpha,
            c: 0.0,
            beta: 1.0,
        }
    }

    pub fn exponential(alpha1: f64, alpha2: f64, c: f64) -> Self {
        Self {
            kind: TransitionKind::Exponential,
            alpha1,
            alpha2,
            c,
            beta: 1.0,
        }
    }

    pub fn mittag_leffler(alpha1: f64, alpha2: f64, c: f64, beta: f64) -> Self {
        Self {
            kind: TransitionKind::MittagLeffler,
            alpha1,
            alpha2,
            c,
            beta,
        }
    }

    /// `ᾱ = lim_{t→0⁺} α(t)`.
    pub fn initial_order(&self) -> f64 {
        self.alpha1
    }

    /// `α̃ = lim_{t→∞} α(t)`.
    pub fn final_order(&self) -> f64 {
        match self.kind {
            TransitionKind::Constant => self.alpha1,
            _ => self.alpha2,
        }
    }

    /// True when the transition reduces to a rational function of `s`, i.e.
    /// the exponential family or the Mittag-Leffler family with `β = 1`.
    pub fn is_rational(&self) -> bool {
        match self.kind {
            TransitionKind::Constant => false,
            TransitionKind::Exponential => true,
            TransitionKind::MittagLeffler => self.beta == 1.0,
        }
    }

    /// The point `ρ = a` of the negative axis where `s·A(s)` has a pole on
    /// the cut, if any. Only rational transitions have one (at `a = c`).
    pub fn singular_abscissa(&self) -> Option<f64> {
        self.is_rational().then_some(self.c)
    }

    /// `α(t)`.
    ///
    /// ```
    /// use scarpi::transition::TransitionSpec;
    ///
    /// let spec = TransitionSpec::exponential(0.6, 0.8, 2.0);
    /// assert_eq!(spec.alpha_at(0.0).unwrap(), 0.6);
    /// assert!((spec.alpha_at(1.0).unwrap() - 0.772_932_943_352_677_8).abs() < 1e-15);
    /// ```
    pub fn alpha_at(&self, t: f64) -> Result<f64, TransitionError> {
        if t.is_nan() || t < 0.0 {
            return Err(TransitionError::NegativeTime(t));
        }
        let d = self.alpha1 - self.alpha2;
        Ok(match self.kind {
            TransitionKind::Constant => self.alpha1,
            TransitionKind::Exponential => self.alpha2 + d * (-self.c * t).exp(),
            TransitionKind::MittagLeffler => {
                let e = mittag_leffler(MLParams::new(self.beta, -self.c * t.powf(self.beta)))?;
                self.alpha2 + d * e
            }
        })
    }

    /// `A(s) = L[α](s)` in closed form.
    pub fn laplace_a(&self, s: Complex64) -> Result<Complex64, TransitionError> {
        if s == Complex64::new(0.0, 0.0) {
            return Err(TransitionError::Origin);
        }
        Ok(self.s_times_a(s)? / s)
    }

    /// `x(s)` in `s·A(s) = α₂ + (α₁ - α₂)·x/(x + c)`.
    fn transition_variable(&self, p: &PlanePoint) -> Result<Complex64, TransitionError> {
        if p.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        Ok(match self.kind {
            TransitionKind::MittagLeffler if self.beta != 1.0 => {
                p.pow(Complex64::new(self.beta, 0.0))?
            }
            _ => p.value(),
        })
    }

    /// `s·A(s)`, finite at `s = 0` where it equals the final order.
    ///
    /// Accepts a principal-branch complex number or a [`BranchPoint`]
    /// (see [`crate::special`]) on either bank of the cut.
    ///
    /// [`BranchPoint`]: crate::special::BranchPoint
    pub fn s_times_a(&self, p: impl Into<PlanePoint>) -> Result<Complex64, TransitionError> {
        let p = p.into();
        if self.kind == TransitionKind::Constant {
            return Ok(Complex64::new(self.alpha1, 0.0));
        }
        let x = self.transition_variable(&p)?;
        let denom = x + self.c;
        if denom.norm() <= 4.0 * f64::EPSILON * self.c {
            return Err(TransitionError::Pole(p.value()));
        }
        Ok(self.alpha2 + (self.alpha1 - self.alpha2) * x / denom)
    }

    /// `d(s·A(s))/ds` on the principal branch (or along the cut for a
    /// [`crate::special::BranchPoint`], where `s` moves along the axis).
    pub fn s_times_a_derivative(
        &self,
        p: impl Into<PlanePoint>,
    ) -> Result<Complex64, TransitionError> {
        let p = p.into();
        if self.kind == TransitionKind::Constant {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let x = self.transition_variable(&p)?;
        let denom = x + self.c;
        if denom.norm() <= 4.0 * f64::EPSILON * self.c {
            return Err(TransitionError::Pole(p.value()));
        }
        let dx_ds = if self.is_rational() {
            Complex64::new(1.0, 0.0)
        } else {
            if p.is_zero() {
                return Err(TransitionError::Origin);
            }
            self.beta * x / p.value()
        };
        Ok((self.alpha1 - self.alpha2) * self.c / (denom * denom) * dx_ds)
    }

    /// Checks the admissibility conditions and the two Tauberian limits.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let in_unit = |a: f64| a > 0.0 && a < 1.0;
        report.push(
            "alpha1 in (0,1)",
            in_unit(self.alpha1),
            format!("alpha1 = {}", self.alpha1),
        );
        if self.kind != TransitionKind::Constant {
            report.push(
                "alpha2 in (0,1)",
                in_unit(self.alpha2),
                format!("alpha2 = {}", self.alpha2),
            );
            report.push(
                "c > 0",
                self.c > 0.0 && self.c.is_finite(),
                format!("c = {}", self.c),
            );
        }
        if self.kind == TransitionKind::MittagLeffler {
            report.push(
                "beta in (0,1]",
                self.beta > 0.0 && self.beta <= 1.0,
                format!("beta = {}", self.beta),
            );
        }
        if !report.passed() {
            return report;
        }

        let limit_check = |s: f64, target: f64| match self.s_times_a(s) {
            Ok(v) => (
                (v - target).norm() <= 1e-4,
                format!("s·A(s) = {} at s = {s:e}", v.re),
            ),
            Err(e) => (false, e.to_string()),
        };
        let (ok, detail) = limit_check(1e6, self.initial_order());
        report.push("s·A(s) -> initial order as s -> inf", ok, detail);
        let (ok, detail) = limit_check(1e-6, self.final_order());
        report.push("s·A(s) -> final order as s -> 0", ok, detail);

        let mut range = (true, "alpha(t) in (0,1) on [1e-6, 1e6]".to_string());
        for i in 0..=120 {
            let t = 10f64.powf(-6.0 + 0.1 * f64::from(i));
            match self.alpha_at(t) {
                Ok(a) if in_unit(a) => {}
                Ok(a) => {
                    range = (false, format!("alpha({t:e}) = {a}"));
                    break;
                }
                Err(e) => {
                    range = (false, format!("alpha({t:e}): {e}"));
                    break;
                }
            }
        }
        report.push("alpha(t) in (0,1)", range.0, range.1);
        report
    }
}

/// Outcome of a single admissibility check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(Check {
            name,
            passed,
            detail,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}
