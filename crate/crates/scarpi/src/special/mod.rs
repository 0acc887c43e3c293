//! Branch-aware complex powers, the reciprocal gamma function and the
//! one-parameter Mittag-Leffler function.
//!
//! Points on the negative real axis are ambiguous for a principal-branch
//! logarithm. The two banks of the cut are therefore represented explicitly
//! by [`BranchPoint`], which stores the modulus together with the side of
//! the cut it was approached from.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

mod gamma;
mod mittag_leffler;

pub use gamma::{gamma_reciprocal, ln_gamma, sin_pi};
pub use mittag_leffler::{
    mittag_leffler, ml_asymptotic, ml_integral, ml_series, MLParams, ASYMPTOTIC_RADIUS,
    ASYMPTOTIC_TERMS, SERIES_SCALE,
};

/// Largest real part accepted by [`exp_checked`] before reporting saturation.
pub const MAX_LOG: f64 = 709.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("complex power of zero is undefined")]
    ZeroBase,
    #[error("branch point modulus must be positive and finite, got {0}")]
    InvalidModulus(f64),
    #[error("branch sign must be +1 or -1, got {0}")]
    InvalidSign(i32),
    #[error("power saturates: modulus is e^{log_modulus:.3}, beyond the representable range")]
    Saturated { log_modulus: f64 },
    #[error("Mittag-Leffler order must lie in (0, 2], got {0}")]
    InvalidOrder(f64),
    #[error("Mittag-Leffler argument must be finite, got {0}")]
    NonFiniteArgument(f64),
    #[error("E_{beta}({z}) overflows")]
    Overflow { beta: f64, z: f64 },
}

/// Side of the negative real axis a [`BranchPoint`] lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sheet {
    /// Approached from the upper half plane: `ρ·e^{iπ}`.
    Upper,
    /// Approached from the lower half plane: `ρ·e^{-iπ}`.
    Lower,
}

impl Sheet {
    pub fn sign(self) -> i32 {
        match self {
            Sheet::Upper => 1,
            Sheet::Lower => -1,
        }
    }

    pub fn opposite(self) -> Sheet {
        match self {
            Sheet::Upper => Sheet::Lower,
            Sheet::Lower => Sheet::Upper,
        }
    }
}

/// A point `ρ·e^{±iπ}` on one bank of the branch cut.
///
/// As a complex number it equals `-ρ`, but its logarithm is `ln ρ ± iπ`
/// according to the stored sheet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoint {
    rho: f64,
    sheet: Sheet,
}

impl BranchPoint {
    /// Builds a point from a modulus and a sign of `+1` or `-1`.
    pub fn new(rho: f64, sign: i32) -> Result<Self, SpecialError> {
        let sheet = match sign {
            1 => Sheet::Upper,
            -1 => Sheet::Lower,
            other => return Err(SpecialError::InvalidSign(other)),
        };
        Self::on(rho, sheet)
    }

    pub fn on(rho: f64, sheet: Sheet) -> Result<Self, SpecialError> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(SpecialError::InvalidModulus(rho));
        }
        Ok(Self { rho, sheet })
    }

    pub fn upper(rho: f64) -> Result<Self, SpecialError> {
        Self::on(rho, Sheet::Upper)
    }

    pub fn lower(rho: f64) -> Result<Self, SpecialError> {
        Self::on(rho, Sheet::Lower)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn sheet(&self) -> Sheet {
        self.sheet
    }

    pub fn sign(&self) -> i32 {
        self.sheet.sign()
    }

    /// The point as a plain complex number, `-ρ`.
    pub fn value(&self) -> Complex64 {
        Complex64::new(-self.rho, 0.0)
    }

    /// `ln ρ + i·sign·π`.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.rho.ln(), f64::from(self.sign()) * PI)
    }

    /// The same modulus on the other bank.
    pub fn conj(&self) -> Self {
        Self {
            rho: self.rho,
            sheet: self.sheet.opposite(),
        }
    }
}

/// A point of the cut plane: either off the negative axis (principal
/// branch) or on one explicit bank of the cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanePoint {
    Principal(Complex64),
    Cut(BranchPoint),
}

impl PlanePoint {
    pub fn value(&self) -> Complex64 {
        match self {
            PlanePoint::Principal(s) => *s,
            PlanePoint::Cut(p) => p.value(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PlanePoint::Principal(s) if *s == Complex64::new(0.0, 0.0))
    }

    /// Logarithm on the branch the point belongs to.
    pub fn ln(&self) -> Result<Complex64, SpecialError> {
        match self {
            PlanePoint::Principal(s) => principal_ln(*s),
            PlanePoint::Cut(p) => Ok(p.ln()),
        }
    }

    /// `self^w` on the point's branch.
    pub fn pow(&self, w: Complex64) -> Result<Complex64, SpecialError> {
        match self {
            PlanePoint::Principal(s) => principal_power(*s, w),
            PlanePoint::Cut(p) => branch_power(*p, w),
        }
    }
}

impl From<Complex64> for PlanePoint {
    fn from(s: Complex64) -> Self {
        PlanePoint::Principal(s)
    }
}

impl From<f64> for PlanePoint {
    fn from(s: f64) -> Self {
        PlanePoint::Principal(Complex64::new(s, 0.0))
    }
}

impl From<BranchPoint> for PlanePoint {
    fn from(p: BranchPoint) -> Self {
        PlanePoint::Cut(p)
    }
}

/// Principal logarithm with the argument in `(-π, π]`.
///
/// A negative zero imaginary part is read as `+0`, so the negative real
/// axis always maps to argument `+π`.
pub fn principal_ln(s: Complex64) -> Result<Complex64, SpecialError> {
    if s.re == 0.0 && s.im == 0.0 {
        return Err(SpecialError::ZeroBase);
    }
    let im = if s.im == 0.0 { 0.0 } else { s.im };
    Ok(Complex64::new(s.norm().ln(), im.atan2(s.re)))
}

/// `exp(z)`, refusing moduli that would overflow.
pub fn exp_checked(z: Complex64) -> Result<Complex64, SpecialError> {
    if z.re > MAX_LOG {
        Err(SpecialError::Saturated { log_modulus: z.re })
    } else {
        Ok(z.exp())
    }
}

/// `s^w = exp(w·Ln s)` with the principal logarithm.
///
/// ```
/// use num_complex::Complex64;
/// use scarpi::special::principal_power;
///
/// let r = principal_power(Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0)).unwrap();
/// assert!((r.re - 2f64.sqrt()).abs() < 1e-15);
/// ```
pub fn principal_power(s: Complex64, w: Complex64) -> Result<Complex64, SpecialError> {
    exp_checked(w * principal_ln(s)?)
}

/// `(ρ·e^{±iπ})^w` evaluated in log space on the bank stored in `p`.
pub fn branch_power(p: BranchPoint, w: Complex64) -> Result<Complex64, SpecialError> {
    exp_checked(w * p.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn principal_power_examples() {
        assert_eq!(
            principal_power(c(1.0, 0.0), c(0.3, -2.0)).unwrap(),
            c(1.0, 0.0)
        );
        let r = principal_power(c(0.0, 1.0), c(2.0, 0.0)).unwrap();
        assert!((r - c(-1.0, 0.0)).norm() < 1e-15);
        let r = principal_power(c(2.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((r.re - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(
            principal_power(c(0.0, 0.0), c(1.0, 0.0)),
            Err(SpecialError::ZeroBase)
        );
    }

    #[test]
    fn negative_axis_uses_plus_pi() {
        let a = principal_ln(c(-2.0, 0.0)).unwrap();
        let b = principal_ln(c(-2.0, -0.0)).unwrap();
        assert_eq!(a, b);
        assert!((a.im - PI).abs() < 1e-16);
    }

    #[test]
    fn branch_power_examples() {
        let r = branch_power(BranchPoint::new(1.0, 1).unwrap(), c(1.0, 0.0)).unwrap();
        assert!((r - c(-1.0, 0.0)).norm() < 1e-15);
        let r = branch_power(BranchPoint::new(4.0, -1).unwrap(), c(0.5, 0.0)).unwrap();
        assert!((r - c(0.0, -2.0)).norm() < 1e-15);
        let w = c(0.37, -1.2);
        let up = branch_power(BranchPoint::upper(2.0).unwrap(), w).unwrap();
        let down = branch_power(BranchPoint::lower(2.0).unwrap(), w.conj()).unwrap();
        assert!((up - down.conj()).norm() < 1e-15);
    }

    #[test]
    fn branch_power_saturates() {
        let p = BranchPoint::upper(10.0).unwrap();
        match branch_power(p, c(400.0, 0.0)) {
            Err(SpecialError::Saturated { log_modulus }) => assert!(log_modulus > 900.0),
            other => panic!("expected saturation, got {other:?}"),
        }
        // Underflow is not an error.
        assert_eq!(branch_power(p, c(-400.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn branch_point_rejects_bad_input() {
        assert!(BranchPoint::new(0.0, 1).is_err());
        assert!(BranchPoint::new(-1.0, 1).is_err());
        assert!(BranchPoint::new(f64::NAN, 1).is_err());
        assert_eq!(BranchPoint::new(1.0, 0), Err(SpecialError::InvalidSign(0)));
        let p = BranchPoint::new(3.0, -1).unwrap();
        assert_eq!(p.value(), c(-3.0, 0.0));
        assert_eq!(p.conj().sheet(), Sheet::Upper);
    }
}
