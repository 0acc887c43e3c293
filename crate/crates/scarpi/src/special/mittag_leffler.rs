use std::f64::consts::PI;

use super::{gamma_reciprocal, ln_gamma, sin_pi, SpecialError};
use crate::quadrature::{integrate_breaks, Tolerance};

/// The Taylor series is used for `z < 0` while `|z|^{1/β}` stays below this.
/// The largest series term grows like `exp(|z|^{1/β})`, so this bounds the
/// cancellation to about four digits.
pub const SERIES_SCALE: f64 = 8.0;
/// Smallest `|z|` at which the asymptotic expansion is tried.
pub const ASYMPTOTIC_RADIUS: f64 = 20.0;
/// Number of terms of the asymptotic expansion.
pub const ASYMPTOTIC_TERMS: usize = 15;
/// The expansion is accepted when its first omitted term is this small
/// relative to the sum.
const ASYMPTOTIC_ACCEPT: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLParams {
    pub beta: f64,
    pub z: f64,
}

impl MLParams {
    pub fn new(beta: f64, z: f64) -> Self {
        Self { beta, z }
    }

    pub fn validate(&self) -> Result<(), SpecialError> {
        if !(self.beta > 0.0 && self.beta <= 2.0) {
            return Err(SpecialError::InvalidOrder(self.beta));
        }
        if !self.z.is_finite() {
            return Err(SpecialError::NonFiniteArgument(self.z));
        }
        Ok(())
    }
}

/// `E_β(z) = Σ z^k / Γ(βk + 1)` for `β ∈ (0, 2]` and real `z`.
///
/// ```
/// use scarpi::special::{mittag_leffler, MLParams};
///
/// let e = mittag_leffler(MLParams::new(1.0, -1.0)).unwrap();
/// assert!((e - (-1f64).exp()).abs() < 1e-15);
/// ```
pub fn mittag_leffler(p: MLParams) -> Result<f64, SpecialError> {
    p.validate()?;
    let MLParams { beta, z } = p;
    let value = if z == 0.0 {
        1.0
    } else if beta == 1.0 {
        z.exp()
    } else if beta == 2.0 {
        if z < 0.0 {
            (-z).sqrt().cos()
        } else {
            z.sqrt().cosh()
        }
    } else if z > 0.0 || (-z).powf(1.0 / beta) <= SERIES_SCALE {
        ml_series(beta, z)
    } else {
        let asymptotic = if -z >= ASYMPTOTIC_RADIUS {
            let (v, tail) = ml_asymptotic(beta, z);
            (tail <= ASYMPTOTIC_ACCEPT * v.abs()).then_some(v)
        } else {
            None
        };
        match asymptotic {
            Some(v) => v,
            None => ml_integral(beta, z),
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(SpecialError::Overflow { beta, z })
    }
}

/// Taylor series with compensated summation.
pub fn ml_series(beta: f64, z: f64) -> f64 {
    if z == 0.0 {
        return 1.0;
    }
    let x = z.abs();
    let ln_x = x.ln();
    let peak = x.powf(1.0 / beta);
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    let mut power = 1.0_f64;
    for k in 0..20_000_u32 {
        let kf = f64::from(k);
        let arg = beta * kf + 1.0;
        let magnitude = if power < 1e290 && arg < 170.0 {
            power * gamma_reciprocal(arg)
        } else {
            (kf * ln_x - ln_gamma(arg)).exp()
        };
        let term = if z < 0.0 && k % 2 == 1 {
            -magnitude
        } else {
            magnitude
        };
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if kf * beta > peak && magnitude <= 1e-18 * (sum + comp).abs() {
            break;
        }
        if magnitude == 0.0 && kf * beta > peak {
            break;
        }
        power *= x;
    }
    sum + comp
}

/// Asymptotic expansion for `z < 0`:
/// `-Σ_{k=1}^{K} z^{-k}/Γ(1 - βk)`, plus the pair of exponentially damped
/// oscillating terms when `β > 1`.
///
/// Returns the value and the magnitude of the first omitted term.
pub fn ml_asymptotic(beta: f64, z: f64) -> (f64, f64) {
    let term = |k: usize| -> f64 { -z.powi(-(k as i32)) * gamma_reciprocal(1.0 - beta * k as f64) };
    let mut sum: f64 = (1..=ASYMPTOTIC_TERMS).map(term).sum();
    let tail = term(ASYMPTOTIC_TERMS + 1)
        .abs()
        .max(term(ASYMPTOTIC_TERMS + 2).abs());
    if beta > 1.0 {
        sum += pole_pair(beta, -z);
    }
    (sum, tail)
}

/// Contribution of the poles `s = x^{1/β} e^{±iπ/β}` of `s^{β-1}/(s^β + x)`,
/// present when `β ∈ (1, 2)`.
fn pole_pair(beta: f64, x: f64) -> f64 {
    let r = x.powf(1.0 / beta);
    let theta = PI / beta;
    2.0 / beta * (r * theta.cos()).exp() * (r * theta.sin()).cos()
}

/// Real integral representation for `z < 0`, `β ∈ (0, 2)`, `β ≠ 1`:
///
/// `E_β(-x) = x·sin(πβ)/(πβ) ∫₀^∞ e^{-u^{1/β}} / ((u + x cos πβ)² + (x sin πβ)²) du`
///
/// plus the pole pair for `β > 1`. This is the Hankel-contour inversion of
/// `s^{β-1}/(s^β + x)` collapsed onto the cut, with `u = r^β`.
pub fn ml_integral(beta: f64, z: f64) -> f64 {
    let x = -z;
    let sb = sin_pi(beta);
    let cb = (PI * beta).cos();
    let inv = 1.0 / beta;
    let u_max = 45f64.powf(beta);
    let f = |u: f64| {
        let d1 = u + x * cb;
        let d2 = x * sb;
        (-u.powf(inv)).exp() / (d1 * d1 + d2 * d2)
    };
    let mut points = vec![0.0, u_max];
    if u_max > 1.0 {
        points.push(1.0);
    }
    let peak = -x * cb;
    let width = (x * sb).abs();
    for p in [peak - 3.0 * width, peak, peak + 3.0 * width] {
        if p > 0.0 && p < u_max {
            points.push(p);
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let tol = Tolerance {
        abs: 0.0,
        rel: 1e-13,
        max_intervals: 4000,
    };
    let integral = integrate_breaks(f, &points, tol);
    let mut value = x * sb / (PI * beta) * integral.value;
    if beta > 1.0 {
        value += pole_pair(beta, x);
    }
    value
}
