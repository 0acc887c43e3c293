use std::f64::consts::PI;

/// `sin(πx)`, exact at integers and accurate for large `|x|`.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // Reduce to [-1, 1) using the period 2.
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r.abs() == 0.5 {
        return r.signum();
    }
    (PI * r).sin()
}

/// `ln|Γ(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `1/Γ(x)`, an entire function: exactly zero at `0, -1, -2, …`.
///
/// ```
/// use scarpi::special::gamma_reciprocal;
///
/// assert_eq!(gamma_reciprocal(-3.0), 0.0);
/// assert!((gamma_reciprocal(0.5) - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
/// ```
pub fn gamma_reciprocal(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x >= 0.5 {
        if x < 171.0 {
            1.0 / libm::tgamma(x)
        } else {
            (-libm::lgamma(x)).exp()
        }
    } else {
        // Reflection: 1/Γ(x) = sin(πx)·Γ(1-x)/π.
        let y = 1.0 - x;
        let s = sin_pi(x);
        if y < 171.0 {
            s * libm::tgamma(y) / PI
        } else {
            s.signum() * (libm::lgamma(y) + s.abs().ln() - PI.ln()).exp()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(gamma_reciprocal(1.0), 1.0);
        assert_eq!(gamma_reciprocal(0.0), 0.0);
        assert_eq!(gamma_reciprocal(-7.0), 0.0);
        assert!((gamma_reciprocal(0.5) - 0.564_189_583_547_756_3).abs() < 1e-15);
        assert!((gamma_reciprocal(5.0) - 1.0 / 24.0).abs() < 1e-16);
    }

    #[test]
    fn negative_half_integers() {
        // Γ(-1/2) = -2√π, Γ(-3/2) = 4√π/3.
        let sp = PI.sqrt();
        assert!((gamma_reciprocal(-0.5) + 1.0 / (2.0 * sp)).abs() < 1e-15);
        assert!((gamma_reciprocal(-1.5) - 3.0 / (4.0 * sp)).abs() < 1e-15);
    }

    #[test]
    fn large_arguments() {
        let r = gamma_reciprocal(172.0);
        assert!(r > 0.0 && r < 1e-300);
        assert_eq!(gamma_reciprocal(200.0), 0.0);
        assert!(gamma_reciprocal(-180.5).abs() > 1e300);
    }

    #[test]
    fn sin_pi_exact_points() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert_eq!(sin_pi(-2.0), 0.0);
        assert_eq!(sin_pi(2.5), 1.0);
        assert_eq!(sin_pi(-0.5), -1.0);
        assert!((sin_pi(0.25) - 0.5f64.sqrt()).abs() < 2e-16);
        assert!((sin_pi(1e6 + 0.25) - 0.5f64.sqrt()).abs() < 1e-10);
    }
}
