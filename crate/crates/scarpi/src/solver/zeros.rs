//! Zeros of `G(s) = s^{sA(s)} + λ` for rational transitions and their
//! residue contributions.
//!
//! With `s·A(s) = α₁ + K/(s + c)`, `K = (α₂ - α₁)c`, the exponent of
//! `s^{sA(s)}` blows up at `s = -c` and `G` has infinitely many zeros
//! accumulating there. Writing `ζ = s + c`, a zero satisfies
//!
//! `Q(s) = s·A(s)·Ln s = ln λ + iπ(2n + 1)`
//!
//! for some integer `n`, and for large `|n|` the solution is close to
//! `ζ ≈ Kℓ/(T - α₁ℓ + K/c)` with `ℓ = ln c + iπ`. Each such zero
//! contributes the residue `e^{st}/(s·Q'(s))` to `u(t)/u₀`. The terms
//! decay like `1/n²`, so the family sum is accelerated by Richardson
//! extrapolation over partial sums.
//!
//! Zeros away from `-c` are located from a log-polar grid of starting
//! points. Zeros exactly on the cut occur where `w = -s·A(s)` is an odd
//! integer `m` and `λρ^m = 1`; they are handled by a principal value and
//! a half residue.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::contour::{indented_winding_number, ContourSpec, Exclusion};
use super::{RelaxProblem, SolverError};
use crate::special::{principal_ln, BranchPoint, PlanePoint};

/// Partial sums of the accumulating family used for extrapolation.
pub const FAMILY_CHECKPOINTS: [usize; 5] = [32, 64, 128, 256, 512];
/// Family members with index up to this stay outside the excluded disk
/// in the completeness check.
const FAMILY_OUTSIDE: usize = 32;
/// Largest `|m|` examined for zeros on the cut.
const MAX_CUT_ORDER: i64 = 1000;

/// A zero of `G` in the open upper half plane. Its conjugate is a zero too.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorZero {
    pub s: Complex64,
    /// `Q'(s)`, so that the residue is `e^{st}/(s·Q'(s))`.
    pub dq: Complex64,
    /// Branch index `n` in `Q(s) = ln λ + iπ(2n + 1)`.
    pub index: i64,
}

impl InteriorZero {
    fn residue(&self, t: f64) -> Complex64 {
        (self.s * t).exp() / (self.s * self.dq)
    }
}

/// A zero of `G` on the negative real axis, seen from both banks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutZero {
    pub rho: f64,
    /// The odd integer `m = -s·A(s)` at the zero.
    pub order: i64,
}

/// All zeros relevant to the branch-cut representation of a problem.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZeroSet {
    /// Accumulating family, ordered by `|n|`.
    pub family: Vec<InteriorZero>,
    /// Other zeros in the upper half plane.
    pub isolated: Vec<InteriorZero>,
    pub on_cut: Vec<CutZero>,
    /// Cut points where `λρ^m` is close to 1 but not equal: zeros sit just
    /// off the axis and the integrand has a sharp peak there.
    pub near_cut: Vec<f64>,
    /// Radius of the disk around `-c` left out of the completeness check.
    pub exclusion_radius: f64,
    /// Winding number of the indented contour.
    pub winding: i64,
}

struct Rational {
    alpha1: f64,
    k: f64,
    c: f64,
    ln_lambda: f64,
}

impl Rational {
    fn new(problem: &RelaxProblem) -> Self {
        let spec = &problem.spec;
        Self {
            alpha1: spec.alpha1,
            k: (spec.alpha2 - spec.alpha1) * spec.c,
            c: spec.c,
            ln_lambda: problem.lambda.ln(),
        }
    }

    fn target(&self, n: i64) -> Complex64 {
        Complex64::new(self.ln_lambda, PI * (2 * n + 1) as f64)
    }

    /// `Ln s` for `s = -c + ζ` with `Im ζ > 0`.
    fn ln_s(&self, zeta: Complex64) -> Complex64 {
        let w = -zeta / self.c;
        let modulus = 0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p();
        Complex64::new(self.c.ln() + modulus, PI + w.im.atan2(1.0 + w.re))
    }

    /// Solves `Q = T_n` by Newton's method in `ζ`.
    fn family_member(&self, n: i64) -> Option<InteriorZero> {
        let ell = Complex64::new(self.c.ln(), PI);
        let target = self.target(n);
        let mut zeta = self.k * ell / (target - self.alpha1 * ell + self.k / self.c);
        for _ in 0..100 {
            if zeta.im.is_nan() || zeta.im <= 0.0 {
                return None;
            }
            let ln_s = self.ln_s(zeta);
            let sa = self.alpha1 + self.k / zeta;
            let f = sa * ln_s - target;
            let df = -self.k / (zeta * zeta) * ln_s + sa / (zeta - self.c);
            let mut step = f / df;
            if step.norm() > 0.5 * zeta.norm() {
                step *= 0.5 * zeta.norm() / step.norm();
            }
            zeta -= step;
            if step.norm() <= 1e-15 * zeta.norm() {
                break;
            }
        }
        if zeta.im.is_nan() || zeta.im <= 0.0 {
            return None;
        }
        let ln_s = self.ln_s(zeta);
        let sa = self.alpha1 + self.k / zeta;
        if (sa * ln_s - target).norm() > 1e-10 * target.norm() {
            return None;
        }
        let s = Complex64::new(-self.c, 0.0) + zeta;
        let dq = -self.k / (zeta * zeta) * ln_s + sa / s;
        Some(InteriorZero { s, dq, index: n })
    }
}

fn q_and_dq(problem: &RelaxProblem, s: Complex64) -> Result<(Complex64, Complex64), SolverError> {
    let p = PlanePoint::Principal(s);
    let sa = problem.spec.s_times_a(p)?;
    let dsa = problem.spec.s_times_a_derivative(p)?;
    let ln_s = principal_ln(s)?;
    Ok((sa * ln_s, dsa * ln_s + sa / s))
}

/// Newton's method on `Q(s) = T_n` from a starting point, on the principal
/// branch. Returns the zero moved to the upper half plane.
fn polish(problem: &RelaxProblem, start: Complex64, n: i64) -> Option<InteriorZero> {
    let target = Complex64::new(problem.lambda.ln(), PI * (2 * n + 1) as f64);
    let mut s = start;
    for _ in 0..80 {
        let (q, dq) = q_and_dq(problem, s).ok()?;
        let mut step = (q - target) / dq;
        if !(step.re.is_finite() && step.im.is_finite()) {
            return None;
        }
        if step.norm() > 0.5 * s.norm() {
            step *= 0.5 * s.norm() / step.norm();
        }
        s -= step;
        if step.norm() <= 1e-15 * s.norm() {
            break;
        }
    }
    let (q, dq) = q_and_dq(problem, s).ok()?;
    if (q - target).norm() > 1e-10 * target.norm() || s.im.abs() <= 1e-12 * s.norm() {
        return None;
    }
    let (s, dq, index) = if s.im > 0.0 {
        (s, dq, n)
    } else {
        (s.conj(), dq.conj(), -n - 1)
    };
    Some(InteriorZero { s, dq, index })
}

fn same_point(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * a.norm().max(1e-3)
}

/// Half of the residue pair at a zero on the cut, as a contribution to
/// `u(t)/u₀`: `-Re r₋` with `r₋` the residue in `ρ` of `term₋`.
pub(crate) fn cut_half_residue(
    problem: &RelaxProblem,
    zero: &CutZero,
    t: f64,
) -> Result<f64, SolverError> {
    let point = BranchPoint::lower(zero.rho)?;
    let sa = problem.spec.s_times_a(point)?;
    let dsa = problem.spec.s_times_a_derivative(point)?;
    let rho = zero.rho;
    let d = dsa * point.ln() - sa / rho;
    let r = (-rho * t).exp() / (rho * d);
    Ok(-r.re)
}

impl ZeroSet {
    /// Locates the zeros of a rational-transition problem and checks the
    /// list against the argument principle on an indented contour.
    pub fn find(problem: &RelaxProblem) -> Result<Self, SolverError> {
        let spec = &problem.spec;
        if !spec.is_rational() {
            return Err(SolverError::InvalidProblem(
                "zero enumeration needs a rational transition".into(),
            ));
        }
        let rational = Rational::new(problem);
        let mut set = ZeroSet::default();
        let n_max = *FAMILY_CHECKPOINTS.last().unwrap();

        if rational.k != 0.0 {
            // The family lives at n → -∞ or n → +∞ depending on the signs
            // of K and ln c; pick the direction that lands in Im ζ > 0.
            let direction = [-1i64, 1].into_iter().find(|&d| {
                rational
                    .family_member(if d < 0 { -64 } else { 63 })
                    .is_some()
            });
            if let Some(d) = direction {
                for j in 0..n_max as i64 {
                    let n = if d < 0 { -1 - j } else { j };
                    match rational.family_member(n) {
                        Some(z) => set.family.push(z),
                        None if j >= FAMILY_OUTSIDE as i64 => {
                            return Err(SolverError::NonConvergence(format!(
                                "zero with branch index {n} near s = -c not found"
                            )))
                        }
                        None => {}
                    }
                }
            }
        }

        // Zeros on the cut and close to it.
        for m in (-MAX_CUT_ORDER..=MAX_CUT_ORDER).filter(|m| m % 2 != 0) {
            let rho = spec.c * (m as f64 + spec.alpha2) / (m as f64 + spec.alpha1);
            if !(rho > 0.0 && rho.is_finite()) || rho == spec.c {
                continue;
            }
            let mismatch = (rational.ln_lambda + m as f64 * rho.ln()).abs();
            if mismatch <= 1e-10 {
                set.on_cut.push(CutZero { rho, order: m });
            } else if mismatch <= 1e-2 {
                set.near_cut.push(rho);
            }
        }

        // Isolated zeros from a log-polar grid of starting points.
        let mut seeds = Vec::new();
        for i in 0..=20 {
            let r = 10f64.powf(-3.0 + 0.25 * f64::from(i));
            for j in 0..24 {
                seeds.push(Complex64::from_polar(r, PI * (f64::from(j) + 0.5) / 24.0));
            }
        }
        for &rho in &set.near_cut {
            for h in [1e-2, 1e-4] {
                seeds.push(Complex64::new(-rho, h * rho));
            }
        }
        // Anything closer to -c than the last listed family member belongs
        // to the tail of the family, which the extrapolation accounts for.
        let tail_radius = match set.family.len() {
            n if n >= 2 => {
                0.5 * ((set.family[n - 1].s + spec.c).norm()
                    + (set.family[n - 2].s + spec.c).norm())
            }
            _ => 0.0,
        };
        for seed in seeds {
            let Ok((q, _)) = q_and_dq(problem, seed) else {
                continue;
            };
            let n0 = ((q.im / PI - 1.0) / 2.0).round() as i64;
            for n in [n0 - 1, n0, n0 + 1] {
                let Some(z) = polish(problem, seed, n) else {
                    continue;
                };
                if (z.s + spec.c).norm() < tail_radius {
                    continue;
                }
                let known = set
                    .family
                    .iter()
                    .chain(&set.isolated)
                    .any(|f| same_point(f.s, z.s));
                if !known {
                    set.isolated.push(z);
                }
            }
        }
        set.isolated.sort_by(|a, b| a.s.re.total_cmp(&b.s.re));

        set.verify(problem)?;
        Ok(set)
    }

    /// Compares the number of zeros found inside an indented keyhole with
    /// its winding number.
    fn verify(&mut self, problem: &RelaxProblem) -> Result<(), SolverError> {
        let c = problem.spec.c;
        let radius = if self.family.len() > FAMILY_OUTSIDE {
            let a = (self.family[FAMILY_OUTSIDE - 1].s + c).norm();
            let b = (self.family[FAMILY_OUTSIDE].s + c).norm();
            0.5 * (a + b)
        } else {
            0.05 * c
        };
        self.exclusion_radius = radius;
        let mut exclusions = vec![Exclusion { rho: c, radius }];
        for z in &self.on_cut {
            exclusions.push(Exclusion {
                rho: z.rho,
                radius: (1e-3 * z.rho).min(0.25 * (z.rho - c).abs()),
            });
        }
        let largest = self
            .family
            .iter()
            .chain(&self.isolated)
            .map(|z| z.s.norm())
            .fold(0.0, f64::max);
        let contour = ContourSpec {
            radius: (2.0 * largest).max(100.0).max(10.0 * c),
            ..ContourSpec::default()
        };
        let inside = self
            .family
            .iter()
            .chain(&self.isolated)
            .filter(|z| contour.encloses(z.s) && !exclusions.iter().any(|e| e.contains(z.s)))
            .count();
        let winding = indented_winding_number(problem, &contour, &exclusions)?;
        self.winding = winding;
        if winding != 2 * inside as i64 {
            return Err(SolverError::UnhandledResidues {
                winding,
                found: 2 * inside,
            });
        }
        Ok(())
    }

    /// Number of zeros in the cut plane accounted for, counting conjugates
    /// and the partial family used for extrapolation.
    pub fn count(&self) -> usize {
        2 * (self.family.len() + self.isolated.len())
    }

    /// Sum of the residues at all zeros off the cut, with an error
    /// estimate from the extrapolation.
    pub fn residue_sum(&self, t: f64) -> (f64, f64) {
        let isolated: Complex64 = self.isolated.iter().map(|z| z.residue(t)).sum();
        let (family, err) = self.family_sum(t);
        (2.0 * (isolated.re + family), 2.0 * err)
    }

    /// Real part of the family sum, extrapolated to infinitely many terms.
    fn family_sum(&self, t: f64) -> (f64, f64) {
        if self.family.is_empty() {
            return (0.0, 0.0);
        }
        let mut partial = Vec::new();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut next = 0;
        for &n in FAMILY_CHECKPOINTS.iter() {
            let n = n.min(self.family.len());
            for z in &self.family[next..n] {
                acc += z.residue(t);
            }
            next = n;
            partial.push(acc.re);
        }
        let extrapolate = |values: &[f64]| {
            let mut r = values.to_vec();
            let mut k = 1;
            while r.len() > 1 {
                let f = 2f64.powi(k);
                r = r
                    .windows(2)
                    .map(|w| (f * w[1] - w[0]) / (f - 1.0))
                    .collect();
                k += 1;
            }
            r[0]
        };
        let best = extrapolate(&partial);
        let previous = extrapolate(&partial[..partial.len() - 1]);
        (best, (best - previous).abs())
    }

    /// Sum of the half residues at zeros on the cut.
    pub fn cut_residue_sum(&self, problem: &RelaxProblem, t: f64) -> Result<f64, SolverError> {
        self.on_cut
            .iter()
            .map(|z| cut_half_residue(problem, z, t))
            .sum()
    }
}
