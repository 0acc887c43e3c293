//! Counting zeros of `G(s) = s^{sA(s)} + λ` with the argument principle.
//!
//! The contour is the keyhole used for the branch-cut representation,
//! traversed counterclockwise:
//!
//! * `Γ_v`: the Bromwich segment `Re s = s₀` inside `|s| = R`;
//! * `Γ_{l++}`, `Γ_{l+}`: the arc `|s| = R` from `Γ_v` to the negative axis;
//! * `Γ_{h+}`: the upper bank from `-R` to `-ε`;
//! * `Γ_ε`: the circle `|s| = ε`, clockwise;
//! * `Γ_{h-}`: the lower bank back to `-R`;
//! * `Γ_{l-}`, `Γ_{l--}`: the lower arc back to `Γ_v`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::{RelaxProblem, SolverError};
use crate::special::{BranchPoint, PlanePoint, Sheet};
use crate::transition::TransitionError;

/// Upper bound on the number of contour nodes after refinement.
const MAX_NODES: usize = 1 << 20;
/// `|G|` below this on a node counts as a zero on the contour.
const ZERO_THRESHOLD: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    /// `R`, radius of the outer arcs.
    pub radius: f64,
    /// `ε`, radius of the circle around the origin.
    pub inner_radius: f64,
    /// `s₀`, abscissa of the Bromwich segment.
    pub abscissa: f64,
    /// Initial number of nodes on each piece before refinement.
    pub nodes_per_segment: usize,
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self {
            radius: 100.0,
            inner_radius: 1e-3,
            abscissa: 1.0,
            nodes_per_segment: 64,
        }
    }
}

impl ContourSpec {
    pub fn validate(&self) -> Result<(), SolverError> {
        let ok = self.inner_radius > 0.0
            && self.inner_radius < self.radius
            && self.radius.is_finite()
            && self.abscissa > 0.0
            && self.abscissa < self.radius
            && self.nodes_per_segment >= 64;
        if ok {
            Ok(())
        } else {
            Err(SolverError::InvalidConfig(format!(
                "contour needs 0 < eps < R, 0 < s0 < R and at least 64 nodes per segment, got {self:?}"
            )))
        }
    }

    /// Whether `s` lies strictly inside the keyhole (ignoring exclusions).
    pub fn encloses(&self, s: Complex64) -> bool {
        let r = s.norm();
        r < self.radius && r > self.inner_radius && s.re < self.abscissa && !on_negative_axis(s)
    }
}

fn on_negative_axis(s: Complex64) -> bool {
    s.re < 0.0 && s.im.abs() <= 1e-13 * s.norm()
}

/// A disk around `s = -rho` cut out of the keyhole by indenting both banks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exclusion {
    pub rho: f64,
    pub radius: f64,
}

impl Exclusion {
    pub fn contains(&self, s: Complex64) -> bool {
        (s + self.rho).norm() <= self.radius
    }
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Line {
        from: Complex64,
        to: Complex64,
    },
    Arc {
        center: Complex64,
        radius: f64,
        from: f64,
        to: f64,
        sheet: Sheet,
    },
    /// Bank of the cut, `ρ` varying geometrically.
    Bank {
        sheet: Sheet,
        from: f64,
        to: f64,
    },
}

impl Piece {
    fn point(&self, tau: f64) -> Result<PlanePoint, SolverError> {
        Ok(match *self {
            Piece::Line { from, to } => PlanePoint::Principal(from + (to - from) * tau),
            Piece::Arc {
                center,
                radius,
                from,
                to,
                sheet,
            } => {
                let phi = from + (to - from) * tau;
                let s = center + Complex64::from_polar(radius, phi);
                if on_negative_axis(s) {
                    PlanePoint::Cut(BranchPoint::on(-s.re, sheet)?)
                } else {
                    PlanePoint::Principal(s)
                }
            }
            Piece::Bank { sheet, from, to } => {
                let rho = from * (to / from).powf(tau);
                PlanePoint::Cut(BranchPoint::on(rho, sheet)?)
            }
        })
    }
}

fn pieces(contour: &ContourSpec, exclusions: &[Exclusion]) -> Vec<Piece> {
    let ContourSpec {
        radius: r,
        inner_radius: eps,
        abscissa: s0,
        ..
    } = *contour;
    let y = (r * r - s0 * s0).sqrt();
    let theta_v = y.atan2(s0);
    let origin = Complex64::new(0.0, 0.0);
    let arc = |from: f64, to: f64, radius: f64, sheet: Sheet| Piece::Arc {
        center: origin,
        radius,
        from,
        to,
        sheet,
    };

    let mut excl: Vec<Exclusion> = exclusions
        .iter()
        .copied()
        .filter(|e| e.rho - e.radius > eps && e.rho + e.radius < r)
        .collect();
    excl.sort_by(|a, b| b.rho.total_cmp(&a.rho));

    let mut out = vec![
        Piece::Line {
            from: Complex64::new(s0, -y),
            to: Complex64::new(s0, y),
        },
        arc(theta_v, FRAC_PI_2, r, Sheet::Upper),
        arc(FRAC_PI_2, PI, r, Sheet::Upper),
    ];
    // Upper bank, ρ decreasing, indented over the top of each exclusion.
    let mut rho = r;
    for e in &excl {
        out.push(Piece::Bank {
            sheet: Sheet::Upper,
            from: rho,
            to: e.rho + e.radius,
        });
        out.push(Piece::Arc {
            center: Complex64::new(-e.rho, 0.0),
            radius: e.radius,
            from: PI,
            to: 0.0,
            sheet: Sheet::Upper,
        });
        rho = e.rho - e.radius;
    }
    out.push(Piece::Bank {
        sheet: Sheet::Upper,
        from: rho,
        to: eps,
    });
    out.push(arc(PI, 0.0, eps, Sheet::Upper));
    out.push(arc(0.0, -PI, eps, Sheet::Lower));
    // Lower bank, ρ increasing, indented underneath.
    let mut rho = eps;
    for e in excl.iter().rev() {
        out.push(Piece::Bank {
            sheet: Sheet::Lower,
            from: rho,
            to: e.rho - e.radius,
        });
        out.push(Piece::Arc {
            center: Complex64::new(-e.rho, 0.0),
            radius: e.radius,
            from: 0.0,
            to: -PI,
            sheet: Sheet::Lower,
        });
        rho = e.rho + e.radius;
    }
    out.push(Piece::Bank {
        sheet: Sheet::Lower,
        from: rho,
        to: r,
    });
    out.push(arc(-PI, -FRAC_PI_2, r, Sheet::Lower));
    out.push(arc(-FRAC_PI_2, -theta_v, r, Sheet::Lower));
    out
}

/// `(Q, arg G(s))` with `Q = s·A(s)·Ln s`, without forming `e^Q`.
fn arg_g(problem: &RelaxProblem, p: PlanePoint) -> Result<(Complex64, f64), SolverError> {
    let q = problem.exponent(p).map_err(|e| match e {
        SolverError::Transition(TransitionError::Pole(s)) => SolverError::SingularityOnContour(s),
        e => e,
    })?;
    if !(q.re.is_finite() && q.im.is_finite()) {
        return Err(SolverError::SingularityOnContour(p.value()));
    }
    let ln_lambda = problem.lambda.ln();
    // ln G = Q + ln(1 + λe^{-Q}) or ln λ + ln(1 + e^{Q}/λ).
    let ln_g = if q.re > ln_lambda {
        q + (1.0 + (ln_lambda - q).exp()).ln()
    } else {
        ln_lambda + (1.0 + (q - ln_lambda).exp()).ln()
    };
    if ln_g.re.is_nan() || ln_g.re <= ZERO_THRESHOLD.ln() {
        return Err(SolverError::ZeroOnContour(p.value()));
    }
    Ok((q, ln_g.im))
}

fn wrap(d: f64) -> f64 {
    d - 2.0 * PI * (d / (2.0 * PI)).round()
}

/// A step is resolved when both `arg G` and `Q` change little across it.
/// The bound on `Q` keeps fast rotations of `e^Q` from aliasing.
fn resolved(a: (Complex64, f64), b: (Complex64, f64)) -> bool {
    (b.0 - a.0).norm() < FRAC_PI_4 && wrap(b.1 - a.1).abs() < FRAC_PI_2
}

fn winding_over(
    problem: &RelaxProblem,
    pieces: &[Piece],
    nodes: usize,
) -> Result<i64, SolverError> {
    let mut total = 0.0;
    let mut evaluations = 0usize;
    let mut previous: Option<f64> = None;
    for piece in pieces {
        let taus: Vec<f64> = (0..=nodes).map(|k| k as f64 / nodes as f64).collect();
        let values = taus
            .iter()
            .map(|&tau| arg_g(problem, piece.point(tau)?))
            .collect::<Result<Vec<_>, _>>()?;
        evaluations += taus.len();
        if let Some(prev) = previous {
            total += wrap(values[0].1 - prev);
        }
        let mut stack = Vec::new();
        for k in (0..nodes).rev() {
            stack.push((taus[k], values[k], taus[k + 1], values[k + 1]));
        }
        while let Some((ta, va, tb, vb)) = stack.pop() {
            if resolved(va, vb) {
                total += wrap(vb.1 - va.1);
                continue;
            }
            let tm = 0.5 * (ta + tb);
            if tm <= ta || tm >= tb || evaluations >= MAX_NODES {
                return Err(SolverError::NonConvergence(format!(
                    "argument refinement exceeded {} nodes near s = {}",
                    MAX_NODES,
                    piece.point(ta)?.value()
                )));
            }
            let vm = arg_g(problem, piece.point(tm)?)?;
            evaluations += 1;
            stack.push((tm, vm, tb, vb));
            stack.push((ta, va, tm, vm));
        }
        previous = Some(values[nodes].1);
    }
    let w = total / (2.0 * PI);
    let n = w.round();
    if (w - n).abs() > 0.25 {
        return Err(SolverError::NonConvergence(format!(
            "total argument change {total} is not a multiple of 2π"
        )));
    }
    Ok(n as i64)
}

/// Winding number of `G(s) = s^{sA(s)} + λ` around 0 along the keyhole,
/// i.e. the number of zeros of `G` in the cut plane inside the contour.
///
/// Fails with [`SolverError::ZeroOnContour`] when `|G|` drops below
/// `1e-11` on a node, with [`SolverError::SingularityOnContour`] when a
/// node hits a pole of `s·A(s)`, and with [`SolverError::NonConvergence`]
/// when the argument cannot be resolved within `2^20` nodes.
pub fn winding_number(problem: &RelaxProblem, contour: &ContourSpec) -> Result<i64, SolverError> {
    contour.validate()?;
    winding_over(problem, &pieces(contour, &[]), contour.nodes_per_segment)
}

/// As [`winding_number`], with both banks indented around each exclusion
/// so that the disks it describes are left outside the contour.
pub fn indented_winding_number(
    problem: &RelaxProblem,
    contour: &ContourSpec,
    exclusions: &[Exclusion],
) -> Result<i64, SolverError> {
    contour.validate()?;
    winding_over(
        problem,
        &pieces(contour, exclusions),
        contour.nodes_per_segment,
    )
}

/// Zeros of `s^α + λ` in the open cut plane `|arg s| < π`, found in
/// closed form: `s = λ^{1/α}·e^{iπ(2k+1)/α}` with `|2k+1| < α`.
pub fn co_zeros_in_cut_plane(alpha: f64, lambda: f64) -> Vec<Complex64> {
    let kmax = (1.0 / alpha).ceil() as i64 + 1;
    (-kmax..=kmax)
        .filter_map(|k| {
            let theta = PI * (2 * k + 1) as f64 / alpha;
            (theta.abs() < PI).then(|| Complex64::from_polar(lambda.powf(1.0 / alpha), theta))
        })
        .collect()
}
