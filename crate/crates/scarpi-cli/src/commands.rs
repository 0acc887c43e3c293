use std::io::Write;

use num_complex::Complex64;
use scarpi::laplace::talbot_invert;
use scarpi::scarpi_ops::{kernel_transform, phi_kernel, psi_kernel, Kernel};
use scarpi::solver::{
    co_reference, co_zeros_in_cut_plane, solve_grid, u_hat, winding_number, BranchCutSolver,
    ContourSpec, Method, RegimeFlag, RelaxProblem, SolutionRow,
};
use scarpi::special::{gamma_reciprocal, mittag_leffler, MLParams};
use scarpi::transition::{TransitionKind, TransitionSpec};
use serde::Serialize;

use crate::config::{
    grid, CheckArgs, InvertArgs, KernelsArgs, MethodChoice, MlArgs, OutputFormat, SolveArgs,
    Spacing, Transform,
};
use crate::output::{sci, write_csv, write_json, TransitionRecord};
use crate::CliError;

#[derive(Serialize)]
struct Document<M, R> {
    metadata: M,
    rows: Vec<R>,
}

#[derive(Serialize)]
struct RowRecord {
    t: f64,
    u: f64,
    method: &'static str,
    err_est: f64,
}

impl From<&SolutionRow> for RowRecord {
    fn from(r: &SolutionRow) -> Self {
        Self {
            t: r.t,
            u: r.u,
            method: r.method.as_str(),
            err_est: r.err_est,
        }
    }
}

#[derive(Serialize)]
struct FailureRecord {
    t: f64,
    method: &'static str,
    error: String,
}

#[derive(Serialize)]
struct SolveMetadata {
    transition: TransitionRecord,
    lambda: f64,
    u0: f64,
    methods: Vec<&'static str>,
    flags: Vec<String>,
    /// False when a flag marks the run as outside the standard setting
    /// (`c > 1`, increasing order).
    standard_regime: bool,
    winding: Option<i64>,
    interior_zeros: Option<usize>,
    cut_zeros: Option<usize>,
    max_relative_discrepancy: Option<f64>,
    failures: Vec<FailureRecord>,
}

pub fn solve(args: &SolveArgs, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), CliError> {
    let spec = args.transition.spec()?;
    let problem = args.problem.problem(spec)?;
    let times = args.grid.times()?;
    let cfg = args.solve_config()?;
    let methods = match args.method {
        MethodChoice::BranchCut => vec![Method::BranchCut],
        MethodChoice::Talbot => vec![Method::Talbot],
        MethodChoice::CoReference => vec![Method::CoReference],
        MethodChoice::Both => vec![Method::BranchCut, Method::Talbot],
    };
    if args.method == MethodChoice::CoReference && spec.kind != TransitionKind::Constant {
        return Err(CliError::Validation(
            "method co_reference requires --kind constant".into(),
        ));
    }

    let mut rows: Vec<SolutionRow> = Vec::new();
    let mut failures = Vec::new();
    let mut meta = SolveMetadata {
        transition: (&spec).into(),
        lambda: problem.lambda,
        u0: problem.u0,
        methods: methods.iter().map(|m| m.as_str()).collect(),
        flags: Vec::new(),
        standard_regime: true,
        winding: None,
        interior_zeros: None,
        cut_zeros: None,
        max_relative_discrepancy: None,
        failures: Vec::new(),
    };
    for &method in &methods {
        if method == Method::BranchCut {
            let solver = BranchCutSolver::new(&problem, cfg.quadrature)?;
            meta.flags = solver.flags().iter().map(ToString::to_string).collect();
            meta.standard_regime = !solver
                .flags()
                .iter()
                .any(|f| matches!(f, RegimeFlag::SlowTransition | RegimeFlag::DecreasingOrder));
            meta.winding = solver.winding();
            if let Some(z) = solver.zeros() {
                meta.interior_zeros = Some(z.count());
                meta.cut_zeros = Some(z.on_cut.len());
            }
            for &t in &times {
                match solver.evaluate(t) {
                    Ok((u, err_est)) => rows.push(SolutionRow {
                        t,
                        u,
                        method,
                        err_est,
                    }),
                    Err(e) => failures.push((t, method, e)),
                }
            }
        } else {
            let table = solve_grid(&problem, &times, method, &cfg)?;
            rows.extend(table.rows);
            failures.extend(table.failures.into_iter().map(|f| (f.t, method, f.error)));
        }
    }

    if let Some(w) = meta.winding {
        writeln!(diag, "winding number: {w}")?;
    }
    if let (Some(n), Some(m)) = (meta.interior_zeros, meta.cut_zeros) {
        writeln!(diag, "residues: {n} off the cut, {m} on the cut")?;
    }
    for flag in &meta.flags {
        writeln!(diag, "flag: {flag}")?;
    }
    if args.method == MethodChoice::Both {
        let pairs = rows
            .iter()
            .filter(|r| r.method == Method::BranchCut)
            .filter_map(|a| {
                rows.iter()
                    .find(|b| b.method == Method::Talbot && b.t == a.t)
                    .map(|b| (a.u - b.u).abs() / b.u.abs().max(f64::MIN_POSITIVE))
            });
        let max = pairs.fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.max(d))));
        if let Some(d) = max {
            writeln!(
                diag,
                "max relative discrepancy branch_cut vs talbot: {d:.3e}"
            )?;
        }
        meta.max_relative_discrepancy = max;
    }
    for (t, method, e) in &failures {
        writeln!(diag, "{method} failed at t = {t}: {e}")?;
    }
    meta.failures = failures
        .iter()
        .map(|(t, method, e)| FailureRecord {
            t: *t,
            method: method.as_str(),
            error: e.to_string(),
        })
        .collect();

    match args.output.output {
        OutputFormat::Csv => write_csv(
            out,
            &["t", "u", "method", "err_est"],
            rows.iter()
                .map(|r| vec![sci(r.t), sci(r.u), r.method.to_string(), sci(r.err_est)]),
        )?,
        OutputFormat::Json => write_json(
            out,
            &Document {
                metadata: meta,
                rows: rows.iter().map(RowRecord::from).collect(),
            },
        )?,
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "{} of {} rows failed",
            failures.len(),
            times.len() * methods.len()
        )))
    }
}

#[derive(Serialize)]
struct KernelMetadata {
    transition: TransitionRecord,
    talbot_nodes: usize,
}

#[derive(Serialize)]
struct KernelRow {
    t: f64,
    phi: f64,
    psi: f64,
}

pub fn kernels(
    args: &KernelsArgs,
    out: &mut dyn Write,
    _diag: &mut dyn Write,
) -> Result<(), CliError> {
    let spec = args.transition.spec()?;
    validate_spec(&spec)?;
    let times = args.grid.times()?;
    if times[0] <= 0.0 {
        return Err(CliError::Validation("kernel times must be positive".into()));
    }
    let talbot = args.talbot.config()?;
    let rows = times
        .iter()
        .map(|&t| {
            Ok(KernelRow {
                t,
                phi: phi_kernel(&spec, t, &talbot)?,
                psi: psi_kernel(&spec, t, &talbot)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    match args.output.output {
        OutputFormat::Csv => write_csv(
            out,
            &["t", "phi", "psi"],
            rows.iter().map(|r| vec![sci(r.t), sci(r.phi), sci(r.psi)]),
        ),
        OutputFormat::Json => write_json(
            out,
            &Document {
                metadata: KernelMetadata {
                    transition: (&spec).into(),
                    talbot_nodes: talbot.nodes,
                },
                rows,
            },
        ),
    }
}

fn validate_spec(spec: &TransitionSpec) -> Result<(), CliError> {
    let report = spec.validate();
    match report.first_failure() {
        None => Ok(()),
        Some(c) => Err(CliError::Validation(format!("{} ({})", c.name, c.detail))),
    }
}

#[derive(Serialize)]
struct CheckRecord {
    check: String,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct CheckMetadata {
    transition: TransitionRecord,
    lambda: f64,
    u0: f64,
    passed: bool,
}

/// Runs the checks in order and stops at the first group that fails:
/// admissibility, then the endpoint limits of `s·ũ(s)`, then the zero
/// census behind the branch-cut formula.
pub fn check(args: &CheckArgs, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), CliError> {
    let spec = args.transition.spec()?;
    let mut records = Vec::new();
    let mut failure = None;

    let report = spec.validate();
    for c in &report.checks {
        records.push(CheckRecord {
            check: c.name.to_string(),
            passed: c.passed,
            detail: c.detail.clone(),
        });
    }
    if let Some(c) = report.first_failure() {
        failure = Some(CliError::Validation(format!("{} ({})", c.name, c.detail)));
    }

    let problem = match failure {
        None => match RelaxProblem::new(spec, args.lambda, args.u0) {
            Ok(p) => Some(p),
            Err(e) => {
                records.push(CheckRecord {
                    check: "problem parameters".into(),
                    passed: false,
                    detail: e.to_string(),
                });
                failure = Some(e.into());
                None
            }
        },
        Some(_) => None,
    };

    if let Some(problem) = problem {
        match endpoint_checks(&problem, &mut records) {
            Ok(true) => {}
            Ok(false) => {
                failure = Some(CliError::Numerical(
                    "endpoint limits of s·ũ(s) not met".into(),
                ))
            }
            Err(e) => failure = Some(e),
        }
        if failure.is_none() {
            if let Err(e) = zero_checks(&problem, args, &mut records) {
                failure = Some(e);
            }
        }
    }

    for r in &records {
        writeln!(
            diag,
            "[{}] {}: {}",
            if r.passed { "pass" } else { "FAIL" },
            r.check,
            r.detail
        )?;
    }
    match args.output.output {
        OutputFormat::Csv => write_csv(
            out,
            &["check", "passed", "detail"],
            records
                .iter()
                .map(|r| vec![r.check.clone(), r.passed.to_string(), r.detail.clone()]),
        )?,
        OutputFormat::Json => write_json(
            out,
            &Document {
                metadata: CheckMetadata {
                    transition: (&spec).into(),
                    lambda: args.lambda,
                    u0: args.u0,
                    passed: failure.is_none(),
                },
                rows: records,
            },
        )?,
    }
    failure.map_or(Ok(()), Err)
}

/// `s·ũ(s) → u₀` as `s → ∞` and `→ 0` as `s → 0`. The limits are
/// approached like `λ·s^{-ᾱ}` and `s^{α̃}/λ`, so each allowance includes
/// twice the leading term.
fn endpoint_checks(
    problem: &RelaxProblem,
    records: &mut Vec<CheckRecord>,
) -> Result<bool, CliError> {
    let u0 = problem.u0.abs();
    let s_high = 1e8;
    let high = (u_hat(problem, Complex64::new(s_high, 0.0))? * s_high).re;
    let allowance =
        1e-6 * u0 + 2.0 * problem.lambda * s_high.powf(-problem.spec.initial_order()) * u0;
    let high_ok = (high - problem.u0).abs() <= allowance;
    records.push(CheckRecord {
        check: "s·u_hat(s) -> u0 as s -> inf".into(),
        passed: high_ok,
        detail: format!(
            "s = {s_high:e}: {high:.12e}, |diff| = {:.3e}, allowed {allowance:.3e}",
            (high - problem.u0).abs()
        ),
    });
    let s_low = 1e-8;
    let low = (u_hat(problem, Complex64::new(s_low, 0.0))? * s_low).re;
    let allowance = 1e-5 * u0 + 2.0 * s_low.powf(problem.spec.final_order()) / problem.lambda * u0;
    let low_ok = low.abs() <= allowance;
    records.push(CheckRecord {
        check: "s·u_hat(s) -> 0 as s -> 0".into(),
        passed: low_ok,
        detail: format!("s = {s_low:e}: {low:.3e}, allowed {allowance:.3e}"),
    });
    Ok(high_ok && low_ok)
}

fn zero_checks(
    problem: &RelaxProblem,
    args: &CheckArgs,
    records: &mut Vec<CheckRecord>,
) -> Result<(), CliError> {
    let spec = &problem.spec;
    if spec.kind == TransitionKind::Constant {
        let zeros = co_zeros_in_cut_plane(spec.alpha1, problem.lambda);
        records.push(CheckRecord {
            check: "zeros of s^alpha + lambda in the cut plane".into(),
            passed: zeros.is_empty(),
            detail: format!("{} found", zeros.len()),
        });
        let w = winding_number(problem, &ContourSpec::default())?;
        records.push(CheckRecord {
            check: "winding number".into(),
            passed: w == 0,
            detail: format!("{w}"),
        });
        if !zeros.is_empty() || w != 0 {
            return Err(CliError::Numerical("zeros inside the cut plane".into()));
        }
        return Ok(());
    }
    let solver = BranchCutSolver::new(problem, args.quadrature.config()?)?;
    let detail = match solver.zeros() {
        Some(z) => format!(
            "winding {} around the plane indented at -c, {} zeros off the cut located, {} on the cut",
            z.winding,
            z.count(),
            z.on_cut.len()
        ),
        None => format!("winding {}", solver.winding().unwrap_or(0)),
    };
    records.push(CheckRecord {
        check: "zero census".into(),
        passed: true,
        detail,
    });
    for flag in solver.flags() {
        records.push(CheckRecord {
            check: "regime".into(),
            passed: true,
            detail: flag.to_string(),
        });
    }
    Ok(())
}

#[derive(Serialize)]
struct MlMetadata {
    beta: f64,
}

#[derive(Serialize)]
struct MlRow {
    z: f64,
    value: f64,
}

pub fn ml(args: &MlArgs, out: &mut dyn Write, _diag: &mut dyn Write) -> Result<(), CliError> {
    let zs = match (args.z, args.z_min, args.z_max) {
        (Some(z), None, None) => vec![z],
        (None, Some(a), Some(b)) => grid(a, b, args.points, Spacing::Linear, "z")?,
        (Some(_), _, _) => {
            return Err(CliError::Usage(
                "--z cannot be combined with --z-min/--z-max".into(),
            ))
        }
        _ => {
            return Err(CliError::Usage(
                "give --z, or both --z-min and --z-max".into(),
            ))
        }
    };
    let rows = zs
        .iter()
        .map(|&z| {
            Ok(MlRow {
                z,
                value: mittag_leffler(MLParams::new(args.beta, z))?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    match args.output.output {
        OutputFormat::Csv => write_csv(
            out,
            &["z", "value"],
            rows.iter().map(|r| vec![sci(r.z), sci(r.value)]),
        ),
        OutputFormat::Json => write_json(
            out,
            &Document {
                metadata: MlMetadata { beta: args.beta },
                rows,
            },
        ),
    }
}

#[derive(Serialize)]
struct InvertMetadata {
    transform: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    u0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transition: Option<TransitionRecord>,
    talbot_nodes: usize,
    max_abs_error: Option<f64>,
}

#[derive(Serialize)]
struct InvertRow {
    t: f64,
    f: f64,
    exact: Option<f64>,
}

fn transform_name(t: Transform) -> &'static str {
    match t {
        Transform::ShiftedPole => "shifted-pole",
        Transform::Power => "power",
        Transform::Relaxation => "relaxation",
        Transform::Phi => "phi",
        Transform::Psi => "psi",
        Transform::Solution => "solution",
    }
}

type Image = Box<dyn Fn(Complex64) -> Complex64>;
type Exact = Box<dyn Fn(f64) -> Option<f64>>;

pub fn invert(
    args: &InvertArgs,
    out: &mut dyn Write,
    diag: &mut dyn Write,
) -> Result<(), CliError> {
    let name = transform_name(args.transform);
    let uses_transition = matches!(
        args.transform,
        Transform::Phi | Transform::Psi | Transform::Solution
    );
    let uses_a = matches!(
        args.transform,
        Transform::ShiftedPole | Transform::Power | Transform::Relaxation
    );
    let uses_lambda = matches!(args.transform, Transform::Relaxation | Transform::Solution);
    if !uses_transition && !args.transition.is_empty() {
        return Err(CliError::Usage(format!(
            "--transform {name} takes no transition keys"
        )));
    }
    if !uses_lambda && (args.lambda.is_some() || args.u0.is_some()) {
        return Err(CliError::Usage(format!(
            "--transform {name} takes no --lambda or --u0"
        )));
    }
    let a = args.a;
    let lambda = args.lambda.unwrap_or(1.0);
    let u0 = args.u0.unwrap_or(1.0);
    let times = args.grid.times()?;
    if times[0] <= 0.0 {
        return Err(CliError::Validation(
            "inversion times must be positive".into(),
        ));
    }
    let talbot = args.talbot.config()?;

    let spec = if uses_transition {
        let spec = args.transition.spec()?;
        validate_spec(&spec)?;
        Some(spec)
    } else {
        None
    };
    let (image, exact): (Image, Exact) = match args.transform {
        Transform::ShiftedPole => {
            if !(a >= 0.0 && a.is_finite()) {
                return Err(CliError::Validation(format!(
                    "shifted-pole needs a >= 0, got {a}"
                )));
            }
            (
                Box::new(move |s| 1.0 / (s + a)),
                Box::new(move |t| Some((-a * t).exp())),
            )
        }
        Transform::Power => {
            if !(a > 0.0 && a.is_finite()) {
                return Err(CliError::Validation(format!("power needs a > 0, got {a}")));
            }
            (
                Box::new(move |s: Complex64| (-a * s.ln()).exp()),
                Box::new(move |t| Some(t.powf(a - 1.0) * gamma_reciprocal(a))),
            )
        }
        Transform::Relaxation => {
            co_reference(a, lambda, 1.0, 1.0)?;
            (
                Box::new(move |s: Complex64| {
                    let sa = (a * s.ln()).exp();
                    sa / (s * (sa + lambda))
                }),
                Box::new(move |t| co_reference(a, lambda, 1.0, t).ok()),
            )
        }
        Transform::Phi | Transform::Psi => {
            let spec = spec.expect("transition parsed above");
            let kernel = if args.transform == Transform::Phi {
                Kernel::Phi
            } else {
                Kernel::Psi
            };
            let exact: Exact = if spec.kind == TransitionKind::Constant {
                let alpha = spec.alpha1;
                Box::new(move |t| {
                    Some(match kernel {
                        Kernel::Phi => t.powf(-alpha) * gamma_reciprocal(1.0 - alpha),
                        Kernel::Psi => t.powf(alpha - 1.0) * gamma_reciprocal(alpha),
                    })
                })
            } else {
                Box::new(|_| None)
            };
            (
                Box::new(move |s| kernel_transform(&spec, kernel, s, 0.0)),
                exact,
            )
        }
        Transform::Solution => {
            let problem = RelaxProblem::new(spec.expect("transition parsed above"), lambda, u0)?;
            let exact: Exact = if problem.spec.kind == TransitionKind::Constant {
                let alpha = problem.spec.alpha1;
                Box::new(move |t| co_reference(alpha, lambda, u0, t).ok())
            } else {
                Box::new(|_| None)
            };
            (
                Box::new(move |s| u_hat(&problem, s).unwrap_or(Complex64::new(f64::NAN, f64::NAN))),
                exact,
            )
        }
    };

    let rows = times
        .iter()
        .map(|&t| {
            Ok(InvertRow {
                t,
                f: talbot_invert(&image, t, &talbot)?,
                exact: exact(t),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let max_abs_error = rows
        .iter()
        .filter_map(|r| r.exact.map(|e| (r.f - e).abs()))
        .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.max(d))));
    if let Some(e) = max_abs_error {
        writeln!(diag, "max |talbot - closed form|: {e:.3e}")?;
    }
    match args.output.output {
        OutputFormat::Csv => write_csv(
            out,
            &["t", "f", "exact"],
            rows.iter()
                .map(|r| vec![sci(r.t), sci(r.f), r.exact.map(sci).unwrap_or_default()]),
        ),
        OutputFormat::Json => write_json(
            out,
            &Document {
                metadata: InvertMetadata {
                    transform: name,
                    a: uses_a.then_some(a),
                    lambda: uses_lambda.then_some(lambda),
                    u0: (args.transform == Transform::Solution).then_some(u0),
                    transition: spec.as_ref().map(TransitionRecord::from),
                    talbot_nodes: talbot.nodes,
                    max_abs_error,
                },
                rows,
            },
        ),
    }
}
