//! Scarpi derivative and integral of variable order.
//!
//! For a transition `α(t)` with transform `A(s)` the two operators are the
//! convolutions
//!
//! * `D f(t) = ∫₀^t φ(t-τ) f'(τ) dτ` with `L[φ] = Φ(s) = s^{sA(s)-1}`,
//! * `I f(t) = ∫₀^t ψ(t-τ) f(τ) dτ` with `L[ψ] = Ψ(s) = s^{-sA(s)}`.
//!
//! The kernels have no closed form outside the constant case, so they are
//! obtained by Talbot inversion. Convolutions on a uniform grid use product
//! integration: the smooth factor is interpolated linearly and integrated
//! exactly against the kernel, using the tabulated first and second
//! antiderivatives `L⁻¹[K/s]` and `L⁻¹[K/s²]`.
//!
//! Samples with a singular leading term near the origin are not well
//! represented by linear interpolation on the first few cells. When the
//! shape `S` of that term is known, `γS` matching the first cell is
//! subtracted and its convolution with the kernel is added back exactly
//! from the Laplace domain. The shape is either a power `τ^p`, or the
//! antiderivative `L⁻¹[K'/s]` of a kernel, which is how the output of
//! either operator starts.

use num_complex::Complex64;
use thiserror::Error;

use crate::laplace::{talbot_invert, LaplaceError, TalbotConfig};
use crate::special::{gamma_reciprocal, principal_ln};
use crate::transition::TransitionSpec;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpsError {
    #[error(transparent)]
    Laplace(#[from] LaplaceError),
    #[error("the Scarpi derivative needs derivative samples")]
    MissingDerivative,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("sample grid does not match the kernel table (step {sample_step} vs {table_step}, {sample_len} vs {table_len} points)")]
    GridMismatch {
        sample_step: f64,
        table_step: f64,
        sample_len: usize,
        table_len: usize,
    },
    #[error("t = {0} is not a grid point")]
    NotOnGrid(f64),
}

/// The two convolution kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// Derivative kernel, `Φ(s) = s^{sA(s)-1}`.
    Phi,
    /// Integral kernel, `Ψ(s) = s^{-sA(s)}`.
    Psi,
}

/// `K(s)·s^{-shift}` for the kernel transform `K`.
pub fn kernel_transform(
    spec: &TransitionSpec,
    kernel: Kernel,
    s: Complex64,
    shift: f64,
) -> Complex64 {
    let (Ok(sa), Ok(ln_s)) = (spec.s_times_a(s), principal_ln(s)) else {
        return Complex64::new(f64::NAN, f64::NAN);
    };
    let exponent = match kernel {
        Kernel::Phi => sa - 1.0,
        Kernel::Psi => -sa,
    } - shift;
    (exponent * ln_s).exp()
}

fn invert_kernel(
    spec: &TransitionSpec,
    kernel: Kernel,
    shift: f64,
    t: f64,
    cfg: &TalbotConfig,
) -> Result<f64, LaplaceError> {
    talbot_invert(|s| kernel_transform(spec, kernel, s, shift), t, cfg)
}

/// `φ(t) = L⁻¹[s^{sA(s)-1}](t)`.
///
/// ```
/// use scarpi::laplace::TalbotConfig;
/// use scarpi::scarpi_ops::phi_kernel;
/// use scarpi::transition::TransitionSpec;
///
/// // Constant order: the Caputo kernel t^{-α}/Γ(1-α).
/// let v = phi_kernel(&TransitionSpec::constant(0.5), 1.0, &TalbotConfig::default()).unwrap();
/// assert!((v - 0.564_189_583_547_756_3).abs() < 1e-10);
/// ```
pub fn phi_kernel(spec: &TransitionSpec, t: f64, cfg: &TalbotConfig) -> Result<f64, OpsError> {
    Ok(invert_kernel(spec, Kernel::Phi, 0.0, t, cfg)?)
}

/// `ψ(t) = L⁻¹[s^{-sA(s)}](t)`.
pub fn psi_kernel(spec: &TransitionSpec, t: f64, cfg: &TalbotConfig) -> Result<f64, OpsError> {
    Ok(invert_kernel(spec, Kernel::Psi, 0.0, t, cfg)?)
}

/// Samples of a function on a uniform grid `0, h, 2h, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
    derivative_values: Option<Vec<f64>>,
    leading_term: Option<LeadingTerm>,
    derivative_leading_term: Option<LeadingTerm>,
}

/// Shape of the singular part of sampled values near `τ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeadingTerm {
    /// `τ^p`.
    Power(f64),
    /// `L⁻¹[K/s](τ)`, the running integral of a kernel.
    KernelIntegral(Kernel),
}

impl SampledFunction {
    /// Wraps existing samples. The grid must start at 0, be uniform and
    /// hold at least three points.
    pub fn new(
        grid: Vec<f64>,
        values: Vec<f64>,
        derivative_values: Option<Vec<f64>>,
    ) -> Result<Self, OpsError> {
        if grid.len() < 3 {
            return Err(OpsError::InvalidGrid(
                "at least three points are needed".into(),
            ));
        }
        if grid[0] != 0.0 {
            return Err(OpsError::InvalidGrid(format!(
                "grid starts at {}, not 0",
                grid[0]
            )));
        }
        let h = grid[1];
        if !(h > 0.0 && h.is_finite()) {
            return Err(OpsError::InvalidGrid(format!("step {h} is not positive")));
        }
        for (k, t) in grid.iter().enumerate() {
            if (t - k as f64 * h).abs() > 1e-9 * h * (k as f64).max(1.0) {
                return Err(OpsError::InvalidGrid(format!(
                    "grid is not uniform at index {k}"
                )));
            }
        }
        if values.len() != grid.len() {
            return Err(OpsError::InvalidGrid(
                "values and grid differ in length".into(),
            ));
        }
        if let Some(d) = &derivative_values {
            if d.len() != grid.len() {
                return Err(OpsError::InvalidGrid(
                    "derivative values and grid differ in length".into(),
                ));
            }
        }
        Ok(Self {
            grid,
            values,
            derivative_values,
            leading_term: None,
            derivative_leading_term: None,
        })
    }

    /// Samples `f` at `0, h, …, n·h`.
    pub fn tabulate(step: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self, OpsError> {
        let grid: Vec<f64> = (0..=n).map(|k| k as f64 * step).collect();
        let values = grid.iter().map(|&t| f(t)).collect();
        Self::new(grid, values, None)
    }

    /// Adds derivative samples computed from `df`.
    pub fn with_derivative(mut self, df: impl Fn(f64) -> f64) -> Self {
        self.derivative_values = Some(self.grid.iter().map(|&t| df(t)).collect());
        self
    }

    /// Declares the shape of the values near the origin.
    pub fn with_leading_term(mut self, term: LeadingTerm) -> Self {
        self.leading_term = Some(term);
        self
    }

    /// Declares the shape of the derivative values near the origin.
    pub fn with_derivative_leading_term(mut self, term: LeadingTerm) -> Self {
        self.derivative_leading_term = Some(term);
        self
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivative_values(&self) -> Option<&[f64]> {
        self.derivative_values.as_deref()
    }

    pub fn leading_term(&self) -> Option<LeadingTerm> {
        self.leading_term
    }

    pub fn step(&self) -> f64 {
        self.grid[1]
    }

    /// Index of the grid point `t`.
    pub fn index_of(&self, t: f64) -> Result<usize, OpsError> {
        let k = (t / self.step()).round();
        if k >= 0.0
            && (k as usize) < self.grid.len()
            && (self.grid[k as usize] - t).abs() <= 1e-9 * self.step()
        {
            Ok(k as usize)
        } else {
            Err(OpsError::NotOnGrid(t))
        }
    }
}

#[derive(Debug, Clone)]
struct Antiderivatives {
    /// `L⁻¹[K/s]` at `0, h, …, N·h`.
    first: Vec<f64>,
    /// `L⁻¹[K/s²]` at `0, h, …, N·h`.
    second: Vec<f64>,
}

impl Antiderivatives {
    fn tabulate(
        spec: &TransitionSpec,
        kernel: Kernel,
        step: f64,
        n: usize,
        cfg: &TalbotConfig,
    ) -> Result<Self, LaplaceError> {
        let mut first = vec![0.0];
        let mut second = vec![0.0];
        for k in 1..=n {
            let t = k as f64 * step;
            first.push(invert_kernel(spec, kernel, 1.0, t, cfg)?);
            second.push(invert_kernel(spec, kernel, 2.0, t, cfg)?);
        }
        Ok(Self { first, second })
    }
}

/// Kernel samples and product-integration moments for one transition on
/// one uniform grid.
#[derive(Debug, Clone)]
pub struct KernelTable {
    spec: TransitionSpec,
    step: f64,
    grid: Vec<f64>,
    phi_values: Vec<f64>,
    psi_values: Vec<f64>,
    phi_exponent: f64,
    psi_exponent: f64,
    phi_moments: Antiderivatives,
    psi_moments: Antiderivatives,
    talbot: TalbotConfig,
}

impl KernelTable {
    /// Tabulates the kernels at `h, 2h, …, n·h` (`n ≥ 2`).
    pub fn new(
        spec: &TransitionSpec,
        step: f64,
        n: usize,
        talbot: TalbotConfig,
    ) -> Result<Self, OpsError> {
        if n < 2 {
            return Err(OpsError::InvalidGrid(
                "a kernel table needs at least two points".into(),
            ));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(OpsError::InvalidGrid(format!(
                "step {step} is not positive"
            )));
        }
        let grid: Vec<f64> = (1..=n).map(|k| k as f64 * step).collect();
        let phi_values = grid
            .iter()
            .map(|&t| invert_kernel(spec, Kernel::Phi, 0.0, t, &talbot))
            .collect::<Result<Vec<_>, _>>()?;
        let psi_values = grid
            .iter()
            .map(|&t| invert_kernel(spec, Kernel::Psi, 0.0, t, &talbot))
            .collect::<Result<Vec<_>, _>>()?;
        let phi_exponent = (phi_values[1] / phi_values[0]).log2();
        let psi_exponent = (psi_values[1] / psi_values[0]).log2();
        Ok(Self {
            spec: *spec,
            step,
            phi_moments: Antiderivatives::tabulate(spec, Kernel::Phi, step, n, &talbot)?,
            psi_moments: Antiderivatives::tabulate(spec, Kernel::Psi, step, n, &talbot)?,
            grid,
            phi_values,
            psi_values,
            phi_exponent,
            psi_exponent,
            talbot,
        })
    }

    /// Builds a table matching the grid of `f`.
    pub fn for_samples(
        spec: &TransitionSpec,
        f: &SampledFunction,
        talbot: TalbotConfig,
    ) -> Result<Self, OpsError> {
        Self::new(spec, f.step(), f.grid().len() - 1, talbot)
    }

    pub fn spec(&self) -> &TransitionSpec {
        &self.spec
    }

    /// `t₁ … t_N` (the origin is excluded because `φ` is singular there).
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn phi_values(&self) -> &[f64] {
        &self.phi_values
    }

    pub fn psi_values(&self) -> &[f64] {
        &self.psi_values
    }

    /// Exponent `e` of the local model `φ(t) ≈ C·t^e`, fitted on the two
    /// smallest grid points.
    pub fn phi_exponent(&self) -> f64 {
        self.phi_exponent
    }

    /// The fitted exponent of `φ`, near `-ᾱ` where `ᾱ` is the order at
    /// `t = 0`. It lies in `(-1, 0)` for admissible transitions.
    pub fn singular_exponent(&self) -> f64 {
        self.phi_exponent
    }

    /// Exponent of the local model for `ψ`.
    pub fn psi_exponent(&self) -> f64 {
        self.psi_exponent
    }

    fn moments(&self, kernel: Kernel) -> &Antiderivatives {
        match kernel {
            Kernel::Phi => &self.phi_moments,
            Kernel::Psi => &self.psi_moments,
        }
    }

    fn check_grid(&self, f: &SampledFunction) -> Result<(), OpsError> {
        let same_step = (f.step() - self.step).abs() <= 1e-12 * self.step;
        if !same_step || f.grid().len() != self.grid.len() + 1 {
            return Err(OpsError::GridMismatch {
                sample_step: f.step(),
                table_step: self.step,
                sample_len: f.grid().len(),
                table_len: self.grid.len() + 1,
            });
        }
        Ok(())
    }

    /// `∫₀^{t_n} K(t_n - τ) g(τ) dτ` for every grid point.
    fn convolve(
        &self,
        kernel: Kernel,
        g: &[f64],
        leading: Option<LeadingTerm>,
    ) -> Result<Vec<f64>, OpsError> {
        let h = self.step;
        let n_max = g.len() - 1;
        let mom = self.moments(kernel);
        // Weights for the constant and linear parts on cell m (distance mh..(m+1)h).
        let a: Vec<f64> = (0..n_max)
            .map(|m| mom.first[m + 1] - mom.first[m])
            .collect();
        let b: Vec<f64> = (0..n_max)
            .map(|m| (h * mom.first[m + 1] - (mom.second[m + 1] - mom.second[m])) / h)
            .collect();

        let mut smooth = g.to_vec();
        let mut singular = None;
        if let Some(term) = leading {
            let shape: Vec<f64> = match term {
                LeadingTerm::Power(p) => (0..=n_max).map(|k| (k as f64 * h).powf(p)).collect(),
                LeadingTerm::KernelIntegral(k) => self.moments(k).first[..=n_max].to_vec(),
            };
            let gamma = (g[1] - g[0]) / (shape[1] - shape[0]);
            if gamma != 0.0 && gamma.is_finite() {
                for (r, s) in smooth.iter_mut().zip(&shape) {
                    *r -= gamma * s;
                }
                singular = Some((term, gamma));
            }
        }

        let mut out = vec![0.0; n_max + 1];
        for n in 1..=n_max {
            let mut acc = 0.0;
            for m in 0..n {
                acc += smooth[n - m] * (a[m] - b[m]) + smooth[n - m - 1] * b[m];
            }
            if let Some((term, gamma)) = singular {
                acc += gamma * self.singular_convolution(kernel, term, n as f64 * h)?;
            }
            out[n] = acc;
        }
        Ok(out)
    }

    /// `(K ∗ S)(t)` for the shape `S` of a leading term.
    fn singular_convolution(
        &self,
        kernel: Kernel,
        term: LeadingTerm,
        t: f64,
    ) -> Result<f64, OpsError> {
        let spec = &self.spec;
        Ok(match term {
            LeadingTerm::Power(p) => {
                invert_kernel(spec, kernel, p + 1.0, t, &self.talbot)? / gamma_reciprocal(p + 1.0)
            }
            LeadingTerm::KernelIntegral(other) => talbot_invert(
                |s| kernel_transform(spec, kernel, s, 0.0) * kernel_transform(spec, other, s, 1.0),
                t,
                &self.talbot,
            )?,
        })
    }

    /// `D f` on the grid of `f`.
    pub fn derivative(&self, f: &SampledFunction) -> Result<SampledFunction, OpsError> {
        self.check_grid(f)?;
        let df = f.derivative_values().ok_or(OpsError::MissingDerivative)?;
        let values = self.convolve(Kernel::Phi, df, f.derivative_leading_term)?;
        Ok(SampledFunction::new(f.grid.clone(), values, None)?
            .with_leading_term(LeadingTerm::KernelIntegral(Kernel::Phi)))
    }

    /// `I f` on the grid of `f`.
    pub fn integral(&self, f: &SampledFunction) -> Result<SampledFunction, OpsError> {
        self.check_grid(f)?;
        let values = self.convolve(Kernel::Psi, f.values(), f.leading_term)?;
        Ok(SampledFunction::new(f.grid.clone(), values, None)?
            .with_leading_term(LeadingTerm::KernelIntegral(Kernel::Psi)))
    }

    /// `D[I f]`, using `(I f)' = f(0)·ψ + I[f']`.
    pub fn derivative_of_integral(&self, f: &SampledFunction) -> Result<Vec<f64>, OpsError> {
        self.check_grid(f)?;
        let df = f.derivative_values().ok_or(OpsError::MissingDerivative)?;
        let df = SampledFunction::new(f.grid.clone(), df.to_vec(), None)?;
        let i_df = self.integral(&df)?;
        let mut out = self.convolve(Kernel::Phi, i_df.values(), i_df.leading_term)?;
        // φ∗ψ = L⁻¹[Φ·Ψ] = L⁻¹[1/s] = 1.
        let f0 = f.values()[0];
        for v in out.iter_mut().skip(1) {
            *v += f0;
        }
        Ok(out)
    }

    /// `(max |I[D f] - (f - f(0))|, max |D[I f] - f|)` over the grid points
    /// `t > 0`.
    pub fn fundamental_theorem_residual(
        &self,
        f: &SampledFunction,
    ) -> Result<(f64, f64), OpsError> {
        let df = self.derivative(f)?;
        let idf = self.integral(&df)?;
        let dif = self.derivative_of_integral(f)?;
        let f0 = f.values()[0];
        let mut r1: f64 = 0.0;
        let mut r2: f64 = 0.0;
        for (n, &v) in f.values().iter().enumerate().skip(1) {
            r1 = r1.max((idf.values()[n] - (v - f0)).abs());
            r2 = r2.max((dif[n] - v).abs());
        }
        Ok((r1, r2))
    }
}

/// Scarpi derivative of `f` at the grid point `t`.
///
/// ```
/// use scarpi::scarpi_ops::{scarpi_derivative, SampledFunction};
/// use scarpi::transition::TransitionSpec;
///
/// // Caputo derivative of order 1/2 of f(t) = t is t^{1/2}/Γ(3/2).
/// let f = SampledFunction::tabulate(1.0 / 64.0, 64, |t| t)
///     .unwrap()
///     .with_derivative(|_| 1.0);
/// let d = scarpi_derivative(&TransitionSpec::constant(0.5), &f, 1.0).unwrap();
/// assert!((d - 1.128_379_167_095_512_6).abs() < 1e-8);
/// ```
pub fn scarpi_derivative(
    spec: &TransitionSpec,
    f: &SampledFunction,
    t: f64,
) -> Result<f64, OpsError> {
    let n = f.index_of(t)?;
    let table = KernelTable::for_samples(spec, f, TalbotConfig::default())?;
    Ok(table.derivative(f)?.values()[n])
}

/// Scarpi integral of `f` at the grid point `t`.
pub fn scarpi_integral(
    spec: &TransitionSpec,
    f: &SampledFunction,
    t: f64,
) -> Result<f64, OpsError> {
    let n = f.index_of(t)?;
    let table = KernelTable::for_samples(spec, f, TalbotConfig::default())?;
    Ok(table.integral(f)?.values()[n])
}

/// Residuals of the two composition identities `I[D f] = f - f(0)` and
/// `D[I f] = f` on the grid of `f`.
pub fn fundamental_theorem_residual(
    spec: &TransitionSpec,
    f: &SampledFunction,
) -> Result<(f64, f64), OpsError> {
    KernelTable::for_samples(spec, f, TalbotConfig::default())?.fundamental_theorem_residual(f)
}
