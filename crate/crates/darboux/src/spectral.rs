//! Spectral-data bookkeeping for dressed potentials.
//!
//! Dressing a background potential acts on its scattering data in two ways:
//! the continuous kernel is multiplied by an explicit rational factor for
//! every dressing parameter in the upper half plane, and a finite family of
//! discrete constants appears that ties the values of the dressed Jost
//! solution at the dressing parameters to its values at their complex
//! conjugates. This module implements the kernel transform, the discrete
//! constants, the point evaluations entering the discrete linear relation,
//! and a boundary-value check of the jump relation satisfied by the dressed
//! Jost solution across the real axis of the spectral plane.

use std::fmt;
use std::sync::Arc;

use crate::asymptotics;
use crate::background::{self, BackgroundModel};
use crate::config::{DressingConfig, Point};
use crate::dressing;
use crate::error::{Error, Result};
use crate::linalg::{theta, CMatrix, Cx};

/// Reject jump-relation checks when `k` lies within this distance of the
/// real part of a dressing parameter: boundary values converge too slowly
/// along these discrete directions for the extrapolation ladder to settle.
pub const DISCRETE_DIRECTION_MARGIN: f64 = 1e-3;

/// Default ladder of imaginary offsets used to extrapolate boundary values
/// of the dressed Jost solution onto the real axis.
pub const DEFAULT_EPS_LADDER: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Continuous spectral kernel `F(k, p)` on the real `(k, p)` plane.
///
/// Physically meaningful kernels are Hermitian as integral kernels,
/// `conj(F(p, k)) = F(k, p)`; the transform applied by [`transform_kernel`]
/// preserves that symmetry. The zero-kernel flag records reflectionless
/// data exactly instead of relying on floating-point comparisons.
#[derive(Clone)]
pub struct SpectralKernel {
    eval: Arc<dyn Fn(f64, f64) -> Cx + Send + Sync>,
    identically_zero: bool,
}

impl SpectralKernel {
    /// Wrap an arbitrary kernel function.
    pub fn new(eval: impl Fn(f64, f64) -> Cx + Send + Sync + 'static) -> Self {
        SpectralKernel { eval: Arc::new(eval), identically_zero: false }
    }

    /// The identically vanishing kernel (reflectionless data).
    pub fn zero() -> Self {
        SpectralKernel {
            eval: Arc::new(|_, _| Cx::new(0.0, 0.0)),
            identically_zero: true,
        }
    }

    /// Evaluate the kernel at real spectral arguments.
    pub fn eval(&self, k: f64, p: f64) -> Cx {
        (self.eval)(k, p)
    }

    /// True when the kernel is the exact zero kernel.
    pub fn is_identically_zero(&self) -> bool {
        self.identically_zero
    }

    /// Deviation from Hermitian symmetry at one argument pair:
    /// `|conj(F(p, k)) - F(k, p)|`.
    pub fn hermitian_defect(&self, k: f64, p: f64) -> f64 {
        (self.eval(p, k).conj() - self.eval(k, p)).norm()
    }
}

impl fmt::Debug for SpectralKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralKernel")
            .field("identically_zero", &self.identically_zero)
            .finish()
    }
}

/// Continuous kernel of the background itself. Only the zero background
/// carries supported (identically vanishing) continuous data; numeric
/// backgrounds are rejected by the underlying background query.
pub fn background_kernel(bg: &BackgroundModel) -> Result<SpectralKernel> {
    background::spectral_kernel(bg, 0.0, 0.0)?;
    Ok(SpectralKernel::zero())
}

/// Discrete part of the spectral data of a dressed potential: the matrix of
/// constants `d[(l, m)]` expressing the value of the dressed Jost solution
/// at the dressing parameter `lambda_m` as a linear combination of its
/// values at the conjugated parameters `conj(lambda_l)`.
#[derive(Debug, Clone)]
pub struct DiscreteData {
    d: CMatrix,
}

impl DiscreteData {
    /// Full matrix of constants.
    pub fn matrix(&self) -> &CMatrix {
        &self.d
    }

    /// Single constant `d[(l, m)]` (zero-based indices).
    pub fn entry(&self, l: usize, m: usize) -> Cx {
        self.d[(l, m)]
    }

    /// Number of dressing parameters.
    pub fn len(&self) -> usize {
        self.d.nrows()
    }

    /// True for the undressed case.
    pub fn is_empty(&self) -> bool {
        self.d.nrows() == 0
    }
}

/// Rational factor picked up by the continuous kernel under dressing. Only
/// parameters in the upper half plane contribute a factor.
fn kernel_factor(lambdas: &[Cx], k: f64, p: f64) -> Cx {
    let kc = Cx::new(k, 0.0);
    let pc = Cx::new(p, 0.0);
    let mut factor = Cx::new(1.0, 0.0);
    for &la in lambdas {
        if la.im > 0.0 {
            factor *= (kc - la) * (pc - la.conj()) / ((kc - la.conj()) * (pc - la));
        }
    }
    factor
}

/// Transform a continuous kernel under the dressing described by `config`.
///
/// Each dressing parameter in the upper half plane multiplies the kernel by
/// an explicit rational factor; parameters in the lower half plane leave the
/// continuous data untouched. Real arguments never meet the complex poles of
/// the factor, the diagonal `p = k` is left unchanged, Hermitian symmetry is
/// preserved, and the zero kernel stays exactly zero.
pub fn transform_kernel(kernel: &SpectralKernel, config: &DressingConfig) -> SpectralKernel {
    let lambdas = config.params().lambdas().to_vec();
    let inner = kernel.eval.clone();
    SpectralKernel {
        eval: Arc::new(move |k, p| {
            let base = inner(k, p);
            if base == Cx::new(0.0, 0.0) {
                return base;
            }
            base * kernel_factor(&lambdas, k, p)
        }),
        identically_zero: kernel.identically_zero,
    }
}

/// Product over the conjugated-parameter family entering both the discrete
/// constants and the conjugate-point values: for row `l`,
/// `prod_{j != l} ((conj(lam_l) - lam_j) / (conj(lam_l) - conj(lam_j)))`
/// restricted to indices `j` whose parameter lies in the same half plane as
/// `lam_l`. Factors with step-function exponent zero are skipped before any
/// evaluation, so formally singular bases never arise.
fn conjugate_row_product(lambdas: &[Cx], l: usize) -> Cx {
    let ll = lambdas[l];
    let mut prod = Cx::new(1.0, 0.0);
    for (j, &lj) in lambdas.iter().enumerate() {
        if j != l && theta(ll.im * lj.im) == 1 {
            prod *= (ll.conj() - lj) / (ll.conj() - lj.conj());
        }
    }
    prod
}

/// Leading amplitude of the dressed solution along the incoming direction,
/// evaluated at the dressing parameter `lambda_m` with the convention that
/// factors carrying a zero step-function exponent equal one. The factor at
/// `j = m` always has exponent zero, so the formally singular base is never
/// touched.
fn incoming_amplitude_at_lambda(lambdas: &[Cx], m: usize) -> Cx {
    let km = lambdas[m];
    let mut prod = Cx::new(1.0, 0.0);
    for &lj in lambdas {
        if theta(-km.im * lj.im) == 1 {
            prod *= (km - lj) / (km - lj.conj());
        }
    }
    prod
}

/// Discrete constants `d[(l, m)]` of the dressed potential.
///
/// Each constant is linear in the coupling entry `c[(l, m)]` and otherwise
/// built from two explicit products over the dressing parameters; factors
/// with step-function exponent zero equal one by convention and are skipped
/// before evaluation.
pub fn discrete_constants(config: &DressingConfig) -> Result<DiscreteData> {
    let lambdas = config.params().lambdas();
    let n = lambdas.len();
    let c = config.coupling().matrix();
    let mut d = CMatrix::zeros(n, n);
    for l in 0..n {
        let row = conjugate_row_product(lambdas, l);
        for m in 0..n {
            let col = incoming_amplitude_at_lambda(lambdas, m);
            let value = 2.0 * lambdas[l].im * c[(l, m)] * row / col;
            if !value.re.is_finite() || !value.im.is_finite() {
                return Err(Error::Numerical(format!(
                    "discrete constant ({l}, {m}) is not finite"
                )));
            }
            d[(l, m)] = value;
        }
    }
    Ok(DiscreteData { d })
}

/// Value of the dressed Jost solution at the conjugated dressing parameter
/// `conj(lambda_l)`, computed in closed form from the `l`-th column solution
/// of the dressing system and an explicit product over same-half-plane
/// parameters.
pub fn value_at_conjugate(config: &DressingConfig, p: Point, l: usize) -> Result<Cx> {
    let lambdas = config.params().lambdas();
    if l >= lambdas.len() {
        return Err(Error::InvalidConfig(format!(
            "conjugate-point index {l} out of range for {} parameters",
            lambdas.len()
        )));
    }
    let g = dressing::dressed_g(config, p, l)?;
    Ok(g / (2.0 * lambdas[l].im) / conjugate_row_product(lambdas, l))
}

/// Value of the dressed Jost solution at the dressing parameter `lambda_m`,
/// computed as the dressed incoming-normalized solution divided by its
/// incoming amplitude. The amplitude product drops the formally singular
/// `j = m` factor because its step-function exponent vanishes, so the value
/// is finite even though `lambda_m` is a discrete spectral point.
pub fn value_at_lambda(config: &DressingConfig, p: Point, m: usize) -> Result<Cx> {
    let lambdas = config.params().lambdas();
    if m >= lambdas.len() {
        return Err(Error::InvalidConfig(format!(
            "spectral-point index {m} out of range for {} parameters",
            lambdas.len()
        )));
    }
    let f = dressing::dressed_f_solution(config, p, lambdas[m])?;
    Ok(f / incoming_amplitude_at_lambda(lambdas, m))
}

/// Residual of the discrete linear relation at one point: the value at
/// `lambda_m` minus the `d`-weighted combination of the values at all
/// conjugated parameters, normalized by the larger of the two magnitudes.
pub fn discrete_relation_residual(
    config: &DressingConfig,
    data: &DiscreteData,
    p: Point,
    m: usize,
) -> Result<f64> {
    let left = value_at_lambda(config, p, m)?;
    let mut right = Cx::new(0.0, 0.0);
    for l in 0..config.len() {
        right += data.entry(l, m) * value_at_conjugate(config, p, l)?;
    }
    let scale = left.norm().max(right.norm()).max(1e-300);
    Ok((left - right).norm() / scale)
}

/// Polynomial extrapolation of ladder samples to the origin (Lagrange form).
fn extrapolate_to_zero(nodes: &[f64], values: &[Cx]) -> Cx {
    let mut acc = Cx::new(0.0, 0.0);
    for (i, &vi) in values.iter().enumerate() {
        let mut w = 1.0;
        for (j, &xj) in nodes.iter().enumerate() {
            if j != i {
                w *= xj / (xj - nodes[i]);
            }
        }
        acc += vi * w;
    }
    acc
}

fn check_ladder(eps_ladder: &[f64]) -> Result<()> {
    if eps_ladder.is_empty() {
        return Err(Error::InvalidConfig(
            "boundary-value ladder must contain at least one offset".into(),
        ));
    }
    for pair in eps_ladder.windows(2) {
        if pair[1] >= pair[0] {
            return Err(Error::InvalidConfig(
                "boundary-value ladder offsets must be strictly decreasing".into(),
            ));
        }
    }
    if eps_ladder.iter().any(|&e| !e.is_finite() || e <= 0.0) {
        return Err(Error::InvalidConfig(
            "boundary-value ladder offsets must be finite and positive".into(),
        ));
    }
    Ok(())
}

/// Boundary-value check of the jump relation obeyed by the dressed Jost
/// solution across the real spectral axis.
///
/// For reflectionless data (zero background) the relation states that the
/// upper boundary value divided by the transmission amplitude equals the
/// lower boundary value. Both one-sided limits are approximated at `k ± i*eps`
/// for every ladder offset and extrapolated to the axis; the returned
/// residual is the magnitude of the extrapolated mismatch.
pub fn jump_check(
    config: &DressingConfig,
    p: Point,
    k: f64,
    eps_ladder: &[f64],
) -> Result<f64> {
    if !matches!(config.background(), BackgroundModel::Zero) {
        return Err(Error::Unsupported(
            "the jump-relation check requires the zero background (reflectionless data)".into(),
        ));
    }
    if !k.is_finite() {
        return Err(Error::Domain("spectral argument must be finite".into()));
    }
    for (j, la) in config.params().lambdas().iter().enumerate() {
        if (k - la.re).abs() < DISCRETE_DIRECTION_MARGIN {
            return Err(Error::Domain(format!(
                "spectral argument {k} lies within {DISCRETE_DIRECTION_MARGIN} of the discrete \
                 direction through parameter {j}"
            )));
        }
    }
    check_ladder(eps_ladder)?;
    let mut gaps = Vec::with_capacity(eps_ladder.len());
    for &eps in eps_ladder {
        let upper = Cx::new(k, eps);
        let lower = Cx::new(k, -eps);
        let phi_plus = dressing::dressed_jost(config, p, upper)?;
        let a_plus = asymptotics::transmission(config.params(), upper)?;
        let phi_minus = dressing::dressed_jost(config, p, lower)?;
        gaps.push(phi_plus / a_plus - phi_minus);
    }
    Ok(extrapolate_to_zero(eps_ladder, &gaps).norm())
}
