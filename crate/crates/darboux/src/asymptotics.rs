//! Closed-form asymptotic quantities of the construction: the limit
//! amplitudes A_N(±,k) of the normalized Jost solutions, the transmission
//! coefficient a_N(k), per-soliton ray profiles (direction, depth, centers)
//! with their mutual shifts, and the entrywise large-|x₁| limit matrices of
//! the renormalized dressing matrix.

use nalgebra::{Matrix3, Vector3};

use crate::config::{lambda_minor_det, DressingConfig, MinorSelector, SpectralParameters};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Cx};

fn check_amplitude_argument(params: &SpectralParameters, k: Cx) -> Result<()> {
    if k.im == 0.0 {
        return Err(Error::Domain(
            "limit amplitudes are discontinuous across the real axis; Im k must be nonzero".into(),
        ));
    }
    for (j, lam) in params.lambdas().iter().enumerate() {
        if k == *lam || k == lam.conj() {
            return Err(Error::Domain(format!(
                "spectral argument coincides with a zero/pole of the amplitude (index {j})"
            )));
        }
    }
    Ok(())
}

/// Limit amplitudes (A₊, A₋) of the normalized dressed Jost solution as
/// x₁ → ±(Im k)∞:
/// A_N(±,k) = ∏_j ((k−λ_j)/(k−conj λ_j))^{θ(± Im k · Im λ_j)}.
/// For N = 0 both amplitudes are 1.
pub fn a_limits(params: &SpectralParameters, k: Cx) -> Result<(Cx, Cx)> {
    check_amplitude_argument(params, k)?;
    let mut plus = Cx::new(1.0, 0.0);
    let mut minus = Cx::new(1.0, 0.0);
    for &lam in params.lambdas() {
        let factor = (k - lam) / (k - lam.conj());
        if k.im * lam.im > 0.0 {
            plus *= factor;
        } else {
            minus *= factor;
        }
    }
    Ok((plus, minus))
}

/// One-step multiplicative update of the limit amplitude when a parameter
/// λ is appended: factor = 1 + θ(side · Im k · Im λ) · 2i Im λ / (conj λ − k).
/// Cumulative products of these factors must reproduce [`a_limits`]; the
/// test suite checks the two paths against each other.
pub fn a_limit_step(lambda: Cx, k: Cx, side: f64) -> Cx {
    if side * k.im * lambda.im > 0.0 {
        Cx::new(1.0, 0.0) + Cx::new(0.0, 2.0 * lambda.im) / (lambda.conj() - k)
    } else {
        Cx::new(1.0, 0.0)
    }
}

/// Transmission coefficient
/// a_N(k) = A_N(+,k)/A_N(−,k) = ∏_j ((k−λ_j)/(k−conj λ_j))^{sgn(Im k · Im λ_j)},
/// with zeros at the λ_j (upper-sign factors) and poles at the conj λ_j.
pub fn transmission(params: &SpectralParameters, k: Cx) -> Result<Cx> {
    let (plus, minus) = a_limits(params, k)?;
    Ok(plus / minus)
}

/// Entrywise limit matrix α_N(±) of the renormalized dressing matrix
/// (see `dressing::normalized_matrix`) as x₁ → ±∞:
/// α_{l,m}(±) = θ(Im λ_l · Im λ_m) · [ c_{l,m} θ(∓ Im λ_l) + θ(± Im λ_l)/(i(conj λ_l − λ_m)) ].
pub fn alpha_matrix(config: &DressingConfig, side: f64) -> CMatrix {
    let lambdas = config.params().lambdas();
    let n = lambdas.len();
    CMatrix::from_fn(n, n, |l, m| {
        if lambdas[l].im * lambdas[m].im <= 0.0 {
            return Cx::new(0.0, 0.0);
        }
        if side * lambdas[l].im > 0.0 {
            Cx::new(1.0, 0.0) / (Cx::i() * (lambdas[l].conj() - lambdas[m]))
        } else {
            config.coupling().entry(l, m)
        }
    })
}

/// Per-soliton asymptotic data along the ray direction x₁ = 2μx₂ + const.
///
/// As x₂ → ±∞ along the ray of soliton `j`, the potential tends to the
/// one-dimensional profile depth / cosh²(rate·x₁ + ε_{j,±}).
#[derive(Debug, Clone, Copy)]
pub struct RayProfile {
    /// Soliton index (0-based).
    pub j: usize,
    /// Time sign the profile was requested for.
    pub time_sign: f64,
    /// Ray slope μ = Re λ_j.
    pub direction: f64,
    /// Profile argument slope Im λ_j.
    pub rate: f64,
    /// Profile depth −2 (Im λ_j)² < 0.
    pub depth: f64,
    /// Center ε_{j,s} for the requested time sign.
    pub center: f64,
    /// Center for x₂ → +∞.
    pub center_plus: f64,
    /// Center for x₂ → −∞.
    pub center_minus: f64,
    /// Mutual shift e^{2(ε_{j,+} − ε_{j,−})} of the two rays; 1 for N = 1.
    pub shift: f64,
}

impl RayProfile {
    /// Limit profile value at ray coordinate `x1` for the requested time sign.
    pub fn limit_potential(&self, x1: f64) -> f64 {
        self.depth / (self.rate * x1 + self.center).cosh().powi(2)
    }
}

/// Determinant of the coupling submatrix over `indices` (real by
/// Hermiticity; the empty determinant is 1).
fn coupling_minor(config: &DressingConfig, indices: &[usize]) -> Result<f64> {
    let det = linalg::det(&linalg::submatrix(config.coupling().matrix(), indices));
    if det.im.abs() > 1e-9 * det.re.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "coupling minor determinant is not real: {det}"
        )));
    }
    if det.re.abs() < 1e-300 {
        return Err(Error::InvalidConfig(
            "degenerate coupling: ray minor determinant vanishes".into(),
        ));
    }
    Ok(det.re)
}

fn check_ray_preconditions(config: &DressingConfig, j: usize) -> Result<()> {
    if j >= config.len() {
        return Err(Error::InvalidConfig(format!(
            "soliton index {j} out of range for N={}",
            config.len()
        )));
    }
    if !config.params().generic_rays() {
        return Err(Error::Domain(
            "coincident real parts among the spectral parameters: the ray limit does not exist"
                .into(),
        ));
    }
    Ok(())
}

/// Log-scale center 2ε_{j,s} of the ray profile for time sign `s`:
/// e^{2ε_{j,s}} = [det C(j,−s)/det Ĉ(j,−s)] · [det Λ̂(j,s)/det Λ(j,s)],
/// where the minors keep indices l ≠ j with s·Im λ_l (Re λ_l − Re λ_j) > 0
/// and the hatted variants additionally keep j itself.
fn log_center_doubled(config: &DressingConfig, j: usize, s: f64) -> Result<f64> {
    let params = config.params();
    let c_minor = coupling_minor(config, &MinorSelector::Ray { j, direction: -s }.indices(params))?;
    let c_hat = coupling_minor(
        config,
        &MinorSelector::RayWithCenter { j, direction: -s }.indices(params),
    )?;
    let lam_minor = lambda_minor_det(params, MinorSelector::Ray { j, direction: s })?;
    let lam_hat = lambda_minor_det(params, MinorSelector::RayWithCenter { j, direction: s })?;
    let ratio = (c_minor / c_hat) * (lam_hat / lam_minor);
    if !(ratio > 0.0) || !ratio.is_finite() {
        return Err(Error::Numerical(format!(
            "ray center determinant ratio is not positive: {ratio:.6e}"
        )));
    }
    Ok(ratio.ln())
}

/// Asymptotic ray profile of soliton `j` for x₂ → time_sign·∞.
///
/// Requires pairwise-distinct real parts of the spectral parameters (the
/// limit does not exist otherwise). Both centers and the mutual shift are
/// computed; centers are evaluated in log scale to avoid overflow in the
/// determinant ratios.
pub fn ray_profile(config: &DressingConfig, j: usize, time_sign: f64) -> Result<RayProfile> {
    check_ray_preconditions(config, j)?;
    if !(time_sign == 1.0 || time_sign == -1.0) {
        return Err(Error::InvalidConfig(format!(
            "time sign must be +1 or -1, got {time_sign}"
        )));
    }
    let lam = config.params().lambdas()[j];
    let two_eps_plus = log_center_doubled(config, j, 1.0)?;
    let two_eps_minus = log_center_doubled(config, j, -1.0)?;
    let center_plus = 0.5 * two_eps_plus;
    let center_minus = 0.5 * two_eps_minus;
    Ok(RayProfile {
        j,
        time_sign,
        direction: lam.re,
        rate: lam.im,
        depth: -2.0 * lam.im * lam.im,
        center: if time_sign > 0.0 { center_plus } else { center_minus },
        center_plus,
        center_minus,
        shift: (two_eps_plus - two_eps_minus).exp(),
    })
}

/// Mutual shift e^{2(ε_{j,+} − ε_{j,−})} of the two rays of soliton `j`, in
/// closed form: the Ĉ/C determinant ratio times a product over l ≠ j of
/// modulus-squared factors built from |Re λ_j − Re λ_l|, Im λ_j and |Im λ_l|.
/// Equals the ratio computed from two [`ray_profile`] centers (tested to
/// 1e−10).
pub fn ray_shift(config: &DressingConfig, j: usize) -> Result<f64> {
    check_ray_preconditions(config, j)?;
    let params = config.params();
    let lambdas = params.lambdas();
    let lam_j = lambdas[j];

    let c_hat_plus = coupling_minor(
        config,
        &MinorSelector::RayWithCenter { j, direction: 1.0 }.indices(params),
    )?;
    let c_hat_minus = coupling_minor(
        config,
        &MinorSelector::RayWithCenter { j, direction: -1.0 }.indices(params),
    )?;
    let c_plus = coupling_minor(config, &MinorSelector::Ray { j, direction: 1.0 }.indices(params))?;
    let c_minus = coupling_minor(config, &MinorSelector::Ray { j, direction: -1.0 }.indices(params))?;
    let det_ratio = (c_hat_plus * c_minus) / (c_hat_minus * c_plus);

    let mut product = 1.0;
    for (l, &lam_l) in lambdas.iter().enumerate() {
        if l == j {
            continue;
        }
        let gap = (lam_j.re - lam_l.re).abs();
        let orientation = (lam_l.re - lam_j.re).signum();
        let num = Cx::new(gap, -(lam_j.im * orientation - lam_l.im.abs()));
        let den = Cx::new(gap, -(lam_j.im * orientation + lam_l.im.abs()));
        product *= num.norm_sqr() / den.norm_sqr();
    }
    let shift = det_ratio * product;
    if !(shift > 0.0) || !shift.is_finite() {
        return Err(Error::Numerical(format!("ray shift is not positive: {shift:.6e}")));
    }
    Ok(shift)
}

/// Three-parameter sech² profile depth / cosh²(rate·x + center), used to fit
/// potential slices for asymptotic cross-checks.
#[derive(Debug, Clone, Copy)]
pub struct Sech2Fit {
    /// Trough value (negative for the potentials produced here).
    pub depth: f64,
    /// Argument slope.
    pub rate: f64,
    /// Argument offset.
    pub center: f64,
}

impl Sech2Fit {
    /// Model value at `x`.
    pub fn value(&self, x: f64) -> f64 {
        self.depth / (self.rate * x + self.center).cosh().powi(2)
    }

    fn sum_squared_residuals(&self, samples: &[(f64, f64)]) -> f64 {
        samples.iter().map(|&(x, u)| (self.value(x) - u).powi(2)).sum()
    }
}

/// Least-squares fit of a sech² profile to `samples` of (x, u) pairs by
/// Gauss–Newton iteration with step halving, started from `seed` (depth and
/// rate are normally seeded from closed-form theory so that the center is
/// the only quantity genuinely estimated).
pub fn fit_sech2(samples: &[(f64, f64)], seed: Sech2Fit) -> Result<Sech2Fit> {
    if samples.len() < 3 {
        return Err(Error::InvalidConfig(
            "sech2 fit needs at least three samples".into(),
        ));
    }
    let mut current = seed;
    let mut current_sse = current.sum_squared_residuals(samples);
    for _ in 0..200 {
        let mut jtj = Matrix3::<f64>::zeros();
        let mut jtr = Vector3::<f64>::zeros();
        for &(x, u) in samples {
            let xi = current.rate * x + current.center;
            let sech2 = 1.0 / xi.cosh().powi(2);
            let residual = current.depth * sech2 - u;
            let d_xi = -2.0 * current.depth * sech2 * xi.tanh();
            let grad = Vector3::new(sech2, d_xi * x, d_xi);
            jtj += grad * grad.transpose();
            jtr += grad * residual;
        }
        let step = jtj
            .lu()
            .solve(&(-jtr))
            .ok_or_else(|| Error::Numerical("sech2 fit normal equations are singular".into()))?;
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let candidate = Sech2Fit {
                depth: current.depth + scale * step[0],
                rate: current.rate + scale * step[1],
                center: current.center + scale * step[2],
            };
            let sse = candidate.sum_squared_residuals(samples);
            if sse <= current_sse {
                current = candidate;
                current_sse = sse;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
        let param_scale = 1.0 + current.depth.abs() + current.rate.abs() + current.center.abs();
        if scale * step.norm() <= 1e-13 * param_scale {
            break;
        }
    }
    Ok(current)
}
