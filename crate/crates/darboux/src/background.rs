//! Seed data of the dressing construction: the background potential u(x),
//! its Jost solution Φ(x,k) with x₁-derivative, the free Green's function
//! G₀(x,k) in closed form and by quadrature, and the cumulative integrals
//! β_l(x,k) / B_{l,m}(x) that populate the dressing matrix.
//!
//! Two background variants are supported: the exact zero background
//! (plane-wave Jost solutions) and a numeric Gaussian bump handled through a
//! truncated Born series.

use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use crate::config::{Point, SpectralParameters};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Cx};
use crate::quad::{self, QuadTol};

/// Two-norm distance below which the Hermitian symmetry
/// `B_{l,m} = conj(B_{m,l})` of the numerically computed coupling-integral
/// matrix must hold.
pub const B_HERMITICITY_TOL: f64 = 1e-9;

/// Tolerances and truncation controls for numeric-background quadrature.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadratureSettings {
    /// Absolute tolerance per integral.
    pub abs_tol: f64,
    /// Relative tolerance per integral.
    pub rel_tol: f64,
    /// Half-width of the integration window around the potential center.
    pub truncation_radius: f64,
    /// Subdivision budget per adaptive integral.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            truncation_radius: 8.0,
            max_subdivisions: 4000,
        }
    }
}

impl QuadratureSettings {
    fn quad_tol(&self) -> QuadTol {
        QuadTol {
            abs: self.abs_tol,
            rel: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

/// Gaussian bump potential
/// `u(x) = amplitude * exp(-((x1-c1)/w1)^2 - ((x2-c2)/w2)^2)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianBump {
    pub amplitude: f64,
    pub width: [f64; 2],
    pub center: [f64; 2],
}

impl GaussianBump {
    /// Potential value at a point.
    pub fn value(&self, p: Point) -> f64 {
        let t1 = (p.x1 - self.center[0]) / self.width[0];
        let t2 = (p.x2 - self.center[1]) / self.width[1];
        self.amplitude * (-t1 * t1 - t2 * t2).exp()
    }
}

/// Background model: exact zero background or a numeric decaying potential
/// whose Jost solution is built from a truncated Born series.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BackgroundModel {
    /// u ≡ 0; Φ(x,k) = exp(−ikx₁ − ik²x₂) exactly (χ ≡ 1).
    Zero,
    /// Real, rapidly decaying Gaussian bump; Born series truncated at
    /// `born_order` (the series converges for small-norm potentials).
    Gaussian {
        #[serde(flatten)]
        potential: GaussianBump,
        born_order: usize,
        #[serde(default)]
        quadrature: QuadratureSettings,
    },
}

impl BackgroundModel {
    /// The zero background.
    pub fn zero() -> Self {
        BackgroundModel::Zero
    }

    /// A numeric Gaussian-bump background.
    pub fn gaussian(potential: GaussianBump, born_order: usize, quadrature: QuadratureSettings) -> Self {
        BackgroundModel::Gaussian { potential, born_order, quadrature }
    }

    /// True for the exact zero background.
    pub fn is_zero(&self) -> bool {
        matches!(self, BackgroundModel::Zero)
    }

    /// Background potential value u(x).
    pub fn potential_value(&self, p: Point) -> f64 {
        match self {
            BackgroundModel::Zero => 0.0,
            BackgroundModel::Gaussian { potential, .. } => potential.value(p),
        }
    }
}

/// How a Green's-function value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreensMethod {
    ClosedForm,
    Quadrature,
}

/// A Green's-function evaluation together with its provenance.
#[derive(Debug, Clone, Copy)]
pub struct GreensEval {
    pub value: Cx,
    pub method: GreensMethod,
}

impl GreensEval {
    /// Closed-form evaluation.
    pub fn closed_form(p: Point, k: Cx) -> Result<Self> {
        Ok(GreensEval { value: green_g0(p, k)?, method: GreensMethod::ClosedForm })
    }

    /// Adaptive-quadrature evaluation (oracle path).
    pub fn quadrature(p: Point, k: Cx, settings: &QuadratureSettings) -> Result<Self> {
        Ok(GreensEval { value: green_g0_quadrature(p, k, settings)?, method: GreensMethod::Quadrature })
    }
}

fn check_g0_domain(p: Point, k: Cx) -> Result<()> {
    if k.im == 0.0 {
        return Err(Error::Domain("Green's function needs Im k != 0".into()));
    }
    if p.x2 == 0.0 {
        return Err(Error::Domain(
            "Green's function is distributional on the line x2 = 0".into(),
        ));
    }
    Ok(())
}

/// Faddeeva argument and shared prefactor of the closed-form G₀.
///
/// The defining half-line integral over α (restricted to sgn(α) =
/// sgn(Im k · x₂)) is a Fresnel-type Gaussian; completing the square turns
/// it into `(√π / (2√(ix₂))) · w(z₀)` with
/// `z₀ = sgn(Im k · x₂) (x₁ + 2k x₂) / (2 √(ix₂))`
/// and `w` the Faddeeva function (principal square root throughout).
fn g0_parts(p: Point, k: Cx) -> (Cx, Cx, f64) {
    let root = Cx::new(0.0, p.x2).sqrt();
    let sigma = (k.im * p.x2).signum();
    let z0 = (Cx::new(p.x1, 0.0) + 2.0 * k * p.x2) * sigma / (2.0 * root);
    // (sgn x₂ / 2πi) · √π / (2 √(ix₂))
    let prefactor = Cx::new(0.0, -p.x2.signum() / (2.0 * std::f64::consts::PI))
        * (std::f64::consts::PI.sqrt() / 2.0)
        / root;
    (prefactor, z0, sigma)
}

fn faddeeva(z: Cx) -> Cx {
    use errorfunctions::ComplexErrorFunctions;
    z.w()
}

/// Free Green's function G₀(x,k) of the operator i∂_{x₂} + ∂²_{x₁} − 2ik∂_{x₁},
/// in closed form through the Faddeeva function.
pub fn green_g0(p: Point, k: Cx) -> Result<Cx> {
    check_g0_domain(p, k)?;
    let (prefactor, z0, _) = g0_parts(p, k);
    Ok(prefactor * faddeeva(z0))
}

/// ∂G₀/∂x₁ in closed form via w'(z) = −2z·w(z) + 2i/√π.
pub fn green_g0_dx1(p: Point, k: Cx) -> Result<Cx> {
    check_g0_domain(p, k)?;
    let (prefactor, z0, sigma) = g0_parts(p, k);
    let root = Cx::new(0.0, p.x2).sqrt();
    let wprime = -2.0 * z0 * faddeeva(z0) + Cx::new(0.0, 2.0 / std::f64::consts::PI.sqrt());
    Ok(prefactor * wprime * sigma / (2.0 * root))
}

/// Quadrature oracle for G₀: direct adaptive integration of the defining
/// α-integral over the half-line sgn(α) = sgn(Im k · x₂), truncated where the
/// exponential envelope `exp(−2|Im k · x₂| α)` falls below the tolerance.
pub fn green_g0_quadrature(p: Point, k: Cx, settings: &QuadratureSettings) -> Result<Cx> {
    check_g0_domain(p, k)?;
    let rate = 2.0 * (k.im * p.x2).abs();
    let sigma = (k.im * p.x2).signum();
    let big_x = Cx::new(p.x1, 0.0) + 2.0 * k * p.x2;
    // Tail bound: |∫_A^∞| ≤ e^{−rate·A}/rate ≤ 0.1 · abs_tol.
    let upper = (1.0 / (0.1 * settings.abs_tol * rate)).ln() / rate;
    if !upper.is_finite() || upper > 1e6 {
        return Err(Error::Numerical(format!(
            "quadrature window for G0 too large (rate {rate:.3e})"
        )));
    }
    let f = |t: f64| (Cx::i() * (sigma * t * big_x - t * t * p.x2)).exp();
    let tol = QuadTol {
        abs: 0.5 * settings.abs_tol,
        rel: settings.rel_tol,
        max_subdivisions: settings.max_subdivisions,
    };
    let integral = quad::integrate(&f, 0.0, upper.max(1.0), &tol)?;
    Ok(integral.value * Cx::new(0.0, -p.x2.signum() / (2.0 * std::f64::consts::PI)))
}

/// Plane-wave exponent −ikx₁ − ik²x₂ of the zero-background Jost solution.
/// Its real part equals −Im k · (x₁ + 2 Re k · x₂).
pub fn plane_wave_exponent(p: Point, k: Cx) -> Cx {
    -Cx::i() * (k * p.x1 + k * k * p.x2)
}

fn plane_exponent(p: Point, k: Cx) -> Cx {
    plane_wave_exponent(p, k)
}

/// m-th Born term T_m(x,k): T_0 = 1,
/// T_{m+1}(x) = ∬ G₀(x−x′,k) u(x′) T_m(x′) dx′ over the truncation window.
///
/// The x₂′ integration is split at x₂′ = x₂ so the integrable Green's-function
/// singularity sits at panel endpoints, and the panels touching the split are
/// mapped through x₂′ = x₂ ± s²: the |x₂ − x₂′|^{−1/2} growth of G₀ becomes a
/// bounded, smooth integrand in s, so the outer rule never chases the
/// singularity and the inner x₁′ spike (width √|x₂ − x₂′| = s) stays within
/// the subdivision budget.
fn born_term(
    potential: &GaussianBump,
    settings: &QuadratureSettings,
    p: Point,
    k: Cx,
    m: usize,
) -> Result<Cx> {
    if m == 0 {
        return Ok(Cx::new(1.0, 0.0));
    }
    let r = settings.truncation_radius;
    let (c1, c2) = (potential.center[0], potential.center[1]);
    let tol = settings.quad_tol();

    // First error raised inside a quadrature closure; closures must return a
    // plain value, so failures are parked here and rechecked afterwards.
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner = |x2p: f64| -> Cx {
        let f = |x1p: f64| -> Cx {
            let xp = Point::new(x1p, x2p);
            let g = match green_g0(Point::new(p.x1 - x1p, p.x2 - x2p), k) {
                Ok(g) => g,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    return Cx::new(0.0, 0.0);
                }
            };
            let t_prev = match born_term(potential, settings, xp, k, m - 1) {
                Ok(t) => t,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    return Cx::new(0.0, 0.0);
                }
            };
            g * potential.value(xp) * t_prev
        };
        match quad::integrate(&f, c1 - r, c1 + r, &tol) {
            Ok(q) => q.value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Cx::new(0.0, 0.0)
            }
        }
    };

    let mut splits = vec![c2 - r, c2 + r];
    if p.x2 > c2 - r && p.x2 < c2 + r {
        splits.insert(1, p.x2);
    }
    let mut total = Cx::new(0.0, 0.0);
    for pair in splits.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let piece = if a == p.x2 {
            // x₂′ = a + s², ds-Jacobian 2s tames the endpoint singularity.
            let g = |s: f64| inner(a + s * s) * 2.0 * s;
            quad::integrate(&g, 0.0, (b - a).sqrt(), &tol)?
        } else if b == p.x2 {
            let g = |s: f64| inner(b - s * s) * 2.0 * s;
            quad::integrate(&g, 0.0, (b - a).sqrt(), &tol)?
        } else {
            let g = |x2p: f64| inner(x2p);
            quad::integrate(&g, a, b, &tol)?
        };
        total += piece.value;
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
    }
    Ok(total)
}

/// Born-series terms of the normalized Jost solution χ; χ ≈ Σ terms.
/// The magnitude of the last term is the convergence proxy for the
/// truncation at `born_order`.
pub fn jost_chi_terms(bg: &BackgroundModel, p: Point, k: Cx) -> Result<Vec<Cx>> {
    match bg {
        BackgroundModel::Zero => Ok(vec![Cx::new(1.0, 0.0)]),
        BackgroundModel::Gaussian { potential, born_order, quadrature } => {
            if k.im == 0.0 {
                return Err(Error::Domain("Jost solution needs Im k != 0 for a numeric background".into()));
            }
            let mut terms = Vec::with_capacity(born_order + 1);
            for m in 0..=*born_order {
                terms.push(born_term(potential, quadrature, p, k, m)?);
            }
            Ok(terms)
        }
    }
}

/// Normalized Jost solution χ(x,k) = e^{ikx₁+ik²x₂} Φ(x,k); equals 1 exactly
/// for the zero background.
pub fn jost_chi(bg: &BackgroundModel, p: Point, k: Cx) -> Result<Cx> {
    Ok(jost_chi_terms(bg, p, k)?.into_iter().sum())
}

/// Jost solution Φ(x,k) = e^{−ikx₁−ik²x₂} χ(x,k).
pub fn jost_phi(bg: &BackgroundModel, p: Point, k: Cx) -> Result<Cx> {
    Ok(plane_exponent(p, k).exp() * jost_chi(bg, p, k)?)
}

/// Φ(x,k) · e^{−sigma}: the plane-wave exponent and the scaling offset are
/// combined in a single exponential so the result never overflows for
/// sigma ≥ Im k · (x₁ + 2 Re k · x₂).
pub fn jost_phi_scaled(bg: &BackgroundModel, p: Point, k: Cx, sigma: f64) -> Result<Cx> {
    Ok((plane_exponent(p, k) - sigma).exp() * jost_chi(bg, p, k)?)
}

/// ∂Φ/∂x₁: analytic −ikΦ for the zero background, central difference with
/// step 1e−4·(1+|x₁|) for numeric backgrounds.
pub fn dphi_dx1(bg: &BackgroundModel, p: Point, k: Cx) -> Result<Cx> {
    dphi_dx1_scaled(bg, p, k, 0.0)
}

/// (∂Φ/∂x₁) · e^{−sigma}, overflow-safe like [`jost_phi_scaled`].
pub fn dphi_dx1_scaled(bg: &BackgroundModel, p: Point, k: Cx, sigma: f64) -> Result<Cx> {
    match bg {
        BackgroundModel::Zero => Ok(-Cx::i() * k * jost_phi_scaled(bg, p, k, sigma)?),
        BackgroundModel::Gaussian { .. } => {
            let h = 1e-4 * (1.0 + p.x1.abs());
            let hi = jost_phi_scaled(bg, Point::new(p.x1 + h, p.x2), k, sigma)?;
            let lo = jost_phi_scaled(bg, Point::new(p.x1 - h, p.x2), k, sigma)?;
            Ok((hi - lo) / (2.0 * h))
        }
    }
}

/// Exponential rate μ = i(conj(λ_l) − k) of the β integrand; Re μ = Im λ_l + Im k.
fn beta_rate(lambda_l: Cx, k: Cx) -> Cx {
    Cx::i() * (lambda_l.conj() - k)
}

fn check_beta_domain(lambda_l: Cx, k: Cx) -> Result<()> {
    if lambda_l.im + k.im == 0.0 {
        return Err(Error::Domain(format!(
            "Im k = {} lies on the excluded line Im k + Im lambda = 0 for lambda = {}",
            k.im, lambda_l
        )));
    }
    Ok(())
}

/// Reduced β: β_l(x,k) stripped of its plane-wave growth,
/// `beta_reduced = e^{−i(conj(λ_l)−k)x₁ − i(conj(λ_l)²−k²)x₂} · β_l(x,k)`.
///
/// For the zero background this is the constant `1/(i(conj(λ_l)−k))`; for a
/// numeric background the correction
/// `∫ (conj(χ_λ)χ_k − 1) e^{μ(x₁′−x₁)} dx₁′` (from the signed-infinity base
/// point up to x₁) is added, its integrand bounded by construction.
pub fn beta_reduced(
    bg: &BackgroundModel,
    p: Point,
    l: usize,
    k: Cx,
    params: &SpectralParameters,
) -> Result<Cx> {
    let lambda_l = params.lambdas()[l];
    check_beta_domain(lambda_l, k)?;
    let mu = beta_rate(lambda_l, k);
    let main = 1.0 / mu;
    match bg {
        BackgroundModel::Zero => Ok(main),
        BackgroundModel::Gaussian { quadrature, .. } => {
            let sign = (lambda_l.im + k.im).signum();
            let failure: RefCell<Option<Error>> = RefCell::new(None);
            let f = |x1p: f64| -> Cx {
                let xp = Point::new(x1p, p.x2);
                let pair = jost_chi(bg, xp, lambda_l).and_then(|cl| Ok((cl, jost_chi(bg, xp, k)?)));
                match pair {
                    Ok((chi_l, chi_k)) => {
                        (chi_l.conj() * chi_k - 1.0) * (mu * (x1p - p.x1)).exp()
                    }
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        Cx::new(0.0, 0.0)
                    }
                }
            };
            let tol = quadrature.quad_tol();
            let correction = quad::integrate_from_signed_infinity(&f, sign, p.x1, &tol)?;
            if let Some(e) = failure.borrow_mut().take() {
                return Err(e);
            }
            Ok(main + correction.value)
        }
    }
}

/// Cumulative integral β_l(x,k) = ∫ conj(Φ(·,λ_l)) Φ(·,k) dx₁′ from the base
/// point −(Im k + Im λ_l)·∞ up to x₁.
pub fn beta(
    bg: &BackgroundModel,
    p: Point,
    l: usize,
    k: Cx,
    params: &SpectralParameters,
) -> Result<Cx> {
    let lambda_l = params.lambdas()[l];
    let reduced = beta_reduced(bg, p, l, k, params)?;
    let lc = lambda_l.conj();
    let exponent = Cx::i() * ((lc - k) * p.x1 + (lc * lc - k * k) * p.x2);
    Ok(exponent.exp() * reduced)
}

/// Coupling-integral matrix B(x) with entries B_{l,m} = β_l(x,λ_m).
/// The Hermitian symmetry B_{l,m} = conj(B_{m,l}) is asserted entrywise;
/// every entry is computed independently so the assertion is meaningful.
pub fn coupling_integral_matrix(
    bg: &BackgroundModel,
    p: Point,
    params: &SpectralParameters,
) -> Result<CMatrix> {
    let n = params.len();
    let mut b = CMatrix::zeros(n, n);
    for l in 0..n {
        for m in 0..n {
            b[(l, m)] = beta(bg, p, l, params.lambdas()[m], params)?;
        }
    }
    for l in 0..n {
        for m in 0..n {
            let defect = (b[(l, m)] - b[(m, l)].conj()).norm();
            let scale = b[(l, m)].norm().max(1.0);
            if defect > B_HERMITICITY_TOL * scale {
                return Err(Error::Numerical(format!(
                    "coupling-integral matrix lost Hermitian symmetry at ({l},{m}): defect {defect:.3e}"
                )));
            }
        }
    }
    Ok(b)
}

/// Continuous spectral kernel of the background: identically zero for the
/// zero background (reflectionless seed); not provided for numeric backgrounds.
pub fn spectral_kernel(bg: &BackgroundModel, _k: f64, _p: f64) -> Result<Cx> {
    match bg {
        BackgroundModel::Zero => Ok(Cx::new(0.0, 0.0)),
        BackgroundModel::Gaussian { .. } => Err(Error::Unsupported(
            "continuous spectral data is only provided for the zero background".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    #[test]
    fn g0_domain_errors() {
        assert!(green_g0(Point::new(1.0, 0.0), cx(0.0, 1.0)).is_err());
        assert!(green_g0(Point::new(1.0, 1.0), cx(2.0, 0.0)).is_err());
    }

    #[test]
    fn g0_closed_form_matches_quadrature() {
        let settings = QuadratureSettings::default();
        let samples = [
            (Point::new(1.0, 1.0), cx(0.5, 0.25)),
            (Point::new(-0.8, 2.0), cx(-0.3, 0.7)),
            (Point::new(0.7, -1.3), cx(1.0, 0.5)),
            (Point::new(2.5, 0.4), cx(0.2, -1.1)),
            (Point::new(-1.7, -2.2), cx(-1.0, -0.6)),
        ];
        for (p, k) in samples {
            let closed = green_g0(p, k).unwrap();
            let oracle = green_g0_quadrature(p, k, &settings).unwrap();
            assert_relative_eq!(closed.re, oracle.re, max_relative = 1e-8, epsilon = 1e-12);
            assert_relative_eq!(closed.im, oracle.im, max_relative = 1e-8, epsilon = 1e-12);
        }
    }

    #[test]
    fn g0_conjugation_symmetry() {
        // conj(G₀(x₁,x₂,k)) = G₀(x₁,−x₂,−conj(k))
        let cases = [
            (Point::new(0.7, -1.3), cx(1.0, 0.5)),
            (Point::new(1.2, 0.9), cx(-0.4, -0.8)),
        ];
        for (p, k) in cases {
            let lhs = green_g0(p, k).unwrap().conj();
            let rhs = green_g0(Point::new(p.x1, -p.x2), -k.conj()).unwrap();
            assert_relative_eq!(lhs.re, rhs.re, max_relative = 1e-12, epsilon = 1e-15);
            assert_relative_eq!(lhs.im, rhs.im, max_relative = 1e-12, epsilon = 1e-15);
        }
    }

    #[test]
    fn g0_satisfies_its_pde_away_from_origin() {
        // (i∂_{x₂} + ∂²_{x₁} − 2ik∂_{x₁}) G₀ = 0 away from x = 0.
        let p = Point::new(1.0, 1.0);
        let k = cx(0.0, 1.0);
        let h = 1e-3;
        let g = |x1: f64, x2: f64| green_g0(Point::new(x1, x2), k).unwrap();
        let d2x1 = (g(p.x1 + h, p.x2) - 2.0 * g(p.x1, p.x2) + g(p.x1 - h, p.x2)) / (h * h);
        let dx2 = (g(p.x1, p.x2 + h) - g(p.x1, p.x2 - h)) / (2.0 * h);
        let dx1 = (g(p.x1 + h, p.x2) - g(p.x1 - h, p.x2)) / (2.0 * h);
        let residual = Cx::i() * dx2 + d2x1 - 2.0 * Cx::i() * k * dx1;
        assert!(residual.norm() <= 1e-4, "residual {}", residual.norm());
    }

    #[test]
    fn g0_dx1_matches_finite_difference() {
        let p = Point::new(0.9, 1.4);
        let k = cx(0.6, 0.8);
        let h = 1e-5;
        let fd = (green_g0(Point::new(p.x1 + h, p.x2), k).unwrap()
            - green_g0(Point::new(p.x1 - h, p.x2), k).unwrap())
            / (2.0 * h);
        let closed = green_g0_dx1(p, k).unwrap();
        assert_relative_eq!(closed.re, fd.re, max_relative = 1e-7, epsilon = 1e-12);
        assert_relative_eq!(closed.im, fd.im, max_relative = 1e-7, epsilon = 1e-12);
    }

    #[test]
    fn zero_background_jost_values() {
        let bg = BackgroundModel::zero();
        // χ ≡ 1
        assert_eq!(jost_chi(&bg, Point::new(3.0, -2.0), cx(0.0, 2.0)).unwrap(), cx(1.0, 0.0));
        // Φ((0,0), k) = 1
        assert_eq!(jost_phi(&bg, Point::new(0.0, 0.0), cx(0.7, 0.4)).unwrap(), cx(1.0, 0.0));
        // Φ((1,0), i) = e
        let phi = jost_phi(&bg, Point::new(1.0, 0.0), cx(0.0, 1.0)).unwrap();
        assert_relative_eq!(phi.re, std::f64::consts::E, max_relative = 1e-14);
        assert_relative_eq!(phi.im, 0.0, epsilon = 1e-14);
        // |Φ(x,i)|² = e^{2x₁}
        let p = Point::new(0.8, 1.7);
        let phi = jost_phi(&bg, p, cx(0.0, 1.0)).unwrap();
        assert_relative_eq!(phi.norm_sqr(), (2.0 * p.x1).exp(), max_relative = 1e-13);
    }

    #[test]
    fn zero_background_phi_solves_free_equation() {
        // (i∂_{x₂} + ∂²_{x₁}) Φ = 0 for the plane-wave solution.
        let bg = BackgroundModel::zero();
        let k = cx(0.4, -0.9);
        let p = Point::new(0.3, -0.6);
        let h = 1e-4;
        let f = |x1: f64, x2: f64| jost_phi(&bg, Point::new(x1, x2), k).unwrap();
        let d2x1 = (f(p.x1 + h, p.x2) - 2.0 * f(p.x1, p.x2) + f(p.x1 - h, p.x2)) / (h * h);
        let dx2 = (f(p.x1, p.x2 + h) - f(p.x1, p.x2 - h)) / (2.0 * h);
        let residual = Cx::i() * dx2 + d2x1;
        assert!(residual.norm() / f(p.x1, p.x2).norm().max(1e-12) <= 1e-6);
    }

    #[test]
    fn beta_zero_background_closed_values() {
        let bg = BackgroundModel::zero();
        let params = SpectralParameters::new(vec![cx(0.0, 1.0)]);
        // β₁((0,0), 2i) = 1/(i(−i−2i)) = 1/3
        let b = beta(&bg, Point::new(0.0, 0.0), 0, cx(0.0, 2.0), &params).unwrap();
        assert_relative_eq!(b.re, 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(b.im, 0.0, epsilon = 1e-15);
        // Vanishing at the integration base: Im k + Im λ = 3 > 0 → base −∞.
        let far = beta(&bg, Point::new(-30.0, 0.4), 0, cx(0.0, 2.0), &params).unwrap();
        assert!(far.norm() < 1e-25);
        // Reduced form is x-independent for the zero background.
        let r1 = beta_reduced(&bg, Point::new(5.0, -3.0), 0, cx(0.0, 2.0), &params).unwrap();
        assert_relative_eq!(r1.re, 1.0 / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn beta_derivative_is_the_integrand() {
        let bg = BackgroundModel::zero();
        let params = SpectralParameters::new(vec![cx(0.3, 1.0)]);
        let k = cx(-0.2, 0.6);
        let p = Point::new(0.7, -0.4);
        let h = 1e-5;
        let fd = (beta(&bg, Point::new(p.x1 + h, p.x2), 0, k, &params).unwrap()
            - beta(&bg, Point::new(p.x1 - h, p.x2), 0, k, &params).unwrap())
            / (2.0 * h);
        let lam = params.lambdas()[0];
        let integrand = jost_phi(&bg, p, lam).unwrap().conj() * jost_phi(&bg, p, k).unwrap();
        assert_relative_eq!(fd.re, integrand.re, max_relative = 1e-6);
        assert_relative_eq!(fd.im, integrand.im, max_relative = 1e-6);
    }

    #[test]
    fn beta_rejects_excluded_lines() {
        let bg = BackgroundModel::zero();
        let params = SpectralParameters::new(vec![cx(0.0, 1.0)]);
        let err = beta(&bg, Point::new(0.0, 0.0), 0, cx(0.5, -1.0), &params);
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn coupling_matrix_is_hermitian_for_zero_background() {
        let bg = BackgroundModel::zero();
        let params = SpectralParameters::new(vec![cx(0.3, 1.0), cx(-0.6, -0.55)]);
        let b = coupling_integral_matrix(&bg, Point::new(0.4, -1.2), &params).unwrap();
        for l in 0..2 {
            for m in 0..2 {
                let defect = (b[(l, m)] - b[(m, l)].conj()).norm();
                assert!(defect <= 1e-14 * b[(l, m)].norm().max(1.0));
            }
        }
    }

    #[test]
    fn spectral_kernel_zero_and_unsupported() {
        assert_eq!(
            spectral_kernel(&BackgroundModel::zero(), 0.3, -1.2).unwrap(),
            cx(0.0, 0.0)
        );
        let numeric = BackgroundModel::gaussian(
            GaussianBump { amplitude: 0.1, width: [1.0, 1.0], center: [0.0, 0.0] },
            1,
            QuadratureSettings::default(),
        );
        assert!(matches!(
            spectral_kernel(&numeric, 0.3, -1.2),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn background_model_serde_round_trip() {
        let numeric = BackgroundModel::gaussian(
            GaussianBump { amplitude: 0.1, width: [1.0, 2.0], center: [0.5, -0.5] },
            1,
            QuadratureSettings::default(),
        );
        let json = serde_json::to_string(&numeric).unwrap();
        let back: BackgroundModel = serde_json::from_str(&json).unwrap();
        assert_relative_eq!(back.potential_value(Point::new(0.5, -0.5)), 0.1);
        let zero_json = r#"{"type":"zero"}"#;
        let zero: BackgroundModel = serde_json::from_str(zero_json).unwrap();
        assert!(zero.is_zero());
    }
}
