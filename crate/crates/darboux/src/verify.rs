//! Finite-difference and quadrature verification of the differential and
//! integral claims made by the construction: Schrödinger residuals of
//! dressed solutions, the Wronskian-current identity obeyed by solution
//! pairs, the evolution identity of the dressing denominators, and the
//! modified integral equation for the normalized Jost solution.
//!
//! All derivative checks use central differences on a cross stencil with
//! Richardson extrapolation over steps `h` and `h/2`, so the extrapolated
//! residual of an exact solution scales like `h^4` down to the double-
//! precision cancellation floor.

use std::cell::RefCell;
use std::collections::HashMap;

use serde::Serialize;

use crate::background::green_g0_dx1;
use crate::config::{DressingConfig, Point};
use crate::dressing;
use crate::error::{Error, Result};
use crate::linalg::Cx;
use crate::quad::{self, QuadTol};

/// Default base step for finite-difference stencils. The step actually used
/// at a sample point is `base * (1 + |x1| + |x2|)`, balancing truncation
/// against round-off for double-precision exponentials.
pub const DEFAULT_BASE_STEP: f64 = 1e-3;

/// Floor applied to the local magnitude when converting absolute residuals
/// to relative ones.
pub const RELATIVE_FLOOR: f64 = 1e-12;

/// Outcome of a residual sweep over a set of sample points.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    /// Largest absolute residual over the samples.
    pub max_abs: f64,
    /// Largest residual relative to the local term magnitude (floored at
    /// [`RELATIVE_FLOOR`]).
    pub max_rel: f64,
    /// The sample points that were checked.
    pub sample_points: Vec<Point>,
    /// Base step passed to the stencil (scaled per point).
    pub step: f64,
    /// Effective truncation order of the reported residual: 2 for plain
    /// central differences, 4 after Richardson extrapolation.
    pub richardson_order: u32,
}

fn scaled_step(base: f64, p: Point) -> f64 {
    base * (1.0 + p.x1.abs() + p.x2.abs())
}

/// Residual of `(i d/dx2 + d^2/dx1^2 - u) field` at one point and one step,
/// together with the local magnitude scale of the operator terms.
fn schrodinger_residual_at<F, U>(field: &F, u: &U, p: Point, h: f64) -> Result<(Cx, f64)>
where
    F: Fn(Point) -> Result<Cx>,
    U: Fn(Point) -> Result<f64>,
{
    let center = field(p)?;
    let east = field(Point::new(p.x1 + h, p.x2))?;
    let west = field(Point::new(p.x1 - h, p.x2))?;
    let north = field(Point::new(p.x1, p.x2 + h))?;
    let south = field(Point::new(p.x1, p.x2 - h))?;
    let d11 = (east - 2.0 * center + west) / (h * h);
    let d2 = (north - south) / (2.0 * h);
    let potential_term = u(p)? * center;
    let residual = Cx::new(0.0, 1.0) * d2 + d11 - potential_term;
    let scale = d2
        .norm()
        .max(d11.norm())
        .max(potential_term.norm())
        .max(RELATIVE_FLOOR);
    Ok((residual, scale))
}

fn collect_report(
    points: &[Point],
    residuals: &[(Cx, f64)],
    base_step: f64,
    richardson_order: u32,
) -> ResidualReport {
    let mut max_abs = 0.0f64;
    let mut max_rel = 0.0f64;
    for (r, scale) in residuals {
        max_abs = max_abs.max(r.norm());
        max_rel = max_rel.max(r.norm() / scale);
    }
    ResidualReport {
        max_abs,
        max_rel,
        sample_points: points.to_vec(),
        step: base_step,
        richardson_order,
    }
}

/// Schrödinger residual sweep with Richardson extrapolation over steps
/// `(h, h/2)`; the reported residual of an exact solution is fourth order
/// in the step.
pub fn pde_residual<F, U>(field: &F, u: &U, points: &[Point], base_step: f64) -> Result<ResidualReport>
where
    F: Fn(Point) -> Result<Cx>,
    U: Fn(Point) -> Result<f64>,
{
    let mut residuals = Vec::with_capacity(points.len());
    for &p in points {
        let h = scaled_step(base_step, p);
        let (coarse, s1) = schrodinger_residual_at(field, u, p, h)?;
        let (fine, s2) = schrodinger_residual_at(field, u, p, 0.5 * h)?;
        let extrapolated = (4.0 * fine - coarse) / 3.0;
        residuals.push((extrapolated, s1.max(s2)));
    }
    Ok(collect_report(points, &residuals, base_step, 4))
}

/// Plain second-order Schrödinger residual sweep at a single step, used to
/// verify the stencil order experimentally.
pub fn pde_residual_plain<F, U>(
    field: &F,
    u: &U,
    points: &[Point],
    base_step: f64,
) -> Result<ResidualReport>
where
    F: Fn(Point) -> Result<Cx>,
    U: Fn(Point) -> Result<f64>,
{
    let mut residuals = Vec::with_capacity(points.len());
    for &p in points {
        let h = scaled_step(base_step, p);
        residuals.push(schrodinger_residual_at(field, u, p, h)?);
    }
    Ok(collect_report(points, &residuals, base_step, 2))
}

/// Wronskian current of a solution pair at one point:
/// `W = conj(f) d/dx1 g - g d/dx1 conj(f)`, with the derivative taken by a
/// central difference of step `h`.
fn wronskian_at<F, G>(f: &F, g: &G, p: Point, h: f64) -> Result<Cx>
where
    F: Fn(Point) -> Result<Cx>,
    G: Fn(Point) -> Result<Cx>,
{
    let east = Point::new(p.x1 + h, p.x2);
    let west = Point::new(p.x1 - h, p.x2);
    let d1g = (g(east)? - g(west)?) / (2.0 * h);
    let d1fc = (f(east)?.conj() - f(west)?.conj()) / (2.0 * h);
    Ok(f(p)?.conj() * d1g - g(p)? * d1fc)
}

/// Residual of the conservation identity
/// `i d/dx2 (conj(f) g) + d/dx1 W(conj(f), g) = 0` at one point and step.
fn wronskian_residual_at<F, G>(f: &F, g: &G, p: Point, h: f64) -> Result<(Cx, f64)>
where
    F: Fn(Point) -> Result<Cx>,
    G: Fn(Point) -> Result<Cx>,
{
    let north = Point::new(p.x1, p.x2 + h);
    let south = Point::new(p.x1, p.x2 - h);
    let density_north = f(north)?.conj() * g(north)?;
    let density_south = f(south)?.conj() * g(south)?;
    let d2_density = (density_north - density_south) / (2.0 * h);
    let w_east = wronskian_at(f, g, Point::new(p.x1 + h, p.x2), h)?;
    let w_west = wronskian_at(f, g, Point::new(p.x1 - h, p.x2), h)?;
    let d1_current = (w_east - w_west) / (2.0 * h);
    let term_a = Cx::new(0.0, 1.0) * d2_density;
    let residual = term_a + d1_current;
    let scale = term_a.norm().max(d1_current.norm()).max(RELATIVE_FLOOR);
    Ok((residual, scale))
}

/// Sweep of the Wronskian conservation identity over sample points for any
/// pair of solutions of the same dressed equation, Richardson-extrapolated
/// over steps `(h, h/2)`. The identity is independent of the potential, so
/// only the two fields are required.
pub fn wronskian_residual<F, G>(
    f: &F,
    g: &G,
    points: &[Point],
    base_step: f64,
) -> Result<ResidualReport>
where
    F: Fn(Point) -> Result<Cx>,
    G: Fn(Point) -> Result<Cx>,
{
    let mut residuals = Vec::with_capacity(points.len());
    for &p in points {
        let h = scaled_step(base_step, p);
        let (coarse, s1) = wronskian_residual_at(f, g, p, h)?;
        let (fine, s2) = wronskian_residual_at(f, g, p, 0.5 * h)?;
        residuals.push(((4.0 * fine - coarse) / 3.0, s1.max(s2)));
    }
    Ok(collect_report(points, &residuals, base_step, 4))
}

/// Relative residual of the evolution identity of the dressing denominator:
/// `i d/dx2 Delta_level = -W(conj(phi), phi)` where `phi` is the generator
/// of the `level`-th dressing step (the product of the denominator and the
/// last column solution of the leading sub-configuration).  The residual is
/// measured relative to the larger of the two identity terms and `|phi|^2`,
/// so configurations where both terms vanish identically still report a
/// meaningful (near-zero) value.
pub fn delta_evolution_residual(
    config: &DressingConfig,
    p: Point,
    level: usize,
    base_step: f64,
) -> Result<f64> {
    if level == 0 || level > config.len() {
        return Err(Error::InvalidConfig(format!(
            "denominator level {level} out of range 1..={}",
            config.len()
        )));
    }
    let sub = config.leading(level);
    let phi = |q: Point| -> Result<Cx> {
        let delta = dressing::delta_n(config, q, level)?;
        let g = dressing::dressed_g(&sub, q, level - 1)?;
        Ok(delta * g)
    };
    // Normalize by the identity terms or, when both vanish identically (as
    // for a single stationary dressing step), by the natural magnitude of
    // the current, |phi|^2.
    let generator_scale = phi(p)?.norm_sqr();
    let residual_at = |h: f64| -> Result<(Cx, f64)> {
        let delta_north = dressing::delta_n(config, Point::new(p.x1, p.x2 + h), level)?;
        let delta_south = dressing::delta_n(config, Point::new(p.x1, p.x2 - h), level)?;
        let d2_delta = (delta_north - delta_south) / (2.0 * h);
        let w = wronskian_at(&phi, &phi, p, h)?;
        let term_a = Cx::new(0.0, d2_delta);
        let scale = term_a
            .norm()
            .max(w.norm())
            .max(generator_scale)
            .max(RELATIVE_FLOOR);
        Ok((term_a + w, scale))
    };
    let h = scaled_step(base_step, p);
    let (coarse, s1) = residual_at(h)?;
    let (fine, s2) = residual_at(0.5 * h)?;
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    Ok(extrapolated.norm() / s1.max(s2))
}

/// Truncation windows and quadrature tolerances for the modified integral
/// equation. The equation prescribes an outer half-line integral in the
/// first coordinate followed by an integral over the whole plane; the plane
/// integral is truncated to `|x1'| <= x1_half_width` (the dressed potential
/// decays exponentially in that direction) and
/// `|x2' - x2| <= x2_half_width` (the kernel decays only algebraically, so
/// this window dominates the residual).
#[derive(Debug, Clone)]
pub struct IntegralWindows {
    /// Half-width of the inner window in the first coordinate.
    pub x1_half_width: f64,
    /// Half-width of the inner window in the second coordinate.
    pub x2_half_width: f64,
    /// Largest kernel phase admitted at the inner truncation point. Toward
    /// the diagonal `x2' = x2` the kernel derivative oscillates with phase
    /// `(y1-x1')^2 / (4 (x2-x2'))` and an amplitude envelope growing like
    /// the -3/2 power of the distance, so point quadrature of the
    /// difference-form integrand is cut off once the phase exceeds this cap.
    /// Past the cutoff the already-subtracted integrand is bounded and
    /// self-cancelling; the neglected contribution shrinks like the inverse
    /// square root of the cap.
    pub phase_cap: f64,
    /// Smallest inner truncation point in the substituted variable
    /// `s = sqrt(|x2 - x2'|)`, protecting the kernel evaluation near the
    /// degenerate corner where both coordinates coincide.
    pub s_floor: f64,
    /// Tolerance of the outer half-line quadrature.
    pub outer: QuadTol,
    /// Tolerance of the middle (first-coordinate) quadrature.
    pub middle: QuadTol,
    /// Tolerance of the innermost (second-coordinate) quadrature.
    pub inner: QuadTol,
}

impl Default for IntegralWindows {
    fn default() -> Self {
        IntegralWindows {
            x1_half_width: 16.0,
            x2_half_width: 400.0,
            phase_cap: 200.0,
            s_floor: 1e-3,
            outer: QuadTol { abs: 3e-6, rel: 1e-6, max_subdivisions: 400 },
            middle: QuadTol { abs: 1e-7, rel: 1e-6, max_subdivisions: 400 },
            inner: QuadTol { abs: 1e-6, rel: 1e-4, max_subdivisions: 400 },
        }
    }
}

/// Integral of the kernel derivative over the whole second-coordinate line
/// at fixed first-coordinate offset `xi` (its zero-frequency mode). From
/// the kernel equation, the mode `K` satisfies `K' - 2ik K = delta(xi)`
/// with `K -> 0` toward `-sgn(Im k) * infinity` (the direction in which the
/// kernel itself vanishes), which forces
/// `K(xi) = theta(xi) exp(2ik xi)` for `Im k > 0` and
/// `K(xi) = -theta(-xi) exp(2ik xi)` for `Im k < 0`.
fn kernel_zero_mode(xi: f64, k: Cx) -> Cx {
    if k.im > 0.0 {
        if xi > 0.0 { (2.0 * Cx::i() * k * xi).exp() } else { Cx::new(0.0, 0.0) }
    } else if xi < 0.0 {
        -(2.0 * Cx::i() * k * xi).exp()
    } else {
        Cx::new(0.0, 0.0)
    }
}

/// Residual of the modified integral equation for the normalized dressed
/// Jost solution with the default windows; see
/// [`integral_equation_residual_with`].
pub fn integral_equation_residual(config: &DressingConfig, p: Point, k: Cx) -> Result<Cx> {
    integral_equation_residual_with(config, p, k, &IntegralWindows::default())
}

/// Residual of the modified integral equation: the normalized solution minus
/// one minus the prescribed iterated integral of the kernel derivative times
/// the potential times the solution. The outer integration runs over the
/// half line ending at `x1` whose infinite end carries the sign opposite to
/// `Im k`; the order of the iterated integrals is part of the statement and
/// is preserved (no interchange with the outer half-line integral).
///
/// The inner plane integral converges only conditionally toward the diagonal
/// `x2' = x2`, where the kernel derivative oscillates too fast for point
/// quadrature. It is therefore split exactly into the zero-frequency mode of
/// the kernel times the source frozen at `x2` (closed form, see
/// [`kernel_zero_mode`]) plus the difference term, whose integrand gains a
/// factor of the distance to the diagonal and is absolutely integrable.
///
/// The split is exact when the source `u_N chi_N` does not depend on the
/// second coordinate (soliton lines with purely imaginary parameters), and
/// the windowed residual then converges to quadrature precision. A line
/// with nonzero real part sweeps across the plane and carries source mass
/// out to infinity along the second coordinate; the out-of-window part of
/// that mass is an irreducible truncation error that no finite rectangular
/// window removes, so for such configurations the residual is only a
/// smoke-level bound.
pub fn integral_equation_residual_with(
    config: &DressingConfig,
    p: Point,
    k: Cx,
    windows: &IntegralWindows,
) -> Result<Cx> {
    dressing::check_spectral_argument(config, k)?;
    let chi_here = dressing::dressed_chi(config, p, k)?;

    // Product u_N(x') chi_N(x',k) over the inner-plane nodes. Nodes on the
    // frozen row x2' = x2 recur across the outer integration, so only that
    // row is memoized; off-row nodes are transient. Errors inside quadrature
    // closures are stashed and re-raised after the non-finite guard trips.
    let cache: RefCell<HashMap<u64, Cx>> = RefCell::new(HashMap::new());
    let stashed: RefCell<Option<Error>> = RefCell::new(None);
    let nan = Cx::new(f64::NAN, f64::NAN);
    let weighted_solution = |x1p: f64, x2p: f64| -> Cx {
        let on_frozen_row = x2p == p.x2;
        if on_frozen_row {
            if let Some(v) = cache.borrow().get(&x1p.to_bits()) {
                return *v;
            }
        }
        let q = Point::new(x1p, x2p);
        let value = match (dressing::potential(config, q), dressing::dressed_chi(config, q, k)) {
            (Ok(u), Ok(chi)) => u * chi,
            (Err(e), _) | (_, Err(e)) => {
                stashed.borrow_mut().get_or_insert(e);
                nan
            }
        };
        if on_frozen_row {
            cache.borrow_mut().insert(x1p.to_bits(), value);
        }
        value
    };

    // Zero-mode part: the kernel integrated over the whole second coordinate
    // in closed form against the source frozen at x2. The mode is one-sided
    // in the first-coordinate offset, so only the matching sub-interval of
    // the window contributes.
    let w1 = windows.x1_half_width;
    let zero_mode_part = |y1: f64| -> Cx {
        let (lo, hi) = if k.im > 0.0 { (-w1, y1.min(w1)) } else { (y1.max(-w1), w1) };
        if hi <= lo {
            return Cx::new(0.0, 0.0);
        }
        let integrand = |x1p: f64| kernel_zero_mode(y1 - x1p, k) * weighted_solution(x1p, p.x2);
        match quad::integrate(&integrand, lo, hi, &windows.middle) {
            Ok(r) => r.value,
            Err(e) => {
                stashed.borrow_mut().get_or_insert(e);
                nan
            }
        }
    };

    // Difference part, innermost integral: second coordinate in the variable
    // s with x2' = x2 -/+ s^2, which flattens the kernel envelope toward the
    // diagonal. The lower truncation keeps the kernel phase xi^2/(4 s^2)
    // below the configured cap; below it the subtracted integrand is bounded
    // and self-cancelling. Each soliton line sweeps across the plane with
    // slope -2 Re(lambda_j), so within the second-coordinate window the
    // source occupies a tilted strip; the first-coordinate window of the
    // difference part is widened by the swept width to cover it.
    let s_max = windows.x2_half_width.sqrt();
    let phase_scale = 0.5 / windows.phase_cap.sqrt();
    let sweep = 2.0
        * config.params().lambdas().iter().map(|l| l.re.abs()).fold(0.0, f64::max)
        * windows.x2_half_width;
    let w1_swept = w1 + sweep;
    let difference_inner = |y1: f64, x1p: f64| -> Cx {
        let xi = y1 - x1p;
        let frozen = weighted_solution(x1p, p.x2);
        let s_lo = (xi.abs() * phase_scale).max(windows.s_floor);
        if s_lo >= s_max {
            return Cx::new(0.0, 0.0);
        }
        let mut total = Cx::new(0.0, 0.0);
        for side in [1.0f64, -1.0] {
            let integrand = |s: f64| -> Cx {
                let dx2 = side * s * s;
                let delta_psi = weighted_solution(x1p, p.x2 - dx2) - frozen;
                if delta_psi == Cx::new(0.0, 0.0) {
                    return delta_psi;
                }
                match green_g0_dx1(Point::new(xi, dx2), k) {
                    Ok(gp) => 2.0 * s * gp * delta_psi,
                    Err(e) => {
                        stashed.borrow_mut().get_or_insert(e);
                        nan
                    }
                }
            };
            match quad::integrate(&integrand, s_lo, s_max, &windows.inner) {
                Ok(r) => total += r.value,
                Err(e) => {
                    stashed.borrow_mut().get_or_insert(e);
                    return nan;
                }
            }
        }
        total
    };

    let plane_integral = |y1: f64| -> Cx {
        let integrand = |x1p: f64| difference_inner(y1, x1p);
        // The difference part is a small correction, so it reuses the looser
        // innermost tolerance rather than the zero-mode one.
        let difference = match quad::integrate(&integrand, -w1_swept, w1_swept, &windows.inner) {
            Ok(r) => r.value,
            Err(e) => {
                stashed.borrow_mut().get_or_insert(e);
                nan
            }
        };
        zero_mode_part(y1) + difference
    };

    let outer = quad::integrate_from_signed_infinity(
        &plane_integral,
        k.im.signum(),
        p.x1,
        &windows.outer,
    );
    if let Some(e) = stashed.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    Ok(chi_here - Cx::new(1.0, 0.0) - outer.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::background;
    use crate::config::{CouplingMatrix, SpectralParameters};
    use crate::golden;
    use crate::linalg::CMatrix;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn plane_wave(k: Cx) -> impl Fn(Point) -> Result<Cx> {
        move |p| Ok(background::plane_wave_exponent(p, k).exp())
    }

    fn zero_potential(_: Point) -> Result<f64> {
        Ok(0.0)
    }

    fn random_points(seed: u64, count: usize, half: f64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| Point::new(rng.random_range(-half..half), rng.random_range(-half..half)))
            .collect()
    }

    #[test]
    fn plane_wave_satisfies_free_equation() {
        let field = plane_wave(cx(0.6, 0.8));
        let report =
            pde_residual(&field, &zero_potential, &random_points(11, 10, 2.0), DEFAULT_BASE_STEP)
                .unwrap();
        assert!(report.max_rel <= 1e-8, "free residual {:.3e}", report.max_rel);
        assert_eq!(report.richardson_order, 4);
    }

    #[test]
    fn dressed_solutions_satisfy_schrodinger_equation() {
        let config = golden::two_soliton();
        let u = |p: Point| dressing::potential(&config, p);
        let k = cx(0.35, 0.45);
        let jost = |p: Point| dressing::dressed_jost(&config, p, k);
        let points = random_points(12, 100, 2.5);
        let report = pde_residual(&jost, &u, &points, DEFAULT_BASE_STEP).unwrap();
        assert!(report.max_rel <= 1e-6, "dressed Jost residual {:.3e}", report.max_rel);

        let column = |p: Point| dressing::dressed_g(&config, p, 1);
        let report = pde_residual(&column, &u, &points, DEFAULT_BASE_STEP).unwrap();
        assert!(report.max_rel <= 1e-6, "column-solution residual {:.3e}", report.max_rel);
    }

    #[test]
    fn stencil_is_second_order_and_extrapolation_helps() {
        let field = plane_wave(cx(0.9, 0.5));
        let points = [Point::new(0.3, -0.4), Point::new(-0.8, 0.6)];
        let base = 1e-2;
        let coarse = pde_residual_plain(&field, &zero_potential, &points, base).unwrap();
        let fine = pde_residual_plain(&field, &zero_potential, &points, 0.5 * base).unwrap();
        let ratio = coarse.max_abs / fine.max_abs;
        assert!(
            (3.5..=4.5).contains(&ratio),
            "stencil order ratio {ratio:.3} outside the second-order window"
        );
        let extrapolated = pde_residual(&field, &zero_potential, &points, base).unwrap();
        assert!(
            extrapolated.max_abs <= coarse.max_abs / 4.0,
            "extrapolation gained less than a factor 4: {:.3e} vs {:.3e}",
            extrapolated.max_abs,
            coarse.max_abs
        );
    }

    #[test]
    fn wronskian_identity_for_plane_waves() {
        let f = plane_wave(cx(0.6, 0.8));
        let g = plane_wave(cx(-0.3, 0.5));
        let report =
            wronskian_residual(&f, &g, &random_points(13, 8, 2.0), DEFAULT_BASE_STEP).unwrap();
        assert!(report.max_rel <= 1e-8, "plane-wave Wronskian residual {:.3e}", report.max_rel);
    }

    #[test]
    fn wronskian_identity_for_dressed_pair() {
        let config = golden::two_soliton();
        let k = cx(-0.45, 0.6);
        let f = |p: Point| dressing::dressed_f_solution(&config, p, k);
        let g = |p: Point| dressing::dressed_g(&config, p, 1);
        let report =
            wronskian_residual(&f, &g, &random_points(14, 8, 1.5), DEFAULT_BASE_STEP).unwrap();
        assert!(report.max_rel <= 1e-5, "dressed Wronskian residual {:.3e}", report.max_rel);
    }

    #[test]
    fn denominator_evolution_identity_holds() {
        let one = golden::one_soliton();
        let two = golden::two_soliton();
        let three = golden::three_soliton();
        for (config, level) in [(&one, 1), (&two, 1), (&two, 2), (&three, 3)] {
            for &(x1, x2) in &[(0.2, -0.3), (-0.9, 0.7), (1.1, 0.4)] {
                let residual = delta_evolution_residual(
                    config,
                    Point::new(x1, x2),
                    level,
                    DEFAULT_BASE_STEP,
                )
                .unwrap();
                assert!(
                    residual <= 1e-5,
                    "denominator evolution residual {residual:.3e} at level {level}, ({x1}, {x2})"
                );
            }
        }
    }

    #[test]
    fn integral_equation_residual_is_zero_for_undressed_configuration() {
        let config = DressingConfig::new(
            SpectralParameters::new(Vec::new()),
            CouplingMatrix::new(CMatrix::zeros(0, 0)),
            crate::background::BackgroundModel::zero(),
        )
        .unwrap();
        let residual =
            integral_equation_residual(&config, Point::new(0.4, -0.7), cx(0.4, 0.8)).unwrap();
        assert_eq!(residual, cx(0.0, 0.0));
    }

    #[test]
    fn integral_equation_residual_small_for_one_soliton() {
        let config = golden::one_soliton();
        // Both half planes of the spectral parameter, exercising both
        // orientations of the outer half line and of the kernel zero mode.
        for k in [cx(0.4, 0.8), cx(0.4, -0.8)] {
            let residual =
                integral_equation_residual(&config, Point::new(0.8, 0.5), k).unwrap();
            assert!(
                residual.norm() <= 1e-3,
                "integral-equation residual {:.3e} at the default window, k = {k}",
                residual.norm()
            );
        }
    }

    #[test]
    fn integral_equation_residual_shrinks_under_window_doubling() {
        // With a narrow first-coordinate window the truncated potential
        // tails dominate the residual, so doubling the window must shrink it.
        let config = golden::one_soliton();
        let p = Point::new(0.8, 0.5);
        let k = cx(0.4, 0.8);
        let mut magnitudes = Vec::new();
        for width in [2.0, 4.0, 8.0] {
            let windows = IntegralWindows { x1_half_width: width, ..IntegralWindows::default() };
            let residual = integral_equation_residual_with(&config, p, k, &windows).unwrap();
            magnitudes.push(residual.norm());
        }
        assert!(
            magnitudes[0] > magnitudes[1] && magnitudes[1] > magnitudes[2],
            "window doubling did not shrink the residual: {magnitudes:?}"
        );
    }

    #[test]
    fn integral_equation_residual_bounded_for_moving_soliton() {
        // A soliton line with nonzero real part sweeps across the plane, so
        // the source depends on the second coordinate and the difference
        // term of the split does real work. Such a line carries mass out to
        // infinity along the second coordinate, so no finite window captures
        // the conditionally convergent plane integral accurately; this is a
        // smoke-level bound on the swept-tail truncation error, not a
        // convergence statement.
        let config = DressingConfig::new(
            SpectralParameters::new(vec![cx(0.3, 1.0)]),
            CouplingMatrix::new(CMatrix::from_row_slice(1, 1, &[cx(1.0, 0.0)])),
            crate::background::BackgroundModel::zero(),
        )
        .unwrap();
        let windows = IntegralWindows {
            x1_half_width: 8.0,
            x2_half_width: 2.0,
            ..IntegralWindows::default()
        };
        let residual =
            integral_equation_residual_with(&config, Point::new(0.8, 0.5), cx(0.55, 0.8), &windows)
                .unwrap();
        assert!(
            residual.norm() <= 0.5,
            "moving-soliton residual {:.3e} exceeds the swept-tail bound",
            residual.norm()
        );
    }
}
