//! Domain types of the dressing construction and their validation.
//!
//! A dressed potential family is described by the spectral parameters
//! `lambda_1..lambda_N` (complex, nonreal, pairwise distinct), a Hermitian
//! coupling matrix `C` whose signed submatrices satisfy the definiteness
//! conditions `C(+) > 0` and `-C(-) > 0`, and a background model supplying
//! the seed Jost solution. Validation reports every violated invariant with
//! enough context to fix the input.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::background::BackgroundModel;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Cx};

/// Relative eigenvalue floor for the definiteness test of the signed
/// coupling submatrices: a submatrix counts as definite when its smallest
/// (sign-adjusted) eigenvalue exceeds `DEFINITENESS_TOL * ||C||`.
pub const DEFINITENESS_TOL: f64 = 1e-10;

/// A point of the real plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    /// First coordinate (the derivative/integration direction of the construction).
    pub x1: f64,
    /// Second coordinate (the evolution direction of the operator).
    pub x2: f64,
}

impl Point {
    /// Convenience constructor.
    pub fn new(x1: f64, x2: f64) -> Self {
        Point { x1, x2 }
    }
}

/// Ordered list of spectral parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralParameters {
    lambdas: Vec<Cx>,
}

impl SpectralParameters {
    /// Wrap a parameter list; invariants are checked by [`validate_config`].
    pub fn new(lambdas: Vec<Cx>) -> Self {
        SpectralParameters { lambdas }
    }

    /// The parameters in order.
    pub fn lambdas(&self) -> &[Cx] {
        &self.lambdas
    }

    /// Number of parameters N.
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    /// True when the list is empty (the undressed case N = 0).
    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// True iff `|Im lambda_1| > |Im lambda_2| > ...` strictly.
    ///
    /// Required only by the step-by-step recursion oracle; the closed
    /// determinant formulas are permutation invariant and accept any order.
    pub fn strictly_ordered(&self) -> bool {
        self.lambdas.windows(2).all(|w| w[0].im.abs() > w[1].im.abs())
    }

    /// True iff all real parts are pairwise distinct, so every soliton has
    /// its own ray direction and the large-time ray limits exist.
    pub fn generic_rays(&self) -> bool {
        let n = self.lambdas.len();
        for l in 0..n {
            for m in (l + 1)..n {
                if self.lambdas[l].re == self.lambdas[m].re {
                    return false;
                }
            }
        }
        true
    }

    /// Indices `l` with `sign * Im lambda_l > 0`, in order.
    pub fn signed_indices(&self, sign: f64) -> Vec<usize> {
        (0..self.lambdas.len())
            .filter(|&l| sign * self.lambdas[l].im > 0.0)
            .collect()
    }
}

/// Hermitian coupling matrix of the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    c: CMatrix,
}

impl CouplingMatrix {
    /// Wrap a coupling matrix; invariants are checked by [`validate_config`].
    pub fn new(c: CMatrix) -> Self {
        CouplingMatrix { c }
    }

    /// Identity coupling of size n (always admissible for parameters with
    /// positive imaginary parts).
    pub fn identity(n: usize) -> Self {
        CouplingMatrix { c: DMatrix::identity(n, n) }
    }

    /// The matrix itself.
    pub fn matrix(&self) -> &CMatrix {
        &self.c
    }

    /// Entry accessor.
    pub fn entry(&self, l: usize, m: usize) -> Cx {
        self.c[(l, m)]
    }

    /// Dimension.
    pub fn len(&self) -> usize {
        self.c.nrows()
    }

    /// True when 0x0.
    pub fn is_empty(&self) -> bool {
        self.c.nrows() == 0
    }
}

/// Restriction of the coupling matrix to the indices `l` with
/// `sign * Im lambda_l > 0`; may be empty (empty determinant = 1 by convention).
pub fn signed_submatrix(coupling: &CouplingMatrix, params: &SpectralParameters, sign: f64) -> CMatrix {
    linalg::submatrix(coupling.matrix(), &params.signed_indices(sign))
}

/// Severity of a validation finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    /// The configuration is unusable.
    Error,
    /// The configuration is usable but some operations will refuse it or
    /// numerical margins are thin.
    Warning,
}

/// A single validation finding.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `C[l,m] != conj(C[m,l])` beyond tolerance.
    NonHermitian { l: usize, m: usize, defect: f64 },
    /// A signed submatrix fails its definiteness condition.
    DefinitenessFailure { sign: i8, indices: Vec<usize>, min_eigenvalue: f64 },
    /// A signed submatrix passes, but within 10x of the tolerance floor.
    DefinitenessMarginal { sign: i8, indices: Vec<usize>, min_eigenvalue: f64 },
    /// `Im lambda_l = 0`.
    ZeroImaginaryPart { index: usize },
    /// Two parameters coincide.
    CoincidentLambdas { l: usize, m: usize },
    /// Two parameters share a real part: ray-asymptotics operations refuse
    /// such configurations (the ray limit does not exist), everything else accepts.
    CoincidentRealParts { l: usize, m: usize },
}

impl Violation {
    /// Severity classification of this finding.
    pub fn severity(&self) -> Severity {
        match self {
            Violation::CoincidentRealParts { .. } | Violation::DefinitenessMarginal { .. } => {
                Severity::Warning
            }
            _ => Severity::Error,
        }
    }

    /// Human-readable description.
    pub fn describe(&self) -> String {
        match self {
            Violation::NonHermitian { l, m, defect } => {
                format!("hermiticity violated at entry ({l},{m}): defect {defect:.3e}")
            }
            Violation::DefinitenessFailure { sign, indices, min_eigenvalue } => {
                let name = if *sign > 0 { "C(+)" } else { "-C(-)" };
                format!(
                    "{name} not positive definite over indices {indices:?}: \
                     min eigenvalue {min_eigenvalue:.3e}"
                )
            }
            Violation::DefinitenessMarginal { sign, indices, min_eigenvalue } => {
                let name = if *sign > 0 { "C(+)" } else { "-C(-)" };
                format!(
                    "{name} definite but marginal over indices {indices:?}: \
                     min eigenvalue {min_eigenvalue:.3e} within 10x of the tolerance floor"
                )
            }
            Violation::ZeroImaginaryPart { index } => {
                format!("lambda_{index} has zero imaginary part")
            }
            Violation::CoincidentLambdas { l, m } => {
                format!("lambda_{l} and lambda_{m} coincide")
            }
            Violation::CoincidentRealParts { l, m } => {
                format!(
                    "lambda_{l} and lambda_{m} share a real part: \
                     ray-limit operations will refuse this configuration"
                )
            }
        }
    }
}

/// Outcome of configuration validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    /// True iff no error-severity findings are present (warnings allowed).
    pub ok: bool,
    /// All findings, errors first.
    pub violations: Vec<Violation>,
}

/// Validate spectral parameters against a coupling matrix.
///
/// Dimension mismatch and a non-square coupling are hard errors; everything
/// else is reported as findings. The definiteness of the signed submatrices
/// is tested through an eigenvalue floor of `DEFINITENESS_TOL * ||C||`
/// (with `||C||` the largest entry modulus, floored at 1), and passing
/// within a factor 10 of the floor is flagged as a warning.
pub fn validate_config(
    params: &SpectralParameters,
    coupling: &CouplingMatrix,
) -> Result<ValidationReport> {
    let c = coupling.matrix();
    if c.nrows() != c.ncols() {
        return Err(Error::InvalidConfig(format!(
            "coupling matrix is not square: {}x{}",
            c.nrows(),
            c.ncols()
        )));
    }
    if c.nrows() != params.len() {
        return Err(Error::InvalidConfig(format!(
            "dimension mismatch: {} spectral parameters vs {}x{} coupling",
            params.len(),
            c.nrows(),
            c.ncols()
        )));
    }

    let mut violations = Vec::new();
    let lambdas = params.lambdas();
    let n = params.len();

    for (index, lam) in lambdas.iter().enumerate() {
        if lam.im == 0.0 {
            violations.push(Violation::ZeroImaginaryPart { index });
        }
    }
    for l in 0..n {
        for m in (l + 1)..n {
            if lambdas[l] == lambdas[m] {
                violations.push(Violation::CoincidentLambdas { l, m });
            } else if lambdas[l].re == lambdas[m].re {
                violations.push(Violation::CoincidentRealParts { l, m });
            }
        }
    }

    let scale = linalg::max_norm(c).max(1.0);
    for l in 0..n {
        for m in l..n {
            let defect = (c[(l, m)] - c[(m, l)].conj()).norm();
            if defect > 1e-12 * scale {
                violations.push(Violation::NonHermitian { l, m, defect });
            }
        }
    }

    for sign in [1.0f64, -1.0] {
        let indices = params.signed_indices(sign);
        if indices.is_empty() {
            continue;
        }
        // Test sign * C over the selected block: positive definiteness of
        // C(+) for sign = +1 and of -C(-) for sign = -1.
        let sub = linalg::submatrix(c, &indices).map(|z| z * sign);
        let eigen = linalg::hermitian_eigenvalues(&sub);
        let min_eigenvalue = eigen.first().copied().unwrap_or(f64::INFINITY);
        let floor = DEFINITENESS_TOL * scale;
        if min_eigenvalue <= floor {
            violations.push(Violation::DefinitenessFailure {
                sign: sign as i8,
                indices,
                min_eigenvalue,
            });
        } else if min_eigenvalue <= 10.0 * floor {
            violations.push(Violation::DefinitenessMarginal {
                sign: sign as i8,
                indices,
                min_eigenvalue,
            });
        }
    }

    violations.sort_by_key(|v| match v.severity() {
        Severity::Error => 0,
        Severity::Warning => 1,
    });
    let ok = violations.iter().all(|v| v.severity() != Severity::Error);
    Ok(ValidationReport { ok, violations })
}

/// A complete, validated description of one dressed potential family.
#[derive(Debug, Clone)]
pub struct DressingConfig {
    params: SpectralParameters,
    coupling: CouplingMatrix,
    background: BackgroundModel,
}

impl DressingConfig {
    /// Build and validate a configuration. Warnings are tolerated; any
    /// error-severity finding rejects the input.
    pub fn new(
        params: SpectralParameters,
        coupling: CouplingMatrix,
        background: BackgroundModel,
    ) -> Result<Self> {
        let report = validate_config(&params, &coupling)?;
        if !report.ok {
            let list: Vec<String> = report
                .violations
                .iter()
                .filter(|v| v.severity() == Severity::Error)
                .map(|v| v.describe())
                .collect();
            return Err(Error::InvalidConfig(list.join("; ")));
        }
        Ok(DressingConfig { params, coupling, background })
    }

    /// Spectral parameters.
    pub fn params(&self) -> &SpectralParameters {
        &self.params
    }

    /// Coupling matrix.
    pub fn coupling(&self) -> &CouplingMatrix {
        &self.coupling
    }

    /// Background model.
    pub fn background(&self) -> &BackgroundModel {
        &self.background
    }

    /// Number of dressing steps N.
    pub fn len(&self) -> usize {
        self.params.len()
    }

    /// True for the undressed configuration N = 0.
    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// Sub-configuration over the first `n` parameters (leading coupling block).
    ///
    /// Principal blocks of admissible couplings are admissible, so no
    /// re-validation is needed.
    pub fn leading(&self, n: usize) -> DressingConfig {
        assert!(n <= self.len(), "leading({n}) out of range for N={}", self.len());
        let lambdas = self.params.lambdas()[..n].to_vec();
        let c = self.coupling.matrix().view((0, 0), (n, n)).into_owned();
        DressingConfig {
            params: SpectralParameters::new(lambdas),
            coupling: CouplingMatrix::new(c),
            background: self.background.clone(),
        }
    }

    /// Configuration with parameters and coupling rows/columns permuted by
    /// `perm` (entry `j` of the result is entry `perm[j]` of the original).
    pub fn permuted(&self, perm: &[usize]) -> Result<DressingConfig> {
        let n = self.len();
        if perm.len() != n {
            return Err(Error::InvalidConfig("permutation length mismatch".into()));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidConfig("not a permutation".into()));
            }
            seen[p] = true;
        }
        let lambdas: Vec<Cx> = perm.iter().map(|&p| self.params.lambdas()[p]).collect();
        let c = CMatrix::from_fn(n, n, |l, m| self.coupling.entry(perm[l], perm[m]));
        DressingConfig::new(
            SpectralParameters::new(lambdas),
            CouplingMatrix::new(c),
            self.background.clone(),
        )
    }
}

/// Index-set selector for the Cauchy-type minors of the spectral parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinorSelector {
    /// Indices `l` with `sign * Im lambda_l > 0` (the global signed minors).
    Signed(f64),
    /// Ray variant: indices `l != j` with
    /// `direction * Im lambda_l * (Re lambda_l - Re lambda_j) > 0`.
    Ray { j: usize, direction: f64 },
    /// Ray variant additionally keeping the center index `j` itself.
    RayWithCenter { j: usize, direction: f64 },
}

impl MinorSelector {
    /// Indices selected from `params`, in order.
    pub fn indices(&self, params: &SpectralParameters) -> Vec<usize> {
        let lambdas = params.lambdas();
        match *self {
            MinorSelector::Signed(sign) => params.signed_indices(sign),
            MinorSelector::Ray { j, direction } | MinorSelector::RayWithCenter { j, direction } => {
                let keep_center = matches!(self, MinorSelector::RayWithCenter { .. });
                (0..lambdas.len())
                    .filter(|&l| {
                        if l == j {
                            keep_center
                        } else {
                            direction * lambdas[l].im * (lambdas[l].re - lambdas[j].re) > 0.0
                        }
                    })
                    .collect()
            }
        }
    }
}

/// Determinant of the Cauchy-type matrix with entries `-i/(conj(λ_l) - λ_m)`
/// over the index set picked by `selector`, evaluated through the closed
/// product formula
/// `∏_l (2 Im λ_l)^{-1} · ∏_{l<m} |λ_l-λ_m|² / |conj(λ_l)-λ_m|²`
/// (empty selection → 1). The brute-force determinant agrees to 1e−12
/// relative (tested); coincident parameters raise an error.
pub fn lambda_minor_det(params: &SpectralParameters, selector: MinorSelector) -> Result<f64> {
    let indices = selector.indices(params);
    let selected: Vec<Cx> = indices.iter().map(|&l| params.lambdas()[l]).collect();
    // Validates that no entry denominator conj(λ_l) - λ_m vanishes.
    linalg::cauchy_matrix(&selected)?;
    Ok(linalg::cauchy_det_product(&selected))
}

/// Chain of real constants `c_1..c_N` reproduced from the coupling matrix:
/// `c_{n+1} = det C_{n+1}(sgn Im lambda_{n+1}) / det C_n(sgn Im lambda_{n+1})`,
/// where `C_n(y)` is the signed submatrix of the leading n x n coupling block.
///
/// Every returned value satisfies the positivity condition
/// `Im lambda_n * c_n > 0`; a violation (possible only through numerical
/// degeneracy) is reported as an error.
pub fn c_chain(config: &DressingConfig) -> Result<Vec<f64>> {
    let n = config.len();
    let lambdas = config.params().lambdas();
    let c = config.coupling().matrix();
    let mut out = Vec::with_capacity(n);
    for step in 1..=n {
        let y = lambdas[step - 1].im;
        let select = |upto: usize| -> Vec<usize> {
            (0..upto).filter(|&l| y * lambdas[l].im > 0.0).collect()
        };
        let num = linalg::det(&linalg::submatrix(c, &select(step)));
        let den = linalg::det(&linalg::submatrix(c, &select(step - 1)));
        if den.norm() < 1e-300 {
            return Err(Error::InvalidConfig(format!(
                "degenerate coupling: signed minor determinant vanishes at step {step}"
            )));
        }
        let ratio = num / den;
        if ratio.im.abs() > 1e-9 * ratio.re.abs().max(1.0) {
            return Err(Error::Numerical(format!(
                "constant chain produced a non-real value at step {step}: {ratio}"
            )));
        }
        let c_n = ratio.re;
        if y * c_n <= 0.0 {
            return Err(Error::Numerical(format!(
                "constant chain violates the positivity condition at step {step}: \
                 Im lambda = {y}, c = {c_n}"
            )));
        }
        out.push(c_n);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::background::BackgroundModel;
    use approx::assert_relative_eq;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn params(l: &[Cx]) -> SpectralParameters {
        SpectralParameters::new(l.to_vec())
    }

    #[test]
    fn one_soliton_validates() {
        let p = params(&[cx(0.0, 1.0)]);
        let c = CouplingMatrix::identity(1);
        let report = validate_config(&p, &c).unwrap();
        assert!(report.ok, "{:?}", report.violations);
    }

    #[test]
    fn negative_unit_coupling_fails_definiteness() {
        let p = params(&[cx(0.0, 1.0)]);
        let c = CouplingMatrix::new(CMatrix::from_row_slice(1, 1, &[cx(-1.0, 0.0)]));
        let report = validate_config(&p, &c).unwrap();
        assert!(!report.ok);
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::DefinitenessFailure { sign: 1, .. }
        )));
    }

    #[test]
    fn mixed_sign_pair_with_offdiagonal_coupling_validates() {
        // Signed blocks are the 1x1 matrices [1] and -[-1]: both definite.
        let p = params(&[cx(1.0, 1.0), cx(2.0, -0.5)]);
        let c = CouplingMatrix::new(CMatrix::from_row_slice(
            2,
            2,
            &[cx(1.0, 0.0), cx(0.0, 0.3), cx(0.0, -0.3), cx(-1.0, 0.0)],
        ));
        let report = validate_config(&p, &c).unwrap();
        assert!(report.ok, "{:?}", report.violations);
    }

    #[test]
    fn signed_submatrix_selection() {
        let p = params(&[cx(1.0, 1.0), cx(2.0, -0.5)]);
        let c = CouplingMatrix::new(CMatrix::from_row_slice(
            2,
            2,
            &[cx(1.0, 0.0), cx(0.0, 0.3), cx(0.0, -0.3), cx(-1.0, 0.0)],
        ));
        let plus = signed_submatrix(&c, &p, 1.0);
        assert_eq!(plus.nrows(), 1);
        assert_eq!(plus[(0, 0)], cx(1.0, 0.0));
        let minus = signed_submatrix(&c, &p, -1.0);
        assert_eq!(minus.nrows(), 1);
        assert_eq!(minus[(0, 0)], cx(-1.0, 0.0));
        // Single positive parameter: the minus-selected matrix is empty.
        let p1 = params(&[cx(0.0, 1.0)]);
        let c1 = CouplingMatrix::identity(1);
        assert_eq!(signed_submatrix(&c1, &p1, -1.0).nrows(), 0);
    }

    #[test]
    fn dimension_mismatch_is_hard_error() {
        let p = params(&[cx(0.0, 1.0), cx(1.0, -0.5)]);
        let c = CouplingMatrix::identity(1);
        assert!(validate_config(&p, &c).is_err());
    }

    #[test]
    fn non_hermitian_is_reported() {
        let p = params(&[cx(0.0, 1.0), cx(1.0, 0.5)]);
        let c = CouplingMatrix::new(CMatrix::from_row_slice(
            2,
            2,
            &[cx(1.0, 0.0), cx(0.2, 0.0), cx(0.3, 0.0), cx(1.0, 0.0)],
        ));
        let report = validate_config(&p, &c).unwrap();
        assert!(!report.ok);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NonHermitian { .. })));
    }

    #[test]
    fn zero_imaginary_part_and_coincident_lambdas_reported() {
        let p = params(&[cx(0.5, 0.0), cx(0.5, 0.0)]);
        let c = CouplingMatrix::identity(2);
        let report = validate_config(&p, &c).unwrap();
        assert!(!report.ok);
        assert!(report.violations.iter().any(|v| matches!(v, Violation::ZeroImaginaryPart { .. })));
        assert!(report.violations.iter().any(|v| matches!(v, Violation::CoincidentLambdas { .. })));
    }

    #[test]
    fn coincident_real_parts_is_only_a_warning() {
        let p = params(&[cx(0.5, 1.0), cx(0.5, -0.4)]);
        let c = CouplingMatrix::new(CMatrix::from_row_slice(
            2,
            2,
            &[cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(-1.0, 0.0)],
        ));
        let report = validate_config(&p, &c).unwrap();
        assert!(report.ok);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::CoincidentRealParts { .. })));
        assert!(!SpectralParameters::new(vec![cx(0.5, 1.0), cx(0.5, -0.4)]).generic_rays());
    }

    #[test]
    fn ordering_flags() {
        assert!(params(&[cx(0.0, 1.0), cx(1.0, -0.5)]).strictly_ordered());
        assert!(!params(&[cx(0.0, 0.5), cx(1.0, -0.5)]).strictly_ordered());
        assert!(params(&[cx(0.0, 1.0), cx(1.0, -0.5)]).generic_rays());
    }

    #[test]
    fn c_chain_one_soliton_is_unit() {
        let config = DressingConfig::new(
            params(&[cx(0.0, 1.0)]),
            CouplingMatrix::identity(1),
            BackgroundModel::zero(),
        )
        .unwrap();
        let chain = c_chain(&config).unwrap();
        assert_eq!(chain.len(), 1);
        assert_relative_eq!(chain[0], 1.0, max_relative = 1e-14);
    }

    #[test]
    fn c_chain_identity_pair() {
        let config = DressingConfig::new(
            params(&[cx(0.0, 1.0), cx(2.0, 0.5)]),
            CouplingMatrix::identity(2),
            BackgroundModel::zero(),
        )
        .unwrap();
        let chain = c_chain(&config).unwrap();
        assert_relative_eq!(chain[0], 1.0, max_relative = 1e-14);
        assert_relative_eq!(chain[1], 1.0, max_relative = 1e-14);
    }

    #[test]
    fn c_chain_positivity_is_asserted() {
        // Mixed-sign pair: c_2 = det over the negative-index block = -0.8,
        // and Im lambda_2 * c_2 = (-0.55)(-0.8) > 0.
        let config = DressingConfig::new(
            params(&[cx(0.3, 1.0), cx(-0.6, -0.55)]),
            CouplingMatrix::new(CMatrix::from_row_slice(
                2,
                2,
                &[cx(1.0, 0.0), cx(0.4, 0.2), cx(0.4, -0.2), cx(-0.8, 0.0)],
            )),
            BackgroundModel::zero(),
        )
        .unwrap();
        let chain = c_chain(&config).unwrap();
        assert_relative_eq!(chain[0], 1.0, max_relative = 1e-14);
        assert_relative_eq!(chain[1], -0.8, max_relative = 1e-14);
        for (lam, c_n) in config.params().lambdas().iter().zip(&chain) {
            assert!(lam.im * c_n > 0.0);
        }
    }

    #[test]
    fn lambda_minor_det_pinned_values() {
        let p1 = params(&[cx(0.0, 1.0)]);
        assert_relative_eq!(
            lambda_minor_det(&p1, MinorSelector::Signed(1.0)).unwrap(),
            0.5,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            lambda_minor_det(&p1, MinorSelector::Signed(-1.0)).unwrap(),
            1.0,
            max_relative = 1e-14
        );
        let p2 = params(&[cx(0.0, 1.0), cx(2.0, 0.5)]);
        assert_relative_eq!(
            lambda_minor_det(&p2, MinorSelector::Signed(1.0)).unwrap(),
            0.34,
            max_relative = 1e-12
        );
    }

    #[test]
    fn lambda_minor_det_matches_brute_force() {
        let p = params(&[cx(0.5, 1.2), cx(-0.7, -0.8), cx(1.1, 0.45)]);
        for selector in [
            MinorSelector::Signed(1.0),
            MinorSelector::Signed(-1.0),
            MinorSelector::Ray { j: 0, direction: 1.0 },
            MinorSelector::Ray { j: 1, direction: -1.0 },
            MinorSelector::RayWithCenter { j: 2, direction: 1.0 },
        ] {
            let closed = lambda_minor_det(&p, selector).unwrap();
            let idx = selector.indices(&p);
            let selected: Vec<Cx> = idx.iter().map(|&l| p.lambdas()[l]).collect();
            let brute = crate::linalg::det(&crate::linalg::cauchy_matrix(&selected).unwrap());
            assert_relative_eq!(closed, brute.re, max_relative = 1e-12, epsilon = 1e-15);
            assert!(brute.im.abs() <= 1e-12 * brute.re.abs().max(1e-15));
        }
    }

    #[test]
    fn ray_selector_excludes_center_and_applies_direction() {
        // λ_0 center: l=1 has Im<0, Re diff -1.2 → product +0.96 selected for +1;
        // l=2 has Im>0, Re diff +0.6 → +0.27 selected for +1. Direction −1 selects none.
        let p = params(&[cx(0.5, 1.2), cx(-0.7, -0.8), cx(1.1, 0.45)]);
        assert_eq!(MinorSelector::Ray { j: 0, direction: 1.0 }.indices(&p), vec![1, 2]);
        assert_eq!(MinorSelector::Ray { j: 0, direction: -1.0 }.indices(&p), Vec::<usize>::new());
        assert_eq!(
            MinorSelector::RayWithCenter { j: 0, direction: -1.0 }.indices(&p),
            vec![0]
        );
    }

    #[test]
    fn c_chain_matches_bordered_schur_form() {
        // The chain ratio det C_{n+1}(y) / det C_n(y) equals the Schur
        // complement c_{n+1,n+1} - row · C_n(y)^{-1} · col of the bordered
        // signed submatrix.
        let lambdas = [cx(0.5, 1.2), cx(-0.7, -0.8), cx(1.1, 0.45)];
        let c = CMatrix::from_row_slice(
            3,
            3,
            &[
                cx(1.5, 0.0),
                cx(0.2, 0.3),
                cx(0.3, -0.1),
                cx(0.2, -0.3),
                cx(-1.1, 0.0),
                cx(-0.1, -0.25),
                cx(0.3, 0.1),
                cx(-0.1, 0.25),
                cx(0.9, 0.0),
            ],
        );
        let config = DressingConfig::new(
            params(&lambdas),
            CouplingMatrix::new(c.clone()),
            BackgroundModel::zero(),
        )
        .unwrap();
        let chain = c_chain(&config).unwrap();
        for step in 1..=3usize {
            let y = lambdas[step - 1].im;
            let prev: Vec<usize> =
                (0..step - 1).filter(|&l| y * lambdas[l].im > 0.0).collect();
            let sub = crate::linalg::submatrix(&c, &prev);
            let col = crate::linalg::CVector::from_vec(
                prev.iter().map(|&l| c[(l, step - 1)]).collect::<Vec<_>>(),
            );
            let row = crate::linalg::CVector::from_vec(
                prev.iter().map(|&l| c[(step - 1, l)]).collect::<Vec<_>>(),
            );
            let schur =
                crate::linalg::bordered_ratio(&sub, &col, &row, c[(step - 1, step - 1)]).unwrap();
            assert_relative_eq!(chain[step - 1], schur.re, max_relative = 1e-12);
            assert!(schur.im.abs() <= 1e-12);
        }
    }

    #[test]
    fn permuted_preserves_validity_and_entries() {
        let config = DressingConfig::new(
            params(&[cx(0.3, 1.0), cx(-0.6, -0.55)]),
            CouplingMatrix::new(CMatrix::from_row_slice(
                2,
                2,
                &[cx(1.0, 0.0), cx(0.4, 0.2), cx(0.4, -0.2), cx(-0.8, 0.0)],
            )),
            BackgroundModel::zero(),
        )
        .unwrap();
        let swapped = config.permuted(&[1, 0]).unwrap();
        assert_eq!(swapped.params().lambdas()[0], cx(-0.6, -0.55));
        assert_eq!(swapped.coupling().entry(0, 0), cx(-0.8, 0.0));
        assert_eq!(swapped.coupling().entry(0, 1), cx(0.4, -0.2));
    }
}
