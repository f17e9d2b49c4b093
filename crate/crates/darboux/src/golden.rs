//! Reference configurations used across tests and the verification CLI:
//! a closed-form one-soliton case, a mixed-sign two-soliton case with
//! non-diagonal coupling, and a three-soliton case (plus a variant whose
//! coupling makes the step-by-step recursion oracle applicable without
//! free parameters).

use nalgebra::DMatrix;

use crate::background::BackgroundModel;
use crate::config::{CouplingMatrix, DressingConfig, SpectralParameters};
use crate::linalg::Cx;

fn cx(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

fn build(lambdas: Vec<Cx>, c: Vec<Cx>, background: BackgroundModel) -> DressingConfig {
    let n = lambdas.len();
    DressingConfig::new(
        SpectralParameters::new(lambdas),
        CouplingMatrix::new(DMatrix::from_row_slice(n, n, &c)),
        background,
    )
    .expect("reference configuration must validate")
}

/// One soliton: λ = i, C = [[1]], zero background. The potential is exactly
/// u₁(x) = −2 / cosh²(x₁ − (ln 2)/2).
pub fn one_soliton() -> DressingConfig {
    build(vec![cx(0.0, 1.0)], vec![cx(1.0, 0.0)], BackgroundModel::zero())
}

/// Two solitons with mixed-sign imaginary parts and non-diagonal coupling;
/// |Im λ₁| > |Im λ₂| strictly, so the recursion oracle accepts it.
pub fn two_soliton() -> DressingConfig {
    build(
        vec![cx(0.3, 1.0), cx(-0.6, -0.55)],
        vec![
            cx(1.0, 0.0),
            cx(0.4, 0.2),
            cx(0.4, -0.2),
            cx(-0.8, 0.0),
        ],
        BackgroundModel::zero(),
    )
}

/// Three solitons, mixed signs, fully non-diagonal Hermitian coupling.
pub fn three_soliton() -> DressingConfig {
    build(
        vec![cx(0.5, 1.2), cx(-0.7, -0.8), cx(1.1, 0.45)],
        vec![
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
        BackgroundModel::zero(),
    )
}

/// Three-soliton variant with the third parameter decoupled
/// (c₁₃ = c₂₃ = 0, c₁₂ free): the recursion chain then needs no constants
/// beyond the coupling matrix itself, closing the oracle comparison at N = 3.
pub fn three_soliton_oracle() -> DressingConfig {
    build(
        vec![cx(0.5, 1.2), cx(-0.7, -0.8), cx(1.1, 0.45)],
        vec![
            cx(1.5, 0.0),
            cx(0.2, 0.3),
            cx(0.0, 0.0),
            cx(0.2, -0.3),
            cx(-1.1, 0.0),
            cx(0.0, 0.0),
            cx(0.0, 0.0),
            cx(0.0, 0.0),
            cx(0.9, 0.0),
        ],
        BackgroundModel::zero(),
    )
}

/// All golden configurations in size order.
pub fn all() -> Vec<DressingConfig> {
    vec![one_soliton(), two_soliton(), three_soliton()]
}
