//! Dense complex linear algebra helpers shared by the determinant engine.
//!
//! Everything here operates on small (N ≤ ~10) matrices: Hermitian checks,
//! eigenvalue floors computed through the real symmetric embedding,
//! LU determinants and solves, bordered-determinant reductions, index-set
//! submatrices, and the Cauchy-type matrices built from the spectral
//! parameters together with their closed product-formula determinant.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Cx = Complex64;
/// Dynamically sized complex matrix.
pub type CMatrix = DMatrix<Cx>;
/// Dynamically sized complex column vector.
pub type CVector = DVector<Cx>;

/// Largest entrywise deviation from Hermitian symmetry, `max |m[l,m] - conj(m[m,l])|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for l in 0..n {
        for c in l..n {
            worst = worst.max((m[(l, c)] - m[(c, l)].conj()).norm());
        }
    }
    worst
}

/// Largest entry modulus.
pub fn max_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Uses the real symmetric embedding `[[X, -Y], [Y, X]]` of `m = X + iY`,
/// whose spectrum is that of `m` with every eigenvalue doubled; consecutive
/// pairs of the sorted embedded spectrum are collapsed back to single values.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.nrows();
    if n == 0 {
        return Vec::new();
    }
    let mut e = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for l in 0..n {
        for c in 0..n {
            let z = m[(l, c)];
            e[(l, c)] = z.re;
            e[(l + n, c + n)] = z.re;
            e[(l, c + n)] = -z.im;
            e[(l + n, c)] = z.im;
        }
    }
    let mut vals: Vec<f64> = e.symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    (0..n).map(|i| 0.5 * (vals[2 * i] + vals[2 * i + 1])).collect()
}

/// Determinant by LU with partial pivoting. The empty matrix has determinant 1.
pub fn det(m: &CMatrix) -> Cx {
    if m.nrows() == 0 {
        return Cx::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}

/// Solve `m x = rhs`, failing with a regularity error on a singular matrix.
pub fn solve(m: &CMatrix, rhs: &CVector) -> Result<CVector> {
    m.clone()
        .lu()
        .solve(rhs)
        .ok_or_else(|| Error::Numerical("linear solve hit a singular matrix".into()))
}

/// Submatrix over the given row/column index set (order preserved).
pub fn submatrix(m: &CMatrix, idx: &[usize]) -> CMatrix {
    DMatrix::from_fn(idx.len(), idx.len(), |l, c| m[(idx[l], idx[c])])
}

/// Schur-complement value of a bordered determinant:
/// `det [[A, col], [row^T, corner]] / det A = corner - row^T A^{-1} col`.
pub fn bordered_ratio(a: &CMatrix, col: &CVector, row: &CVector, corner: Cx) -> Result<Cx> {
    if a.nrows() == 0 {
        return Ok(corner);
    }
    let x = solve(a, col)?;
    Ok(corner - row.dot(&x))
}

/// Direct evaluation of the bordered determinant `det [[A, col], [row^T, corner]]`
/// as an (n+1)x(n+1) LU determinant; cross-check path for [`bordered_ratio`].
pub fn bordered_det_direct(a: &CMatrix, col: &CVector, row: &CVector, corner: Cx) -> Cx {
    let n = a.nrows();
    let mut b = DMatrix::<Cx>::zeros(n + 1, n + 1);
    for l in 0..n {
        for c in 0..n {
            b[(l, c)] = a[(l, c)];
        }
        b[(l, n)] = col[l];
        b[(n, l)] = row[l];
    }
    b[(n, n)] = corner;
    det(&b)
}

/// Determinant of the matrix with row `skip_row` and column `skip_col` removed.
pub fn minor_det(m: &CMatrix, skip_row: usize, skip_col: usize) -> Cx {
    let n = m.nrows();
    let rows: Vec<usize> = (0..n).filter(|&r| r != skip_row).collect();
    let cols: Vec<usize> = (0..n).filter(|&c| c != skip_col).collect();
    det(&DMatrix::from_fn(n - 1, n - 1, |l, c| m[(rows[l], cols[c])]))
}

/// Cauchy-type matrix with entries `-i / (conj(lambda_l) - lambda_m)` over the
/// given spectral parameters.
///
/// Fails if two parameters coincide (a diagonal entry only needs a nonzero
/// imaginary part, which the configuration layer guarantees separately).
pub fn cauchy_matrix(lambdas: &[Cx]) -> Result<CMatrix> {
    let n = lambdas.len();
    for l in 0..n {
        for m in 0..n {
            if (lambdas[l].conj() - lambdas[m]).norm() == 0.0 {
                return Err(Error::Domain(format!(
                    "singular Cauchy entry: conj(lambda_{l}) equals lambda_{m}"
                )));
            }
        }
    }
    Ok(DMatrix::from_fn(n, n, |l, m| {
        Cx::new(0.0, -1.0) / (lambdas[l].conj() - lambdas[m])
    }))
}

/// Closed product formula for the Cauchy-type determinant over any parameter set:
/// `det = prod_l (2 Im lambda_l)^{-1} * prod_{l<m} |lambda_l - lambda_m|^2 / |conj(lambda_l) - lambda_m|^2`.
///
/// The empty set yields 1 by convention.
pub fn cauchy_det_product(lambdas: &[Cx]) -> f64 {
    let n = lambdas.len();
    let mut value = 1.0;
    for l in 0..n {
        value /= 2.0 * lambdas[l].im;
        for m in (l + 1)..n {
            let num = (lambdas[l] - lambdas[m]).norm_sqr();
            let den = (lambdas[l].conj() - lambdas[m]).norm_sqr();
            value *= num / den;
        }
    }
    value
}

/// Heaviside step used in all product-formula exponents: 1 for positive
/// arguments, 0 otherwise (the argument is never 0 for valid inputs).
pub fn theta(x: f64) -> u32 {
    if x > 0.0 {
        1
    } else {
        0
    }
}
