//! Small complex linear-algebra helpers shared across modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

/// Symmetrize in place: R <- (R + R^H)/2. Suppresses accumulation roundoff
/// so downstream Hermitian solvers see an exactly Hermitian matrix.
pub fn hermitize(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    debug_assert_eq!(n, m.ncols());
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending,
/// eigenvectors as columns in matching order.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> Result<(DVector<f64>, DMatrix<Complex64>)> {
    let se = m
        .clone()
        .try_symmetric_eigen(1e-13, 10_000)
        .ok_or_else(|| Error::Numerical("hermitian eigendecomposition did not converge".into()))?;
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let values = DVector::from_iterator(n, order.iter().map(|&i| se.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &se.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Condition number of a Hermitian PSD matrix from its eigenvalue spread.
pub fn hermitian_condition(m: &DMatrix<Complex64>) -> Result<f64> {
    let (vals, _) = hermitian_eigen(m)?;
    let max = vals.iter().fold(f64::MIN, |a, &b| a.max(b.abs()));
    let min = vals.iter().fold(f64::MAX, |a, &b| a.min(b.abs()));
    if min <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(max / min)
}

/// Inverse of a Hermitian positive-definite matrix.
pub fn invert_hermitian(h: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let chol = h
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerical("matrix is not positive definite".into()))?;
    Ok(chol.inverse())
}
