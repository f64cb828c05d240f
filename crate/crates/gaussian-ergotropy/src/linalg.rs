//! Small shared helpers for dense symmetric matrix work.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Checks that `m` is square with even dimension and returns the mode count.
pub(crate) fn mode_count(m: &DMatrix<f64>, what: &str) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::InvalidArgument(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 || m.nrows() % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "{what} must have positive even dimension, got {}",
            m.nrows()
        )));
    }
    Ok(m.nrows() / 2)
}

/// Checks symmetry within `tol * (1 + ||m||_F)`.
pub(crate) fn check_symmetric(m: &DMatrix<f64>, tol: f64, what: &str) -> Result<()> {
    let asym = (m - m.transpose()).norm();
    let bound = tol * (1.0 + m.norm());
    if asym > bound {
        return Err(Error::InvalidArgument(format!(
            "{what} is not symmetric: ||M - M^T||_F = {asym:.3e} exceeds {bound:.3e}"
        )));
    }
    Ok(())
}

/// Eigendecomposition data of a symmetric positive-definite matrix.
pub(crate) struct SpdFactors {
    /// Principal square root M^{1/2}.
    pub sqrt: DMatrix<f64>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// Square root of a symmetric strictly positive matrix via symmetric
/// eigendecomposition. `eps_rel` screens positivity: the smallest eigenvalue
/// must exceed `eps_rel * max_eigenvalue`.
pub(crate) fn spd_sqrt(m: &DMatrix<f64>, eps_rel: f64, what: &str) -> Result<SpdFactors> {
    let sym = (m + m.transpose()) * 0.5;
    let dim = sym.nrows();
    let eig = sym.symmetric_eigen();
    let min_eigenvalue = eig.eigenvalues.min();
    let max_eigenvalue = eig.eigenvalues.max();
    if !(min_eigenvalue.is_finite() && max_eigenvalue.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "{what} has non-finite entries"
        )));
    }
    if min_eigenvalue <= eps_rel * max_eigenvalue.max(1e-300) || min_eigenvalue <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "{what} is not strictly positive: smallest eigenvalue {min_eigenvalue:.3e}"
        )));
    }
    let mut sqrt = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        let col = eig.eigenvectors.column(k);
        let lam = eig.eigenvalues[k].sqrt();
        // sqrt += lam * v v^T
        sqrt.ger(lam, &col, &col, 1.0);
    }
    Ok(SpdFactors {
        sqrt,
        min_eigenvalue,
        max_eigenvalue,
    })
}

/// Sorted (ascending) eigenvalues of a symmetric matrix.
pub(crate) fn symmetric_eigenvalues_sorted(m: &DMatrix<f64>) -> Vec<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let mut vals: Vec<f64> = sym.symmetric_eigenvalues().iter().cloned().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).expect("non-finite eigenvalue"));
    vals
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spd_sqrt_squares_back() {
        let m = DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 1.0, 3.0]);
        let f = spd_sqrt(&m, 1e-12, "m").unwrap();
        assert!((&f.sqrt * &f.sqrt - &m).norm() < 1e-12);
    }

    #[test]
    fn spd_sqrt_rejects_indefinite() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(spd_sqrt(&m, 1e-12, "m").is_err());
    }

    #[test]
    fn symmetry_check() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0 + 1e-3, 1.0]);
        assert!(check_symmetric(&m, 1e-8, "m").is_err());
        assert!(check_symmetric(&m, 1e-2, "m").is_ok());
    }
}
