//! Williamson decomposition and symplectic spectra.
//!
//! Factors a random symmetric positive-definite matrix as M = S D Sᵀ with S
//! symplectic and D = ⊕ d_j I₂, then checks both residuals.
//!
//! ```bash
//! cargo run --example williamson
//! ```

use gaussian_ergotropy::sampling::random_spd_matrix;
use gaussian_ergotropy::symplectic::{
    is_symplectic, symplectic_eigenvalues, williamson, SpectrumOrder,
};
use nalgebra::DMatrix;

fn main() {
    // a hand-sized case first: diag(2, 8) has the single symplectic
    // eigenvalue sqrt(2 * 8) = 4
    let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 8.0]);
    let d = symplectic_eigenvalues(&m).unwrap();
    println!("diag(2, 8): symplectic spectrum {:?}", d);

    let w = williamson(&m, SpectrumOrder::Ascending).unwrap();
    println!("            S = {:.6}", w.s.matrix());

    // now a random three-mode matrix
    let m = random_spd_matrix(3, 42, (0.3, 3.0)).unwrap();
    let w = williamson(&m, SpectrumOrder::Descending).unwrap();
    println!("random 6x6: spectrum (descending) = {:?}", w.d);
    println!(
        "            symplectic residual      = {:.3e}",
        w.s.residual()
    );
    println!(
        "            reconstruction residual  = {:.3e}",
        (w.reconstruct() - &m).norm()
    );
    assert!(is_symplectic(w.s.matrix(), 1e-8).unwrap());

    // the spectrum is invariant under symplectic conjugation
    let s = gaussian_ergotropy::symplectic::random_symplectic(3, 7, 1.0).unwrap();
    let conjugated = s.matrix() * &m * s.matrix().transpose();
    let d0 = symplectic_eigenvalues(&m).unwrap();
    let d1 = symplectic_eigenvalues(&conjugated).unwrap();
    let drift = d0
        .iter()
        .zip(&d1)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    println!("spectrum drift under conjugation  = {drift:.3e}");
}
