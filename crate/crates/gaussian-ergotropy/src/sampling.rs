//! Deterministic samplers for states, Hamiltonians, and SPD matrices.
//!
//! Everything here is seed-driven plumbing for property sweeps and the
//! verification commands: identical seeds give identical samples.

use nalgebra::{DMatrix, DVector};
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::states::{GaussianState, QuadraticHamiltonian};
use crate::symplectic::random_symplectic;

/// Derives a stream seed from a master seed, stable across call order.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    // splitmix64 step on master ⊕ stream
    let mut z = master ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random symmetric positive-definite matrix S diag(d) Sᵀ with a random
/// symplectic S and per-mode values d_j uniform in `d_range`.
pub fn random_spd_matrix(n: usize, seed: u64, d_range: (f64, f64)) -> Result<DMatrix<f64>> {
    let s = random_symplectic(n, derive_seed(seed, 1), 0.7)?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 2));
    let dist = Uniform::new_inclusive(d_range.0, d_range.1);
    let mut diag = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        let d = dist.sample(&mut rng);
        diag[(2 * j, 2 * j)] = d;
        diag[(2 * j + 1, 2 * j + 1)] = d;
    }
    let m = s.matrix() * diag * s.matrix().transpose();
    Ok((&m + m.transpose()) * 0.5)
}

/// Random quadratic Hamiltonian with symplectic spectrum in `d_range` and a
/// centered uniform offset vector.
pub fn random_hamiltonian(n: usize, seed: u64) -> Result<QuadraticHamiltonian> {
    random_hamiltonian_in(n, seed, (0.4, 2.3))
}

/// As [`random_hamiltonian`] with an explicit spectrum range.
pub fn random_hamiltonian_in(
    n: usize,
    seed: u64,
    d_range: (f64, f64),
) -> Result<QuadraticHamiltonian> {
    let h = random_spd_matrix(n, derive_seed(seed, 10), d_range)?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 11));
    let dist = Uniform::new(-1.0, 1.0);
    let r = DVector::from_fn(2 * n, |_, _| dist.sample(&mut rng));
    QuadraticHamiltonian::new(h, r)
}

/// Random valid covariance matrix: symplectic eigenvalues uniform in
/// [1, `nu_max`], conjugated by a random symplectic.
pub fn random_covariance(n: usize, seed: u64, nu_max: f64) -> Result<DMatrix<f64>> {
    random_spd_matrix(n, seed, (1.0, nu_max.max(1.0)))
}

/// Random Gaussian state: random covariance plus a centered uniform
/// displacement of spread `disp_scale`.
pub fn random_gaussian_state(n: usize, seed: u64, disp_scale: f64) -> Result<GaussianState> {
    let v = random_covariance(n, derive_seed(seed, 20), 3.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 21));
    let dist = Uniform::new(-disp_scale.max(1e-12), disp_scale.max(1e-12));
    let m = DVector::from_fn(2 * n, |_, _| dist.sample(&mut rng));
    GaussianState::new(m, v)
}
