//! Bosonic Gaussian channels in the (X, Y, x) parametrization:
//! m ↦ Xm + x, V ↦ XVXᵀ + Y, subject to the complete-positivity
//! condition Y + iΩ ≥ iXΩXᵀ.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{check_symmetric, mode_count};
use crate::states::{GaussianState, QuadraticHamiltonian};
use crate::symplectic::{
    omega_matrix, symplectic_eigenvalues, williamson, SpectrumOrder, CONDITION_CAP,
};

/// A validated Gaussian channel.
#[derive(Debug, Clone)]
pub struct GaussianChannel {
    n: usize,
    x_matrix: DMatrix<f64>,
    y_matrix: DMatrix<f64>,
    displacement: DVector<f64>,
}

impl GaussianChannel {
    /// Validates the triple (X, Y, x): dimensions, symmetry of Y, and the
    /// positivity of the Hermitian matrix Y + iΩ − iXΩXᵀ. `tol` overrides
    /// the default PSD slack 1e−9·(1 + ‖Y‖_F).
    pub fn new(
        x_matrix: DMatrix<f64>,
        y_matrix: DMatrix<f64>,
        displacement: DVector<f64>,
        tol: Option<f64>,
    ) -> Result<Self> {
        let n = mode_count(&x_matrix, "X")?;
        if y_matrix.nrows() != 2 * n || y_matrix.ncols() != 2 * n {
            return Err(Error::InvalidArgument(format!(
                "Y must be {}x{}, got {}x{}",
                2 * n,
                2 * n,
                y_matrix.nrows(),
                y_matrix.ncols()
            )));
        }
        if displacement.len() != 2 * n {
            return Err(Error::InvalidArgument(format!(
                "displacement must have length {}, got {}",
                2 * n,
                displacement.len()
            )));
        }
        check_symmetric(&y_matrix, 1e-8, "Y")?;
        let tol_psd = tol.unwrap_or_else(|| 1e-9 * (1.0 + y_matrix.norm()));
        let min_eig = cp_condition_min_eigenvalue(&x_matrix, &y_matrix);
        if min_eig < -tol_psd {
            return Err(Error::InvalidChannel {
                min_eigenvalue: min_eig,
                tol: tol_psd,
            });
        }
        Ok(Self {
            n,
            x_matrix,
            y_matrix,
            displacement,
        })
    }

    /// The identity channel on `n` modes.
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "mode count must be at least 1".into(),
            ));
        }
        Ok(Self {
            n,
            x_matrix: DMatrix::identity(2 * n, 2 * n),
            y_matrix: DMatrix::zeros(2 * n, 2 * n),
            displacement: DVector::zeros(2 * n),
        })
    }

    /// Pure-loss / attenuator channel: X = √η I, Y = (1−η) I, η ∈ (0, 1].
    pub fn attenuator(n: usize, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "attenuator transmissivity must lie in (0, 1], got {eta}"
            )));
        }
        let dim = 2 * n;
        Self::new(
            DMatrix::identity(dim, dim) * eta.sqrt(),
            DMatrix::identity(dim, dim) * (1.0 - eta),
            DVector::zeros(dim),
            None,
        )
    }

    /// Amplifier channel: X = √G I, Y = (G−1) I, G ≥ 1.
    pub fn amplifier(n: usize, gain: f64) -> Result<Self> {
        if !(gain >= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "amplifier gain must be at least 1, got {gain}"
            )));
        }
        let dim = 2 * n;
        Self::new(
            DMatrix::identity(dim, dim) * gain.sqrt(),
            DMatrix::identity(dim, dim) * (gain - 1.0),
            DVector::zeros(dim),
            None,
        )
    }

    /// Classical additive noise: X = I, Y given (must be PSD), plus an
    /// optional displacement.
    pub fn additive_noise(y_matrix: DMatrix<f64>, displacement: DVector<f64>) -> Result<Self> {
        let n = mode_count(&y_matrix, "Y")?;
        Self::new(
            DMatrix::identity(2 * n, 2 * n),
            y_matrix,
            displacement,
            None,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_matrix(&self) -> &DMatrix<f64> {
        &self.x_matrix
    }

    pub fn y_matrix(&self) -> &DMatrix<f64> {
        &self.y_matrix
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.displacement
    }

    /// Applies the channel: m ↦ Xm + x, V ↦ XVXᵀ + Y. The output moments are
    /// re-validated as a covariance matrix.
    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        if state.n() != self.n {
            return Err(Error::InvalidArgument(format!(
                "mode mismatch: channel acts on {} modes, state has {}",
                self.n,
                state.n()
            )));
        }
        let m = &self.x_matrix * state.first_moment() + &self.displacement;
        let v = &self.x_matrix * state.covariance() * self.x_matrix.transpose() + &self.y_matrix;
        let v = (&v + v.transpose()) * 0.5;
        GaussianState::new(m, v)
    }

    /// The composite channel self ∘ inner:
    /// (X₂X₁, X₂Y₁X₂ᵀ + Y₂, X₂x₁ + x₂).
    pub fn compose(&self, inner: &GaussianChannel) -> Result<GaussianChannel> {
        if inner.n != self.n {
            return Err(Error::InvalidArgument(format!(
                "mode mismatch in composition: {} vs {}",
                self.n, inner.n
            )));
        }
        let x = &self.x_matrix * &inner.x_matrix;
        let y = &self.x_matrix * &inner.y_matrix * self.x_matrix.transpose() + &self.y_matrix;
        let y = (&y + y.transpose()) * 0.5;
        let disp = &self.x_matrix * &inner.displacement + &self.displacement;
        GaussianChannel::new(x, y, disp, None)
    }
}

/// Smallest eigenvalue of the Hermitian matrix Y + iΩ − iXΩXᵀ.
fn cp_condition_min_eigenvalue(x_matrix: &DMatrix<f64>, y_matrix: &DMatrix<f64>) -> f64 {
    let n = x_matrix.nrows() / 2;
    let omega = omega_matrix(n);
    let antisym = &omega - x_matrix * &omega * x_matrix.transpose();
    let dim = 2 * n;
    let mut z = DMatrix::<Complex<f64>>::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            z[(i, j)] = Complex::new(y_matrix[(i, j)], antisym[(i, j)]);
        }
    }
    // enforce exact Hermiticity against roundoff
    let z = (z.clone() + z.adjoint()) * Complex::new(0.5, 0.0);
    z.symmetric_eigen().eigenvalues.min()
}

/// Minimum output energy of the channel:
/// (1/2) Σ d_i(XᵀhX) + (1/4) Tr[hY]. Requires invertible X.
pub fn min_output_energy(
    channel: &GaussianChannel,
    hamiltonian: &QuadraticHamiltonian,
) -> Result<f64> {
    check_modes(channel, hamiltonian)?;
    check_x_invertible(channel)?;
    let m = conjugated_hamiltonian_matrix(channel, hamiltonian);
    let d = symplectic_eigenvalues(&m)?;
    let trace_term = 0.25 * (hamiltonian.matrix() * channel.y_matrix()).trace();
    Ok(0.5 * d.iter().sum::<f64>() + trace_term)
}

/// A Gaussian input state achieving [`min_output_energy`]:
/// m = X⁻¹(r − x) and V = (S⁻¹)ᵀ S⁻¹ where XᵀhX = SDSᵀ.
pub fn optimal_input_state(
    channel: &GaussianChannel,
    hamiltonian: &QuadraticHamiltonian,
) -> Result<GaussianState> {
    check_modes(channel, hamiltonian)?;
    check_x_invertible(channel)?;
    let m_target = hamiltonian.center() - channel.displacement();
    let lu = channel.x_matrix().clone().lu();
    let m = lu.solve(&m_target).ok_or_else(|| {
        Error::UnsupportedInput("X is numerically singular in the moment solve".into())
    })?;
    let conj = conjugated_hamiltonian_matrix(channel, hamiltonian);
    let w = williamson(&conj, SpectrumOrder::Ascending)?;
    let s_inv = w.s.inverse();
    let v = s_inv.matrix().transpose() * s_inv.matrix();
    let v = (&v + v.transpose()) * 0.5;
    GaussianState::new(m, v)
}

/// XᵀhX, symmetrized against roundoff.
fn conjugated_hamiltonian_matrix(
    channel: &GaussianChannel,
    hamiltonian: &QuadraticHamiltonian,
) -> DMatrix<f64> {
    let m = channel.x_matrix().transpose() * hamiltonian.matrix() * channel.x_matrix();
    (&m + m.transpose()) * 0.5
}

fn check_modes(channel: &GaussianChannel, hamiltonian: &QuadraticHamiltonian) -> Result<()> {
    if channel.n() != hamiltonian.n() {
        return Err(Error::InvalidArgument(format!(
            "mode mismatch: channel acts on {} modes, Hamiltonian has {}",
            channel.n(),
            hamiltonian.n()
        )));
    }
    Ok(())
}

fn check_x_invertible(channel: &GaussianChannel) -> Result<()> {
    let svd = channel.x_matrix().clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 0.0 || smax / smin > CONDITION_CAP {
        return Err(Error::UnsupportedInput(format!(
            "X must be invertible: smallest singular value {smin:.3e} \
             (largest {smax:.3e})"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::energy;

    fn random_hamiltonian(n: usize, seed: u64) -> QuadraticHamiltonian {
        crate::sampling::random_hamiltonian(n, seed).unwrap()
    }

    fn random_state(n: usize, seed: u64) -> GaussianState {
        crate::sampling::random_gaussian_state(n, seed, 1.0).unwrap()
    }

    #[test]
    fn identity_channel_is_valid_and_neutral() {
        let ch = GaussianChannel::identity(2).unwrap();
        let st = random_state(2, 3);
        let out = ch.apply(&st).unwrap();
        assert_eq!(out.first_moment(), st.first_moment());
        assert!((out.covariance() - st.covariance()).norm() < 1e-14);
    }

    #[test]
    fn attenuator_is_valid() {
        for &eta in &[0.2, 0.5, 0.9] {
            assert!(GaussianChannel::attenuator(1, eta).is_ok());
            assert!(GaussianChannel::attenuator(2, eta).is_ok());
        }
    }

    #[test]
    fn bare_attenuation_without_noise_is_invalid() {
        // X = √η I with Y = 0 violates complete positivity
        let eta: f64 = 0.5;
        let err = GaussianChannel::new(
            DMatrix::identity(2, 2) * eta.sqrt(),
            DMatrix::zeros(2, 2),
            DVector::zeros(2),
            None,
        )
        .unwrap_err();
        match err {
            Error::InvalidChannel { min_eigenvalue, .. } => {
                assert!((min_eigenvalue + (1.0 - eta)).abs() < 1e-10);
            }
            other => panic!("expected InvalidChannel, got {other:?}"),
        }
    }

    #[test]
    fn attenuator_fixes_the_vacuum() {
        let ch = GaussianChannel::attenuator(1, 0.35).unwrap();
        let out = ch.apply(&GaussianState::vacuum(1).unwrap()).unwrap();
        assert!((out.covariance() - DMatrix::identity(2, 2)).norm() < 1e-12);
        assert!(out.first_moment().norm() < 1e-14);
    }

    #[test]
    fn attenuator_scales_coherent_amplitude() {
        let eta: f64 = 0.49;
        let alpha = 1.2;
        let ch = GaussianChannel::attenuator(1, eta).unwrap();
        let st = GaussianState::coherent(DVector::from_row_slice(&[alpha, 0.0])).unwrap();
        let out = ch.apply(&st).unwrap();
        assert!((out.first_moment()[0] - eta.sqrt() * alpha).abs() < 1e-12);
        assert!(out.first_moment()[1].abs() < 1e-14);
        assert!((out.covariance() - DMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn apply_preserves_covariance_validity() {
        for seed in 0..10u64 {
            let n = 1 + (seed as usize) % 3;
            let ch = random_channel(n, seed);
            let st = random_state(n, seed.wrapping_add(17));
            let out = ch.apply(&st).unwrap();
            let d = symplectic_eigenvalues(out.covariance()).unwrap();
            assert!(d[0] >= 1.0 - 1e-8, "seed {seed}: d_min = {}", d[0]);
        }
    }

    #[test]
    fn composition_matches_sequential_application() {
        for seed in 0..8u64 {
            let n = 1 + (seed as usize) % 2;
            let ch1 = random_channel(n, seed);
            let ch2 = random_channel(n, seed.wrapping_add(101));
            let st = random_state(n, seed.wrapping_add(55));
            let sequential = ch2.apply(&ch1.apply(&st).unwrap()).unwrap();
            let composed = ch2.compose(&ch1).unwrap().apply(&st).unwrap();
            assert!(
                (sequential.first_moment() - composed.first_moment()).norm() < 1e-10,
                "seed {seed}"
            );
            assert!(
                (sequential.covariance() - composed.covariance()).norm() < 1e-10,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn min_energy_of_identity_channel_is_ground_energy() {
        let h = random_hamiltonian(2, 12);
        let ch = GaussianChannel::identity(2).unwrap();
        let e = min_output_energy(&ch, &h).unwrap();
        assert!((e - h.ground_energy()).abs() < 1e-10);
    }

    #[test]
    fn min_energy_of_attenuator_under_standard_hamiltonian() {
        for n in 1..=3usize {
            let h = QuadraticHamiltonian::standard(n).unwrap();
            let ch = GaussianChannel::attenuator(n, 0.37).unwrap();
            let e = min_output_energy(&ch, &h).unwrap();
            assert!((e - n as f64 / 2.0).abs() < 1e-10, "n = {n}: {e}");
        }
    }

    #[test]
    fn min_energy_of_amplifier_under_standard_hamiltonian() {
        let gain = 2.6;
        let h = QuadraticHamiltonian::standard(1).unwrap();
        let ch = GaussianChannel::amplifier(1, gain).unwrap();
        let e = min_output_energy(&ch, &h).unwrap();
        assert!((e - (gain - 0.5)).abs() < 1e-10);
    }

    #[test]
    fn optimal_input_for_identity_channel_is_displaced_vacuum() {
        let h = random_hamiltonian(1, 9);
        let ch = GaussianChannel::identity(1).unwrap();
        let opt = optimal_input_state(&ch, &h).unwrap();
        assert!((opt.first_moment() - h.center()).norm() < 1e-12);
        let d = symplectic_eigenvalues(opt.covariance()).unwrap();
        assert!((d[0] - 1.0).abs() < 1e-9, "optimal input must be pure");
    }

    #[test]
    fn optimal_input_for_attenuator_is_vacuum() {
        let h = QuadraticHamiltonian::standard(1).unwrap();
        let ch = GaussianChannel::attenuator(1, 0.6).unwrap();
        let opt = optimal_input_state(&ch, &h).unwrap();
        assert!((opt.covariance() - DMatrix::identity(2, 2)).norm() < 1e-9);
        assert!(opt.first_moment().norm() < 1e-12);
    }

    #[test]
    fn optimal_input_achieves_the_minimum() {
        for seed in 0..8u64 {
            let n = 1 + (seed as usize) % 3;
            let h = random_hamiltonian(n, seed.wrapping_add(23));
            let ch = random_channel(n, seed);
            let bound = min_output_energy(&ch, &h).unwrap();
            let opt = optimal_input_state(&ch, &h).unwrap();
            let achieved = energy(&h, &ch.apply(&opt).unwrap().moments()).unwrap();
            assert!(
                (achieved - bound).abs() <= 1e-8 * (1.0 + bound.abs()),
                "seed {seed}: achieved {achieved}, bound {bound}"
            );
        }
    }

    #[test]
    fn random_inputs_never_beat_the_bound() {
        for seed in 0..5u64 {
            let n = 1 + (seed as usize) % 2;
            let h = random_hamiltonian(n, seed.wrapping_add(3));
            let ch = random_channel(n, seed.wrapping_add(7));
            let bound = min_output_energy(&ch, &h).unwrap();
            for trial in 0..40u64 {
                let st = random_state(n, seed.wrapping_mul(97).wrapping_add(trial));
                let e = energy(&h, &ch.apply(&st).unwrap().moments()).unwrap();
                assert!(
                    e >= bound - 1e-8,
                    "seed {seed} trial {trial}: {e} < {bound}"
                );
            }
        }
    }

    #[test]
    fn singular_x_is_rejected() {
        let mut x = DMatrix::identity(2, 2);
        x[(1, 1)] = 0.0;
        // Y large enough to make the channel valid (measure-and-prepare-ish)
        let ch = GaussianChannel::new(x, DMatrix::identity(2, 2) * 3.0, DVector::zeros(2), None)
            .unwrap();
        let h = QuadraticHamiltonian::standard(1).unwrap();
        let err = min_output_energy(&ch, &h).unwrap_err();
        assert!(matches!(err, Error::UnsupportedInput(_)));
    }

    /// Valid random channel: X = symplectic-ish random matrix scaled, Y large
    /// enough to restore complete positivity.
    pub(crate) fn random_channel(n: usize, seed: u64) -> GaussianChannel {
        let s = crate::symplectic::random_symplectic(n, seed.wrapping_add(201), 0.5)
            .unwrap()
            .into_matrix();
        let scale = 0.6 + 0.8 * ((seed % 5) as f64) / 5.0;
        let x = s * scale;
        // Y + iΩ ⪰ iXΩXᵀ holds if Y ⪰ |1 − scale²·(symplectic)|... simplest
        // sufficient choice: Y = (1 + scale²)·I times a small margin.
        let y = DMatrix::identity(2 * n, 2 * n) * (1.0 + scale * scale) * 1.05;
        let mut disp = DVector::zeros(2 * n);
        for i in 0..2 * n {
            disp[i] = ((seed.wrapping_mul(31).wrapping_add(i as u64) % 13) as f64) / 13.0 - 0.5;
        }
        GaussianChannel::new(x, y, disp, None).unwrap()
    }
}
