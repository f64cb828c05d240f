//! Gaussian ergotropy and the thermodynamic quantities around it.
//!
//! The central identity: for a quadratic Hamiltonian with matrix h and a
//! state with covariance V, the lowest energy reachable by Gaussian
//! unitaries is (1/2) Σ_j d_j↑(h) d_j↓(V) — ascending symplectic spectrum
//! of h paired against the descending one of V. Everything else here
//! (optimal unitary, additivity, total ergotropy, Δ_tot, μ, the entropic
//! lower bound) is built on that pairing plus the Gibbs family.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::states::{
    energy, gaussian_entropy, intrinsic_beta, thermal_energy, thermal_nu, GaussianState,
    QuadraticHamiltonian, StateMoments,
};
use crate::symplectic::{symplectic_eigenvalues, williamson, SpectrumOrder, SymplecticMatrix};

/// Quantities that are nonnegative in exact arithmetic are clamped to zero
/// when within this tolerance below zero, and rejected beyond it.
pub const TOL_NEGATIVE: f64 = 1e-9;

/// Clamp a provably nonnegative quantity: float noise is forgiven,
/// anything below −[`TOL_NEGATIVE`] is treated as a logic failure.
fn clamp_nonnegative(value: f64, what: &str) -> Result<f64> {
    if value < -TOL_NEGATIVE {
        return Err(Error::NumericalFailure {
            message: format!("{what} came out negative"),
            residual: -value,
        });
    }
    Ok(value.max(0.0))
}

/// The optimal energy-extracting Gaussian unitary, stored as its action on
/// moments: m ↦ S(m + pre) + post, V ↦ SVSᵀ.
///
/// `pre_displacement` is −m(ρ) (applied first), `post_displacement` is the
/// Hamiltonian center r (applied last), and `s` is the composed S₂S₁ of the
/// two Williamson rotations.
#[derive(Debug, Clone)]
pub struct GaussianUnitaryDescriptor {
    pub s: SymplecticMatrix,
    pub pre_displacement: DVector<f64>,
    pub post_displacement: DVector<f64>,
}

impl GaussianUnitaryDescriptor {
    /// Action on a raw (m, V) pair.
    pub fn apply(&self, m: &DVector<f64>, v: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let s = self.s.matrix();
        let m_out = s * (m + &self.pre_displacement) + &self.post_displacement;
        let v_out = s * v * s.transpose();
        let v_out = (&v_out + v_out.transpose()) * 0.5;
        (m_out, v_out)
    }

    /// Action on moments; the entropy field rides along unchanged since the
    /// map is unitary.
    pub fn apply_to_moments(&self, state: &StateMoments) -> Result<StateMoments> {
        if state.n() != self.s.n() {
            return Err(Error::InvalidArgument(format!(
                "mode mismatch: descriptor acts on {} modes, state has {}",
                self.s.n(),
                state.n()
            )));
        }
        let (m, v) = self.apply(state.first_moment(), state.covariance());
        StateMoments::new(m, v, state.entropy())
    }
}

/// Everything [`gaussian_ergotropy`] reports.
#[derive(Debug, Clone)]
pub struct ErgotropyReport {
    pub energy: f64,
    pub passive_energy: f64,
    pub ergotropy: f64,
    /// Symplectic eigenvalues of h, ascending.
    pub d_h_ascending: Vec<f64>,
    /// Symplectic eigenvalues of V, descending.
    pub d_v_descending: Vec<f64>,
    pub unitary: GaussianUnitaryDescriptor,
}

/// Lowest energy reachable from covariance `v` with Gaussian unitaries:
/// (1/2) Σ_j d_j↑(h) d_j↓(V).
pub fn gaussian_passive_energy(
    hamiltonian: &QuadraticHamiltonian,
    v: &DMatrix<f64>,
) -> Result<f64> {
    let d_v = symplectic_eigenvalues(v)?;
    if d_v.len() != hamiltonian.n() {
        return Err(Error::InvalidArgument(format!(
            "mode mismatch: Hamiltonian has {} modes, covariance has {}",
            hamiltonian.n(),
            d_v.len()
        )));
    }
    let d_h = hamiltonian.symplectic_spectrum();
    Ok(paired_passive_energy(&d_h, &d_v))
}

/// (1/2) Σ d_h[j] · d_v[len−1−j]: `d_h` ascending against `d_v` ascending
/// reversed in place.
fn paired_passive_energy(d_h_ascending: &[f64], d_v_ascending: &[f64]) -> f64 {
    let n = d_h_ascending.len();
    0.5 * (0..n)
        .map(|j| d_h_ascending[j] * d_v_ascending[n - 1 - j])
        .sum::<f64>()
}

/// Gaussian ergotropy with the full report: energy, Gaussian-passive energy,
/// their difference, both spectra, and the optimal unitary.
pub fn gaussian_ergotropy(
    hamiltonian: &QuadraticHamiltonian,
    state: &StateMoments,
) -> Result<ErgotropyReport> {
    let e = energy(hamiltonian, state)?;
    let d_h = hamiltonian.symplectic_spectrum();
    let mut d_v = symplectic_eigenvalues(state.covariance())?;
    let passive = paired_passive_energy(&d_h, &d_v);
    let erg = clamp_nonnegative(e - passive, "Gaussian ergotropy")?;
    let unitary = optimal_gaussian_unitary(hamiltonian, state)?;
    d_v.reverse();
    Ok(ErgotropyReport {
        energy: e,
        passive_energy: passive,
        ergotropy: erg,
        d_h_ascending: d_h,
        d_v_descending: d_v,
        unitary,
    })
}

/// The optimal Gaussian unitary of the closed formula: undo the state's
/// displacement, rotate V into descending Williamson form (S₁), re-express in
/// the frame that diagonalizes h ascending (S₂), then displace to the
/// Hamiltonian center.
pub fn optimal_gaussian_unitary(
    hamiltonian: &QuadraticHamiltonian,
    state: &StateMoments,
) -> Result<GaussianUnitaryDescriptor> {
    if hamiltonian.n() != state.n() {
        return Err(Error::InvalidArgument(format!(
            "mode mismatch: Hamiltonian has {} modes, state has {}",
            hamiltonian.n(),
            state.n()
        )));
    }
    // V = W D↓ Wᵀ  ⇒  S₁ = W⁻¹ brings V to D↓.
    let w_v = williamson(state.covariance(), SpectrumOrder::Descending)?;
    let s1 = w_v.s.inverse();
    // h = W_h D↑ W_hᵀ  ⇒  S₂ = W_h⁻ᵀ satisfies S₂ᵀ h S₂ = D↑.
    let w_h = williamson(hamiltonian.matrix(), SpectrumOrder::Ascending)?;
    let s2 = w_h.s.inverse_transpose();
    let s = s2.compose(&s1)?;
    Ok(GaussianUnitaryDescriptor {
        s,
        pre_displacement: -state.first_moment(),
        post_displacement: hamiltonian.center().clone(),
    })
}

/// Image of the state under the optimal Gaussian unitary: m = r,
/// V = S₂ D↓(V) S₂ᵀ.
pub fn gaussian_passive_state(
    hamiltonian: &QuadraticHamiltonian,
    state: &StateMoments,
) -> Result<GaussianState> {
    let unitary = optimal_gaussian_unitary(hamiltonian, state)?;
    let (m, v) = unitary.apply(state.first_moment(), state.covariance());
    GaussianState::new(m, v)
}

/// Gaussian ergotropy of `n_copies` copies under the sum of local
/// Hamiltonians, evaluated directly on the composite system.
pub fn n_copy_gaussian_ergotropy(
    hamiltonian: &QuadraticHamiltonian,
    state: &StateMoments,
    n_copies: usize,
) -> Result<f64> {
    let h_tot = hamiltonian.n_copies(n_copies)?;
    let state_tot = state.n_copies(n_copies)?;
    Ok(gaussian_ergotropy(&h_tot, &state_tot)?.ergotropy)
}

/// Total ergotropy E(ρ) − E(τ_β*), with β* the intrinsic inverse temperature
/// matching the state's entropy. At the pure-state sentinel the Gibbs energy
/// is the ground energy (1/2) Σ d_j(h).
pub fn total_ergotropy(
    hamiltonian: &QuadraticHamiltonian,
    state: &StateMoments,
) -> Result<f64> {
    let s = state.entropy_required("total ergotropy")?;
    let e = energy(hamiltonian, state)?;
    let beta_star = intrinsic_beta(hamiltonian, s)?;
    let gibbs_energy = if beta_star.is_infinite() {
        hamiltonian.ground_energy()
    } else {
        thermal_energy(hamiltonian, beta_star)?
    };
    Ok(e - gibbs_energy)
}

/// Total non-Gaussian work potential, evaluated analytically:
/// (1/2) Σ_j d_j↑(h) (d_j↓(V) − coth(β* d_j↑(h)/2)).
pub fn delta_tot(hamiltonian: &QuadraticHamiltonian, state: &StateMoments) -> Result<f64> {
    let s = state.entropy_required("delta_tot")?;
    if hamiltonian.n() != state.n() {
        return Err(Error::InvalidArgument(format!(
            "mode mismatch: Hamiltonian has {} modes, state has {}",
            hamiltonian.n(),
            state.n()
        )));
    }
    let beta_star = intrinsic_beta(hamiltonian, s)?;
    let d_h = hamiltonian.symplectic_spectrum();
    let d_v = symplectic_eigenvalues(state.covariance())?;
    let n = d_h.len();
    let value = 0.5
        * (0..n)
            .map(|j| d_h[j] * (d_v[n - 1 - j] - thermal_nu(beta_star, d_h[j])))
            .sum::<f64>();
    clamp_nonnegative(value, "delta_tot")
}

/// Entropic non-Gaussianity μ(ρ) = S(δ(ρ)) − S(ρ), the relative-entropy
/// distance from the Gaussian set.
pub fn entropic_nongaussianity_mu(state: &StateMoments) -> Result<f64> {
    let s = state.entropy_required("entropic non-Gaussianity")?;
    let cap = gaussian_entropy(state.covariance())?;
    let mu = cap - s;
    if mu < -TOL_NEGATIVE {
        return Err(Error::InvalidArgument(format!(
            "entropy {s:.6e} exceeds the Gaussian entropy {cap:.6e}: maximum-entropy \
             property violated"
        )));
    }
    Ok(mu.max(0.0))
}

/// Outcome of the total-ergotropy lower bound E_tot ≥ μ/β* + E_G.
#[derive(Debug, Clone, Copy)]
pub struct TotbBoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Checks E_tot(ρ) ≥ μ(ρ)/β* + E_G(ρ). At the pure-state sentinel μ/β*
/// contributes its β* → ∞ limit, zero.
pub fn totb_lower_bound_check(
    hamiltonian: &QuadraticHamiltonian,
    state: &StateMoments,
) -> Result<TotbBoundCheck> {
    let s = state.entropy_required("total-ergotropy bound check")?;
    let lhs = total_ergotropy(hamiltonian, state)?;
    let mu = entropic_nongaussianity_mu(state)?;
    let beta_star = intrinsic_beta(hamiltonian, s)?;
    let mu_term = if beta_star.is_infinite() {
        0.0
    } else {
        mu / beta_star
    };
    let rhs = mu_term + gaussian_ergotropy(hamiltonian, state)?.ergotropy;
    Ok(TotbBoundCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - TOL_NEGATIVE,
    })
}
