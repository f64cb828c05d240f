//! Gaussian states, quadratic Hamiltonians, and the thermodynamic
//! state functions built on their moments.
//!
//! A state enters every formula only through its first moment m, its
//! covariance matrix V (anticommutator convention, vacuum V = I), and —
//! for the entropic quantities — its von Neumann entropy in nats.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{check_symmetric, mode_count};
use crate::symplectic::{
    concat_vectors, direct_sum, symplectic_eigenvalues, williamson, SpectrumOrder,
};

/// Covariance matrices may undershoot the uncertainty bound d_j ≥ 1 by this much.
pub const TOL_UNCERTAINTY: f64 = 1e-8;
/// Entropy targets below this are treated as the pure-state limit.
pub const TOL_ENTROPY: f64 = 1e-10;
/// Slack allowed on the maximum-entropy bound S(ρ) ≤ S(δ(ρ)).
pub const TOL_ENTROPY_CAP: f64 = 1e-9;
/// Iteration cap for the intrinsic-inverse-temperature bisection.
const BETA_SOLVER_MAX_ITERATIONS: usize = 200;

/// A Gaussian state: first moment m ∈ ℝ²ⁿ and covariance matrix V.
#[derive(Debug, Clone)]
pub struct GaussianState {
    n: usize,
    m: DVector<f64>,
    v: DMatrix<f64>,
}

impl GaussianState {
    /// Validates the moments: V symmetric and all symplectic eigenvalues
    /// ≥ 1 − [`TOL_UNCERTAINTY`].
    pub fn new(m: DVector<f64>, v: DMatrix<f64>) -> Result<Self> {
        let n = validate_moments(&m, &v)?;
        Ok(Self { n, m, v })
    }

    pub(crate) fn from_validated(m: DVector<f64>, v: DMatrix<f64>) -> Self {
        let n = v.nrows() / 2;
        Self { n, m, v }
    }

    /// The n-mode vacuum: m = 0, V = I.
    pub fn vacuum(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "mode count must be at least 1".into(),
            ));
        }
        Ok(Self::from_validated(
            DVector::zeros(2 * n),
            DMatrix::identity(2 * n, 2 * n),
        ))
    }

    /// Coherent state: displaced vacuum.
    pub fn coherent(displacement: DVector<f64>) -> Result<Self> {
        if displacement.len() == 0 || displacement.len() % 2 != 0 {
            return Err(Error::InvalidArgument(
                "displacement must have positive even length".into(),
            ));
        }
        let dim = displacement.len();
        Ok(Self::from_validated(
            displacement,
            DMatrix::identity(dim, dim),
        ))
    }

    /// Single-mode squeezed vacuum with V = diag(e^{2r}, e^{−2r}).
    pub fn squeezed_vacuum(r: f64) -> Self {
        let mut v = DMatrix::zeros(2, 2);
        v[(0, 0)] = (2.0 * r).exp();
        v[(1, 1)] = (-2.0 * r).exp();
        Self::from_validated(DVector::zeros(2), v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn first_moment(&self) -> &DVector<f64> {
        &self.m
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.v
    }

    /// Moments view with the exact Gaussian entropy attached.
    pub fn moments(&self) -> StateMoments {
        let entropy = gaussian_entropy(&self.v).expect("validated covariance");
        StateMoments {
            n: self.n,
            m: self.m.clone(),
            v: self.v.clone(),
            entropy: Some(entropy),
        }
    }

    /// Moments view without an entropy field.
    pub fn moments_without_entropy(&self) -> StateMoments {
        StateMoments {
            n: self.n,
            m: self.m.clone(),
            v: self.v.clone(),
            entropy: None,
        }
    }
}

/// Quadratic Hamiltonian (1/2)(R̂ − r)ᵀ h (R̂ − r) with h strictly positive.
#[derive(Debug, Clone)]
pub struct QuadraticHamiltonian {
    n: usize,
    h: DMatrix<f64>,
    r: DVector<f64>,
}

impl QuadraticHamiltonian {
    pub fn new(h: DMatrix<f64>, r: DVector<f64>) -> Result<Self> {
        let n = mode_count(&h, "Hamiltonian matrix")?;
        check_symmetric(&h, 1e-8, "Hamiltonian matrix")?;
        if r.len() != 2 * n {
            return Err(Error::InvalidArgument(format!(
                "center vector has length {}, expected {}",
                r.len(),
                2 * n
            )));
        }
        // The spectrum call also enforces strict positivity.
        symplectic_eigenvalues(&h)?;
        Ok(Self { n, h, r })
    }

    /// The standard Hamiltonian H₀ = (1/2) R̂ᵀR̂, i.e. h = I, r = 0.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "mode count must be at least 1".into(),
            ));
        }
        Ok(Self {
            n,
            h: DMatrix::identity(2 * n, 2 * n),
            r: DVector::zeros(2 * n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.h
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.r
    }

    /// Symplectic eigenvalues of h, ascending.
    pub fn symplectic_spectrum(&self) -> Vec<f64> {
        symplectic_eigenvalues(&self.h).expect("validated Hamiltonian matrix")
    }

    /// Ground-state energy (1/2) Σ d_j(h).
    pub fn ground_energy(&self) -> f64 {
        0.5 * self.symplectic_spectrum().iter().sum::<f64>()
    }

    /// n-fold copy: h^{(k)} = ⊕ h, r^{(k)} = (r, …, r).
    pub fn n_copies(&self, copies: usize) -> Result<QuadraticHamiltonian> {
        if copies == 0 {
            return Err(Error::InvalidArgument(
                "copy count must be at least 1".into(),
            ));
        }
        let mut h = self.h.clone();
        let mut r = self.r.clone();
        for _ in 1..copies {
            h = direct_sum(&h, &self.h);
            r = concat_vectors(&r, &self.r);
        }
        Ok(QuadraticHamiltonian {
            n: self.n * copies,
            h,
            r,
        })
    }
}

/// Moment-level description of a possibly non-Gaussian state: (m, V) and an
/// externally supplied entropy for states the covariance alone cannot capture.
#[derive(Debug, Clone)]
pub struct StateMoments {
    n: usize,
    m: DVector<f64>,
    v: DMatrix<f64>,
    entropy: Option<f64>,
}

impl StateMoments {
    /// Validates moments and, when present, the entropy: it must be
    /// nonnegative and at most the Gaussian entropy of V (maximum-entropy
    /// property of Gaussians at fixed moments).
    pub fn new(m: DVector<f64>, v: DMatrix<f64>, entropy: Option<f64>) -> Result<Self> {
        let n = validate_moments(&m, &v)?;
        if let Some(s) = entropy {
            if !s.is_finite() || s < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "entropy must be a nonnegative finite number, got {s}"
                )));
            }
            let cap = gaussian_entropy(&v)?;
            if s > cap + TOL_ENTROPY_CAP {
                return Err(Error::InvalidArgument(format!(
                    "entropy {s:.6e} exceeds the Gaussian entropy {cap:.6e} of the moments"
                )));
            }
        }
        Ok(Self { n, m, v, entropy })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn first_moment(&self) -> &DVector<f64> {
        &self.m
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn entropy(&self) -> Option<f64> {
        self.entropy
    }

    /// Entropy or an invalid-argument error naming the operation that needs it.
    pub fn entropy_required(&self, what: &str) -> Result<f64> {
        self.entropy.ok_or_else(|| {
            Error::InvalidArgument(format!("{what} requires the entropy field to be present"))
        })
    }

    /// Tensor power: moments of state^{⊗copies}; entropy is additive.
    pub fn n_copies(&self, copies: usize) -> Result<StateMoments> {
        if copies == 0 {
            return Err(Error::InvalidArgument(
                "copy count must be at least 1".into(),
            ));
        }
        let mut m = self.m.clone();
        let mut v = self.v.clone();
        for _ in 1..copies {
            m = concat_vectors(&m, &self.m);
            v = direct_sum(&v, &self.v);
        }
        Ok(StateMoments {
            n: self.n * copies,
            m,
            v,
            entropy: self.entropy.map(|s| s * copies as f64),
        })
    }
}

fn validate_moments(m: &DVector<f64>, v: &DMatrix<f64>) -> Result<usize> {
    let n = mode_count(v, "covariance matrix")?;
    if m.len() != 2 * n {
        return Err(Error::InvalidArgument(format!(
            "first moment has length {}, expected {}",
            m.len(),
            2 * n
        )));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(
            "first moment has non-finite entries".into(),
        ));
    }
    check_symmetric(v, 1e-8, "covariance matrix")?;
    let d = symplectic_eigenvalues(v)?;
    if let Some(&dmin) = d.first() {
        if dmin < 1.0 - TOL_UNCERTAINTY {
            return Err(Error::InvalidArgument(format!(
                "covariance violates the uncertainty relation: smallest symplectic \
                 eigenvalue {dmin:.9}"
            )));
        }
    }
    Ok(n)
}

/// Energy expectation (1/4)Tr[hV] + (1/2)(m − r)ᵀ h (m − r).
pub fn energy(hamiltonian: &QuadraticHamiltonian, state: &StateMoments) -> Result<f64> {
    if hamiltonian.n() != state.n() {
        return Err(Error::InvalidArgument(format!(
            "mode mismatch: Hamiltonian has {} modes, state has {}",
            hamiltonian.n(),
            state.n()
        )));
    }
    let h = hamiltonian.matrix();
    let trace_term = 0.25 * (h * state.covariance()).trace();
    let shift = state.first_moment() - hamiltonian.center();
    let displacement_term = 0.5 * (h * &shift).dot(&shift);
    Ok(trace_term + displacement_term)
}

/// Thermal occupation ν = coth(β d / 2); equals 1 at the β = ∞ sentinel.
pub fn thermal_nu(beta: f64, d: f64) -> f64 {
    if beta.is_infinite() {
        1.0
    } else {
        1.0 / (0.5 * beta * d).tanh()
    }
}

/// Gibbs state of a quadratic Hamiltonian: m = r and
/// V = S (⊕ ν_j I₂) Sᵀ where h = S⁻ᵀ D↑ S⁻¹ and ν_j = coth(β d_j↑ / 2).
///
/// `beta = f64::INFINITY` yields the ground state.
pub fn thermal_state(hamiltonian: &QuadraticHamiltonian, beta: f64) -> Result<GaussianState> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "inverse temperature must be positive, got {beta}"
        )));
    }
    let w = williamson(hamiltonian.matrix(), SpectrumOrder::Ascending)?;
    // h = S_w D↑ S_wᵀ, so the paper's S = S_w⁻ᵀ and V = S_w⁻ᵀ N S_w⁻¹.
    let s = w.s.inverse_transpose();
    let n_modes = hamiltonian.n();
    let mut nu_diag = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for (j, &dj) in w.d.iter().enumerate() {
        let nu = thermal_nu(beta, dj);
        nu_diag[(2 * j, 2 * j)] = nu;
        nu_diag[(2 * j + 1, 2 * j + 1)] = nu;
    }
    let v = s.matrix() * nu_diag * s.matrix().transpose();
    let v = (&v + v.transpose()) * 0.5;
    Ok(GaussianState::from_validated(
        hamiltonian.center().clone(),
        v,
    ))
}

/// Closed-form Gibbs energy (1/2) Σ d_j coth(β d_j / 2).
pub fn thermal_energy(hamiltonian: &QuadraticHamiltonian, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "inverse temperature must be positive, got {beta}"
        )));
    }
    Ok(hamiltonian
        .symplectic_spectrum()
        .iter()
        .map(|&d| 0.5 * d * thermal_nu(beta, d))
        .sum())
}

/// Entropy contribution of one mode with symplectic eigenvalue ν:
/// s(ν) = ((ν+1)/2)ln((ν+1)/2) − ((ν−1)/2)ln((ν−1)/2), with s(1) = 0.
pub fn thermal_mode_entropy(nu: f64) -> f64 {
    if nu - 1.0 < 1e-12 {
        return 0.0;
    }
    let up = 0.5 * (nu + 1.0);
    let dn = 0.5 * (nu - 1.0);
    up * up.ln() - dn * dn.ln()
}

/// Von Neumann entropy of the Gaussian state with covariance V, in nats.
pub fn gaussian_entropy(v: &DMatrix<f64>) -> Result<f64> {
    let d = symplectic_eigenvalues(v)?;
    let mut total = 0.0;
    for &nu in &d {
        if nu < 1.0 - TOL_UNCERTAINTY {
            return Err(Error::InvalidArgument(format!(
                "covariance violates the uncertainty relation: symplectic eigenvalue {nu:.9}"
            )));
        }
        total += thermal_mode_entropy(nu.max(1.0));
    }
    Ok(total)
}

/// Entropy of the Gibbs family at inverse temperature β for the spectrum `d`.
fn gibbs_entropy_from_spectrum(d: &[f64], beta: f64) -> f64 {
    d.iter()
        .map(|&dj| thermal_mode_entropy(thermal_nu(beta, dj)))
        .sum()
}

/// Intrinsic inverse temperature: the β* with S(τ_β*) = `target_entropy`.
///
/// Returns `f64::INFINITY` for targets at or below [`TOL_ENTROPY`]
/// (pure-state limit); downstream coth(β*d/2) evaluate to 1 there.
/// Solved by bracketed bisection on the strictly decreasing entropy map.
pub fn intrinsic_beta(hamiltonian: &QuadraticHamiltonian, target_entropy: f64) -> Result<f64> {
    if !target_entropy.is_finite() || target_entropy < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "target entropy must be a nonnegative finite number, got {target_entropy}"
        )));
    }
    if target_entropy <= TOL_ENTROPY {
        return Ok(f64::INFINITY);
    }
    let d = hamiltonian.symplectic_spectrum();
    let entropy_at = |beta: f64| gibbs_entropy_from_spectrum(&d, beta);

    let mut lo = 1.0;
    while entropy_at(lo) < target_entropy {
        lo *= 0.5;
        if lo < 1e-300 {
            break;
        }
    }
    let mut hi = 1.0;
    while entropy_at(hi) > target_entropy {
        hi *= 2.0;
        if hi > 1e300 {
            break;
        }
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..BETA_SOLVER_MAX_ITERATIONS {
        mid = 0.5 * (lo + hi);
        let s = entropy_at(mid);
        if (s - target_entropy).abs() <= TOL_ENTROPY {
            return Ok(mid);
        }
        if s > target_entropy {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// The Gaussian state with the same first and second moments; the entropy
/// field, if any, is dropped.
pub fn gaussianification(state: &StateMoments) -> GaussianState {
    GaussianState::from_validated(state.first_moment().clone(), state.covariance().clone())
}

/// Tensor product of Gaussian states: concatenated moments, block-diagonal
/// covariance.
pub fn tensor(states: &[GaussianState]) -> Result<GaussianState> {
    let first = states.first().ok_or_else(|| {
        Error::InvalidArgument("tensor product needs at least one state".into())
    })?;
    let mut m = first.first_moment().clone();
    let mut v = first.covariance().clone();
    for state in &states[1..] {
        m = concat_vectors(&m, state.first_moment());
        v = direct_sum(&v, state.covariance());
    }
    Ok(GaussianState::from_validated(m, v))
}
