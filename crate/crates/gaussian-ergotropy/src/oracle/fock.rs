//! Single-mode truncated Fock-space oracle.
//!
//! Everything here works on dense N×N complex matrices: quadratures from the
//! ladder operator, moments by tracing, entropies and relative entropies from
//! Hermitian eigendecompositions, passive states by explicit eigenvector
//! rearrangement, and Gibbs states normalized after truncation. The only
//! uncontrolled approximation is the cutoff, quantified by the population in
//! the top two levels.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::ergotropy::gaussian_passive_energy;
use crate::states::{QuadraticHamiltonian, StateMoments};

type C64 = Complex<f64>;
/// Dense complex matrix, the substrate of the Fock oracle.
pub type ComplexMatrix = DMatrix<C64>;

/// States whose top-two-level population exceeds this are rejected.
pub const DEFAULT_TAIL_LIMIT: f64 = 1e-8;

/// Truncated quadrature operators of a single bosonic mode.
#[derive(Debug, Clone)]
pub struct FockOperatorSet {
    cutoff: usize,
    x_op: ComplexMatrix,
    p_op: ComplexMatrix,
}

/// Builds x and p at the given cutoff from the standard ladder operator.
/// Only single-mode sets are supported (desk scale); `cutoff ≥ 4`.
pub fn build_fock_operators(n_modes: usize, cutoff: usize) -> Result<FockOperatorSet> {
    if n_modes != 1 {
        return Err(Error::InvalidArgument(format!(
            "the Fock oracle is single-mode only, got {n_modes} modes"
        )));
    }
    if cutoff < 4 {
        return Err(Error::InvalidArgument(format!(
            "cutoff must be at least 4, got {cutoff}"
        )));
    }
    let mut annihilate = ComplexMatrix::zeros(cutoff, cutoff);
    for k in 1..cutoff {
        annihilate[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
    }
    let create = annihilate.adjoint();
    let inv_sqrt2 = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let x_op = (&annihilate + &create) * inv_sqrt2;
    let p_op = (&create - &annihilate) * (C64::new(0.0, 1.0) * inv_sqrt2);
    Ok(FockOperatorSet {
        cutoff,
        x_op,
        p_op,
    })
}

impl FockOperatorSet {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn x_op(&self) -> &ComplexMatrix {
        &self.x_op
    }

    pub fn p_op(&self) -> &ComplexMatrix {
        &self.p_op
    }

    /// Population in the top two levels of `rho`, the truncation diagnostic.
    pub fn truncation_tail(&self, rho: &ComplexMatrix) -> f64 {
        truncation_tail(rho)
    }

    /// Truncation of the standard Hamiltonian H₀ = (x² + p²)/2.
    pub fn standard_hamiltonian_matrix(&self) -> ComplexMatrix {
        let xx = &self.x_op * &self.x_op;
        let pp = &self.p_op * &self.p_op;
        (xx + pp) * C64::new(0.5, 0.0)
    }

    /// Truncation of a general single-mode quadratic Hamiltonian
    /// (1/2)(R̂ − r)ᵀ h (R̂ − r).
    pub fn hamiltonian_matrix(&self, hamiltonian: &QuadraticHamiltonian) -> Result<ComplexMatrix> {
        if hamiltonian.n() != 1 {
            return Err(Error::InvalidArgument(format!(
                "the Fock oracle is single-mode only, Hamiltonian has {} modes",
                hamiltonian.n()
            )));
        }
        let h = hamiltonian.matrix();
        let r = hamiltonian.center();
        let eye = ComplexMatrix::identity(self.cutoff, self.cutoff);
        let xs = &self.x_op - &eye * C64::new(r[0], 0.0);
        let ps = &self.p_op - &eye * C64::new(r[1], 0.0);
        let mut out = ComplexMatrix::zeros(self.cutoff, self.cutoff);
        out += &xs * &xs * C64::new(h[(0, 0)], 0.0);
        out += &ps * &ps * C64::new(h[(1, 1)], 0.0);
        out += (&xs * &ps + &ps * &xs) * C64::new(h[(0, 1)], 0.0);
        out *= C64::new(0.5, 0.0);
        Ok(out)
    }
}

fn truncation_tail(rho: &ComplexMatrix) -> f64 {
    let n = rho.nrows();
    rho[(n - 1, n - 1)].re + rho[(n - 2, n - 2)].re
}

fn check_hermitian(m: &ComplexMatrix, what: &str) -> Result<()> {
    let defect = (m - m.adjoint()).norm();
    if defect > 1e-10 * (1.0 + m.norm()) {
        return Err(Error::InvalidArgument(format!(
            "{what} is not Hermitian: defect {defect:.3e}"
        )));
    }
    Ok(())
}

/// Full density-matrix validation: Hermitian, PSD, unit trace within 1e−10.
fn validate_density_matrix(rho: &ComplexMatrix) -> Result<()> {
    if !rho.is_square() || rho.nrows() < 2 {
        return Err(Error::InvalidArgument(
            "density matrix must be square with dimension at least 2".into(),
        ));
    }
    check_hermitian(rho, "density matrix")?;
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "density matrix trace is {trace}, expected 1"
        )));
    }
    let min_eig = rho.clone().symmetric_eigen().eigenvalues.min();
    if min_eig < -1e-10 {
        return Err(Error::InvalidArgument(format!(
            "density matrix has negative eigenvalue {min_eig:.3e}"
        )));
    }
    Ok(())
}

fn check_tail(rho: &ComplexMatrix) -> Result<()> {
    let tail = truncation_tail(rho);
    if tail > DEFAULT_TAIL_LIMIT {
        return Err(Error::TruncationTail {
            tail,
            limit: DEFAULT_TAIL_LIMIT,
        });
    }
    Ok(())
}

/// |k⟩⟨k| at the given cutoff.
pub fn fock_state_projector(cutoff: usize, k: usize) -> Result<ComplexMatrix> {
    if k >= cutoff {
        return Err(Error::InvalidArgument(format!(
            "Fock level {k} does not fit below cutoff {cutoff}"
        )));
    }
    let mut rho = ComplexMatrix::zeros(cutoff, cutoff);
    rho[(k, k)] = C64::new(1.0, 0.0);
    Ok(rho)
}

/// Normalized even cat (|α⟩ + |−α⟩)/N projected onto the truncated space.
pub fn even_cat_projector(cutoff: usize, alpha: f64) -> Result<ComplexMatrix> {
    if !alpha.is_finite() || alpha == 0.0 {
        return Err(Error::InvalidArgument(
            "cat amplitude must be finite and nonzero".into(),
        ));
    }
    let mut coeff = DVector::<C64>::zeros(cutoff);
    // unnormalized coherent coefficients α^k/√(k!) on even k only
    let mut t = 1.0;
    coeff[0] = C64::new(t, 0.0);
    for k in 1..cutoff {
        t *= alpha / (k as f64).sqrt();
        if k % 2 == 0 {
            coeff[k] = C64::new(t, 0.0);
        }
    }
    let norm = coeff.norm();
    coeff /= C64::new(norm, 0.0);
    Ok(&coeff * coeff.adjoint())
}

/// Squeezed-vacuum state vector with real squeezing parameter `r`
/// (V = diag(e^{−2r}, e^{2r}) … sign convention: positive `r` squeezes x).
pub fn squeezed_vacuum_vector(cutoff: usize, r: f64) -> Result<DVector<C64>> {
    if !r.is_finite() {
        return Err(Error::InvalidArgument(
            "squeezing parameter must be finite".into(),
        ));
    }
    let t = r.tanh();
    let mut coeff = DVector::<C64>::zeros(cutoff);
    let mut c = 1.0;
    coeff[0] = C64::new(c, 0.0);
    let mut k = 2;
    while k < cutoff {
        // c_{2m} = c_{2m−2} · (−tanh r) · √((2m−1)/(2m))
        c *= -t * ((k as f64 - 1.0) / k as f64).sqrt();
        coeff[k] = C64::new(c, 0.0);
        k += 2;
    }
    let norm = coeff.norm();
    coeff /= C64::new(norm, 0.0);
    Ok(coeff)
}

/// Geometric thermal state with mean occupation `nbar`, normalized after
/// truncation.
pub fn thermal_density_matrix(cutoff: usize, nbar: f64) -> Result<ComplexMatrix> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "mean occupation must be a nonnegative finite number, got {nbar}"
        )));
    }
    let mut rho = ComplexMatrix::zeros(cutoff, cutoff);
    if nbar == 0.0 {
        rho[(0, 0)] = C64::new(1.0, 0.0);
        return Ok(rho);
    }
    let ratio = nbar / (nbar + 1.0);
    let mut w = 1.0;
    let mut z = 0.0;
    for k in 0..cutoff {
        rho[(k, k)] = C64::new(w, 0.0);
        z += w;
        w *= ratio;
    }
    Ok(rho / C64::new(z, 0.0))
}

/// Gibbs state e^{−βH}/Z of a truncated Hamiltonian, normalized after
/// truncation. `beta = ∞` yields the (possibly degenerate) ground projector.
pub fn gibbs_density_matrix(h_matrix: &ComplexMatrix, beta: f64) -> Result<ComplexMatrix> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "inverse temperature must be positive, got {beta}"
        )));
    }
    check_hermitian(h_matrix, "Hamiltonian matrix")?;
    let eig = h_matrix.clone().symmetric_eigen();
    let e_min = eig.eigenvalues.min();
    let dim = h_matrix.nrows();
    let mut weights = DVector::zeros(dim);
    for k in 0..dim {
        weights[k] = if beta.is_infinite() {
            if eig.eigenvalues[k] - e_min < 1e-12 {
                1.0
            } else {
                0.0
            }
        } else {
            (-(beta * (eig.eigenvalues[k] - e_min))).exp()
        };
    }
    let z: f64 = weights.sum();
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for k in 0..dim {
        let col = eig.eigenvectors.column(k);
        let w = C64::new(weights[k] / z, 0.0);
        // rho += w · v v†
        rho.gerc(w, &col, &col, C64::new(1.0, 0.0));
    }
    Ok(rho)
}

/// Inverse temperature whose truncated Gibbs state has the requested von
/// Neumann entropy; `∞` for targets at or below 1e−10.
pub fn gibbs_beta_for_entropy(h_matrix: &ComplexMatrix, target_entropy: f64) -> Result<f64> {
    if !target_entropy.is_finite() || target_entropy < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "target entropy must be a nonnegative finite number, got {target_entropy}"
        )));
    }
    if target_entropy <= 1e-10 {
        return Ok(f64::INFINITY);
    }
    check_hermitian(h_matrix, "Hamiltonian matrix")?;
    let eig = h_matrix.clone().symmetric_eigen();
    let e_min = eig.eigenvalues.min();
    let shifted: Vec<f64> = eig.eigenvalues.iter().map(|e| e - e_min).collect();
    let cap = (shifted.len() as f64).ln();
    if target_entropy >= cap {
        return Err(Error::InvalidArgument(format!(
            "target entropy {target_entropy:.3} exceeds the truncated capacity {cap:.3}"
        )));
    }
    let entropy_at = |beta: f64| -> f64 {
        let mut z = 0.0;
        let mut ez = 0.0;
        for &e in &shifted {
            let w = (-(beta * e)).exp();
            z += w;
            ez += w * e;
        }
        // S = ln Z + β⟨E⟩
        z.ln() + beta * ez / z
    };
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
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let s = entropy_at(mid);
        if (s - target_entropy).abs() <= 1e-12 {
            break;
        }
        if s > target_entropy {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// Von Neumann entropy −Tr[ρ ln ρ] in nats (0·ln 0 = 0).
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    validate_density_matrix(rho)?;
    let eig = rho.clone().symmetric_eigen();
    let s: f64 = eig
        .eigenvalues
        .iter()
        .filter(|&&lam| lam > 0.0)
        .map(|&lam| -lam * lam.ln())
        .sum();
    // eigenvalues like 1 + ε leave O(ε) noise behind
    Ok(s.max(0.0))
}

/// Quantum relative entropy D(ρ‖σ) = Tr[ρ(ln ρ − ln σ)]; σ must be
/// full rank (as truncated Gibbs matrices are).
pub fn relative_entropy(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    validate_density_matrix(rho)?;
    validate_density_matrix(sigma)?;
    if rho.nrows() != sigma.nrows() {
        return Err(Error::InvalidArgument(format!(
            "dimension mismatch: {} vs {}",
            rho.nrows(),
            sigma.nrows()
        )));
    }
    let rho_eig = rho.clone().symmetric_eigen();
    let tr_rho_ln_rho: f64 = rho_eig
        .eigenvalues
        .iter()
        .filter(|&&lam| lam > 0.0)
        .map(|&lam| lam * lam.ln())
        .sum();

    let sigma_eig = sigma.clone().symmetric_eigen();
    let mu_min = sigma_eig.eigenvalues.min();
    if mu_min <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "relative entropy needs a full-rank reference state, smallest \
             eigenvalue {mu_min:.3e}"
        )));
    }
    // Tr[ρ ln σ] = Σ_j ln μ_j ⟨w_j|ρ|w_j⟩
    let transformed = sigma_eig.eigenvectors.adjoint() * rho * &sigma_eig.eigenvectors;
    let mut tr_rho_ln_sigma = 0.0;
    for j in 0..sigma.nrows() {
        tr_rho_ln_sigma += transformed[(j, j)].re * sigma_eig.eigenvalues[j].ln();
    }
    Ok(tr_rho_ln_rho - tr_rho_ln_sigma)
}

/// The passive state of ρ under H: eigenvalues of ρ in decreasing order
/// placed on the eigenvectors of H in increasing energy order.
pub fn passive_density_matrix(
    rho: &ComplexMatrix,
    h_matrix: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    validate_density_matrix(rho)?;
    check_hermitian(h_matrix, "Hamiltonian matrix")?;
    if rho.nrows() != h_matrix.nrows() {
        return Err(Error::InvalidArgument(format!(
            "dimension mismatch: {} vs {}",
            rho.nrows(),
            h_matrix.nrows()
        )));
    }
    let dim = rho.nrows();
    let mut lambdas: Vec<f64> = rho
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|l| l.max(0.0))
        .collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let h_eig = h_matrix.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        h_eig.eigenvalues[a]
            .partial_cmp(&h_eig.eigenvalues[b])
            .unwrap()
    });

    let mut passive = ComplexMatrix::zeros(dim, dim);
    for (slot, &col_idx) in order.iter().enumerate() {
        let col = h_eig.eigenvectors.column(col_idx);
        passive.gerc(
            C64::new(lambdas[slot], 0.0),
            &col,
            &col,
            C64::new(1.0, 0.0),
        );
    }
    Ok(passive)
}

/// Re Tr[Hρ].
pub fn fock_energy(rho: &ComplexMatrix, h_matrix: &ComplexMatrix) -> Result<f64> {
    if rho.nrows() != h_matrix.nrows() || !rho.is_square() || !h_matrix.is_square() {
        return Err(Error::InvalidArgument(
            "energy needs square matrices of equal dimension".into(),
        ));
    }
    Ok((h_matrix * rho).trace().re)
}

/// First moment, covariance matrix, and von Neumann entropy of a truncated
/// density matrix, packaged as [`StateMoments`].
pub fn fock_moments_and_entropy(
    rho: &ComplexMatrix,
    ops: &FockOperatorSet,
) -> Result<StateMoments> {
    if rho.nrows() != ops.cutoff() {
        return Err(Error::InvalidArgument(format!(
            "density matrix dimension {} does not match cutoff {}",
            rho.nrows(),
            ops.cutoff()
        )));
    }
    validate_density_matrix(rho)?;
    check_tail(rho)?;
    let mean = |op: &ComplexMatrix| (op * rho).trace().re;
    let m_x = mean(&ops.x_op);
    let m_p = mean(&ops.p_op);
    let xx = mean(&(&ops.x_op * &ops.x_op));
    let pp = mean(&(&ops.p_op * &ops.p_op));
    let xp_sym = ((&ops.x_op * &ops.p_op + &ops.p_op * &ops.x_op) * rho).trace().re;
    let mut v = DMatrix::zeros(2, 2);
    v[(0, 0)] = 2.0 * xx - 2.0 * m_x * m_x;
    v[(1, 1)] = 2.0 * pp - 2.0 * m_p * m_p;
    v[(0, 1)] = xp_sym - 2.0 * m_x * m_p;
    v[(1, 0)] = v[(0, 1)];
    let entropy = von_neumann_entropy(rho)?;
    StateMoments::new(DVector::from_row_slice(&[m_x, m_p]), v, Some(entropy))
}

/// Standard (unrestricted-unitary) ergotropy at the truncated level:
/// Tr[Hρ] − Σ_i λ_i↑(H) λ_i↓(ρ).
pub fn fock_standard_ergotropy(rho: &ComplexMatrix, h_matrix: &ComplexMatrix) -> Result<f64> {
    validate_density_matrix(rho)?;
    check_tail(rho)?;
    check_hermitian(h_matrix, "Hamiltonian matrix")?;
    if rho.nrows() != h_matrix.nrows() {
        return Err(Error::InvalidArgument(format!(
            "dimension mismatch: {} vs {}",
            rho.nrows(),
            h_matrix.nrows()
        )));
    }
    let e = fock_energy(rho, h_matrix)?;
    let mut h_vals: Vec<f64> = h_matrix
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .collect();
    h_vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut rho_vals: Vec<f64> = rho
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|l| l.max(0.0))
        .collect();
    rho_vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let passive: f64 = h_vals.iter().zip(&rho_vals).map(|(h, l)| h * l).sum();
    Ok(e - passive)
}

/// Non-Gaussian work potential Δ = E(ρ_G↓) − E(ρ↓): the Gaussian-passive
/// energy from the state's truncated moments minus the truncated passive
/// energy. Must be ≥ −1e−8.
pub fn non_gaussian_work_potential(
    rho: &ComplexMatrix,
    h_matrix: &ComplexMatrix,
    hamiltonian: &QuadraticHamiltonian,
    ops: &FockOperatorSet,
) -> Result<f64> {
    let moments = fock_moments_and_entropy(rho, ops)?;
    let gaussian_passive = gaussian_passive_energy(hamiltonian, moments.covariance())?;
    let standard_passive = fock_energy(rho, h_matrix)? - fock_standard_ergotropy(rho, h_matrix)?;
    let delta = gaussian_passive - standard_passive;
    if delta < -1e-8 {
        return Err(Error::NumericalFailure {
            message: "non-Gaussian work potential came out negative".into(),
            residual: -delta,
        });
    }
    Ok(delta.max(0.0))
}
