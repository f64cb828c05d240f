//! Symplectic linear algebra in xpxp ordering.
//!
//! Everything in this crate uses the quadrature ordering
//! (x₁, p₁, …, xₙ, pₙ), so the symplectic form is the block-diagonal
//! matrix Ω = ⊕ⁿ [[0, 1], [−1, 0]]. The xxpp world is reached only through
//! [`xpxp_to_xxpp_permutation`].

use nalgebra::{DMatrix, DVector};
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{check_symmetric, mode_count, spd_sqrt, symmetric_eigenvalues_sorted};

/// Default tolerance for the symplectic residual ‖SΩSᵀ − Ω‖_F.
pub const TOL_SYMPLECTIC: f64 = 1e-8;
/// Default relative tolerance for Williamson reconstruction ‖SDSᵀ − M‖_F / ‖M‖_F.
pub const TOL_RECONSTRUCTION: f64 = 1e-8;
/// Relative positivity screen: eigenvalues must exceed this times ‖M‖₂.
pub const EPS_POSITIVE_DEFINITE: f64 = 1e-12;
/// Condition-number cap beyond which factorizations refuse to run.
pub const CONDITION_CAP: f64 = 1e12;

/// Requested ordering of a symplectic spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumOrder {
    Ascending,
    Descending,
}

/// The symplectic form Ω on `n` modes in xpxp ordering.
#[derive(Debug, Clone)]
pub struct SymplecticForm {
    n: usize,
    omega: DMatrix<f64>,
}

/// Builds Ω on `n` modes. Errors on `n = 0`.
pub fn symplectic_form(n: usize) -> Result<SymplecticForm> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "mode count must be at least 1".into(),
        ));
    }
    Ok(SymplecticForm {
        n,
        omega: omega_matrix(n),
    })
}

impl SymplecticForm {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.omega
    }
}

/// Ω as a bare matrix (internal, callers guarantee n ≥ 1).
pub(crate) fn omega_matrix(n: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        omega[(2 * j, 2 * j + 1)] = 1.0;
        omega[(2 * j + 1, 2 * j)] = -1.0;
    }
    omega
}

/// A real matrix verified to satisfy SΩSᵀ = Ω within tolerance.
#[derive(Debug, Clone)]
pub struct SymplecticMatrix {
    n: usize,
    s: DMatrix<f64>,
}

impl SymplecticMatrix {
    /// Validates and wraps `s`. The residual test is
    /// ‖SΩSᵀ − Ω‖_F ≤ tol · (1 + ‖S‖_F²).
    pub fn new(s: DMatrix<f64>, tol: f64) -> Result<Self> {
        let n = mode_count(&s, "symplectic matrix")?;
        let res = symplectic_residual(&s);
        let bound = tol * (1.0 + s.norm().powi(2));
        if res > bound {
            return Err(Error::NumericalFailure {
                message: format!(
                    "matrix is not symplectic within tolerance (bound {bound:.3e})"
                ),
                residual: res,
            });
        }
        Ok(Self { n, s })
    }

    /// Wraps a matrix that is symplectic by construction.
    pub(crate) fn from_validated(s: DMatrix<f64>) -> Self {
        let n = s.nrows() / 2;
        Self { n, s }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.s
    }

    /// Exact group inverse S⁻¹ = −ΩSᵀΩ, cheaper and better conditioned
    /// than an LU solve.
    pub fn inverse(&self) -> SymplecticMatrix {
        let omega = omega_matrix(self.n);
        let inv = -(&omega * self.s.transpose() * &omega);
        SymplecticMatrix::from_validated(inv)
    }

    /// S⁻ᵀ = −ΩSΩ, also exact in the group.
    pub fn inverse_transpose(&self) -> SymplecticMatrix {
        let omega = omega_matrix(self.n);
        let invt = -(&omega * &self.s * &omega);
        SymplecticMatrix::from_validated(invt)
    }

    /// Group product self · other.
    pub fn compose(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.n != other.n {
            return Err(Error::InvalidArgument(format!(
                "mode mismatch in symplectic product: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(SymplecticMatrix::from_validated(&self.s * &other.s))
    }

    /// ‖SΩSᵀ − Ω‖_F of the wrapped matrix.
    pub fn residual(&self) -> f64 {
        symplectic_residual(&self.s)
    }
}

fn symplectic_residual(s: &DMatrix<f64>) -> f64 {
    let n = s.nrows() / 2;
    let omega = omega_matrix(n);
    (s * &omega * s.transpose() - &omega).norm()
}

/// True iff ‖SΩSᵀ − Ω‖_F ≤ tol. Errors on odd dimension.
pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> Result<bool> {
    mode_count(s, "candidate symplectic matrix")?;
    Ok(symplectic_residual(s) <= tol)
}

/// Symplectic eigenvalues of a symmetric positive-definite matrix,
/// sorted ascending.
///
/// These are the moduli of the eigenvalues of iΩM, which come in ± pairs;
/// each modulus is reported once. Computed through the antisymmetric matrix
/// K = M^{1/2} Ω M^{1/2}: the eigenvalues of KᵀK are the d_j², each doubled.
pub fn symplectic_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = mode_count(m, "input matrix")?;
    check_symmetric(m, 1e-8, "input matrix")?;
    let factors = spd_sqrt(m, EPS_POSITIVE_DEFINITE, "input matrix")?;
    let omega = omega_matrix(n);
    let k = &factors.sqrt * &omega * &factors.sqrt;
    let w = k.transpose() * &k;
    let paired = symmetric_eigenvalues_sorted(&w);
    let mut d = Vec::with_capacity(n);
    for j in 0..n {
        let avg = 0.5 * (paired[2 * j] + paired[2 * j + 1]);
        d.push(avg.max(0.0).sqrt());
    }
    Ok(d)
}

/// Result of a Williamson decomposition M = S D Sᵀ with D = ⊕ d_j I₂.
#[derive(Debug, Clone)]
pub struct WilliamsonResult {
    pub s: SymplecticMatrix,
    /// Symplectic eigenvalues in the caller-requested order.
    pub d: Vec<f64>,
}

impl WilliamsonResult {
    /// The diagonal factor ⊕ d_j I₂ matching the order of `d`.
    pub fn diagonal_matrix(&self) -> DMatrix<f64> {
        let n = self.d.len();
        let mut diag = DMatrix::zeros(2 * n, 2 * n);
        for (j, &dj) in self.d.iter().enumerate() {
            diag[(2 * j, 2 * j)] = dj;
            diag[(2 * j + 1, 2 * j + 1)] = dj;
        }
        diag
    }

    /// S D Sᵀ, for residual checks.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        self.s.matrix() * self.diagonal_matrix() * self.s.matrix().transpose()
    }
}

/// Williamson decomposition of a symmetric strictly positive matrix.
///
/// Route: B = M^{1/2} by symmetric eigendecomposition; the antisymmetric
/// K = BΩB is brought to canonical block form ⊕ d_j [[0,1],[−1,0]] by a real
/// Schur reduction (orthogonal Q); then S = B Q D^{−1/2} satisfies both
/// SΩSᵀ = Ω and SDSᵀ = M.
pub fn williamson(m: &DMatrix<f64>, order: SpectrumOrder) -> Result<WilliamsonResult> {
    let n = mode_count(m, "input matrix")?;
    check_symmetric(m, 1e-8, "input matrix")?;
    let factors = spd_sqrt(m, EPS_POSITIVE_DEFINITE, "input matrix")?;
    let cond = factors.max_eigenvalue / factors.min_eigenvalue;
    if cond > CONDITION_CAP {
        return Err(Error::NumericalFailure {
            message: format!("condition number {cond:.3e} exceeds cap {CONDITION_CAP:.1e}"),
            residual: cond,
        });
    }
    let b = &factors.sqrt;
    let omega = omega_matrix(n);
    let k = b * &omega * b;

    let schur = nalgebra::linalg::Schur::try_new(k.clone(), 1e-14, 100_000).ok_or_else(|| {
        Error::NumericalFailure {
            message: "Schur reduction of the antisymmetric kernel did not converge".into(),
            residual: f64::NAN,
        }
    })?;
    let (mut q, _) = schur.unpack();
    // Recompute the reduced form from Q; for antisymmetric K it is block
    // diagonal with 2x2 blocks [[0, t_j], [-t_j, 0]] up to roundoff.
    let t = q.transpose() * &k * &q;
    let mut d_unordered = Vec::with_capacity(n);
    for j in 0..n {
        let tj = 0.5 * (t[(2 * j, 2 * j + 1)] - t[(2 * j + 1, 2 * j)]);
        if tj < 0.0 {
            q.swap_columns(2 * j, 2 * j + 1);
        }
        d_unordered.push(tj.abs());
    }

    // Stable sort of the mode blocks into the requested order.
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        d_unordered[a]
            .partial_cmp(&d_unordered[b])
            .expect("non-finite symplectic eigenvalue")
    });
    if order == SpectrumOrder::Descending {
        idx.reverse();
    }
    let mut q_sorted = DMatrix::zeros(2 * n, 2 * n);
    let mut d = Vec::with_capacity(n);
    for (slot, &j) in idx.iter().enumerate() {
        q_sorted.set_column(2 * slot, &q.column(2 * j));
        q_sorted.set_column(2 * slot + 1, &q.column(2 * j + 1));
        d.push(d_unordered[j]);
    }

    // S = B Q D^{-1/2}
    let mut s = b * q_sorted;
    for (j, &dj) in d.iter().enumerate() {
        let scale = 1.0 / dj.sqrt();
        s.column_mut(2 * j).scale_mut(scale);
        s.column_mut(2 * j + 1).scale_mut(scale);
    }

    let result = WilliamsonResult {
        s: SymplecticMatrix::from_validated(s),
        d,
    };

    let sym_res = result.s.residual();
    let sym_bound = TOL_SYMPLECTIC * (1.0 + result.s.matrix().norm().powi(2));
    let recon_res = (result.reconstruct() - m).norm();
    let recon_bound = TOL_RECONSTRUCTION * m.norm();
    if sym_res > sym_bound || recon_res > recon_bound {
        return Err(Error::NumericalFailure {
            message: "Williamson factors failed the residual checks".into(),
            residual: sym_res.max(recon_res),
        });
    }
    Ok(result)
}

/// Deterministic random symplectic matrix exp(ΩA) with A symmetric and
/// entries drawn i.i.d. uniform on (−scale, scale).
pub fn random_symplectic(n: usize, seed: u64, scale: f64) -> Result<SymplecticMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "mode count must be at least 1".into(),
        ));
    }
    if !(scale > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "scale must be positive, got {scale}"
        )));
    }
    let dim = 2 * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new(-scale, scale);
    let mut a = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = dist.sample(&mut rng);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    let generator = omega_matrix(n) * a;
    Ok(SymplecticMatrix::from_validated(generator.exp()))
}

/// Orthogonal permutation P with P Ω_xpxp Pᵀ = [[0, I], [−I, 0]], i.e. the
/// reshuffle (x₁,p₁,…,xₙ,pₙ) → (x₁,…,xₙ,p₁,…,pₙ).
pub fn xpxp_to_xxpp_permutation(n: usize) -> Result<DMatrix<f64>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "mode count must be at least 1".into(),
        ));
    }
    let mut p = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        p[(i, 2 * i)] = 1.0;
        p[(n + i, 2 * i + 1)] = 1.0;
    }
    Ok(p)
}

/// Block-diagonal concatenation diag(A, B). Mode ordering inside each block
/// is preserved.
pub fn direct_sum(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    assert!(a.is_square() && b.is_square(), "direct_sum needs square blocks");
    let (na, nb) = (a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(na + nb, na + nb);
    out.view_mut((0, 0), (na, na)).copy_from(a);
    out.view_mut((na, na), (nb, nb)).copy_from(b);
    out
}

/// Concatenation of two vectors, the first-moment companion of [`direct_sum`].
pub fn concat_vectors(a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(a.len() + b.len());
    out.rows_mut(0, a.len()).copy_from(a);
    out.rows_mut(a.len(), b.len()).copy_from(b);
    out
}
