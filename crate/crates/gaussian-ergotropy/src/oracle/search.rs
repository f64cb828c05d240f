//! Derivative-free minimization of (1/4)Tr[h S V Sᵀ] over the symplectic
//! group.
//!
//! Restart starting points are sampled surjectively (onto the identity
//! component) as S = exp(ΩA) with A symmetric and random. Each restart runs
//! an adaptive-step coordinate descent that moves multiplicatively,
//! S ← exp(δ·ΩE_ab)·S, through the one-coordinate generators of sp(2n);
//! every such exponential has a closed form (a shear, a local squeeze, or a
//! nilpotent cross-mode move), so no matrix exponential appears in the hot
//! loop. The best restarts then get a finite-difference modified-Newton
//! polish in the same local coordinates, which walks down the nearly flat
//! valleys and off the misaligned-pairing saddles that defeat plain
//! coordinate moves.
//!
//! The search is deterministic: restart k draws from a seed derived from the
//! master seed and k alone, and restarts merge by minimum value. Execution
//! order cannot change the result.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{check_symmetric, mode_count, spd_sqrt};
use crate::sampling::derive_seed;
use crate::symplectic::{omega_matrix, SymplecticMatrix};

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Knobs of the symplectic search.
#[derive(Debug, Clone)]
pub struct SymplecticSearchConfig {
    /// Independent starts; the first is always S = I.
    pub restarts: usize,
    /// Sweep budget per restart and iteration budget for the polish.
    pub max_iterations: usize,
    /// Master seed for the restart starting points.
    pub seed: u64,
    /// Spread of the random starting points in the exp(ΩA) coordinates.
    pub step_scale: f64,
    /// Declared accuracy of the returned value.
    pub convergence_tol: f64,
}

impl Default for SymplecticSearchConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 120,
            seed: 1,
            step_scale: 0.9,
            convergence_tol: 1e-9,
        }
    }
}

impl SymplecticSearchConfig {
    fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::InvalidArgument(
                "search needs at least one restart".into(),
            ));
        }
        if self.max_iterations < 1 {
            return Err(Error::InvalidArgument(
                "search needs at least one iteration".into(),
            ));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::InvalidArgument(
                "convergence tolerance must be positive".into(),
            ));
        }
        if !(self.step_scale > 0.0) {
            return Err(Error::InvalidArgument(
                "step scale must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// What the minimizer found.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Best objective value (1/4)Tr[h S V Sᵀ] reached.
    pub value: f64,
    /// The symplectic matrix achieving it.
    pub best: SymplecticMatrix,
    /// False when the budget ran out before first-order stationarity and
    /// second-order non-negativity were reached; the best-so-far is still
    /// returned.
    pub converged: bool,
    /// Objective evaluations spent.
    pub evaluations: u64,
    pub restarts_used: usize,
}

const MAX_SEARCH_MODES: usize = 6;
const COARSE_STEP_INIT: f64 = 0.35;
const COARSE_STEP_FLOOR: f64 = 1e-4;
const STEP_GROW: f64 = 1.9;
const STEP_SHRINK: f64 = 0.5;
/// Candidates handed from the restart phase to the Newton polish.
const POLISH_CANDIDATES: usize = 3;
/// First-order stationarity target of the polish (sup-norm of the local
/// gradient, relative to max(1, |f|)).
const GRADIENT_TOL: f64 = 3e-8;
/// Eigenvalues of the local Hessian may undershoot zero by this much.
const CURVATURE_TOL: f64 = 1e-7;

struct Workspace<'a> {
    h: &'a DMatrix<f64>,
    v: &'a DMatrix<f64>,
    dim: usize,
    evaluations: u64,
}

impl<'a> Workspace<'a> {
    fn new(h: &'a DMatrix<f64>, v: &'a DMatrix<f64>) -> Self {
        Self {
            h,
            v,
            dim: h.nrows(),
            evaluations: 0,
        }
    }

    fn conjugated(&self, s: &DMatrix<f64>) -> DMatrix<f64> {
        s * self.v * s.transpose()
    }

    fn value_of_w(&mut self, w: &DMatrix<f64>) -> f64 {
        self.evaluations += 1;
        // h and W are symmetric, so Tr[hW] is their entrywise pairing
        0.25 * self.h.component_mul(w).sum()
    }

    fn value_of(&mut self, s: &DMatrix<f64>) -> f64 {
        let w = self.conjugated(s);
        self.value_of_w(&w)
    }
}

/// Index of the conjugate quadrature and the sign in Ωe_i = sign · e_partner.
fn omega_column(i: usize) -> (usize, f64) {
    if i % 2 == 0 {
        (i + 1, -1.0)
    } else {
        (i - 1, 1.0)
    }
}

/// Closed-form exp(δ · Ω E_ab) for the symmetric basis element
/// E_ab = e_a e_bᵀ + e_b e_aᵀ (a = b gives e_a e_aᵀ).
fn coordinate_move(dim: usize, a: usize, b: usize, delta: f64) -> DMatrix<f64> {
    let mut g = DMatrix::identity(dim, dim);
    if a == b {
        // single-quadrature shear: the generator is nilpotent of order 2
        let (ap, sign) = omega_column(a);
        g[(ap, a)] += sign * delta;
    } else if a / 2 == b / 2 {
        // conjugate pair of one mode: a local squeeze, diagonal exponential
        let (even, odd) = if a % 2 == 0 { (a, b) } else { (b, a) };
        g[(even, even)] = delta.exp();
        g[(odd, odd)] = (-delta).exp();
    } else {
        // cross-mode coupling: nilpotent of order 2
        let (ap, asign) = omega_column(a);
        let (bp, bsign) = omega_column(b);
        g[(ap, b)] += asign * delta;
        g[(bp, a)] += bsign * delta;
    }
    g
}

/// Group move along a dense tangent vector, composed from the
/// one-coordinate closed forms in a fixed order. This is the local chart the
/// polish differentiates in, so its composition order is immaterial as long
/// as it is consistent.
fn dense_move(dim: usize, coords: &[(usize, usize)], shift: &[f64]) -> DMatrix<f64> {
    let mut g = DMatrix::identity(dim, dim);
    for (ci, &(a, b)) in coords.iter().enumerate() {
        if shift[ci] != 0.0 {
            g = coordinate_move(dim, a, b, shift[ci]) * g;
        }
    }
    g
}

struct DescentState {
    s: DMatrix<f64>,
    w: DMatrix<f64>,
    f: f64,
}

impl DescentState {
    fn start(ws: &mut Workspace<'_>, s: DMatrix<f64>) -> Self {
        let w = ws.conjugated(&s);
        let f = ws.value_of_w(&w);
        Self { s, w, f }
    }

    fn accept(&mut self, g: &DMatrix<f64>, w_trial: DMatrix<f64>, f_trial: f64) {
        self.s = g * &self.s;
        self.w = w_trial;
        self.f = f_trial;
    }

    /// Re-derive W from S to shed accumulated drift.
    fn resync(&mut self, ws: &mut Workspace<'_>) {
        self.w = ws.conjugated(&self.s);
        self.f = ws.value_of_w(&self.w);
    }
}

/// Adaptive-step coordinate descent: grow a coordinate's step on success,
/// anneal it on failure, stop when the steps are exhausted.
fn coordinate_phase(ws: &mut Workspace<'_>, state: &mut DescentState, max_sweeps: usize) {
    let dim = ws.dim;
    let coords: Vec<(usize, usize)> = (0..dim)
        .flat_map(|i| (i..dim).map(move |j| (i, j)))
        .collect();
    let mut steps = vec![COARSE_STEP_INIT; coords.len()];
    let step_cap = 8.0 * COARSE_STEP_INIT;

    for sweep in 0..max_sweeps {
        let mut accepted_any = false;
        for (ci, &(a, b)) in coords.iter().enumerate() {
            let delta = steps[ci];
            let mut improved = false;
            for sign in [1.0, -1.0] {
                let g = coordinate_move(dim, a, b, sign * delta);
                let w_trial = &g * &state.w * g.transpose();
                let f_trial = ws.value_of_w(&w_trial);
                if f_trial < state.f {
                    state.accept(&g, w_trial, f_trial);
                    steps[ci] = (delta * STEP_GROW).min(step_cap);
                    improved = true;
                    accepted_any = true;
                    break;
                }
            }
            if !improved {
                steps[ci] = delta * STEP_SHRINK;
            }
        }
        let max_step = steps.iter().cloned().fold(0.0, f64::max);
        if max_step < COARSE_STEP_FLOOR || (!accepted_any && max_step < 1e-3) {
            break;
        }
        if sweep % 16 == 15 {
            state.resync(ws);
        }
    }
    state.resync(ws);
}

/// Central-difference gradient in the local chart.
fn fd_gradient(
    ws: &mut Workspace<'_>,
    state: &DescentState,
    coords: &[(usize, usize)],
) -> Vec<f64> {
    let dim = ws.dim;
    let fd = 1e-6;
    let mut grad = vec![0.0; coords.len()];
    for (ci, &(a, b)) in coords.iter().enumerate() {
        let gp = coordinate_move(dim, a, b, fd);
        let fp = ws.value_of_w(&(&gp * &state.w * gp.transpose()));
        let gm = coordinate_move(dim, a, b, -fd);
        let fm = ws.value_of_w(&(&gm * &state.w * gm.transpose()));
        grad[ci] = (fp - fm) / (2.0 * fd);
    }
    grad
}

/// Central-difference Hessian in the local chart.
fn fd_hessian(
    ws: &mut Workspace<'_>,
    state: &DescentState,
    coords: &[(usize, usize)],
) -> DMatrix<f64> {
    let dim = ws.dim;
    let k = coords.len();
    let fd = 1e-4;
    let f0 = state.f;
    let mut shift = vec![0.0; k];
    let value_at = |ws: &mut Workspace<'_>, shift: &[f64]| -> f64 {
        let g = dense_move(dim, coords, shift);
        ws.value_of_w(&(&g * &state.w * g.transpose()))
    };
    let mut hessian = DMatrix::zeros(k, k);
    for i in 0..k {
        shift[i] = fd;
        let fp = value_at(ws, &shift);
        shift[i] = -fd;
        let fm = value_at(ws, &shift);
        shift[i] = 0.0;
        hessian[(i, i)] = (fp + fm - 2.0 * f0) / (fd * fd);
    }
    for i in 0..k {
        for j in (i + 1)..k {
            let mut corner = |si: f64, sj: f64| {
                shift[i] = si * fd;
                shift[j] = sj * fd;
                let f = value_at(ws, &shift);
                shift[i] = 0.0;
                shift[j] = 0.0;
                f
            };
            let hij = (corner(1.0, 1.0) - corner(1.0, -1.0) - corner(-1.0, 1.0)
                + corner(-1.0, -1.0))
                / (4.0 * fd * fd);
            hessian[(i, j)] = hij;
            hessian[(j, i)] = hij;
        }
    }
    hessian
}

/// Backtracking line search along `direction`; accepts the first improving
/// point. `signed` also tries the reflected direction.
fn line_search(
    ws: &mut Workspace<'_>,
    state: &mut DescentState,
    coords: &[(usize, usize)],
    direction: &[f64],
    signed: bool,
) -> bool {
    let dim = ws.dim;
    let signs: &[f64] = if signed { &[1.0, -1.0] } else { &[1.0] };
    let mut t = 1.0;
    for _ in 0..30 {
        for &sign in signs {
            let shift: Vec<f64> = direction.iter().map(|d| sign * t * d).collect();
            let g = dense_move(dim, coords, &shift);
            let w_trial = &g * &state.w * g.transpose();
            let f_trial = ws.value_of_w(&w_trial);
            if f_trial < state.f {
                state.accept(&g, w_trial, f_trial);
                return true;
            }
        }
        t *= 0.5;
    }
    false
}

/// Finite-difference modified-Newton descent in the local chart. Returns
/// true when the point is first-order stationary with a numerically
/// nonnegative Hessian.
fn newton_polish(
    ws: &mut Workspace<'_>,
    state: &mut DescentState,
    max_iterations: usize,
) -> bool {
    let dim = ws.dim;
    let coords: Vec<(usize, usize)> = (0..dim)
        .flat_map(|i| (i..dim).map(move |j| (i, j)))
        .collect();
    let k = coords.len();

    for _ in 0..max_iterations {
        let grad = fd_gradient(ws, state, &coords);
        let gnorm = grad.iter().cloned().fold(0.0f64, |m, g| m.max(g.abs()));
        let hessian = fd_hessian(ws, state, &coords);
        let eig = hessian.symmetric_eigen();
        let lam_min = eig.eigenvalues.min();
        let lam_abs_max = eig.eigenvalues.amax().max(1e-12);

        if gnorm <= GRADIENT_TOL * state.f.abs().max(1.0) {
            if lam_min >= -CURVATURE_TOL * lam_abs_max {
                state.resync(ws);
                return true;
            }
            // stationary saddle: walk down the most negative curvature
            let mut min_idx = 0;
            for i in 1..k {
                if eig.eigenvalues[i] < eig.eigenvalues[min_idx] {
                    min_idx = i;
                }
            }
            let direction: Vec<f64> =
                eig.eigenvectors.column(min_idx).iter().cloned().collect();
            if !line_search(ws, state, &coords, &direction, true) {
                state.resync(ws);
                return true;
            }
            continue;
        }

        // modified-Newton step: damp small and negative curvature
        let floor = (1e-6 * lam_abs_max)
            .max(1.5 * (-lam_min).max(0.0))
            .max(1e-9);
        let g_vec = DVector::from_vec(grad.clone());
        let projected = eig.eigenvectors.transpose() * &g_vec;
        let mut step = DVector::zeros(k);
        for i in 0..k {
            let lam = eig.eigenvalues[i].max(floor);
            step += eig.eigenvectors.column(i) * (-projected[i] / lam);
        }
        let newton_dir: Vec<f64> = step.iter().cloned().collect();
        if !line_search(ws, state, &coords, &newton_dir, false) {
            // steepest descent as a fallback
            let gscale = 1.0 / gnorm.max(1e-12);
            let fallback: Vec<f64> = grad.iter().map(|g| -g * gscale).collect();
            if !line_search(ws, state, &coords, &fallback, false) {
                // no measurable descent direction left
                state.resync(ws);
                return gnorm <= 10.0 * GRADIENT_TOL * state.f.abs().max(1.0);
            }
        }
    }
    state.resync(ws);
    false
}

fn validate_inputs(h: &DMatrix<f64>, v: &DMatrix<f64>) -> Result<usize> {
    let n = mode_count(h, "Hamiltonian matrix")?;
    let n_v = mode_count(v, "covariance matrix")?;
    if n != n_v {
        return Err(Error::InvalidArgument(format!(
            "mode mismatch: h has {n} modes, V has {n_v}"
        )));
    }
    if n > MAX_SEARCH_MODES {
        return Err(Error::InvalidArgument(format!(
            "symplectic search is desk-scale only: {n} modes exceeds {MAX_SEARCH_MODES}"
        )));
    }
    check_symmetric(h, 1e-8, "Hamiltonian matrix")?;
    check_symmetric(v, 1e-8, "covariance matrix")?;
    spd_sqrt(h, 1e-12, "Hamiltonian matrix")?;
    spd_sqrt(v, 1e-12, "covariance matrix")?;
    Ok(n)
}

/// Random starting point S = exp(ΩA), A symmetric with uniform entries.
fn random_start(dim: usize, spread: f64, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let dist = Uniform::new(-spread, spread);
    let mut a = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = dist.sample(rng);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    (omega_matrix(dim / 2) * a).exp()
}

/// Minimizes (1/4)Tr[h S V Sᵀ] over S ∈ Sp(2n) with `restarts` independent
/// starts merged by minimum and a Newton polish of the best candidates.
///
/// Never errors on non-convergence: the best value found is returned with
/// `converged = false`.
pub fn minimize_passive_energy_numerical(
    h: &DMatrix<f64>,
    v: &DMatrix<f64>,
    config: &SymplecticSearchConfig,
) -> Result<SearchOutcome> {
    config.validate()?;
    let n = validate_inputs(h, v)?;
    let dim = 2 * n;
    let mut ws = Workspace::new(h, v);

    let mut candidates: Vec<DescentState> = Vec::with_capacity(config.restarts);
    for restart in 0..config.restarts {
        let start = if restart == 0 {
            DMatrix::identity(dim, dim)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, restart as u64));
            // vary the spread across restarts for basin coverage
            let spread = config.step_scale * (0.5 + (restart % 4) as f64 * 0.35);
            random_start(dim, spread, &mut rng)
        };
        let mut state = DescentState::start(&mut ws, start);
        coordinate_phase(&mut ws, &mut state, config.max_iterations);
        candidates.push(state);
    }
    candidates.sort_by(|a, b| a.f.partial_cmp(&b.f).expect("finite objective"));
    candidates.truncate(POLISH_CANDIDATES.max(1));

    let mut best: Option<(DescentState, bool)> = None;
    for mut state in candidates {
        let converged = newton_polish(&mut ws, &mut state, config.max_iterations);
        if best.as_ref().map_or(true, |(b, _)| state.f < b.f) {
            best = Some((state, converged));
        }
    }
    let (state, converged) = best.expect("at least one candidate");

    // report the value of the returned S itself, not the drift-prone cache
    let value = ws.value_of(&state.s);
    Ok(SearchOutcome {
        value,
        best: SymplecticMatrix::from_validated(state.s),
        converged,
        evaluations: ws.evaluations,
        restarts_used: config.restarts,
    })
}

/// Finite-difference gradient descent on the global exp(ΩA) coordinates:
/// central differences with Armijo backtracking. Slower but independent of
/// the coordinate-descent route.
pub fn minimize_passive_energy_gradient(
    h: &DMatrix<f64>,
    v: &DMatrix<f64>,
    config: &SymplecticSearchConfig,
) -> Result<SearchOutcome> {
    config.validate()?;
    let n = validate_inputs(h, v)?;
    let dim = 2 * n;
    let mut ws = Workspace::new(h, v);
    let k = dim * (dim + 1) / 2;
    let fd_step = 1e-6;

    let eval_params = |ws: &mut Workspace<'_>, p: &[f64]| -> f64 {
        let mut a = DMatrix::zeros(dim, dim);
        let mut idx = 0;
        for i in 0..dim {
            for j in i..dim {
                a[(i, j)] = p[idx];
                a[(j, i)] = p[idx];
                idx += 1;
            }
        }
        let s = (omega_matrix(dim / 2) * a).exp();
        ws.value_of(&s)
    };

    let mut best_value = f64::INFINITY;
    let mut best_params = vec![0.0; k];
    let mut any_converged = false;
    for restart in 0..config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, restart as u64));
        let dist = Uniform::new(-config.step_scale, config.step_scale);
        let mut params: Vec<f64> = if restart == 0 {
            vec![0.0; k]
        } else {
            (0..k).map(|_| dist.sample(&mut rng)).collect()
        };
        let mut f = eval_params(&mut ws, &params);
        let mut converged = false;
        for _ in 0..config.max_iterations {
            let mut grad = vec![0.0; k];
            for i in 0..k {
                let orig = params[i];
                params[i] = orig + fd_step;
                let fp = eval_params(&mut ws, &params);
                params[i] = orig - fd_step;
                let fm = eval_params(&mut ws, &params);
                params[i] = orig;
                grad[i] = (fp - fm) / (2.0 * fd_step);
            }
            let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
            if gnorm2.sqrt() < config.convergence_tol {
                converged = true;
                break;
            }
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let trial: Vec<f64> = params
                    .iter()
                    .zip(&grad)
                    .map(|(p, g)| p - t * g)
                    .collect();
                let f_trial = eval_params(&mut ws, &trial);
                if f_trial <= f - 1e-4 * t * gnorm2 {
                    params = trial;
                    f = f_trial;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                converged = true;
                break;
            }
        }
        any_converged |= converged;
        if f < best_value {
            best_value = f;
            best_params = params;
        }
    }

    let mut a = DMatrix::zeros(dim, dim);
    let mut idx = 0;
    for i in 0..dim {
        for j in i..dim {
            a[(i, j)] = best_params[idx];
            a[(j, i)] = best_params[idx];
            idx += 1;
        }
    }
    let s = (omega_matrix(dim / 2) * a).exp();
    Ok(SearchOutcome {
        value: best_value,
        best: SymplecticMatrix::from_validated(s),
        converged: any_converged,
        evaluations: ws.evaluations,
        restarts_used: config.restarts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ergotropy::gaussian_passive_energy;
    use crate::sampling::{random_covariance, random_hamiltonian_in, random_spd_matrix};

    fn quick_config(restarts: usize, seed: u64) -> SymplecticSearchConfig {
        SymplecticSearchConfig {
            restarts,
            max_iterations: 120,
            seed,
            step_scale: 0.9,
            convergence_tol: 1e-9,
        }
    }

    #[test]
    fn coordinate_moves_are_symplectic() {
        for dim in [2usize, 4, 6] {
            for a in 0..dim {
                for b in a..dim {
                    let g = coordinate_move(dim, a, b, 0.37);
                    assert!(
                        crate::symplectic::is_symplectic(&g, 1e-12).unwrap(),
                        "dim {dim} coord ({a},{b})"
                    );
                }
            }
        }
    }

    #[test]
    fn identity_problem_stays_at_identity() {
        let h = DMatrix::identity(2, 2);
        let v = DMatrix::identity(2, 2);
        let out = minimize_passive_energy_numerical(&h, &v, &quick_config(1, 3)).unwrap();
        assert!((out.value - 0.5).abs() < 1e-9);
        assert!((out.best.matrix() - DMatrix::identity(2, 2)).norm() < 1e-9);
        assert!(out.converged);
    }

    #[test]
    fn unsqueezing_reaches_the_vacuum_energy() {
        let h = DMatrix::identity(2, 2);
        let v = DMatrix::from_diagonal(&DVector::from_row_slice(&[4.0, 0.25]));
        let out = minimize_passive_energy_numerical(&h, &v, &quick_config(4, 5)).unwrap();
        assert!(
            (out.value - 0.5).abs() < 1e-6,
            "value {} should reach 0.5",
            out.value
        );
    }

    #[test]
    fn mode_swap_is_discovered() {
        // d↑(h) = (1, 2), d↓(V) = (3, 1) placed adversarially: optimum 2.5
        let h = DMatrix::from_diagonal(&DVector::from_row_slice(&[1.0, 1.0, 2.0, 2.0]));
        let v = DMatrix::from_diagonal(&DVector::from_row_slice(&[1.0, 1.0, 3.0, 3.0]));
        let out = minimize_passive_energy_numerical(&h, &v, &quick_config(16, 11)).unwrap();
        assert!(
            (out.value - 2.5).abs() / 2.5 < 1e-6,
            "value {} should reach 2.5",
            out.value
        );
    }

    #[test]
    fn search_never_beats_the_closed_formula() {
        for seed in 0..6u64 {
            let n = 1 + (seed as usize) % 3;
            let h_mat = random_spd_matrix(n, seed, (0.4, 2.2)).unwrap();
            let v = random_covariance(n, seed.wrapping_add(100), 3.0).unwrap();
            let out =
                minimize_passive_energy_numerical(&h_mat, &v, &quick_config(6, seed)).unwrap();
            let h = crate::states::QuadraticHamiltonian::new(
                h_mat.clone(),
                DVector::zeros(2 * n),
            )
            .unwrap();
            let closed = gaussian_passive_energy(&h, &v).unwrap();
            assert!(
                out.value >= closed - 1e-9,
                "seed {seed}: search {} beats formula {closed}",
                out.value
            );
        }
    }

    #[test]
    fn search_is_deterministic() {
        let h = random_spd_matrix(2, 8, (0.5, 2.0)).unwrap();
        let v = random_covariance(2, 9, 2.5).unwrap();
        let a = minimize_passive_energy_numerical(&h, &v, &quick_config(4, 17)).unwrap();
        let b = minimize_passive_energy_numerical(&h, &v, &quick_config(4, 17)).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.best.matrix(), b.best.matrix());
        assert_eq!(a.evaluations, b.evaluations);
    }

    #[test]
    fn search_rejects_oversized_problems() {
        let h = DMatrix::identity(16, 16);
        let v = DMatrix::identity(16, 16);
        assert!(minimize_passive_energy_numerical(&h, &v, &quick_config(1, 1)).is_err());
    }

    #[test]
    fn returned_matrix_is_symplectic_and_matches_value() {
        let h = random_spd_matrix(2, 31, (0.4, 2.0)).unwrap();
        let v = random_covariance(2, 32, 3.0).unwrap();
        let out = minimize_passive_energy_numerical(&h, &v, &quick_config(6, 33)).unwrap();
        assert!(crate::symplectic::is_symplectic(out.best.matrix(), 1e-9).unwrap());
        let direct =
            0.25 * (&h * out.best.matrix() * &v * out.best.matrix().transpose()).trace();
        assert!((direct - out.value).abs() < 1e-10);
    }

    #[test]
    fn gradient_mode_agrees_on_a_small_case() {
        let h_mat = random_spd_matrix(1, 21, (0.5, 2.0)).unwrap();
        let v = random_covariance(1, 22, 3.0).unwrap();
        let cfg = quick_config(4, 23);
        let cd = minimize_passive_energy_numerical(&h_mat, &v, &cfg).unwrap();
        let gd = minimize_passive_energy_gradient(&h_mat, &v, &cfg).unwrap();
        assert!(
            (cd.value - gd.value).abs() < 1e-5,
            "coordinate {} vs gradient {}",
            cd.value,
            gd.value
        );
    }

    #[test]
    fn search_matches_formula_on_random_instances() {
        for seed in 0..6u64 {
            let n = 1 + (seed as usize) % 3;
            let h = random_hamiltonian_in(n, seed, (0.4, 2.0)).unwrap();
            let v = random_covariance(n, seed.wrapping_add(50), 3.0).unwrap();
            let closed = gaussian_passive_energy(&h, &v).unwrap();
            let out = minimize_passive_energy_numerical(
                h.matrix(),
                &v,
                &quick_config(12, seed.wrapping_add(7)),
            )
            .unwrap();
            let rel = (out.value - closed) / closed;
            assert!(
                rel.abs() <= 1e-4,
                "seed {seed} n {n}: search {} vs formula {closed} (rel {rel:.2e})",
                out.value
            );
        }
    }
}
