//! Sampled check of the trace rearrangement inequality
//! Tr[D₁↑ S D₂↓ Sᵀ] ≥ Tr[D₁↑ D₂↓] over symplectic S.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::sampling::derive_seed;
use crate::symplectic::random_symplectic;

/// Outcome of a rearrangement sweep.
#[derive(Debug, Clone, Copy)]
pub struct RearrangementSweep {
    /// Smallest margin Tr[D₁SD₂Sᵀ] − Tr[D₁D₂] seen.
    pub worst_margin: f64,
    /// True when every margin is ≥ −1e−9.
    pub all_hold: bool,
    pub trials: usize,
}

fn validate_spectra(d_h_ascending: &[f64], d_v_descending: &[f64]) -> Result<usize> {
    let n = d_h_ascending.len();
    if n == 0 || d_v_descending.len() != n {
        return Err(Error::InvalidArgument(format!(
            "spectra must be nonempty and of equal length, got {} and {}",
            n,
            d_v_descending.len()
        )));
    }
    let finite_nonneg = |xs: &[f64]| xs.iter().all(|x| x.is_finite() && *x >= 0.0);
    if !finite_nonneg(d_h_ascending) || !finite_nonneg(d_v_descending) {
        return Err(Error::InvalidArgument(
            "spectra must be finite and nonnegative".into(),
        ));
    }
    if d_h_ascending.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument(
            "first spectrum must be sorted ascending".into(),
        ));
    }
    if d_v_descending.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(
            "second spectrum must be sorted descending".into(),
        ));
    }
    Ok(n)
}

/// Margin Tr[D₁↑ S D₂↓ Sᵀ] − Tr[D₁↑ D₂↓] for one symplectic sample, where
/// D₁, D₂ carry each spectrum value twice (once per quadrature).
///
/// For S = I the two traces are the same floating-point expression, so the
/// margin is exactly zero.
pub fn rearrangement_margin(
    d_h_ascending: &[f64],
    d_v_descending: &[f64],
    s: &DMatrix<f64>,
) -> Result<f64> {
    let n = validate_spectra(d_h_ascending, d_v_descending)?;
    if s.nrows() != 2 * n || s.ncols() != 2 * n {
        return Err(Error::InvalidArgument(format!(
            "sample must be {}x{}, got {}x{}",
            2 * n,
            2 * n,
            s.nrows(),
            s.ncols()
        )));
    }
    let dup = |d: &[f64], i: usize| d[i / 2];
    // Tr[D₁ S D₂ Sᵀ] = Σ_ij d₁(i) S_ij² d₂(j)
    let mut conjugated = 0.0;
    for i in 0..2 * n {
        let mut row = 0.0;
        for j in 0..2 * n {
            row += s[(i, j)] * s[(i, j)] * dup(d_v_descending, j);
        }
        conjugated += dup(d_h_ascending, i) * row;
    }
    let mut baseline = 0.0;
    for i in 0..2 * n {
        let mut row = 0.0;
        for j in 0..2 * n {
            let sij = if i == j { 1.0 } else { 0.0 };
            row += sij * sij * dup(d_v_descending, j);
        }
        baseline += dup(d_h_ascending, i) * row;
    }
    Ok(conjugated - baseline)
}

/// Samples `trials` random symplectic matrices at the given spread and
/// reports the minimum margin and whether every margin stayed ≥ −1e−9.
pub fn check_rearrangement_lemma(
    d_h_ascending: &[f64],
    d_v_descending: &[f64],
    trials: usize,
    seed: u64,
    scale: f64,
) -> Result<RearrangementSweep> {
    let n = validate_spectra(d_h_ascending, d_v_descending)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mut worst = f64::INFINITY;
    for t in 0..trials {
        let s = random_symplectic(n, derive_seed(seed, t as u64), scale)?;
        let margin = rearrangement_margin(d_h_ascending, d_v_descending, s.matrix())?;
        if margin < worst {
            worst = margin;
        }
    }
    Ok(RearrangementSweep {
        worst_margin: worst,
        all_hold: worst >= -1e-9,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_margin_is_exactly_zero() {
        let d1 = [1.0, 2.0];
        let d2 = [3.0, 1.0];
        let s = DMatrix::identity(4, 4);
        assert_eq!(rearrangement_margin(&d1, &d2, &s).unwrap(), 0.0);
    }

    #[test]
    fn hand_computed_baseline() {
        // D₁ = diag(1,1,2,2), D₂ = diag(3,3,1,1): Tr[D₁D₂] = 2(1·3 + 2·1) = 10
        let d1 = [1.0, 2.0];
        let d2 = [3.0, 1.0];
        let s = crate::symplectic::random_symplectic(2, 4, 1.0).unwrap();
        let margin = rearrangement_margin(&d1, &d2, s.matrix()).unwrap();
        // recompute the conjugated trace directly from matrices
        let diag = |d: &[f64]| {
            let mut m = DMatrix::zeros(4, 4);
            for j in 0..2 {
                m[(2 * j, 2 * j)] = d[j];
                m[(2 * j + 1, 2 * j + 1)] = d[j];
            }
            m
        };
        let full = (diag(&d1) * s.matrix() * diag(&d2) * s.matrix().transpose()).trace();
        assert!((margin - (full - 10.0)).abs() < 1e-10);
        assert!(margin >= -1e-12);
    }

    #[test]
    fn scalar_case_reduces_to_trace_bound() {
        // n = 1 with d₁ = d₂ = 1: margin = Tr[SSᵀ]/... ≥ 0 ⟺ Tr[SSᵀ] ≥ 2
        let d = [1.0];
        for seed in 0..50u64 {
            let s = crate::symplectic::random_symplectic(1, seed, 1.5).unwrap();
            let margin = rearrangement_margin(&d, &d, s.matrix()).unwrap();
            let trace = (s.matrix() * s.matrix().transpose()).trace();
            assert!((margin - (trace - 2.0)).abs() < 1e-12);
            assert!(trace >= 2.0 - 1e-12, "seed {seed}: Tr[SSᵀ] = {trace}");
        }
    }

    #[test]
    fn sweep_holds_across_sizes_and_scales() {
        for n in 1..=4usize {
            let d1: Vec<f64> = (0..n).map(|j| 0.5 + j as f64).collect();
            let d2: Vec<f64> = (0..n).map(|j| 3.0 - 0.5 * j as f64).collect();
            for &scale in &[0.5, 1.0, 2.0] {
                let sweep = check_rearrangement_lemma(&d1, &d2, 60, 7, scale).unwrap();
                assert!(
                    sweep.all_hold,
                    "n={n} scale={scale}: worst {}",
                    sweep.worst_margin
                );
            }
        }
    }

    #[test]
    fn rejects_misordered_spectra() {
        assert!(check_rearrangement_lemma(&[2.0, 1.0], &[3.0, 1.0], 5, 1, 1.0).is_err());
        assert!(check_rearrangement_lemma(&[1.0, 2.0], &[1.0, 3.0], 5, 1, 1.0).is_err());
        assert!(check_rearrangement_lemma(&[1.0], &[1.0, 2.0], 5, 1, 1.0).is_err());
    }
}
