//! Gaussian ergotropy of the textbook single-mode states.
//!
//! Under the standard Hamiltonian H₀ (h = I, r = 0): the vacuum is passive,
//! a coherent state holds exactly its displacement energy, and a squeezed
//! vacuum holds its squeezing energy.
//!
//! ```bash
//! cargo run --example ergotropy_basics
//! ```

use gaussian_ergotropy::ergotropy::gaussian_ergotropy;
use gaussian_ergotropy::states::{GaussianState, QuadraticHamiltonian};
use nalgebra::DVector;

fn main() {
    let h = QuadraticHamiltonian::standard(1).unwrap();

    let vacuum = GaussianState::vacuum(1).unwrap();
    let coherent = GaussianState::coherent(DVector::from_row_slice(&[1.5, 0.0])).unwrap();
    let squeezed = GaussianState::squeezed_vacuum(2.0_f64.ln()); // V = diag(4, 1/4)

    for (name, state) in [
        ("vacuum", vacuum),
        ("coherent (alpha = 1.5)", coherent),
        ("squeezed vacuum (r = ln 2)", squeezed),
    ] {
        let report = gaussian_ergotropy(&h, &state.moments()).unwrap();
        println!(
            "{name:28} energy {:8.5}   passive {:8.5}   ergotropy {:8.5}",
            report.energy, report.passive_energy, report.ergotropy
        );
    }

    // the optimal unitary actually extracts that energy: apply it and
    // re-measure
    let squeezed = GaussianState::squeezed_vacuum(2.0_f64.ln());
    let report = gaussian_ergotropy(&h, &squeezed.moments()).unwrap();
    let relaxed = report
        .unitary
        .apply_to_moments(&squeezed.moments())
        .unwrap();
    let after = gaussian_ergotropy(&h, &relaxed).unwrap();
    println!(
        "\nafter the optimal unitary:   energy {:8.5}   ergotropy {:8.5e}",
        after.energy, after.ergotropy
    );
}
