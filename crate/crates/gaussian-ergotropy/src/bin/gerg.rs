//! Command-line front end: load states, Hamiltonians, and channels from
//! JSON, run the library computations, print a JSON or CSV report.
//!
//! Exit codes: 0 success, 2 validation error (machine-readable JSON error
//! object on stdout), 3 numerical failure, 64 unknown command.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DVector;

use gaussian_ergotropy::channels::{min_output_energy, optimal_input_state};
use gaussian_ergotropy::ergotropy::{
    delta_tot, entropic_nongaussianity_mu, gaussian_ergotropy, gaussian_passive_energy,
    optimal_gaussian_unitary, total_ergotropy,
};
use gaussian_ergotropy::error::Error;
use gaussian_ergotropy::io::{
    self, ChannelFile, ChannelMinReportFile, DeltaTotReportFile, ErgotropyReportFile,
    ErrorReportFile, FockCheckReportFile, HamiltonianFile, LemmaReportFile, MatrixFile,
    OracleReportFile, OracleSweepReportFile, StateFile, ToCsv, TotalErgotropyReportFile,
    WilliamsonReportFile,
};
use gaussian_ergotropy::oracle::{
    build_fock_operators, check_rearrangement_lemma, fock_energy, fock_moments_and_entropy,
    fock_standard_ergotropy, fock_state_projector, minimize_passive_energy_numerical,
    non_gaussian_work_potential, rearrangement_margin, SymplecticSearchConfig,
};
use gaussian_ergotropy::sampling::{derive_seed, random_covariance, random_spd_matrix};
use gaussian_ergotropy::states::{
    energy, intrinsic_beta, thermal_energy, thermal_state, QuadraticHamiltonian,
};
use gaussian_ergotropy::symplectic::{williamson, SpectrumOrder};

#[derive(Parser)]
#[command(
    name = "gerg",
    version,
    about = "Gaussian ergotropy toolbox for bosonic quadratic Hamiltonians",
    after_help = "Conventions: hbar = 1, vacuum covariance = identity, xpxp quadrature \
                  ordering, entropies in nats. All files carry \"layout\": \"xpxp\"."
)]
struct Cli {
    /// Report format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, ValueEnum)]
enum Order {
    Ascending,
    Descending,
}

#[derive(Subcommand)]
enum Command {
    /// Gaussian ergotropy of a state under a quadratic Hamiltonian.
    Ergotropy {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
    /// Moments of the Gaussian-passive state (optimal-unitary image).
    PassiveState {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
    /// Williamson decomposition of a symmetric positive-definite matrix.
    Williamson {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = Order::Ascending)]
        order: Order,
    },
    /// Gibbs state of a quadratic Hamiltonian at inverse temperature beta.
    Thermal {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        beta: f64,
    },
    /// Total ergotropy (entropy field required on the state).
    TotalErgotropy {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
    /// Total non-Gaussian work potential, both evaluation routes.
    DeltaTot {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        state: PathBuf,
    },
    /// Minimum output energy of a Gaussian channel and the optimal input.
    ChannelMin {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        hamiltonian: PathBuf,
        /// Override for the complete-positivity tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Sweep the symplectic rearrangement inequality with random samples.
    VerifyLemma {
        /// Mode count of the sampled spectra.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Spread of the symplectic sampler.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Compare the closed passive-energy formula against the numerical
    /// symplectic minimizer on random instances.
    VerifyOracle {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        cases: usize,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Relative agreement required of each case.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Single-photon end-to-end quantities at a Fock cutoff, with
    /// double-cutoff stability.
    FockCheck {
        #[arg(long, default_value_t = 32)]
        cutoff: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    ExitCode::SUCCESS
                }
                ErrorKind::InvalidSubcommand | ErrorKind::UnknownArgument => {
                    eprint!("{err}");
                    ExitCode::from(64)
                }
                _ => {
                    eprint!("{err}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match run(&cli) {
        Ok(report) => {
            println!("{report}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let (code, kind) = classify(&err);
            println!("{}", io::to_json(&ErrorReportFile::new(kind, err.to_string())));
            ExitCode::from(code)
        }
    }
}

fn classify(err: &Error) -> (u8, &'static str) {
    match err {
        Error::NumericalFailure { .. } => (3, "numerical-failure"),
        Error::InvalidChannel { .. } => (2, "invalid-channel"),
        Error::UnsupportedInput(_) => (2, "unsupported-input"),
        Error::TruncationTail { .. } => (2, "truncation"),
        Error::InvalidArgument(_) => (2, "invalid-argument"),
    }
}

fn load<T: for<'de> serde::Deserialize<'de>>(path: &Path, what: &str) -> Result<T, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::InvalidArgument(format!("{what} {}: {e}", path.display()))
    })?;
    io::from_json_str(&text, what)
}

fn render<T: serde::Serialize + ToCsv>(format: Format, report: &T) -> String {
    match format {
        Format::Json => io::to_json(report),
        Format::Csv => report.to_csv(),
    }
}

fn run(cli: &Cli) -> Result<String, Error> {
    match &cli.command {
        Command::Ergotropy { hamiltonian, state } => {
            let h = load::<HamiltonianFile>(hamiltonian, "Hamiltonian file")?.into_hamiltonian()?;
            let st = load::<StateFile>(state, "state file")?.into_moments()?;
            let report = gaussian_ergotropy(&h, &st)?;
            Ok(render(cli.format, &ErgotropyReportFile::from_report(&report)))
        }
        Command::PassiveState { hamiltonian, state } => {
            let h = load::<HamiltonianFile>(hamiltonian, "Hamiltonian file")?.into_hamiltonian()?;
            let st = load::<StateFile>(state, "state file")?.into_moments()?;
            let unitary = optimal_gaussian_unitary(&h, &st)?;
            let moved = unitary.apply_to_moments(&st)?;
            Ok(render(cli.format, &StateFile::from_moments(&moved)))
        }
        Command::Williamson { matrix, order } => {
            let m = load::<MatrixFile>(matrix, "matrix file")?.into_matrix()?;
            let (ord, name) = match order {
                Order::Ascending => (SpectrumOrder::Ascending, "ascending"),
                Order::Descending => (SpectrumOrder::Descending, "descending"),
            };
            let w = williamson(&m, ord)?;
            Ok(render(
                cli.format,
                &WilliamsonReportFile::from_result(&w, &m, name),
            ))
        }
        Command::Thermal { hamiltonian, beta } => {
            let h = load::<HamiltonianFile>(hamiltonian, "Hamiltonian file")?.into_hamiltonian()?;
            let tau = thermal_state(&h, *beta)?;
            Ok(render(cli.format, &StateFile::from_state(&tau)))
        }
        Command::TotalErgotropy { hamiltonian, state } => {
            let h = load::<HamiltonianFile>(hamiltonian, "Hamiltonian file")?.into_hamiltonian()?;
            let st = load::<StateFile>(state, "state file")?.into_moments()?;
            let entropy = st.entropy_required("total ergotropy")?;
            let total = total_ergotropy(&h, &st)?;
            let beta_star = intrinsic_beta(&h, entropy)?;
            let gibbs_energy = if beta_star.is_infinite() {
                h.ground_energy()
            } else {
                thermal_energy(&h, beta_star)?
            };
            Ok(render(
                cli.format,
                &TotalErgotropyReportFile {
                    total_ergotropy: total,
                    energy: energy(&h, &st)?,
                    gibbs_energy,
                    beta_star: beta_star.is_finite().then_some(beta_star),
                    entropy,
                },
            ))
        }
        Command::DeltaTot { hamiltonian, state } => {
            let h = load::<HamiltonianFile>(hamiltonian, "Hamiltonian file")?.into_hamiltonian()?;
            let st = load::<StateFile>(state, "state file")?.into_moments()?;
            let entropy = st.entropy_required("delta_tot")?;
            let direct = delta_tot(&h, &st)?;
            let via_difference =
                total_ergotropy(&h, &st)? - gaussian_ergotropy(&h, &st)?.ergotropy;
            let beta_star = intrinsic_beta(&h, entropy)?;
            Ok(render(
                cli.format,
                &DeltaTotReportFile {
                    delta_tot: direct,
                    dual_path_gap: (direct - via_difference).abs(),
                    beta_star: beta_star.is_finite().then_some(beta_star),
                },
            ))
        }
        Command::ChannelMin {
            channel,
            hamiltonian,
            tol,
        } => {
            let ch = load::<ChannelFile>(channel, "channel file")?.into_channel(*tol)?;
            let h = load::<HamiltonianFile>(hamiltonian, "Hamiltonian file")?.into_hamiltonian()?;
            let bound = min_output_energy(&ch, &h)?;
            let opt = optimal_input_state(&ch, &h)?;
            let achieved = energy(&h, &ch.apply(&opt)?.moments())?;
            Ok(render(
                cli.format,
                &ChannelMinReportFile {
                    min_output_energy: bound,
                    achieved_output_energy: achieved,
                    optimal_input: StateFile::from_state(&opt),
                },
            ))
        }
        Command::VerifyLemma {
            n,
            trials,
            seed,
            scale,
        } => {
            let (d_h, d_v) = sampled_spectra(*n, *seed);
            let identity = rearrangement_margin(
                &d_h,
                &d_v,
                &nalgebra::DMatrix::identity(2 * n, 2 * n),
            )?;
            let sweep = check_rearrangement_lemma(&d_h, &d_v, *trials, *seed, *scale)?;
            Ok(render(
                cli.format,
                &LemmaReportFile {
                    n: *n,
                    trials: sweep.trials,
                    seed: *seed,
                    scale: *scale,
                    d_h,
                    d_v,
                    identity_margin: identity,
                    worst_margin: sweep.worst_margin,
                    all_hold: sweep.all_hold,
                },
            ))
        }
        Command::VerifyOracle {
            n,
            cases,
            restarts,
            seed,
            tol,
        } => {
            let mut reports = Vec::with_capacity(*cases);
            let mut max_rel: f64 = 0.0;
            for case in 0..*cases {
                let case_seed = derive_seed(*seed, case as u64);
                let h_mat = random_spd_matrix(*n, derive_seed(case_seed, 1), (0.4, 2.2))?;
                let v = random_covariance(*n, derive_seed(case_seed, 2), 3.0)?;
                let h = QuadraticHamiltonian::new(h_mat.clone(), DVector::zeros(2 * n))?;
                let closed = gaussian_passive_energy(&h, &v)?;
                let config = SymplecticSearchConfig {
                    restarts: *restarts,
                    seed: case_seed,
                    ..SymplecticSearchConfig::default()
                };
                let outcome = minimize_passive_energy_numerical(&h_mat, &v, &config)?;
                let gap = outcome.value - closed;
                max_rel = max_rel.max(gap.abs() / closed.abs().max(1e-300));
                reports.push(OracleReportFile {
                    closed_form: closed,
                    numerical: outcome.value,
                    gap,
                    restarts_used: outcome.restarts_used,
                    converged: outcome.converged,
                    seed: case_seed,
                });
            }
            Ok(render(
                cli.format,
                &OracleSweepReportFile {
                    n: *n,
                    seed: *seed,
                    tol: *tol,
                    cases: reports,
                    max_relative_gap: max_rel,
                    all_within_tol: max_rel <= *tol,
                },
            ))
        }
        Command::FockCheck { cutoff } => {
            let base = single_photon_quantities(*cutoff)?;
            let doubled = single_photon_quantities(2 * cutoff)?;
            let gap = base.gap_to(&doubled);
            Ok(render(
                cli.format,
                &FockCheckReportFile {
                    cutoff: *cutoff,
                    truncation_tail: base.tail,
                    energy: base.energy,
                    standard_ergotropy: base.standard_ergotropy,
                    gaussian_ergotropy: base.gaussian_ergotropy,
                    delta: base.delta,
                    mu: base.mu,
                    delta_tot: base.delta_tot,
                    double_cutoff_gap: gap,
                },
            ))
        }
    }
}

/// Deterministic sorted spectra for the lemma sweep.
fn sampled_spectra(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let unit = |stream: u64, j: usize| {
        let x = derive_seed(derive_seed(seed, stream), j as u64);
        (x >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut d_h: Vec<f64> = (0..n).map(|j| 0.2 + 2.0 * unit(1, j)).collect();
    let mut d_v: Vec<f64> = (0..n).map(|j| 1.0 + 3.0 * unit(2, j)).collect();
    d_h.sort_by(|a, b| a.partial_cmp(b).unwrap());
    d_v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (d_h, d_v)
}

struct SinglePhotonQuantities {
    tail: f64,
    energy: f64,
    standard_ergotropy: f64,
    gaussian_ergotropy: f64,
    delta: f64,
    mu: f64,
    delta_tot: f64,
}

impl SinglePhotonQuantities {
    fn gap_to(&self, other: &Self) -> f64 {
        [
            (self.energy - other.energy).abs(),
            (self.standard_ergotropy - other.standard_ergotropy).abs(),
            (self.gaussian_ergotropy - other.gaussian_ergotropy).abs(),
            (self.delta - other.delta).abs(),
            (self.mu - other.mu).abs(),
            (self.delta_tot - other.delta_tot).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn single_photon_quantities(cutoff: usize) -> Result<SinglePhotonQuantities, Error> {
    let ops = build_fock_operators(1, cutoff)?;
    let h_mat = ops.standard_hamiltonian_matrix();
    let h = QuadraticHamiltonian::standard(1)?;
    let rho = fock_state_projector(cutoff, 1)?;
    let moments = fock_moments_and_entropy(&rho, &ops)?;
    Ok(SinglePhotonQuantities {
        tail: ops.truncation_tail(&rho),
        energy: fock_energy(&rho, &h_mat)?,
        standard_ergotropy: fock_standard_ergotropy(&rho, &h_mat)?,
        gaussian_ergotropy: gaussian_ergotropy(&h, &moments)?.ergotropy,
        delta: non_gaussian_work_potential(&rho, &h_mat, &h, &ops)?,
        mu: entropic_nongaussianity_mu(&moments)?,
        delta_tot: delta_tot(&h, &moments)?,
    })
}
