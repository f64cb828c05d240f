//! End-to-end checks of the `gerg` binary: exit codes, schema round-trips,
//! and byte-level determinism of the reports.

use std::path::PathBuf;
use std::process::{Command, Output};

use gaussian_ergotropy::io::{
    ChannelMinReportFile, DeltaTotReportFile, ErgotropyReportFile, ErrorReportFile,
    FockCheckReportFile, LemmaReportFile, OracleSweepReportFile, StateFile,
    TotalErgotropyReportFile, WilliamsonReportFile,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gerg"))
}

fn write_fixture(dir: &std::path::Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

struct Fixtures {
    _dir: tempfile::TempDir,
    h0: PathBuf,
    squeezed: PathBuf,
    fock1: PathBuf,
    attenuator: PathBuf,
    spd: PathBuf,
}

fn fixtures() -> Fixtures {
    let dir = tempfile::tempdir().unwrap();
    let h0 = write_fixture(
        dir.path(),
        "h0.json",
        r#"{"layout":"xpxp","n":1,"h":[[1.0,0.0],[0.0,1.0]],"r":[0.0,0.0]}"#,
    );
    let squeezed = write_fixture(
        dir.path(),
        "squeezed.json",
        r#"{"layout":"xpxp","n":1,"m":[0.0,0.0],"V":[[4.0,0.0],[0.0,0.25]],"entropy":null}"#,
    );
    let fock1 = write_fixture(
        dir.path(),
        "fock1.json",
        r#"{"layout":"xpxp","n":1,"m":[0.0,0.0],"V":[[3.0,0.0],[0.0,3.0]],"entropy":0.0}"#,
    );
    let attenuator = write_fixture(
        dir.path(),
        "att.json",
        r#"{"layout":"xpxp","n":1,
            "X":[[0.7745966692414834,0.0],[0.0,0.7745966692414834]],
            "Y":[[0.4,0.0],[0.0,0.4]],
            "x":[0.0,0.0]}"#,
    );
    let spd = write_fixture(
        dir.path(),
        "spd.json",
        r#"{"layout":"xpxp","matrix":[[2.0,0.0],[0.0,8.0]]}"#,
    );
    Fixtures {
        _dir: dir,
        h0,
        squeezed,
        fock1,
        attenuator,
        spd,
    }
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn ergotropy_of_the_squeezed_example() {
    let fx = fixtures();
    let out = run(&[
        "ergotropy",
        "--hamiltonian",
        fx.h0.to_str().unwrap(),
        "--state",
        fx.squeezed.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: ErgotropyReportFile = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!((report.ergotropy - 0.5625).abs() < 1e-12);
    assert!((report.energy - 1.0625).abs() < 1e-12);
    assert!((report.passive_energy - 0.5).abs() < 1e-12);
}

#[test]
fn channel_min_on_the_attenuator() {
    let fx = fixtures();
    let out = run(&[
        "channel-min",
        "--channel",
        fx.attenuator.to_str().unwrap(),
        "--hamiltonian",
        fx.h0.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: ChannelMinReportFile = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!((report.min_output_energy - 0.5).abs() < 1e-10);
    assert!((report.achieved_output_energy - 0.5).abs() < 1e-8);
    let opt = report.optimal_input.into_moments().unwrap();
    assert!(opt.first_moment().norm() < 1e-12);
}

#[test]
fn verify_lemma_holds() {
    let out = run(&["verify-lemma", "--n", "3", "--trials", "1000", "--seed", "1"]);
    assert!(out.status.success());
    let report: LemmaReportFile = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(report.all_hold);
    assert_eq!(report.identity_margin, 0.0);
    assert!(report.worst_margin >= 0.0);
}

#[test]
fn verify_oracle_small_sweep() {
    let out = run(&[
        "verify-oracle",
        "--n",
        "2",
        "--cases",
        "3",
        "--restarts",
        "8",
        "--seed",
        "5",
    ]);
    assert!(out.status.success());
    let report: OracleSweepReportFile = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(report.all_within_tol, "max gap {}", report.max_relative_gap);
    assert_eq!(report.cases.len(), 3);
    for case in &report.cases {
        assert!(case.gap >= -1e-9);
    }
}

#[test]
fn fock_check_reproduces_the_photon_chain() {
    let out = run(&["fock-check", "--cutoff", "32"]);
    assert!(out.status.success());
    let report: FockCheckReportFile = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!((report.energy - 1.5).abs() < 1e-9);
    assert!((report.standard_ergotropy - 1.0).abs() < 1e-9);
    assert!(report.gaussian_ergotropy.abs() < 1e-9);
    assert!((report.delta - 1.0).abs() < 1e-9);
    assert!((report.mu - 2.0 * std::f64::consts::LN_2).abs() < 1e-6);
    assert!((report.delta_tot - 1.0).abs() < 1e-6);
    assert!(report.double_cutoff_gap <= 1e-6);
}

#[test]
fn thermal_total_ergotropy_and_delta_tot() {
    let fx = fixtures();
    let thermal = run(&[
        "thermal",
        "--hamiltonian",
        fx.h0.to_str().unwrap(),
        "--beta",
        "0.6931471805599453",
    ]);
    assert!(thermal.status.success());
    let state: StateFile = serde_json::from_str(&stdout_of(&thermal)).unwrap();
    assert!((state.v[0][0] - 3.0).abs() < 1e-10);

    let total = run(&[
        "total-ergotropy",
        "--hamiltonian",
        fx.h0.to_str().unwrap(),
        "--state",
        fx.fock1.to_str().unwrap(),
    ]);
    assert!(total.status.success());
    let report: TotalErgotropyReportFile = serde_json::from_str(&stdout_of(&total)).unwrap();
    assert!((report.total_ergotropy - 1.0).abs() < 1e-9);
    assert!(report.beta_star.is_none(), "pure state has infinite beta*");

    let dt = run(&[
        "delta-tot",
        "--hamiltonian",
        fx.h0.to_str().unwrap(),
        "--state",
        fx.fock1.to_str().unwrap(),
    ]);
    assert!(dt.status.success());
    let report: DeltaTotReportFile = serde_json::from_str(&stdout_of(&dt)).unwrap();
    assert!((report.delta_tot - 1.0).abs() < 1e-9);
    assert!(report.dual_path_gap <= 1e-8);
}

#[test]
fn passive_state_and_williamson_reports() {
    let fx = fixtures();
    let passive = run(&[
        "passive-state",
        "--hamiltonian",
        fx.h0.to_str().unwrap(),
        "--state",
        fx.squeezed.to_str().unwrap(),
    ]);
    assert!(passive.status.success());
    let state: StateFile = serde_json::from_str(&stdout_of(&passive)).unwrap();
    let moments = state.into_moments().unwrap();
    assert!((moments.covariance() - nalgebra::DMatrix::identity(2, 2)).norm() < 1e-8);

    let w = run(&[
        "williamson",
        "--matrix",
        fx.spd.to_str().unwrap(),
        "--order",
        "descending",
    ]);
    assert!(w.status.success());
    let report: WilliamsonReportFile = serde_json::from_str(&stdout_of(&w)).unwrap();
    assert_eq!(report.order, "descending");
    assert!((report.d[0] - 4.0).abs() < 1e-10);
    assert!(report.symplectic_residual < 1e-10);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let fx = fixtures();
    let args = [
        "ergotropy",
        "--hamiltonian",
        fx.h0.to_str().unwrap(),
        "--state",
        fx.squeezed.to_str().unwrap(),
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);

    let sweep_args = [
        "verify-oracle",
        "--n",
        "1",
        "--cases",
        "2",
        "--restarts",
        "4",
        "--seed",
        "11",
    ];
    let a = run(&sweep_args);
    let b = run(&sweep_args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_format_emits_header_and_row() {
    let fx = fixtures();
    let out = run(&[
        "--format",
        "csv",
        "ergotropy",
        "--hamiltonian",
        fx.h0.to_str().unwrap(),
        "--state",
        fx.squeezed.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("energy,passive_energy,ergotropy"));
    // matrices flatten column-wise: S_0_0 then S_1_0
    let s00 = lines[0].split(',').position(|l| l == "S_0_0").unwrap();
    let s10 = lines[0].split(',').position(|l| l == "S_1_0").unwrap();
    assert_eq!(s10, s00 + 1);
    assert_eq!(
        lines[0].split(',').count(),
        lines[1].split(',').count(),
        "header and row must align"
    );
}

#[test]
fn validation_failures_exit_2_with_error_object() {
    let fx = fixtures();
    let dir = tempfile::tempdir().unwrap();
    // wrong layout field
    let bad_layout = write_fixture(
        dir.path(),
        "bad_layout.json",
        r#"{"layout":"xxpp","n":1,"m":[0.0,0.0],"V":[[1.0,0.0],[0.0,1.0]],"entropy":null}"#,
    );
    let out = run(&[
        "ergotropy",
        "--hamiltonian",
        fx.h0.to_str().unwrap(),
        "--state",
        bad_layout.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err: ErrorReportFile = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(err.error.kind, "invalid-argument");

    // sub-uncertainty covariance
    let bad_cov = write_fixture(
        dir.path(),
        "bad_cov.json",
        r#"{"layout":"xpxp","n":1,"m":[0.0,0.0],"V":[[0.5,0.0],[0.0,0.5]],"entropy":null}"#,
    );
    let out = run(&[
        "ergotropy",
        "--hamiltonian",
        fx.h0.to_str().unwrap(),
        "--state",
        bad_cov.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    // invalid channel: attenuation without noise
    let bad_channel = write_fixture(
        dir.path(),
        "bad_channel.json",
        r#"{"layout":"xpxp","n":1,
            "X":[[0.7,0.0],[0.0,0.7]],
            "Y":[[0.0,0.0],[0.0,0.0]],
            "x":[0.0,0.0]}"#,
    );
    let out = run(&[
        "channel-min",
        "--channel",
        bad_channel.to_str().unwrap(),
        "--hamiltonian",
        fx.h0.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err: ErrorReportFile = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(err.error.kind, "invalid-channel");

    // missing entropy for total-ergotropy
    let out = run(&[
        "total-ergotropy",
        "--hamiltonian",
        fx.h0.to_str().unwrap(),
        "--state",
        fx.squeezed.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    // missing file
    let out = run(&[
        "ergotropy",
        "--hamiltonian",
        fx.h0.to_str().unwrap(),
        "--state",
        "/nonexistent/state.json",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_command_exits_64_with_usage() {
    let out = run(&["not-a-command"]);
    assert_eq!(out.status.code(), Some(64));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.to_lowercase().contains("usage"), "stderr: {stderr}");
}

#[test]
fn help_exits_zero_and_documents_units() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("nats"));
    assert!(text.contains("xpxp"));
}
