//! File schemas and report serialization.
//!
//! All files carry a mandatory `"layout": "xpxp"` field; matrices are
//! row-major arrays of arrays of IEEE-754 doubles. Reports serialize with a
//! fixed key order and every float printed with 17 significant digits, so a
//! given input and seed produce byte-identical output.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::channels::GaussianChannel;
use crate::ergotropy::ErgotropyReport;
use crate::error::{Error, Result};
use crate::states::{GaussianState, QuadraticHamiltonian, StateMoments};
use crate::symplectic::WilliamsonResult;

pub const LAYOUT: &str = "xpxp";

fn require_xpxp(layout: &str, what: &str) -> Result<()> {
    if layout != LAYOUT {
        return Err(Error::InvalidArgument(format!(
            "{what}: layout field must be \"{LAYOUT}\", got \"{layout}\""
        )));
    }
    Ok(())
}

pub fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn rows_to_matrix(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let nrows = rows.len();
    if nrows == 0 {
        return Err(Error::InvalidArgument(format!("{what}: empty matrix")));
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidArgument(format!(
            "{what}: ragged rows in matrix"
        )));
    }
    let mut m = DMatrix::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// input schemas

/// {"layout":"xpxp","n":…,"m":[…],"V":[[…]],"entropy":number|null}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub layout: String,
    pub n: usize,
    pub m: Vec<f64>,
    #[serde(rename = "V")]
    pub v: Vec<Vec<f64>>,
    #[serde(default)]
    pub entropy: Option<f64>,
}

impl StateFile {
    pub fn from_moments(state: &StateMoments) -> Self {
        Self {
            layout: LAYOUT.into(),
            n: state.n(),
            m: state.first_moment().iter().cloned().collect(),
            v: matrix_to_rows(state.covariance()),
            entropy: state.entropy(),
        }
    }

    pub fn from_state(state: &GaussianState) -> Self {
        Self::from_moments(&state.moments())
    }

    pub fn into_moments(self) -> Result<StateMoments> {
        require_xpxp(&self.layout, "state file")?;
        let v = rows_to_matrix(&self.v, "state file")?;
        if v.nrows() != 2 * self.n {
            return Err(Error::InvalidArgument(format!(
                "state file: V is {}x{} but n = {}",
                v.nrows(),
                v.ncols(),
                self.n
            )));
        }
        StateMoments::new(DVector::from_vec(self.m), v, self.entropy)
    }
}

/// {"layout":"xpxp","n":…,"h":[[…]],"r":[…]}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub layout: String,
    pub n: usize,
    pub h: Vec<Vec<f64>>,
    pub r: Vec<f64>,
}

impl HamiltonianFile {
    pub fn from_hamiltonian(h: &QuadraticHamiltonian) -> Self {
        Self {
            layout: LAYOUT.into(),
            n: h.n(),
            h: matrix_to_rows(h.matrix()),
            r: h.center().iter().cloned().collect(),
        }
    }

    pub fn into_hamiltonian(self) -> Result<QuadraticHamiltonian> {
        require_xpxp(&self.layout, "Hamiltonian file")?;
        let h = rows_to_matrix(&self.h, "Hamiltonian file")?;
        if h.nrows() != 2 * self.n {
            return Err(Error::InvalidArgument(format!(
                "Hamiltonian file: h is {}x{} but n = {}",
                h.nrows(),
                h.ncols(),
                self.n
            )));
        }
        QuadraticHamiltonian::new(h, DVector::from_vec(self.r))
    }
}

/// {"layout":"xpxp","n":…,"X":[[…]],"Y":[[…]],"x":[…]}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelFile {
    pub layout: String,
    pub n: usize,
    #[serde(rename = "X")]
    pub x_matrix: Vec<Vec<f64>>,
    #[serde(rename = "Y")]
    pub y_matrix: Vec<Vec<f64>>,
    #[serde(rename = "x")]
    pub displacement: Vec<f64>,
}

impl ChannelFile {
    pub fn from_channel(ch: &GaussianChannel) -> Self {
        Self {
            layout: LAYOUT.into(),
            n: ch.n(),
            x_matrix: matrix_to_rows(ch.x_matrix()),
            y_matrix: matrix_to_rows(ch.y_matrix()),
            displacement: ch.displacement().iter().cloned().collect(),
        }
    }

    pub fn into_channel(self, tol: Option<f64>) -> Result<GaussianChannel> {
        require_xpxp(&self.layout, "channel file")?;
        let x = rows_to_matrix(&self.x_matrix, "channel file X")?;
        let y = rows_to_matrix(&self.y_matrix, "channel file Y")?;
        if x.nrows() != 2 * self.n {
            return Err(Error::InvalidArgument(format!(
                "channel file: X is {}x{} but n = {}",
                x.nrows(),
                x.ncols(),
                self.n
            )));
        }
        GaussianChannel::new(x, y, DVector::from_vec(self.displacement), tol)
    }
}

/// {"layout":"xpxp","matrix":[[…]]} — bare matrix input (Williamson).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub layout: String,
    pub matrix: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        Self {
            layout: LAYOUT.into(),
            matrix: matrix_to_rows(m),
        }
    }

    pub fn into_matrix(self) -> Result<DMatrix<f64>> {
        require_xpxp(&self.layout, "matrix file")?;
        rows_to_matrix(&self.matrix, "matrix file")
    }
}

// ---------------------------------------------------------------------------
// report schemas

/// Full ergotropy report, spectra and optimal unitary included.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErgotropyReportFile {
    pub energy: f64,
    pub passive_energy: f64,
    pub ergotropy: f64,
    pub d_h: Vec<f64>,
    #[serde(rename = "d_V")]
    pub d_v: Vec<f64>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<f64>>,
    pub pre_displacement: Vec<f64>,
    pub post_displacement: Vec<f64>,
}

impl ErgotropyReportFile {
    pub fn from_report(report: &ErgotropyReport) -> Self {
        Self {
            energy: report.energy,
            passive_energy: report.passive_energy,
            ergotropy: report.ergotropy,
            d_h: report.d_h_ascending.clone(),
            d_v: report.d_v_descending.clone(),
            s: matrix_to_rows(report.unitary.s.matrix()),
            pre_displacement: report.unitary.pre_displacement.iter().cloned().collect(),
            post_displacement: report.unitary.post_displacement.iter().cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WilliamsonReportFile {
    pub layout: String,
    pub order: String,
    pub d: Vec<f64>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<f64>>,
    pub symplectic_residual: f64,
    pub reconstruction_residual: f64,
}

impl WilliamsonReportFile {
    pub fn from_result(w: &WilliamsonResult, input: &DMatrix<f64>, order: &str) -> Self {
        Self {
            layout: LAYOUT.into(),
            order: order.into(),
            d: w.d.clone(),
            s: matrix_to_rows(w.s.matrix()),
            symplectic_residual: w.s.residual(),
            reconstruction_residual: (w.reconstruct() - input).norm(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TotalErgotropyReportFile {
    pub total_ergotropy: f64,
    pub energy: f64,
    pub gibbs_energy: f64,
    /// Intrinsic inverse temperature; null at the pure-state sentinel (β* = ∞).
    pub beta_star: Option<f64>,
    pub entropy: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaTotReportFile {
    pub delta_tot: f64,
    /// |closed form − (total − Gaussian)| across the two evaluation routes.
    pub dual_path_gap: f64,
    pub beta_star: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelMinReportFile {
    pub min_output_energy: f64,
    pub achieved_output_energy: f64,
    pub optimal_input: StateFile,
}

/// One closed-form-vs-minimizer comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleReportFile {
    pub closed_form: f64,
    pub numerical: f64,
    pub gap: f64,
    pub restarts_used: usize,
    pub converged: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleSweepReportFile {
    pub n: usize,
    pub seed: u64,
    pub tol: f64,
    pub cases: Vec<OracleReportFile>,
    pub max_relative_gap: f64,
    pub all_within_tol: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LemmaReportFile {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub scale: f64,
    pub d_h: Vec<f64>,
    #[serde(rename = "d_V")]
    pub d_v: Vec<f64>,
    pub identity_margin: f64,
    pub worst_margin: f64,
    pub all_hold: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FockCheckReportFile {
    pub cutoff: usize,
    pub truncation_tail: f64,
    pub energy: f64,
    pub standard_ergotropy: f64,
    pub gaussian_ergotropy: f64,
    pub delta: f64,
    pub mu: f64,
    pub delta_tot: f64,
    /// Largest change in any reported quantity when the cutoff doubles.
    pub double_cutoff_gap: f64,
}

/// Machine-readable error object printed on failed invocations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorReportFile {
    pub error: ErrorBody,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}

impl ErrorReportFile {
    pub fn new(kind: &str, message: String) -> Self {
        Self {
            error: ErrorBody {
                kind: kind.into(),
                message,
            },
        }
    }
}

// ---------------------------------------------------------------------------
// serialization

/// serde_json formatter printing every f64 with 17 significant digits.
struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            // report types keep non-finite values out via Option fields
            write!(writer, "null")
        }
    }
}

/// Fixed-key-order JSON with 17-significant-digit floats.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    value
        .serialize(&mut ser)
        .expect("report serialization is infallible");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

pub fn from_json_str<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::InvalidArgument(format!("{what}: JSON parse error: {e}")))
}

// ---------------------------------------------------------------------------
// CSV

fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

/// Header row + single value row; matrices flatten column-wise.
#[derive(Debug, Default)]
pub struct CsvRecord {
    labels: Vec<String>,
    values: Vec<String>,
}

impl CsvRecord {
    pub fn scalar(&mut self, name: &str, v: f64) -> &mut Self {
        self.labels.push(name.into());
        self.values.push(fmt17(v));
        self
    }

    pub fn optional(&mut self, name: &str, v: Option<f64>) -> &mut Self {
        self.labels.push(name.into());
        self.values.push(v.map(fmt17).unwrap_or_default());
        self
    }

    pub fn integer(&mut self, name: &str, v: u64) -> &mut Self {
        self.labels.push(name.into());
        self.values.push(v.to_string());
        self
    }

    pub fn boolean(&mut self, name: &str, v: bool) -> &mut Self {
        self.labels.push(name.into());
        self.values.push(v.to_string());
        self
    }

    pub fn vector(&mut self, name: &str, v: &[f64]) -> &mut Self {
        for (i, &x) in v.iter().enumerate() {
            self.labels.push(format!("{name}_{i}"));
            self.values.push(fmt17(x));
        }
        self
    }

    /// Column-wise flattening: for each column j, rows i in order.
    pub fn matrix(&mut self, name: &str, rows: &[Vec<f64>]) -> &mut Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for j in 0..ncols {
            for (i, row) in rows.iter().enumerate().take(nrows) {
                self.labels.push(format!("{name}_{i}_{j}"));
                self.values.push(fmt17(row[j]));
            }
        }
        self
    }

    pub fn finish(&self) -> String {
        format!("{}\n{}", self.labels.join(","), self.values.join(","))
    }
}

/// Reports that can flatten into a one-row CSV table.
pub trait ToCsv {
    fn to_csv(&self) -> String;
}

impl ToCsv for StateFile {
    fn to_csv(&self) -> String {
        let mut rec = CsvRecord::default();
        rec.integer("n", self.n as u64)
            .vector("m", &self.m)
            .matrix("V", &self.v)
            .optional("entropy", self.entropy);
        rec.finish()
    }
}

impl ToCsv for ErgotropyReportFile {
    fn to_csv(&self) -> String {
        let mut rec = CsvRecord::default();
        rec.scalar("energy", self.energy)
            .scalar("passive_energy", self.passive_energy)
            .scalar("ergotropy", self.ergotropy)
            .vector("d_h", &self.d_h)
            .vector("d_V", &self.d_v)
            .matrix("S", &self.s)
            .vector("pre_displacement", &self.pre_displacement)
            .vector("post_displacement", &self.post_displacement);
        rec.finish()
    }
}

impl ToCsv for WilliamsonReportFile {
    fn to_csv(&self) -> String {
        let mut rec = CsvRecord::default();
        rec.vector("d", &self.d)
            .matrix("S", &self.s)
            .scalar("symplectic_residual", self.symplectic_residual)
            .scalar("reconstruction_residual", self.reconstruction_residual);
        rec.finish()
    }
}

impl ToCsv for TotalErgotropyReportFile {
    fn to_csv(&self) -> String {
        let mut rec = CsvRecord::default();
        rec.scalar("total_ergotropy", self.total_ergotropy)
            .scalar("energy", self.energy)
            .scalar("gibbs_energy", self.gibbs_energy)
            .optional("beta_star", self.beta_star)
            .scalar("entropy", self.entropy);
        rec.finish()
    }
}

impl ToCsv for DeltaTotReportFile {
    fn to_csv(&self) -> String {
        let mut rec = CsvRecord::default();
        rec.scalar("delta_tot", self.delta_tot)
            .scalar("dual_path_gap", self.dual_path_gap)
            .optional("beta_star", self.beta_star);
        rec.finish()
    }
}

impl ToCsv for ChannelMinReportFile {
    fn to_csv(&self) -> String {
        let mut rec = CsvRecord::default();
        rec.scalar("min_output_energy", self.min_output_energy)
            .scalar("achieved_output_energy", self.achieved_output_energy)
            .integer("optimal_input_n", self.optimal_input.n as u64)
            .vector("optimal_input_m", &self.optimal_input.m)
            .matrix("optimal_input_V", &self.optimal_input.v);
        rec.finish()
    }
}

impl ToCsv for OracleSweepReportFile {
    fn to_csv(&self) -> String {
        let mut rec = CsvRecord::default();
        rec.integer("n", self.n as u64)
            .integer("seed", self.seed)
            .scalar("tol", self.tol)
            .integer("cases", self.cases.len() as u64)
            .scalar("max_relative_gap", self.max_relative_gap)
            .boolean("all_within_tol", self.all_within_tol);
        rec.finish()
    }
}

impl ToCsv for LemmaReportFile {
    fn to_csv(&self) -> String {
        let mut rec = CsvRecord::default();
        rec.integer("n", self.n as u64)
            .integer("trials", self.trials as u64)
            .integer("seed", self.seed)
            .scalar("scale", self.scale)
            .vector("d_h", &self.d_h)
            .vector("d_V", &self.d_v)
            .scalar("identity_margin", self.identity_margin)
            .scalar("worst_margin", self.worst_margin)
            .boolean("all_hold", self.all_hold);
        rec.finish()
    }
}

impl ToCsv for FockCheckReportFile {
    fn to_csv(&self) -> String {
        let mut rec = CsvRecord::default();
        rec.integer("cutoff", self.cutoff as u64)
            .scalar("truncation_tail", self.truncation_tail)
            .scalar("energy", self.energy)
            .scalar("standard_ergotropy", self.standard_ergotropy)
            .scalar("gaussian_ergotropy", self.gaussian_ergotropy)
            .scalar("delta", self.delta)
            .scalar("mu", self.mu)
            .scalar("delta_tot", self.delta_tot)
            .scalar("double_cutoff_gap", self.double_cutoff_gap);
        rec.finish()
    }
}
