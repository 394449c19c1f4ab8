//! Job-file and report documents.

use std::collections::BTreeMap;

use clap::ValueEnum;
use parastab::exactnum::FieldSpec;
use parastab::fine_moduli::{ChiCertificate, FineInput};
use parastab::fuchsian::{CheckedMode, GradedFactor, InterpTable, ValidationReport, Verdict};
use parastab::logops::FiltrationReport;
use serde::{Deserialize, Serialize};

pub const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum JobKind {
    Stability,
    Hn,
    Jh,
    Git,
    Mu,
    Fine,
    Interp,
    LogopsDemo,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub version: u32,
    pub kind: JobKind,
    pub payload: serde_json::Value,
}

/// Basis rows of a subspace, entries as exact strings.
pub type Rows = Vec<Vec<String>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PuncturePayload {
    pub id: String,
    pub weights: Vec<String>,
    /// Interior flag steps `E_2 ⊋ … ⊋ E_l`, one per weight after the first.
    #[serde(default)]
    pub flag: Vec<Rows>,
    pub residue: Rows,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemPayload {
    #[serde(default)]
    pub field: Option<FieldSpec>,
    #[serde(default = "zero_string")]
    pub lambda: String,
    #[serde(default)]
    pub degree: i64,
    pub punctures: Vec<PuncturePayload>,
    /// Subspaces checked in `candidates` mode.
    #[serde(default)]
    pub candidates: Option<Vec<Rows>>,
    /// Scaling parameters for `interp`.
    #[serde(default)]
    pub mus: Option<Vec<String>>,
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorPayload {
    pub m: usize,
    /// Quotient map rows; give either this or `kernel`.
    #[serde(default)]
    pub phi: Option<Rows>,
    #[serde(default)]
    pub kernel: Option<Rows>,
    pub epsilon: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GitPayload {
    #[serde(default)]
    pub field: Option<FieldSpec>,
    pub n: usize,
    pub factors: Vec<FactorPayload>,
    #[serde(default)]
    pub candidates: Option<Vec<Rows>>,
    /// Run the Hilbert–Mumford cross-check (prime fields only).
    #[serde(default = "yes")]
    pub verify: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OnePsPayload {
    /// Rows of the matrix whose columns are the basis.
    pub basis: Rows,
    pub weights: Vec<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuPayload {
    #[serde(default)]
    pub field: Option<FieldSpec>,
    pub n: usize,
    pub factors: Vec<FactorPayload>,
    pub one_ps: OnePsPayload,
}

pub type FinePayload = FineInput;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogopsPayload {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_degree")]
    pub max_degree: usize,
    #[serde(default = "default_rank")]
    pub max_rank: usize,
}

fn default_trials() -> usize {
    100
}
fn default_degree() -> usize {
    5
}
fn default_rank() -> usize {
    3
}

#[derive(Debug, Serialize)]
pub struct WitnessOut {
    pub basis: Rows,
    pub slope: String,
}

#[derive(Debug, Serialize)]
pub struct StabilityOut {
    pub kind: JobKind,
    pub field: FieldSpec,
    pub verdict: Verdict,
    pub slope: String,
    pub witness: Option<WitnessOut>,
    pub checked_mode: CheckedMode,
    pub relative_to_checked_family: bool,
    pub validation: ValidationReport,
    pub caveat: &'static str,
}

#[derive(Debug, Serialize)]
pub struct FiltrationOut {
    pub kind: JobKind,
    pub field: FieldSpec,
    pub steps: Vec<Rows>,
    pub slopes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graded: Option<Vec<GradedFactor>>,
    pub caveat: &'static str,
}

#[derive(Debug, Serialize)]
pub struct HilbertMumfordOut {
    pub min_mu: Option<String>,
    pub minimizer_basis: Option<Rows>,
    pub minimizer_weights: Option<Vec<i64>>,
    pub agrees: bool,
    pub bases_checked: u64,
}

#[derive(Debug, Serialize)]
pub struct GitOut {
    pub kind: JobKind,
    pub field: FieldSpec,
    pub verdict: Verdict,
    pub witness: Option<Rows>,
    pub margin: Option<String>,
    pub rhs: String,
    pub complete: bool,
    pub hilbert_mumford: Option<HilbertMumfordOut>,
}

#[derive(Debug, Serialize)]
pub struct MuOut {
    pub kind: JobKind,
    pub field: FieldSpec,
    pub per_factor: Vec<i64>,
    pub mu_total: String,
}

#[derive(Debug, Serialize)]
pub struct ChiTermOut {
    pub a: i64,
    pub kappa: BTreeMap<String, usize>,
    pub h: i64,
}

#[derive(Debug, Serialize)]
pub struct CertificateOut {
    pub terms: Vec<ChiTermOut>,
    pub value: i64,
}

impl CertificateOut {
    pub fn new(input: &FineInput, cert: &ChiCertificate) -> Self {
        let terms = cert
            .terms
            .iter()
            .map(|t| ChiTermOut {
                a: t.a,
                kappa: input.punctures.iter().map(|p| p.id.clone()).zip(t.kappa.iter().copied()).collect(),
                h: t.h,
            })
            .collect();
        CertificateOut { terms, value: cert.value }
    }
}

#[derive(Debug, Serialize)]
pub struct FineOut {
    pub kind: JobKind,
    pub fine: bool,
    pub gcd: u64,
    pub certificate: Option<CertificateOut>,
}

#[derive(Debug, Serialize)]
pub struct InterpOut {
    pub kind: JobKind,
    pub field: FieldSpec,
    pub table: InterpTable,
    pub caveat: &'static str,
}

#[derive(Debug, Serialize)]
pub struct LogopsOut {
    pub kind: JobKind,
    pub seed: u64,
    pub trials: usize,
    pub associativity_passed: usize,
    pub lambda_zero_collapse_passed: usize,
    pub residue_factorization_passed: usize,
    pub residue_well_defined_passed: usize,
    pub filtration: FiltrationReport,
}

#[derive(Debug, Serialize)]
pub struct ErrorOut {
    pub error: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub message: String,
}
