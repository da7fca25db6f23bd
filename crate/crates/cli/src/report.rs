//! JSON report envelope and the conventions block attached to every report.

use std::collections::BTreeMap;

use belldisc_core::claims::ClaimOutcome;
use belldisc_core::{
    CascadeStage, DetectorConfig, DiscriminationReport, OutcomeDistribution, PhotonicState,
    SearchResult,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub polarization_labels: String,
    pub amplitudes: String,
    pub complex_numbers: String,
    pub bell_states: BTreeMap<String, String>,
    pub pp_beam_splitter: String,
    pub pnp_beam_splitter: String,
    pub circuit_order: String,
    pub prior: String,
    pub zero_probability_threshold: f64,
}

impl Conventions {
    pub fn current() -> Self {
        let bell = [
            ("psi-", "(|aH,bV> - |aV,bH>)/sqrt2"),
            ("psi+", "(|aH,bV> + |aV,bH>)/sqrt2"),
            ("phi-", "(|aH,bH> - |aV,bV>)/sqrt2"),
            ("phi+", "(|aH,bH> + |aV,bV>)/sqrt2"),
        ];
        Conventions {
            polarization_labels: "x = H, y = V; mode labels are <spatial><H|V>, spatial 1-based".into(),
            amplitudes: "coefficients of normalized Fock kets prod (a^dag)^n/sqrt(n!) |0>".into(),
            complex_numbers: "[re, im]".into(),
            bell_states: bell.into_iter().map(|(k, v)| (k.into(), v.into())).collect(),
            pp_beam_splitter: "a_iP -> (b_iP - b_jP)/sqrt2, a_jP -> (b_iP + b_jP)/sqrt2 for P in {H, V}".into(),
            pnp_beam_splitter: "H as PP; a_iV -> (b_iV + b_jV)/sqrt2, a_jV -> (-b_iV + b_jV)/sqrt2 \
                 (sign placement calibrated so the PP-PNP Mach-Zehnder maps a_1H a_1V to -c_2H c_1V)"
                .into(),
            circuit_order: "elements act in list order; first element first".into(),
            prior: "uniform 1/4 over the four Bell states".into(),
            zero_probability_threshold: belldisc_core::discrimination::ZERO_TOL,
        }
    }
}

/// Wrapper written around every command's result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Recorded for reproducibility; all current computation is deterministic.
    pub seed: Option<u64>,
    pub conventions: Conventions,
    pub result: T,
}

impl<T> Report<T> {
    pub fn new(command: &str, seed: Option<u64>, result: T) -> Self {
        Report {
            tool: "belldisc".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed,
            conventions: Conventions::current(),
            result,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyResult {
    pub all_passed: bool,
    pub pnp_signs: belldisc_core::PnpSigns,
    pub claims: Vec<ClaimOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateResult {
    pub circuit: belldisc_core::CircuitSpec,
    pub input: PhotonicState,
    pub output: PhotonicState,
    pub detectors: DetectorConfig,
    pub distribution: OutcomeDistribution,
    /// Present when every outcome registers exactly two photons.
    pub split_probability: Option<f64>,
    pub bunch_probability: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminateResult {
    pub circuit: belldisc_core::CircuitSpec,
    pub detectors: DetectorConfig,
    pub input_modes: (usize, usize),
    pub report: DiscriminationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    /// Where the searched family came from.
    pub family: String,
    pub search: SearchResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeResult {
    pub initial: PhotonicState,
    pub stages: Vec<CascadeStage>,
}
